//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real rotation, so the composite
//! `U = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` annihilates the pivot in
//! `U^H A U`. Sweeps stop once the off-diagonal Frobenius mass falls below
//! `1e-14 · ‖A‖_F`.

use num_complex::Complex64;

const OFF_DIAGONAL_RELATIVE: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching unit eigenvectors stored as
/// the columns of a row-major `n × n` matrix.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub dimension: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
}

impl SpectralDecomposition {
    /// `V · diag(f(λ)) · V^H`, made exactly Hermitian.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
        let n = self.dimension;
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &w) in mapped.iter().enumerate() {
                    if w != 0.0 {
                        acc += self.vectors[i * n + k] * self.vectors[j * n + k].conj() * w;
                    }
                }
                if i == j {
                    out[i * n + i] = Complex64::new(acc.re, 0.0);
                } else {
                    out[i * n + j] = acc;
                    out[j * n + i] = acc.conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Vec<Complex64> {
        self.reassemble(|l| l)
    }
}

fn frobenius(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalises the Hermitian part of `a` (an `n × n` row-major matrix).
pub fn jacobi_eigh(a: &[Complex64], n: usize) -> SpectralDecomposition {
    assert_eq!(a.len(), n * n, "matrix storage does not match dimension");
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let mut m = vec![zero; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
        }
        m[i * n + i].im = 0.0;
    }
    let mut v = vec![zero; n * n];
    for i in 0..n {
        v[i * n + i] = one;
    }

    let scale = frobenius(&m);
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal(&m, n) <= OFF_DIAGONAL_RELATIVE * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, n, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[x * n + x].re.total_cmp(&m[y * n + y].re));
    let values = order.iter().map(|&k| m[k * n + k].re).collect();
    let mut vectors = vec![zero; n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + col] = v[i * n + k];
        }
    }
    SpectralDecomposition {
        dimension: n,
        values,
        vectors,
    }
}

fn rotate(m: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    let magnitude = apq.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = apq / magnitude;
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;

    let theta = (aqq - app) / (2.0 * magnitude);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    // M <- M U
    for k in 0..n {
        let mkp = m[k * n + p];
        let mkq = m[k * n + q];
        m[k * n + p] = mkp * u_pp + mkq * u_qp;
        m[k * n + q] = mkp * u_pq + mkq * u_qq;
    }
    // M <- U^H M
    for k in 0..n {
        let mpk = m[p * n + k];
        let mqk = m[q * n + k];
        m[p * n + k] = u_pp.conj() * mpk + u_qp.conj() * mqk;
        m[q * n + k] = u_pq.conj() * mpk + u_qq.conj() * mqk;
    }
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
    m[p * n + p].im = 0.0;
    m[q * n + q].im = 0.0;

    // V <- V U
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * u_pp + vkq * u_qp;
        v[k * n + q] = vkp * u_pq + vkq * u_qq;
    }
}
