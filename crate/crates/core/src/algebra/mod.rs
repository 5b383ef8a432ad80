//! The two concrete C*-algebras distances live in.
//!
//! * `DiagonalReal(m)`: real `m`-tuples with componentwise product, identity
//!   involution and the max-modulus norm. Commutative.
//! * `HermitianMatrix(n)`: complex `n × n` matrices with the matrix product,
//!   conjugate transpose and the operator 2-norm. Elements need not be
//!   Hermitian; spectral operations check self-adjointness first.
//!
//! Positivity and the order `a ⪯ b ⟺ b − a ⪰ θ` are decided on the spectrum
//! with a relative tolerance carried by the descriptor.

mod eigen;
pub mod random;

use num_complex::Complex64;

pub use eigen::{jacobi_eigh, SpectralDecomposition};

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
const MAX_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    DiagonalReal(usize),
    HermitianMatrix(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraDescriptor {
    kind: AlgebraKind,
    positivity_tolerance: f64,
    hermitian_tolerance: f64,
}

impl AlgebraDescriptor {
    pub fn new(kind: AlgebraKind) -> Result<Self> {
        let dim = match kind {
            AlgebraKind::DiagonalReal(m) => m,
            AlgebraKind::HermitianMatrix(n) => n,
        };
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be at least 1".into()));
        }
        Ok(Self {
            kind,
            positivity_tolerance: DEFAULT_TOLERANCE,
            hermitian_tolerance: DEFAULT_TOLERANCE,
        })
    }

    /// Real diagonal algebra of dimension `m`.
    ///
    /// Panics if `m == 0`.
    pub fn diagonal(m: usize) -> Self {
        Self::new(AlgebraKind::DiagonalReal(m)).expect("dimension must be at least 1")
    }

    /// Complex `n × n` matrix algebra.
    ///
    /// Panics if `n == 0`.
    pub fn hermitian(n: usize) -> Self {
        Self::new(AlgebraKind::HermitianMatrix(n)).expect("dimension must be at least 1")
    }

    pub fn with_tolerances(mut self, positivity: f64, hermitian: f64) -> Result<Self> {
        for (name, tol) in [("positivity", positivity), ("hermitian", hermitian)] {
            if !(0.0..=MAX_TOLERANCE).contains(&tol) {
                return Err(Error::InvalidAlgebra(format!(
                    "{name} tolerance {tol} outside [0, {MAX_TOLERANCE}]"
                )));
            }
        }
        self.positivity_tolerance = positivity;
        self.hermitian_tolerance = hermitian;
        Ok(self)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn positivity_tolerance(&self) -> f64 {
        self.positivity_tolerance
    }

    pub fn hermitian_tolerance(&self) -> f64 {
        self.hermitian_tolerance
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            AlgebraKind::DiagonalReal(m) => m,
            AlgebraKind::HermitianMatrix(n) => n,
        }
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self.kind, AlgebraKind::DiagonalReal(_))
    }

    /// θ
    pub fn zero(&self) -> AlgebraElement {
        self.scalar(0.0)
    }

    /// I
    pub fn unit(&self) -> AlgebraElement {
        self.scalar(1.0)
    }

    /// `r · I`.
    pub fn scalar(&self, r: f64) -> AlgebraElement {
        let data = match self.kind {
            AlgebraKind::DiagonalReal(m) => Data::Diagonal(vec![r; m]),
            AlgebraKind::HermitianMatrix(n) => {
                let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
                for i in 0..n {
                    entries[i * n + i] = Complex64::new(r, 0.0);
                }
                Data::Matrix(entries)
            }
        };
        AlgebraElement {
            descriptor: *self,
            data,
        }
    }

    pub fn diag(&self, values: Vec<f64>) -> Result<AlgebraElement> {
        match self.kind {
            AlgebraKind::DiagonalReal(m) => {
                if values.len() != m {
                    return Err(Error::ShapeMismatch {
                        expected: m,
                        got: values.len(),
                    });
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite);
                }
                Ok(AlgebraElement {
                    descriptor: *self,
                    data: Data::Diagonal(values),
                })
            }
            AlgebraKind::HermitianMatrix(n) => {
                if values.len() != n {
                    return Err(Error::ShapeMismatch {
                        expected: n,
                        got: values.len(),
                    });
                }
                let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
                for (i, v) in values.into_iter().enumerate() {
                    entries[i * n + i] = Complex64::new(v, 0.0);
                }
                self.matrix(entries)
            }
        }
    }

    /// Row-major complex matrix.
    pub fn matrix(&self, entries: Vec<Complex64>) -> Result<AlgebraElement> {
        let AlgebraKind::HermitianMatrix(n) = self.kind else {
            return Err(Error::InvalidAlgebra(
                "matrix data given to a diagonal algebra".into(),
            ));
        };
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(AlgebraElement {
            descriptor: *self,
            data: Data::Matrix(entries),
        })
    }

    pub fn real_matrix(&self, rows: &[Vec<f64>]) -> Result<AlgebraElement> {
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect::<Vec<_>>();
        let n = self.dimension();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        self.matrix(entries)
    }

    fn check_same(&self, other: &AlgebraDescriptor) -> Result<()> {
        if self != other {
            return Err(Error::DescriptorMismatch {
                left: *self,
                right: *other,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Data {
    Diagonal(Vec<f64>),
    Matrix(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    descriptor: AlgebraDescriptor,
    data: Data,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    IllPosed,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::IllPosed => "ill-posed",
        }
    }
}

/// Outcome of `a ⪯ b`.
///
/// `witness_eigenvalue` is the smallest eigenvalue of the Hermitian part of
/// `b − a` (the order slack); `hermitian_defect` the relative distance of
/// `b − a` from self-adjointness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderResult {
    pub verdict: Verdict,
    pub witness_eigenvalue: Option<f64>,
    pub hermitian_defect: Option<f64>,
}

impl OrderResult {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

impl AlgebraElement {
    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn diagonal_entries(&self) -> Option<&[f64]> {
        match &self.data {
            Data::Diagonal(v) => Some(v),
            Data::Matrix(_) => None,
        }
    }

    pub fn matrix_entries(&self) -> Option<&[Complex64]> {
        match &self.data {
            Data::Diagonal(_) => None,
            Data::Matrix(m) => Some(m),
        }
    }

    /// Flat real view: diagonal entries, or interleaved `re, im` pairs of a
    /// row-major matrix.
    pub fn components(&self) -> Vec<f64> {
        match &self.data {
            Data::Diagonal(v) => v.clone(),
            Data::Matrix(m) => m.iter().flat_map(|z| [z.re, z.im]).collect(),
        }
    }

    /// The involution `a ↦ a*`.
    pub fn adjoint(&self) -> Self {
        let data = match &self.data {
            Data::Diagonal(v) => Data::Diagonal(v.clone()),
            Data::Matrix(m) => {
                let n = self.descriptor.dimension();
                let mut out = m.clone();
                for i in 0..n {
                    for j in 0..n {
                        out[j * n + i] = m[i * n + j].conj();
                    }
                }
                Data::Matrix(out)
            }
        };
        Self {
            descriptor: self.descriptor,
            data,
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        real: impl Fn(f64, f64) -> f64,
        complex: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        let data = match (&self.data, &other.data) {
            (Data::Diagonal(a), Data::Diagonal(b)) => {
                Data::Diagonal(a.iter().zip(b).map(|(&x, &y)| real(x, y)).collect())
            }
            (Data::Matrix(a), Data::Matrix(b)) => {
                Data::Matrix(a.iter().zip(b).map(|(&x, &y)| complex(x, y)).collect())
            }
            _ => unreachable!("descriptor equality implies matching storage"),
        };
        Ok(Self {
            descriptor: self.descriptor,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y, |x, y| x - y)
    }

    pub fn scale(&self, r: f64) -> Self {
        let data = match &self.data {
            Data::Diagonal(v) => Data::Diagonal(v.iter().map(|x| x * r).collect()),
            Data::Matrix(m) => Data::Matrix(m.iter().map(|z| z * r).collect()),
        };
        Self {
            descriptor: self.descriptor,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        let data = match (&self.data, &other.data) {
            (Data::Diagonal(a), Data::Diagonal(b)) => {
                Data::Diagonal(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (Data::Matrix(a), Data::Matrix(b)) => {
                Data::Matrix(matmul(a, b, self.descriptor.dimension()))
            }
            _ => unreachable!("descriptor equality implies matching storage"),
        };
        Ok(Self {
            descriptor: self.descriptor,
            data,
        })
    }

    /// `(a + a*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        match &self.data {
            Data::Diagonal(_) => self.clone(),
            Data::Matrix(_) => {
                let adj = self.adjoint();
                self.add(&adj).expect("same descriptor").scale(0.5)
            }
        }
    }

    /// `‖a − a*‖_F / max(1, ‖a‖_F)`; always zero on the diagonal algebra.
    pub fn hermitian_defect(&self) -> f64 {
        match &self.data {
            Data::Diagonal(_) => 0.0,
            Data::Matrix(m) => {
                let n = self.descriptor.dimension();
                let mut defect = 0.0;
                let mut size = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        defect += (m[i * n + j] - m[j * n + i].conj()).norm_sqr();
                        size += m[i * n + j].norm_sqr();
                    }
                }
                defect.sqrt() / size.sqrt().max(1.0)
            }
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= self.descriptor.hermitian_tolerance
    }

    /// Max modulus on the diagonal algebra, largest singular value on matrices.
    pub fn norm(&self) -> f64 {
        match &self.data {
            Data::Diagonal(v) => v.iter().fold(0.0, |acc, x| acc.max(x.abs())),
            Data::Matrix(m) => {
                let n = self.descriptor.dimension();
                if self.hermitian_defect() == 0.0 {
                    let eig = jacobi_eigh(m, n);
                    eig.values.iter().fold(0.0, |acc, x| acc.max(x.abs()))
                } else {
                    let adj = self.adjoint();
                    let gram = matmul(adj.matrix_entries().unwrap(), m, n);
                    let eig = jacobi_eigh(&gram, n);
                    eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
                }
            }
        }
    }

    /// Eigen-decomposition of a (numerically) Hermitian element.
    pub fn spectral_decomposition(&self) -> Result<SpectralDecomposition> {
        let n = self.descriptor.dimension();
        match &self.data {
            Data::Diagonal(v) => {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
                let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
                for (col, &k) in order.iter().enumerate() {
                    vectors[k * n + col] = Complex64::new(1.0, 0.0);
                }
                Ok(SpectralDecomposition {
                    dimension: n,
                    values: order.iter().map(|&k| v[k]).collect(),
                    vectors,
                })
            }
            Data::Matrix(m) => {
                let defect = self.hermitian_defect();
                if defect > self.descriptor.hermitian_tolerance {
                    return Err(Error::NotHermitian { defect });
                }
                Ok(jacobi_eigh(m, n))
            }
        }
    }

    /// σ(a), ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        match &self.data {
            Data::Diagonal(v) => {
                let mut s = v.clone();
                s.sort_by(f64::total_cmp);
                Ok(s)
            }
            Data::Matrix(_) => Ok(self.spectral_decomposition()?.values),
        }
    }

    fn extreme_eigenvalues(&self) -> (f64, f64) {
        let spectrum = match &self.data {
            Data::Diagonal(v) => v.clone(),
            Data::Matrix(m) => jacobi_eigh(m, self.descriptor.dimension()).values,
        };
        let lo = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = spectrum.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    fn positivity_floor(&self, size: f64) -> f64 {
        -self.descriptor.positivity_tolerance * size.max(1.0)
    }

    /// Hermitian within tolerance and `min σ(a) ≥ −tol · max(1, ‖a‖)`.
    pub fn is_positive(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        let (lo, hi) = self.extreme_eigenvalues();
        lo >= self.positivity_floor(lo.abs().max(hi.abs()))
    }

    /// `self ⪯ other`.
    pub fn leq(&self, other: &Self) -> Result<OrderResult> {
        let diff = other.sub(self)?;
        let defect = diff.hermitian_defect();
        let (lo, hi) = diff.extreme_eigenvalues();
        let verdict = if defect > self.descriptor.hermitian_tolerance {
            Verdict::IllPosed
        } else if lo >= diff.positivity_floor(lo.abs().max(hi.abs())) {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        Ok(OrderResult {
            verdict,
            witness_eigenvalue: Some(lo),
            hermitian_defect: Some(defect),
        })
    }

    /// `f` applied through the spectral calculus of a Hermitian element.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        match &self.data {
            Data::Diagonal(v) => self.descriptor.diag(v.iter().map(|&x| f(x)).collect()),
            Data::Matrix(_) => {
                let eig = self.spectral_decomposition()?;
                self.descriptor.matrix(eig.reassemble(f))
            }
        }
    }

    /// `a^β` for positive `a`; eigenvalues inside the tolerance band below zero
    /// are clamped to zero first, and `0^β = 0`.
    pub fn frac_power(&self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidExponent(beta));
        }
        if !self.is_positive() {
            let min_eigenvalue = if self.is_hermitian() {
                self.extreme_eigenvalues().0
            } else {
                f64::NAN
            };
            return Err(Error::NotPositive { min_eigenvalue });
        }
        self.apply_spectral(|l| if l <= 0.0 { 0.0 } else { l.powf(beta) })
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.frac_power(0.5)
    }
}

fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn d2() -> AlgebraDescriptor {
        AlgebraDescriptor::diagonal(2)
    }

    fn h2() -> AlgebraDescriptor {
        AlgebraDescriptor::hermitian(2)
    }

    fn sym(a: f64, b: f64, d: f64) -> AlgebraElement {
        h2().real_matrix(&[vec![a, b], vec![b, d]]).unwrap()
    }

    #[test]
    fn descriptor_validation() {
        assert!(AlgebraDescriptor::new(AlgebraKind::DiagonalReal(0)).is_err());
        assert!(d2().with_tolerances(1e-5, 0.0).is_err());
        assert!(d2().with_tolerances(1e-6, 0.0).is_ok());
        assert!(d2().diag(vec![1.0]).is_err());
        assert!(matches!(d2().diag(vec![1.0, f64::NAN]), Err(Error::NonFinite)));
    }

    #[test]
    fn involution_examples() {
        let a = d2().diag(vec![1.0, -2.0]).unwrap();
        assert_eq!(a.adjoint(), a);

        let nil = h2()
            .matrix(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let expected = h2()
            .matrix(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)])
            .unwrap();
        assert_eq!(nil.adjoint(), expected);
        assert_eq!(nil.adjoint().adjoint(), nil);
    }

    #[test]
    fn multiply_examples() {
        let a = d2().diag(vec![2.0, 3.0]).unwrap();
        let b = d2().diag(vec![4.0, 5.0]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), d2().diag(vec![8.0, 15.0]).unwrap());

        let m = sym(1.0, 2.0, 3.0);
        assert_eq!(m.mul(&h2().unit()).unwrap(), m);
        assert!(matches!(
            a.mul(&AlgebraDescriptor::diagonal(3).unit()),
            Err(Error::DescriptorMismatch { .. })
        ));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(d2().diag(vec![3.0, -4.0]).unwrap().norm(), 4.0);
        assert!((sym(2.0, 1.0, 2.0).norm() - 3.0).abs() < 1e-14);
        assert_eq!(h2().zero().norm(), 0.0);
        // nilpotent [[0,i],[0,0]] has a single nonzero singular value 1
        let nil = h2()
            .matrix(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!((nil.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(
            d2().diag(vec![5.0, 1.0]).unwrap().spectrum().unwrap(),
            vec![1.0, 5.0]
        );
        let s = sym(2.0, 1.0, 2.0).spectrum().unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
        let nil = h2()
            .matrix(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(nil.spectrum(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn positivity_examples() {
        assert!(d2().zero().is_positive());
        assert!(h2().zero().is_positive());
        assert!(sym(2.0, 1.0, 2.0).is_positive());
        assert!(!d2().diag(vec![1.0, -0.5]).unwrap().is_positive());
        // [[1,2],[2,1]] has eigenvalue -1
        assert!(!sym(1.0, 2.0, 1.0).is_positive());
        // tiny negative round-off is tolerated
        assert!(d2().diag(vec![1.0, -1e-13]).unwrap().is_positive());
    }

    #[test]
    fn order_examples() {
        let r = d2().zero().leq(&d2().unit()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);

        let a = d2().diag(vec![2.0, 0.0]).unwrap();
        let b = d2().diag(vec![1.0, 1.0]).unwrap();
        let r = a.leq(&b).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witness_eigenvalue, Some(-1.0));

        let m = sym(3.0, -1.0, 0.5);
        assert!(m.leq(&m).unwrap().holds());

        let nil = h2()
            .matrix(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let r = h2().zero().leq(&nil).unwrap();
        assert_eq!(r.verdict, Verdict::IllPosed);
        assert!(r.hermitian_defect.unwrap() > 0.1);
    }

    #[test]
    fn frac_power_examples() {
        let a = d2().diag(vec![4.0, 9.0]).unwrap();
        assert_eq!(a.frac_power(0.5).unwrap(), d2().diag(vec![2.0, 3.0]).unwrap());
        for beta in [0.1, 0.5, 1.0] {
            let p = h2().unit().frac_power(beta).unwrap();
            assert!(p.sub(&h2().unit()).unwrap().norm() < 1e-15);
        }
        // 0^β = 0, and a slightly negative round-off eigenvalue is clamped
        let z = d2().diag(vec![0.0, -1e-14]).unwrap().frac_power(0.3).unwrap();
        assert_eq!(z, d2().zero());
        assert!(matches!(
            d2().diag(vec![1.0, -1.0]).unwrap().frac_power(0.5),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(a.frac_power(0.0), Err(Error::InvalidExponent(_))));
        let m = sym(2.0, 1.0, 2.0);
        let back = m.frac_power(1.0).unwrap();
        assert!(back.sub(&m).unwrap().norm() <= 1e-12 * m.norm());
    }

    #[test]
    fn linear_ops() {
        let m = sym(1.0, 2.0, 3.0);
        assert_eq!(h2().zero().add(&m).unwrap(), m);
        assert_eq!(h2().unit().scale(0.0), h2().zero());
        assert_eq!(m.sub(&m).unwrap(), h2().zero());
    }
}
