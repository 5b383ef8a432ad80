//! Random elements for sampling-based checks.

use num_complex::Complex64;
use rand::Rng;

use super::{AlgebraDescriptor, AlgebraElement, AlgebraKind};

/// Uniform entries in `[-scale, scale]` (complex for matrices); generally
/// neither Hermitian nor positive on the matrix algebra.
pub fn element<R: Rng + ?Sized>(
    algebra: &AlgebraDescriptor,
    rng: &mut R,
    scale: f64,
) -> AlgebraElement {
    match algebra.kind() {
        AlgebraKind::DiagonalReal(m) => algebra
            .diag((0..m).map(|_| rng.random_range(-scale..=scale)).collect())
            .expect("finite entries"),
        AlgebraKind::HermitianMatrix(n) => algebra
            .matrix(
                (0..n * n)
                    .map(|_| {
                        Complex64::new(
                            rng.random_range(-scale..=scale),
                            rng.random_range(-scale..=scale),
                        )
                    })
                    .collect(),
            )
            .expect("finite entries"),
    }
}

pub fn hermitian<R: Rng + ?Sized>(
    algebra: &AlgebraDescriptor,
    rng: &mut R,
    scale: f64,
) -> AlgebraElement {
    element(algebra, rng, scale).hermitian_part()
}

/// `B B* / n` with uniform `B`, plus `floor · I`. Spectrum lies in
/// `[floor, floor + 2·scale²]`.
pub fn positive<R: Rng + ?Sized>(
    algebra: &AlgebraDescriptor,
    rng: &mut R,
    scale: f64,
    floor: f64,
) -> AlgebraElement {
    match algebra.kind() {
        AlgebraKind::DiagonalReal(m) => algebra
            .diag(
                (0..m)
                    .map(|_| floor + rng.random_range(0.0..=scale * scale))
                    .collect(),
            )
            .expect("finite entries"),
        AlgebraKind::HermitianMatrix(n) => {
            let b = element(algebra, rng, scale);
            let gram = b.mul(&b.adjoint()).expect("same algebra");
            gram.hermitian_part()
                .scale(1.0 / n as f64)
                .add(&algebra.scalar(floor))
                .expect("same algebra")
        }
    }
}
