//! Small helpers for complex coordinate vectors.

use crate::scalar::Real;
use num_complex::Complex;

/// Hermitian inner product, conjugate-linear in the first argument.
pub fn inner<T: Real>(u: &[Complex<T>], w: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(u.len(), w.len());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, b) in u.iter().zip(w) {
        acc = acc + a.conj() * *b;
    }
    acc
}

/// Squared Euclidean norm.
pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b)
}

/// Euclidean norm.
pub fn norm<T: Real>(v: &[Complex<T>]) -> T {
    norm_sqr(v).sqrt()
}

/// Scales `v` to unit norm; returns `None` for the zero vector.
pub fn normalized<T: Real>(v: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    let n = norm(v);
    if n == T::zero() {
        return None;
    }
    Some(v.iter().map(|z| *z / n).collect())
}

/// Distance between the phase classes of two unit vectors:
/// min over |zeta|=1 of ||u - zeta w|| = sqrt(2 - 2|<u,w>|).
pub fn phase_distance<T: Real>(u: &[Complex<T>], w: &[Complex<T>]) -> T {
    let overlap = inner(u, w).norm();
    let two = T::of(2.0);
    (two - two * overlap).max(T::zero()).sqrt()
}
