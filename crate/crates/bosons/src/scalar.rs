//! Floating-point scalar abstraction.
//!
//! Everything numeric in this crate is generic over [`Real`], which is either
//! `f32` or `f64`. Complex coefficients are `num_complex::Complex<T>` over a
//! `Real` type. Closed-form helpers that need log-gamma evaluate in `f64`
//! internally and convert at the boundary.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt;
use std::iter::Sum;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance for algebraic identities (norms, inner products,
    /// basis conversions).
    const ALGEBRAIC_TOL: Self;

    /// Absolute tolerance for optimizer-grade comparisons.
    const OPT_TOL: Self;

    /// One draw from the standard normal distribution.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Conversion from `f64`, lossy for narrower types.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    /// Conversion to `f64`.
    fn to64(self) -> f64 {
        self.to_f64().expect("conversion to f64")
    }
}

impl Real for f64 {
    const ALGEBRAIC_TOL: Self = 1e-12;
    const OPT_TOL: Self = 1e-8;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    const ALGEBRAIC_TOL: Self = 1e-5;
    const OPT_TOL: Self = 1e-4;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        assert_eq!(f64::of(0.5), 0.5);
        assert_eq!(f32::of(0.5), 0.5f32);
        assert_eq!(0.5f64.to64(), 0.5);
    }

    #[test]
    fn tolerances_ordered() {
        assert!(f64::ALGEBRAIC_TOL < f64::OPT_TOL);
        assert!(f32::ALGEBRAIC_TOL < f32::OPT_TOL);
    }
}
