//! Symmetric tensors in the orthonormal symmetric basis, plus the gated full
//! tensor expansion and the phase-quotient state type.
//!
//! A [`SymmetricTensor`] stores one complex coordinate z_i per nondecreasing
//! multi-index i, in the orthonormal basis obtained by scaling each
//! symmetrized basis tensor by sqrt(c(i)). In these coordinates the
//! Hilbert-Schmidt norm is the plain Euclidean norm of the coefficient
//! vector, and the conversion identities are
//!
//! * symmetric-basis coefficient:  T'_i = sqrt(c(i)) * z_i
//! * full-tensor coefficient:      T_j  = z_{sort(j)} / sqrt(c(sort(j)))
//!
//! Full expansions grow as n^m and are gated behind an explicit cap; every
//! production path works in the compact coordinates.

use crate::cvec;
use crate::error::{Error, Result};
use crate::index::{dim_sym, sqrt_multiplicity, MultiIndex, MultiIndexIter};
use crate::scalar::Real;
use num_complex::Complex;

/// Default cap on n^m for full tensor expansion.
pub const DEFAULT_EXPANSION_CAP: u64 = 1 << 20;

/// A symmetric m-mode tensor over C^n in orthonormal symmetric coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor<T: Real> {
    n: u32,
    m: u32,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SymmetricTensor<T> {
    /// Builds a tensor from its coordinate vector, which must have length
    /// binomial(n+m-1, m).
    pub fn new(n: u32, m: u32, coeffs: Vec<Complex<T>>) -> Result<Self> {
        let dim = dim_sym(n, m)?;
        if coeffs.len() as u64 != dim {
            return Err(Error::CoefficientLength {
                got: coeffs.len(),
                expected: dim,
            });
        }
        Ok(SymmetricTensor { n, m, coeffs })
    }

    /// The orthonormal basis tensor addressed by `index`.
    pub fn basis_state(index: &MultiIndex) -> Result<Self> {
        let n = index.n();
        let m = index.m();
        let dim = dim_sym(n, m)?;
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); dim as usize];
        coeffs[index.rank() as usize] = Complex::new(T::one(), T::zero());
        Ok(SymmetricTensor { n, m, coeffs })
    }

    /// The m-fold tensor power of `v`, expressed in symmetric coordinates:
    /// z_i = sqrt(c(i)) * v_{i_1} ... v_{i_m}.
    pub fn product_state(v: &[Complex<T>], m: u32) -> Result<Self> {
        let n = v.len() as u32;
        let dim = dim_sym(n, m)?;
        let mut coeffs = Vec::with_capacity(dim as usize);
        for entries in MultiIndexIter::new(n, m) {
            let idx = MultiIndex::new(n, entries).expect("iterator yields valid indices");
            let sqrt_c = T::of(sqrt_multiplicity(&idx.block_sizes()));
            let mut mono = Complex::new(T::one(), T::zero());
            for &e in idx.entries() {
                mono = mono * v[(e - 1) as usize];
            }
            coeffs.push(mono * sqrt_c);
        }
        Ok(SymmetricTensor { n, m, coeffs })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of stored coordinates, binomial(n+m-1, m).
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coordinate of one basis tensor.
    pub fn coeff(&self, index: &MultiIndex) -> Complex<T> {
        self.coeffs[index.rank() as usize]
    }

    /// Hilbert-Schmidt norm, the Euclidean norm of the coordinates.
    pub fn hs_norm(&self) -> T {
        cvec::norm(&self.coeffs)
    }

    /// Hilbert-Schmidt inner product, conjugate-linear in `self`.
    pub fn hs_inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_shape(other)?;
        Ok(cvec::inner(&self.coeffs, &other.coeffs))
    }

    /// Rescales every coordinate by `factor`.
    pub fn scaled(&self, factor: Complex<T>) -> Self {
        SymmetricTensor {
            n: self.n,
            m: self.m,
            coeffs: self.coeffs.iter().map(|z| *z * factor).collect(),
        }
    }

    /// Expands into full tensor coordinates T_j over all of {1..n}^m.
    /// Fails when n^m exceeds `cap`.
    pub fn expand_full_with_cap(&self, cap: u64) -> Result<FullTensor<T>> {
        let size = (self.n as u128).pow(self.m);
        if size > cap as u128 {
            return Err(Error::ExpansionCap { needed: size, cap });
        }
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); size as usize];
        let mut tuple = vec![1u32; self.m as usize];
        loop {
            let sorted = MultiIndex::ascending_of(self.n, &tuple)?;
            let sqrt_c = T::of(sqrt_multiplicity(&sorted.block_sizes()));
            let z = self.coeffs[sorted.rank() as usize];
            let flat = FullTensor::<T>::flat_index(self.n, &tuple);
            coeffs[flat] = z / sqrt_c;
            if !next_tuple(&mut tuple, self.n) {
                break;
            }
        }
        Ok(FullTensor {
            n: self.n,
            m: self.m,
            coeffs,
        })
    }

    /// [`SymmetricTensor::expand_full_with_cap`] at the default cap.
    pub fn expand_full(&self) -> Result<FullTensor<T>> {
        self.expand_full_with_cap(DEFAULT_EXPANSION_CAP)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::ShapeMismatch {
                n_left: self.n,
                m_left: self.m,
                n_right: other.n,
                m_right: other.m,
            });
        }
        Ok(())
    }
}

/// Advances a tuple over {1..n}^m in row-major order; false when exhausted.
fn next_tuple(tuple: &mut [u32], n: u32) -> bool {
    for e in tuple.iter_mut().rev() {
        if *e < n {
            *e += 1;
            return true;
        }
        *e = 1;
    }
    false
}

/// Dense coefficients over all plain tuples in {1..n}^m, row-major.
/// Only used for oracles and small cross-checks; gated by the expansion cap.
#[derive(Debug, Clone, PartialEq)]
pub struct FullTensor<T: Real> {
    n: u32,
    m: u32,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FullTensor<T> {
    /// Builds from raw row-major coefficients of length n^m.
    pub fn new(n: u32, m: u32, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameter {
                name: "n,m",
                reason: "must be at least 1".into(),
            });
        }
        let size = (n as u128).pow(m);
        if coeffs.len() as u128 != size {
            return Err(Error::CoefficientLength {
                got: coeffs.len(),
                expected: size.min(u64::MAX as u128) as u64,
            });
        }
        Ok(FullTensor { n, m, coeffs })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    fn flat_index(n: u32, tuple: &[u32]) -> usize {
        let mut flat = 0usize;
        for &e in tuple {
            flat = flat * n as usize + (e - 1) as usize;
        }
        flat
    }

    /// Coefficient at a plain (not necessarily sorted) tuple.
    pub fn coeff(&self, tuple: &[u32]) -> Result<Complex<T>> {
        if tuple.len() != self.m as usize {
            return Err(Error::InvalidParameter {
                name: "tuple",
                reason: format!("expected {} modes, got {}", self.m, tuple.len()),
            });
        }
        for &e in tuple {
            if e == 0 || e > self.n {
                return Err(Error::EntryOutOfRange { entry: e, n: self.n });
            }
        }
        Ok(self.coeffs[Self::flat_index(self.n, tuple)])
    }

    /// Euclidean norm over the full coordinates; equals the Hilbert-Schmidt
    /// norm of the tensor.
    pub fn hs_norm(&self) -> T {
        cvec::norm(&self.coeffs)
    }

    /// Applies the symmetrization projection and returns the result in
    /// orthonormal symmetric coordinates: z_i = (sum over tuples sorting to
    /// i of F_j) / sqrt(c(i)). Idempotent on expansions of symmetric
    /// tensors.
    pub fn symmetrize(&self) -> Result<SymmetricTensor<T>> {
        let dim = dim_sym(self.n, self.m)?;
        let mut sums = vec![Complex::new(T::zero(), T::zero()); dim as usize];
        let mut tuple = vec![1u32; self.m as usize];
        loop {
            let sorted = MultiIndex::ascending_of(self.n, &tuple)?;
            let flat = Self::flat_index(self.n, &tuple);
            let r = sorted.rank() as usize;
            sums[r] = sums[r] + self.coeffs[flat];
            if !next_tuple(&mut tuple, self.n) {
                break;
            }
        }
        let mut coeffs = Vec::with_capacity(dim as usize);
        for (r, entries) in MultiIndexIter::new(self.n, self.m).enumerate() {
            let idx = MultiIndex::new(self.n, entries)?;
            let sqrt_c = T::of(sqrt_multiplicity(&idx.block_sizes()));
            coeffs.push(sums[r] / sqrt_c);
        }
        SymmetricTensor::new(self.n, self.m, coeffs)
    }
}

/// A unit-norm symmetric tensor considered modulo a global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonState<T: Real> {
    tensor: SymmetricTensor<T>,
}

impl<T: Real> BosonState<T> {
    /// Wraps a tensor whose Hilbert-Schmidt norm is already 1 within
    /// [`Real::ALGEBRAIC_TOL`].
    pub fn new(tensor: SymmetricTensor<T>) -> Result<Self> {
        let norm = tensor.hs_norm();
        if (norm - T::one()).abs() > T::ALGEBRAIC_TOL {
            return Err(Error::NotUnitNorm {
                norm: norm.to64(),
                tol: T::ALGEBRAIC_TOL.to64(),
            });
        }
        Ok(BosonState { tensor })
    }

    /// Rescales an arbitrary nonzero tensor to unit norm.
    pub fn normalized(tensor: SymmetricTensor<T>) -> Result<Self> {
        let norm = tensor.hs_norm();
        if norm == T::zero() {
            return Err(Error::ZeroTensor);
        }
        let inv = Complex::new(T::one() / norm, T::zero());
        Ok(BosonState {
            tensor: tensor.scaled(inv),
        })
    }

    pub fn tensor(&self) -> &SymmetricTensor<T> {
        &self.tensor
    }

    pub fn into_tensor(self) -> SymmetricTensor<T> {
        self.tensor
    }

    pub fn n(&self) -> u32 {
        self.tensor.n()
    }

    pub fn m(&self) -> u32 {
        self.tensor.m()
    }

    /// Phase-quotient distance: min over unit phases zeta of
    /// ||S - zeta T||_2 = sqrt(2 - 2 |<S,T>_2|).
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.tensor.check_shape(&other.tensor)?;
        Ok(cvec::phase_distance(
            self.tensor.coeffs(),
            other.tensor.coeffs(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::MultiIndexIter;
    use num_complex::Complex;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn random_tensor(n: u32, m: u32, seed: u64) -> SymmetricTensor<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = dim_sym(n, m).unwrap() as usize;
        let coeffs = (0..d)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        SymmetricTensor::new(n, m, coeffs).unwrap()
    }

    /// Test-local factorial-based multiplicity, kept independent of the
    /// production combinatorics.
    fn oracle_multiplicity(sorted: &[u32]) -> f64 {
        fn fact(k: usize) -> f64 {
            (1..=k).map(|x| x as f64).product()
        }
        let mut blocks: Vec<usize> = Vec::new();
        let mut run = 1usize;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                blocks.push(run);
                run = 1;
            }
        }
        blocks.push(run);
        fact(sorted.len()) / blocks.iter().map(|&b| fact(b)).product::<f64>()
    }

    /// Test-local expansion: full coefficient at a plain tuple from the
    /// orthonormal coordinates, via T_j = z_{sort(j)} / sqrt(c(sort(j))).
    fn oracle_full_coeffs(t: &SymmetricTensor<f64>) -> Vec<(Vec<u32>, C)> {
        let n = t.n();
        let m = t.m();
        let mut out = Vec::new();
        let mut tuple = vec![1u32; m as usize];
        loop {
            let mut sorted = tuple.clone();
            sorted.sort_unstable();
            let idx = MultiIndex::new(n, sorted.clone()).unwrap();
            let z = t.coeff(&idx);
            out.push((tuple.clone(), z / oracle_multiplicity(&sorted).sqrt()));
            if !super::next_tuple(&mut tuple, n) {
                break;
            }
        }
        out
    }

    #[test]
    fn unit_boson_has_unit_inner() {
        let t = random_tensor(3, 3, 7);
        let psi = BosonState::normalized(t).unwrap();
        let ip = psi.tensor().hs_inner(psi.tensor()).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-12 && ip.im.abs() < 1e-15);
    }

    #[test]
    fn basis_states_are_orthonormal() {
        let n = 3;
        let m = 3;
        let indices: Vec<_> = MultiIndexIter::new(n, m)
            .map(|e| MultiIndex::new(n, e).unwrap())
            .collect();
        for a in &indices {
            for b in &indices {
                let ea = SymmetricTensor::<f64>::basis_state(a).unwrap();
                let eb = SymmetricTensor::<f64>::basis_state(b).unwrap();
                let ip = ea.hs_inner(&eb).unwrap();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip.re - expected).abs() < 1e-15 && ip.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hs_inner_matches_full_basis_oracle() {
        for (n, m) in [(2u32, 3u32), (2, 4), (3, 3), (3, 4)] {
            for seed in 0..4u64 {
                let s = random_tensor(n, m, 100 + seed);
                let t = random_tensor(n, m, 200 + seed);
                let direct = s.hs_inner(&t).unwrap();
                let full_s = oracle_full_coeffs(&s);
                let full_t = oracle_full_coeffs(&t);
                let mut acc = c(0.0, 0.0);
                for ((_, a), (_, b)) in full_s.iter().zip(&full_t) {
                    acc += a.conj() * b;
                }
                assert!((direct - acc).norm() < 1e-12, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn hs_inner_rejects_shape_mismatch() {
        let s = random_tensor(2, 3, 1);
        let t = random_tensor(2, 4, 1);
        assert!(matches!(
            s.hs_inner(&t),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn expand_basis_state_n2_m2() {
        let idx = MultiIndex::new(2, vec![1, 2]).unwrap();
        let t = SymmetricTensor::<f64>::basis_state(&idx).unwrap();
        let full = t.expand_full().unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((full.coeff(&[1, 2]).unwrap().re - inv_sqrt2).abs() < 1e-15);
        assert!((full.coeff(&[2, 1]).unwrap().re - inv_sqrt2).abs() < 1e-15);
        assert!(full.coeff(&[1, 1]).unwrap().norm() < 1e-15);
        assert!(full.coeff(&[2, 2]).unwrap().norm() < 1e-15);
    }

    #[test]
    fn expand_product_state_is_single_spike() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let t = SymmetricTensor::product_state(&e1, 4).unwrap();
        let full = t.expand_full().unwrap();
        assert!((full.coeff(&[1, 1, 1, 1]).unwrap().re - 1.0).abs() < 1e-15);
        let rest: f64 = full
            .coeffs()
            .iter()
            .skip(1)
            .map(|z| z.norm_sqr())
            .sum();
        assert!(rest < 1e-28);
    }

    #[test]
    fn expansion_is_an_isometry() {
        let t = random_tensor(3, 4, 11);
        let full = t.expand_full().unwrap();
        assert!((full.hs_norm() - t.hs_norm()).abs() < 1e-12);
    }

    #[test]
    fn expansion_matches_oracle() {
        let t = random_tensor(2, 3, 5);
        let full = t.expand_full().unwrap();
        for (tuple, expected) in oracle_full_coeffs(&t) {
            assert!((full.coeff(&tuple).unwrap() - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn expansion_cap_is_enforced() {
        let t = random_tensor(2, 8, 3);
        let err = t.expand_full_with_cap(100).unwrap_err();
        assert!(matches!(err, Error::ExpansionCap { needed: 256, cap: 100 }));
    }

    #[test]
    fn symmetrize_e1_tensor_e2() {
        // e1 (x) e2 over n=2: projection has z_{(1,2)} = 1/sqrt(2).
        let mut coeffs = vec![c(0.0, 0.0); 4];
        coeffs[1] = c(1.0, 0.0); // row-major tuple (1,2)
        let full = FullTensor::new(2, 2, coeffs).unwrap();
        let t = full.symmetrize().unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let z12 = t.coeff(&MultiIndex::new(2, vec![1, 2]).unwrap());
        let z11 = t.coeff(&MultiIndex::new(2, vec![1, 1]).unwrap());
        let z22 = t.coeff(&MultiIndex::new(2, vec![2, 2]).unwrap());
        assert!((z12.re - inv_sqrt2).abs() < 1e-15);
        assert!(z11.norm() < 1e-15 && z22.norm() < 1e-15);
    }

    #[test]
    fn symmetrize_inverts_expansion() {
        for (n, m) in [(2u32, 3u32), (3, 3), (2, 5)] {
            let t = random_tensor(n, m, 40 + n as u64 + m as u64);
            let back = t.expand_full().unwrap().symmetrize().unwrap();
            let diff: f64 = t
                .coeffs()
                .iter()
                .zip(back.coeffs())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-12, "n={n} m={m} diff={diff}");
        }
    }

    #[test]
    fn symmetrize_fixes_product_states() {
        let v = vec![c(0.3, 0.4), c(-0.5, 0.2), c(0.1, 0.6)];
        let t = SymmetricTensor::product_state(&v, 3).unwrap();
        let norm_v = cvec::norm(&v);
        assert!((t.hs_norm() - norm_v.powi(3)).abs() < 1e-12);
        let again = t.expand_full().unwrap().symmetrize().unwrap();
        assert!((again.hs_norm() - t.hs_norm()).abs() < 1e-12);
    }

    #[test]
    fn boson_distance_identity_and_phase() {
        let t = random_tensor(2, 4, 9);
        let psi = BosonState::normalized(t.clone()).unwrap();
        assert!(psi.distance(&psi).unwrap() < 1e-12);

        let zeta = Complex::from_polar(1.0, 2.3);
        let phi = BosonState::normalized(t.scaled(zeta)).unwrap();
        assert!(psi.distance(&phi).unwrap() < 1e-7);
    }

    #[test]
    fn boson_distance_orthogonal_states() {
        let a = MultiIndex::new(2, vec![1, 1]).unwrap();
        let b = MultiIndex::new(2, vec![1, 2]).unwrap();
        let psi = BosonState::new(SymmetricTensor::<f64>::basis_state(&a).unwrap()).unwrap();
        let phi = BosonState::new(SymmetricTensor::<f64>::basis_state(&b).unwrap()).unwrap();
        assert!((psi.distance(&phi).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn boson_distance_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let seeds: Vec<u64> = (0..3).map(|_| rng.gen()).collect();
            let states: Vec<_> = seeds
                .iter()
                .map(|&s| BosonState::normalized(random_tensor(2, 3, s)).unwrap())
                .collect();
            let dab = states[0].distance(&states[1]).unwrap();
            let dbc = states[1].distance(&states[2]).unwrap();
            let dac = states[0].distance(&states[2]).unwrap();
            assert!(dac <= dab + dbc + 1e-10);
        }
    }

    #[test]
    fn boson_distance_zero_iff_unit_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for _ in 0..100 {
            let s1: u64 = rng.gen();
            let s2: u64 = rng.gen();
            let a = BosonState::normalized(random_tensor(2, 3, s1)).unwrap();
            let b = BosonState::normalized(random_tensor(2, 3, s2)).unwrap();
            let d = a.distance(&b).unwrap();
            let overlap = a.tensor().hs_inner(b.tensor()).unwrap().norm();
            assert!((d * d - (2.0 - 2.0 * overlap)).abs() < 1e-10);
            assert_eq!(d < 1e-9, (overlap - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn boson_state_rejects_non_unit_norm() {
        let t = random_tensor(2, 2, 13).scaled(c(3.0, 0.0));
        assert!(matches!(
            BosonState::new(t),
            Err(Error::NotUnitNorm { .. })
        ));
    }

    #[test]
    fn generic_scalar_f32_smoke() {
        let v = vec![Complex::new(0.6f32, 0.0), Complex::new(0.0, 0.8)];
        let t = SymmetricTensor::product_state(&v, 2).unwrap();
        assert!((t.hs_norm() - 1.0).abs() < 1e-5);
        let psi = BosonState::new(t).unwrap();
        assert!(psi.distance(&psi).unwrap() < 1e-5);
    }
}
