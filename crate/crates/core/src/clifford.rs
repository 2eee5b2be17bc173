//! Dirac spinor representation of the complexified Clifford algebra of
//! signature (p,q), built from Kronecker products of 2x2 generator matrices,
//! together with the spinor-module inner products.
//!
//! Kronecker factors are applied left to right: the leftmost factor is the
//! slowest-varying index of the spinor coordinate. For even `n = 2m` the
//! generator `e_j` (1-based) is represented by
//!
//! ```text
//! tau(j) * E ⊗ ... ⊗ E ⊗ U_{sigma(j)} ⊗ T^{⊗ floor((j-1)/2)}
//! ```
//!
//! with `m` factors in total, `tau(j) = i` for time-like `j <= p` and `1`
//! otherwise, and `sigma(j) = 1` for odd `j`, `2` for even `j`. For odd
//! `n = 2m + 1` the first projection of the two-summand representation is
//! used: the first `2m` generators are built as in even dimension and the last
//! one is `tau(n) * i * T^{⊗ m}`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, cmatrix, CMatrix, CVector, I};

/// Largest supported `p + q` unless a caller passes its own cap.
pub const DEFAULT_DIM_CAP: usize = 14;

/// The pair (p,q): `p` time-like directions with `<e_j,e_j> = -1` followed by
/// `q` space-like directions with `<e_j,e_j> = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q < 2 {
            return Err(Error::InvalidSignature { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// `floor(n / 2)`.
    pub fn m(&self) -> usize {
        self.n() / 2
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.m()
    }

    /// `<e_j, e_j>` for the 0-based coordinate index `j`.
    pub fn kappa(&self, j: usize) -> f64 {
        if j < self.p {
            -1.0
        } else {
            1.0
        }
    }

    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(j, (a, b))| self.kappa(j) * a * b)
            .sum()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.form(x, x)
    }

    /// Integer version of the quadratic form for lattice points.
    pub fn lattice_form(&self, k: &[i64]) -> i64 {
        k.iter()
            .enumerate()
            .map(|(j, &kj)| if j < self.p { -kj * kj } else { kj * kj })
            .sum()
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: len,
            });
        }
        Ok(())
    }
}

/// Scalar convention for the element `b = c_p * e_1 ... e_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaNormalization {
    /// `c_p = 1` for `p = 0,1 mod 4` and `c_p = i` for `p = 2,3 mod 4`.
    #[default]
    CaseSplit,
    /// `c_p = i^{p(p-1)/2}`; differs from `CaseSplit` by a sign for some `p`.
    PhaseExponent,
}

impl BetaNormalization {
    fn scalar(self, p: usize) -> Complex64 {
        match self {
            Self::CaseSplit => match p % 4 {
                0 | 1 => c(1.0, 0.0),
                _ => I,
            },
            Self::PhaseExponent => I.powu((p * p.saturating_sub(1) / 2) as u32),
        }
    }
}

fn generator_e() -> CMatrix {
    CMatrix::identity(2, 2)
}

fn generator_u1() -> CMatrix {
    cmatrix(2, 2, &[I, c(0.0, 0.0), c(0.0, 0.0), -I])
}

fn generator_u2() -> CMatrix {
    cmatrix(2, 2, &[c(0.0, 0.0), I, I, c(0.0, 0.0)])
}

fn generator_t() -> CMatrix {
    cmatrix(2, 2, &[c(0.0, 0.0), -I, I, c(0.0, 0.0)])
}

/// The gamma matrices of a signature plus the matrix `beta` of the element `b`.
#[derive(Debug, Clone)]
pub struct GammaSet {
    signature: Signature,
    gammas: Vec<CMatrix>,
    beta: CMatrix,
}

/// Builds the gamma matrices with the default dimension cap and normalization.
pub fn build_gammas(sig: Signature) -> Result<GammaSet> {
    GammaSet::build(sig, DEFAULT_DIM_CAP, BetaNormalization::default())
}

impl GammaSet {
    pub fn build(sig: Signature, dim_cap: usize, normalization: BetaNormalization) -> Result<Self> {
        if sig.n() > dim_cap {
            return Err(Error::DimensionCapExceeded {
                n: sig.n(),
                cap: dim_cap,
            });
        }
        let m = sig.m();
        let tau = |j: usize| if j <= sig.p() { I } else { c(1.0, 0.0) };

        let mut gammas = Vec::with_capacity(sig.n());
        for j in 1..=2 * m {
            let tails = (j - 1) / 2;
            let mut factors = vec![generator_e(); m - 1 - tails];
            factors.push(if j % 2 == 1 { generator_u1() } else { generator_u2() });
            factors.extend(std::iter::repeat_n(generator_t(), tails));
            gammas.push(linalg::kron_all(&factors) * tau(j));
        }
        if sig.n() % 2 == 1 {
            let j = sig.n();
            let t_power = linalg::kron_all(&vec![generator_t(); m]);
            gammas.push(t_power * (tau(j) * I));
        }

        let dim = sig.spinor_dim();
        let product = gammas[..sig.p()]
            .iter()
            .fold(CMatrix::identity(dim, dim), |acc, g| acc * g);
        let beta = product * normalization.scalar(sig.p());

        Ok(Self {
            signature: sig,
            gammas,
            beta,
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    /// Gamma matrix for the 1-based basis index `j`.
    pub fn gamma(&self, j: usize) -> &CMatrix {
        &self.gammas[j - 1]
    }

    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }

    pub fn spinor_dim(&self) -> usize {
        self.signature.spinor_dim()
    }

    /// The matrix of Clifford multiplication by `x`, i.e. `sum_j x_j gamma_j`.
    pub fn clifford_matrix(&self, x: &[f64]) -> Result<CMatrix> {
        self.signature.check_len(x.len())?;
        let dim = self.spinor_dim();
        Ok(self
            .gammas
            .iter()
            .zip(x)
            .fold(CMatrix::zeros(dim, dim), |acc, (g, &xj)| acc + g * c(xj, 0.0)))
    }

    pub fn clifford_multiply(&self, x: &[f64], v: &CVector) -> Result<CVector> {
        self.check_spinor(v)?;
        Ok(self.clifford_matrix(x)? * v)
    }

    pub(crate) fn check_spinor(&self, v: &CVector) -> Result<()> {
        if v.len() != self.spinor_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spinor_dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Checks the defining identities of the representation and of `beta`.
    pub fn verify(&self) -> IdentityReport {
        let sig = self.signature;
        let dim = self.spinor_dim();
        let id = CMatrix::identity(dim, dim);

        let mut anticommutator_error = 0.0_f64;
        let mut pairs_checked = 0;
        for (j, gj) in self.gammas.iter().enumerate() {
            for (k, gk) in self.gammas.iter().enumerate() {
                let metric = if j == k { sig.kappa(j) } else { 0.0 };
                let residual = gj * gk + gk * gj + &id * c(2.0 * metric, 0.0);
                anticommutator_error = anticommutator_error.max(linalg::max_abs_entry(&residual));
                pairs_checked += 1;
            }
        }

        let square_error = self
            .gammas
            .iter()
            .enumerate()
            .map(|(j, g)| linalg::max_abs_entry(&(g * g - &id * c(-sig.kappa(j), 0.0))))
            .fold(0.0, f64::max);

        let max_trace = self
            .gammas
            .iter()
            .map(|g| g.trace().norm())
            .fold(0.0, f64::max);

        let beta = &self.beta;
        let beta_square_error = linalg::max_abs_entry(&(beta * beta - &id));
        let beta_hermitian_error = linalg::max_abs_entry(&(beta - beta.adjoint()));
        let (positive, negative) = eigen_sign_counts(beta);

        IdentityReport {
            signature: [sig.p(), sig.q()],
            pairs_checked,
            anticommutator_error,
            square_error,
            max_trace,
            beta_square_error,
            beta_hermitian_error,
            beta_positive: positive,
            beta_negative: negative,
        }
    }
}

fn eigen_sign_counts(hermitian: &CMatrix) -> (usize, usize) {
    let values = linalg::hermitian_eigenvalues(hermitian);
    let positive = values.iter().filter(|&&x| (x - 1.0).abs() <= linalg::TOL_FLOAT).count();
    let negative = values.iter().filter(|&&x| (x + 1.0).abs() <= linalg::TOL_FLOAT).count();
    (positive, negative)
}

/// Outcome of [`GammaSet::verify`]. Algebraic errors are exact for the
/// Kronecker construction since every entry lies in `{0, ±1, ±i}`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub signature: [usize; 2],
    pub pairs_checked: usize,
    pub anticommutator_error: f64,
    pub square_error: f64,
    pub max_trace: f64,
    pub beta_square_error: f64,
    pub beta_hermitian_error: f64,
    /// Eigenvalues of beta within tolerance of +1.
    pub beta_positive: usize,
    /// Eigenvalues of beta within tolerance of -1.
    pub beta_negative: usize,
}

impl IdentityReport {
    pub fn algebra_exact(&self) -> bool {
        self.anticommutator_error == 0.0 && self.square_error == 0.0 && self.max_trace == 0.0
    }

    pub fn beta_split_even(&self) -> bool {
        self.beta_positive == self.beta_negative
            && self.beta_positive + self.beta_negative == 1 << ((self.signature[0] + self.signature[1]) / 2)
    }

    pub fn passed(&self) -> bool {
        self.algebra_exact() && self.beta_square_error == 0.0 && self.beta_hermitian_error == 0.0
    }
}

/// The spinor module with its positive-definite and indefinite products.
/// Requires `0 < p < n`, where the indefinite product is a genuine Krein form.
#[derive(Debug, Clone)]
pub struct SpinorModule {
    beta: CMatrix,
}

impl SpinorModule {
    pub fn new(gammas: &GammaSet) -> Result<Self> {
        let sig = gammas.signature();
        if sig.p() == 0 || sig.q() == 0 {
            return Err(Error::InvalidArgument(format!(
                "spinor module products need 0 < p < n, got ({},{})",
                sig.p(),
                sig.q()
            )));
        }
        Ok(Self {
            beta: gammas.beta().clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.beta.nrows()
    }

    fn check(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn hermitian_product(&self, v: &CVector, w: &CVector) -> Result<Complex64> {
        self.check(v)?;
        self.check(w)?;
        Ok(linalg::hermitian_product(v, w))
    }

    /// `<beta v, w>` in the positive-definite product.
    pub fn indefinite_product(&self, v: &CVector, w: &CVector) -> Result<Complex64> {
        self.check(v)?;
        self.check(w)?;
        Ok(linalg::hermitian_product(&(&self.beta * v), w))
    }

    /// Numbers of positive and negative directions of the indefinite product.
    pub fn form_signature(&self) -> (usize, usize) {
        eigen_sign_counts(&self.beta)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompactInvarianceReport {
    pub samples: usize,
    pub max_deviation: f64,
}

fn random_unit(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn random_spinor(rng: &mut impl Rng, dim: usize) -> CVector {
    DVector::from_fn(dim, |_, _| c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
}

/// Draws random products `y_1 ... y_k1 x_1 ... x_k2` of unit time-like vectors
/// `y` (with `<y,y> = -1`) and unit space-like vectors `x` (with `<x,x> = 1`)
/// and reports the largest change of the positive-definite norm they cause.
pub fn verify_compact_invariance(
    gammas: &GammaSet,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<CompactInvarianceReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let sig = gammas.signature();
    let dim = gammas.spinor_dim();
    let mut max_deviation = 0.0_f64;
    for _ in 0..samples {
        let mut element = CMatrix::identity(dim, dim);
        let time_factors = if sig.p() > 0 { rng.gen_range(0..=3) } else { 0 };
        let space_factors = if sig.q() > 0 { rng.gen_range(0..=3) } else { 0 };
        for _ in 0..time_factors {
            let mut y = random_unit(rng, sig.p());
            y.resize(sig.n(), 0.0);
            element *= gammas.clifford_matrix(&y)?;
        }
        for _ in 0..space_factors {
            let mut x = vec![0.0; sig.p()];
            x.extend(random_unit(rng, sig.q()));
            element *= gammas.clifford_matrix(&x)?;
        }
        let v = random_spinor(rng, dim);
        let before = v.norm();
        let after = (&element * &v).norm();
        max_deviation = max_deviation.max((after - before).abs() / before);
    }
    Ok(CompactInvarianceReport {
        samples,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn zero() -> Complex64 {
        c(0.0, 0.0)
    }

    #[test]
    fn signature_rejects_small_dimension() {
        assert!(matches!(Signature::new(1, 0), Err(Error::InvalidSignature { .. })));
        assert!(matches!(Signature::new(0, 0), Err(Error::InvalidSignature { .. })));
        assert!(Signature::new(0, 2).is_ok());
    }

    #[test]
    fn dim_cap_is_enforced() {
        let sig = Signature::new(1, 14).unwrap();
        assert!(matches!(build_gammas(sig), Err(Error::DimensionCapExceeded { n: 15, cap: 14 })));
        assert!(GammaSet::build(sig, 15, BetaNormalization::CaseSplit).is_ok());
    }

    #[test]
    fn lorentzian_plane_gammas_match_hand_computation() {
        let g = build_gammas(Signature::new(1, 1).unwrap()).unwrap();
        let one = c(1.0, 0.0);
        assert_eq!(g.gamma(1), &cmatrix(2, 2, &[-one, zero(), zero(), one]));
        assert_eq!(g.gamma(2), &cmatrix(2, 2, &[zero(), I, I, zero()]));
        assert_eq!(g.beta(), g.gamma(1));
        let id = CMatrix::identity(2, 2);
        assert_eq!(g.gamma(1) * g.gamma(1), id);
        assert_eq!(g.gamma(2) * g.gamma(2), -id);
        assert_eq!(g.gamma(1) * g.gamma(2) + g.gamma(2) * g.gamma(1), CMatrix::zeros(2, 2));
    }

    #[test]
    fn all_anticommutators_hold_exactly_in_signature_2_2() {
        let g = build_gammas(Signature::new(2, 2).unwrap()).unwrap();
        let report = g.verify();
        assert_eq!(report.pairs_checked, 16);
        assert!(report.passed(), "{report:?}");
        assert!(report.beta_split_even());
    }

    #[test]
    fn odd_dimension_uses_first_projection() {
        let g = build_gammas(Signature::new(1, 2).unwrap()).unwrap();
        // tau(3) * i * T
        assert_eq!(g.gamma(3), &(generator_t() * I));
        assert!(g.verify().passed());
    }

    #[test]
    fn gammas_are_traceless_everywhere() {
        for n in 2..=8 {
            for p in 0..=n {
                let g = build_gammas(Signature::new(p, n - p).unwrap()).unwrap();
                assert!(g.gammas().iter().all(|m| m.trace().norm() == 0.0));
            }
        }
    }

    #[test]
    fn phase_exponent_normalization_differs_by_sign_only() {
        for p in 1..=7 {
            let sig = Signature::new(p, 8 - p).unwrap();
            let a = GammaSet::build(sig, DEFAULT_DIM_CAP, BetaNormalization::CaseSplit).unwrap();
            let b = GammaSet::build(sig, DEFAULT_DIM_CAP, BetaNormalization::PhaseExponent).unwrap();
            let same = linalg::max_abs_entry(&(a.beta() - b.beta())) == 0.0;
            let flipped = linalg::max_abs_entry(&(a.beta() + b.beta())) == 0.0;
            assert!(same ^ flipped, "p = {p}");
            assert_eq!(flipped, matches!(p % 8, 3..=6), "p = {p}");
        }
    }

    #[test]
    fn clifford_multiply_basis_vector_and_null_vector() {
        let g = build_gammas(Signature::new(1, 1).unwrap()).unwrap();
        let v = CVector::from_vec(vec![c(1.0, 0.0), zero()]);
        assert_eq!(g.clifford_multiply(&[0.0, 1.0], &v).unwrap(), g.gamma(2) * &v);
        let once = g.clifford_multiply(&[1.0, 1.0], &v).unwrap();
        let twice = g.clifford_multiply(&[1.0, 1.0], &once).unwrap();
        assert_eq!(twice, CVector::zeros(2));
    }

    #[test]
    fn clifford_multiply_rejects_bad_lengths() {
        let g = build_gammas(Signature::new(1, 1).unwrap()).unwrap();
        let v = CVector::zeros(2);
        assert!(matches!(
            g.clifford_multiply(&[1.0], &v),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(g.clifford_multiply(&[1.0, 0.0], &CVector::zeros(3)).is_err());
    }

    #[test]
    fn indefinite_product_in_lorentzian_plane() {
        let g = build_gammas(Signature::new(1, 1).unwrap()).unwrap();
        let sm = SpinorModule::new(&g).unwrap();
        let up = CVector::from_vec(vec![c(1.0, 0.0), zero()]);
        let down = CVector::from_vec(vec![zero(), c(1.0, 0.0)]);
        assert_eq!(sm.indefinite_product(&up, &up).unwrap(), c(-1.0, 0.0));
        assert_eq!(sm.indefinite_product(&down, &down).unwrap(), c(1.0, 0.0));
        assert_eq!(sm.indefinite_product(&CVector::zeros(2), &up).unwrap(), zero());
        assert_eq!(sm.form_signature(), (1, 1));
    }

    #[test]
    fn spinor_module_requires_mixed_signature() {
        let g = build_gammas(Signature::new(0, 2).unwrap()).unwrap();
        assert!(SpinorModule::new(&g).is_err());
    }

    #[test]
    fn single_generators_are_unitary() {
        let g = build_gammas(Signature::new(1, 1).unwrap()).unwrap();
        let id = CMatrix::identity(2, 2);
        for j in 1..=2 {
            let gj = g.gamma(j);
            assert_eq!(gj.adjoint() * gj, id);
        }
    }

    #[test]
    fn compact_invariance_holds_and_rejects_zero_samples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (p, q) in [(1, 1), (2, 3), (3, 3)] {
            let g = build_gammas(Signature::new(p, q).unwrap()).unwrap();
            let report = verify_compact_invariance(&g, 50, &mut rng).unwrap();
            assert!(report.max_deviation <= linalg::TOL_FLOAT, "{report:?}");
        }
        let g = build_gammas(Signature::new(1, 1).unwrap()).unwrap();
        assert!(verify_compact_invariance(&g, 0, &mut rng).is_err());
    }
}
