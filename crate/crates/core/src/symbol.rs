//! Fourier symbol `A(x) = i θ(x)·` of the flat Dirac operator, where `θ`
//! flips the sign of the time-like coordinates, and its closed-form resolvent
//! `(λ - A(x))^{-1} = (λ + A(x)) / (λ² - <x,x>)`.

use num_complex::Complex64;

use crate::clifford::{build_gammas, GammaSet, Signature};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, I};
use crate::multop::{FiberFamily, IndexDomain};

/// Relative threshold below which `λ² - <x,x>` counts as zero.
pub fn tol_sing(lambda: Complex64, form: f64) -> f64 {
    1e-9 * (1.0 + lambda.norm_sqr() + form.abs())
}

/// Principal square root of a real number: `i sqrt(|s|)` for negative `s`.
pub fn principal_sqrt(s: f64) -> Complex64 {
    if s >= 0.0 {
        c(s.sqrt(), 0.0)
    } else {
        c(0.0, (-s).sqrt())
    }
}

/// Negation that never produces `-0.0` components.
pub(crate) fn negate(z: Complex64) -> Complex64 {
    linalg::normalize_zero(-z)
}

#[derive(Debug, Clone)]
pub struct DiracSymbol {
    gammas: GammaSet,
}

impl DiracSymbol {
    pub fn new(sig: Signature) -> Result<Self> {
        Ok(Self {
            gammas: build_gammas(sig)?,
        })
    }

    pub fn from_gammas(gammas: GammaSet) -> Self {
        Self { gammas }
    }

    pub fn signature(&self) -> Signature {
        self.gammas.signature()
    }

    pub fn gammas(&self) -> &GammaSet {
        &self.gammas
    }

    pub fn spinor_dim(&self) -> usize {
        self.gammas.spinor_dim()
    }

    /// `A(x) = i sum_j κ_j x_j γ_j`.
    pub fn at(&self, x: &[f64]) -> Result<CMatrix> {
        let sig = self.signature();
        sig.check_len(x.len())?;
        let reflected: Vec<f64> = x.iter().enumerate().map(|(j, xj)| sig.kappa(j) * xj).collect();
        Ok(self.gammas.clifford_matrix(&reflected)? * I)
    }

    pub fn resolvent_at(&self, x: &[f64], lambda: Complex64) -> Result<CMatrix> {
        let form = self.signature().quadratic_form(x);
        let a = self.at(x)?;
        let det = lambda * lambda - form;
        if det.norm() <= tol_sing(lambda, form) {
            return Err(Error::SingularPoint {
                lambda,
                residual: det.norm(),
            });
        }
        let dim = self.spinor_dim();
        Ok((CMatrix::identity(dim, dim) * lambda + a) / det)
    }

    /// Spectral norm of the resolvent at `x`.
    pub fn resolvent_norm(&self, x: &[f64], lambda: Complex64) -> Result<f64> {
        Ok(linalg::spectral_norm(&self.resolvent_at(x, lambda)?))
    }

    /// `{+sqrt<x,x>, -sqrt<x,x>}`, each with multiplicity `2^{m-1}`.
    pub fn fiber_eigenvalues(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        let sig = self.signature();
        sig.check_len(x.len())?;
        let root = principal_sqrt(sig.quadratic_form(x));
        let half = self.spinor_dim() / 2;
        let mut values = vec![root; half];
        values.extend(std::iter::repeat_n(negate(root), half));
        Ok(values)
    }

    /// Eigenvalues of `A(x)` from the general dense eigensolver.
    pub fn dense_eigenvalues(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        linalg::eigenvalues(&self.at(x)?)
    }
}

/// The Dirac symbol restricted to the integer lattice `Z^n`.
impl FiberFamily for DiracSymbol {
    fn domain(&self) -> IndexDomain {
        IndexDomain::Integers(self.signature().n())
    }

    fn fiber_dim(&self) -> usize {
        self.spinor_dim()
    }

    fn at(&self, k: &[i64]) -> CMatrix {
        let x: Vec<f64> = k.iter().map(|&v| v as f64).collect();
        DiracSymbol::at(self, &x).expect("lattice index has the signature's rank")
    }
}
