//! Spectrum of T^{1,1} × F for a compact Riemannian spin manifold F, which
//! enters only through its Dirac eigenvalues `λ_l`.
//!
//! Spinors on the product split along the last tensor slot as `(ψ₊, ψ₋)`, and
//! in Fourier modes the operator decouples into the 2×2 blocks
//! `M_l(k) = [[-λ_l, i(k₁-k₂)], [i(k₁+k₂), λ_l]]`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_gammas, GammaSet, Signature};
use crate::error::{Error, Result};
use crate::linalg::{self, c, cmatrix, CMatrix, CVector, I};
use crate::multop::{FiberFamily, IndexDomain};
use crate::report::{PointValue, SpectrumAccumulator};
use crate::symbol::{negate, principal_sqrt, tol_sing};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberEigenvalue {
    pub value: f64,
    pub multiplicity: u64,
}

/// Truncated Dirac spectrum of F. JSON form:
/// `{ "eigenvalues": [ {"value": λ, "multiplicity": m} ] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberEigenvalueList {
    pub eigenvalues: Vec<FiberEigenvalue>,
}

impl FiberEigenvalueList {
    pub fn new(eigenvalues: Vec<FiberEigenvalue>) -> Result<Self> {
        let list = Self { eigenvalues };
        list.validate()?;
        Ok(list)
    }

    /// Every value with multiplicity 1.
    pub fn simple(values: &[f64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&value| FiberEigenvalue { value, multiplicity: 1 })
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.eigenvalues.is_empty() {
            return Err(Error::MalformedInput("eigenvalue list is empty".into()));
        }
        for (l, e) in self.eigenvalues.iter().enumerate() {
            if !e.value.is_finite() {
                return Err(Error::MalformedInput(format!("eigenvalue {l} is not finite")));
            }
            if e.multiplicity == 0 {
                return Err(Error::MalformedInput(format!("eigenvalue {l} has multiplicity 0")));
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let list: Self = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("eigenvalue file: {e}")))?;
        list.validate()?;
        Ok(list)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `M_l(k)` for the fiber eigenvalue `lambda_l`.
pub fn product_block(lambda_l: f64, k: [i64; 2]) -> CMatrix {
    let (k1, k2) = (k[0] as f64, k[1] as f64);
    cmatrix(
        2,
        2,
        &[c(-lambda_l, 0.0), I * (k1 - k2), I * (k1 + k2), c(lambda_l, 0.0)],
    )
}

/// `λ_l² - k₁² + k₂²`, whose square roots are the eigenvalues of `M_l(k)`.
pub fn block_form(lambda_l: f64, k: [i64; 2]) -> f64 {
    lambda_l * lambda_l - (k[0] * k[0]) as f64 + (k[1] * k[1]) as f64
}

pub fn block_eigenvalues(lambda_l: f64, k: [i64; 2]) -> [Complex64; 2] {
    let root = principal_sqrt(block_form(lambda_l, k));
    [root, negate(root)]
}

/// `(λ - M_l(k))^{-1} = [[λ-λ_l, i(k₁-k₂)], [i(k₁+k₂), λ+λ_l]] / (λ² - λ_l² + k₁² - k₂²)`.
pub fn block_resolvent(lambda_l: f64, k: [i64; 2], lambda: Complex64) -> Result<CMatrix> {
    let form = block_form(lambda_l, k);
    let det = lambda * lambda - form;
    if det.norm() <= tol_sing(lambda, form) {
        return Err(Error::SingularPoint {
            lambda,
            residual: det.norm(),
        });
    }
    let (k1, k2) = (k[0] as f64, k[1] as f64);
    let numerator = cmatrix(
        2,
        2,
        &[lambda - lambda_l, I * (k1 - k2), I * (k1 + k2), lambda + lambda_l],
    );
    Ok(numerator / det)
}

/// The product operator as a family over `k ∈ Z²`: each fiber is the direct
/// sum of `M_l(k)` over the list entries.
#[derive(Debug, Clone)]
pub struct ProductFamily {
    values: Vec<f64>,
}

impl ProductFamily {
    pub fn new(evs: &FiberEigenvalueList) -> Self {
        Self { values: evs.values() }
    }
}

impl FiberFamily for ProductFamily {
    fn domain(&self) -> IndexDomain {
        IndexDomain::Integers(2)
    }

    fn fiber_dim(&self) -> usize {
        2 * self.values.len()
    }

    fn at(&self, k: &[i64]) -> CMatrix {
        let k = [k[0], k[1]];
        let mut m = CMatrix::zeros(self.fiber_dim(), self.fiber_dim());
        for (l, &v) in self.values.iter().enumerate() {
            m.view_mut((2 * l, 2 * l), (2, 2)).copy_from(&product_block(v, k));
        }
        m
    }
}

/// Point spectrum over `l` and `|k|_∞ <= K`, witnesses `[l, k₁, k₂]` with `l`
/// the 0-based position in the eigenvalue list.
pub fn product_point_spectrum(evs: &FiberEigenvalueList, window: u32) -> Result<Vec<PointValue>> {
    evs.validate()?;
    let mut acc = SpectrumAccumulator::new();
    for (l, e) in evs.eigenvalues.iter().enumerate() {
        for k in IndexDomain::Integers(2).window(window) {
            let witness = [l as i64, k[0], k[1]];
            for z in block_eigenvalues(e.value, [k[0], k[1]]) {
                acc.insert(z, &witness);
            }
        }
    }
    Ok(acc.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductOracleCheck {
    pub window: u32,
    pub blocks: usize,
    /// Worst multiset distance between a block's dense eigenvalues and its
    /// closed form.
    pub max_block_deviation: f64,
    /// Hausdorff distance between all dense eigenvalues and the reported values.
    pub deviation: f64,
}

pub fn product_oracle_check(evs: &FiberEigenvalueList, window: u32) -> Result<ProductOracleCheck> {
    let report = product_point_spectrum(evs, window)?;
    let mut numeric = Vec::new();
    let mut max_block_deviation: f64 = 0.0;
    let mut blocks = 0;
    for e in &evs.eigenvalues {
        for k in IndexDomain::Integers(2).window(window) {
            let k = [k[0], k[1]];
            let dense = linalg::eigenvalues(&product_block(e.value, k))?;
            let dev = linalg::multiset_distance(&dense, &block_eigenvalues(e.value, k))
                .ok_or_else(|| Error::Numeric("block eigenvalue count mismatch".into()))?;
            max_block_deviation = max_block_deviation.max(dev);
            numeric.extend(dense);
            blocks += 1;
        }
    }
    let closed: Vec<Complex64> = report.iter().map(PointValue::value).collect();
    Ok(ProductOracleCheck {
        window,
        blocks,
        max_block_deviation,
        deviation: linalg::hausdorff_distance(&numeric, &closed),
    })
}

/// Spinor of Δ_{1,2N+1} written as `ψ₊ ⊗ u(1) + ψ₋ ⊗ u(-1)` with
/// `u(ε) = (1, -εi)/√2` in the last tensor slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpinor {
    pub plus: CVector,
    pub minus: CVector,
}

impl SplitSpinor {
    pub fn norm_sqr(&self) -> f64 {
        self.plus.norm_squared() + self.minus.norm_squared()
    }
}

/// The splitting Δ_{1,2N+1} ≅ Δ_{0,2N} ⊕ Δ_{0,2N}.
#[derive(Debug, Clone)]
pub struct SplitRepresentation {
    n_half: usize,
    /// Gammas of Δ_{0,2N}; absent for `N = 0`.
    inner: Option<GammaSet>,
}

impl SplitRepresentation {
    pub fn new(n_half: usize) -> Result<Self> {
        let inner = if n_half == 0 {
            None
        } else {
            Some(build_gammas(Signature::new(0, 2 * n_half)?)?)
        };
        Ok(Self { n_half, inner })
    }

    pub fn n_half(&self) -> usize {
        self.n_half
    }

    /// Signature `(1, 2N+1)` of the full spinor module.
    pub fn signature(&self) -> Result<Signature> {
        Signature::new(1, 2 * self.n_half + 1)
    }

    pub fn full_dim(&self) -> usize {
        2 << self.n_half
    }

    pub fn half_dim(&self) -> usize {
        1 << self.n_half
    }

    pub fn split(&self, psi: &CVector) -> Result<SplitSpinor> {
        if psi.len() != self.full_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.full_dim(),
                found: psi.len(),
            });
        }
        let s = c(FRAC_1_SQRT_2, 0.0);
        let plus = CVector::from_fn(self.half_dim(), |a, _| (psi[2 * a] + I * psi[2 * a + 1]) * s);
        let minus = CVector::from_fn(self.half_dim(), |a, _| (psi[2 * a] - I * psi[2 * a + 1]) * s);
        Ok(SplitSpinor { plus, minus })
    }

    pub fn unsplit(&self, s: &SplitSpinor) -> Result<CVector> {
        self.check_halves(s)?;
        let r = c(FRAC_1_SQRT_2, 0.0);
        Ok(CVector::from_fn(self.full_dim(), |i, _| {
            let a = i / 2;
            if i % 2 == 0 {
                (s.plus[a] + s.minus[a]) * r
            } else {
                (-I * s.plus[a] + I * s.minus[a]) * r
            }
        }))
    }

    fn check_halves(&self, s: &SplitSpinor) -> Result<()> {
        for half in [&s.plus, &s.minus] {
            if half.len() != self.half_dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.half_dim(),
                    found: half.len(),
                });
            }
        }
        Ok(())
    }

    /// Clifford multiplication by the basis vector `e_j`, `1 <= j <= 2N+2`, in
    /// split coordinates.
    pub fn clifford_action(&self, j: usize, s: &SplitSpinor) -> Result<SplitSpinor> {
        self.check_halves(s)?;
        let n = 2 * self.n_half + 2;
        if j == 0 || j > n {
            return Err(Error::InvalidArgument(format!(
                "basis index {j} outside 1..={n}"
            )));
        }
        Ok(match j {
            1 => SplitSpinor {
                plus: -&s.minus,
                minus: -&s.plus,
            },
            2 => SplitSpinor {
                plus: -&s.minus,
                minus: s.plus.clone(),
            },
            _ => {
                let g = self
                    .inner
                    .as_ref()
                    .expect("j > 2 implies N >= 1")
                    .gamma(j - 2);
                SplitSpinor {
                    plus: -(g * &s.plus),
                    minus: g * &s.minus,
                }
            }
        })
    }

    /// `<ψ, φ>_indef = -<ψ₋, φ₊> - <ψ₊, φ₋>`.
    pub fn indefinite_product(&self, psi: &SplitSpinor, phi: &SplitSpinor) -> Result<Complex64> {
        self.check_halves(psi)?;
        self.check_halves(phi)?;
        Ok(-linalg::hermitian_product(&psi.minus, &phi.plus)
            - linalg::hermitian_product(&psi.plus, &phi.minus))
    }
}

/// Which formula the Friedrich generator applies to a `δ`-twisted coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FriedrichReading {
    /// `z_j + δ_j / 2`.
    #[default]
    Standard,
    /// `z_j (1 + δ_j / 2)`.
    Literal,
}

/// Dirac eigenvalues `±sqrt(Σ_j w_j²)` of the flat torus T^{2N} with spin
/// structure `δ`, over `|z|_∞ <= zmax`. Each `z` contributes `2^{N-1}` to
/// both signs, or `2^N` to zero.
pub fn friedrich_torus_eigenvalues(
    n_half: usize,
    delta: &[u8],
    zmax: u32,
    reading: FriedrichReading,
) -> Result<FiberEigenvalueList> {
    if n_half == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if delta.len() != 2 * n_half {
        return Err(Error::DimensionMismatch {
            expected: 2 * n_half,
            found: delta.len(),
        });
    }
    if let Some(bad) = delta.iter().find(|&&d| d > 1) {
        return Err(Error::InvalidArgument(format!("spin structure bits must be 0 or 1, got {bad}")));
    }
    if 2 * n_half > 62 {
        return Err(Error::InvalidArgument(format!("N = {n_half} is too large")));
    }
    // 4 Σ w_j² is an integer under both readings, so grouping is exact.
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for z in IndexDomain::Integers(2 * n_half).window(zmax) {
        let four_s: i64 = z
            .iter()
            .zip(delta)
            .map(|(&zj, &dj)| {
                let dj = i64::from(dj);
                let twice = match reading {
                    FriedrichReading::Standard => 2 * zj + dj,
                    FriedrichReading::Literal => zj * (2 + dj),
                };
                twice * twice
            })
            .sum();
        *counts.entry(four_s).or_default() += 1;
    }
    let half = 1u64 << (n_half - 1);
    let mut eigenvalues = Vec::new();
    for (&four_s, &count) in &counts {
        if four_s == 0 {
            eigenvalues.push(FiberEigenvalue {
                value: 0.0,
                multiplicity: count * 2 * half,
            });
        } else {
            let value = (four_s as f64).sqrt() / 2.0;
            for v in [-value, value] {
                eigenvalues.push(FiberEigenvalue {
                    value: v,
                    multiplicity: count * half,
                });
            }
        }
    }
    eigenvalues.sort_by(|a, b| a.value.total_cmp(&b.value));
    FiberEigenvalueList::new(eigenvalues)
}
