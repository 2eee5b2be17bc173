//! Generalized multiplication operators over lattice index sets.
//!
//! An operator acting fiberwise by a family of finite matrices `A(k)` has point
//! spectrum equal to the union of the fiber spectra, and continuous spectrum
//! equal to the set of `λ` for which `‖(λ - A(k))^{-1}‖` is unbounded in `k`.
//! Finite matrices have no residual spectrum, so the residual spectrum of the
//! operator is empty; nothing here tries to compute it.
//!
//! Unboundedness over an infinite lattice cannot be decided from samples.
//! [`classify`] therefore reports what it checked: a window for point
//! spectrum and a ray scan for resolvent growth.

use itertools::Itertools;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, TOL_FLOAT};
use crate::report::{PointValue, SpectrumAccumulator};

/// Default bound on the total dimension of a densely assembled oracle matrix.
pub const DEFAULT_ORACLE_CAP: usize = 4096;

pub const ORACLE_CAP_ENV: &str = "DIRAC_SPECTRA_ORACLE_CAP";

/// Reads the oracle cap override from the environment.
pub fn oracle_cap_from_env() -> Result<usize> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{ORACLE_CAP_ENV} must be a positive integer, got {raw:?}"))
        }),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexDomain {
    /// `Z^n`; the window `K` is `|k|_∞ <= K`.
    Integers(usize),
    /// `N^n`; the window `K` is `0 <= k_i <= K`.
    Naturals(usize),
}

impl IndexDomain {
    pub fn rank(&self) -> usize {
        match *self {
            Self::Integers(n) | Self::Naturals(n) => n,
        }
    }

    pub fn window_len(&self, window: u32) -> usize {
        let side = match self {
            Self::Integers(_) => 2 * window as usize + 1,
            Self::Naturals(_) => window as usize + 1,
        };
        side.pow(self.rank() as u32)
    }

    /// Window indices in lexicographic order.
    pub fn window(&self, window: u32) -> Vec<Vec<i64>> {
        let w = i64::from(window);
        let range = match self {
            Self::Integers(_) => -w..=w,
            Self::Naturals(_) => 0..=w,
        };
        std::iter::repeat_n(range, self.rank())
            .multi_cartesian_product()
            .collect()
    }
}

/// A family of `d x d` fiber matrices indexed by a lattice.
///
/// `at` must accept every index of rank `domain().rank()`; implementations may
/// panic on indices of the wrong length.
pub trait FiberFamily: Send + Sync {
    fn domain(&self) -> IndexDomain;
    fn fiber_dim(&self) -> usize;
    fn at(&self, k: &[i64]) -> CMatrix;
}

impl<F: FiberFamily + ?Sized> FiberFamily for &F {
    fn domain(&self) -> IndexDomain {
        (**self).domain()
    }
    fn fiber_dim(&self) -> usize {
        (**self).fiber_dim()
    }
    fn at(&self, k: &[i64]) -> CMatrix {
        (**self).at(k)
    }
}

type FiberFn = dyn Fn(&[i64]) -> CMatrix + Send + Sync;

/// A family defined by a closure.
pub struct FnFamily {
    domain: IndexDomain,
    fiber_dim: usize,
    f: Box<FiberFn>,
}

impl FnFamily {
    pub fn new(
        domain: IndexDomain,
        fiber_dim: usize,
        f: impl Fn(&[i64]) -> CMatrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            fiber_dim,
            f: Box::new(f),
        }
    }

    pub fn constant(domain: IndexDomain, matrix: CMatrix) -> Self {
        let dim = matrix.nrows();
        Self::new(domain, dim, move |_| matrix.clone())
    }
}

impl FiberFamily for FnFamily {
    fn domain(&self) -> IndexDomain {
        self.domain
    }
    fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }
    fn at(&self, k: &[i64]) -> CMatrix {
        (self.f)(k)
    }
}

/// The Hilbert-space adjoint family `k ↦ A(k)*`.
pub struct Adjoint<F>(pub F);

pub fn adjoint_family<F: FiberFamily>(family: F) -> Adjoint<F> {
    Adjoint(family)
}

impl<F: FiberFamily> FiberFamily for Adjoint<F> {
    fn domain(&self) -> IndexDomain {
        self.0.domain()
    }
    fn fiber_dim(&self) -> usize {
        self.0.fiber_dim()
    }
    fn at(&self, k: &[i64]) -> CMatrix {
        self.0.at(k).adjoint()
    }
}

/// `λ I - A` is treated as singular when its smallest singular value is below
/// `TOL_FLOAT * max(1, largest singular value)`.
pub fn is_singular(shifted: &CMatrix) -> bool {
    let (min, max) = linalg::singular_extremes(shifted);
    min <= TOL_FLOAT * max.max(1.0)
}

fn shifted(family: &impl FiberFamily, lambda: Complex64, k: &[i64]) -> CMatrix {
    let d = family.fiber_dim();
    CMatrix::identity(d, d) * lambda - family.at(k)
}

/// Union of the fiber eigenvalues over the window, deduplicated, with the
/// indices that produce each value.
pub fn point_spectrum(family: &impl FiberFamily, window: u32) -> Result<Vec<PointValue>> {
    let mut acc = SpectrumAccumulator::new();
    for k in family.domain().window(window) {
        for value in linalg::eigenvalues(&family.at(&k))? {
            acc.insert(value, &k);
        }
    }
    Ok(acc.finish())
}

/// The lattice ray `j ↦ j * direction`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ray {
    pub direction: Vec<i64>,
}

impl Ray {
    pub fn new(direction: Vec<i64>) -> Self {
        Self { direction }
    }

    /// `e_1 + e_{p+1}`, the light-like direction used for the divergence scans.
    pub fn null(p: usize, n: usize) -> Result<Self> {
        if p == 0 || p >= n {
            return Err(Error::InvalidArgument(format!(
                "a null ray needs both time-like and space-like directions (p={p}, n={n})"
            )));
        }
        let mut direction = vec![0; n];
        direction[0] = 1;
        direction[p] = 1;
        Ok(Self { direction })
    }

    pub fn point(&self, j: u64) -> Vec<i64> {
        self.direction.iter().map(|d| d * j as i64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSample {
    pub j: u64,
    pub index: Vec<i64>,
    /// `None` when `λ` is an eigenvalue of this fiber.
    pub norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventScan {
    pub lambda: Complex64,
    pub samples: Vec<ScanSample>,
}

impl ResolventScan {
    pub fn norms(&self) -> Vec<Option<f64>> {
        self.samples.iter().map(|s| s.norm).collect()
    }

    pub fn first_singular(&self) -> Option<&ScanSample> {
        self.samples.iter().find(|s| s.norm.is_none())
    }

    pub fn first_exceeding(&self, threshold: f64) -> Option<&ScanSample> {
        self.samples
            .iter()
            .find(|s| s.norm.is_some_and(|n| n > threshold))
    }
}

fn scan_sample(family: &impl FiberFamily, lambda: Complex64, ray: &Ray, j: u64) -> ScanSample {
    let index = ray.point(j);
    let m = shifted(family, lambda, &index);
    let (min, max) = linalg::singular_extremes(&m);
    let norm = (min > TOL_FLOAT * max.max(1.0)).then(|| 1.0 / min);
    ScanSample { j, index, norm }
}

fn check_ray(family: &impl FiberFamily, ray: &Ray) -> Result<()> {
    let rank = family.domain().rank();
    if ray.direction.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            found: ray.direction.len(),
        });
    }
    Ok(())
}

/// `‖(λ - A(ray(j)))^{-1}‖` for `j = 1..=j_max`.
pub fn resolvent_scan(
    family: &impl FiberFamily,
    lambda: Complex64,
    ray: &Ray,
    j_max: u64,
) -> Result<ResolventScan> {
    check_ray(family, ray)?;
    let samples = (1..=j_max).map(|j| scan_sample(family, lambda, ray, j)).collect();
    Ok(ResolventScan { lambda, samples })
}

/// Like [`resolvent_scan`] but stops after the first norm above `stop_above`.
pub fn resolvent_scan_until(
    family: &impl FiberFamily,
    lambda: Complex64,
    ray: &Ray,
    j_max: u64,
    stop_above: f64,
) -> Result<ResolventScan> {
    check_ray(family, ray)?;
    let mut samples = Vec::new();
    for j in 1..=j_max {
        let sample = scan_sample(family, lambda, ray, j);
        let done = sample.norm.is_some_and(|n| n > stop_above);
        samples.push(sample);
        if done {
            break;
        }
    }
    Ok(ResolventScan { lambda, samples })
}

/// Evidentiary standard for resolvent divergence: the largest norm must exceed
/// `threshold` and the last `ceil(j_max / tail_divisor)` norms must be strictly
/// increasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceCriterion {
    pub threshold: f64,
    pub tail_divisor: usize,
}

impl Default for DivergenceCriterion {
    fn default() -> Self {
        Self {
            threshold: 1e3,
            tail_divisor: 4,
        }
    }
}

impl DivergenceCriterion {
    /// Returns the strictly increasing tail when the sequence satisfies the
    /// criterion.
    pub fn diverging_tail<'a>(&self, norms: &'a [f64]) -> Option<&'a [f64]> {
        if norms.is_empty() {
            return None;
        }
        let tail_len = norms.len().div_ceil(self.tail_divisor).max(1);
        let tail = &norms[norms.len() - tail_len..];
        let increasing = tail.windows(2).all(|w| w[1] > w[0]);
        let exceeds = tail.last().is_some_and(|&n| n > self.threshold);
        (increasing && exceeds).then_some(tail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Point,
    ContinuousEvidence,
    ResolventBounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WitnessValue {
    Eigenvalue(Complex64),
    ResolventNorm(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub index: Vec<i64>,
    pub value: WitnessValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumClassification {
    pub lambda: Complex64,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Window searched for eigenvalues.
    pub window: u32,
    /// Number of ray samples scanned.
    pub scanned: u64,
}

fn eigen_witness(family: &impl FiberFamily, lambda: Complex64, k: &[i64]) -> Result<Witness> {
    let closest = linalg::eigenvalues(&family.at(k))?
        .into_iter()
        .min_by(|a, b| (a - lambda).norm().total_cmp(&(b - lambda).norm()))
        .unwrap_or(lambda);
    Ok(Witness {
        index: k.to_vec(),
        value: WitnessValue::Eigenvalue(closest),
    })
}

/// Point if `λ` is a fiber eigenvalue inside the window (or on a scanned ray
/// sample); otherwise continuous-spectrum evidence if the ray scan meets
/// `criterion`; otherwise bounded on what was checked.
pub fn classify(
    family: &impl FiberFamily,
    lambda: Complex64,
    window: u32,
    ray: &Ray,
    j_max: u64,
    criterion: DivergenceCriterion,
) -> Result<SpectrumClassification> {
    let mut point_witnesses = Vec::new();
    for k in family.domain().window(window) {
        if is_singular(&shifted(family, lambda, &k)) {
            point_witnesses.push(eigen_witness(family, lambda, &k)?);
        }
    }
    let classification = |verdict, witnesses, scanned| SpectrumClassification {
        lambda,
        verdict,
        witnesses,
        window,
        scanned,
    };
    if !point_witnesses.is_empty() {
        return Ok(classification(Verdict::Point, point_witnesses, 0));
    }

    let scan = resolvent_scan(family, lambda, ray, j_max)?;
    if let Some(sample) = scan.first_singular() {
        let witness = eigen_witness(family, lambda, &sample.index)?;
        return Ok(classification(Verdict::Point, vec![witness], j_max));
    }
    let norms: Vec<f64> = scan.samples.iter().filter_map(|s| s.norm).collect();
    if let Some(tail) = criterion.diverging_tail(&norms) {
        let start = scan.samples.len() - tail.len();
        let witnesses = scan.samples[start..]
            .iter()
            .map(|s| Witness {
                index: s.index.clone(),
                value: WitnessValue::ResolventNorm(s.norm.unwrap_or(f64::INFINITY)),
            })
            .collect();
        return Ok(classification(Verdict::ContinuousEvidence, witnesses, j_max));
    }
    let witnesses = scan
        .samples
        .iter()
        .max_by(|a, b| a.norm.unwrap_or(0.0).total_cmp(&b.norm.unwrap_or(0.0)))
        .map(|s| Witness {
            index: s.index.clone(),
            value: WitnessValue::ResolventNorm(s.norm.unwrap_or(0.0)),
        })
        .into_iter()
        .collect();
    Ok(classification(Verdict::ResolventBounded, witnesses, j_max))
}

/// Finite section of the multiplication operator: the fibers over the window
/// as diagonal blocks, in lexicographic index order.
#[derive(Debug, Clone)]
pub struct BlockDiagonal {
    pub blocks: Vec<(Vec<i64>, CMatrix)>,
}

impl BlockDiagonal {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(_, b)| b.nrows()).sum()
    }

    pub fn to_dense(&self, oracle_cap: usize) -> Result<CMatrix> {
        let dim = self.dim();
        if dim > oracle_cap {
            return Err(Error::OracleCapExceeded { dim, cap: oracle_cap });
        }
        let mut dense = CMatrix::zeros(dim, dim);
        let mut offset = 0;
        for (_, block) in &self.blocks {
            let d = block.nrows();
            dense.view_mut((offset, offset), (d, d)).copy_from(block);
            offset += d;
        }
        Ok(dense)
    }

    /// Eigenvalues of the direct sum, computed block by block with the dense
    /// eigensolver.
    pub fn blockwise_eigenvalues(&self) -> Result<Vec<Complex64>> {
        let mut values = Vec::with_capacity(self.dim());
        for (_, block) in &self.blocks {
            values.extend(linalg::eigenvalues(block)?);
        }
        Ok(values)
    }
}

pub fn truncated_blocks(family: &impl FiberFamily, window: u32) -> BlockDiagonal {
    let blocks = family
        .domain()
        .window(window)
        .into_iter()
        .map(|k| {
            let block = family.at(&k);
            (k, block)
        })
        .collect();
    BlockDiagonal { blocks }
}

/// Dense block-diagonal finite section. Fails before evaluating any fiber when
/// the total dimension exceeds `oracle_cap`.
pub fn truncated_matrix(family: &impl FiberFamily, window: u32, oracle_cap: usize) -> Result<CMatrix> {
    let dim = family.fiber_dim() * family.domain().window_len(window);
    if dim > oracle_cap {
        return Err(Error::OracleCapExceeded { dim, cap: oracle_cap });
    }
    truncated_blocks(family, window).to_dense(oracle_cap)
}
