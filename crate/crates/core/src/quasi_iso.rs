//! Quasi-isometry of the Riemannian metrics induced by two frame fields
//! `m ↦ A(m) ∈ SO₀(p,q)` sampled on a grid, and what that implies for the
//! Dirac spectra.
//!
//! Everything here is a semi-decision relative to the sampled grid.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_gammas, Signature};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::multop::DivergenceCriterion;

pub type RMatrix = DMatrix<f64>;

/// Relative tolerance for `AᵀηA = η`; entries of large boosts carry rounding
/// error proportional to `‖A‖²`.
pub const TOL_FRAME: f64 = 1e-9;

/// Rectangular sample grid, enumerated lexicographically (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<Vec<f64>>,
    #[serde(default)]
    pub periodic: bool,
}

impl Grid {
    pub fn new(axes: Vec<Vec<f64>>, periodic: bool) -> Result<Self> {
        if axes.is_empty() || axes.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("grid has no samples".into()));
        }
        if axes.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("grid coordinates must be finite".into()));
        }
        Ok(Self { axes, periodic })
    }

    /// `count` evenly spaced points from `start` to `stop` inclusive on each axis.
    pub fn uniform(ranges: &[(f64, f64, usize)], periodic: bool) -> Result<Self> {
        let axes = ranges
            .iter()
            .map(|&(start, stop, count)| match count {
                0 => Vec::new(),
                1 => vec![start],
                _ => (0..count)
                    .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                    .collect(),
            })
            .collect();
        Self::new(axes, periodic)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-axis indices of sample `s`.
    pub fn multi_index(&self, mut s: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for d in (0..self.dim()).rev() {
            idx[d] = s % self.axes[d].len();
            s /= self.axes[d].len();
        }
        idx
    }

    pub fn point(&self, s: usize) -> Vec<f64> {
        self.multi_index(s)
            .iter()
            .zip(&self.axes)
            .map(|(&i, axis)| axis[i])
            .collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|s| self.point(s)).collect()
    }

    /// Index of the `‖·‖∞` shell around the grid center containing sample `s`.
    pub fn shell(&self, s: usize) -> usize {
        self.multi_index(s)
            .iter()
            .zip(&self.axes)
            .map(|(&i, axis)| (2 * i).abs_diff(axis.len() - 1))
            .max()
            .unwrap_or(0)
    }
}

fn eta(sig: Signature) -> RMatrix {
    RMatrix::from_diagonal(&nalgebra::DVector::from_fn(sig.n(), |j, _| sig.kappa(j)))
}

/// `[[cosh 2a, sinh 2a], [sinh 2a, cosh 2a]]`.
pub fn boost(a: f64) -> RMatrix {
    let (ch, sh) = ((2.0 * a).cosh(), (2.0 * a).sinh());
    RMatrix::from_row_slice(2, 2, &[ch, sh, sh, ch])
}

pub fn real_spectral_norm(m: &RMatrix) -> f64 {
    m.singular_values().max()
}

/// Frame field `m ↦ A(m)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostField {
    signature: Signature,
    grid: Grid,
    frames: Vec<RMatrix>,
    angles: Option<Vec<f64>>,
}

impl BoostField {
    /// Signature (1,1) field `A(m) = boost(a(m))`.
    pub fn from_angle(grid: Grid, a: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let angles: Vec<f64> = grid.points().iter().map(|m| a(m)).collect();
        if let Some(s) = angles.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidFrame {
                sample: s,
                reason: "angle is not finite".into(),
            });
        }
        Ok(Self {
            signature: Signature::new(1, 1)?,
            frames: angles.iter().map(|&a| boost(a)).collect(),
            grid,
            angles: Some(angles),
        })
    }

    /// Tabulated field; every sample must lie in SO₀(p,q).
    pub fn from_frames(signature: Signature, grid: Grid, frames: Vec<RMatrix>) -> Result<Self> {
        if frames.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: frames.len(),
            });
        }
        let n = signature.n();
        let eta = eta(signature);
        for (s, a) in frames.iter().enumerate() {
            let invalid = |reason: String| Error::InvalidFrame { sample: s, reason };
            if a.shape() != (n, n) {
                return Err(invalid(format!("expected a {n}x{n} matrix, got {:?}", a.shape())));
            }
            if a.iter().any(|v| !v.is_finite()) {
                return Err(invalid("entries must be finite".into()));
            }
            let scale = real_spectral_norm(a).powi(2).max(1.0);
            let defect = (a.transpose() * &eta * a - &eta).amax();
            if defect > TOL_FRAME * scale {
                return Err(invalid(format!("not in O(p,q): |AᵀηA - η| = {defect:e}")));
            }
            // In O(p,q) both diagonal blocks have |det| >= 1 and det A is the
            // product of their signs, so the blocks decide the component
            // without the cancellation a full determinant suffers.
            let p = signature.p();
            let block_det = |start: usize, len: usize| {
                if len == 0 {
                    1.0
                } else {
                    a.view((start, start), (len, len)).into_owned().determinant()
                }
            };
            if block_det(0, p) <= 0.0 {
                return Err(invalid("reverses time orientation".into()));
            }
            if block_det(p, n - p) <= 0.0 {
                return Err(invalid("determinant is not +1".into()));
            }
        }
        Ok(Self {
            signature,
            grid,
            frames,
            angles: None,
        })
    }

    /// The constant identity frame on `grid`.
    pub fn identity(signature: Signature, grid: Grid) -> Self {
        let n = signature.n();
        Self {
            signature,
            frames: vec![RMatrix::identity(n, n); grid.len()],
            grid,
            angles: None,
        }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn frames(&self) -> &[RMatrix] {
        &self.frames
    }

    pub fn angles(&self) -> Option<&[f64]> {
        self.angles.as_deref()
    }

    pub fn at(&self, s: usize) -> &RMatrix {
        &self.frames[s]
    }

    /// `A⁻¹ = η Aᵀ η` for `A ∈ O(p,q)`.
    pub fn inverse_at(&self, s: usize) -> RMatrix {
        let eta = eta(self.signature);
        &eta * self.frames[s].transpose() * &eta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameNormScan {
    pub norms: Vec<f64>,
    pub inverse_norms: Vec<f64>,
    pub max_norm: f64,
    pub max_inverse_norm: f64,
    /// First sample (grid order) attaining each maximum.
    pub argmax_norm: usize,
    pub argmax_inverse_norm: usize,
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
}

pub fn frame_norm_scan(field: &BoostField) -> FrameNormScan {
    let norms: Vec<f64> = field.frames.iter().map(real_spectral_norm).collect();
    let inverse_norms: Vec<f64> = (0..field.frames.len())
        .map(|s| real_spectral_norm(&field.inverse_at(s)))
        .collect();
    let (argmax_norm, max_norm) = argmax(&norms);
    let (argmax_inverse_norm, max_inverse_norm) = argmax(&inverse_norms);
    FrameNormScan {
        norms,
        inverse_norms,
        max_norm,
        max_inverse_norm,
        argmax_norm,
        argmax_inverse_norm,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSample {
    pub shell: usize,
    pub sample: usize,
    pub point: Vec<f64>,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum QuasiIsoVerdict {
    /// `C⁻¹h₁ <= h₂ <= C h₁` holds on every sample with the observed `C`.
    QuasiIsometricOnSamples { c: f64, samples: usize, periodic: bool },
    /// Per-shell maxima of `max(‖x‖, ‖x⁻¹‖)` growing strictly toward the grid
    /// boundary and past the threshold.
    UnboundednessEvidence { c: f64, samples: usize, growth: Vec<GrowthSample> },
}

impl QuasiIsoVerdict {
    /// Observed constant `(max_m max(‖x(m)‖, ‖x(m)⁻¹‖))²`.
    pub fn c(&self) -> f64 {
        match self {
            Self::QuasiIsometricOnSamples { c, .. } | Self::UnboundednessEvidence { c, .. } => *c,
        }
    }

    pub fn is_quasi_isometric(&self) -> bool {
        matches!(self, Self::QuasiIsometricOnSamples { .. })
    }
}

pub fn decide_quasi_isometry(f1: &BoostField, f2: &BoostField) -> Result<QuasiIsoVerdict> {
    decide_quasi_isometry_with(f1, f2, DivergenceCriterion::default())
}

pub fn decide_quasi_isometry_with(
    f1: &BoostField,
    f2: &BoostField,
    criterion: DivergenceCriterion,
) -> Result<QuasiIsoVerdict> {
    if f1.signature != f2.signature {
        return Err(Error::InvalidArgument("frame fields have different signatures".into()));
    }
    if f1.grid != f2.grid {
        return Err(Error::InvalidArgument("frame fields are sampled on different grids".into()));
    }
    let grid = &f1.grid;
    let spread: Vec<f64> = (0..grid.len())
        .map(|s| {
            let x = f1.inverse_at(s) * f2.at(s);
            let x_inv = f2.inverse_at(s) * f1.at(s);
            real_spectral_norm(&x).max(real_spectral_norm(&x_inv))
        })
        .collect();
    let (_, max_spread) = argmax(&spread);
    let c = max_spread * max_spread;
    let samples = grid.len();
    if grid.periodic {
        return Ok(QuasiIsoVerdict::QuasiIsometricOnSamples {
            c,
            samples,
            periodic: true,
        });
    }

    let shells = (0..samples).map(|s| grid.shell(s)).max().unwrap_or(0) + 1;
    let mut shell_max: Vec<Option<(usize, f64)>> = vec![None; shells];
    for (s, &v) in spread.iter().enumerate() {
        let slot = &mut shell_max[grid.shell(s)];
        if slot.is_none_or(|(_, best)| v > best) {
            *slot = Some((s, v));
        }
    }
    // Even-length axes only populate every other shell index.
    let shell_max: Vec<(usize, usize, f64)> = shell_max
        .into_iter()
        .enumerate()
        .filter_map(|(shell, best)| best.map(|(s, v)| (shell, s, v)))
        .collect();
    let maxima: Vec<f64> = shell_max.iter().map(|t| t.2).collect();
    if let Some(tail) = criterion.diverging_tail(&maxima).filter(|t| t.len() >= 2) {
        let growth = shell_max[shell_max.len() - tail.len()..]
            .iter()
            .map(|&(shell, sample, norm)| GrowthSample {
                shell,
                sample,
                point: grid.point(sample),
                norm,
            })
            .collect();
        return Ok(QuasiIsoVerdict::UnboundednessEvidence { c, samples, growth });
    }
    Ok(QuasiIsoVerdict::QuasiIsometricOnSamples {
        c,
        samples,
        periodic: false,
    })
}

/// `r(X, Y) = <A(m)⁻¹X, A(m)⁻¹Y>` at sample `s`.
pub fn riemannian_metric_at(field: &BoostField, s: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = field.signature.n();
    field.signature.check_len(x.len())?;
    field.signature.check_len(y.len())?;
    if s >= field.grid.len() {
        return Err(Error::InvalidArgument(format!("sample {s} outside the grid")));
    }
    let inv = field.inverse_at(s);
    let ax = &inv * nalgebra::DVector::from_column_slice(x);
    let ay = &inv * nalgebra::DVector::from_column_slice(y);
    debug_assert_eq!(ax.len(), n);
    Ok(ax.dot(&ay))
}

/// Gram matrix `A⁻ᵀA⁻¹` of the induced metric at sample `s`.
pub fn metric_matrix(field: &BoostField, s: usize) -> RMatrix {
    let inv = field.inverse_at(s);
    inv.transpose() * inv
}

pub fn metric_is_positive_definite(field: &BoostField, s: usize) -> bool {
    metric_matrix(field, s).cholesky().is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralConclusion {
    SpectraCoincide,
    NoConclusion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralNote {
    pub conclusion: SpectralConclusion,
    /// Whether the hypothesis was established only on samples.
    pub sampled: bool,
    pub note: String,
}

pub fn spectral_equality_report(verdict: &QuasiIsoVerdict, compact: bool) -> SpectralNote {
    if compact {
        return SpectralNote {
            conclusion: SpectralConclusion::SpectraCoincide,
            sampled: false,
            note: "compact base: any two bundle metrics are quasi-isometric, so the Dirac \
                   spectra and all their parts coincide"
                .into(),
        };
    }
    match verdict {
        QuasiIsoVerdict::QuasiIsometricOnSamples { c, samples, .. } => SpectralNote {
            conclusion: SpectralConclusion::SpectraCoincide,
            sampled: true,
            note: format!(
                "induced metrics quasi-isometric on {samples} samples with C = {c:e}; \
                 the Dirac spectra and all their parts coincide provided the bound \
                 holds off the grid"
            ),
        },
        QuasiIsoVerdict::UnboundednessEvidence { .. } => SpectralNote {
            conclusion: SpectralConclusion::NoConclusion,
            sampled: true,
            note: "no conclusion: quasi-isometry is not established, and no example is \
                   known where the spectrum changes"
                .into(),
        },
    }
}

/// Spin lift `cosh a - sinh a γ₁γ₂` of `boost(a)` acting on Δ_{1,1}.
pub fn spin_lift(a: f64) -> Result<CMatrix> {
    let g = build_gammas(Signature::new(1, 1)?)?;
    let id = CMatrix::identity(2, 2);
    Ok(id * c(a.cosh(), 0.0) - g.gamma(1) * g.gamma(2) * c(a.sinh(), 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinLiftCheck {
    pub samples: usize,
    /// Worst `|S x S⁻¹ - boost(a) x|` over the basis vectors.
    pub covering_error: f64,
    /// Worst relative deviation of `‖S‖²` from `‖boost(a)‖`.
    pub norm_error: f64,
    pub max_frame_norm: f64,
    pub max_spin_norm: f64,
}

/// Checks on a (1,1) angle field that the spin lift covers each boost and that
/// its norm is the square root of the boost's, so one is bounded iff the
/// other is.
pub fn spin_lift_spot_check(field: &BoostField) -> Result<SpinLiftCheck> {
    let angles = field
        .angles()
        .ok_or_else(|| Error::InvalidArgument("spin lift check needs a (1,1) angle field".into()))?;
    let g = build_gammas(Signature::new(1, 1)?)?;
    let mut check = SpinLiftCheck {
        samples: angles.len(),
        covering_error: 0.0,
        norm_error: 0.0,
        max_frame_norm: 0.0,
        max_spin_norm: 0.0,
    };
    for (s, &a) in angles.iter().enumerate() {
        let lift = spin_lift(a)?;
        let inverse = spin_lift(-a)?;
        let frame = field.at(s);
        for j in 0..2 {
            let mut e = [0.0; 2];
            e[j] = 1.0;
            let moved: Vec<f64> = (0..2).map(|i| frame[(i, j)]).collect();
            let lhs = &lift * g.clifford_matrix(&e)? * &inverse;
            let rhs = g.clifford_matrix(&moved)?;
            let scale = real_spectral_norm(frame).max(1.0);
            check.covering_error = check.covering_error.max(linalg::max_abs_entry(&(lhs - rhs)) / scale);
        }
        let spin_norm = linalg::spectral_norm(&lift);
        let frame_norm = real_spectral_norm(frame);
        check.norm_error = check.norm_error.max((spin_norm * spin_norm - frame_norm).abs() / frame_norm);
        check.max_frame_norm = check.max_frame_norm.max(frame_norm);
        check.max_spin_norm = check.max_spin_norm.max(spin_norm);
    }
    Ok(check)
}

impl SpinLiftCheck {
    pub fn passed(&self) -> bool {
        self.covering_error <= 1e-9 && self.norm_error <= 1e-9
    }
}

/// Serialized grid file: `{"signature": [p, q], "grid": {"axes": [...],
/// "periodic": false}, "frames": [[[row], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFile {
    pub signature: [usize; 2],
    pub grid: Grid,
    pub frames: Vec<Vec<Vec<f64>>>,
}

impl GridFile {
    pub fn into_field(self) -> Result<BoostField> {
        let sig = Signature::new(self.signature[0], self.signature[1])?;
        let grid = Grid::new(self.grid.axes, self.grid.periodic)?;
        let n = sig.n();
        let frames = self
            .frames
            .into_iter()
            .enumerate()
            .map(|(s, rows)| {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidFrame {
                        sample: s,
                        reason: format!("expected a {n}x{n} matrix"),
                    });
                }
                Ok(RMatrix::from_row_iterator(n, n, rows.into_iter().flatten()))
            })
            .collect::<Result<Vec<_>>>()?;
        BoostField::from_frames(sig, grid, frames)
    }
}

pub fn parse_grid_json(text: &str) -> Result<BoostField> {
    let file: GridFile =
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("grid file: {e}")))?;
    file.into_field()
}

/// CSV grid file: header columns starting with `m` are coordinates, the rest
/// are the row-major entries of `A(m)`. Rows must cover a full rectangular
/// grid, in any order.
pub fn parse_grid_csv(text: &str, signature: Signature, periodic: bool) -> Result<BoostField> {
    let malformed = |msg: String| Error::MalformedInput(format!("grid csv: {msg}"));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let d = headers.iter().take_while(|h| h.trim().starts_with('m')).count();
    let n = signature.n();
    if d == 0 {
        return Err(malformed("no coordinate columns (expected m1, m2, ...)".into()));
    }
    if headers.len() != d + n * n {
        return Err(malformed(format!(
            "expected {d} coordinate columns and {} matrix entries, got {} columns",
            n * n,
            headers.len()
        )));
    }
    let mut rows: Vec<(Vec<f64>, RMatrix)> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| malformed(format!("row {}: {e}", line + 1)))?;
        let (coords, entries) = values.split_at(d);
        rows.push((coords.to_vec(), RMatrix::from_row_slice(n, n, entries)));
    }
    if rows.is_empty() {
        return Err(malformed("no samples".into()));
    }
    let mut axes: Vec<Vec<f64>> = vec![Vec::new(); d];
    for (coords, _) in &rows {
        for (axis, &v) in axes.iter_mut().zip(coords) {
            axis.push(v);
        }
    }
    for axis in &mut axes {
        axis.sort_by(f64::total_cmp);
        axis.dedup();
    }
    let grid = Grid::new(axes, periodic)?;
    if grid.len() != rows.len() {
        return Err(malformed(format!(
            "{} rows do not form a rectangular grid of {} samples",
            rows.len(),
            grid.len()
        )));
    }
    let position = |coords: &[f64]| -> usize {
        coords.iter().zip(&grid.axes).fold(0, |acc, (v, axis)| {
            acc * axis.len() + axis.iter().position(|a| a == v).expect("coordinate from this grid")
        })
    };
    let mut frames: Vec<Option<RMatrix>> = vec![None; grid.len()];
    for (coords, frame) in rows {
        let slot = &mut frames[position(&coords)];
        if slot.is_some() {
            return Err(malformed(format!("duplicate sample at {coords:?}")));
        }
        *slot = Some(frame);
    }
    let frames = frames.into_iter().map(|f| f.expect("every slot filled")).collect();
    BoostField::from_frames(signature, grid, frames)
}
