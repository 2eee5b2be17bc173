//! Dirac spectra on the flat spaces R^{p,q} and T^{p,q} (trivial spin
//! structure).
//!
//! On the torus the point spectrum is `{ ±sqrt<k,k> : k ∈ Z^n }` and every
//! other `λ` lies in the continuous spectrum, witnessed by the resolvent
//! growing along the null ray `j (e_1 + e_{p+1})`. On R^{p,q} the point
//! spectrum is empty and the same growth happens along the continuous ray.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{Signature, DEFAULT_DIM_CAP};
use crate::error::{Error, Result};
use crate::linalg::{self, TOL_FLOAT};
use crate::multop::{self, Ray};
use crate::report::PointValue;
use crate::symbol::{negate, principal_sqrt, DiracSymbol};

pub(crate) fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let z = linalg::normalize_zero(*z);
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusSpectrumReport {
    pub signature: [usize; 2],
    pub window: u32,
    pub point: Vec<PointValue>,
    pub scans: Vec<ReportScan>,
    /// Each witness contributes this multiplicity, `2^{m-1}`.
    #[serde(skip)]
    pub multiplicity_per_witness: usize,
}

/// Scan entry as it appears in the report JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportScan {
    #[serde(serialize_with = "serialize_complex")]
    pub lambda: Complex64,
    pub ray: String,
    pub norms: Vec<f64>,
}

/// Resolvent norms along a ray together with the analytic lower bound at each
/// sample (empty when no bound applies).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    #[serde(serialize_with = "serialize_complex")]
    pub lambda: Complex64,
    pub ray: String,
    /// Ray parameter per sample: `a` (or `j`) along a ray, `ε` on the sphere.
    pub parameters: Vec<f64>,
    pub norms: Vec<f64>,
    pub lower_bounds: Vec<f64>,
}

impl ScanRecord {
    pub fn respects_lower_bound(&self) -> bool {
        self.norms
            .iter()
            .zip(&self.lower_bounds)
            .all(|(n, b)| *n >= b * (1.0 - TOL_FLOAT))
    }

    pub fn first_exceeding(&self, threshold: f64) -> Option<usize> {
        self.norms.iter().position(|&n| n > threshold)
    }

    pub fn to_report_scan(&self) -> ReportScan {
        ReportScan {
            lambda: self.lambda,
            ray: self.ray.clone(),
            norms: self.norms.clone(),
        }
    }
}

fn check_dim(sig: Signature) -> Result<()> {
    if sig.n() > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCapExceeded {
            n: sig.n(),
            cap: DEFAULT_DIM_CAP,
        });
    }
    Ok(())
}

/// Closed-form point spectrum over the window `|k|_∞ <= K`. Values are grouped
/// by the integer `<k,k>`, so no tolerance is involved.
pub fn torus_point_spectrum(sig: Signature, window: u32) -> Result<TorusSpectrumReport> {
    check_dim(sig)?;
    let mut by_form: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    for k in multop::IndexDomain::Integers(sig.n()).window(window) {
        by_form.entry(sig.lattice_form(&k)).or_default().push(k);
    }
    let mut point = Vec::new();
    for (form, witnesses) in by_form {
        let root = principal_sqrt(form as f64);
        let mut push = |z: Complex64| {
            point.push(PointValue {
                re: z.re,
                im: z.im,
                witnesses: witnesses.clone(),
            })
        };
        push(root);
        if form != 0 {
            push(negate(root));
        }
    }
    point.sort_by_key(|v| linalg::modulus_arg_key(v.value()));
    Ok(TorusSpectrumReport {
        signature: [sig.p(), sig.q()],
        window,
        point,
        scans: Vec::new(),
        multiplicity_per_witness: sig.spinor_dim() / 2,
    })
}

/// How the finite-section oracle diagonalizes the truncated operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Assemble the full block-diagonal matrix (refused above `cap`) and run the
    /// dense eigensolver on it.
    Dense { cap: usize },
    /// Run the dense eigensolver on each diagonal block of the finite section.
    Blockwise,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub signature: [usize; 2],
    pub window: u32,
    pub mode: &'static str,
    pub dimension: usize,
    pub eigenvalue_count: usize,
    /// Hausdorff distance between the raw numerical and closed-form value sets.
    pub deviation: f64,
    /// Same, after replacing eigenvalue clusters by their means (per block in
    /// blockwise mode).
    pub refined_deviation: f64,
}

pub fn torus_oracle_check(sig: Signature, window: u32, mode: OracleMode) -> Result<OracleCheck> {
    let report = torus_point_spectrum(sig, window)?;
    let symbol = DiracSymbol::new(sig)?;
    let dimension = symbol.spinor_dim() * multop::IndexDomain::Integers(sig.n()).window_len(window);
    let (numeric, refined, mode_name) = match mode {
        OracleMode::Dense { cap } => {
            let dense = multop::truncated_matrix(&symbol, window, cap)?;
            let values = linalg::eigenvalues(&dense)?;
            let refined = linalg::cluster_means(&values);
            (values, refined, "dense")
        }
        OracleMode::Blockwise => {
            let mut values = Vec::with_capacity(dimension);
            let mut refined = Vec::new();
            for (_, block) in &multop::truncated_blocks(&symbol, window).blocks {
                let block_values = linalg::eigenvalues(block)?;
                refined.extend(linalg::cluster_means(&block_values));
                values.extend(block_values);
            }
            (values, refined, "blockwise")
        }
    };
    let closed: Vec<Complex64> = report.point.iter().map(PointValue::value).collect();
    Ok(OracleCheck {
        signature: [sig.p(), sig.q()],
        window,
        mode: mode_name,
        dimension,
        eigenvalue_count: numeric.len(),
        deviation: linalg::hausdorff_distance(&numeric, &closed),
        refined_deviation: linalg::hausdorff_distance(&refined, &closed),
    })
}

fn null_direction(sig: Signature) -> Result<Vec<f64>> {
    let ray = Ray::null(sig.p(), sig.n())?;
    Ok(ray.direction.iter().map(|&d| d as f64).collect())
}

/// Number of sphere samples used for `λ = 0`, at offsets `10^-1 .. 10^-6`.
pub const SPHERE_OFFSETS: i32 = 6;

/// Continuous-spectrum evidence on R^{p,q}.
///
/// For `λ ≠ 0` the resolvent is sampled at `a (e_1 + e_{p+1})`, `a = 1..=j_max`,
/// with lower bound `|a ‖A(X_0)‖ - |λ|| / |λ|²`. For `λ = 0` it is sampled on
/// the Euclidean unit circle in the `(e_1, e_{p+1})` plane at angle offsets
/// `ε = 10^-i` from the null direction, with lower bound `1 / |<x,x>|`.
pub fn minkowski_continuous_evidence(sig: Signature, lambda: Complex64, j_max: u64) -> Result<ScanRecord> {
    if j_max < 2 {
        return Err(Error::InvalidArgument(format!("j_max must be at least 2, got {j_max}")));
    }
    let symbol = DiracSymbol::new(sig)?;
    let x0 = null_direction(sig)?;

    if lambda == Complex64::new(0.0, 0.0) {
        let mut record = ScanRecord {
            lambda,
            ray: "sphere".into(),
            parameters: Vec::new(),
            norms: Vec::new(),
            lower_bounds: Vec::new(),
        };
        for i in 1..=SPHERE_OFFSETS {
            let eps = 10f64.powi(-i);
            let angle = FRAC_PI_4 + eps;
            let mut x = vec![0.0; sig.n()];
            x[0] = angle.cos();
            x[sig.p()] = angle.sin();
            let form = sig.quadratic_form(&x);
            record.parameters.push(eps);
            record.norms.push(symbol.resolvent_norm(&x, lambda)?);
            record.lower_bounds.push(1.0 / form.abs());
        }
        return Ok(record);
    }

    let a0 = linalg::spectral_norm(&symbol.at(&x0)?);
    let mut record = ScanRecord {
        lambda,
        ray: "null".into(),
        parameters: Vec::with_capacity(j_max as usize),
        norms: Vec::with_capacity(j_max as usize),
        lower_bounds: Vec::with_capacity(j_max as usize),
    };
    for a in 1..=j_max {
        let a = a as f64;
        let x: Vec<f64> = x0.iter().map(|v| a * v).collect();
        record.parameters.push(a);
        record.norms.push(symbol.resolvent_norm(&x, lambda)?);
        record
            .lower_bounds
            .push((a * a0 - lambda.norm()).abs() / lambda.norm_sqr());
    }
    Ok(record)
}

/// Continuous-spectrum evidence on T^{p,q}: resolvent norms of the lattice
/// family along `ray`, stopping early once a norm exceeds `stop_above`.
/// The reverse-triangle lower bound is attached when the ray is light-like.
pub fn torus_continuous_evidence(
    sig: Signature,
    lambda: Complex64,
    ray: &Ray,
    j_max: u64,
    stop_above: Option<f64>,
) -> Result<ScanRecord> {
    let symbol = DiracSymbol::new(sig)?;
    let scan = match stop_above {
        Some(t) => multop::resolvent_scan_until(&symbol, lambda, ray, j_max, t)?,
        None => multop::resolvent_scan(&symbol, lambda, ray, j_max)?,
    };
    if let Some(sample) = scan.first_singular() {
        return Err(Error::InvalidArgument(format!(
            "lambda = {lambda} is an eigenvalue of the fiber at {:?}",
            sample.index
        )));
    }
    let norms: Vec<f64> = scan.samples.iter().filter_map(|s| s.norm).collect();
    let parameters: Vec<f64> = scan.samples.iter().map(|s| s.j as f64).collect();
    let direction = ray.direction.clone();
    let is_null = sig.lattice_form(&direction) == 0 && direction.iter().any(|&d| d != 0);
    let lower_bounds = if is_null && lambda.norm() > 0.0 {
        let d: Vec<f64> = direction.iter().map(|&v| v as f64).collect();
        let a0 = linalg::spectral_norm(&symbol.at(&d)?);
        parameters
            .iter()
            .map(|j| (j * a0 - lambda.norm()).abs() / lambda.norm_sqr())
            .collect()
    } else {
        Vec::new()
    };
    let ray_name = if Ray::null(sig.p(), sig.n()).is_ok_and(|r| r == *ray) {
        "null".to_string()
    } else {
        format!(
            "custom:{}",
            direction.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
        )
    };
    Ok(ScanRecord {
        lambda,
        ray: ray_name,
        parameters,
        norms,
        lower_bounds,
    })
}
