//! Dense complex linear algebra helpers shared by the spectral modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for anything that passes through floating-point eigen/SVD routines.
pub const TOL_FLOAT: f64 = 1e-12;

const SCHUR_MAX_ITER: usize = 10_000;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cmatrix(rows: usize, cols: usize, entries: &[Complex64]) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, entries)
}

pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Smallest and largest singular values, in that order.
pub fn singular_extremes(m: &CMatrix) -> (f64, f64) {
    let sv = m.clone().singular_values();
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sv.iter().copied().fold(0.0, f64::max);
    (min, max)
}

/// Eigenvalues of a general complex square matrix via the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    // Already triangular: read off the diagonal. The Schur iteration also
    // fails to converge on the zero matrix.
    let n = m.nrows();
    if (0..n).all(|j| (j + 1..n).all(|i| m[(i, j)] == Complex64::new(0.0, 0.0))) {
        return Ok(m.diagonal().iter().copied().collect());
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
    let values = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numeric("Schur form is not triangular".into()))?;
    Ok(values.iter().copied().collect())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Standard positive-definite product `sum v_i conj(w_i)`.
pub fn hermitian_product(v: &CVector, w: &CVector) -> Complex64 {
    v.iter().zip(w.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Symmetric Hausdorff distance between two finite point sets in the complex plane.
pub fn hausdorff_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let directed = |from: &[Complex64], to: &[Complex64]| {
        from.iter()
            .map(|x| to.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed(a, b).max(directed(b, a)),
    }
}

/// Greedy matching of two multisets; returns the largest matched distance, or
/// `None` when the sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pool: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0_f64;
    for x in a {
        let (idx, dist) = pool
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|l, r| l.1.total_cmp(&r.1))?;
        worst = worst.max(dist);
        pool.swap_remove(idx);
    }
    Some(worst)
}

/// Relative radius for grouping computed eigenvalues into clusters. A defective
/// eigenvalue of a Jordan block of size 2 is only resolved to about
/// `sqrt(eps) ‖A‖`, far inside this radius.
pub const TOL_CLUSTER: f64 = 1e-6;

/// Groups values by single linkage within `TOL_CLUSTER * (1 + max |z|)` and
/// returns each cluster's mean, in order of first appearance. Cluster means
/// stay well-conditioned when the individual eigenvalues are not.
pub fn cluster_means(values: &[Complex64]) -> Vec<Complex64> {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = TOL_CLUSTER * (1.0 + scale);
    let mut label: Vec<Option<usize>> = vec![None; values.len()];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..values.len() {
        if label[start].is_some() {
            continue;
        }
        let id = clusters.len();
        label[start] = Some(id);
        let mut members = vec![start];
        let mut next = 0;
        while next < members.len() {
            let z = values[members[next]];
            for (j, slot) in label.iter_mut().enumerate() {
                if slot.is_none() && (values[j] - z).norm() <= tol {
                    *slot = Some(id);
                    members.push(j);
                }
            }
            next += 1;
        }
        clusters.push(members);
    }
    clusters
        .iter()
        .map(|m| m.iter().map(|&i| values[i]).sum::<Complex64>() / m.len() as f64)
        .collect()
}

/// Replaces negative zeros so that serialized output never shows `-0.0`.
pub fn normalize_zero(z: Complex64) -> Complex64 {
    let fix = |x: f64| if x == 0.0 { 0.0 } else { x };
    Complex64::new(fix(z.re), fix(z.im))
}

/// Sort key ordering values by modulus, then argument in (-pi, pi].
/// Moduli are quantized so values equal up to rounding sort by argument.
pub fn modulus_arg_key(z: Complex64) -> (i64, i64) {
    let modulus = (z.norm() * 1e9).round() as i64;
    let arg = if z.norm() == 0.0 { 0 } else { (z.arg() * 1e9).round() as i64 };
    (modulus, arg)
}
