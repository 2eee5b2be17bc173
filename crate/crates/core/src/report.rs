//! Deduplicated point-spectrum values with witnesses, shared by the torus and
//! product computations, plus the plot-data export.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{self, modulus_arg_key};

/// Absolute tolerance for merging eigenvalues coming from different fibers.
pub const TOL_DEDUP: f64 = 1e-8;

/// One point-spectrum value. Witnesses are lattice indices (or `[l, k1, k2]`
/// for product spectra), listed in enumeration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointValue {
    pub re: f64,
    pub im: f64,
    pub witnesses: Vec<Vec<i64>>,
}

impl PointValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Clusters values within [`TOL_DEDUP`]. The first value seen in a cluster is
/// its representative, so results are deterministic for a fixed input order.
#[derive(Debug, Default)]
pub struct SpectrumAccumulator {
    clusters: Vec<(Complex64, Vec<Vec<i64>>)>,
    tol: f64,
}

impl SpectrumAccumulator {
    pub fn new() -> Self {
        Self::with_tolerance(TOL_DEDUP)
    }

    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            clusters: Vec::new(),
            tol,
        }
    }

    pub fn insert(&mut self, value: Complex64, witness: &[i64]) {
        let value = linalg::normalize_zero(value);
        let cluster = self
            .clusters
            .iter_mut()
            .find(|(rep, _)| (rep - value).norm() <= self.tol);
        match cluster {
            Some((_, witnesses)) => {
                if witnesses.last().map(Vec::as_slice) != Some(witness) {
                    witnesses.push(witness.to_vec());
                }
            }
            None => self.clusters.push((value, vec![witness.to_vec()])),
        }
    }

    /// Values ordered by (|λ|, arg λ).
    pub fn finish(self) -> Vec<PointValue> {
        let mut values: Vec<PointValue> = self
            .clusters
            .into_iter()
            .map(|(z, witnesses)| PointValue {
                re: z.re,
                im: z.im,
                witnesses,
            })
            .collect();
        values.sort_by_key(|v| modulus_arg_key(v.value()));
        values
    }
}

/// True when every value of `a` lies within `tol` of some value of `b` and
/// vice versa.
pub fn same_value_set(a: &[PointValue], b: &[PointValue], tol: f64) -> bool {
    let za: Vec<Complex64> = a.iter().map(PointValue::value).collect();
    let zb: Vec<Complex64> = b.iter().map(PointValue::value).collect();
    linalg::hausdorff_distance(&za, &zb) <= tol
}

/// Writes one CSV row `re,im,witness_count` per point value, in the given
/// order.
pub fn emit_plot_data<W: Write>(values: &[PointValue], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["re", "im", "witness_count"])?;
    for v in values {
        writer.serialize((v.re, v.im, v.witnesses.len()))?;
    }
    writer.flush()?;
    Ok(())
}
