//! Timing harness comparing the linear-time verifier with the pairwise oracle.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analytic::{from_signature, sample, Flavor};
use crate::error::{Error, Result};
use crate::signatures::Signature;
use crate::spacing::{verify, verify_naive, LabeledPointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Alg1,
    Naive,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Naive => "naive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub point_count: usize,
    pub class_count: usize,
    pub dimension: usize,
    pub repeats: usize,
    pub median_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Both verifiers accepted or rejected together on every instance.
    pub verdicts_agree: bool,
}

pub const CSV_HEADER: &str = "algorithm,point_count,class_count,dimension,repeats,median_seconds";

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{:e}\n",
                r.algorithm.name(),
                r.point_count,
                r.class_count,
                r.dimension,
                r.repeats,
                r.median_seconds
            ));
        }
        out
    }

    /// Median-time ratios between consecutive sizes for one algorithm.
    pub fn doubling_ratios(&self, algorithm: Algorithm) -> Vec<f64> {
        let times: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .map(|r| r.median_seconds)
            .collect();
        times.windows(2).map(|w| w[1] / w[0]).collect()
    }

    pub fn median(&self, algorithm: Algorithm, point_count: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.point_count == point_count)
            .map(|r| r.median_seconds)
    }
}

/// Coincident-center signature with `classes` positive classes whose support
/// dimensions split `dim` as evenly as possible.
pub fn bench_signature(classes: usize, dim: usize) -> Result<Signature> {
    if classes == 0 || dim < classes {
        return Err(Error::OutOfRange(format!(
            "need 1 <= classes <= dim, got {classes} classes in dimension {dim}"
        )));
    }
    let base = dim / classes;
    let extra = dim % classes;
    let d = (0..classes).map(|i| base + usize::from(i < extra)).collect();
    Signature::new(0, d)
}

/// Accepted instance with `point_count` points split evenly over the classes.
pub fn bench_instance(
    point_count: usize,
    classes: usize,
    dim: usize,
    seed: u64,
) -> Result<LabeledPointSet> {
    let sig = bench_signature(classes, dim)?;
    let spacing = from_signature(&sig, Flavor::Coincident, 0.5, 0)?;
    let per_class = point_count.div_ceil(classes).max(1);
    let mut y = sample(&spacing, per_class, seed)?;
    let mut excess = y.point_count().saturating_sub(point_count);
    for c in y.classes.iter_mut().rev() {
        while excess > 0 && c.points.len() > 1 {
            c.points.pop();
            excess -= 1;
        }
    }
    Ok(y)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Times both verifiers on one instance per size; sizes must be ascending.
pub fn bench_verify(
    sizes: &[usize],
    classes: usize,
    dim: usize,
    repeats: usize,
    seed: u64,
    tol: f64,
) -> Result<BenchReport> {
    if repeats == 0 {
        return Err(Error::OutOfRange("repeats must be at least 1".into()));
    }
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("sizes must be nonempty and ascending".into()));
    }
    let instances = sizes
        .iter()
        .map(|&size| bench_instance(size, classes, dim, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut verdicts_agree = true;
    // warm-up pass, untimed
    for y in &instances {
        verdicts_agree &= verify(y, tol).accepted == verify_naive(y, tol).accepted;
    }
    // rounds sweep every size, so a burst of machine load hits all sizes alike
    let mut fast = vec![Vec::with_capacity(repeats); instances.len()];
    let mut slow = vec![Vec::with_capacity(repeats); instances.len()];
    for _ in 0..repeats {
        for (k, y) in instances.iter().enumerate() {
            let t = Instant::now();
            let a = verify(y, tol);
            fast[k].push(t.elapsed().as_secs_f64());
            let t = Instant::now();
            let b = verify_naive(y, tol);
            slow[k].push(t.elapsed().as_secs_f64());
            verdicts_agree &= a.accepted == b.accepted;
        }
    }
    let mut rows = Vec::new();
    for (k, y) in instances.iter().enumerate() {
        for (algorithm, times) in [(Algorithm::Alg1, &fast[k]), (Algorithm::Naive, &slow[k])] {
            rows.push(BenchRow {
                algorithm,
                point_count: y.point_count(),
                class_count: classes,
                dimension: dim,
                repeats,
                median_seconds: median(times.clone()),
            });
        }
    }
    rows.sort_by_key(|r| (r.algorithm == Algorithm::Naive, r.point_count));
    Ok(BenchReport {
        rows,
        verdicts_agree,
    })
}
