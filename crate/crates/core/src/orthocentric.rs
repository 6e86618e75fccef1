//! Orthocentric simplices and systems, λ-coordinates, and scaling such systems
//! into maximal spacings.

use serde::{Deserialize, Serialize};

use crate::analytic::{check, AnalyticClass, AnalyticSpacing};
use crate::error::{Error, Result};
use crate::linalg::{affine_frame, least_squares, Basis, Vector};

const ZERO_LAMBDA: f64 = 1e-12;

/// Least-squares solution of `|x_i - x_j|^2 = λ_i + λ_j` over all pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSolution {
    pub lambdas: Vec<f64>,
    /// Euclidean norm of the pairwise misfit.
    pub residual: f64,
    /// `Σ 1/λ_i` over the λ that are not numerically zero.
    pub reciprocal_sum: f64,
    /// Indices whose λ was too small to enter the reciprocal sum.
    pub degenerate: Vec<usize>,
}

pub fn solve_lambdas(points: &[Vector]) -> Result<LambdaSolution> {
    let count = points.len();
    if count < 3 {
        return Err(Error::OutOfRange(format!(
            "need at least 3 points, got {count}"
        )));
    }
    let dim = points[0].dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    let mut rows = Vec::with_capacity(count * (count - 1) / 2);
    let mut rhs = Vec::with_capacity(rows.capacity());
    for i in 0..count {
        for j in i + 1..count {
            let mut row = vec![0.0; count];
            row[i] = 1.0;
            row[j] = 1.0;
            rows.push(row);
            rhs.push(points[i].dist_sq(&points[j]));
        }
    }
    let (lambdas, residual) = least_squares(&rows, &rhs)?;
    let mut reciprocal_sum = 0.0;
    let mut degenerate = Vec::new();
    for (i, &l) in lambdas.iter().enumerate() {
        if l.abs() <= ZERO_LAMBDA {
            degenerate.push(i);
        } else {
            reciprocal_sum += 1.0 / l;
        }
    }
    Ok(LambdaSolution {
        lambdas,
        residual,
        reciprocal_sum,
        degenerate,
    })
}

/// Outcome of [`check_system`], with the quantities it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub orthocentric: bool,
    pub solution: LambdaSolution,
    /// Smallest `λ_i + λ_j` over pairs.
    pub min_pair_sum: f64,
}

/// Like [`is_orthocentric_system`] but keeps the λ solution.
pub fn check_system(points: &[Vector], tol: f64) -> Result<SystemReport> {
    let rank = affine_frame(points, tol)?.dim();
    if points.len() != rank + 2 {
        return Err(Error::NotOrthocentric(format!(
            "{} points span an affine space of dimension {rank}; need exactly rank + 2 points",
            points.len()
        )));
    }
    let solution = solve_lambdas(points)?;
    let l = &solution.lambdas;
    let mut min_pair_sum = f64::INFINITY;
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            min_pair_sum = min_pair_sum.min(l[i] + l[j]);
        }
    }
    let orthocentric =
        solution.residual <= tol && solution.reciprocal_sum.abs() <= tol && min_pair_sum > -tol;
    Ok(SystemReport {
        orthocentric,
        solution,
        min_pair_sum,
    })
}

/// `rank + 2` points where each is the orthocenter of the others.
pub fn is_orthocentric_system(points: &[Vector], tol: f64) -> Result<bool> {
    Ok(check_system(points, tol)?.orthocentric)
}

/// Common point of the altitudes of an affinely independent simplex with at
/// least three vertices.
pub fn orthocenter(simplex: &[Vector], tol: f64) -> Result<Vector> {
    let count = simplex.len();
    if count < 3 {
        return Err(Error::OutOfRange(format!(
            "need at least 3 vertices, got {count}"
        )));
    }
    let frame = affine_frame(simplex, tol)?;
    if frame.dim() + 1 != count {
        return Err(Error::RankDeficient);
    }
    let x: Vec<Vec<f64>> = simplex.iter().map(|p| frame.local_coords(p)).collect();
    // <h - x_i, x_j - x_ref> = 0 for every j != i, ref the first index != i
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..count {
        let reference = if i == 0 { 1 } else { 0 };
        for j in 0..count {
            if j == i || j == reference {
                continue;
            }
            let edge: Vec<f64> = x[j].iter().zip(&x[reference]).map(|(a, b)| a - b).collect();
            rhs.push(x[i].iter().zip(&edge).map(|(a, b)| a * b).sum());
            rows.push(edge);
        }
    }
    let (h, residual) = least_squares(&rows, &rhs)?;
    if residual > tol {
        return Err(Error::NoOrthocenter { residual });
    }
    Ok(frame.base.add(&frame.basis.combine(&h)))
}

/// Scales an orthocentric system into a spacing whose centers are the scaled
/// points.
///
/// With `α² = slack · min(min_{λ_i > 0} 1/(2λ_i), 1/max |x_i - x_j|^2)`, the
/// centers are `α x_i` in the hull coordinates of the points and the radii are
/// `sqrt(1/2 - α² λ_i)`. Positive-radius classes get `min_class_dims[i]` fresh
/// axes; the ambient dimension is the hull dimension plus those.
pub fn scale_to_spacing(
    points: &[Vector],
    slack: f64,
    min_class_dims: &[usize],
) -> Result<(f64, AnalyticSpacing)> {
    if !(slack > 0.0 && slack <= 1.0) {
        return Err(Error::OutOfRange(format!("slack {slack} must lie in (0, 1]")));
    }
    if min_class_dims.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: min_class_dims.len(),
        });
    }
    let tol = 1e-8;
    let report = check_system(points, tol)?;
    if !report.orthocentric {
        return Err(Error::NotOrthocentric(format!(
            "residual {:e}, reciprocal sum {:e}, smallest pair sum {:e}",
            report.solution.residual, report.solution.reciprocal_sum, report.min_pair_sum
        )));
    }
    let lambdas = &report.solution.lambdas;
    if !report.solution.degenerate.is_empty() {
        return Err(Error::NotOrthocentric(format!(
            "λ vanishes at {:?}",
            report.solution.degenerate
        )));
    }
    let mut bound = f64::INFINITY;
    for &l in lambdas.iter().filter(|&&l| l > 0.0) {
        bound = bound.min(1.0 / (2.0 * l));
    }
    let mut widest: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            widest = widest.max(points[i].dist_sq(&points[j]));
        }
    }
    bound = bound.min(1.0 / widest);
    let alpha_sq = slack * bound;
    let alpha = alpha_sq.sqrt();

    let radii: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let r_sq = 0.5 - alpha_sq * l;
            if r_sq.abs() <= ZERO_LAMBDA {
                0.0
            } else {
                r_sq.max(0.0).sqrt()
            }
        })
        .collect();
    for (i, (&r, &d)) in radii.iter().zip(min_class_dims).enumerate() {
        if r > 0.0 && d == 0 {
            return Err(Error::OutOfRange(format!(
                "class {i} has radius {r} and needs at least one support dimension"
            )));
        }
    }
    let dims: Vec<usize> = radii
        .iter()
        .zip(min_class_dims)
        .map(|(&r, &d)| if r > 0.0 { d } else { 0 })
        .collect();
    for i in 0..radii.len() {
        for j in i + 1..radii.len() {
            let s = radii[i] * radii[i] + radii[j] * radii[j];
            assert!(s <= 1.0 + 1e-9, "r_{i}^2 + r_{j}^2 = {s} exceeds 1");
        }
    }

    let frame = affine_frame(points, tol)?;
    let hull = frame.dim();
    let n = hull + dims.iter().sum::<usize>();
    let mut next_axis = hull;
    let mut classes = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let mut c = vec![0.0; n];
        for (slot, x) in c.iter_mut().zip(frame.local_coords(p)) {
            *slot = alpha * x;
        }
        classes.push(AnalyticClass {
            label: format!("c{i}"),
            center: Vector(c),
            radius: radii[i],
            basis: Basis::axes(n, next_axis, dims[i]),
        });
        next_axis += dims[i];
    }
    let out = AnalyticSpacing::new(n, classes)?;
    check(&out, 1e-9, true).into_result()?;
    Ok((alpha, out))
}
