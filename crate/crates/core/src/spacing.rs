//! Concrete labeled point sets: summaries, the linear-time verifier, the
//! pairwise oracle, recoloring and ortho-reflection expansion.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    affine_frame, circumcenter, cross_inner_residual, gram_schmidt_differences, project, reflect,
    AffineFrame, Vector,
};

/// One labeled class of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledClass {
    pub label: String,
    pub points: Vec<Vector>,
}

/// Finite points in `R^dimension` partitioned into labeled classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet")]
pub struct LabeledPointSet {
    pub dimension: usize,
    pub classes: Vec<LabeledClass>,
}

#[derive(Deserialize)]
struct RawPointSet {
    dimension: usize,
    classes: Vec<LabeledClass>,
}

impl TryFrom<RawPointSet> for LabeledPointSet {
    type Error = Error;
    fn try_from(raw: RawPointSet) -> Result<Self> {
        LabeledPointSet::new(raw.dimension, raw.classes)
    }
}

impl LabeledPointSet {
    /// Checks dimensions, label uniqueness, non-emptiness and finiteness.
    pub fn new(dimension: usize, classes: Vec<LabeledClass>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Empty("a point set needs at least one class"));
        }
        let mut seen = HashSet::new();
        for c in &classes {
            if !seen.insert(c.label.as_str()) {
                return Err(Error::Malformed(format!("duplicate label {:?}", c.label)));
            }
            if c.points.is_empty() {
                return Err(Error::Malformed(format!("class {:?} is empty", c.label)));
            }
            for p in &c.points {
                if p.dim() != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        found: p.dim(),
                    });
                }
                if !p.is_finite() {
                    return Err(Error::Malformed(format!(
                        "non-finite coordinate in class {:?}",
                        c.label
                    )));
                }
            }
        }
        Ok(LabeledPointSet { dimension, classes })
    }

    /// Convenience constructor with labels `c0, c1, ..`.
    pub fn from_points(dimension: usize, classes: Vec<Vec<Vector>>) -> Result<Self> {
        Self::new(
            dimension,
            classes
                .into_iter()
                .enumerate()
                .map(|(i, points)| LabeledClass {
                    label: format!("c{i}"),
                    points,
                })
                .collect(),
        )
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn point_count(&self) -> usize {
        self.classes.iter().map(|c| c.points.len()).sum()
    }
}

/// Center, radius and support of one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub center: Vector,
    pub radius: f64,
    pub frame: AffineFrame,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingSummary {
    pub classes: Vec<ClassSummary>,
    /// Affine hull of the centers.
    pub center_frame: AffineFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    ClassOrthogonality,
    ConstantRadius,
    CenterFrameOrthogonality,
    CenterSpacing,
    SingleClassSphere,
    /// Pairwise oracle: a cross-class pair is not at unit distance.
    PairDistance,
    /// Symbolic spacings: radius is positive but the support is a point, or
    /// the other way round.
    RadiusDimension,
    /// Symbolic spacings: a basis is not orthonormal or has the wrong size.
    Malformed,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::ClassOrthogonality => "class_orthogonality",
            Stage::ConstantRadius => "constant_radius",
            Stage::CenterFrameOrthogonality => "center_frame_orthogonality",
            Stage::CenterSpacing => "center_spacing",
            Stage::SingleClassSphere => "single_class_sphere",
            Stage::PairDistance => "pair_distance",
            Stage::RadiusDimension => "radius_dimension",
            Stage::Malformed => "malformed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub classes: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<Failure>,
}

impl VerifyReport {
    pub fn accept() -> Self {
        VerifyReport {
            accepted: true,
            failure: None,
        }
    }

    pub fn reject(stage: Stage, classes: Vec<usize>, residual: f64) -> Self {
        VerifyReport {
            accepted: false,
            failure: Some(Failure {
                stage,
                classes,
                residual,
            }),
        }
    }

    pub fn stage(&self) -> Option<Stage> {
        self.failure.as_ref().map(|f| f.stage)
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.accepted {
            Ok(())
        } else {
            Err(Error::Invalid(Box::new(self)))
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "accepted"),
            Some(x) => write!(
                f,
                "rejected at stage {} (classes {:?}, residual {:e})",
                x.stage.name(),
                x.classes,
                x.residual
            ),
        }
    }
}

/// Single-class rule: the points must lie on a common sphere of radius at most 1.
fn single_class_report(points: &[Vector], tol: f64, radius_bound: bool) -> VerifyReport {
    match circumcenter(points, tol) {
        Ok((_, r)) if radius_bound && r > 1.0 + tol => {
            VerifyReport::reject(Stage::SingleClassSphere, vec![0], r - 1.0)
        }
        Ok(_) => VerifyReport::accept(),
        Err(Error::NoCommonSphere { residual }) => {
            VerifyReport::reject(Stage::SingleClassSphere, vec![0], residual)
        }
        Err(_) => VerifyReport::reject(Stage::SingleClassSphere, vec![0], f64::INFINITY),
    }
}

/// Centers, radii and supports of every class.
///
/// With two or more classes, the center of class `i` is the projection of the
/// first point of class `i+1` (cyclically) onto the support of class `i`. A
/// single class uses its circumcenter.
pub fn summarize(y: &LabeledPointSet, tol: f64) -> Result<SpacingSummary> {
    let count = y.class_count();
    let frames = y
        .classes
        .iter()
        .map(|c| affine_frame(&c.points, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut classes = Vec::with_capacity(count);
    if count == 1 {
        let (center, radius) = circumcenter(&y.classes[0].points, tol)?;
        classes.push(ClassSummary {
            center,
            radius,
            frame: frames.into_iter().next().expect("one class"),
        });
    } else {
        for (i, frame) in frames.into_iter().enumerate() {
            let witness = &y.classes[(i + 1) % count].points[0];
            let center = project(witness, &frame)?;
            let radius = center.dist(&y.classes[i].points[0]);
            classes.push(ClassSummary {
                center,
                radius,
                frame,
            });
        }
    }
    let centers: Vec<Vector> = classes.iter().map(|c| c.center.clone()).collect();
    let center_frame = affine_frame(&centers, tol)?;
    Ok(SpacingSummary {
        classes,
        center_frame,
    })
}

/// Linear-time verification.
///
/// Stages, in order: orthonormalize each class; check class supports are
/// pairwise orthogonal; check each class lies on a sphere about its projected
/// center; check the supports are orthogonal to the span of center
/// differences; check `|c_i - c_j|^2 + r_i^2 + r_j^2 = 1`. The first failing
/// stage is reported together with its residual.
pub fn verify(y: &LabeledPointSet, tol: f64) -> VerifyReport {
    verify_with(y, tol, true)
}

/// [`verify`] with the single-class radius bound as a switch.
pub fn verify_with(y: &LabeledPointSet, tol: f64, single_class_radius_bound: bool) -> VerifyReport {
    let count = y.class_count();
    if count == 1 {
        return single_class_report(&y.classes[0].points, tol, single_class_radius_bound);
    }

    let mut bases = Vec::with_capacity(count);
    for c in &y.classes {
        match gram_schmidt_differences(&c.points[0], &c.points[1..], tol) {
            Ok(b) => bases.push(b),
            Err(_) => return VerifyReport::reject(Stage::Malformed, vec![bases.len()], f64::NAN),
        }
    }

    for i in 0..count {
        for j in i + 1..count {
            let r = cross_inner_residual(&bases[i], &bases[j]).unwrap_or(f64::INFINITY);
            if r > tol {
                return VerifyReport::reject(Stage::ClassOrthogonality, vec![i, j], r);
            }
        }
    }

    let mut centers = Vec::with_capacity(count);
    let mut radii = Vec::with_capacity(count);
    for (i, (class, basis)) in y.classes.iter().zip(&bases).enumerate() {
        let base = &class.points[0];
        let witness = &y.classes[(i + 1) % count].points[0];
        let center = base.add(&basis.project_direction(&witness.sub(base)));
        let radius = center.dist(base);
        for p in &class.points[1..] {
            let r = (p.dist(&center) - radius).abs();
            if r > tol {
                return VerifyReport::reject(Stage::ConstantRadius, vec![i], r);
            }
        }
        centers.push(center);
        radii.push(radius);
    }

    let center_basis = match gram_schmidt_differences(&centers[0], &centers[1..], tol) {
        Ok(b) => b,
        Err(_) => return VerifyReport::reject(Stage::Malformed, vec![], f64::NAN),
    };
    for (i, basis) in bases.iter().enumerate() {
        let r = cross_inner_residual(basis, &center_basis).unwrap_or(f64::INFINITY);
        if r > tol {
            return VerifyReport::reject(Stage::CenterFrameOrthogonality, vec![i], r);
        }
    }

    for i in 0..count {
        for j in i + 1..count {
            let lhs = centers[i].dist_sq(&centers[j]) + radii[i] * radii[i] + radii[j] * radii[j];
            let r = (lhs - 1.0).abs();
            if r > tol {
                return VerifyReport::reject(Stage::CenterSpacing, vec![i, j], r);
            }
        }
    }
    VerifyReport::accept()
}

/// Quadratic oracle: every cross-class pair must be at distance 1.
pub fn verify_naive(y: &LabeledPointSet, tol: f64) -> VerifyReport {
    verify_naive_with(y, tol, true)
}

pub fn verify_naive_with(
    y: &LabeledPointSet,
    tol: f64,
    single_class_radius_bound: bool,
) -> VerifyReport {
    if y.class_count() == 1 {
        return single_class_report(&y.classes[0].points, tol, single_class_radius_bound);
    }
    for (i, a) in y.classes.iter().enumerate() {
        for (j, b) in y.classes.iter().enumerate().skip(i + 1) {
            for p in &a.points {
                for q in &b.points {
                    let d: f64 = p
                        .iter()
                        .zip(q.iter())
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum::<f64>()
                        .sqrt();
                    let r = (d - 1.0).abs();
                    if r > tol {
                        return VerifyReport::reject(Stage::PairDistance, vec![i, j], r);
                    }
                }
            }
        }
    }
    VerifyReport::accept()
}

/// Merge classes according to `partition`, a list of label blocks.
///
/// The blocks must cover every label exactly once and there must be at least
/// two of them. Merged labels are joined with `+`.
pub fn recolor(y: &LabeledPointSet, partition: &[Vec<String>]) -> Result<LabeledPointSet> {
    if partition.len() < 2 {
        return Err(Error::InvalidPartition(format!(
            "need at least two blocks, got {}",
            partition.len()
        )));
    }
    let mut used = HashSet::new();
    let mut classes = Vec::with_capacity(partition.len());
    for block in partition {
        if block.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        let mut points = Vec::new();
        for label in block {
            let class = y
                .classes
                .iter()
                .find(|c| &c.label == label)
                .ok_or_else(|| Error::InvalidPartition(format!("unknown label {label:?}")))?;
            if !used.insert(label.clone()) {
                return Err(Error::InvalidPartition(format!("label {label:?} repeated")));
            }
            points.extend(class.points.iter().cloned());
        }
        classes.push(LabeledClass {
            label: block.join("+"),
            points,
        });
    }
    if used.len() != y.class_count() {
        return Err(Error::InvalidPartition("partition does not cover all labels".into()));
    }
    LabeledPointSet::new(y.dimension, classes)
}

/// Replace class `class_index` by its union with its point reflection through
/// the projection of its center onto the hull of the other centers.
pub fn ortho_reflect_expand(
    y: &LabeledPointSet,
    class_index: usize,
    tol: f64,
) -> Result<LabeledPointSet> {
    if y.class_count() < 2 {
        return Err(Error::OutOfRange("ortho-reflection needs at least two classes".into()));
    }
    if class_index >= y.class_count() {
        return Err(Error::OutOfRange(format!("class index {class_index}")));
    }
    verify(y, tol).into_result()?;
    let summary = summarize(y, tol)?;
    let others: Vec<Vector> = summary
        .classes
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != class_index)
        .map(|(_, c)| c.center.clone())
        .collect();
    let hull = affine_frame(&others, tol)?;
    let pivot = project(&summary.classes[class_index].center, &hull)?;

    let mut out = y.clone();
    let class = &mut out.classes[class_index];
    let reflected = class
        .points
        .iter()
        .map(|p| reflect(p, &pivot))
        .collect::<Result<Vec<_>>>()?;
    for q in reflected {
        if !class.points.iter().any(|p| p.max_abs_diff(&q) <= tol) {
            class.points.push(q);
        }
    }
    Ok(out)
}
