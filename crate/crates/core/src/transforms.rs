//! Isometries of spacings: outer-inner squash and stretch, the equilateral
//! normal form, and isometry testing by signature.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::analytic::{
    extent, from_signature, inner_classes, is_maximal, sig_of, validate, AnalyticClass,
    AnalyticSpacing, Flavor,
};
use crate::error::{Error, Result};
use crate::linalg::{aligning_rotation, gram_schmidt_differences, Basis, Matrix, Vector};
use crate::spacing::{LabeledClass, LabeledPointSet};

/// Movement of one class in a squash-and-stretch: `x -> to + factor (x - from)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMove {
    pub class: usize,
    pub from_center: Vector,
    pub to_center: Vector,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsometryStep {
    /// `x -> rotation x + translation`
    Rigid { rotation: Matrix, translation: Vector },
    /// Output class `k` is input class `permutation[k]`.
    Recolor { permutation: Vec<usize> },
    SquashStretch { moves: Vec<ClassMove> },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IsometryRecord {
    pub steps: Vec<IsometryStep>,
}

impl IsometryRecord {
    /// Applies every step in order to a point set with the source's class order.
    pub fn replay(&self, y: &LabeledPointSet) -> Result<LabeledPointSet> {
        let mut dimension = y.dimension;
        let mut classes = y.classes.clone();
        for step in &self.steps {
            match step {
                IsometryStep::Rigid {
                    rotation,
                    translation,
                } => {
                    if rotation.n != dimension {
                        return Err(Error::DimensionMismatch {
                            expected: dimension,
                            found: rotation.n,
                        });
                    }
                    for c in &mut classes {
                        for p in &mut c.points {
                            *p = rotation.apply(p).add(translation);
                        }
                    }
                    dimension = translation.dim();
                }
                IsometryStep::Recolor { permutation } => {
                    if permutation.len() != classes.len()
                        || permutation.iter().any(|&i| i >= classes.len())
                    {
                        return Err(Error::Malformed("permutation does not fit the classes".into()));
                    }
                    classes = permutation.iter().map(|&i| classes[i].clone()).collect();
                }
                IsometryStep::SquashStretch { moves } => {
                    for m in moves {
                        let c: &mut LabeledClass = classes
                            .get_mut(m.class)
                            .ok_or_else(|| Error::Malformed(format!("no class {}", m.class)))?;
                        for p in &mut c.points {
                            *p = m.to_center.axpy(m.factor, &p.sub(&m.from_center));
                        }
                    }
                }
            }
        }
        LabeledPointSet::new(dimension, classes)
    }
}

/// Residual of `ext^2 = 1 - u - (2u - 1)^2 / (4 (1 - u - r_outer^2))` at `u = r_inner^2`.
pub fn inner_radius_residual(r_inner: f64, ext_sq: f64, r_outer: f64) -> f64 {
    let u = r_inner * r_inner;
    let gap = 1.0 - u - r_outer * r_outer;
    1.0 - u - (2.0 * u - 1.0).powi(2) / (4.0 * gap) - ext_sq
}

/// Inner radius that keeps a spacing intact after its outer class is given
/// radius `r_outer`, when the rest has squared extent `ext_sq`.
///
/// Bisection on `[sqrt(2)/2, sqrt(1 - r_outer^2))`, where the residual starts
/// nonnegative and diverges to `-inf`.
pub fn solve_inner_radius(ext_sq: f64, r_outer: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&ext_sq) {
        return Err(Error::OutOfRange(format!("ext^2 = {ext_sq} must lie in [0, 1/2]")));
    }
    if !(0.0..FRAC_1_SQRT_2).contains(&r_outer) {
        return Err(Error::OutOfRange(format!(
            "outer radius {r_outer} must lie in [0, sqrt(2)/2)"
        )));
    }
    let f = |r: f64| inner_radius_residual(r, ext_sq, r_outer);
    let mut lo = FRAC_1_SQRT_2;
    let mut hi = (1.0 - r_outer * r_outer).sqrt();
    if f(lo).abs() <= 1e-12 {
        return Ok(lo);
    }
    if f(lo) < 0.0 {
        return Err(Error::NoSolution {
            what: "inner radius bracket".into(),
            residual: f(lo),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = f(lo);
    if residual.abs() > 1e-12 {
        return Err(Error::NoSolution {
            what: "inner radius".into(),
            residual,
        });
    }
    Ok(lo)
}

fn distinct_inner(s: &AnalyticSpacing, tol: f64) -> Result<usize> {
    let verdict = is_maximal(s, tol)?;
    if !verdict.maximal {
        return Err(Error::NotMaximal(verdict.reason));
    }
    if s.center_frame(tol)?.dim() == 0 {
        return Err(Error::OutOfRange("centers coincide".into()));
    }
    Ok(inner_classes(s, tol)?[0])
}

/// Gives class `outer` radius `target_r` and re-solves the inner class so the
/// result is again a maximal spacing; all other classes are untouched.
pub fn outer_inner_squash_stretch(
    s: &AnalyticSpacing,
    outer: usize,
    target_r: f64,
    tol: f64,
) -> Result<AnalyticSpacing> {
    Ok(squash_stretch_step(s, outer, target_r, tol)?.0)
}

fn squash_stretch_step(
    s: &AnalyticSpacing,
    outer: usize,
    target_r: f64,
    tol: f64,
) -> Result<(AnalyticSpacing, Vec<ClassMove>)> {
    if outer >= s.class_count() {
        return Err(Error::OutOfRange(format!("no class {outer}")));
    }
    let inner = distinct_inner(s, tol)?;
    if outer == inner {
        return Err(Error::OutOfRange(format!("class {outer} is the inner class")));
    }
    if !(0.0..FRAC_1_SQRT_2).contains(&target_r) {
        return Err(Error::OutOfRange(format!(
            "target radius {target_r} must lie in [0, sqrt(2)/2)"
        )));
    }
    let outer_class = &s.classes[outer];
    if (target_r > 0.0) == outer_class.basis.is_empty() {
        return Err(Error::OutOfRange(format!(
            "class {outer} has a {}-dimensional support and cannot take radius {target_r}",
            outer_class.basis.len()
        )));
    }
    let rest: Vec<AnalyticClass> = s
        .classes
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != outer && *i != inner)
        .map(|(_, c)| c.clone())
        .collect();
    let rest = AnalyticSpacing::new(s.dimension, rest)?;
    let e = extent(&rest, tol)?;
    let site = match (e.finite, e.glue_site) {
        (true, Some(site)) => site,
        _ => {
            return Err(Error::NoSolution {
                what: "remainder has no glue site".into(),
                residual: f64::INFINITY,
            })
        }
    };
    let ext_sq = (e.value * e.value).min(0.5);
    let r_inner = solve_inner_radius(ext_sq, target_r)?;
    let axis = outer_class.center.sub(&site);
    let len = axis.norm();
    if len <= tol {
        return Err(Error::NoSolution {
            what: "outer center sits on the remainder's glue site".into(),
            residual: len,
        });
    }
    let axis = axis.scale(1.0 / len);
    let alpha = (1.0 - r_inner * r_inner - target_r * target_r).sqrt();
    let beta = (2.0 * r_inner * r_inner - 1.0) / (2.0 * alpha);
    let inner_center = site.axpy(beta, &axis);
    let outer_center = site.axpy(alpha + beta, &axis);

    let factor = |old: f64, new: f64| if old > 0.0 { new / old } else { 1.0 };
    let moves = vec![
        ClassMove {
            class: outer,
            from_center: outer_class.center.clone(),
            to_center: outer_center.clone(),
            factor: factor(outer_class.radius, target_r),
        },
        ClassMove {
            class: inner,
            from_center: s.classes[inner].center.clone(),
            to_center: inner_center.clone(),
            factor: factor(s.classes[inner].radius, r_inner),
        },
    ];
    let mut out = s.clone();
    out.classes[outer].center = outer_center;
    out.classes[outer].radius = target_r;
    out.classes[inner].center = inner_center;
    out.classes[inner].radius = r_inner;
    validate(&out, tol).into_result()?;
    Ok((out, moves))
}

/// Order in which the classes of `s` correspond to the classes of the normal
/// form built by `from_signature`: the inner class (distinct centers only),
/// positive-radius classes by decreasing support dimension, then the rest.
fn canonical_order(s: &AnalyticSpacing, inner: Option<usize>) -> Vec<usize> {
    let mut positive: Vec<usize> = (0..s.class_count())
        .filter(|&i| Some(i) != inner && !s.classes[i].basis.is_empty())
        .collect();
    positive.sort_by(|&a, &b| s.classes[b].basis.len().cmp(&s.classes[a].basis.len()));
    let zeros = (0..s.class_count()).filter(|&i| Some(i) != inner && s.classes[i].basis.is_empty());
    inner.into_iter().chain(positive).chain(zeros).collect()
}

/// Orthonormal frames used for alignment: the center-difference directions
/// from the reference center in the given class order, then each class
/// support in that order.
fn alignment_frames(s: &AnalyticSpacing, order: &[usize], tol: f64) -> Result<Vec<Basis>> {
    let reference = &s.classes[order[0]].center;
    let others: Vec<Vector> = order[1..].iter().map(|&i| s.classes[i].center.clone()).collect();
    let mut frames = vec![gram_schmidt_differences(reference, &others, tol)?];
    frames.extend(order.iter().map(|&i| s.classes[i].basis.clone()));
    Ok(frames)
}

fn apply_rigid(s: &AnalyticSpacing, rotation: &Matrix, translation: &Vector) -> AnalyticSpacing {
    AnalyticSpacing {
        dimension: s.dimension,
        classes: s
            .classes
            .iter()
            .map(|c| AnalyticClass {
                label: c.label.clone(),
                center: rotation.apply(&c.center).add(translation),
                radius: c.radius,
                basis: c.basis.map(s.dimension, |v| rotation.apply(v)),
            })
            .collect(),
    }
}

/// Maps a maximal spacing onto its equilateral normal form with non-inner
/// radius `r`, keeping the input's class order and labels.
pub fn to_equilateral_normal_form(
    s: &AnalyticSpacing,
    r: f64,
    tol: f64,
) -> Result<(AnalyticSpacing, IsometryRecord)> {
    if !(r > 0.0 && r < FRAC_1_SQRT_2) {
        return Err(Error::OutOfRange(format!("r = {r} must lie in (0, sqrt(2)/2)")));
    }
    let sig = sig_of(s, tol)?;
    let coincident = s.center_frame(tol)?.dim() == 0;
    let mut record = IsometryRecord::default();
    let mut current = s.clone();
    let inner;
    let flavor;
    if coincident {
        inner = None;
        flavor = Flavor::Coincident;
        let target = from_signature(&sig, flavor, r, 0)?;
        let order = canonical_order(s, None);
        let mut moves = Vec::new();
        for (k, &i) in order.iter().enumerate() {
            let want = target.classes[k].radius;
            let c = &mut current.classes[i];
            if c.radius > 0.0 && (c.radius - want).abs() > 1e-15 {
                moves.push(ClassMove {
                    class: i,
                    from_center: c.center.clone(),
                    to_center: c.center.clone(),
                    factor: want / c.radius,
                });
                c.radius = want;
            }
        }
        if !moves.is_empty() {
            record.steps.push(IsometryStep::SquashStretch { moves });
        }
    } else {
        let i0 = distinct_inner(s, tol)?;
        inner = Some(i0);
        flavor = Flavor::Distinct;
        for j in 0..s.class_count() {
            if j == i0 || current.classes[j].basis.is_empty() {
                continue;
            }
            if (current.classes[j].radius - r).abs() <= 1e-15 {
                continue;
            }
            let (next, moves) = squash_stretch_step(&current, j, r, tol)?;
            current = next;
            record.steps.push(IsometryStep::SquashStretch { moves });
        }
    }
    let target = from_signature(&sig, flavor, r, 0)?;
    let order = canonical_order(&current, inner);
    let target_order: Vec<usize> = (0..target.class_count()).collect();
    let source_frames = alignment_frames(&current, &order, tol)?;
    let target_frames = alignment_frames(&target, &target_order, tol)?;
    let rotation = aligning_rotation(&source_frames, &target_frames, tol.max(1e-8))?;
    let reference = &current.classes[order[0]].center;
    let translation = target.classes[0].center.sub(&rotation.apply(reference));
    let out = apply_rigid(&current, &rotation, &translation);
    record.steps.push(IsometryStep::Rigid {
        rotation,
        translation,
    });
    validate(&out, tol).into_result()?;
    Ok((out, record))
}

/// Largest coordinate deviation between the centers and supports of `a` and
/// `b`, matching class `i` of `a` to class `order[i]` of `b`. Supports are
/// compared as subspaces (projection matrices).
pub fn class_deviation(a: &AnalyticSpacing, b: &AnalyticSpacing, order: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, &j) in order.iter().enumerate() {
        let (x, y) = (&a.classes[i], &b.classes[j]);
        worst = worst.max(x.center.max_abs_diff(&y.center));
        worst = worst.max((x.radius - y.radius).abs());
        if x.basis.len() != y.basis.len() {
            return f64::INFINITY;
        }
        for v in &x.basis.vectors {
            let back = y.basis.project_direction(v);
            worst = worst.max(back.max_abs_diff(v));
        }
    }
    worst
}

/// Correspondence from the classes of a normal-form output to the classes of
/// `from_signature` for the same signature.
pub fn normal_form_matching(out: &AnalyticSpacing, tol: f64) -> Result<Vec<usize>> {
    let coincident = out.center_frame(tol)?.dim() == 0;
    let inner = if coincident {
        None
    } else {
        Some(distinct_inner(out, tol)?)
    };
    let order = canonical_order(out, inner);
    let mut matching = vec![0; order.len()];
    for (k, &i) in order.iter().enumerate() {
        matching[i] = k;
    }
    Ok(matching)
}

/// Maximal spacings are isometric exactly when their signatures and center
/// coincidence agree.
pub fn isometric(a: &AnalyticSpacing, b: &AnalyticSpacing, tol: f64) -> Result<bool> {
    let sa = sig_of(a, tol)?;
    let sb = sig_of(b, tol)?;
    if a.class_count() != b.class_count() || a.dimension != b.dimension {
        return Ok(false);
    }
    let ca = a.center_frame(tol)?.dim() == 0;
    let cb = b.center_frame(tol)?.dim() == 0;
    Ok(sa == sb && ca == cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::sample;
    use crate::signatures::Signature;
    use crate::spacing::verify;

    const TOL: f64 = 1e-9;

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    fn closed_form(ext_sq: f64, r_outer: f64) -> f64 {
        let g = ext_sq;
        let p = r_outer * r_outer;
        ((3.0 - 4.0 * (g + p) + 4.0 * g * p) / (4.0 - 4.0 * (g + p))).sqrt()
    }

    #[test]
    fn solve_inner_radius_examples() {
        let r = solve_inner_radius(0.5, 0.0).unwrap();
        assert!((r - FRAC_1_SQRT_2).abs() < 1e-15);
        let r = solve_inner_radius(0.25, 0.0).unwrap();
        assert!((r - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(inner_radius_residual(r, 0.25, 0.0).abs() <= 1e-12);
        let ro = 0.1f64.sqrt();
        let r = solve_inner_radius(0.3, ro).unwrap();
        assert!(inner_radius_residual(r, 0.3, ro).abs() <= 1e-12);
        assert!((r - closed_form(0.3, ro)).abs() < 1e-12);
        assert!(solve_inner_radius(0.6, 0.0).is_err());
        assert!(solve_inner_radius(0.3, FRAC_1_SQRT_2).is_err());
    }

    #[test]
    fn squash_fixed_point() {
        let s = from_signature(&sig("1;(1,2)"), Flavor::Distinct, 0.4, 0).unwrap();
        let out = outer_inner_squash_stretch(&s, 1, 0.4, TOL).unwrap();
        let order: Vec<usize> = (0..s.class_count()).collect();
        assert!(class_deviation(&out, &s, &order) < 1e-10);
    }

    #[test]
    fn squash_three_positive_classes() {
        let s = from_signature(&sig("0;(1,1,1)"), Flavor::Distinct, 0.5, 0).unwrap();
        assert!((s.classes[0].radius - (5.0f64 / 8.0).sqrt()).abs() < 1e-12);
        let out = outer_inner_squash_stretch(&s, 2, 0.3, TOL).unwrap();
        assert!((out.classes[2].radius - 0.3).abs() < 1e-15);
        assert!(validate(&out, TOL).accepted);
        assert!(is_maximal(&out, TOL).unwrap().maximal);
        assert_eq!(sig_of(&out, TOL).unwrap(), sig("0;(1,1,1)"));
        assert!(verify(&sample(&out, 8, 2).unwrap(), 1e-8).accepted);

        assert!(outer_inner_squash_stretch(&s, 2, FRAC_1_SQRT_2, TOL).is_err());
        assert!(outer_inner_squash_stretch(&s, 0, 0.3, TOL).is_err());
        assert!(outer_inner_squash_stretch(&s, 1, 0.0, TOL).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let s = from_signature(&sig("0;(2,1,1)"), Flavor::Distinct, 0.3, 0).unwrap();
        let (out, record) = to_equilateral_normal_form(&s, 0.5, TOL).unwrap();
        assert!((out.classes[1].radius - 0.5).abs() < 1e-12);
        let target = from_signature(&sig("0;(2,1,1)"), Flavor::Distinct, 0.5, 0).unwrap();
        let matching = normal_form_matching(&out, TOL).unwrap();
        assert!(class_deviation(&out, &target, &matching) <= 1e-8);
        let y = sample(&s, 6, 4).unwrap();
        let moved = record.replay(&y).unwrap();
        assert!(verify(&moved, 1e-8).accepted);

        let (same, record) = to_equilateral_normal_form(&target, 0.5, TOL).unwrap();
        assert_eq!(record.steps.len(), 1);
        assert!(matches!(record.steps[0], IsometryStep::Rigid { .. }));
        let order: Vec<usize> = (0..target.class_count()).collect();
        assert!(class_deviation(&same, &target, &order) < 1e-12);

        let s = from_signature(&sig("0;(1,1,1)"), Flavor::Coincident, 0.5, 0).unwrap();
        let (out, _) = to_equilateral_normal_form(&s, 0.2, TOL).unwrap();
        assert!(out.radii().iter().all(|r| (r - FRAC_1_SQRT_2).abs() < 1e-12));
    }

    #[test]
    fn coincident_pair_dilates_to_equal_radii() {
        let r1: f64 = 0.6;
        let r2 = (1.0 - r1 * r1).sqrt();
        let s = AnalyticSpacing::new(
            3,
            vec![
                AnalyticClass {
                    label: "a".into(),
                    center: Vector(vec![0.3, 0.0, 0.0]),
                    radius: r1,
                    basis: Basis::axes(3, 0, 2),
                },
                AnalyticClass {
                    label: "b".into(),
                    center: Vector(vec![0.3, 0.0, 0.0]),
                    radius: r2,
                    basis: Basis::axes(3, 2, 1),
                },
            ],
        )
        .unwrap();
        let (out, record) = to_equilateral_normal_form(&s, 0.5, TOL).unwrap();
        assert!(out.radii().iter().all(|r| (r - FRAC_1_SQRT_2).abs() < 1e-12));
        assert!(out.centers().iter().all(|c| c.norm() < 1e-12));
        let moved = record.replay(&sample(&s, 5, 1).unwrap()).unwrap();
        assert!(verify(&moved, 1e-8).accepted);
    }

    #[test]
    fn isometric_examples() {
        let a = from_signature(&sig("0;(2,1,1)"), Flavor::Distinct, 0.2, 0).unwrap();
        let b = from_signature(&sig("0;(2,1,1)"), Flavor::Distinct, 0.45, 0).unwrap();
        assert!(isometric(&a, &b, TOL).unwrap());
        assert!(isometric(&a, &a, TOL).unwrap());
        let c = from_signature(&sig("0;(2,1)"), Flavor::Coincident, 0.5, 0).unwrap();
        let d = from_signature(&sig("0;(1,1,1)"), Flavor::Coincident, 0.5, 0).unwrap();
        assert_eq!(c.dimension, 3);
        assert_eq!(d.dimension, 3);
        assert!(!isometric(&c, &d, TOL).unwrap());
    }

    #[test]
    fn record_json_shape() {
        let s = from_signature(&sig("2;(1)"), Flavor::Distinct, 0.5, 0).unwrap();
        let (_, record) = to_equilateral_normal_form(&s, 0.5, TOL).unwrap();
        let text = serde_json::to_string(&record).unwrap();
        assert!(text.starts_with(r#"{"steps":[{"kind":"rigid","rotation":"#));
        let back: IsometryRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, record);
    }
}
