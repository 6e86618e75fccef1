//! Extent algebra and gluing of two spacings into one.

use serde::{Deserialize, Serialize};

use crate::analytic::{check, extent, AnalyticClass, AnalyticSpacing, ExtentResult};
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt_in, regular_simplex_circumradius, AffineFrame, Basis, Vector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlueVerdict {
    pub glueable: bool,
    /// `ext(A)^2 + ext(B)^2`, infinite if either extent is.
    pub extent_sum_sq: f64,
    pub min_ambient_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

fn check_pair(a_sq: f64, b_sq: f64) -> Result<f64> {
    if !(a_sq >= 0.0 && b_sq >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "squared extents must be nonnegative, got {a_sq} and {b_sq}"
        )));
    }
    let rest = 1.0 - a_sq - b_sq;
    if rest <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "squared extents sum to {}, need less than 1",
            a_sq + b_sq
        )));
    }
    Ok(rest)
}

/// Extent of the gluing of spacings with squared extents `a_sq` and `b_sq`:
/// `sqrt(1 - 4ab) / (2 sqrt(1 - a - b))`.
pub fn glued_extent(a_sq: f64, b_sq: f64) -> Result<f64> {
    let rest = check_pair(a_sq, b_sq)?;
    Ok((1.0 - 4.0 * a_sq * b_sq).sqrt() / (2.0 * rest.sqrt()))
}

/// Glue site of the gluing, given the embedded glue sites of both parts:
/// `(cA + cB)/2 + δ (cA - cB)` with `δ = (a - b) / (2(1 - a - b))`.
pub fn glued_glue_site(c_a: &Vector, c_b: &Vector, a_sq: f64, b_sq: f64) -> Result<Vector> {
    let rest = check_pair(a_sq, b_sq)?;
    if c_a.dim() != c_b.dim() {
        return Err(Error::DimensionMismatch {
            expected: c_a.dim(),
            found: c_b.dim(),
        });
    }
    let delta = (a_sq - b_sq) / (2.0 * rest);
    Ok(c_a.add(c_b).scale(0.5).axpy(delta, &c_a.sub(c_b)))
}

/// Smallest affine set containing every class: the center hull plus all
/// class supports, based at the first center.
pub fn affine_hull(s: &AnalyticSpacing, tol: f64) -> Result<AffineFrame> {
    let base = s.classes[0].center.clone();
    let mut dirs: Vec<Vector> = s.classes[1..]
        .iter()
        .map(|c| c.center.sub(&base))
        .collect();
    for c in &s.classes {
        dirs.extend(c.basis.vectors.iter().cloned());
    }
    let basis = gram_schmidt_in(s.dimension, &dirs, tol)?;
    Ok(AffineFrame { base, basis })
}

pub fn glueable(
    a: &AnalyticSpacing,
    b: &AnalyticSpacing,
    same_space_dim: Option<usize>,
    tol: f64,
) -> Result<GlueVerdict> {
    let ea = extent(a, tol)?;
    let eb = extent(b, tol)?;
    verdict(a, b, &ea, &eb, same_space_dim, tol)
}

fn verdict(
    a: &AnalyticSpacing,
    b: &AnalyticSpacing,
    ea: &ExtentResult,
    eb: &ExtentResult,
    same_space_dim: Option<usize>,
    tol: f64,
) -> Result<GlueVerdict> {
    if !ea.finite || !eb.finite {
        return Ok(GlueVerdict {
            glueable: false,
            extent_sum_sq: f64::INFINITY,
            min_ambient_dim: 0,
            reason: Some("a spacing has infinite extent".into()),
        });
    }
    let sum = ea.value * ea.value + eb.value * eb.value;
    let hulls = affine_hull(a, tol)?.dim() + affine_hull(b, tol)?.dim();
    let min_ambient_dim = hulls + usize::from(sum < 1.0 - tol);
    let reason = if sum > 1.0 + tol {
        Some(format!("squared extents sum to {sum} > 1"))
    } else {
        match same_space_dim {
            Some(n) if min_ambient_dim > n => Some(format!(
                "needs ambient dimension {min_ambient_dim}, only {n} available"
            )),
            _ => None,
        }
    };
    Ok(GlueVerdict {
        glueable: reason.is_none(),
        extent_sum_sq: sum,
        min_ambient_dim,
        reason,
    })
}

/// Isometric embedding `x -> offset + basis^T (x - origin)` placing one part
/// of a gluing in the glued space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    /// Glue site of the source spacing.
    pub origin: Vector,
    /// Orthonormal basis of the source's affine hull (source coordinates).
    pub basis: Basis,
    /// Target coordinate where the basis block starts.
    pub block_start: usize,
    /// Target dimension.
    pub dimension: usize,
    /// Value of the separating coordinate, if present (last coordinate).
    pub lift: Option<f64>,
}

impl Embedding {
    pub fn apply(&self, x: &Vector) -> Vector {
        let mut out = self.apply_direction(&x.sub(&self.origin));
        if let Some(h) = self.lift {
            out.0[self.dimension - 1] = h;
        }
        out
    }

    pub fn apply_direction(&self, v: &Vector) -> Vector {
        let mut out = vec![0.0; self.dimension];
        for (k, c) in self.basis.coords(v).into_iter().enumerate() {
            out[self.block_start + k] = c;
        }
        Vector(out)
    }

    fn class(&self, c: &AnalyticClass, prefix: &str) -> AnalyticClass {
        AnalyticClass {
            label: format!("{prefix}.{}", c.label),
            center: self.apply(&c.center),
            radius: c.radius,
            basis: c.basis.map(self.dimension, |v| self.apply_direction(v)),
        }
    }
}

/// Result of [`glue_with_maps`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gluing {
    pub spacing: AnalyticSpacing,
    pub embed_a: Embedding,
    pub embed_b: Embedding,
    pub a_sq: f64,
    pub b_sq: f64,
}

/// Places `A` and `B` in orthogonal coordinate blocks, each centered on its
/// glue site, and separates the blocks by `sqrt(1 - ext(A)^2 - ext(B)^2)` along
/// one extra axis (omitted when that is 0).
pub fn glue(a: &AnalyticSpacing, b: &AnalyticSpacing, tol: f64) -> Result<AnalyticSpacing> {
    Ok(glue_with_maps(a, b, tol)?.spacing)
}

pub fn glue_with_maps(a: &AnalyticSpacing, b: &AnalyticSpacing, tol: f64) -> Result<Gluing> {
    let ea = extent(a, tol)?;
    let eb = extent(b, tol)?;
    let v = verdict(a, b, &ea, &eb, None, tol)?;
    if !v.glueable {
        return Err(Error::NotGlueable(v.reason.unwrap_or_default()));
    }
    let a_sq = ea.value * ea.value;
    let b_sq = eb.value * eb.value;
    let rest = 1.0 - a_sq - b_sq;
    let hull_a = affine_hull(a, tol)?;
    let hull_b = affine_hull(b, tol)?;
    let lifted = rest >= tol;
    let n = hull_a.dim() + hull_b.dim() + usize::from(lifted);
    let embed_a = Embedding {
        origin: ea.glue_site.expect("finite extent has a site"),
        basis: hull_a.basis,
        block_start: 0,
        dimension: n,
        lift: None,
    };
    let embed_b = Embedding {
        origin: eb.glue_site.expect("finite extent has a site"),
        block_start: embed_a.basis.len(),
        basis: hull_b.basis,
        dimension: n,
        lift: lifted.then(|| rest.sqrt()),
    };
    let mut classes: Vec<AnalyticClass> = a.classes.iter().map(|c| embed_a.class(c, "A")).collect();
    classes.extend(b.classes.iter().map(|c| embed_b.class(c, "B")));
    let spacing = AnalyticSpacing::new(n, classes)?;
    check(&spacing, tol.max(1e-9), true).into_result()?;
    Ok(Gluing {
        spacing,
        embed_a,
        embed_b,
        a_sq,
        b_sq,
    })
}

/// Circumradius of a regular simplex with `vertices` vertices and edge `edge`.
pub fn simplex_circumradius(edge: f64, vertices: usize) -> Result<f64> {
    if edge < 0.0 {
        return Err(Error::OutOfRange(format!("edge {edge} is negative")));
    }
    regular_simplex_circumradius(edge, vertices)
}

/// Extent of `dim + 1` classes of common radius `r` whose centers form a
/// regular simplex: `sqrt((2r^2 + dim) / (2(dim + 1)))`.
pub fn calc3_extent(r: f64, dim: usize) -> Result<f64> {
    if !(0.0..=std::f64::consts::FRAC_1_SQRT_2 + 1e-15).contains(&r) {
        return Err(Error::OutOfRange(format!("r = {r} must lie in [0, sqrt(2)/2]")));
    }
    let k = dim as f64;
    Ok(((2.0 * r * r + k) / (2.0 * (k + 1.0))).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::validate;
    use crate::linalg::regular_simplex;
    use std::f64::consts::FRAC_1_SQRT_2;

    const TOL: f64 = 1e-9;

    fn single(dim: usize, radius: f64) -> AnalyticSpacing {
        AnalyticSpacing::new(
            dim,
            vec![AnalyticClass {
                label: "s".into(),
                center: Vector::zeros(dim),
                radius,
                basis: Basis::axes(dim, 0, 1),
            }],
        )
        .unwrap()
    }

    fn singletons(points: Vec<Vector>) -> AnalyticSpacing {
        let n = points[0].dim();
        AnalyticSpacing::new(
            n,
            points
                .into_iter()
                .enumerate()
                .map(|(i, p)| AnalyticClass {
                    label: format!("p{i}"),
                    center: p,
                    radius: 0.0,
                    basis: Basis::empty(n),
                })
                .collect(),
        )
        .unwrap()
    }

    fn unit_pair() -> AnalyticSpacing {
        singletons(vec![Vector(vec![0.0]), Vector(vec![1.0])])
    }

    /// Classes spaced `sqrt(1 - 2r^2)` apart with radius `r` each.
    fn two_class(r: f64) -> AnalyticSpacing {
        let gap = (1.0 - 2.0 * r * r).sqrt();
        AnalyticSpacing::new(
            3,
            vec![
                AnalyticClass {
                    label: "a".into(),
                    center: Vector(vec![0.0, 0.0, 0.0]),
                    radius: r,
                    basis: Basis::axes(3, 1, 1),
                },
                AnalyticClass {
                    label: "b".into(),
                    center: Vector(vec![gap, 0.0, 0.0]),
                    radius: r,
                    basis: Basis::axes(3, 2, 1),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn glued_extent_examples() {
        assert!((glued_extent(0.25, 0.25).unwrap() - (3.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!((glued_extent(0.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(glued_extent(0.5, 0.5).is_err());
        assert!(glued_extent(-0.1, 0.0).is_err());
    }

    #[test]
    fn glued_site_examples() {
        let a = Vector(vec![0.0, 0.0, 0.0]);
        let b = Vector(vec![0.0, 0.0, 0.8]);
        let mid = glued_glue_site(&a, &b, 0.2, 0.2).unwrap();
        assert!(mid.max_abs_diff(&Vector(vec![0.0, 0.0, 0.4])) < 1e-15);

        let gamma = FRAC_1_SQRT_2;
        let b = Vector(vec![0.0, 0.0, gamma]);
        let site = glued_glue_site(&a, &b, 0.5, 0.0).unwrap();
        assert!(site.max_abs_diff(&a) < 1e-15);

        let b = Vector(vec![0.0, 0.0, 1.0]);
        let site = glued_glue_site(&a, &b, 0.0, 0.25).unwrap();
        let want = a.add(&b).scale(0.5).axpy(-1.0 / 6.0, &a.sub(&b));
        assert!(site.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn glued_site_matches_explicit_embedding() {
        // a point glued to a radius-1/2 diameter
        let g = glue_with_maps(&singletons(vec![Vector(vec![0.0])]), &single(1, 0.5), TOL).unwrap();
        let e = extent(&g.spacing, TOL).unwrap();
        let want = glued_glue_site(
            &g.embed_a.apply(&Vector(vec![0.0])),
            &g.embed_b.apply(&Vector(vec![0.0])),
            0.0,
            0.25,
        )
        .unwrap();
        assert!(e.glue_site.unwrap().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn glueable_examples() {
        let cross = single(1, FRAC_1_SQRT_2);
        let v = glueable(&cross, &cross, None, TOL).unwrap();
        assert!(v.glueable);
        assert!((v.extent_sum_sq - 1.0).abs() < 1e-12);
        assert_eq!(v.min_ambient_dim, 2);
        assert!(!glueable(&cross, &cross, Some(1), TOL).unwrap().glueable);

        let wide = single(2, 1.0);
        let v = glueable(&wide, &wide, None, TOL).unwrap();
        assert!(!v.glueable);
        assert!(v.reason.is_some());

        let s = crate::analytic::from_signature(
            &"2;(1)".parse().unwrap(),
            crate::analytic::Flavor::Distinct,
            0.5,
            0,
        )
        .unwrap();
        assert!(!extent(&s, TOL).unwrap().finite);
        let v = glueable(&s, &unit_pair(), None, TOL).unwrap();
        assert!(!v.glueable);
        assert!(v.extent_sum_sq.is_infinite());
    }

    #[test]
    fn glue_cross() {
        let cross = single(1, FRAC_1_SQRT_2);
        let g = glue(&cross, &cross, TOL).unwrap();
        assert_eq!(g.dimension, 2);
        assert_eq!(g.classes[0].label, "A.s");
        assert_eq!(g.classes[1].label, "B.s");
        let y = crate::analytic::sample(&g, 2, 0).unwrap();
        let pts: Vec<&Vector> = y.classes.iter().flat_map(|c| &c.points).collect();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!((p.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!(crate::spacing::verify(&y, 1e-12).accepted);
    }

    #[test]
    fn glue_two_pairs_is_tetrahedron() {
        let g = glue(&unit_pair(), &unit_pair(), TOL).unwrap();
        assert_eq!(g.class_count(), 4);
        assert_eq!(g.dimension, 3);
        let c = g.centers();
        for i in 0..4 {
            for j in i + 1..4 {
                assert!((c[i].dist(&c[j]) - 1.0).abs() < 1e-12);
            }
        }
        let e = extent(&g, TOL).unwrap();
        assert!((e.value - simplex_circumradius(1.0, 4).unwrap()).abs() < 1e-12);
        assert!((e.value - (3.0f64 / 8.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn glue_rejects() {
        let wide = single(2, 1.0);
        assert!(matches!(glue(&wide, &wide, TOL), Err(Error::NotGlueable(_))));
    }

    #[test]
    fn simplex_circumradius_examples() {
        assert!((simplex_circumradius(1.0, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((simplex_circumradius(1.0, 4).unwrap() - (3.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert_eq!(simplex_circumradius(1.0, 1).unwrap(), 0.0);
        assert!(simplex_circumradius(1.0, 0).is_err());
        // matches the measured circumradius of explicit simplices
        for j in 1..=6 {
            let v = regular_simplex(j, 1.0);
            let (_, r) = crate::linalg::circumcenter(&v, 1e-12).unwrap();
            assert!((r - simplex_circumradius(1.0, j).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn calc3_examples() {
        assert!((calc3_extent(0.0, 2).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((calc3_extent(FRAC_1_SQRT_2, 0).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        let want = (3.0f64 / 8.0).sqrt();
        assert!((calc3_extent(0.5, 1).unwrap() - want).abs() < 1e-15);
        assert!((extent(&two_class(0.5), TOL).unwrap().value - want).abs() < 1e-12);
        assert!(calc3_extent(0.8, 1).is_err());
    }

    #[test]
    fn unequal_extents_glue() {
        let g = glue_with_maps(&two_class(0.5), &unit_pair(), TOL).unwrap();
        assert!(validate(&g.spacing, TOL).accepted);
        let e = extent(&g.spacing, TOL).unwrap();
        let want = glued_extent(g.a_sq, g.b_sq).unwrap();
        assert!((e.value - want).abs() < 1e-10);
        let site = glued_glue_site(
            &g.embed_a.apply(&g.embed_a.origin),
            &g.embed_b.apply(&g.embed_b.origin),
            g.a_sq,
            g.b_sq,
        )
        .unwrap();
        assert!(e.glue_site.unwrap().max_abs_diff(&site) < 1e-10);
    }

    /// The glued site sits at `(1 - 2a) / (2 sqrt(1 - a - b))` from `cA` towards
    /// `cB`, and symmetrically from `cB`.
    #[test]
    fn site_offsets_from_each_part() {
        for (a, b) in [(0.1, 0.3), (0.25, 0.0), (0.4, 0.45)] {
            let gap = (1.0f64 - a - b).sqrt();
            let ca = Vector(vec![0.0]);
            let cb = Vector(vec![gap]);
            let site = glued_glue_site(&ca, &cb, a, b).unwrap();
            let from_a = (1.0 - 2.0 * a) / (2.0 * gap);
            let from_b = (1.0 - 2.0 * b) / (2.0 * gap);
            assert!((site[0] - from_a).abs() < 1e-12);
            assert!((gap - site[0] - from_b).abs() < 1e-12);
        }
    }
}
