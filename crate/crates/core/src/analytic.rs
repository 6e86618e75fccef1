//! Symbolic spacings: one `(center, radius, support basis)` triple per class.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    affine_frame, cross_inner_residual, gram_schmidt_differences, least_squares, regular_simplex,
    AffineFrame, Basis, Vector,
};
use crate::orthocentric;
use crate::signatures::{enumerate_eq, enumerate_neq, Signature};
use crate::spacing::{LabeledClass, LabeledPointSet, Stage, VerifyReport};

/// One class `S_r(c) ∩ (c + span(basis))`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticClass {
    pub label: String,
    pub center: Vector,
    pub radius: f64,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpacing", into = "RawSpacing")]
pub struct AnalyticSpacing {
    pub dimension: usize,
    pub classes: Vec<AnalyticClass>,
}

#[derive(Serialize, Deserialize)]
struct RawClass {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    center: Vector,
    radius: f64,
    #[serde(default)]
    basis: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct RawSpacing {
    dimension: usize,
    classes: Vec<RawClass>,
}

impl TryFrom<RawSpacing> for AnalyticSpacing {
    type Error = Error;
    fn try_from(raw: RawSpacing) -> Result<Self> {
        let n = raw.dimension;
        let classes = raw
            .classes
            .into_iter()
            .enumerate()
            .map(|(i, c)| AnalyticClass {
                label: c.label.unwrap_or_else(|| format!("c{i}")),
                center: c.center,
                radius: c.radius,
                basis: Basis {
                    dim_ambient: n,
                    vectors: c.basis,
                },
            })
            .collect();
        AnalyticSpacing::new(n, classes)
    }
}

impl From<AnalyticSpacing> for RawSpacing {
    fn from(s: AnalyticSpacing) -> Self {
        RawSpacing {
            dimension: s.dimension,
            classes: s
                .classes
                .into_iter()
                .map(|c| RawClass {
                    label: Some(c.label),
                    center: c.center,
                    radius: c.radius,
                    basis: c.basis.vectors,
                })
                .collect(),
        }
    }
}

/// Whether class centers coincide (`Ŝ=`) or are pairwise distinct (`Ŝ≠`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Coincident,
    Distinct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtentResult {
    pub finite: bool,
    /// Common distance from the glue site; infinite when there is none.
    pub value: f64,
    pub glue_site: Option<Vector>,
}

impl ExtentResult {
    fn infinite() -> Self {
        ExtentResult {
            finite: false,
            value: f64::INFINITY,
            glue_site: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalVerdict {
    pub maximal: bool,
    pub reason: String,
}

impl MaximalVerdict {
    fn no(reason: impl Into<String>) -> Self {
        MaximalVerdict {
            maximal: false,
            reason: reason.into(),
        }
    }
}

impl AnalyticSpacing {
    /// Checks coordinate counts only; see [`validate`] for the geometry.
    pub fn new(dimension: usize, classes: Vec<AnalyticClass>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Empty("a spacing needs at least one class"));
        }
        for c in &classes {
            if c.center.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: c.center.dim(),
                });
            }
            for v in &c.basis.vectors {
                if v.dim() != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        found: v.dim(),
                    });
                }
            }
        }
        let classes = classes
            .into_iter()
            .map(|mut c| {
                c.basis.dim_ambient = dimension;
                c
            })
            .collect();
        Ok(AnalyticSpacing { dimension, classes })
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn centers(&self) -> Vec<Vector> {
        self.classes.iter().map(|c| c.center.clone()).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.radius).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.basis.len()).collect()
    }

    /// Affine hull of the centers.
    pub fn center_frame(&self, tol: f64) -> Result<AffineFrame> {
        affine_frame(&self.centers(), tol)
    }

    /// Same spacing with `extra` zero coordinates appended.
    pub fn padded(&self, extra: usize) -> AnalyticSpacing {
        let n = self.dimension + extra;
        AnalyticSpacing {
            dimension: n,
            classes: self
                .classes
                .iter()
                .map(|c| AnalyticClass {
                    label: c.label.clone(),
                    center: c.center.padded(extra),
                    radius: c.radius,
                    basis: c.basis.map(n, |v| v.padded(extra)),
                })
                .collect(),
        }
    }
}

fn centers_coincide(frame: &AffineFrame) -> bool {
    frame.dim() == 0
}

/// Checks the recipe: orthonormal bases, `r > 0` iff the basis is nonempty,
/// pairwise orthogonal supports, supports orthogonal to the center span, and
/// `|c_i - c_j|^2 + r_i^2 + r_j^2 = 1`.
pub fn validate(s: &AnalyticSpacing, tol: f64) -> VerifyReport {
    check(s, tol, true)
}

pub(crate) fn check(s: &AnalyticSpacing, tol: f64, radius_bound: bool) -> VerifyReport {
    let n = s.dimension;
    for (i, c) in s.classes.iter().enumerate() {
        if !c.radius.is_finite() || c.radius < 0.0 || !c.center.is_finite() {
            return VerifyReport::reject(Stage::Malformed, vec![i], f64::INFINITY);
        }
        if c.basis.len() > n {
            return VerifyReport::reject(Stage::Malformed, vec![i], c.basis.len() as f64);
        }
        let r = c.basis.orthonormality_residual();
        if r > tol {
            return VerifyReport::reject(Stage::Malformed, vec![i], r);
        }
        if (c.radius > tol) == c.basis.is_empty() {
            return VerifyReport::reject(Stage::RadiusDimension, vec![i], c.radius);
        }
    }
    let count = s.class_count();
    for i in 0..count {
        for j in i + 1..count {
            let r = cross_inner_residual(&s.classes[i].basis, &s.classes[j].basis)
                .unwrap_or(f64::INFINITY);
            if r > tol {
                return VerifyReport::reject(Stage::ClassOrthogonality, vec![i, j], r);
            }
        }
    }
    let centers = s.centers();
    let center_basis = match gram_schmidt_differences(&centers[0], &centers[1..], tol) {
        Ok(b) => b,
        Err(_) => return VerifyReport::reject(Stage::Malformed, vec![], f64::INFINITY),
    };
    for (i, c) in s.classes.iter().enumerate() {
        let r = cross_inner_residual(&c.basis, &center_basis).unwrap_or(f64::INFINITY);
        if r > tol {
            return VerifyReport::reject(Stage::CenterFrameOrthogonality, vec![i], r);
        }
    }
    for i in 0..count {
        for j in i + 1..count {
            let (a, b) = (&s.classes[i], &s.classes[j]);
            let r = (a.center.dist_sq(&b.center) + a.radius * a.radius + b.radius * b.radius - 1.0)
                .abs();
            if r > tol {
                return VerifyReport::reject(Stage::CenterSpacing, vec![i, j], r);
            }
        }
    }
    if radius_bound && count == 1 && s.classes[0].radius > 1.0 + tol {
        return VerifyReport::reject(Stage::SingleClassSphere, vec![0], s.classes[0].radius - 1.0);
    }
    VerifyReport::accept()
}

/// Finite point set drawn from the spacing.
///
/// Radius-0 classes give their center; a 1-dimensional support gives the
/// antipodal pair (or one point if only one is asked for); larger supports give
/// the signed basis directions first and then seeded uniform directions, all
/// scaled by the radius.
pub fn sample(s: &AnalyticSpacing, points_per_class: usize, seed: u64) -> Result<LabeledPointSet> {
    if points_per_class == 0 {
        return Err(Error::OutOfRange("points_per_class must be at least 1".into()));
    }
    validate(s, crate::linalg::DEFAULT_TOL).into_result()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes = Vec::with_capacity(s.class_count());
    for c in &s.classes {
        let d = c.basis.len();
        let mut points = Vec::new();
        if c.radius == 0.0 || d == 0 {
            points.push(c.center.clone());
        } else {
            let signed = (0..d).flat_map(|k| [(k, 1.0), (k, -1.0)]);
            for (k, sign) in signed.take(points_per_class) {
                points.push(c.center.axpy(sign * c.radius, &c.basis.vectors[k]));
            }
            if d >= 2 {
                while points.len() < points_per_class {
                    let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm < 1e-12 {
                        continue;
                    }
                    let coeffs: Vec<f64> = g.iter().map(|x| x * c.radius / norm).collect();
                    points.push(c.center.add(&c.basis.combine(&coeffs)));
                }
            }
        }
        classes.push(LabeledClass {
            label: c.label.clone(),
            points,
        });
    }
    LabeledPointSet::new(s.dimension, classes)
}

/// Point of the center hull equidistant from every point of the spacing, and
/// that common distance, when it exists and is at most 1.
pub fn extent(s: &AnalyticSpacing, tol: f64) -> Result<ExtentResult> {
    check(s, tol, false).into_result()?;
    let frame = s.center_frame(tol)?;
    let r1 = s.classes[0].radius;
    let t = if frame.dim() == 0 {
        Vec::new()
    } else {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for c in &s.classes[1..] {
            let x = frame.local_coords(&c.center);
            let sq: f64 = x.iter().map(|v| v * v).sum();
            rhs.push(sq + c.radius * c.radius - r1 * r1);
            rows.push(x.iter().map(|v| 2.0 * v).collect());
        }
        least_squares(&rows, &rhs)?.0
    };
    let site = frame.base.add(&frame.basis.combine(&t));
    let values: Vec<f64> = s
        .classes
        .iter()
        .map(|c| c.center.dist_sq(&site) + c.radius * c.radius)
        .collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(0.0, f64::max);
    let value = lo.max(0.0).sqrt();
    if hi.sqrt() - value > tol || value > 1.0 + tol {
        return Ok(ExtentResult::infinite());
    }
    Ok(ExtentResult {
        finite: true,
        value,
        glue_site: Some(site),
    })
}

/// Whether no point can be added to any class, with the first failing reason.
pub fn is_maximal(s: &AnalyticSpacing, tol: f64) -> Result<MaximalVerdict> {
    validate(s, tol).into_result()?;
    let frame = s.center_frame(tol)?;
    let count = s.class_count();
    let hull = frame.dim();
    let support: usize = s.dims().iter().sum();
    if hull + support != s.dimension {
        return Ok(MaximalVerdict::no(format!(
            "center hull dimension {hull} plus support dimensions {support} is not the ambient dimension {}",
            s.dimension
        )));
    }
    let half = FRAC_1_SQRT_2;
    if centers_coincide(&frame) {
        match count {
            1 => {}
            2 => {
                let (a, b) = (s.classes[0].radius, s.classes[1].radius);
                if (a * a + b * b - 1.0).abs() > tol {
                    return Ok(MaximalVerdict::no("two coincident radii do not satisfy r1^2 + r2^2 = 1"));
                }
            }
            _ => {
                if let Some(i) = s.classes.iter().position(|c| (c.radius - half).abs() > tol) {
                    return Ok(MaximalVerdict::no(format!(
                        "class {i} has radius {} but coincident centers need sqrt(2)/2",
                        s.classes[i].radius
                    )));
                }
            }
        }
    } else {
        let centers = s.centers();
        for i in 0..count {
            for j in i + 1..count {
                if centers[i].dist(&centers[j]) <= tol {
                    return Ok(MaximalVerdict::no(format!(
                        "centers {i} and {j} coincide while others differ"
                    )));
                }
            }
        }
        if hull + 2 != count {
            return Ok(MaximalVerdict::no(format!(
                "center hull has dimension {hull}, expected {}",
                count as isize - 2
            )));
        }
        let report = orthocentric::check_system(&centers, tol)?;
        if !report.orthocentric {
            return Ok(MaximalVerdict::no("centers are not an orthocentric system"));
        }
        let big = s.classes.iter().filter(|c| c.radius > half + tol).count();
        if big != 1 {
            return Ok(MaximalVerdict::no(format!(
                "{big} classes have radius above sqrt(2)/2, expected exactly one"
            )));
        }
    }
    Ok(MaximalVerdict {
        maximal: true,
        reason: "maximal".into(),
    })
}

/// Inner classes: every class when the centers coincide, otherwise the classes
/// of largest radius.
pub fn inner_classes(s: &AnalyticSpacing, tol: f64) -> Result<Vec<usize>> {
    validate(s, tol).into_result()?;
    if centers_coincide(&s.center_frame(tol)?) {
        return Ok((0..s.class_count()).collect());
    }
    let top = s.radii().into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(s
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.radius >= top - tol)
        .map(|(i, _)| i)
        .collect())
}

/// Centers, radii and the zero-radius count that [`from_signature`] lays out.
struct Layout {
    dimension: usize,
    centers: Vec<Vector>,
    radii: Vec<f64>,
}

/// Places `vertices` in the coordinate block starting at `offset`, shifted by
/// `shift` along axis `axis` when given.
fn place_block(
    vertices: &[Vector],
    dim: usize,
    offset: usize,
    axis: Option<(usize, f64)>,
) -> Vec<Vector> {
    vertices
        .iter()
        .map(|v| {
            let mut p = vec![0.0; dim];
            p[offset..offset + v.dim()].copy_from_slice(v);
            if let Some((a, shift)) = axis {
                p[a] = shift;
            }
            Vector(p)
        })
        .collect()
}

fn distinct_layout(m: usize, k: usize, r: f64) -> Result<Layout> {
    let zero_dim = m.saturating_sub(1);
    let pos_count = k - 1;
    let pos_dim = pos_count.saturating_sub(1);
    let with_axis = m >= 1 && pos_count >= 1;
    let hull = zero_dim + pos_dim + usize::from(with_axis);
    let edge_sq = 1.0 - 2.0 * r * r;
    let rho0_sq = if m == 0 {
        0.0
    } else {
        (m as f64 - 1.0) / (2.0 * m as f64)
    };
    let rho_pos_sq = if pos_count == 0 {
        0.0
    } else {
        edge_sq * (pos_count as f64 - 1.0) / (2.0 * pos_count as f64)
    };
    let zero_vertices = regular_simplex(m, 1.0);
    let pos_vertices = regular_simplex(pos_count, edge_sq.max(0.0).sqrt());
    let (alpha0, alpha_pos, inner_sq) = if with_axis {
        let s_sq = 1.0 - r * r - rho0_sq - rho_pos_sq;
        if s_sq <= 0.0 {
            return Err(Error::NoSolution {
                what: "block offsets".into(),
                residual: -s_sq,
            });
        }
        let s = s_sq.sqrt();
        let d = rho0_sq - rho_pos_sq - r * r;
        let a_pos = 0.5 * (s + d / s);
        let a0 = 0.5 * (s - d / s);
        (a0, a_pos, 1.0 - rho0_sq - a0 * a0)
    } else if m == 0 {
        (0.0, 0.0, 1.0 - r * r - rho_pos_sq)
    } else {
        (0.0, 0.0, 1.0 - rho0_sq)
    };
    if inner_sq <= 0.5 {
        return Err(Error::NoSolution {
            what: "inner radius".into(),
            residual: 0.5 - inner_sq,
        });
    }
    let axis = zero_dim + pos_dim;
    let mut centers = vec![Vector::zeros(hull)];
    centers.extend(place_block(
        &pos_vertices,
        hull,
        zero_dim,
        with_axis.then_some((axis, alpha_pos)),
    ));
    centers.extend(place_block(
        &zero_vertices,
        hull,
        0,
        with_axis.then_some((axis, -alpha0)),
    ));
    let mut radii = vec![inner_sq.sqrt()];
    radii.extend(std::iter::repeat_n(r, pos_count));
    radii.extend(std::iter::repeat_n(0.0, m));
    Ok(Layout {
        dimension: hull,
        centers,
        radii,
    })
}

fn coincident_radii(sig: &Signature) -> Vec<f64> {
    let half = FRAC_1_SQRT_2;
    match (sig.m, sig.k()) {
        (1, 0) => vec![0.0],
        (1, _) => vec![1.0, 0.0],
        _ => vec![half; sig.k()],
    }
}

/// Equilateral normal form representative of a signature, in the smallest
/// ambient dimension plus `dims_slack` zero coordinates.
///
/// Classes are ordered as the signature lists them: positive-radius classes by
/// `d`, then the `m` zero-radius classes. `r` is the common radius of the
/// non-inner positive classes and is only used when there are some (distinct
/// flavor with `k >= 2`).
pub fn from_signature(
    sig: &Signature,
    flavor: Flavor,
    r: f64,
    dims_slack: usize,
) -> Result<AnalyticSpacing> {
    let layout = match flavor {
        Flavor::Coincident => {
            if sig.eq_placement().is_none() {
                return Err(Error::InvalidSignature(format!(
                    "{sig} is not a coincident-center signature"
                )));
            }
            Layout {
                dimension: 0,
                centers: vec![Vector::zeros(0); sig.class_count()],
                radii: coincident_radii(sig),
            }
        }
        Flavor::Distinct => {
            if sig.neq_placement().is_none() {
                return Err(Error::InvalidSignature(format!(
                    "{sig} is not a distinct-center signature"
                )));
            }
            if sig.k() >= 2 && !(r > 0.0 && r < FRAC_1_SQRT_2) {
                return Err(Error::OutOfRange(format!(
                    "r = {r} must lie in (0, sqrt(2)/2)"
                )));
            }
            distinct_layout(sig.m, sig.k(), r)?
        }
    };
    let hull = layout.dimension;
    let n = hull + sig.dim_sum() + dims_slack;
    let extra = n - hull;
    let mut next_axis = hull;
    let mut classes = Vec::with_capacity(sig.class_count());
    for (i, (center, radius)) in layout.centers.iter().zip(&layout.radii).enumerate() {
        let d = sig.d.get(i).copied().unwrap_or(0);
        classes.push(AnalyticClass {
            label: format!("c{i}"),
            center: center.padded(extra),
            radius: *radius,
            basis: Basis::axes(n, next_axis, d),
        });
        next_axis += d;
    }
    let out = AnalyticSpacing::new(n, classes)?;
    check(&out, 1e-9, true).into_result()?;
    Ok(out)
}

/// Every valid signature with total at most `max_sum`, paired with its
/// flavor: coincident ones first within each total.
pub fn catalog(max_sum: usize) -> Vec<(Signature, Flavor)> {
    let mut out = Vec::new();
    for total in 1..=max_sum {
        let eq = enumerate_eq(total).expect("total is positive");
        let neq = enumerate_neq(total).expect("total is positive");
        out.extend(eq.into_iter().map(|s| (s, Flavor::Coincident)));
        out.extend(neq.into_iter().map(|s| (s, Flavor::Distinct)));
    }
    out
}

/// Signature of a maximal spacing.
pub fn sig_of(s: &AnalyticSpacing, tol: f64) -> Result<Signature> {
    let verdict = is_maximal(s, tol)?;
    if !verdict.maximal {
        return Err(Error::NotMaximal(verdict.reason));
    }
    let m = s.classes.iter().filter(|c| c.basis.is_empty()).count();
    let positive: Vec<(usize, usize)> = s
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.basis.is_empty())
        .map(|(i, c)| (i, c.basis.len()))
        .collect();
    let mut d: Vec<usize>;
    if centers_coincide(&s.center_frame(tol)?) {
        d = positive.iter().map(|p| p.1).collect();
        d.sort_by(|a, b| b.cmp(a));
    } else {
        let inner = inner_classes(s, tol)?;
        let inner = inner[0];
        let mut rest: Vec<usize> = positive
            .iter()
            .filter(|p| p.0 != inner)
            .map(|p| p.1)
            .collect();
        rest.sort_by(|a, b| b.cmp(a));
        d = vec![s.classes[inner].basis.len()];
        d.extend(rest);
    }
    Signature::new(m, d)
}

/// Whether supports of the given dimensions fit next to a center span of
/// dimension `center_span_dim` in `R^n`, with `d_i = 0` exactly when `r_i = 0`.
pub fn feasible_dims(
    radii: &[f64],
    center_span_dim: usize,
    dims: &[usize],
    n: usize,
) -> Result<bool> {
    if radii.len() != dims.len() {
        return Err(Error::DimensionMismatch {
            expected: radii.len(),
            found: dims.len(),
        });
    }
    let coupled = radii.iter().zip(dims).all(|(&r, &d)| (d == 0) == (r == 0.0));
    Ok(coupled && center_span_dim + dims.iter().sum::<usize>() <= n)
}
