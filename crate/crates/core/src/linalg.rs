//! Small dense linear algebra: orthonormalization, affine frames, projections,
//! reflections, circumcenters and subspace-aligning orthogonal maps.
//!
//! Dimensions here are tiny (tens at most), so everything is plain `Vec<f64>`
//! with explicit tolerances. Nothing in this module keeps global state.

use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point or direction in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector of `R^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn dist_sq(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Largest per-coordinate absolute difference.
    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Append zero coordinates.
    pub fn padded(&self, extra: usize) -> Vector {
        let mut v = self.0.clone();
        v.resize(self.0.len() + extra, 0.0);
        Vector(v)
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dim(expected: usize, v: &Vector) -> Result<()> {
    if v.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: v.dim(),
        });
    }
    Ok(())
}

/// Orthonormal family in `R^dim_ambient`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Basis {
    pub dim_ambient: usize,
    pub vectors: Vec<Vector>,
}

impl Basis {
    pub fn empty(dim_ambient: usize) -> Self {
        Basis {
            dim_ambient,
            vectors: Vec::new(),
        }
    }

    /// Standard basis vectors `e_start, .., e_{start+count-1}`.
    pub fn axes(dim_ambient: usize, start: usize, count: usize) -> Self {
        Basis {
            dim_ambient,
            vectors: (start..start + count)
                .map(|i| Vector::unit(dim_ambient, i))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coefficients of `v` in this basis.
    pub fn coords(&self, v: &Vector) -> Vec<f64> {
        self.vectors.iter().map(|b| b.dot(v)).collect()
    }

    /// `sum_k coeffs[k] * vectors[k]`
    pub fn combine(&self, coeffs: &[f64]) -> Vector {
        let mut out = vec![0.0; self.dim_ambient];
        for (b, c) in self.vectors.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(b.iter()) {
                *o += c * x;
            }
        }
        Vector(out)
    }

    /// Orthogonal projection of a direction onto the span.
    pub fn project_direction(&self, v: &Vector) -> Vector {
        self.combine(&self.coords(v))
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(b) - target).abs());
            }
        }
        worst
    }

    /// Apply `f` to each vector.
    pub fn map(&self, dim_ambient: usize, f: impl Fn(&Vector) -> Vector) -> Basis {
        Basis {
            dim_ambient,
            vectors: self.vectors.iter().map(f).collect(),
        }
    }
}

/// Affine set `base + span(basis)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFrame {
    pub base: Vector,
    pub basis: Basis,
}

impl AffineFrame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `p - base` in the frame's basis.
    pub fn local_coords(&self, p: &Vector) -> Vec<f64> {
        self.basis.coords(&p.sub(&self.base))
    }
}

/// Incremental modified Gram-Schmidt with re-orthogonalization.
struct Orthonormalizer {
    dim: usize,
    threshold: f64,
    vectors: Vec<Vector>,
}

impl Orthonormalizer {
    fn new(dim: usize, threshold: f64) -> Self {
        Orthonormalizer {
            dim,
            threshold,
            vectors: Vec::new(),
        }
    }

    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in &self.vectors {
                let c = dot(&w, b);
                for (x, y) in w.iter_mut().zip(b.iter()) {
                    *x -= c * y;
                }
            }
        }
        w
    }

    fn push(&mut self, v: &[f64]) -> bool {
        if self.vectors.len() == self.dim {
            return false;
        }
        let w = self.residual(v);
        let n = dot(&w, &w).sqrt();
        if n <= self.threshold {
            return false;
        }
        self.vectors
            .push(Vector(w.into_iter().map(|x| x / n).collect()));
        true
    }

    fn finish(self) -> Basis {
        Basis {
            dim_ambient: self.dim,
            vectors: self.vectors,
        }
    }
}

fn rank_threshold(max_norm: f64, tol: f64) -> f64 {
    if max_norm > 1e-12 {
        tol * max_norm
    } else {
        tol
    }
}

/// Orthonormal basis of the span of `vectors`.
///
/// A vector is dropped when its residual after projecting out the basis so
/// far is at most `tol` times the largest input norm, so the output length is
/// the numerical rank. An empty input yields an empty basis in `R^0`.
pub fn gram_schmidt(vectors: &[Vector], tol: f64) -> Result<Basis> {
    let Some(first) = vectors.first() else {
        return Ok(Basis::empty(0));
    };
    gram_schmidt_in(first.dim(), vectors, tol)
}

/// Like [`gram_schmidt`] with an explicit ambient dimension, so that an empty
/// input still produces a basis of the right ambient space.
pub fn gram_schmidt_in(dim: usize, vectors: &[Vector], tol: f64) -> Result<Basis> {
    let mut max_norm: f64 = 0.0;
    for v in vectors {
        check_dim(dim, v)?;
        max_norm = max_norm.max(v.norm());
    }
    let mut gs = Orthonormalizer::new(dim, rank_threshold(max_norm, tol));
    for v in vectors {
        gs.push(v);
    }
    Ok(gs.finish())
}

/// Gram-Schmidt over the differences `p_j - origin` without materializing them.
pub(crate) fn gram_schmidt_differences(
    origin: &Vector,
    points: &[Vector],
    tol: f64,
) -> Result<Basis> {
    let dim = origin.dim();
    let mut max_norm: f64 = 0.0;
    for p in points {
        check_dim(dim, p)?;
        max_norm = max_norm.max(p.dist(origin));
    }
    let mut gs = Orthonormalizer::new(dim, rank_threshold(max_norm, tol));
    let mut diff = vec![0.0; dim];
    for p in points {
        for ((d, a), b) in diff.iter_mut().zip(p.iter()).zip(origin.iter()) {
            *d = a - b;
        }
        gs.push(&diff);
    }
    Ok(gs.finish())
}

/// Smallest affine set containing `points`, based at the first point.
pub fn affine_frame(points: &[Vector], tol: f64) -> Result<AffineFrame> {
    let base = points
        .first()
        .ok_or(Error::Empty("affine_frame needs at least one point"))?
        .clone();
    let basis = gram_schmidt_differences(&base, &points[1..], tol)?;
    Ok(AffineFrame { base, basis })
}

/// Orthogonal projection of `p` onto the affine set `frame`.
pub fn project(p: &Vector, frame: &AffineFrame) -> Result<Vector> {
    check_dim(frame.base.dim(), p)?;
    let offset = frame.basis.project_direction(&p.sub(&frame.base));
    Ok(frame.base.add(&offset))
}

/// Point reflection of `p` through `center`: `2 center - p`.
pub fn reflect(p: &Vector, center: &Vector) -> Result<Vector> {
    check_dim(center.dim(), p)?;
    Ok(Vector(
        p.iter().zip(center.iter()).map(|(x, c)| 2.0 * c - x).collect(),
    ))
}

/// Largest `|<a_i, b_j>|` over the two families; 0 when either is empty.
pub fn cross_inner_residual(a: &Basis, b: &Basis) -> Result<f64> {
    if a.dim_ambient != b.dim_ambient && !a.is_empty() && !b.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: a.dim_ambient,
            found: b.dim_ambient,
        });
    }
    let mut worst: f64 = 0.0;
    for u in &a.vectors {
        for v in &b.vectors {
            worst = worst.max(u.dot(v).abs());
        }
    }
    Ok(worst)
}

/// True iff every pairwise inner product between the families is within `tol` of 0.
pub fn bases_orthogonal(a: &Basis, b: &Basis, tol: f64) -> Result<bool> {
    Ok(cross_inner_residual(a, b)? <= tol)
}

/// Least-squares solve of `rows * x = rhs` by Householder QR.
///
/// Returns the solution and the Euclidean norm of the misfit. The system must
/// have full column rank.
pub fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    if rhs.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: rhs.len(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), dot(rhs, rhs).sqrt()));
    }
    if m < n {
        return Err(Error::RankDeficient);
    }
    // column-major copy
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let mut b = rhs.to_vec();
    let scale = a
        .iter()
        .flat_map(|c| c.iter())
        .fold(0.0f64, |s, x| s.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    for k in 0..n {
        let alpha = {
            let col = &a[k];
            let s: f64 = col[k..].iter().map(|x| x * x).sum::<f64>().sqrt();
            if col[k] > 0.0 {
                -s
            } else {
                s
            }
        };
        if alpha.abs() <= 1e-13 * scale {
            return Err(Error::RankDeficient);
        }
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq > 0.0 {
            for col in a.iter_mut().skip(k) {
                let s = 2.0 * dot(&v, &col[k..]) / vnorm_sq;
                for (x, vi) in col[k..].iter_mut().zip(&v) {
                    *x -= s * vi;
                }
            }
            let s = 2.0 * dot(&v, &b[k..]) / vnorm_sq;
            for (x, vi) in b[k..].iter_mut().zip(&v) {
                *x -= s * vi;
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[j][i] * x[j];
        }
        x[i] = s / a[i][i];
    }
    let mut misfit: f64 = 0.0;
    for (r, bi) in rows.iter().zip(rhs) {
        let e = dot(r, &x) - bi;
        misfit += e * e;
    }
    Ok((x, misfit.sqrt()))
}

/// Center and radius of the sphere through `points`, with the center taken in
/// the affine hull of the points.
pub fn circumcenter(points: &[Vector], tol: f64) -> Result<(Vector, f64)> {
    let frame = affine_frame(points, tol)?;
    let local: Vec<Vec<f64>> = points[1..].iter().map(|p| frame.local_coords(p)).collect();
    let rows: Vec<Vec<f64>> = local
        .iter()
        .map(|q| q.iter().map(|x| 2.0 * x).collect())
        .collect();
    let rhs: Vec<f64> = points[1..]
        .iter()
        .map(|p| p.dist_sq(&frame.base))
        .collect();
    let (t, _) = if frame.dim() == 0 {
        (Vec::new(), 0.0)
    } else {
        least_squares(&rows, &rhs)?
    };
    let center = frame.base.add(&frame.basis.combine(&t));
    let dists: Vec<f64> = points.iter().map(|p| p.dist(&center)).collect();
    let lo = dists.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = dists.iter().cloned().fold(0.0, f64::max);
    if hi - lo > tol {
        return Err(Error::NoCommonSphere { residual: hi - lo });
    }
    Ok((center, dists[0]))
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        Matrix {
            n,
            rows: (0..n).map(|i| Vector::unit(n, i).0).collect(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(self.rows.iter().map(|r| dot(r, v)).collect())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            n: self.n,
            rows: (0..self.n)
                .map(|j| self.rows.iter().map(|r| r[j]).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let t = other.transpose();
        Matrix {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|r| t.rows.iter().map(|c| dot(r, c)).collect())
                .collect(),
        }
    }

    /// `max |(M^T M - I)_{ij}|`
    pub fn orthogonality_residual(&self) -> f64 {
        let g = self.transpose().mul(self);
        let mut worst: f64 = 0.0;
        for (i, r) in g.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                let t = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((x - t).abs());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.rows[i][j]
    }
}

/// Orthonormal completion of `vectors` to a basis of `R^dim`, returning only
/// the new vectors. Candidates are the standard axes in order.
fn complement(dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    let mut gs = Orthonormalizer::new(dim, 1e-8);
    for v in vectors {
        gs.vectors.push(v.clone());
    }
    let start = gs.vectors.len();
    for i in 0..dim {
        gs.push(&Vector::unit(dim, i));
    }
    gs.vectors.split_off(start)
}

/// Orthogonal map sending the `j`-th vector of `source[i]` to the `j`-th
/// vector of `target[i]`, extended to the orthogonal complements.
///
/// Both lists must consist of mutually orthogonal orthonormal families with
/// matching counts and per-entry sizes.
pub fn aligning_rotation(source: &[Basis], target: &[Basis], tol: f64) -> Result<Matrix> {
    if source.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: source.len(),
            found: target.len(),
        });
    }
    let dim = source
        .iter()
        .chain(target)
        .map(|b| b.dim_ambient)
        .find(|&d| d > 0)
        .unwrap_or(0);
    let mut src: Vec<Vector> = Vec::new();
    let mut dst: Vec<Vector> = Vec::new();
    for (s, t) in source.iter().zip(target) {
        if s.len() != t.len() {
            return Err(Error::DimensionMismatch {
                expected: s.len(),
                found: t.len(),
            });
        }
        for v in s.vectors.iter().chain(&t.vectors) {
            check_dim(dim, v)?;
        }
        src.extend(s.vectors.iter().cloned());
        dst.extend(t.vectors.iter().cloned());
    }
    for family in [&src, &dst] {
        let b = Basis {
            dim_ambient: dim,
            vectors: family.clone(),
        };
        let r = b.orthonormality_residual();
        if r > tol.max(1e-8) {
            return Err(Error::NotOrthogonal { residual: r });
        }
    }
    if src.len() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: src.len(),
        });
    }
    src.extend(complement(dim, &src));
    dst.extend(complement(dim, &dst));
    // U = sum_k dst_k src_k^T
    let mut rows = vec![vec![0.0; dim]; dim];
    for (s, d) in src.iter().zip(&dst) {
        for (i, row) in rows.iter_mut().enumerate() {
            let di = d[i];
            if di != 0.0 {
                for (x, sj) in row.iter_mut().zip(s.iter()) {
                    *x += di * sj;
                }
            }
        }
    }
    Ok(Matrix { n: dim, rows })
}

/// Radius of the sphere through the vertices of a regular simplex with
/// `vertices` vertices and edge length `edge`: `edge * sqrt((j-1)/(2j))`.
pub fn regular_simplex_circumradius(edge: f64, vertices: usize) -> Result<f64> {
    if vertices == 0 {
        return Err(Error::OutOfRange("simplex needs at least one vertex".into()));
    }
    let j = vertices as f64;
    Ok(edge * ((j - 1.0) / (2.0 * j)).sqrt())
}

/// Vertices of a regular simplex with `vertices` vertices and edge `edge`,
/// centered at the origin of `R^{vertices-1}`.
pub fn regular_simplex(vertices: usize, edge: f64) -> Vec<Vector> {
    if vertices == 0 {
        return Vec::new();
    }
    let j = vertices;
    // scaled axes in R^j, centered, then expressed in an orthonormal basis of
    // their (j-1)-dimensional hull
    let s = edge / std::f64::consts::SQRT_2;
    let centroid = s / j as f64;
    let lifted: Vec<Vector> = (0..j)
        .map(|i| {
            Vector(
                (0..j)
                    .map(|k| if k == i { s - centroid } else { -centroid })
                    .collect(),
            )
        })
        .collect();
    let frame_basis = gram_schmidt_differences(&lifted[0], &lifted[1..], 1e-12)
        .expect("dimensions agree by construction");
    lifted
        .iter()
        .map(|p| Vector(frame_basis.coords(p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vector {
        Vector(x.to_vec())
    }

    fn assert_close(a: &Vector, b: &Vector, tol: f64) {
        assert!(a.max_abs_diff(b) <= tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn gram_schmidt_examples() {
        let b = gram_schmidt(&[v(&[1.0, 0.0]), v(&[1.0, 1.0])], 1e-9).unwrap();
        assert_eq!(b.len(), 2);
        assert_close(&b.vectors[0], &v(&[1.0, 0.0]), 1e-15);
        assert_close(&b.vectors[1], &v(&[0.0, 1.0]), 1e-15);

        let b = gram_schmidt(&[v(&[1.0, 1.0, 0.0]), v(&[2.0, 2.0, 0.0])], 1e-9).unwrap();
        assert_eq!(b.len(), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(&b.vectors[0], &v(&[h, h, 0.0]), 1e-15);

        assert!(gram_schmidt(&[], 1e-9).unwrap().is_empty());
        assert!(matches!(
            gram_schmidt(&[v(&[1.0]), v(&[1.0, 2.0])], 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gram_schmidt_relative_rank() {
        // same geometry at two scales gives the same rank
        let small = [v(&[1e-6, 0.0]), v(&[1e-6, 1e-16])];
        let large = [v(&[1e6, 0.0]), v(&[1e6, 1e-4])];
        assert_eq!(gram_schmidt(&small, 1e-9).unwrap().len(), 1);
        assert_eq!(gram_schmidt(&large, 1e-9).unwrap().len(), 1);
        assert_eq!(gram_schmidt(&[Vector::zeros(3)], 1e-9).unwrap().len(), 0);
    }

    #[test]
    fn affine_frame_examples() {
        let f = affine_frame(&[v(&[0.0, 0.0]), v(&[1.0, 0.0])], 1e-9).unwrap();
        assert_eq!(f.base, v(&[0.0, 0.0]));
        assert_eq!(f.basis.vectors, vec![v(&[1.0, 0.0])]);

        let f = affine_frame(&[v(&[5.0, 5.0])], 1e-9).unwrap();
        assert_eq!(f.base, v(&[5.0, 5.0]));
        assert!(f.basis.is_empty());

        let f = affine_frame(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])], 1e-9).unwrap();
        assert_eq!(f.dim(), 2);

        assert!(matches!(affine_frame(&[], 1e-9), Err(Error::Empty(_))));
    }

    #[test]
    fn project_examples() {
        let x_axis = AffineFrame {
            base: v(&[0.0, 0.0]),
            basis: Basis::axes(2, 0, 1),
        };
        assert_eq!(project(&v(&[3.0, 4.0]), &x_axis).unwrap(), v(&[3.0, 0.0]));
        let p = v(&[7.5, 0.0]);
        assert_close(&project(&p, &x_axis).unwrap(), &p, 1e-15);

        let f = AffineFrame {
            base: Vector::zeros(3),
            basis: Basis::axes(3, 0, 1),
        };
        assert_eq!(
            project(&v(&[1.0, 1.0, 1.0]), &f).unwrap(),
            v(&[1.0, 0.0, 0.0])
        );
        assert!(project(&v(&[1.0]), &f).is_err());
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(
            reflect(&v(&[1.0, 2.0]), &v(&[0.0, 0.0])).unwrap(),
            v(&[-1.0, -2.0])
        );
        let p = v(&[0.3, -1.7]);
        assert_eq!(reflect(&p, &p).unwrap(), p);
        assert_eq!(
            reflect(&v(&[0.0, 0.0]), &v(&[1.0, 0.0])).unwrap(),
            v(&[2.0, 0.0])
        );
        assert!(reflect(&v(&[0.0]), &v(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        let e1 = Basis::axes(2, 0, 1);
        let e2 = Basis::axes(2, 1, 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let diag = Basis {
            dim_ambient: 2,
            vectors: vec![v(&[h, h])],
        };
        assert!(bases_orthogonal(&e1, &e2, 1e-9).unwrap());
        assert!(!bases_orthogonal(&e1, &diag, 1e-9).unwrap());
        assert!(bases_orthogonal(&Basis::empty(2), &diag, 1e-9).unwrap());
    }

    #[test]
    fn circumcenter_examples() {
        let (c, r) = circumcenter(&[v(&[0.5, 0.0]), v(&[-0.5, 0.0])], 1e-9).unwrap();
        assert_close(&c, &v(&[0.0, 0.0]), 1e-15);
        assert!((r - 0.5).abs() < 1e-15);

        let tri = [
            v(&[0.0, 0.0]),
            v(&[1.0, 0.0]),
            v(&[0.5, 3f64.sqrt() / 2.0]),
        ];
        let (c, r) = circumcenter(&tri, 1e-9).unwrap();
        // centroid (1/2, sqrt(3)/6), radius 1/sqrt(3)
        assert_close(&c, &v(&[0.5, 3f64.sqrt() / 6.0]), 1e-12);
        assert!((r - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((r - regular_simplex_circumradius(1.0, 3).unwrap()).abs() < 1e-12);

        let collinear = [v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[3.0, 0.0])];
        assert!(matches!(
            circumcenter(&collinear, 1e-9),
            Err(Error::NoCommonSphere { .. })
        ));
    }

    #[test]
    fn aligning_rotation_examples() {
        let fams = vec![Basis::axes(3, 0, 1), Basis::axes(3, 2, 1)];
        let u = aligning_rotation(&fams, &fams, 1e-9).unwrap();
        assert_eq!(u, Matrix::identity(3));

        let u = aligning_rotation(&[Basis::axes(2, 0, 1)], &[Basis::axes(2, 1, 1)], 1e-9).unwrap();
        assert!(u.orthogonality_residual() <= 1e-12);
        assert_close(&u.apply(&Vector::unit(2, 0)), &Vector::unit(2, 1), 1e-12);

        // swap two lines in R^3
        let a = Basis::axes(3, 0, 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = Basis {
            dim_ambient: 3,
            vectors: vec![v(&[0.0, h, h])],
        };
        let u = aligning_rotation(&[a.clone(), b.clone()], &[b.clone(), a.clone()], 1e-9).unwrap();
        assert!(u.orthogonality_residual() <= 1e-12);
        assert_close(&u.apply(&a.vectors[0]), &b.vectors[0], 1e-12);
        assert_close(&u.apply(&b.vectors[0]), &a.vectors[0], 1e-12);

        let bad = Basis {
            dim_ambient: 3,
            vectors: vec![v(&[h, h, 0.0])],
        };
        assert!(matches!(
            aligning_rotation(&[a.clone(), bad.clone()], &[a, bad], 1e-9),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn least_squares_consistent_and_inconsistent() {
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let (x, res) = least_squares(&rows, &[1.0, 2.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        assert!(res < 1e-14);
        let (_, res) = least_squares(&rows, &[1.0, 2.0, 4.0]).unwrap();
        assert!(res > 0.5);
        assert!(matches!(
            least_squares(&[vec![1.0, 1.0], vec![2.0, 2.0]], &[1.0, 2.0]),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn regular_simplex_is_regular() {
        for j in 1..8 {
            let pts = regular_simplex(j, 0.7);
            assert_eq!(pts.len(), j);
            for p in &pts {
                assert_eq!(p.dim(), j - 1);
                let r = regular_simplex_circumradius(0.7, j).unwrap();
                assert!((p.norm() - r).abs() < 1e-12);
            }
            for a in 0..j {
                for b in a + 1..j {
                    assert!((pts[a].dist(&pts[b]) - 0.7).abs() < 1e-12);
                }
            }
        }
    }
}
