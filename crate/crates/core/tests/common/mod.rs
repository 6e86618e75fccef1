#![allow(dead_code)]

use equispace::analytic::{AnalyticClass, AnalyticSpacing};
use equispace::linalg::{gram_schmidt, Matrix, Vector};
use equispace::spacing::LabeledPointSet;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian(rng: &mut impl Rng, n: usize) -> Vector {
    Vector((0..n).map(|_| rng.sample(StandardNormal)).collect())
}

/// Uniformly random orthogonal matrix (Gram-Schmidt of Gaussian vectors).
pub fn random_rotation(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let vs: Vec<Vector> = (0..n).map(|_| gaussian(rng, n)).collect();
        let b = gram_schmidt(&vs, 1e-9).unwrap();
        if b.len() == n {
            return Matrix {
                n,
                rows: b.vectors.into_iter().map(|v| v.0).collect(),
            };
        }
    }
}

pub struct Rigid {
    pub rotation: Matrix,
    pub translation: Vector,
}

impl Rigid {
    pub fn random(rng: &mut impl Rng, n: usize) -> Self {
        Rigid {
            rotation: random_rotation(rng, n),
            translation: gaussian(rng, n),
        }
    }

    pub fn point(&self, p: &Vector) -> Vector {
        self.rotation.apply(p).add(&self.translation)
    }

    pub fn spacing(&self, s: &AnalyticSpacing) -> AnalyticSpacing {
        AnalyticSpacing::new(
            s.dimension,
            s.classes
                .iter()
                .map(|c| AnalyticClass {
                    label: c.label.clone(),
                    center: self.point(&c.center),
                    radius: c.radius,
                    basis: c.basis.map(s.dimension, |v| self.rotation.apply(v)),
                })
                .collect(),
        )
        .unwrap()
    }

    pub fn points(&self, y: &LabeledPointSet) -> LabeledPointSet {
        let mut out = y.clone();
        for c in &mut out.classes {
            for p in &mut c.points {
                *p = self.point(p);
            }
        }
        out
    }
}

/// Shifts one coordinate of one point by `amount`, choosing the coordinate
/// along which the point differs most from a point of another class so the
/// cross distance changes at first order.
pub fn perturb(y: &mut LabeledPointSet, rng: &mut impl Rng, amount: f64) {
    let count = y.class_count();
    let i = rng.random_range(0..count);
    let k = rng.random_range(0..y.classes[i].points.len());
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let axis = if count == 1 {
        rng.random_range(0..y.dimension)
    } else {
        let j = (i + rng.random_range(1..count)) % count;
        let p = &y.classes[i].points[k];
        let q = &y.classes[j].points[0];
        (0..y.dimension)
            .max_by(|&a, &b| (p[a] - q[a]).abs().total_cmp(&(p[b] - q[b]).abs()))
            .unwrap()
    };
    y.classes[i].points[k].0[axis] += sign * amount;
}
