mod common;

use equispace::analytic::{
    catalog, from_signature, inner_classes, is_maximal, sample, sig_of, validate, AnalyticSpacing,
};
use equispace::transforms::{
    class_deviation, isometric, normal_form_matching, outer_inner_squash_stretch,
    to_equilateral_normal_form,
};
use equispace::Flavor;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::Rigid;

const TOL: f64 = 1e-9;

fn random_maximal(rng: &mut ChaCha8Rng, flavor: Option<Flavor>) -> AnalyticSpacing {
    let all: Vec<_> = catalog(6)
        .into_iter()
        .filter(|(_, f)| flavor.is_none_or(|want| *f == want))
        .collect();
    let (sig, f) = &all[rng.random_range(0..all.len())];
    let s = from_signature(sig, *f, rng.random_range(0.05..0.66), 0).unwrap();
    if s.dimension == 0 {
        return s;
    }
    Rigid::random(rng, s.dimension).spacing(&s)
}

fn assert_maximal(s: &AnalyticSpacing) {
    assert!(validate(s, TOL).accepted);
    let v = is_maximal(s, TOL).unwrap();
    assert!(v.maximal, "{:?}", v.reason);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn squash_stretch_keeps_signature(seed in any::<u64>(), target in 0.0f64..0.7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = loop {
            let s = random_maximal(&mut rng, Some(Flavor::Distinct));
            if s.class_count() >= 2 {
                break s;
            }
        };
        let inner = inner_classes(&s, TOL).unwrap()[0];
        let outer = (inner + rng.random_range(1..s.class_count())) % s.class_count();
        let target = if s.classes[outer].basis.is_empty() { 0.0 } else { target };
        let out = outer_inner_squash_stretch(&s, outer, target, TOL).unwrap();
        assert_maximal(&out);
        prop_assert_eq!(sig_of(&out, TOL).unwrap(), sig_of(&s, TOL).unwrap());
        prop_assert!((out.classes[outer].radius - target).abs() < 1e-12);
        for i in (0..s.class_count()).filter(|&i| i != inner && i != outer) {
            prop_assert!(out.classes[i].center.max_abs_diff(&s.classes[i].center) < 1e-12);
            prop_assert_eq!(out.classes[i].radius, s.classes[i].radius);
        }
    }

    #[test]
    fn normal_form_is_idempotent(seed in any::<u64>(), r in 0.05f64..0.7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_maximal(&mut rng, None);
        let (once, _) = to_equilateral_normal_form(&s, r, TOL).unwrap();
        let (twice, record) = to_equilateral_normal_form(&once, r, TOL).unwrap();
        assert_maximal(&once);
        let order: Vec<usize> = (0..once.class_count()).collect();
        prop_assert!(class_deviation(&twice, &once, &order) <= 1e-8);
        prop_assert_eq!(record.steps.len(), 1);
    }

    #[test]
    fn normal_form_matches_the_constructed_one(seed in any::<u64>(), r in 0.05f64..0.7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_maximal(&mut rng, None);
        let (out, _) = to_equilateral_normal_form(&s, r, TOL).unwrap();
        let flavor = if s.center_frame(TOL).unwrap().dim() == 0 {
            Flavor::Coincident
        } else {
            Flavor::Distinct
        };
        let target = from_signature(&sig_of(&s, TOL).unwrap(), flavor, r, 0).unwrap();
        let matching = normal_form_matching(&out, TOL).unwrap();
        prop_assert!(class_deviation(&out, &target, &matching) <= 1e-8);
    }

    #[test]
    fn record_replays_onto_output(seed in any::<u64>(), r in 0.05f64..0.7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_maximal(&mut rng, None);
        let (out, record) = to_equilateral_normal_form(&s, r, TOL).unwrap();
        let y = sample(&s, 6, seed).unwrap();
        let moved = record.replay(&y).unwrap();
        prop_assert_eq!(moved.dimension, out.dimension);
        for (c, pts) in out.classes.iter().zip(&moved.classes) {
            for p in &pts.points {
                let offset = p.sub(&c.center);
                prop_assert!((offset.norm() - c.radius).abs() <= 1e-8);
                let inside = c.basis.project_direction(&offset);
                prop_assert!(inside.max_abs_diff(&offset) <= 1e-8);
            }
        }
    }

    #[test]
    fn isometric_iff_same_signature(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_maximal(&mut rng, None);
        let b = random_maximal(&mut rng, None);
        if a.class_count() == b.class_count() && a.dimension == b.dimension {
            let same = sig_of(&a, TOL).unwrap() == sig_of(&b, TOL).unwrap();
            prop_assert_eq!(isometric(&a, &b, TOL).unwrap(), same);
        }
        prop_assert!(isometric(&a, &a, TOL).unwrap());
    }
}

#[test]
fn renormalizing_at_other_radius() {
    let s = from_signature(&"0;(2,1,1)".parse().unwrap(), Flavor::Distinct, 0.3, 0).unwrap();
    let want = from_signature(&"0;(2,1,1)".parse().unwrap(), Flavor::Distinct, 0.5, 0).unwrap();
    let (out, _) = to_equilateral_normal_form(&s, 0.5, TOL).unwrap();
    let matching = normal_form_matching(&out, TOL).unwrap();
    assert!(class_deviation(&out, &want, &matching) <= 1e-8);
}
