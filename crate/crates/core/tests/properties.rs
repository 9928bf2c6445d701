mod common;

use common::{config, dual_point_count, fan2, fan3, flag_count, small_fanifold, suites};
use fanifold_core::bmodel::{components, limit_census, ToricDiagram};
use fanifold_core::fanifold::Fanifold;
use fanifold_core::lattice::{annihilator, quotient_with_torsion, rank, Lattice};
use fanifold_core::mirror::mirror_dictionary;
use fanifold_core::skeleton::{handle_plan, skeleton_model};
use proptest::prelude::*;
use proptest::test_runner::TestRunner;

#[test]
fn quotient_fan_composition() {
    suites::quotient_composition().unwrap();
}

#[test]
fn snf_reconstruction() {
    suites::snf_reconstruction().unwrap();
}

#[test]
fn constructions_validate() {
    suites::constructions_validate().unwrap();
}

#[test]
fn euler_matches_cells() {
    suites::euler_matches_cells().unwrap();
}

#[test]
fn open_locus_identities() {
    suites::open_locus_identities().unwrap();
}

#[test]
fn restriction_nesting() {
    suites::restriction_nesting().unwrap();
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(config(cases))
}

#[test]
fn census_monotone_and_additive() {
    runner(64)
        .run(&(small_fanifold(), small_fanifold()), |(a, b)| {
            let (da, db) = (ToricDiagram::full(&a).unwrap(), ToricDiagram::full(&b).unwrap());
            let both = da.disjoint_union(&db);
            let mut last = 0;
            for d in 0..=2 {
                let x = limit_census(&da, d).unwrap().dimension;
                prop_assert!(x >= last);
                last = x;
                let y = limit_census(&db, d).unwrap().dimension;
                prop_assert_eq!(limit_census(&both, d).unwrap().dimension, x + y);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn single_fan_census_counts_dual_points() {
    runner(200)
        .run(&(fan2(), 0i64..4), |(f, d)| {
            let census = limit_census(&ToricDiagram::of_fan(&f).unwrap(), d).unwrap().dimension;
            prop_assert_eq!(census, dual_point_count(2, f.rays(), d));
            Ok(())
        })
        .unwrap();
}

#[test]
fn skeleton_strata_are_lagrangian_flags() {
    runner(200)
        .run(&prop_oneof![fan2(), fan3()], |f| {
            let phi = Fanifold::from_fan(&f).unwrap();
            let model = skeleton_model(&phi).unwrap();
            prop_assert_eq!(model.strata.len(), flag_count(&f));
            prop_assert!(model.strata.iter().all(|s| s.total_dim() == f.rank()));
            Ok(())
        })
        .unwrap();
}

#[test]
fn handles_and_components_track_strata() {
    runner(200)
        .run(&small_fanifold(), |phi| {
            let plan = handle_plan(&phi).unwrap();
            prop_assert_eq!(plan.handles.len(), phi.interior_strata().len());
            prop_assert_eq!(plan.counts.iter().sum::<usize>(), plan.handles.len());
            let minimal = phi.minimal_strata().into_iter().filter(|&i| phi.stratum(i).interior).count();
            prop_assert_eq!(components(&phi).len(), minimal);
            let d = mirror_dictionary(&phi).unwrap();
            prop_assert_eq!(d.certificate.len(), phi.strata().len());
            Ok(())
        })
        .unwrap();
}

#[test]
fn unrolled_closures_are_posets() {
    runner(200)
        .run(&small_fanifold(), |phi| {
            for f in 0..phi.strata().len() {
                let (closure, _) = phi.unrolled_closure(f).unwrap();
                prop_assert!(closure.is_poset());
                prop_assert!(closure.validate().valid);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn saturated_quotients_and_annihilators() {
    let vectors = proptest::collection::vec(proptest::collection::vec(-6i64..=6, 3), 0..4);
    runner(256)
        .run(&vectors, |vs| {
            let r = rank(&vs, 3).unwrap();
            let ann = annihilator(Lattice::new(3), &vs).unwrap();
            prop_assert_eq!(ann.basis.len() + r, 3);
            for u in &ann.basis {
                prop_assert!(vs.iter().all(|v| v.iter().zip(u).map(|(a, b)| a * b).sum::<i64>() == 0));
            }
            // the kernel of a quotient projection is saturated
            let q = quotient_with_torsion(Lattice::new(3), &vs).unwrap();
            let kernel = fanifold_core::lattice::integer_kernel(&q.projection.matrix.to_rows(), 3).unwrap();
            prop_assert!(quotient_with_torsion(Lattice::new(3), &kernel).unwrap().torsion.is_empty());
            Ok(())
        })
        .unwrap();
}
