//! Randomized suites, each returning the number of cases run.

use super::{config, cw_euler, fan2, fan3, fanifold_with_subsets, small_fanifold};
use fanifold_core::bmodel::u_functor;
use fanifold_core::fan::Fan;
use fanifold_core::fanifold::Fanifold;
use fanifold_core::lattice::{smith_normal_form, IntMatrix};
use fanifold_core::mirror::restriction_pairs;
use fanifold_core::skeleton::{euler_characteristic_c, skeleton_model};
use proptest::prelude::*;
use proptest::test_runner::{TestCaseError, TestRunner};
use std::collections::BTreeSet;

pub const CASES: u32 = 256;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(config(CASES));
    runner.run(&strategy, test).map_err(|e| e.to_string())?;
    Ok(CASES)
}

fn fail(msg: impl Into<String>) -> TestCaseError {
    TestCaseError::fail(msg.into())
}

fn subset(rays: &[usize], of: &[usize]) -> bool {
    rays.iter().all(|r| of.contains(r))
}

/// A rank-3 fan with a pair of cones `σ ⊆ τ`.
fn fan_with_flag() -> impl Strategy<Value = (Fan, usize, usize)> {
    fan3().prop_flat_map(|f| {
        let n = f.len();
        (Just(f), 0..n, any::<prop::sample::Index>())
    })
    .prop_map(|(f, tau, pick)| {
        let faces: Vec<usize> = (0..f.len()).filter(|&s| subset(f.cone_rays(s), f.cone_rays(tau))).collect();
        let sigma = faces[pick.index(faces.len())];
        (f, sigma, tau)
    })
}

/// `(Σ/σ)/(τ/σ)` against `Σ/τ`, both computed as images of the cones
/// containing `τ`, related by the lattice map induced on the quotients.
pub fn quotient_composition() -> Result<u32, String> {
    run(fan_with_flag(), |(f, sigma, tau)| {
        let (q1, d1) = f.quotient(sigma).map_err(|e| fail(e.to_string()))?;
        let tau1 = f.cone(tau).image(&d1.projection.matrix).map_err(|e| fail(e.to_string()))?;
        let k = q1.find_cone(&tau1).ok_or_else(|| fail("τ/σ missing from Σ/σ"))?;
        let (q12, d12) = q1.quotient(k).map_err(|e| fail(e.to_string()))?;
        let (q2, d2) = f.quotient(tau).map_err(|e| fail(e.to_string()))?;
        let composite = d12.projection.matrix.mul(&d1.projection.matrix).unwrap();
        let induced = composite.mul(&d2.section).unwrap();
        prop_assert!(induced.is_unimodular());
        prop_assert_eq!(induced.mul(&d2.projection.matrix).unwrap(), composite.clone());
        let star: Vec<usize> = (0..f.len()).filter(|&r| subset(f.cone_rays(tau), f.cone_rays(r))).collect();
        prop_assert_eq!(q12.len(), star.len());
        prop_assert_eq!(q2.len(), star.len());
        let mut hit = BTreeSet::new();
        for &r in &star {
            let a = f.cone(r).image(&composite).unwrap();
            let b = f.cone(r).image(&d2.projection.matrix).unwrap();
            let ia = q12.find_cone(&a).ok_or_else(|| fail("iterated image missing"))?;
            prop_assert!(q2.find_cone(&b).is_some());
            prop_assert!(b.image(&induced).unwrap().same_support(&a));
            hit.insert(ia);
        }
        prop_assert_eq!(hit.len(), star.len());
        Ok(())
    })
}

fn random_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec(-20i64..=20, n), m)
            .prop_map(move |rows| IntMatrix::from_rows(&rows, n).unwrap())
    })
}

pub fn snf_reconstruction() -> Result<u32, String> {
    run(random_matrix(), |a| {
        let s = smith_normal_form(&a).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                prop_assert!(i == j || s.d.get(i, j) == 0);
            }
        }
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|&x| x > 0));
        prop_assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        Ok(())
    })
}

pub fn constructions_validate() -> Result<u32, String> {
    run(prop_oneof![fan2(), fan3()], |f| {
        let report = Fanifold::from_fan(&f).unwrap().validate();
        prop_assert!(report.valid, "{:?}", report.errors);
        if f.len() > 1 {
            let report = Fanifold::sphere_section(&f).unwrap().validate();
            prop_assert!(report.valid, "{:?}", report.errors);
        }
        Ok(())
    })
}

pub fn euler_matches_cells() -> Result<u32, String> {
    run(small_fanifold(), |phi| {
        let model = skeleton_model(&phi).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(euler_characteristic_c(&model), cw_euler(&phi));
        Ok(())
    })
}

fn closed(phi: &Fanifold, pick: &[bool]) -> BTreeSet<usize> {
    phi.down_closure(&(0..pick.len()).filter(|&i| pick[i]).collect())
}

pub fn open_locus_identities() -> Result<u32, String> {
    run(fanifold_with_subsets(), |(phi, a, b)| {
        let (c, d) = (closed(&phi, &a), closed(&phi, &b));
        let meet: BTreeSet<usize> = c.intersection(&d).copied().collect();
        let join: BTreeSet<usize> = c.union(&d).copied().collect();
        prop_assert!(phi.is_down_closed(&meet) && phi.is_down_closed(&join));
        let rest: BTreeSet<usize> = (0..phi.strata().len()).filter(|i| !c.contains(i)).collect();
        prop_assert!(phi.arrows().iter().all(|x| !rest.contains(&x.from) || rest.contains(&x.to)));
        let u = |z: &BTreeSet<usize>| u_functor(&phi, z).map_err(|e| fail(e.to_string()));
        let (uc, ud, um, uj) = (u(&c)?, u(&d)?, u(&meet)?, u(&join)?);
        prop_assert_eq!(um.orbits(), uc.orbits().intersection(&ud.orbits()).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(uj.orbits(), uc.orbits().union(&ud.orbits()).cloned().collect::<BTreeSet<_>>());
        let marked = |x: &fanifold_core::bmodel::OpenLocus| x.marked_charts.iter().cloned().collect::<BTreeSet<_>>();
        prop_assert_eq!(marked(&uj), marked(&uc).intersection(&marked(&ud)).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(marked(&um), marked(&uc).union(&marked(&ud)).cloned().collect::<BTreeSet<_>>());
        Ok(())
    })
}

pub fn restriction_nesting() -> Result<u32, String> {
    run(fanifold_with_subsets(), |(phi, a, b)| {
        let small = closed(&phi, &a);
        let both: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x || *y).collect();
        let large = closed(&phi, &both);
        let p = restriction_pairs(&phi, &small).map_err(|e| fail(e.to_string()))?;
        let q = restriction_pairs(&phi, &large).map_err(|e| fail(e.to_string()))?;
        prop_assert!(p.verified && q.verified);
        prop_assert!(q.removed_handles.iter().all(|h| p.removed_handles.contains(h)));
        prop_assert!(p.kept_handles.iter().all(|h| q.kept_handles.contains(h)));
        Ok(())
    })
}

pub type Suite = (&'static str, fn() -> Result<u32, String>);

pub const ALL: [Suite; 6] = [
    ("quotient fan composition", quotient_composition),
    ("SNF reconstruction", snf_reconstruction),
    ("from_fan and sphere_section validate", constructions_validate),
    ("χ_c against cell counts", euler_matches_cells),
    ("open locus union and intersection", open_locus_identities),
    ("restriction pairs nest contravariantly", restriction_nesting),
];
