use super::*;
use crate::catalog;
use crate::fan::stellar_subdivision;

fn groups(mesh: &str, kind: &str) -> usize {
    mesh.lines().filter(|l| *l == format!("# kind {kind}")).count()
}

#[test]
fn pieces_of_small_fans() {
    let a1 = fltz_pieces(&catalog::affine_space(1)).unwrap();
    assert_eq!(a1.iter().map(|p| p.torus_rank).collect::<Vec<_>>(), vec![1, 0]);
    let p1 = fltz_pieces(&catalog::projective_space(1)).unwrap();
    assert_eq!(p1.len(), 3);
    assert_eq!(p1.iter().filter(|p| p.torus_rank == 0).count(), 2);
    let q = fltz_pieces(&catalog::quadric_cone(true)).unwrap();
    let top = q.iter().find(|p| p.dim == 2).unwrap();
    assert_eq!(top.component_group, vec![2]);
    assert!(fltz_pieces(&catalog::quadric_cone(false)).unwrap().iter().all(|p| p.components() == 1));
}

#[test]
fn model_dimensions_and_incidences() {
    for phi in [catalog::square(), catalog::three_a1(), catalog::unigon(), catalog::necklace(2)] {
        let m = skeleton_model(&phi).unwrap();
        assert!(m.strata.iter().all(|s| s.total_dim() == phi.dimension()));
    }
    let t = skeleton_model(&catalog::three_a1()).unwrap();
    assert_eq!(t.strata.len(), 7);
    assert_eq!(t.strata.iter().filter(|s| s.cone_dim == 0 && s.torus_rank == 1).count(), 3);
    assert_eq!(t.incidences.iter().filter(|i| i.2 == Incidence::Arrow).count(), 3);
    let a2 = Fanifold::from_fan(&catalog::affine_space(2)).unwrap();
    // flags σ ⊆ τ in the quadrant: 4 + 2·2 + 1
    assert_eq!(skeleton_model(&a2).unwrap().strata.len(), 9);
}

#[test]
fn euler_characteristics() {
    for r in 1..=4 {
        assert_eq!(euler_characteristic_c(&skeleton_model(&catalog::necklace(r)).unwrap()), -(r as i64));
    }
    assert_eq!(euler_characteristic_c(&skeleton_model(&catalog::three_a1()).unwrap()), 1);
    let a2 = Fanifold::from_fan(&catalog::affine_space(2)).unwrap();
    assert_eq!(euler_characteristic_c(&skeleton_model(&a2).unwrap()), 1);
}

#[test]
fn handle_plans() {
    let sq = handle_plan(&catalog::square()).unwrap();
    assert_eq!(sq.counts, vec![4, 4, 1]);
    assert!(sq.handles.windows(2).all(|w| w[0].index <= w[1].index));
    let a2 = handle_plan(&Fanifold::from_fan(&catalog::affine_space(2)).unwrap()).unwrap();
    assert_eq!(a2.handles.len(), 4);
    assert_eq!(a2.handles.iter().filter(|h| h.trivial).count(), 3);
    assert!(!a2.handles[0].trivial && a2.handles[0].attaching_strata.is_empty());
    let t = handle_plan(&catalog::three_a1()).unwrap();
    assert_eq!(t.counts, vec![0, 3, 1]);
    assert!(t.handles[..3].iter().all(|h| h.attaching_strata.is_empty()));
    assert_eq!(t.handles[3].attaching_tori, vec![1, 1, 1]);
}

#[test]
fn refinement_checks() {
    let q = catalog::quadric_cone(false);
    assert!(skeleton_refinement_check(&q, &q).unwrap());
    let fine = stellar_subdivision(&q, &[0, 1]).unwrap();
    assert!(skeleton_refinement_check(&q, &fine).unwrap());
    assert!(skeleton_refinement_check(&fine, &q).is_err());
}

#[test]
fn canonical_sections() {
    assert!(canonical_section_check(&skeleton_model(&catalog::square()).unwrap()));
    let a2 = Fanifold::from_fan(&catalog::projective_space(2)).unwrap();
    assert!(canonical_section_check(&skeleton_model(&a2).unwrap()));
}

#[test]
fn meshes() {
    let t = export_mesh(&skeleton_model(&catalog::three_a1()).unwrap(), 8).unwrap();
    assert_eq!(groups(&t, "cylinder"), 3);
    assert_eq!(groups(&t, "triangle"), 1);
    assert!(t.contains("g boundary"));
    let a1 = export_mesh(&skeleton_model(&Fanifold::from_fan(&catalog::affine_space(1)).unwrap()).unwrap(), 6).unwrap();
    assert_eq!(groups(&a1, "circle"), 1);
    assert_eq!(groups(&a1, "segment"), 1);
    let sq = export_mesh(&skeleton_model(&catalog::square()).unwrap(), 4).unwrap();
    assert_eq!(sq.lines().filter(|l| l.starts_with("g ")).count(), 9);
    assert!(!sq.contains("-0.000000"));
    assert_eq!(sq, export_mesh(&skeleton_model(&catalog::square()).unwrap(), 4).unwrap());
    assert!(export_mesh(&skeleton_model(&catalog::square()).unwrap(), 2).is_err());
    let a3 = Fanifold::from_fan(&catalog::affine_space(3)).unwrap();
    assert!(export_mesh(&skeleton_model(&a3).unwrap(), 4).is_err());
}
