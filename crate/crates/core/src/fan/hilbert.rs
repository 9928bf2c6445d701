use super::{box_points, Cone, Result};
use crate::lattice::{self, IntMatrix, Lattice, Vector};
use itertools::Itertools;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualMonoid {
    /// Generators of `σ^∨ ∩ M^∨`: the Hilbert basis of the pointed part
    /// lifted to `M^∨`, then `±` a basis of `σ^⊥`.
    pub generators: Vec<Vector>,
    /// Dual lattice points of `σ^∨` with every coordinate in `[-D, D]`.
    pub box_points: Vec<Vector>,
}

/// Hilbert basis of a pointed full-dimensional cone, by pulling
/// triangulation, parallelepiped enumeration, and removal of reducible
/// candidates.
pub fn hilbert_basis(cone: &Cone) -> Result<Vec<Vector>> {
    let mut candidates: Vec<Vector> = vec![];
    for simplex in triangulate(cone)? {
        for r in simplex.rays() {
            if !candidates.contains(r) {
                candidates.push(r.clone());
            }
        }
        for (p, _) in box_points(&simplex)? {
            if !candidates.contains(&p) {
                candidates.push(p);
            }
        }
    }
    let mut basis = vec![];
    for h in &candidates {
        let mut reducible = false;
        for g in &candidates {
            if g == h {
                continue;
            }
            let diff: Vector = h.iter().zip(g).map(|(a, b)| a - b).collect();
            if cone.contains(&diff)? {
                reducible = true;
                break;
            }
        }
        if !reducible {
            basis.push(h.clone());
        }
    }
    basis.sort();
    Ok(basis)
}

/// Simplicial cones covering `cone`, each a cone over the first ray and a
/// simplex of a facet avoiding it.
fn triangulate(cone: &Cone) -> Result<Vec<Cone>> {
    if cone.is_simplicial() {
        return Ok(vec![cone.clone()]);
    }
    let apex = cone.rays()[0].clone();
    let mut out = vec![];
    for f in cone.facets() {
        if f.tight.contains(&0) {
            continue;
        }
        let facet = Cone::new(cone.rank(), &f.tight.iter().map(|&i| cone.rays()[i].clone()).collect::<Vec<_>>())?;
        for s in triangulate(&facet)? {
            let mut gens = s.rays().to_vec();
            gens.push(apex.clone());
            out.push(Cone::new(cone.rank(), &gens)?);
        }
    }
    Ok(out)
}

pub fn dual_cone_monoid(sigma: &Cone, degree: i64) -> Result<DualMonoid> {
    let n = sigma.rank();
    let d = sigma.dim();
    let gens = sigma.generators();
    let g = IntMatrix::from_cols(n, gens)?;
    let snf = lattice::smith_normal_form(&g)?;
    let mut generators = vec![];
    if d > 0 {
        // σ in coordinates of the saturated span: G = B·Y
        let diag = IntMatrix::diagonal(d, gens.len(), &snf.invariant_factors());
        let y = diag.mul(&snf.v)?;
        let local = Cone::new(d, &(0..y.cols()).map(|j| y.col(j)).collect::<Vec<_>>())?;
        let dual = Cone::new(d, &local.facets().iter().map(|f| f.normal.clone()).collect::<Vec<_>>())?;
        for w in hilbert_basis(&dual)? {
            // rows of U⁻¹ pair with B as the identity
            let mut u = vec![0i64; n];
            for (j, &wj) in w.iter().enumerate() {
                for (k, x) in snf.u_inv.row(j).into_iter().enumerate() {
                    u[k] += wj * x;
                }
            }
            generators.push(u);
        }
    }
    for b in lattice::annihilator(Lattice::new(n), gens)?.basis {
        generators.push(b.iter().map(|x| -x).collect());
        generators.push(b);
    }
    Ok(DualMonoid { generators, box_points: dual_box_points(sigma, degree) })
}

/// Points `u` of `σ^∨ ∩ M^∨` with every coordinate in `[-D, D]`, in
/// lexicographic order.
pub fn dual_box_points(sigma: &Cone, degree: i64) -> Vec<Vector> {
    let n = sigma.rank();
    if n == 0 {
        return vec![vec![]];
    }
    (0..n)
        .map(|_| -degree..=degree)
        .multi_cartesian_product()
        .filter(|u| sigma.generators().iter().all(|g| lattice::dot(u, g).map(|v| v >= 0).unwrap_or(false)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_quadrant() {
        let c = Cone::new(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let m = dual_cone_monoid(&c, 1).unwrap();
        let mut g = m.generators.clone();
        g.sort();
        assert_eq!(g, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(m.box_points.len(), 4);
    }

    #[test]
    fn quadric_has_three_generators() {
        let c = Cone::new(2, &[vec![-1, 1], vec![1, 1]]).unwrap();
        let mut g = dual_cone_monoid(&c, 2).unwrap().generators;
        g.sort();
        assert_eq!(g, vec![vec![-1, 1], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn zero_cone_in_rank_one() {
        let m = dual_cone_monoid(&Cone::zero(1), 2).unwrap();
        let mut g = m.generators;
        g.sort();
        assert_eq!(g, vec![vec![-1], vec![1]]);
        assert_eq!(m.box_points.len(), 5);
    }

    #[test]
    fn ray_in_plane_has_lineality() {
        let c = Cone::new(2, &[vec![1, 1]]).unwrap();
        let g = dual_cone_monoid(&c, 1).unwrap().generators;
        assert_eq!(g.len(), 3);
        for u in &g {
            assert!(lattice::dot(u, &[1, 1]).unwrap() >= 0);
        }
    }

    #[test]
    fn hilbert_basis_of_non_simplicial_cone() {
        let c = Cone::new(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap();
        let h = hilbert_basis(&c).unwrap();
        assert_eq!(h.len(), 5);
        assert!(h.contains(&vec![0, 0, 1]));
    }
}
