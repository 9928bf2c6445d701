//! Named example fans and fanifolds.

use crate::fan::Fan;
use itertools::Itertools;
use crate::fanifold::{Arrow, Fanifold, Stratum};
use crate::lattice::{IntMatrix, LatticeMap, Vector};

fn e(i: usize) -> Vector {
    unit(2, i)
}

fn unit(n: usize, i: usize) -> Vector {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Subsets of `0..k` of size at most `max`, by size then lexicographically.
fn subsets(k: usize, max: usize) -> Vec<Vec<usize>> {
    (0..=max.min(k)).flat_map(|size| (0..k).combinations(size)).collect()
}

/// Faces of the positive orthant in rank `n`, rays `e₁, …, eₙ` in order.
pub fn affine_space(n: usize) -> Fan {
    Fan::new(n, (0..n).map(|i| unit(n, i)).collect(), subsets(n, n)).expect("orthant faces")
}

/// Complete fan with rays `e₁, …, eₙ, −Σeᵢ`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<Vector> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(vec![-1; n]);
    Fan::new(n, rays, subsets(n + 1, n)).expect("projective fan")
}

/// The fan `{0}` in rank `n`.
pub fn trivial_fan(n: usize) -> Fan {
    Fan::trivial(n)
}

/// Faces of the cone on `(−1,1), (1,1)`; with `stacky` the generators are
/// fixed at those vectors (already primitive, so the data is the same as the
/// coarse fan but flagged stacky).
pub fn quadric_cone(stacky: bool) -> Fan {
    let gens = vec![vec![-1, 1], vec![1, 1]];
    if stacky {
        Fan::with_stacky(2, gens, vec![vec![], vec![0], vec![1], vec![0, 1]]).expect("stacky quadric")
    } else {
        Fan::new(2, gens, vec![vec![], vec![0], vec![1], vec![0, 1]]).expect("quadric")
    }
}

/// Arrow leaving through the cone spanned by the given rays of the source fan.
fn arrow(strata: &[Stratum], from: usize, to: usize, rays: &[Vector], q: &[Vector]) -> Arrow {
    let (g, f) = (&strata[from], &strata[to]);
    let idx: Vec<usize> = rays.iter().map(|r| g.fan.rays().iter().position(|x| x == r).expect("ray")).collect();
    let matrix = IntMatrix::from_rows(q, g.codim()).expect("matrix");
    Arrow {
        from,
        to,
        cone: g.fan.find_by_rays(&idx).expect("cone in fan"),
        quotient: LatticeMap::new(g.lattice(), f.lattice(), matrix).expect("shape"),
    }
}

/// Closed disk whose boundary is one point `p` and one edge `I`; the edge
/// leaves `p` along both rays of its quadrant fan.
pub fn unigon() -> Fanifold {
    let strata = vec![
        Stratum::new("p", 0, affine_space(2)),
        Stratum::new("I", 1, affine_space(1)),
        Stratum::new("D", 2, trivial_fan(0)),
    ];
    let arrows = vec![
        arrow(&strata, 0, 1, &[e(0)], &[vec![0, 1]]),
        arrow(&strata, 0, 1, &[e(1)], &[vec![1, 0]]),
        arrow(&strata, 0, 2, &[e(0), e(1)], &[]),
        arrow(&strata, 1, 2, &[vec![1]], &[]),
    ];
    Fanifold::new(2, strata, arrows).expect("unigon").with_compact(true)
}

/// Circle with `r` marked points carrying the fan of ℙ¹; edge `e_i` runs
/// from `v_i` to `v_{i+1}`.
pub fn necklace(r: usize) -> Fanifold {
    assert!(r >= 1);
    let mut strata: Vec<Stratum> = (0..r).map(|i| Stratum::new(format!("v{i}"), 0, projective_space(1))).collect();
    strata.extend((0..r).map(|i| Stratum::new(format!("e{i}"), 1, trivial_fan(0))));
    let mut arrows = vec![];
    for i in 0..r {
        arrows.push(arrow(&strata, i, r + i, &[vec![1]], &[]));
        arrows.push(arrow(&strata, (i + 1) % r, r + i, &[vec![-1]], &[]));
    }
    Fanifold::new(1, strata, arrows).expect("necklace").with_compact(true)
}

/// The square `[0,1]²`: corners with the fan of 𝔸² (first ray along the
/// horizontal edge), edges with the fan of 𝔸¹.
pub fn square() -> Fanifold {
    let mut strata: Vec<Stratum> = ["v00", "v10", "v01", "v11"].iter().map(|id| Stratum::new(*id, 0, affine_space(2))).collect();
    strata.extend(["bottom", "top", "left", "right"].iter().map(|id| Stratum::new(*id, 1, affine_space(1))));
    strata.push(Stratum::new("face", 2, trivial_fan(0)));
    let mut arrows = vec![];
    // (corner, horizontal edge, vertical edge)
    for (v, h, w) in [(0, 4, 6), (1, 4, 7), (2, 5, 6), (3, 5, 7)] {
        arrows.push(arrow(&strata, v, h, &[e(0)], &[vec![0, 1]]));
        arrows.push(arrow(&strata, v, w, &[e(1)], &[vec![1, 0]]));
        arrows.push(arrow(&strata, v, 8, &[e(0), e(1)], &[]));
    }
    for edge in 4..8 {
        arrows.push(arrow(&strata, edge, 8, &[vec![1]], &[]));
    }
    Fanifold::new(2, strata, arrows).expect("square").with_compact(true)
}

/// `ℝ × ℝ₊`: a boundary line with the fan of 𝔸¹ and the open half plane,
/// plus the ideal boundary (two ends of the line and the arc between them).
pub fn halfplane() -> Fanifold {
    let strata = vec![
        Stratum::new("B", 1, affine_space(1)),
        Stratum::new("H", 2, trivial_fan(0)),
        Stratum::boundary("end+", 1, affine_space(1)),
        Stratum::boundary("end-", 1, affine_space(1)),
        Stratum::boundary("arc", 2, trivial_fan(0)),
    ];
    let ray = || vec![vec![1]];
    let arrows = vec![arrow(&strata, 0, 1, &ray(), &[]), arrow(&strata, 2, 4, &ray(), &[]), arrow(&strata, 3, 4, &ray(), &[])];
    Fanifold::new(2, strata, arrows).expect("halfplane")
}

/// Fan of 𝔸³ without its rays.
pub fn affine_space_without_rays(n: usize) -> Fan {
    let f = affine_space(n);
    let keep: Vec<usize> = (0..f.len()).filter(|&i| f.cone(i).dim() != 1).collect();
    f.restrict(&keep)
}

/// Triangle without its vertices: edges carry the fan of 𝔸¹.
pub fn three_a1() -> Fanifold {
    Fanifold::sphere_section(&affine_space_without_rays(3)).expect("3A1")
}
