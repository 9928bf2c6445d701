//! Isomorphism search for decorated and undecorated exit diagrams.

use super::{Fanifold, FanifoldError, Result};
use crate::fan::Fan;
use crate::lattice::{self, IntMatrix};
use itertools::Itertools;

/// Stratum bijection with a lattice isomorphism `M_F → M_{φ(F)}` per stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub strata: Vec<usize>,
    pub maps: Vec<IntMatrix>,
}

fn multiplicities(phi: &Fanifold) -> Vec<Vec<usize>> {
    let n = phi.strata().len();
    let mut m = vec![vec![0; n]; n];
    for a in phi.arrows() {
        m[a.from][a.to] += 1;
    }
    m
}

fn signature(phi: &Fanifold, i: usize) -> (usize, bool, usize, usize, usize) {
    let s = phi.stratum(i);
    (s.dim, s.interior, s.codim(), phi.arrows_from(i).len(), phi.arrows_into(i).len())
}

/// Bijection of strata preserving dimension, interiority and arrow
/// multiplicities.
pub fn isomorphic_shape(a: &Fanifold, b: &Fanifold) -> Option<Vec<usize>> {
    let n = a.strata().len();
    if n != b.strata().len() || a.arrows().len() != b.arrows().len() {
        return None;
    }
    let (ma, mb) = (multiplicities(a), multiplicities(b));
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(i: usize, a: &Fanifold, b: &Fanifold, ma: &[Vec<usize>], mb: &[Vec<usize>], assign: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == assign.len() {
            return true;
        }
        for j in 0..assign.len() {
            if used[j] || signature(a, i).0 != signature(b, j).0 || signature(a, i).1 != signature(b, j).1 {
                continue;
            }
            let (sa, sb) = (signature(a, i), signature(b, j));
            if (sa.3, sa.4) != (sb.3, sb.4) {
                continue;
            }
            let ok = (0..i).all(|k| ma[i][k] == mb[j][assign[k]] && ma[k][i] == mb[assign[k]][j]) && ma[i][i] == mb[j][j];
            if !ok {
                continue;
            }
            assign[i] = j;
            used[j] = true;
            if go(i + 1, a, b, ma, mb, assign, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    go(0, a, b, &ma, &mb, &mut assign, &mut used).then_some(assign)
}

fn maps_fan(g: &IntMatrix, from: &Fan, to: &Fan) -> bool {
    from.len() == to.len()
        && from.cones().iter().all(|c| c.image(g).map(|img| to.find_cone(&img).is_some() && img.dim() == c.dim()).unwrap_or(false))
}

/// Unimodular maps carrying `from` onto `to`. Determined by a ray matching
/// when the rays span; otherwise drawn from matrices with entries in
/// `{-1, 0, 1}`.
fn fan_isomorphisms(from: &Fan, to: &Fan) -> Result<Vec<IntMatrix>> {
    let k = from.rank();
    if k != to.rank() || from.len() != to.len() || from.rays().len() != to.rays().len() {
        return Ok(vec![]);
    }
    if k == 0 {
        return Ok(vec![IntMatrix::zeros(0, 0)]);
    }
    let mut out: Vec<IntMatrix> = vec![];
    if lattice::rank(from.rays(), k)? == k {
        // pick k independent rays, try every injective assignment of them
        let mut basis = vec![];
        for (i, r) in from.rays().iter().enumerate() {
            let mut trial: Vec<_> = basis.iter().map(|&j: &usize| from.rays()[j].clone()).collect();
            trial.push(r.clone());
            if lattice::rank(&trial, k)? == trial.len() {
                basis.push(i);
            }
        }
        let src = IntMatrix::from_cols(k, &basis.iter().map(|&i| from.rays()[i].clone()).collect::<Vec<_>>())?;
        let det = src.determinant()?;
        let adj = adjugate(&src)?;
        for targets in (0..to.rays().len()).permutations(k) {
            let dst = IntMatrix::from_cols(k, &targets.iter().map(|&j| to.rays()[j].clone()).collect::<Vec<_>>())?;
            // g = dst · src⁻¹ = dst · adj / det
            let num = dst.mul(&adj)?;
            if (0..k).any(|i| (0..k).any(|j| num.get(i, j) % det != 0)) {
                continue;
            }
            let mut g = IntMatrix::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    g.set(i, j, num.get(i, j) / det);
                }
            }
            if g.is_unimodular() && maps_fan(&g, from, to) && !out.contains(&g) {
                out.push(g);
            }
        }
    } else {
        if k > 3 {
            return Err(FanifoldError::Structure("isomorphism search for non-spanning fans is limited to rank 3".into()));
        }
        for entries in (0..k * k).map(|_| -1i64..=1).multi_cartesian_product() {
            let g = IntMatrix::from_rows(&entries.chunks(k).map(|c| c.to_vec()).collect::<Vec<_>>(), k)?;
            if g.is_unimodular() && maps_fan(&g, from, to) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

fn adjugate(m: &IntMatrix) -> Result<IntMatrix> {
    let k = m.rows();
    let mut adj = IntMatrix::zeros(k, k);
    if k == 1 {
        adj.set(0, 0, 1);
        return Ok(adj);
    }
    for i in 0..k {
        for j in 0..k {
            let rows: Vec<Vec<i64>> = (0..k).filter(|&r| r != j).map(|r| (0..k).filter(|&c| c != i).map(|c| m.get(r, c)).collect()).collect();
            let minor = IntMatrix::from_rows(&rows, k - 1)?.determinant()?;
            adj.set(i, j, if (i + j) % 2 == 0 { minor } else { -minor });
        }
    }
    Ok(adj)
}

/// Decorated isomorphism: strata, fans and arrows (cones and quotient
/// maps) correspond under per-stratum lattice isomorphisms.
pub fn isomorphic(a: &Fanifold, b: &Fanifold) -> Result<Option<Isomorphism>> {
    let n = a.strata().len();
    if n != b.strata().len() || a.arrows().len() != b.arrows().len() || a.dimension() != b.dimension() {
        return Ok(None);
    }
    let mut candidates: Vec<Vec<(usize, Vec<IntMatrix>)>> = vec![];
    for i in 0..n {
        let mut row = vec![];
        for j in 0..n {
            if signature(a, i) != signature(b, j) || a.stratum(i).chi_c != b.stratum(j).chi_c {
                continue;
            }
            let maps = fan_isomorphisms(&a.stratum(i).fan, &b.stratum(j).fan)?;
            if !maps.is_empty() {
                row.push((j, maps));
            }
        }
        if row.is_empty() {
            return Ok(None);
        }
        candidates.push(row);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| candidates[i].len());
    let mut st = Search { a, b, candidates: &candidates, order: &order, assign: vec![None; n], used: vec![false; n] };
    Ok(st.go(0).then(|| Isomorphism {
        strata: st.assign.iter().map(|x| x.as_ref().expect("assigned").0).collect(),
        maps: st.assign.into_iter().map(|x| x.expect("assigned").1).collect(),
    }))
}

struct Search<'a> {
    a: &'a Fanifold,
    b: &'a Fanifold,
    candidates: &'a [Vec<(usize, Vec<IntMatrix>)>],
    order: &'a [usize],
    assign: Vec<Option<(usize, IntMatrix)>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn go(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let i = self.order[depth];
        for (j, maps) in &self.candidates[i] {
            if self.used[*j] {
                continue;
            }
            for g in maps {
                self.assign[i] = Some((*j, g.clone()));
                if self.consistent(i) {
                    self.used[*j] = true;
                    if self.go(depth + 1) {
                        return true;
                    }
                    self.used[*j] = false;
                }
                self.assign[i] = None;
            }
        }
        false
    }

    /// Arrows between `i` and already assigned strata have matching images.
    fn consistent(&self, i: usize) -> bool {
        for a in self.a.arrows() {
            if a.from != i && a.to != i {
                continue;
            }
            let (Some((fg, gg)), Some((ff, gf))) = (&self.assign[a.from], &self.assign[a.to]) else { continue };
            let sigma = self.a.stratum(a.from).fan.cone(a.cone);
            let Ok(img) = sigma.image(gg) else { return false };
            let Ok(lhs) = gf.mul(&a.quotient.matrix) else { return false };
            let found = self.b.arrows_between(*fg, *ff).into_iter().any(|k| {
                let b = self.b.arrow(k);
                self.b.stratum(*fg).fan.cone(b.cone).same_support(&img) && b.quotient.matrix.mul(gg).as_ref() == Ok(&lhs)
            });
            if !found {
                return false;
            }
        }
        true
    }
}
