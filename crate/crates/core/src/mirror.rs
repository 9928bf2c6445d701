//! Labeled B-side and A-side diagrams over the same exit diagram, and the
//! restriction pairs attached to closed sets of strata.

use crate::bmodel::{u_functor, OpenLocus};
use crate::fanifold::{ids_of, Fanifold, FanifoldError, Result};
use crate::lattice::Vector;
use crate::skeleton::{fltz_pieces, handle_plan};
use serde::Serialize;
use std::collections::BTreeSet;

/// Fixed annotation for the A side; signs and opposite categories are not
/// acted upon.
pub const A_SIDE_CONVENTION: &str = "A-side categories taken with the opposite orientation of the symplectic form";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumEntry {
    pub id: String,
    pub b_label: String,
    pub a_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrowEntry {
    pub from: String,
    pub to: String,
    pub cone: Vec<Vector>,
    pub b_label: String,
    pub a_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MirrorDictionary {
    pub strata: Vec<StratumEntry>,
    pub arrows: Vec<ArrowEntry>,
    /// B-node `i` corresponds to A-node `certificate[i]`.
    pub certificate: Vec<usize>,
    pub convention: String,
}

/// Node decoration `(rank, count)` and arrows `(from, to, decoration)` of one
/// labeled side.
struct Side {
    nodes: Vec<(usize, usize)>,
    arrows: Vec<(usize, usize, usize)>,
}

/// Backtracking search for a node bijection carrying decorations and the
/// arrow multiset of `a` onto those of `b`.
fn match_sides(a: &Side, b: &Side) -> Option<Vec<usize>> {
    let n = a.nodes.len();
    if n != b.nodes.len() || a.arrows.len() != b.arrows.len() {
        return None;
    }
    let count = |s: &Side, x: usize, y: usize, d: usize| s.arrows.iter().filter(|e| **e == (x, y, d)).count();
    let decorations: BTreeSet<usize> = a.arrows.iter().map(|e| e.2).chain(b.arrows.iter().map(|e| e.2)).collect();
    fn go(
        i: usize,
        a: &Side,
        b: &Side,
        decorations: &BTreeSet<usize>,
        count: &dyn Fn(&Side, usize, usize, usize) -> usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == a.nodes.len() {
            return true;
        }
        for j in 0..b.nodes.len() {
            if used[j] || a.nodes[i] != b.nodes[j] {
                continue;
            }
            assign.push(j);
            let ok = (0..=i).all(|k| {
                decorations.iter().all(|&d| {
                    count(a, i, k, d) == count(b, j, assign[k], d) && count(a, k, i, d) == count(b, assign[k], j, d)
                })
            });
            if ok {
                used[j] = true;
                if go(i + 1, a, b, decorations, count, assign, used) {
                    return true;
                }
                used[j] = false;
            }
            assign.pop();
        }
        false
    }
    let mut assign = vec![];
    let mut used = vec![false; n];
    go(0, a, b, &decorations, &count, &mut assign, &mut used).then_some(assign)
}

pub fn mirror_dictionary(phi: &Fanifold) -> Result<MirrorDictionary> {
    let report = phi.validate();
    if !report.valid {
        return Err(FanifoldError::Invalid(report.errors.first().map(|v| v.detail.clone()).unwrap_or_default()));
    }
    let mut strata = vec![];
    let mut b_side = Side { nodes: vec![], arrows: vec![] };
    let mut a_side = Side { nodes: vec![], arrows: vec![] };
    for s in phi.strata() {
        let r = s.codim();
        let orbits = s.fan.len();
        let pieces = fltz_pieces(&s.fan)?;
        b_side.nodes.push((r, orbits));
        a_side.nodes.push((r, pieces.len()));
        strata.push(StratumEntry {
            id: s.id.clone(),
            b_label: format!("T(Σ_{}): toric variety of rank {r} with {orbits} torus orbits", s.id),
            a_label: format!("𝕃(Σ_{}) ⊂ T*T^{r}: {} FLTZ pieces", s.id, pieces.len()),
        });
    }
    let mut arrows = vec![];
    for a in phi.arrows() {
        let (g, f) = (phi.stratum(a.from), phi.stratum(a.to));
        let sigma = g.fan.cone(a.cone);
        b_side.arrows.push((a.from, a.to, sigma.dim()));
        a_side.arrows.push((a.from, a.to, g.codim() - sigma.dim()));
        arrows.push(ArrowEntry {
            from: g.id.clone(),
            to: f.id.clone(),
            cone: sigma.rays().to_vec(),
            b_label: format!("orbit closure T(Σ_{}) → T(Σ_{}) of a {}-cone: pushforward and pullback", f.id, g.id, sigma.dim()),
            a_label: format!("microlocalization along σ^⊥ ≅ T^{}", g.codim() - sigma.dim()),
        });
    }
    // the A side records σ^⊥ ranks; translate to cone dimensions before matching
    let a_side = Side {
        nodes: a_side.nodes,
        arrows: a_side.arrows.iter().map(|&(x, y, t)| (x, y, phi.stratum(x).codim() - t)).collect(),
    };
    let certificate = match_sides(&b_side, &a_side)
        .ok_or_else(|| FanifoldError::Structure("labeled diagrams do not match".into()))?;
    Ok(MirrorDictionary { strata, arrows, certificate, convention: A_SIDE_CONVENTION.into() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionPair {
    pub closed: Vec<String>,
    pub b_side: OpenLocus,
    pub b_sequence: String,
    pub kept_handles: Vec<String>,
    pub removed_handles: Vec<String>,
    pub a_sequence: String,
    /// Removed handles equal the handle plan of `Φ` minus that of `Z`.
    pub verified: bool,
}

pub fn restriction_pairs(phi: &Fanifold, z: &BTreeSet<usize>) -> Result<RestrictionPair> {
    let b_side = u_functor(phi, z)?;
    let outside: BTreeSet<usize> = (0..phi.strata().len()).filter(|i| !z.contains(i)).collect();
    let restricted = phi.delete_strata(&ids_of(phi, &outside))?;
    let all: Vec<String> = handle_plan(phi)?.handles.into_iter().map(|h| h.stratum).collect();
    let kept: Vec<String> = handle_plan(&restricted)?.handles.into_iter().map(|h| h.stratum).collect();
    let removed: Vec<String> = all.iter().filter(|h| !kept.contains(h)).cloned().collect();
    let expected: BTreeSet<&String> = outside.iter().filter(|&&i| phi.stratum(i).interior).map(|&i| &phi.stratum(i).id).collect();
    let verified = removed.iter().collect::<BTreeSet<_>>() == expected;
    Ok(RestrictionPair {
        closed: b_side.closed.clone(),
        b_side,
        b_sequence: "Coh(T(Φ∖Z)) → Coh(T(Φ)) → Coh(U(Z)) → 0".into(),
        kept_handles: kept,
        removed_handles: removed,
        a_sequence: "⟨cocores of removed handles⟩ → Fuk(W(Φ)) → Fuk(W(Z)) → 0".into(),
        verified,
    })
}
