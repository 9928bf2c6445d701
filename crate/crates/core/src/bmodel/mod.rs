//! The glued toric space of a fanifold, through its affine charts.
//!
//! A chart is a pair `(G, τ)` with ring `k[τ^∨ ∩ M_G^∨]`. Charts are joined
//! by face localizations inside one stratum and by orbit-closure co-maps
//! along the arrows of the fanifold. Rings of global functions are computed
//! as limits over this diagram, truncated to a coordinate box.

mod census;

pub use census::{limit_census, subalgebra_check, Poly, Relation, RelationCheck, Section, SectionCensus, SubalgebraReport};

use crate::fan::{Cone, Fan};
use crate::fanifold::{Fanifold, FanifoldError, Result};
use crate::lattice::{self, IntMatrix, Vector};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartObject {
    pub stratum: String,
    pub cone: Cone,
}

impl ChartObject {
    pub fn rank(&self) -> usize {
        self.cone.rank()
    }

    pub fn label(&self) -> String {
        format!("{}:{:?}", self.stratum, self.cone.rays())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartMap {
    /// `τ' ⊆ τ`: every monomial maps to itself.
    Face,
    /// Restriction to the orbit closure of `σ`. A monomial `u ⊥ σ` maps to the
    /// unique `w` with `qᵀw = u`, computed as `sᵀu` for a section `s` of `q`;
    /// other monomials map to zero.
    Orbit { sigma: Vec<Vector>, section: IntMatrix },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartArrow {
    pub from: usize,
    pub to: usize,
    pub map: ChartMap,
}

impl ChartArrow {
    /// Image of a monomial, or `None` when it maps to zero.
    pub fn apply(&self, u: &[i64]) -> Option<Vector> {
        match &self.map {
            ChartMap::Face => Some(u.to_vec()),
            ChartMap::Orbit { sigma, section } => {
                if sigma.iter().any(|g| lattice::dot(u, g).map(|x| x != 0).unwrap_or(true)) {
                    return None;
                }
                Some((0..section.cols()).map(|j| (0..u.len()).map(|i| section.get(i, j) * u[i]).sum()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ToricDiagram {
    pub objects: Vec<ChartObject>,
    pub arrows: Vec<ChartArrow>,
}

/// Right inverse of a surjective integer matrix.
fn section_of(q: &IntMatrix) -> Result<IntMatrix> {
    let k = q.rows();
    if k == 0 {
        return Ok(IntMatrix::zeros(q.cols(), 0));
    }
    let snf = lattice::smith_normal_form(q)?;
    if snf.invariant_factors().len() != k || snf.invariant_factors().iter().any(|&d| d != 1) {
        return Err(FanifoldError::Invalid("quotient map is not surjective".into()));
    }
    Ok(snf.v_inv.col_block(0, k).mul(&snf.u_inv)?)
}

impl ToricDiagram {
    /// Charts over every interior stratum and every cone of its fan.
    pub fn full(phi: &Fanifold) -> Result<ToricDiagram> {
        let mut d = ToricDiagram::default();
        let mut first = vec![usize::MAX; phi.strata().len()];
        for i in phi.interior_strata() {
            let s = phi.stratum(i);
            first[i] = d.objects.len();
            for c in s.fan.cones() {
                d.objects.push(ChartObject { stratum: s.id.clone(), cone: c.clone() });
            }
            let n = s.fan.len();
            for a in 0..n {
                for b in 0..n {
                    if a != b && s.fan.cone(b).is_face_of(s.fan.cone(a))? {
                        d.arrows.push(ChartArrow { from: first[i] + a, to: first[i] + b, map: ChartMap::Face });
                    }
                }
            }
        }
        for arrow in phi.arrows() {
            if first[arrow.from] == usize::MAX || first[arrow.to] == usize::MAX {
                continue;
            }
            let (g, f) = (&phi.stratum(arrow.from).fan, &phi.stratum(arrow.to).fan);
            let sigma = g.cone(arrow.cone);
            let section = section_of(&arrow.quotient.matrix)?;
            for (t, tau) in g.cones().iter().enumerate() {
                if !sigma.is_face_of(tau)? {
                    continue;
                }
                let image = tau.image(&arrow.quotient.matrix)?;
                let target = f.find_cone(&image).ok_or_else(|| {
                    FanifoldError::Invalid(format!("image of a cone of {} is not in the fan of {}", phi.stratum(arrow.from).id, phi.stratum(arrow.to).id))
                })?;
                d.arrows.push(ChartArrow {
                    from: first[arrow.from] + t,
                    to: first[arrow.to] + target,
                    map: ChartMap::Orbit { sigma: sigma.generators().to_vec(), section: section.clone() },
                });
            }
        }
        Ok(d)
    }

    /// Charts of the single toric variety of `fan`.
    pub fn of_fan(fan: &Fan) -> Result<ToricDiagram> {
        ToricDiagram::full(&Fanifold::new(fan.rank(), vec![crate::fanifold::Stratum::new("o", 0, fan.clone())], vec![])?)
    }

    /// Both diagrams side by side.
    pub fn disjoint_union(&self, other: &ToricDiagram) -> ToricDiagram {
        let shift = self.objects.len();
        let mut d = self.clone();
        d.objects.extend(other.objects.iter().cloned());
        d.arrows.extend(other.arrows.iter().map(|a| ChartArrow { from: a.from + shift, to: a.to + shift, map: a.map.clone() }));
        d
    }

    pub fn find(&self, stratum: &str, rays: &[Vector]) -> Option<usize> {
        let mut want = rays.to_vec();
        want.sort();
        self.objects.iter().position(|o| o.stratum == stratum && o.cone.rays() == want.as_slice())
    }
}

/// Charts of the closure of `F`, unrolled so that parallel arrows give
/// separate copies of their sources.
pub fn chart_diagram(phi: &Fanifold, f: usize) -> Result<ToricDiagram> {
    let (closure, _) = phi.unrolled_closure(f)?;
    ToricDiagram::full(&closure)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub stratum: String,
    pub rays: Vec<Vector>,
    pub cones: Vec<Vec<usize>>,
    pub dimension: usize,
    pub complete: bool,
}

/// One irreducible component per minimal stratum.
pub fn components(phi: &Fanifold) -> Vec<Component> {
    phi.minimal_strata()
        .into_iter()
        .filter(|&i| phi.stratum(i).interior)
        .map(|i| {
            let s = phi.stratum(i);
            Component {
                stratum: s.id.clone(),
                rays: s.fan.rays().to_vec(),
                cones: (0..s.fan.len()).map(|c| s.fan.cone_rays(c).to_vec()).collect(),
                dimension: s.codim(),
                complete: s.fan.properties().complete,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocusPiece {
    pub stratum: String,
    pub torus_rank: usize,
    /// Cones of the stratum's fan whose orbits lie in the removed part.
    pub removed_cones: Vec<Vec<Vector>>,
}

/// `T(Φ) ∖ T(Φ ∖ Z)`: the torus orbits of the strata in `Z`, described inside
/// the full chart diagram with the charts over `Φ ∖ Z` marked as removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenLocus {
    pub closed: Vec<String>,
    pub removed: Vec<String>,
    pub pieces: Vec<LocusPiece>,
    pub marked_charts: Vec<String>,
    pub charts: usize,
}

impl OpenLocus {
    pub fn orbits(&self) -> BTreeSet<String> {
        self.closed.iter().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.closed.is_empty()
    }
}

pub fn u_functor(phi: &Fanifold, z: &BTreeSet<usize>) -> Result<OpenLocus> {
    if !phi.is_down_closed(z) {
        return Err(FanifoldError::NotClosed(format!("{:?} is not down-closed", crate::fanifold::ids_of(phi, z))));
    }
    let diagram = ToricDiagram::full(phi)?;
    let removed: BTreeSet<usize> = (0..phi.strata().len()).filter(|i| !z.contains(i) && phi.stratum(*i).interior).collect();
    let mut pieces = vec![];
    for &i in z {
        let s = phi.stratum(i);
        if !s.interior {
            continue;
        }
        let removed_cones = phi
            .arrows_from(i)
            .into_iter()
            .filter(|&a| removed.contains(&phi.arrow(a).to))
            .map(|a| s.fan.cone(phi.arrow(a).cone).rays().to_vec())
            .collect();
        pieces.push(LocusPiece { stratum: s.id.clone(), torus_rank: s.codim(), removed_cones });
    }
    let removed_ids: BTreeSet<&str> = removed.iter().map(|&i| phi.stratum(i).id.as_str()).collect();
    Ok(OpenLocus {
        closed: z.iter().filter(|&&i| phi.stratum(i).interior).map(|&i| phi.stratum(i).id.clone()).collect(),
        removed: removed.iter().map(|&i| phi.stratum(i).id.clone()).collect(),
        pieces,
        marked_charts: diagram.objects.iter().filter(|o| removed_ids.contains(o.stratum.as_str())).map(|o| o.label()).collect(),
        charts: diagram.objects.len(),
    })
}
