//! Combinatorial skeleta: FLTZ pieces of a fan, the glued stratification
//! over a fanifold, Euler characteristics and handle plans.

mod mesh;

pub use mesh::export_mesh;

use crate::fan::{self, Cone, Fan, FanError};
use crate::fanifold::{Fanifold, FanifoldError, Result};
use crate::lattice::{self, Vector};
use serde::Serialize;

/// `σ^⊥ × σ`: a subtorus of the dual torus times the cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FltzPiece {
    pub rays: Vec<Vector>,
    pub dim: usize,
    pub torus_rank: usize,
    /// Invariants of `π₀(σ^⊥)`; empty unless the fan is stacky.
    pub component_group: Vec<i64>,
}

impl FltzPiece {
    pub fn components(&self) -> i64 {
        self.component_group.iter().product()
    }
}

fn component_group(cone: &Cone) -> Result<Vec<i64>> {
    if cone.stacky_generators().is_none() || cone.is_zero() {
        return Ok(vec![]);
    }
    Ok(lattice::annihilator(lattice::Lattice::new(cone.rank()), cone.generators())?.component_group)
}

pub fn fltz_pieces(fan: &Fan) -> Result<Vec<FltzPiece>> {
    if !fan.properties().valid {
        return Err(FanError::Invalid("cones overlap".into()).into());
    }
    fan.cones()
        .iter()
        .map(|c| {
            Ok(FltzPiece { rays: c.rays().to_vec(), dim: c.dim(), torus_rank: fan.rank() - c.dim(), component_group: component_group(c)? })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeletonStratum {
    pub base: String,
    pub base_dim: usize,
    pub cone: Vec<Vector>,
    pub cone_dim: usize,
    pub torus_rank: usize,
    pub component_group: Vec<i64>,
    #[serde(skip)]
    pub base_index: usize,
    #[serde(skip)]
    pub cone_index: usize,
}

impl SkeletonStratum {
    pub fn total_dim(&self) -> usize {
        self.base_dim + self.torus_rank + self.cone_dim
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Incidence {
    Face,
    Arrow,
}

/// Strata `(F, τ)` over the interior strata of a fanifold; `π` sends
/// `(F, τ)` to `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonModel {
    pub dimension: usize,
    pub strata: Vec<SkeletonStratum>,
    /// `(lower, upper, kind)`.
    pub incidences: Vec<(usize, usize, Incidence)>,
    fanifold: Fanifold,
}

impl SkeletonModel {
    pub fn fanifold(&self) -> &Fanifold {
        &self.fanifold
    }

    pub fn projection(&self, i: usize) -> &str {
        &self.strata[i].base
    }

    /// Index of the `(F, 0)` stratum, which stands for `π⁻¹(F) ≅ F × T^{codim F}`.
    pub fn fiber_stratum(&self, base: usize) -> Option<usize> {
        self.strata.iter().position(|s| s.base_index == base && s.cone_dim == 0)
    }
}

pub fn skeleton_model(phi: &Fanifold) -> Result<SkeletonModel> {
    let report = phi.validate();
    if !report.valid {
        return Err(FanifoldError::Invalid(report.errors.first().map(|v| v.detail.clone()).unwrap_or_default()));
    }
    let mut strata = vec![];
    let mut first = vec![usize::MAX; phi.strata().len()];
    for f in phi.interior_strata() {
        let s = phi.stratum(f);
        first[f] = strata.len();
        for (t, c) in s.fan.cones().iter().enumerate() {
            strata.push(SkeletonStratum {
                base: s.id.clone(),
                base_dim: s.dim,
                cone: c.rays().to_vec(),
                cone_dim: c.dim(),
                torus_rank: s.codim() - c.dim(),
                component_group: component_group(c)?,
                base_index: f,
                cone_index: t,
            });
        }
    }
    let mut incidences = vec![];
    for f in phi.interior_strata() {
        let fan = &phi.stratum(f).fan;
        for a in 0..fan.len() {
            for b in 0..fan.len() {
                if a != b && fan.cone(a).is_face_of(fan.cone(b))? {
                    incidences.push((first[f] + a, first[f] + b, Incidence::Face));
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
        for (t, tau) in g.cones().iter().enumerate() {
            if sigma.is_face_of(tau)? {
                let image = tau.image(&arrow.quotient.matrix)?;
                let target = f.find_cone(&image).ok_or_else(|| FanifoldError::Invalid("cone image missing from target fan".into()))?;
                incidences.push((first[arrow.from] + t, first[arrow.to] + target, Incidence::Arrow));
            }
        }
    }
    Ok(SkeletonModel { dimension: phi.dimension(), strata, incidences, fanifold: phi.clone() })
}

/// `Σ_F χ_c(F) · g · χ(T^{codim F})`; torus factors of positive rank vanish.
pub fn euler_characteristic_c(model: &SkeletonModel) -> i64 {
    model
        .strata
        .iter()
        .filter(|s| s.cone_dim == 0 && s.torus_rank == 0)
        .map(|s| model.fanifold.stratum(s.base_index).chi_c * s.component_group.iter().product::<i64>())
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Handle {
    pub index: usize,
    pub stratum: String,
    pub handle: String,
    pub attaching: String,
    /// Lower strata met by the inner boundary of the cell.
    pub attaching_strata: Vec<String>,
    /// Rank of the fiber torus over the source of each incoming arrow.
    pub attaching_tori: Vec<usize>,
    /// The attachment leaves the fanifold unchanged up to collars.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandlePlan {
    pub handles: Vec<Handle>,
    /// Handle count per index `k`.
    pub counts: Vec<usize>,
}

pub fn handle_plan(phi: &Fanifold) -> Result<HandlePlan> {
    let mut order = phi.interior_strata();
    order.sort_by(|&a, &b| (phi.stratum(a).dim, &phi.stratum(a).id).cmp(&(phi.stratum(b).dim, &phi.stratum(b).id)));
    let mut handles = vec![];
    let mut counts = vec![0; phi.dimension() + 1];
    for f in order {
        let s = phi.stratum(f);
        let incoming: Vec<usize> = phi.arrows_into(f).into_iter().filter(|&a| phi.stratum(phi.arrow(a).from).interior).collect();
        let mut sources: Vec<String> = vec![];
        for &a in &incoming {
            let id = &phi.stratum(phi.arrow(a).from).id;
            if !sources.contains(id) {
                sources.push(id.clone());
            }
        }
        let chi: i64 = incoming.iter().map(|&a| phi.stratum(phi.arrow(a).from).chi_c).sum();
        let sign = if s.dim % 2 == 1 { 1 } else { -1 };
        let trivial = !incoming.is_empty() && chi == sign;
        let d = s.codim();
        counts[s.dim] += 1;
        handles.push(Handle {
            index: s.dim,
            stratum: s.id.clone(),
            handle: format!("T*{}° × T*T^{d}", s.id),
            attaching: format!("∂{}° × T^{d}", s.id),
            attaching_strata: sources,
            attaching_tori: incoming.iter().map(|&a| phi.stratum(phi.arrow(a).from).codim()).collect(),
            trivial,
        });
    }
    Ok(HandlePlan { handles, counts })
}

/// Certifies that `𝕃(Σ)` sits inside `𝕃(Σ')`: every cone of `Σ` is tiled by
/// cones of `Σ'` whose spans lie in its span.
pub fn skeleton_refinement_check(coarse: &Fan, fine: &Fan) -> Result<bool> {
    if !fan::refines(fine, coarse)? {
        return Err(FanError::Precondition("the second fan does not refine the first".into()).into());
    }
    for sigma in coarse.cones() {
        if !fan::covered(fine, sigma)? {
            return Ok(false);
        }
        for tau in fine.cones() {
            if sigma.contains_relint(&tau.relint_point())? && !tau.rays().iter().all(|r| sigma.in_span(r).unwrap_or(false)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The identity of every torus fiber lies in each `σ^⊥` and is preserved by
/// the arrow maps, so the identities glue to a section of `π`.
pub fn canonical_section_check(model: &SkeletonModel) -> bool {
    model.fanifold.quotient_maps_are_sections()
}

#[cfg(test)]
mod tests;
