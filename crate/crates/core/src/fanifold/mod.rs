//! Fanifolds as decorated exit-path diagrams.
//!
//! Every non-identity exit path is an explicit [`Arrow`]; identities are
//! implicit and correspond to the zero cone of the source fan.

mod build;
mod iso;
mod validate;

pub use iso::{isomorphic, isomorphic_shape, Isomorphism};
pub use validate::{ShapeEdge, ValidationReport, Violation, ViolationKind};

use crate::fan::{Fan, FanError};
use crate::lattice::{Lattice, LatticeError, LatticeMap};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FanifoldError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unknown stratum {0:?}")]
    UnknownStratum(String),
    #[error("malformed fanifold: {0}")]
    Structure(String),
    #[error("fanifold fails validation: {0}")]
    Invalid(String),
    #[error("boundary data required: {0}")]
    BoundaryRequired(String),
    #[error("set is not closed: {0}")]
    NotClosed(String),
}

pub type Result<T> = std::result::Result<T, FanifoldError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub id: String,
    /// Manifold dimension; for ideal-boundary strata, the dimension of the
    /// cone over the stratum.
    pub dim: usize,
    pub interior: bool,
    pub fan: Fan,
    pub chi_c: i64,
}

impl Stratum {
    /// Contractible stratum: `χ_c = (−1)^dim`.
    pub fn new(id: impl Into<String>, dim: usize, fan: Fan) -> Stratum {
        Stratum { id: id.into(), dim, interior: true, fan, chi_c: if dim.is_multiple_of(2) { 1 } else { -1 } }
    }

    pub fn boundary(id: impl Into<String>, dim: usize, fan: Fan) -> Stratum {
        Stratum { interior: false, ..Stratum::new(id, dim, fan) }
    }

    pub fn lattice(&self) -> Lattice {
        self.fan.lattice()
    }

    pub fn codim(&self) -> usize {
        self.fan.rank()
    }
}

/// Exit path `from → to`: the cone `σ` of the source fan it leaves through
/// and the quotient map `M_from → M_to` (surjective, killing `σ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub cone: usize,
    pub quotient: LatticeMap,
}

/// How a fanifold was produced; decides how its ideal boundary is found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    FromFan(Fan),
    SphereSection(Fan),
    Product(Box<Fanifold>, Box<Fanifold>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fanifold {
    dimension: usize,
    compact: bool,
    strata: Vec<Stratum>,
    arrows: Vec<Arrow>,
    provenance: Provenance,
}

impl Fanifold {
    /// Checks indices and matrix shapes only; see [`Fanifold::validate`].
    pub fn new(dimension: usize, strata: Vec<Stratum>, arrows: Vec<Arrow>) -> Result<Fanifold> {
        let mut ids = BTreeSet::new();
        for s in &strata {
            if !ids.insert(s.id.as_str()) {
                return Err(FanifoldError::Structure(format!("duplicate stratum id {:?}", s.id)));
            }
        }
        for (k, a) in arrows.iter().enumerate() {
            if a.from >= strata.len() || a.to >= strata.len() {
                return Err(FanifoldError::Structure(format!("arrow {k} refers to a missing stratum")));
            }
            let (g, f) = (&strata[a.from], &strata[a.to]);
            if a.cone >= g.fan.len() {
                return Err(FanifoldError::Structure(format!("arrow {k} names a cone outside the source fan")));
            }
            if a.quotient.source != g.lattice() || a.quotient.target != f.lattice() {
                return Err(FanifoldError::Structure(format!(
                    "arrow {} -> {}: quotient map has shape {}x{}, expected {}x{}",
                    g.id,
                    f.id,
                    a.quotient.target.rank,
                    a.quotient.source.rank,
                    f.codim(),
                    g.codim()
                )));
            }
        }
        Ok(Fanifold { dimension, compact: false, strata, arrows, provenance: Provenance::Explicit })
    }

    pub fn empty(dimension: usize) -> Fanifold {
        Fanifold { dimension, compact: true, strata: vec![], arrows: vec![], provenance: Provenance::Explicit }
    }

    pub(crate) fn with_provenance(mut self, p: Provenance) -> Fanifold {
        self.provenance = p;
        self
    }

    /// Marks an explicit fanifold as having empty ideal boundary.
    pub fn with_compact(mut self, compact: bool) -> Fanifold {
        self.compact = compact;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_compact_flagged(&self) -> bool {
        self.compact
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, i: usize) -> &Stratum {
        &self.strata[i]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.strata.iter().position(|s| s.id == id).ok_or_else(|| FanifoldError::UnknownStratum(id.to_string()))
    }

    pub fn interior_strata(&self) -> Vec<usize> {
        (0..self.strata.len()).filter(|&i| self.strata[i].interior).collect()
    }

    pub fn has_boundary_strata(&self) -> bool {
        self.strata.iter().any(|s| !s.interior)
    }

    pub fn arrows_from(&self, g: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&k| self.arrows[k].from == g).collect()
    }

    pub fn arrows_into(&self, f: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&k| self.arrows[k].to == f).collect()
    }

    pub fn arrows_between(&self, g: usize, f: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&k| self.arrows[k].from == g && self.arrows[k].to == f).collect()
    }

    /// `G ≤ F`: equal, or `G` lies in the closure of `F`.
    pub fn le(&self, g: usize, f: usize) -> bool {
        g == f || self.arrows.iter().any(|a| a.from == g && a.to == f)
    }

    /// Interior strata with no incoming arrow.
    pub fn minimal_strata(&self) -> Vec<usize> {
        self.interior_strata().into_iter().filter(|&i| self.arrows_into(i).is_empty()).collect()
    }

    /// Closed sets are those containing every stratum below each member.
    pub fn is_down_closed(&self, set: &BTreeSet<usize>) -> bool {
        self.arrows.iter().all(|a| !set.contains(&a.to) || set.contains(&a.from))
    }

    /// Smallest closed set containing the given strata.
    pub fn down_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = set.clone();
        for a in &self.arrows {
            if set.contains(&a.to) {
                out.insert(a.from);
            }
        }
        out
    }

    pub fn ids_to_indices(&self, ids: &[impl AsRef<str>]) -> Result<BTreeSet<usize>> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    /// Arrow `G → F` through which `b ∘ a` factors, for `a: G → H`,
    /// `b: H → F`: the cone containing `σ_a` whose image under `q_a` is
    /// `σ_b`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let (x, y) = (&self.arrows[a], &self.arrows[b]);
        if x.to != y.from {
            return None;
        }
        let g = &self.strata[x.from].fan;
        let target = self.strata[y.from].fan.cone(y.cone);
        self.arrows_between(x.from, y.to).into_iter().find(|&c| {
            let tau = g.cone(self.arrows[c].cone);
            tau.contains_cone(g.cone(x.cone)).unwrap_or(false)
                && tau.image(&x.quotient.matrix).map(|img| img.same_support(target)).unwrap_or(false)
        })
    }
}

pub use build::*;
