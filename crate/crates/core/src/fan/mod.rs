//! Cones and fans in a lattice. Fans need not be face-closed; closure,
//! simpliciality, smoothness and completeness are computed flags.

mod cone;
mod hilbert;
mod subdivision;

pub use cone::{extreme_rays, Cone, Facet};
pub use hilbert::{dual_box_points, dual_cone_monoid, hilbert_basis, DualMonoid};
pub use subdivision::{box_points, refines, resolve_to_smooth, stellar_subdivision};
pub(crate) use subdivision::covered;

use crate::lattice::{self, primitive, IntMatrix, Lattice, LatticeError, LatticeMap, QuotientResult, Vector};
use serde::Serialize;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FanError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cone is not strongly convex")]
    NotStronglyConvex,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ray {0:?} is not primitive")]
    NotPrimitive(Vector),
    #[error("invalid stacky data: {0}")]
    Stacky(String),
    #[error("cone is not in the fan")]
    ConeNotInFan,
    #[error("ray {0:?} is outside the support of the fan")]
    RayOutsideSupport(Vector),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid fan: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FanError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanProperties {
    pub valid: bool,
    /// Two cones whose relative interiors meet.
    pub overlap: Option<(usize, usize)>,
    pub face_closed: bool,
    pub simplicial: bool,
    pub smooth: bool,
    pub complete: bool,
}

/// Finite set of cones with pairwise disjoint relative interiors (checked
/// lazily by [`Fan::properties`]). Rays are kept in a global list; each
/// cone refers to its extreme rays by index.
#[derive(Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vector>,
    stacky: Option<Vec<Vector>>,
    cone_rays: Vec<Vec<usize>>,
    cones: Vec<Cone>,
    props: OnceLock<FanProperties>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            rank: self.rank,
            rays: self.rays.clone(),
            stacky: self.stacky.clone(),
            cone_rays: self.cone_rays.clone(),
            cones: self.cones.clone(),
            props: self.props.clone(),
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.stacky == other.stacky && self.cone_rays == other.cone_rays
    }
}

impl Eq for Fan {}

impl Fan {
    /// Fan from primitive rays and cones given as ray-index lists.
    pub fn new(rank: usize, rays: Vec<Vector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        for r in &rays {
            if r.len() != rank {
                return Err(FanError::Dimension(format!("ray {r:?} is not in rank {rank}")));
            }
            if primitive(r).1 != 1 {
                return Err(FanError::NotPrimitive(r.clone()));
            }
        }
        Self::assemble(rank, rays, None, cones)
    }

    /// Stacky fan: `generators[i]` is a positive multiple of `rays[i]`.
    pub fn with_stacky(rank: usize, generators: Vec<Vector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        let mut rays = vec![];
        for g in &generators {
            if g.len() != rank {
                return Err(FanError::Dimension(format!("generator {g:?} is not in rank {rank}")));
            }
            let (p, m) = primitive(g);
            if m == 0 {
                return Err(FanError::Stacky("zero stacky generator".into()));
            }
            rays.push(p);
        }
        Self::assemble(rank, rays, Some(generators), cones)
    }

    fn assemble(rank: usize, rays: Vec<Vector>, stacky: Option<Vec<Vector>>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        for (i, r) in rays.iter().enumerate() {
            if rays[..i].contains(r) {
                return Err(FanError::Invalid(format!("ray {r:?} listed twice")));
            }
        }
        let mut built = vec![];
        let mut cone_rays = vec![];
        for idx in &cones {
            if let Some(&bad) = idx.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::Invalid(format!("ray index {bad} out of range")));
            }
            let cone = match &stacky {
                Some(s) => Cone::stacky(rank, &idx.iter().map(|&i| s[i].clone()).collect::<Vec<_>>())?,
                None => Cone::new(rank, &idx.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>())?,
            };
            if cone.rays().len() != idx.len() {
                return Err(FanError::Invalid(format!("cone {idx:?} lists rays that are not extreme")));
            }
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != idx.len() {
                return Err(FanError::Invalid(format!("cone {idx:?} repeats a ray")));
            }
            cone_rays.push(sorted);
            built.push(cone);
        }
        Ok(Fan { rank, rays, stacky, cone_rays, cones: built, props: OnceLock::new() })
    }

    /// Fan from already built cones, keeping their order. Rays are numbered
    /// by first appearance.
    pub fn from_cones(rank: usize, cones: Vec<Cone>) -> Result<Fan> {
        let mut rays: Vec<Vector> = vec![];
        let mut gens: Vec<Vector> = vec![];
        let stacky = cones.iter().any(|c| c.stacky_generators().is_some());
        let mut cone_rays = vec![];
        for c in &cones {
            if c.rank() != rank {
                return Err(FanError::Dimension("cone in a different lattice".into()));
            }
            let mut idx = vec![];
            for (k, r) in c.rays().iter().enumerate() {
                let g = &c.generators()[k];
                let i = match rays.iter().position(|x| x == r) {
                    Some(i) => {
                        if stacky && gens[i] != *g {
                            return Err(FanError::Stacky(format!("ray {r:?} carries two stacky generators")));
                        }
                        i
                    }
                    None => {
                        rays.push(r.clone());
                        gens.push(g.clone());
                        rays.len() - 1
                    }
                };
                idx.push(i);
            }
            idx.sort_unstable();
            cone_rays.push(idx);
        }
        let cones = if stacky {
            cones
                .into_iter()
                .map(|c| match c.stacky_generators() {
                    Some(_) => Ok(c),
                    None => Cone::stacky(rank, c.rays()),
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            cones
        };
        Ok(Fan { rank, rays, stacky: stacky.then_some(gens), cone_rays, cones, props: OnceLock::new() })
    }

    /// The fan `{0}`.
    pub fn trivial(rank: usize) -> Fan {
        Fan::from_cones(rank, vec![Cone::zero(rank)]).expect("zero cone")
    }

    pub fn empty(rank: usize) -> Fan {
        Fan::from_cones(rank, vec![]).expect("empty fan")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.rank)
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn stacky_generators(&self) -> Option<&[Vector]> {
        self.stacky.as_deref()
    }

    pub fn is_stacky(&self) -> bool {
        self.stacky.as_ref().is_some_and(|g| g.iter().zip(&self.rays).any(|(a, b)| a != b))
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn cone_rays(&self, i: usize) -> &[usize] {
        &self.cone_rays[i]
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Index of the cone with the same support as `c`.
    pub fn find_cone(&self, c: &Cone) -> Option<usize> {
        self.cones.iter().position(|x| x.same_support(c))
    }

    pub fn find_by_rays(&self, idx: &[usize]) -> Option<usize> {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.cone_rays.iter().position(|x| *x == s)
    }

    /// Same cones (as sets of supports), ignoring order and stacky data.
    pub fn same_cones(&self, other: &Fan) -> bool {
        self.rank == other.rank
            && self.len() == other.len()
            && self.cones.iter().all(|c| other.find_cone(c).is_some())
    }

    /// Cones containing cone `i` (including itself).
    pub fn star(&self, i: usize) -> Vec<usize> {
        let s = &self.cones[i];
        (0..self.len()).filter(|&j| self.cones[j].contains_cone(s).unwrap_or(false)).collect()
    }

    /// Cones not properly contained in another cone.
    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                !(0..self.len()).any(|j| {
                    j != i && self.cones[j].dim() > self.cones[i].dim() && self.cones[j].contains_cone(&self.cones[i]).unwrap_or(false)
                })
            })
            .collect()
    }

    pub fn support_contains(&self, x: &[i64]) -> Result<bool> {
        for c in &self.cones {
            if c.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Index of the cone whose relative interior contains `x`.
    pub fn locate(&self, x: &[i64]) -> Result<Option<usize>> {
        for (i, c) in self.cones.iter().enumerate() {
            if c.contains_relint(x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn properties(&self) -> &FanProperties {
        self.props.get_or_init(|| compute_properties(self))
    }

    /// Images in `M / span(σ)` of the cones containing `σ`, with the
    /// quotient data used for the projection.
    pub fn quotient(&self, sigma: usize) -> Result<(Fan, QuotientResult)> {
        if sigma >= self.len() {
            return Err(FanError::ConeNotInFan);
        }
        let s = &self.cones[sigma];
        let q = lattice::quotient_with_torsion(self.lattice(), s.generators())?;
        let mut images: Vec<Cone> = vec![];
        for j in self.star(sigma) {
            let img = self.cones[j].image(&q.projection.matrix)?;
            if !images.iter().any(|c| c.same_support(&img)) {
                images.push(img);
            }
        }
        Ok((Fan::from_cones(q.free_quotient.rank, images)?, q))
    }

    /// Quotient by a cone given by its support, which must be in the fan.
    pub fn quotient_by(&self, sigma: &Cone) -> Result<(Fan, QuotientResult)> {
        self.quotient(self.find_cone(sigma).ok_or(FanError::ConeNotInFan)?)
    }

    /// Images of the cones containing `σ` under a map killing `σ`.
    pub fn star_image(&self, sigma: usize, map: &IntMatrix) -> Result<Vec<Cone>> {
        let mut images: Vec<Cone> = vec![];
        for j in self.star(sigma) {
            let img = self.cones[j].image(map)?;
            if !images.iter().any(|c| c.same_support(&img)) {
                images.push(img);
            }
        }
        Ok(images)
    }

    /// Same cones without stacky data.
    pub fn coarse(&self) -> Fan {
        Fan {
            rank: self.rank,
            rays: self.rays.clone(),
            stacky: None,
            cone_rays: self.cone_rays.clone(),
            cones: self.cones.iter().map(Cone::coarse).collect(),
            props: OnceLock::new(),
        }
    }

    /// Product fan; the cone pair `(i, j)` lands at index `i·|other| + j`.
    pub fn product(&self, other: &Fan) -> Fan {
        let mut cones = vec![];
        for a in &self.cones {
            for b in &other.cones {
                cones.push(a.product(b));
            }
        }
        Fan::from_cones(self.rank + other.rank, cones).expect("product of fans")
    }

    /// Sub-fan on the given cone indices (in the given order); unused rays
    /// are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Fan {
        let used: Vec<usize> = (0..self.rays.len()).filter(|r| keep.iter().any(|&c| self.cone_rays[c].contains(r))).collect();
        let remap = |r: usize| used.iter().position(|&u| u == r).expect("used ray");
        Fan {
            rank: self.rank,
            rays: used.iter().map(|&r| self.rays[r].clone()).collect(),
            stacky: self.stacky.as_ref().map(|g| used.iter().map(|&r| g[r].clone()).collect()),
            cone_rays: keep.iter().map(|&c| self.cone_rays[c].iter().map(|&r| remap(r)).collect()).collect(),
            cones: keep.iter().map(|&c| self.cones[c].clone()).collect(),
            props: OnceLock::new(),
        }
    }

    /// Stacky lattice map `ℤ^{rays} → M` sending basis vectors to stacky
    /// generators, with the fan of coordinate cones upstairs.
    pub fn stacky_fan(&self) -> Result<StackyFan> {
        let gens = self.stacky.clone().unwrap_or_else(|| self.rays.clone());
        let k = gens.len();
        let beta = LatticeMap::new(Lattice::new(k), self.lattice(), IntMatrix::from_cols(self.rank, &gens)?)?;
        let unit = |i: usize| {
            let mut e = vec![0; k];
            e[i] = 1;
            e
        };
        let fan_tilde = Fan::new(k, (0..k).map(unit).collect(), self.cone_rays.clone())?;
        Ok(StackyFan { beta, fan_tilde, fan: self.clone() })
    }
}

/// `β: M̃ → M` with a fan upstairs mapping cone-by-cone onto `fan`.
#[derive(Debug, Clone)]
pub struct StackyFan {
    pub beta: LatticeMap,
    pub fan_tilde: Fan,
    pub fan: Fan,
}

impl StackyFan {
    pub fn cokernel_is_finite(&self) -> Result<bool> {
        Ok(lattice::smith_normal_form(&self.beta.matrix)?.rank() == self.beta.target.rank)
    }

    /// `β` maps the cones upstairs bijectively onto the cones downstairs,
    /// preserving the face order.
    pub fn is_combinatorial_equivalence(&self) -> Result<bool> {
        if self.fan_tilde.len() != self.fan.len() {
            return Ok(false);
        }
        let mut images = vec![];
        for (i, c) in self.fan_tilde.cones().iter().enumerate() {
            let img = c.image(&self.beta.matrix)?;
            if img.dim() != c.dim() || !img.same_support(self.fan.cone(i)) {
                return Ok(false);
            }
            images.push(img);
        }
        for i in 0..images.len() {
            for j in 0..images.len() {
                let up = self.fan_tilde.cone(i).is_face_of(self.fan_tilde.cone(j))?;
                let down = images[i].is_face_of(&images[j])?;
                if up != down {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn compute_properties(fan: &Fan) -> FanProperties {
    let n = fan.len();
    let cones = fan.cones();
    let mut overlap = None;
    let mut face_closed = true;
    'pairs: for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&cones[i], &cones[j]);
            let inter = match a.intersection(b) {
                Ok(c) => c,
                Err(_) => {
                    overlap = Some((i, j));
                    break 'pairs;
                }
            };
            let p = inter.relint_point();
            if a.contains_relint(&p).unwrap_or(true) && b.contains_relint(&p).unwrap_or(true) {
                overlap = Some((i, j));
                break 'pairs;
            }
            if !(inter.is_face_of(a).unwrap_or(false) && inter.is_face_of(b).unwrap_or(false)) {
                face_closed = false;
            }
        }
    }
    if face_closed {
        face_closed = cones.iter().all(|c| c.faces().iter().all(|f| fan.find_cone(f).is_some()));
    }
    let simplicial = cones.iter().all(Cone::is_simplicial);
    let smooth = cones.iter().all(|c| c.is_smooth().unwrap_or(false));
    let valid = overlap.is_none();
    let complete = valid && face_closed && is_complete(fan);
    FanProperties { valid, overlap, face_closed, simplicial, smooth, complete }
}

/// Facet-pairing criterion for a valid face-closed fan.
fn is_complete(fan: &Fan) -> bool {
    let rank = fan.rank();
    let maximal = fan.maximal_cones();
    if maximal.is_empty() || maximal.iter().any(|&i| fan.cone(i).dim() != rank) {
        return false;
    }
    if rank == 0 {
        return true;
    }
    let walls: Vec<usize> = (0..fan.len()).filter(|&i| fan.cone(i).dim() + 1 == rank).collect();
    let mut adjacency: Vec<Vec<usize>> = vec![vec![]; maximal.len()];
    for w in walls {
        let around: Vec<usize> = (0..maximal.len())
            .filter(|&k| fan.cone(w).is_face_of(fan.cone(maximal[k])).unwrap_or(false))
            .collect();
        if around.len() != 2 {
            return false;
        }
        adjacency[around[0]].push(around[1]);
        adjacency[around[1]].push(around[0]);
    }
    let mut seen = vec![false; maximal.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(k) = stack.pop() {
        for &l in &adjacency[k] {
            if !seen[l] {
                seen[l] = true;
                stack.push(l);
            }
        }
    }
    seen.iter().all(|&s| s)
}
