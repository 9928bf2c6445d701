use super::{FanError, Result};
use crate::lattice::{self, dot, primitive, IntMatrix, Lattice, Vector};
use itertools::Itertools;
use serde::{Deserialize, Serialize};

/// A supporting hyperplane of a cone: `normal · x ≥ 0` on the cone, with
/// equality exactly on the rays listed in `tight`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vector,
    pub tight: Vec<usize>,
}

/// Strongly convex rational polyhedral cone, stored by its primitive
/// extreme rays in lexicographic order. Stacky cones also carry one integral
/// generator per ray (a positive multiple of that ray).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    rank: usize,
    rays: Vec<Vector>,
    stacky: Option<Vec<Vector>>,
    dim: usize,
    equations: Vec<Vector>,
    facets: Vec<Facet>,
}

impl Cone {
    pub fn zero(rank: usize) -> Cone {
        Cone {
            rank,
            rays: vec![],
            stacky: None,
            dim: 0,
            equations: lattice::annihilator(Lattice::new(rank), &[]).expect("identity").basis,
            facets: vec![],
        }
    }

    /// Cone generated by `gens`. Generators are reduced to primitive vectors
    /// and redundant ones dropped.
    pub fn new(rank: usize, gens: &[Vector]) -> Result<Cone> {
        for g in gens {
            if g.len() != rank {
                return Err(FanError::Dimension(format!("generator {g:?} is not in rank {rank}")));
            }
        }
        let mut prim: Vec<Vector> = gens.iter().map(|g| primitive(g).0).filter(|g| g.iter().any(|&x| x != 0)).collect();
        prim.sort();
        prim.dedup();
        let (rays, dim, equations, facets) = analyse(rank, &prim)?;
        Ok(Cone { rank, rays, stacky: None, dim, equations, facets })
    }

    /// Cone with fixed integral generators on its rays. Every generator must
    /// span an extreme ray and no ray may be repeated.
    pub fn stacky(rank: usize, gens: &[Vector]) -> Result<Cone> {
        let base = Cone::new(rank, gens)?;
        if base.rays.len() != gens.len() {
            return Err(FanError::Stacky(format!(
                "stacky generators {gens:?} do not correspond one-to-one to extreme rays"
            )));
        }
        let mut stacky = vec![vec![]; base.rays.len()];
        for g in gens {
            let p = primitive(g).0;
            let i = base.rays.iter().position(|r| *r == p).expect("ray present");
            stacky[i] = g.clone();
        }
        Ok(Cone { stacky: Some(stacky), ..base })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn stacky_generators(&self) -> Option<&[Vector]> {
        self.stacky.as_deref()
    }

    /// Stacky generators when present, otherwise the primitive rays.
    pub fn generators(&self) -> &[Vector] {
        self.stacky.as_deref().unwrap_or(&self.rays)
    }

    pub fn is_stacky(&self) -> bool {
        self.stacky.as_ref().is_some_and(|s| s.iter().zip(&self.rays).any(|(g, r)| g != r))
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Dual vectors cutting out the linear span.
    pub fn equations(&self) -> &[Vector] {
        &self.equations
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// Invariant factors of the generator matrix.
    pub fn invariant_factors(&self) -> Result<Vec<i64>> {
        let m = IntMatrix::from_cols(self.rank, self.generators())?;
        Ok(lattice::smith_normal_form(&m)?.invariant_factors())
    }

    /// Linearly independent generators whose invariant factors are all 1.
    pub fn is_smooth(&self) -> Result<bool> {
        Ok(self.is_simplicial() && self.invariant_factors()?.iter().all(|&d| d == 1))
    }

    /// Index of the sublattice spanned by the generators in its saturation.
    pub fn multiplicity(&self) -> Result<i64> {
        let mut m = 1i64;
        for d in self.invariant_factors()? {
            m = m.checked_mul(d).ok_or(lattice::LatticeError::Overflow("multiplicity"))?;
        }
        Ok(m)
    }

    pub fn in_span(&self, x: &[i64]) -> Result<bool> {
        for e in &self.equations {
            if dot(e, x)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        if !self.in_span(x)? {
            return Ok(false);
        }
        for f in &self.facets {
            if dot(&f.normal, x)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_relint(&self, x: &[i64]) -> Result<bool> {
        if !self.in_span(x)? {
            return Ok(false);
        }
        for f in &self.facets {
            if dot(&f.normal, x)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_cone(&self, other: &Cone) -> Result<bool> {
        for r in &other.rays {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sum of the rays; lies in the relative interior.
    pub fn relint_point(&self) -> Vector {
        let mut p = vec![0; self.rank];
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    /// Rays of the smallest face containing every ray in `subset`.
    fn face_closure(&self, subset: &[Vector]) -> Vec<usize> {
        let mut keep: Vec<usize> = (0..self.rays.len()).collect();
        for f in &self.facets {
            let contains_all = subset.iter().all(|s| {
                self.rays.iter().position(|r| r == s).is_some_and(|i| f.tight.contains(&i))
                    || dot(&f.normal, s).map(|v| v == 0).unwrap_or(false)
            });
            if contains_all {
                keep.retain(|i| f.tight.contains(i));
            }
        }
        keep
    }

    pub fn is_face_of(&self, other: &Cone) -> Result<bool> {
        if self.rank != other.rank || !other.contains_cone(self)? {
            return Ok(false);
        }
        let closure: Vec<&Vector> = other.face_closure(&self.rays).into_iter().map(|i| &other.rays[i]).collect();
        Ok(closure.len() == self.rays.len() && closure.iter().all(|r| self.rays.contains(r)))
    }

    fn sub_cone(&self, idx: &[usize]) -> Cone {
        let result = match &self.stacky {
            Some(s) => Cone::stacky(self.rank, &idx.iter().map(|&i| s[i].clone()).collect::<Vec<_>>()),
            None => Cone::new(self.rank, &idx.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>()),
        };
        result.expect("faces of a strongly convex cone are strongly convex")
    }

    /// All faces including the zero face and the cone itself, ordered by
    /// dimension and then by rays.
    pub fn faces(&self) -> Vec<Cone> {
        let full: Vec<usize> = (0..self.rays.len()).collect();
        let mut sets: Vec<Vec<usize>> = vec![full];
        let mut frontier: Vec<Vec<usize>> = self.facets.iter().map(|f| f.tight.clone()).collect();
        while let Some(s) = frontier.pop() {
            if sets.contains(&s) {
                continue;
            }
            for f in &self.facets {
                let t: Vec<usize> = s.iter().copied().filter(|i| f.tight.contains(i)).collect();
                if !sets.contains(&t) {
                    frontier.push(t);
                }
            }
            sets.push(s);
        }
        if !sets.iter().any(|s| s.is_empty()) {
            sets.push(vec![]);
        }
        let mut faces: Vec<Cone> = sets.iter().map(|s| self.sub_cone(s)).collect();
        faces.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        faces.dedup();
        faces
    }

    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        if self.rank != other.rank {
            return Err(FanError::Dimension("intersecting cones in different lattices".into()));
        }
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        let ineqs: Vec<Vector> = self.facets.iter().chain(&other.facets).map(|f| f.normal.clone()).collect();
        let rays = extreme_rays(self.rank, &eqs, &ineqs)?.ok_or(FanError::NotStronglyConvex)?;
        Cone::new(self.rank, &rays)
    }

    /// Image under a linear map. Generators mapping to zero are dropped;
    /// stacky generators are carried along unreduced.
    pub fn image(&self, map: &IntMatrix) -> Result<Cone> {
        let imgs: Vec<Vector> = self
            .generators()
            .iter()
            .map(|g| map.apply(g))
            .collect::<std::result::Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        if self.stacky.is_some() {
            let mut uniq: Vec<Vector> = vec![];
            for v in imgs {
                if !uniq.contains(&v) {
                    uniq.push(v);
                }
            }
            if let Ok(c) = Cone::stacky(map.rows(), &uniq) {
                return Ok(c);
            }
            return Cone::new(map.rows(), &uniq);
        }
        Cone::new(map.rows(), &imgs)
    }

    /// Same underlying cone, ignoring stacky data.
    pub fn same_support(&self, other: &Cone) -> bool {
        self.rank == other.rank && self.rays == other.rays
    }

    pub fn coarse(&self) -> Cone {
        Cone { stacky: None, ..self.clone() }
    }

    /// Product cone in the direct sum lattice.
    pub fn product(&self, other: &Cone) -> Cone {
        let (a, b) = (self.rank, other.rank);
        let left = self.generators().iter().map(|g| {
            let mut v = g.clone();
            v.extend(std::iter::repeat_n(0, b));
            v
        });
        let right = other.generators().iter().map(|g| {
            let mut v = vec![0; a];
            v.extend(g.iter().copied());
            v
        });
        let gens: Vec<Vector> = left.chain(right).collect();
        let result = if self.stacky.is_some() || other.stacky.is_some() {
            Cone::stacky(a + b, &gens)
        } else {
            Cone::new(a + b, &gens)
        };
        result.expect("product of strongly convex cones")
    }
}

type Analysis = (Vec<Vector>, usize, Vec<Vector>, Vec<Facet>);

fn analyse(rank: usize, gens: &[Vector]) -> Result<Analysis> {
    let ann = lattice::annihilator(Lattice::new(rank), gens)?;
    let equations = ann.basis;
    let dim = rank - equations.len();
    if dim == 0 {
        return Ok((vec![], 0, equations, vec![]));
    }
    // candidate facets: hyperplanes through d-1 independent generators
    let mut facets: Vec<Facet> = vec![];
    for subset in (0..gens.len()).combinations(dim - 1) {
        let rows: Vec<Vector> = subset.iter().map(|&i| gens[i].clone()).collect();
        if lattice::rank(&rows, rank)? != dim - 1 {
            continue;
        }
        let kernel = lattice::integer_kernel(&rows, rank)?;
        let mut normal = None;
        for k in kernel {
            let vals: Vec<i64> = gens.iter().map(|g| dot(&k, g)).collect::<std::result::Result<_, _>>()?;
            if vals.iter().any(|&v| v != 0) {
                normal = Some((k, vals));
                break;
            }
        }
        let Some((mut h, mut vals)) = normal else { continue };
        if vals.iter().all(|&v| v <= 0) {
            h.iter_mut().for_each(|x| *x = -*x);
            vals.iter_mut().for_each(|x| *x = -*x);
        }
        if vals.iter().any(|&v| v < 0) {
            continue;
        }
        let tight: Vec<usize> = (0..gens.len()).filter(|&i| vals[i] == 0).collect();
        if facets.iter().all(|f| f.tight != tight) {
            facets.push(Facet { normal: primitive(&h).0, tight });
        }
    }
    let mut all: Vec<Vector> = facets.iter().map(|f| f.normal.clone()).collect();
    all.extend(equations.iter().cloned());
    if lattice::rank(&all, rank)? != rank {
        return Err(FanError::NotStronglyConvex);
    }
    // extreme rays lie on facets whose normals span a hyperplane
    let mut extreme = vec![];
    for (i, g) in gens.iter().enumerate() {
        let mut rows: Vec<Vector> = facets.iter().filter(|f| f.tight.contains(&i)).map(|f| f.normal.clone()).collect();
        rows.extend(equations.iter().cloned());
        if lattice::rank(&rows, rank)? == rank - 1 {
            extreme.push(g.clone());
        }
    }
    let facets = facets
        .into_iter()
        .map(|f| Facet {
            tight: f.tight.iter().filter_map(|&i| extreme.iter().position(|r| *r == gens[i])).collect(),
            normal: f.normal,
        })
        .collect();
    Ok((extreme, dim, equations, facets))
}

/// Extreme rays of `{x : E x = 0, H x ≥ 0}`; `None` when the region contains a line.
pub fn extreme_rays(rank: usize, equations: &[Vector], inequalities: &[Vector]) -> Result<Option<Vec<Vector>>> {
    let e = lattice::rank(equations, rank)?;
    let free = rank - e;
    if free == 0 {
        return Ok(Some(vec![]));
    }
    let mut rays: Vec<Vector> = vec![];
    for subset in (0..inequalities.len()).combinations(free - 1) {
        let mut rows = equations.to_vec();
        rows.extend(subset.iter().map(|&i| inequalities[i].clone()));
        let kernel = lattice::integer_kernel(&rows, rank)?;
        if kernel.len() != 1 {
            continue;
        }
        let r = &kernel[0];
        let vals: Vec<i64> = inequalities.iter().map(|h| dot(h, r)).collect::<std::result::Result<_, _>>()?;
        let candidate = if vals.iter().all(|&v| v == 0) {
            return Ok(None);
        } else if vals.iter().all(|&v| v >= 0) {
            r.clone()
        } else if vals.iter().all(|&v| v <= 0) {
            r.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        let p = primitive(&candidate).0;
        if !rays.contains(&p) {
            rays.push(p);
        }
    }
    rays.sort();
    Ok(Some(rays))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(gens: &[[i64; 2]]) -> Cone {
        Cone::new(2, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn normalizes_generators() {
        let c = cone(&[[2, 0], [1, 1], [0, 3]]);
        assert_eq!(c.rays(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.facets().len(), 2);
    }

    #[test]
    fn rejects_lines() {
        assert!(matches!(Cone::new(1, &[vec![1], vec![-1]]), Err(FanError::NotStronglyConvex)));
        assert!(matches!(
            Cone::new(2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]),
            Err(FanError::NotStronglyConvex)
        ));
    }

    #[test]
    fn membership() {
        let c = cone(&[[-1, 1], [1, 1]]);
        assert!(c.contains(&[0, 1]).unwrap());
        assert!(c.contains_relint(&[0, 1]).unwrap());
        assert!(c.contains(&[1, 1]).unwrap());
        assert!(!c.contains_relint(&[1, 1]).unwrap());
        assert!(!c.contains(&[1, 0]).unwrap());
        let ray = cone(&[[1, 1]]);
        assert!(ray.contains(&[2, 2]).unwrap());
        assert!(!ray.contains(&[-1, -1]).unwrap());
        assert!(!ray.contains(&[1, 0]).unwrap());
    }

    #[test]
    fn faces_and_face_relation() {
        let c = cone(&[[1, 0], [0, 1]]);
        let faces = c.faces();
        assert_eq!(faces.len(), 4);
        assert!(faces[0].is_zero());
        assert!(cone(&[[1, 0]]).is_face_of(&c).unwrap());
        assert!(!cone(&[[1, 1]]).is_face_of(&c).unwrap());
        assert!(Cone::zero(2).is_face_of(&c).unwrap());
        let square = Cone::new(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap();
        assert_eq!(square.faces().len(), 1 + 4 + 4 + 1);
        assert!(!square.is_simplicial());
    }

    #[test]
    fn intersections() {
        let a = cone(&[[1, 0], [0, 1]]);
        let b = cone(&[[1, 1], [-1, 1]]);
        let i = a.intersection(&b).unwrap();
        assert_eq!(i.rays(), &[vec![0, 1], vec![1, 1]]);
        let c = cone(&[[-1, 0]]);
        assert!(a.intersection(&c).unwrap().is_zero());
    }

    #[test]
    fn smoothness_and_multiplicity() {
        assert!(cone(&[[1, 0], [0, 1]]).is_smooth().unwrap());
        let q = cone(&[[-1, 1], [1, 1]]);
        assert!(!q.is_smooth().unwrap());
        assert_eq!(q.multiplicity().unwrap(), 2);
        assert_eq!(cone(&[[1, 0], [1, 3]]).multiplicity().unwrap(), 3);
        let s = Cone::stacky(1, &[vec![2]]).unwrap();
        assert!(!s.is_smooth().unwrap());
        assert_eq!(s.rays(), &[vec![1]]);
    }

    #[test]
    fn images_under_projection() {
        let c = cone(&[[1, 0], [0, 1]]);
        let p = IntMatrix::from_rows(&[vec![0, 1]], 2).unwrap();
        let img = c.image(&p).unwrap();
        assert_eq!(img.rays(), &[vec![1]]);
        let s = Cone::stacky(2, &[vec![-1, 1], vec![1, 1]]).unwrap();
        let p = IntMatrix::from_rows(&[vec![1, 1]], 2).unwrap();
        let img = s.image(&p).unwrap();
        assert_eq!(img.stacky_generators(), Some(&[vec![2]][..]));
    }
}
