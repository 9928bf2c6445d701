use super::{Arrow, Fanifold, FanifoldError, Provenance, Result, Stratum};
use crate::fan::{Cone, Fan};
use crate::lattice::{primitive, IntMatrix, Lattice, LatticeMap, Vector};
use std::collections::BTreeSet;

fn cone_id(fan: &Fan, i: usize) -> String {
    let rays = fan.cone_rays(i);
    if rays.is_empty() {
        "o".to_string()
    } else {
        format!("c{}", rays.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("_"))
    }
}

/// Strata and arrows of the cones `keep` of `fan`, each with normal fan
/// `Σ/σ`. Arrows `σ → τ` use `q = P_τ · s_σ`.
fn cone_strata(fan: &Fan, keep: &[usize], dim_offset: usize) -> Result<(Vec<Stratum>, Vec<Arrow>)> {
    let mut quotients = vec![];
    let mut strata = vec![];
    for &i in keep {
        let (qf, data) = fan.quotient(i)?;
        strata.push(Stratum::new(cone_id(fan, i), fan.cone(i).dim() - dim_offset, qf));
        quotients.push(data);
    }
    let mut arrows = vec![];
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            if i == j || !fan.cone(j).contains_cone(fan.cone(i))? {
                continue;
            }
            let image = fan.cone(j).image(&quotients[a].projection.matrix)?;
            let cone = strata[a].fan.find_cone(&image).expect("image of a star cone");
            let q = quotients[b].projection.matrix.mul(&quotients[a].section)?;
            arrows.push(Arrow { from: a, to: b, cone, quotient: LatticeMap::new(strata[a].lattice(), strata[b].lattice(), q)? });
        }
    }
    Ok((strata, arrows))
}

impl Fanifold {
    /// One stratum per cone, of the cone's dimension, with normal fan `Σ/σ`.
    pub fn from_fan(fan: &Fan) -> Result<Fanifold> {
        let keep: Vec<usize> = (0..fan.len()).collect();
        let (strata, arrows) = cone_strata(fan, &keep, 0)?;
        Ok(Fanifold::new(fan.rank(), strata, arrows)?.with_provenance(Provenance::FromFan(fan.clone())))
    }

    /// Intersection with the unit sphere: one stratum per nonzero cone, of
    /// one less than its dimension.
    pub fn sphere_section(fan: &Fan) -> Result<Fanifold> {
        if fan.rank() == 0 {
            return Err(FanifoldError::Structure("sphere section needs rank at least 1".into()));
        }
        let keep: Vec<usize> = (0..fan.len()).filter(|&i| !fan.cone(i).is_zero()).collect();
        let (strata, arrows) = cone_strata(fan, &keep, 1)?;
        Ok(Fanifold::new(fan.rank() - 1, strata, arrows)?.with_provenance(Provenance::SphereSection(fan.clone())))
    }

    /// Product: strata are pairs (first factor major), fans are products.
    pub fn product(&self, other: &Fanifold) -> Result<Fanifold> {
        let n2 = other.strata().len();
        let mut strata = vec![];
        for a in self.strata() {
            for b in other.strata() {
                let interior = a.interior && b.interior;
                strata.push(Stratum {
                    id: format!("{}*{}", a.id, b.id),
                    dim: a.dim + b.dim,
                    interior,
                    fan: a.fan.product(&b.fan),
                    chi_c: a.chi_c * b.chi_c,
                });
            }
        }
        // each factor contributes an arrow or an identity (None)
        let step = |phi: &Fanifold, from: usize| {
            let mut v: Vec<(usize, Option<usize>)> = vec![(from, None)];
            v.extend(phi.arrows_from(from).into_iter().map(|k| (phi.arrow(k).to, Some(k))));
            v
        };
        let zero = |fan: &Fan| fan.cones().iter().position(Cone::is_zero);
        let mut arrows = vec![];
        for g1 in 0..self.strata().len() {
            for g2 in 0..n2 {
                for (f1, a1) in step(self, g1) {
                    for (f2, a2) in step(other, g2) {
                        if a1.is_none() && a2.is_none() {
                            continue;
                        }
                        let (s1, s2) = (self.stratum(g1), other.stratum(g2));
                        let c1 = match a1 {
                            Some(k) => self.arrow(k).cone,
                            None => zero(&s1.fan).ok_or_else(|| FanifoldError::Structure(format!("{} has no zero cone", s1.id)))?,
                        };
                        let c2 = match a2 {
                            Some(k) => other.arrow(k).cone,
                            None => zero(&s2.fan).ok_or_else(|| FanifoldError::Structure(format!("{} has no zero cone", s2.id)))?,
                        };
                        let m1 = a1.map_or_else(|| IntMatrix::identity(s1.codim()), |k| self.arrow(k).quotient.matrix.clone());
                        let m2 = a2.map_or_else(|| IntMatrix::identity(s2.codim()), |k| other.arrow(k).quotient.matrix.clone());
                        let (from, to) = (g1 * n2 + g2, f1 * n2 + f2);
                        arrows.push(Arrow {
                            from,
                            to,
                            cone: c1 * s2.fan.len() + c2,
                            quotient: LatticeMap::new(strata[from].lattice(), strata[to].lattice(), m1.direct_sum(&m2))?,
                        });
                    }
                }
            }
        }
        Ok(Fanifold::new(self.dimension() + other.dimension(), strata, arrows)?
            .with_provenance(Provenance::Product(Box::new(self.clone()), Box::new(other.clone()))))
    }

    /// Sub-diagram on `keep`: arrows leaving `keep` are dropped together with
    /// their cones. No validation.
    fn restrict_to(&self, keep: &[usize]) -> Result<Fanifold> {
        let mut strata = vec![];
        let mut cone_maps: Vec<Vec<Option<usize>>> = vec![];
        for &i in keep {
            let s = self.stratum(i);
            let kept: Vec<usize> = (0..s.fan.len())
                .filter(|&c| {
                    s.fan.cone(c).is_zero()
                        || self.arrows_from(i).iter().any(|&k| self.arrow(k).cone == c && keep.contains(&self.arrow(k).to))
                })
                .collect();
            let mut map = vec![None; s.fan.len()];
            for (new, &old) in kept.iter().enumerate() {
                map[old] = Some(new);
            }
            cone_maps.push(map);
            strata.push(Stratum { fan: s.fan.restrict(&kept), ..s.clone() });
        }
        let mut arrows = vec![];
        for a in self.arrows() {
            let (Some(from), Some(to)) = (keep.iter().position(|&x| x == a.from), keep.iter().position(|&x| x == a.to)) else {
                continue;
            };
            let cone = cone_maps[from][a.cone].expect("kept cone");
            arrows.push(Arrow { from, to, cone, quotient: a.quotient.clone() });
        }
        let out = Fanifold::new(self.dimension(), strata, arrows)?;
        Ok(out.with_compact(self.is_compact_flagged()))
    }

    /// Removes strata and, from the remaining fans, the cones of arrows into
    /// them. Fails if the result does not validate.
    pub fn delete_strata(&self, ids: &[impl AsRef<str>]) -> Result<Fanifold> {
        let gone = self.ids_to_indices(ids)?;
        if gone.is_empty() {
            return Ok(self.clone());
        }
        let keep: Vec<usize> = (0..self.strata().len()).filter(|i| !gone.contains(i)).collect();
        let out = self.restrict_to(&keep)?;
        let report = out.validate();
        if let Some(v) = report.errors.first() {
            return Err(FanifoldError::Invalid(format!("{:?} at {:?}: {}", v.kind, v.strata, v.detail)));
        }
        Ok(out)
    }

    /// Closure of `F`: strata `G ≤ F`, each fan cut down to the cones of
    /// arrows into the closure.
    pub fn closure(&self, f: usize) -> Result<Fanifold> {
        let keep: Vec<usize> = (0..self.strata().len()).filter(|&g| self.le(g, f)).collect();
        self.restrict_to(&keep)
    }

    /// Objects are the arrows into `F` (and its identity); a morphism
    /// `(G, a) → (H, b)` is an arrow `c: G → H` with `b ∘ c = a`. The fan at
    /// `(G, a)` consists of the faces of `σ_a`. Also returns, per new stratum,
    /// the stratum of `self` it maps to.
    pub fn unrolled_closure(&self, f: usize) -> Result<(Fanifold, Vec<usize>)> {
        let fs = self.stratum(f);
        let zero_f = fs.fan.cones().iter().position(Cone::is_zero).ok_or_else(|| FanifoldError::Structure(format!("{} has no zero cone", fs.id)))?;
        // (source stratum, arrow into F or None for the identity, cone index)
        let mut objects: Vec<(usize, Option<usize>, usize)> = vec![(f, None, zero_f)];
        for k in self.arrows_into(f) {
            objects.push((self.arrow(k).from, Some(k), self.arrow(k).cone));
        }
        objects.sort_by_key(|&(g, a, _)| (std::cmp::Reverse(self.stratum(g).codim()), g, a));
        let mut strata = vec![];
        let mut face_lists = vec![];
        for &(g, a, c) in &objects {
            let s = self.stratum(g);
            let sigma = s.fan.cone(c);
            let faces: Vec<usize> = (0..s.fan.len()).filter(|&t| s.fan.cone(t).is_face_of(sigma).unwrap_or(false)).collect();
            let id = match a {
                None => s.id.clone(),
                Some(k) => {
                    let parallel = self.arrows_between(g, f);
                    if parallel.len() == 1 {
                        s.id.clone()
                    } else {
                        format!("{}#{}", s.id, parallel.iter().position(|&x| x == k).expect("arrow"))
                    }
                }
            };
            strata.push(Stratum { id, fan: s.fan.restrict(&faces), ..s.clone() });
            face_lists.push(faces);
        }
        let mut arrows = vec![];
        for (i, &(g, a, _)) in objects.iter().enumerate() {
            let Some(a) = a else { continue };
            for (j, &(h, b, _)) in objects.iter().enumerate() {
                if i == j {
                    continue;
                }
                let candidates: Vec<usize> = match b {
                    None => vec![a],
                    Some(b) => self.arrows_between(g, h).into_iter().filter(|&c| self.compose(c, b) == Some(a)).collect(),
                };
                for c in candidates {
                    let arrow = self.arrow(c);
                    let Some(cone) = face_lists[i].iter().position(|&t| t == arrow.cone) else { continue };
                    if arrow.to != h {
                        continue;
                    }
                    arrows.push(Arrow { from: i, to: j, cone, quotient: arrow.quotient.clone() });
                }
            }
        }
        let map = objects.iter().map(|&(g, _, _)| g).collect();
        Ok((Fanifold::new(self.dimension(), strata, arrows)?, map))
    }

    /// Ideal boundary `∂_∞Φ`, one dimension lower.
    pub fn ideal_boundary(&self) -> Result<Fanifold> {
        let dim = self.dimension().saturating_sub(1);
        if self.has_boundary_strata() {
            let keep: Vec<usize> = (0..self.strata().len()).filter(|&i| !self.stratum(i).interior).collect();
            let mut out = self.restrict_to(&keep)?;
            out.dimension = dim;
            for s in &mut out.strata {
                s.interior = true;
                s.dim -= 1;
                s.chi_c = if s.dim % 2 == 0 { 1 } else { -1 };
            }
            return Ok(out.with_compact(true));
        }
        if self.is_compact_flagged() {
            return Ok(Fanifold::empty(dim));
        }
        match self.provenance() {
            Provenance::FromFan(fan) => {
                if fan.rank() == 0 {
                    return Ok(Fanifold::empty(0));
                }
                Ok(Fanifold::sphere_section(fan)?.with_compact(true))
            }
            Provenance::SphereSection(fan) => missing_ray_boundary(fan),
            Provenance::Product(a, b) => {
                let (da, db) = (a.ideal_boundary()?, b.ideal_boundary()?);
                match (da.strata().is_empty(), db.strata().is_empty()) {
                    (true, true) => Ok(Fanifold::empty(dim)),
                    (true, false) => Ok(a.product(&db)?.with_compact(true)),
                    (false, true) => Ok(da.product(b)?.with_compact(true)),
                    (false, false) => match (a.provenance(), b.provenance()) {
                        (Provenance::FromFan(f), Provenance::FromFan(g)) => Ok(Fanifold::sphere_section(&f.product(g))?.with_compact(true)),
                        _ => Err(FanifoldError::BoundaryRequired("product of two non-compact factors".into())),
                    },
                }
            }
            Provenance::Explicit => Err(FanifoldError::BoundaryRequired(
                "no ideal-boundary strata and not marked compact".into(),
            )),
        }
    }
}

/// Sphere section of a fan missing some rays: near each missing ray the
/// boundary is the sphere section of the star of that ray modulo the ray.
fn missing_ray_boundary(fan: &Fan) -> Result<Fanifold> {
    let dim = fan.rank().saturating_sub(2);
    let mut missing: Vec<Vector> = vec![];
    for c in fan.cones() {
        for face in c.faces() {
            if !face.is_zero() && fan.find_cone(&face).is_none() {
                if face.dim() != 1 {
                    return Err(FanifoldError::BoundaryRequired(format!(
                        "fan is missing a face of dimension {}",
                        face.dim()
                    )));
                }
                if !missing.contains(&face.rays()[0]) {
                    missing.push(face.rays()[0].clone());
                }
            }
        }
    }
    missing.sort();
    let mut strata = vec![];
    let mut arrows = vec![];
    for (r, ray) in missing.iter().enumerate() {
        let q = crate::lattice::quotient_with_torsion(Lattice::new(fan.rank()), std::slice::from_ref(ray))?;
        let mut images: Vec<Cone> = vec![];
        for c in fan.cones() {
            if c.contains(ray)? {
                let img = c.image(&q.projection.matrix)?;
                if !images.iter().any(|x| x.same_support(&img)) {
                    images.push(img);
                }
            }
        }
        let link = Fan::from_cones(q.free_quotient.rank, images)?;
        let piece = Fanifold::sphere_section(&link)?;
        let offset = strata.len();
        let tag = primitive(ray).0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        for s in piece.strata() {
            strata.push(Stratum { id: format!("r{r}[{tag}]:{}", s.id), ..s.clone() });
        }
        for a in piece.arrows() {
            arrows.push(Arrow { from: a.from + offset, to: a.to + offset, ..a.clone() });
        }
    }
    Ok(Fanifold::new(dim, strata, arrows)?.with_compact(true))
}

/// Strata of `phi` in the given set, as ids.
pub fn ids_of(phi: &Fanifold, set: &BTreeSet<usize>) -> Vec<String> {
    set.iter().map(|&i| phi.stratum(i).id.clone()).collect()
}

impl Fanifold {
    /// Same fanifold with its ideal boundary stored as boundary strata, so
    /// the boundary survives serialization.
    pub fn with_boundary_strata(&self) -> Result<Fanifold> {
        let boundary = self.ideal_boundary()?;
        let offset = self.strata().len();
        let mut strata = self.strata().to_vec();
        for s in boundary.strata() {
            strata.push(Stratum { id: format!("∂{}", s.id), interior: false, dim: s.dim + 1, ..s.clone() });
        }
        let mut arrows = self.arrows().to_vec();
        for a in boundary.arrows() {
            arrows.push(Arrow { from: a.from + offset, to: a.to + offset, ..a.clone() });
        }
        let compact = boundary.strata().is_empty();
        Ok(Fanifold::new(self.dimension(), strata, arrows)?.with_compact(compact))
    }
}
