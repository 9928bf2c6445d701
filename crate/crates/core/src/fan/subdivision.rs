use super::{Cone, Fan, FanError, Result};
use crate::lattice::{self, primitive, IntMatrix, Vector};

/// Star subdivision at the ray through `v`.
pub fn stellar_subdivision(fan: &Fan, v: &[i64]) -> Result<Fan> {
    if !fan.properties().face_closed {
        return Err(FanError::Precondition("stellar subdivision needs a face-closed fan".into()));
    }
    let (v, m) = primitive(v);
    if v.len() != fan.rank() {
        return Err(FanError::Dimension(format!("ray {v:?} is not in rank {}", fan.rank())));
    }
    if m == 0 || !fan.support_contains(&v)? {
        return Err(FanError::RayOutsideSupport(v));
    }
    if fan.rays().contains(&v) {
        return Ok(fan.clone());
    }
    let mut out: Vec<Cone> = vec![];
    let mut push = |c: Cone| {
        if !out.iter().any(|x| x.same_support(&c)) {
            out.push(c);
        }
    };
    for c in fan.cones() {
        let c = c.coarse();
        if !c.contains(&v)? {
            push(c);
            continue;
        }
        for f in c.faces() {
            if f.contains(&v)? {
                continue;
            }
            push(f.clone());
            let mut gens = f.rays().to_vec();
            gens.push(v.clone());
            push(Cone::new(fan.rank(), &gens)?);
        }
    }
    out.sort_by(|a, b| (a.dim(), a.rays()).cmp(&(b.dim(), b.rays())));
    Fan::from_cones(fan.rank(), out)
}

/// Nonzero lattice points `Σ λᵢ gᵢ` with `0 ≤ λᵢ < 1` of a simplicial cone,
/// paired with `Σ λᵢ` as a fraction `(numerator, denominator)`.
pub fn box_points(cone: &Cone) -> Result<Vec<(Vector, (i64, i64))>> {
    if !cone.is_simplicial() {
        return Err(FanError::Precondition("box points need a simplicial cone".into()));
    }
    let gens = cone.generators();
    let d = gens.len();
    if d == 0 {
        return Ok(vec![]);
    }
    let n = cone.rank();
    let g = IntMatrix::from_cols(n, gens)?;
    // G = B·C with B a basis of the saturated span
    let snf = lattice::smith_normal_form(&g)?;
    let diag = IntMatrix::diagonal(d, d, &snf.invariant_factors());
    let c = diag.mul(&snf.v)?;
    // Z^d / C Z^d via the Smith form of C
    let cs = lattice::smith_normal_form(&c)?;
    let factors = cs.invariant_factors();
    let l = *factors.last().expect("full rank");
    let mut out = vec![];
    let total: i64 = factors.iter().product();
    for mut k in 0..total {
        let mut z = vec![0i64; d];
        for (i, &f) in factors.iter().enumerate() {
            z[i] = (k % f) * (l / f);
            k /= f;
        }
        let lam: Vec<i64> = cs.v_inv.apply(&z)?.into_iter().map(|x| x.rem_euclid(l)).collect();
        if lam.iter().all(|&x| x == 0) {
            continue;
        }
        let scaled = g.apply(&lam)?;
        let point: Vector = scaled.iter().map(|x| x / l).collect();
        debug_assert!(scaled.iter().all(|x| x % l == 0));
        out.push((point, (lam.iter().sum(), l)));
    }
    Ok(out)
}

const MAX_STEPS: usize = 10_000;

/// Smooth refinement by star subdivisions: first at interior points of
/// non-simplicial cones, then at minimal box points of non-smooth ones.
/// Stacky data is dropped first.
pub fn resolve_to_smooth(fan: &Fan) -> Result<Fan> {
    if !fan.properties().face_closed {
        return Err(FanError::Precondition("resolution needs a face-closed fan".into()));
    }
    let mut cur = fan.coarse();
    for _ in 0..MAX_STEPS {
        let lowest = |pred: &dyn Fn(&Cone) -> bool| {
            cur.cones().iter().filter(|c| pred(c)).min_by(|a, b| (a.dim(), a.rays()).cmp(&(b.dim(), b.rays()))).cloned()
        };
        if let Some(c) = lowest(&|c: &Cone| !c.is_simplicial()) {
            cur = stellar_subdivision(&cur, &primitive(&c.relint_point()).0)?;
            continue;
        }
        let Some(c) = lowest(&|c: &Cone| !c.is_smooth().unwrap_or(false)) else {
            return Ok(cur);
        };
        let best = box_points(&c)?
            .into_iter()
            .min_by(|(p, (a, l)), (q, (b, m))| {
                (i128::from(*a) * i128::from(*m)).cmp(&(i128::from(*b) * i128::from(*l))).then_with(|| p.cmp(q))
            })
            .expect("non-smooth simplicial cone has box points");
        cur = stellar_subdivision(&cur, &best.0)?;
    }
    Err(FanError::Invalid("resolution did not terminate".into()))
}

/// Every cone of `finer` lies in a cone of `coarser`, and every cone of
/// `coarser` is a union of cones of `finer`.
pub fn refines(finer: &Fan, coarser: &Fan) -> Result<bool> {
    if finer.rank() != coarser.rank() {
        return Ok(false);
    }
    for c in finer.cones() {
        let mut inside = false;
        for d in coarser.cones() {
            if d.contains_cone(c)? {
                inside = true;
                break;
            }
        }
        if !inside {
            return Ok(false);
        }
    }
    for tau in coarser.cones() {
        if !covered(finer, tau)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The full-dimensional cones of `fan` inside `tau` tile `tau`: each of
/// their facets either lies on the boundary of `tau` or is shared by two.
pub(crate) fn covered(fan: &Fan, tau: &Cone) -> Result<bool> {
    let mut pieces = vec![];
    for c in fan.cones() {
        if c.dim() == tau.dim() && tau.contains_cone(c)? {
            pieces.push(c.coarse());
        }
    }
    if pieces.is_empty() {
        return Ok(false);
    }
    if tau.dim() == 0 {
        return Ok(true);
    }
    let mut facets: Vec<(Vec<Vector>, usize)> = vec![];
    for p in &pieces {
        for f in p.facets() {
            let rays: Vec<Vector> = f.tight.iter().map(|&i| p.rays()[i].clone()).collect();
            match facets.iter_mut().find(|(r, _)| *r == rays) {
                Some(entry) => entry.1 += 1,
                None => facets.push((rays, 1)),
            }
        }
    }
    for (rays, count) in facets {
        let mut on_boundary = false;
        for f in tau.facets() {
            let mut all = true;
            for r in &rays {
                if lattice::dot(&f.normal, r)? != 0 {
                    all = false;
                    break;
                }
            }
            if all {
                on_boundary = true;
                break;
            }
        }
        if !on_boundary && count != 2 {
            return Ok(false);
        }
    }
    Ok(true)
}
