use super::Fanifold;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Rank,
    InvalidFan,
    ConeDimension,
    QuotientKernel,
    QuotientNotSurjective,
    FanImage,
    ExitCorrespondence,
    BoundaryMixing,
    MissingComposite,
    CompositeMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Offending strata, in path order.
    pub strata: Vec<String>,
    pub detail: String,
}

/// Indecomposable arrows between a pair of strata, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeEdge {
    pub from: String,
    pub to: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub is_poset: bool,
    pub coherent: bool,
    pub strata: usize,
    pub arrows: usize,
    pub shape: Vec<ShapeEdge>,
    /// Chain rendering of the shape such as `∙⇉∙→∙`, when the generating
    /// arrows form a path.
    pub chain: Option<String>,
    pub errors: Vec<Violation>,
}

impl Fanifold {
    pub fn validate(&self) -> ValidationReport {
        let mut errors = vec![];
        let id = |i: usize| self.stratum(i).id.clone();
        let n = self.dimension();
        for s in self.strata() {
            if s.dim + s.codim() != n {
                errors.push(Violation {
                    kind: ViolationKind::Rank,
                    strata: vec![s.id.clone()],
                    detail: format!("dim {} + lattice rank {} != {n}", s.dim, s.codim()),
                });
            }
            let props = s.fan.properties();
            if !props.valid {
                errors.push(Violation {
                    kind: ViolationKind::InvalidFan,
                    strata: vec![s.id.clone()],
                    detail: format!("cones {:?} overlap", props.overlap.expect("witness")),
                });
            }
        }
        for a in self.arrows() {
            let (g, f) = (self.stratum(a.from), self.stratum(a.to));
            let path = vec![g.id.clone(), f.id.clone()];
            if g.interior != f.interior {
                errors.push(Violation {
                    kind: ViolationKind::BoundaryMixing,
                    strata: path.clone(),
                    detail: "arrow joins an interior and an ideal-boundary stratum".into(),
                });
            }
            let sigma = g.fan.cone(a.cone);
            if sigma.dim() + g.dim != f.dim || sigma.is_zero() {
                errors.push(Violation {
                    kind: ViolationKind::ConeDimension,
                    strata: path.clone(),
                    detail: format!("cone of dimension {} between strata of dimension {} and {}", sigma.dim(), g.dim, f.dim),
                });
            }
            let kills = sigma.generators().iter().all(|v| a.quotient.apply(v).map(|w| w.iter().all(|&x| x == 0)).unwrap_or(false));
            if !kills {
                errors.push(Violation {
                    kind: ViolationKind::QuotientKernel,
                    strata: path.clone(),
                    detail: "quotient map does not kill the cone".into(),
                });
            }
            if !a.quotient.is_surjective().unwrap_or(false) {
                errors.push(Violation {
                    kind: ViolationKind::QuotientNotSurjective,
                    strata: path.clone(),
                    detail: "quotient map is not onto the target lattice".into(),
                });
            }
            if kills {
                let same = match g.fan.star_image(a.cone, &a.quotient.matrix) {
                    Ok(images) => images.len() == f.fan.len() && images.iter().all(|c| f.fan.find_cone(c).is_some()),
                    Err(_) => false,
                };
                if !same {
                    errors.push(Violation {
                        kind: ViolationKind::FanImage,
                        strata: path.clone(),
                        detail: "image of the star of the cone differs from the target fan".into(),
                    });
                }
            }
        }
        for (i, s) in self.strata().iter().enumerate() {
            let out = self.arrows_from(i);
            let mut hits = vec![0usize; s.fan.len()];
            for &k in &out {
                hits[self.arrow(k).cone] += 1;
            }
            for (c, &h) in hits.iter().enumerate() {
                let expected = usize::from(!s.fan.cone(c).is_zero());
                if h != expected {
                    errors.push(Violation {
                        kind: ViolationKind::ExitCorrespondence,
                        strata: vec![s.id.clone()],
                        detail: format!("cone {:?} is the cone of {h} outgoing arrows, expected {expected}", s.fan.cone_rays(c)),
                    });
                }
            }
            if !s.fan.cones().iter().any(|c| c.is_zero()) {
                errors.push(Violation {
                    kind: ViolationKind::ExitCorrespondence,
                    strata: vec![s.id.clone()],
                    detail: "fan has no zero cone for the stratum itself".into(),
                });
            }
        }
        let structural = errors.is_empty();
        let mut coherent = true;
        for (ka, a) in self.arrows().iter().enumerate() {
            for kb in self.arrows_from(a.to) {
                let b = self.arrow(kb);
                let path = vec![id(a.from), id(a.to), id(b.to)];
                let Some(kc) = self.compose(ka, kb) else {
                    coherent = false;
                    errors.push(Violation {
                        kind: ViolationKind::MissingComposite,
                        strata: path,
                        detail: "no arrow with a cone containing the first whose image is the second".into(),
                    });
                    continue;
                };
                let c = self.arrow(kc);
                let composite = b.quotient.matrix.mul(&a.quotient.matrix);
                if composite.as_ref() != Ok(&c.quotient.matrix) {
                    coherent = false;
                    errors.push(Violation {
                        kind: ViolationKind::CompositeMap,
                        strata: path,
                        detail: "quotient maps do not compose".into(),
                    });
                }
            }
        }
        let shape = self.shape();
        ValidationReport {
            valid: structural && coherent,
            is_poset: self.is_poset(),
            coherent,
            strata: self.strata().len(),
            arrows: self.arrows().len(),
            chain: chain_string(self, &shape),
            shape,
            errors,
        }
    }

    /// No parallel arrows, no loops, no cycles.
    pub fn is_poset(&self) -> bool {
        let n = self.strata().len();
        let mut seen = std::collections::BTreeSet::new();
        for a in self.arrows() {
            if a.from == a.to || !seen.insert((a.from, a.to)) {
                return false;
            }
        }
        // Kahn's algorithm
        let mut indeg = vec![0usize; n];
        for &(_, t) in &seen {
            indeg[t] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut done = 0;
        while let Some(v) = queue.pop() {
            done += 1;
            for &(s, t) in &seen {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        queue.push(t);
                    }
                }
            }
        }
        done == n
    }

    /// Arrows that are not composites of two others.
    pub fn generating_arrows(&self) -> Vec<usize> {
        let mut composite = vec![false; self.arrows().len()];
        for (ka, a) in self.arrows().iter().enumerate() {
            for kb in self.arrows_from(a.to) {
                if let Some(kc) = self.compose(ka, kb) {
                    composite[kc] = true;
                }
            }
        }
        (0..self.arrows().len()).filter(|&k| !composite[k]).collect()
    }

    pub fn shape(&self) -> Vec<ShapeEdge> {
        let mut edges: Vec<ShapeEdge> = vec![];
        for k in self.generating_arrows() {
            let a = self.arrow(k);
            let (from, to) = (self.stratum(a.from).id.clone(), self.stratum(a.to).id.clone());
            match edges.iter_mut().find(|e| e.from == from && e.to == to) {
                Some(e) => e.count += 1,
                None => edges.push(ShapeEdge { from, to, count: 1 }),
            }
        }
        edges
    }

    /// `q` kills `σ` and is surjective for every arrow, so the identity of
    /// each torus fiber maps to the identity.
    pub fn quotient_maps_are_sections(&self) -> bool {
        self.arrows().iter().all(|a| {
            let sigma = self.stratum(a.from).fan.cone(a.cone);
            sigma.generators().iter().all(|v| a.quotient.apply(v).map(|w| w.iter().all(|&x| x == 0)).unwrap_or(false))
                && a.quotient.is_surjective().unwrap_or(false)
        })
    }
}

fn chain_string(phi: &Fanifold, shape: &[ShapeEdge]) -> Option<String> {
    let n = phi.strata().len();
    if n == 0 {
        return None;
    }
    let ids: Vec<&str> = phi.strata().iter().map(|s| s.id.as_str()).collect();
    let start: Vec<usize> = (0..n).filter(|&i| !shape.iter().any(|e| e.to == ids[i])).collect();
    if start.len() != 1 || shape.len() != n - 1 {
        return None;
    }
    let mut out = String::from("∙");
    let mut cur = start[0];
    for _ in 1..n {
        let next: Vec<&ShapeEdge> = shape.iter().filter(|e| e.from == ids[cur]).collect();
        if next.len() != 1 {
            return None;
        }
        out.push_str(match next[0].count {
            1 => "→",
            2 => "⇉",
            3 => "⇶",
            _ => return None,
        });
        out.push('∙');
        cur = ids.iter().position(|&s| s == next[0].to).expect("edge target");
    }
    Some(out)
}
