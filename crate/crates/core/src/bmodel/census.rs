use super::ToricDiagram;
use crate::fan::dual_box_points;
use crate::fanifold::{FanifoldError, Result};
use crate::lattice::Vector;
use crate::linalg::{q, Echelon, SparseRow, Q};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Laurent polynomial with rational coefficients, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<Vector, Q>);

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn monomial(exp: Vector, coef: i64) -> Poly {
        let mut p = Poly::zero();
        p.add_term(exp, q(coef));
        p
    }

    pub fn constant(rank: usize, c: i64) -> Poly {
        Poly::monomial(vec![0; rank], c)
    }

    /// Sum of `coef · x^exp` over the given terms.
    pub fn from_terms(terms: &[(i64, Vector)]) -> Poly {
        let mut p = Poly::zero();
        for (c, e) in terms {
            p.add_term(e.clone(), q(*c));
        }
        p
    }

    pub fn add_term(&mut self, exp: Vector, coef: Q) {
        let sum = self.0.remove(&exp).unwrap_or_else(Q::zero) + coef;
        if !sum.is_zero() {
            self.0.insert(exp, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &other.0 {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(e, v)| (e.clone(), v * c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                p.add_term(a.iter().zip(b).map(|(i, j)| i + j).collect(), x * y);
            }
        }
        p
    }
}

/// Compatible family of polynomials, one per chart of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section(pub Vec<Poly>);

impl Section {
    /// Pushes seed polynomials along the diagram arrows until every chart is
    /// assigned. Fails on conflicting images or on charts left unreached.
    pub fn from_seeds(diagram: &ToricDiagram, seeds: &[(usize, Poly)]) -> Result<Section> {
        let n = diagram.objects.len();
        let mut value: Vec<Option<Poly>> = vec![None; n];
        let mut queue = vec![];
        for (o, p) in seeds {
            if *o >= n {
                return Err(FanifoldError::Structure(format!("no chart with index {o}")));
            }
            value[*o] = Some(p.clone());
            queue.push(*o);
        }
        while let Some(o) = queue.pop() {
            for a in diagram.arrows.iter().filter(|a| a.from == o) {
                let img = image(value[o].as_ref().expect("assigned"), a);
                match &value[a.to] {
                    Some(v) if *v != img => {
                        return Err(FanifoldError::Invalid(format!("seeds disagree on chart {}", diagram.objects[a.to].label())));
                    }
                    Some(_) => {}
                    None => {
                        value[a.to] = Some(img);
                        queue.push(a.to);
                    }
                }
            }
        }
        let out: Option<Vec<Poly>> = value.into_iter().collect();
        let s = Section(out.ok_or_else(|| FanifoldError::Invalid("seeds do not determine every chart".into()))?);
        if let Some(a) = s.first_incompatible(diagram) {
            let a = &diagram.arrows[a];
            return Err(FanifoldError::Invalid(format!(
                "section is not compatible from {} to {}",
                diagram.objects[a.from].label(),
                diagram.objects[a.to].label()
            )));
        }
        Ok(s)
    }

    pub fn first_incompatible(&self, diagram: &ToricDiagram) -> Option<usize> {
        diagram.arrows.iter().position(|a| image(&self.0[a.from], a) != self.0[a.to])
    }

    pub fn mul(&self, other: &Section) -> Section {
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a.mul(b)).collect())
    }

    pub fn one(diagram: &ToricDiagram) -> Section {
        Section(diagram.objects.iter().map(|o| Poly::constant(o.rank(), 1)).collect())
    }
}

fn image(p: &Poly, arrow: &super::ChartArrow) -> Poly {
    let mut out = Poly::zero();
    for (u, c) in &p.0 {
        if let Some(w) = arrow.apply(u) {
            out.add_term(w, c.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionCensus {
    pub degree: i64,
    pub supports: Vec<usize>,
    pub variables: usize,
    pub equations: usize,
    pub dimension: usize,
    pub warning: Option<String>,
}

/// Variables `c_X(u)` for box monomials `u` of each chart, with the
/// compatibility equations already reduced.
struct System {
    supports: Vec<Vec<Vector>>,
    index: Vec<HashMap<Vector, usize>>,
    echelon: Echelon,
    equations: usize,
}

impl System {
    fn build(diagram: &ToricDiagram, degree: i64) -> System {
        let supports: Vec<Vec<Vector>> = diagram.objects.iter().map(|o| dual_box_points(&o.cone, degree)).collect();
        let mut index = vec![];
        let mut n = 0;
        for s in &supports {
            index.push(s.iter().enumerate().map(|(k, u)| (u.clone(), n + k)).collect::<HashMap<_, _>>());
            n += s.len();
        }
        let mut echelon = Echelon::new(n);
        let mut equations = 0;
        for a in &diagram.arrows {
            let mut fibres: BTreeMap<Vector, Vec<usize>> = BTreeMap::new();
            for u in &supports[a.from] {
                if let Some(w) = a.apply(u) {
                    fibres.entry(w).or_default().push(index[a.from][u]);
                }
            }
            let targets: BTreeSet<Vector> = fibres.keys().cloned().chain(supports[a.to].iter().cloned()).collect();
            for w in targets {
                let mut row = SparseRow::new();
                for &v in fibres.get(&w).into_iter().flatten() {
                    row.insert(v, Q::one());
                }
                if let Some(&v) = index[a.to].get(&w) {
                    row.insert(v, -Q::one());
                }
                if !row.is_empty() {
                    equations += 1;
                    echelon.insert(row);
                }
            }
        }
        System { supports, index, echelon, equations }
    }

    fn variables(&self) -> usize {
        self.echelon.ncols()
    }

    /// Coordinates of the truncation of a section to the box.
    fn coordinates(&self, s: &Section) -> SparseRow {
        let mut row = SparseRow::new();
        for (o, p) in s.0.iter().enumerate() {
            for (u, c) in &p.0 {
                if let Some(&v) = self.index[o].get(u) {
                    row.insert(v, c.clone());
                }
            }
        }
        row
    }
}

/// Dimension of the space of compatible coefficient tuples on the box
/// supports of degree `D`.
pub fn limit_census(diagram: &ToricDiagram, degree: i64) -> Result<SectionCensus> {
    if degree < 0 {
        return Err(FanifoldError::Structure("degree must be nonnegative".into()));
    }
    let sys = System::build(diagram, degree);
    let n = sys.variables();
    Ok(SectionCensus {
        degree,
        supports: sys.supports.iter().map(|s| s.len()).collect(),
        variables: n,
        equations: sys.equations,
        dimension: n - sys.echelon.rank(),
        warning: (n == 0).then(|| "no monomials in any chart support".to_string()),
    })
}

/// Integer polynomial in the generators: `Σ coef · g^α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation(pub Vec<(i64, Vec<u32>)>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub holds: bool,
    /// Chart, monomial and coefficient of a surviving term.
    pub counterexample: Option<(String, Vector, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubalgebraReport {
    pub degree: i64,
    pub relations: Vec<RelationCheck>,
    pub census_dimension: usize,
    pub span_rank: usize,
    pub spans: bool,
    pub gap: usize,
    pub max_power: usize,
}

fn power(generators: &[Section], alpha: &[u32], one: &Section, cache: &mut HashMap<Vec<u32>, Section>) -> Section {
    if let Some(s) = cache.get(alpha) {
        return s.clone();
    }
    let Some(j) = alpha.iter().position(|&a| a > 0) else { return one.clone() };
    let mut lower = alpha.to_vec();
    lower[j] -= 1;
    let s = power(generators, &lower, one, cache).mul(&generators[j]);
    cache.insert(alpha.to_vec(), s.clone());
    s
}

/// Checks relations exactly and compares the span of all products of at most
/// `D · (max chart rank)` generators, truncated to the box, with the census.
pub fn subalgebra_check(diagram: &ToricDiagram, generators: &[Section], relations: &[Relation], degree: i64) -> Result<SubalgebraReport> {
    for (k, g) in generators.iter().enumerate() {
        if g.0.len() != diagram.objects.len() {
            return Err(FanifoldError::Structure(format!("generator {k} has the wrong number of charts")));
        }
        if let Some(a) = g.first_incompatible(diagram) {
            return Err(FanifoldError::Invalid(format!("generator {k} is not compatible along arrow {a}")));
        }
    }
    let one = Section::one(diagram);
    let mut cache = HashMap::new();
    let mut checks = vec![];
    for r in relations {
        let mut total = Section(vec![Poly::zero(); diagram.objects.len()]);
        for (c, alpha) in &r.0 {
            if alpha.len() != generators.len() {
                return Err(FanifoldError::Structure("relation exponent has the wrong length".into()));
            }
            let term = power(generators, alpha, &one, &mut cache);
            total = Section(total.0.iter().zip(&term.0).map(|(a, b)| a.add(&b.scale(&q(*c)))).collect());
        }
        let counterexample = total
            .0
            .iter()
            .enumerate()
            .find_map(|(o, p)| p.0.iter().next().map(|(u, c)| (diagram.objects[o].label(), u.clone(), c.to_string())));
        checks.push(RelationCheck { holds: counterexample.is_none(), counterexample });
    }
    let sys = System::build(diagram, degree);
    let census_dimension = sys.variables() - sys.echelon.rank();
    let max_rank = diagram.objects.iter().map(|o| o.rank()).max().unwrap_or(0);
    let max_power = (degree as usize) * max_rank.max(1);
    let mut span = Echelon::new(sys.variables());
    let mut alpha = vec![0u32; generators.len()];
    loop {
        span.insert(sys.coordinates(&power(generators, &alpha, &one, &mut cache)));
        if !next_exponent(&mut alpha, max_power as u32) {
            break;
        }
    }
    let span_rank = span.rank();
    // products must lie in the compatible space: adding its basis changes nothing
    let mut joint = span.clone();
    for v in sys.echelon.nullspace() {
        joint.insert(crate::linalg::dense_to_sparse(&v));
    }
    let contained = joint.rank() == census_dimension;
    Ok(SubalgebraReport {
        degree,
        relations: checks,
        census_dimension,
        span_rank,
        spans: contained && span_rank == census_dimension,
        gap: census_dimension.saturating_sub(span_rank),
        max_power,
    })
}

/// Steps through exponent vectors with total at most `max`.
fn next_exponent(alpha: &mut [u32], max: u32) -> bool {
    for i in 0..alpha.len() {
        alpha[i] += 1;
        if alpha.iter().sum::<u32>() <= max {
            return true;
        }
        alpha[i] = 0;
    }
    false
}
