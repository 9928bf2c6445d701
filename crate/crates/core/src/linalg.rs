//! Sparse exact linear algebra over ℚ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub type SparseRow = BTreeMap<usize, Q>;

/// Incremental row echelon form. Rows are inserted one at a time and reduced
/// against the pivots already present; each stored pivot row has leading
/// coefficient 1.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)).map(|(c, v)| (*c, v.clone()));
            let Some((c, f)) = next else { break };
            let p = &self.pivots[&c];
            for (j, v) in p {
                let e = row.entry(*j).or_insert_with(Q::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(j);
                }
            }
            cursor = c + 1;
        }
        row
    }

    /// Inserts a row; returns true when it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&lead, lv)) = row.iter().next() else { return false };
        let inv = lv.recip();
        let row: SparseRow = row.into_iter().map(|(j, v)| (j, v * &inv)).collect();
        self.pivots.insert(lead, row);
        true
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Basis of the solution space of `row · x = 0` for all inserted rows.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        // back-substitute into reduced form
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let later: Vec<(usize, Q)> = r
                .iter()
                .filter(|(j, _)| **j != lead && reduced.contains_key(j))
                .map(|(j, v)| (*j, v.clone()))
                .collect();
            for (j, f) in later {
                for (k, v) in &reduced[&j] {
                    let e = r.entry(*k).or_insert_with(Q::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        r.remove(k);
                    }
                }
            }
            reduced.insert(lead, r);
        }
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.ncols];
                x[f] = Q::one();
                for (&lead, r) in &reduced {
                    if let Some(v) = r.get(&f) {
                        x[lead] = -v.clone();
                    }
                }
                x
            })
            .collect()
    }
}

pub fn rank_of(rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn dense_to_sparse(v: &[Q]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Rational vector scaled to a primitive integer vector with positive leading entry.
pub fn clear_denominators(v: &[Q]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap_or_else(BigInt::one);
    ints.into_iter().map(|x| x / &g * &sign).collect()
}
