//! Integer lattices, lattice maps and Smith normal form.
//!
//! All arithmetic is `i64` with checked operations; overflow surfaces as
//! [`LatticeError::Overflow`] instead of wrapping.

use serde::{Deserialize, Serialize};
use std::fmt;

pub type Vector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(LatticeError::Overflow("addition"))
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(LatticeError::Overflow("multiplication"))
}

fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(LatticeError::Overflow("negation"))
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// Primitive vector on the same ray and the positive multiplier. The zero
/// vector maps to itself with multiplier 0.
pub fn primitive(v: &[i64]) -> (Vector, i64) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        return (v.to_vec(), 0);
    }
    (v.iter().map(|x| x / g).collect(), g)
}

pub fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0i64;
    for (x, y) in a.iter().zip(b) {
        s = add(s, mul(*x, *y)?)?;
    }
    Ok(s)
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vector], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LatticeError::Dimension(format!(
                    "row {i} has length {} but {cols} columns expected",
                    r.len()
                )));
            }
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        Ok(m)
    }

    /// Builds a `rows × cols.len()` matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(LatticeError::Dimension(format!(
                    "column {j} has length {} but {rows} rows expected",
                    c.len()
                )));
            }
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        Ok(m)
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[i64]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, *d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(LatticeError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add(out.get(i, j), mul(a, other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(LatticeError::Dimension(format!(
                "vector of length {} applied to {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> IntMatrix {
        IntMatrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_block(&self, start: usize, end: usize) -> IntMatrix {
        let mut m = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m.set(i, j - start, self.get(i, j));
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    /// Determinant by fraction-free elimination; square matrices only.
    pub fn determinant(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(LatticeError::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return Ok(0);
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                        .ok_or(LatticeError::Overflow("determinant"))?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = a[k * n + k];
        }
        i64::try_from(sign * a[n * n - 1]).map_err(|_| LatticeError::Overflow("determinant"))
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Ok(1) | Ok(-1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: i64) -> Result<()> {
        if f == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let v = add(self.get(dst, j), mul(f, self.get(src, j))?)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: i64) -> Result<()> {
        if f == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let v = add(self.get(i, dst), mul(f, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) -> Result<()> {
        for j in 0..self.cols {
            let v = neg(self.get(r, j))?;
            self.set(r, j, v);
        }
        Ok(())
    }

    fn negate_col(&mut self, c: usize) -> Result<()> {
        for i in 0..self.rows {
            let v = neg(self.get(i, c))?;
            self.set(i, c, v);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    pub rank: usize,
}

impl Lattice {
    pub fn new(rank: usize) -> Self {
        Lattice { rank }
    }
}

/// Linear map between lattices; `matrix` is `target.rank × source.rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeMap {
    pub source: Lattice,
    pub target: Lattice,
    pub matrix: IntMatrix,
}

impl LatticeMap {
    pub fn new(source: Lattice, target: Lattice, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return Err(LatticeError::Dimension(format!(
                "matrix is {}x{} but map is rank {} -> rank {}",
                matrix.rows(),
                matrix.cols(),
                source.rank,
                target.rank
            )));
        }
        Ok(LatticeMap { source, target, matrix })
    }

    pub fn identity(l: Lattice) -> Self {
        LatticeMap { source: l, target: l, matrix: IntMatrix::identity(l.rank) }
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vector> {
        self.matrix.apply(v)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.target != other.source {
            return Err(LatticeError::Dimension("composing incompatible maps".into()));
        }
        LatticeMap::new(self.source, other.target, other.matrix.mul(&self.matrix)?)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.rank == self.target.rank && self.matrix.is_unimodular()
    }

    /// Surjective onto the target lattice (all invariant factors 1, full row rank).
    pub fn is_surjective(&self) -> Result<bool> {
        let snf = smith_normal_form(&self.matrix)?;
        Ok(snf.rank() == self.target.rank && snf.invariant_factors().iter().all(|&d| d == 1))
    }
}

/// `A = U·D·V` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | …`.
/// The inverses are tracked alongside so callers never need to invert.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .take_while(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with the smallest-absolute-value pivot rule and
/// row-then-column elimination.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SnfResult> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Row op E on D: D <- E D, U_inv <- E U_inv, U <- U E^{-1}.
    // Column op F on D: D <- D F, V_inv <- V_inv F, V <- F^{-1} V.
    let row_swap = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, a: usize, b: usize| {
        d.swap_rows(a, b);
        ui.swap_rows(a, b);
        u.swap_cols(a, b);
    };
    let col_swap = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a: usize, b: usize| {
        d.swap_cols(a, b);
        vi.swap_cols(a, b);
        v.swap_rows(a, b);
    };
    // row[dst] += f row[src]; inverse subtracts, acting on U's columns.
    fn row_add(
        d: &mut IntMatrix,
        u: &mut IntMatrix,
        ui: &mut IntMatrix,
        dst: usize,
        src: usize,
        f: i64,
    ) -> Result<()> {
        d.add_row(dst, src, f)?;
        ui.add_row(dst, src, f)?;
        u.add_col(src, dst, neg(f)?)
    }
    fn col_add(
        d: &mut IntMatrix,
        v: &mut IntMatrix,
        vi: &mut IntMatrix,
        dst: usize,
        src: usize,
        f: i64,
    ) -> Result<()> {
        d.add_col(dst, src, f)?;
        vi.add_col(dst, src, f)?;
        v.add_row(src, dst, neg(f)?)
    }

    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero |entry| in the trailing block, first in row-major order
        let mut best: Option<(usize, usize, i64)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if x != 0 && best.is_none_or(|(_, _, b)| x.unsigned_abs() < b.unsigned_abs()) {
                    best = Some((i, j, x));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        row_swap(&mut d, &mut u, &mut u_inv, t, pi);
        col_swap(&mut d, &mut v, &mut v_inv, t, pj);

        loop {
            let mut dirty = false;
            // rows below the pivot
            for i in t + 1..m {
                let x = d.get(i, t);
                if x != 0 {
                    let q = x.div_euclid(d.get(t, t));
                    row_add(&mut d, &mut u, &mut u_inv, i, t, neg(q)?)?;
                    if d.get(i, t) != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let p = (t..m)
                    .filter(|&i| d.get(i, t) != 0)
                    .min_by_key(|&i| d.get(i, t).unsigned_abs())
                    .expect("nonzero entry exists");
                row_swap(&mut d, &mut u, &mut u_inv, t, p);
                continue;
            }
            // columns right of the pivot
            for j in t + 1..n {
                let x = d.get(t, j);
                if x != 0 {
                    let q = x.div_euclid(d.get(t, t));
                    col_add(&mut d, &mut v, &mut v_inv, j, t, neg(q)?)?;
                    if d.get(t, j) != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let p = (t..n)
                    .filter(|&j| d.get(t, j) != 0)
                    .min_by_key(|&j| d.get(t, j).unsigned_abs())
                    .expect("nonzero entry exists");
                col_swap(&mut d, &mut v, &mut v_inv, t, p);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let piv = d.get(t, t);
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d.get(i, j) % piv != 0));
            match bad {
                Some(i) => row_add(&mut d, &mut u, &mut u_inv, t, i, 1)?,
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t)?;
            u_inv.negate_row(t)?;
            u.negate_col(t)?;
        }
        t += 1;
    }
    Ok(SnfResult { u, d, v, u_inv, v_inv })
}

pub fn rank(rows: &[Vector], cols: usize) -> Result<usize> {
    Ok(smith_normal_form(&IntMatrix::from_rows(rows, cols)?)?.rank())
}

/// Saturated integer basis of `{x : A x = 0}` for `A` given by rows.
pub fn integer_kernel(rows: &[Vector], cols: usize) -> Result<Vec<Vector>> {
    let a = IntMatrix::from_rows(rows, cols)?;
    let snf = smith_normal_form(&a)?;
    // A · V_inv = U · D, whose columns past the rank vanish.
    Ok((snf.rank()..cols).map(|j| snf.v_inv.col(j)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientResult {
    pub free_quotient: Lattice,
    /// Invariant factors greater than one.
    pub torsion: Vec<i64>,
    /// Projection `M → free quotient`; kernel is the saturated span.
    pub projection: LatticeMap,
    /// Right inverse of the projection (`projection · section = I`).
    pub section: IntMatrix,
}

impl QuotientResult {
    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }
}

/// Quotient of `M` by the span of `vectors`: free part plus torsion.
pub fn quotient_with_torsion(m: Lattice, vectors: &[Vector]) -> Result<QuotientResult> {
    let a = IntMatrix::from_cols(m.rank, vectors)?;
    let snf = smith_normal_form(&a)?;
    let r = snf.rank();
    let torsion = snf.invariant_factors().into_iter().filter(|&d| d > 1).collect();
    let proj = snf.u_inv.row_block(r, m.rank);
    let section = snf.u.col_block(r, m.rank);
    Ok(QuotientResult {
        free_quotient: Lattice::new(m.rank - r),
        torsion,
        projection: LatticeMap::new(m, Lattice::new(m.rank - r), proj)?,
        section,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annihilator {
    /// Basis of `{u ∈ M^∨ : ⟨u, v⟩ = 0}` as dual row vectors.
    pub basis: Vec<Vector>,
    /// Torsion invariants of `M / span(vectors)`.
    pub component_group: Vec<i64>,
}

impl Annihilator {
    pub fn group_order(&self) -> i64 {
        self.component_group.iter().product()
    }
}

pub fn annihilator(m: Lattice, vectors: &[Vector]) -> Result<Annihilator> {
    // u^T A = 0 iff u lies in the span of the rows of U^{-1} past the rank,
    // which are exactly the rows of the quotient projection.
    let q = quotient_with_torsion(m, vectors)?;
    Ok(Annihilator { basis: q.projection.matrix.to_rows(), component_group: q.torsion })
}
