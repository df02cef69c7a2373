//! Exact rational linear algebra.
//!
//! Everything here works over `BigRational`. Dense matrices are used for the
//! small Gram systems; [`SparseVec`] and [`Echelon`] carry the algebra's
//! coefficient vectors, which touch few basis elements at a time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("system is inconsistent")]
    Inconsistent,
    #[error("form is degenerate on the subspace (radical dimension {radical})")]
    Degenerate { radical: usize },
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Q::one())] }
    }

    pub fn single(i: usize, c: Q) -> Self {
        if c.is_zero() {
            Self::new()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    /// Builds from unsorted pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(it: I) -> Self {
        let mut m: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, c) in it {
            *m.entry(i).or_insert_with(Q::zero) += c;
        }
        Self::from_map(m)
    }

    pub fn from_map(m: BTreeMap<usize, Q>) -> Self {
        SparseVec { entries: m.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Q]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); len];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Q)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<&(usize, Q)> {
        self.entries.first()
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn scale(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &SparseVec, c: &Q) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + y * c;
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &-Q::one())
    }

    pub fn neg(&self) -> SparseVec {
        self.scale(&-Q::one())
    }

    /// Keeps only the entries whose index satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> SparseVec {
        SparseVec { entries: self.entries.iter().filter(|(i, _)| keep(*i)).cloned().collect() }
    }
}

/// Accumulator for many sparse additions.
#[derive(Default)]
pub struct Accum {
    map: BTreeMap<usize, Q>,
}

impl Accum {
    pub fn new() -> Self {
        Accum { map: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        *self.map.entry(i).or_insert_with(Q::zero) += c;
    }

    pub fn add_vec(&mut self, v: &SparseVec, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            self.add(*i, x * c);
        }
    }

    pub fn finish(self) -> SparseVec {
        SparseVec::from_map(self.map)
    }
}

/// Exact rational for JSON output. Numerator and denominator are written as
/// integers when they fit in an `i64` and as decimal strings otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatDoc {
    pub num: String,
    pub den: String,
}

impl serde::Serialize for RatDoc {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("RatDoc", 2)?;
        for (key, v) in [("num", &self.num), ("den", &self.den)] {
            match v.parse::<i64>() {
                Ok(n) => st.serialize_field(key, &n)?,
                Err(_) => st.serialize_field(key, v)?,
            }
        }
        st.end()
    }
}

impl From<&Q> for RatDoc {
    fn from(x: &Q) -> Self {
        RatDoc { num: x.numer().to_string(), den: x.denom().to_string() }
    }
}

impl RatDoc {
    pub fn to_q(&self) -> Option<Q> {
        let n: num_bigint::BigInt = self.num.parse().ok()?;
        let d: num_bigint::BigInt = self.den.parse().ok()?;
        (d != num_bigint::BigInt::from(0)).then(|| Q::new(n, d))
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LaError> {
        if self.cols != other.rows {
            return Err(LaError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = m.get(i, j) + a * b;
                        m.set(i, j, cur);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>, LaError> {
        if self.cols != v.len() {
            return Err(LaError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        s += a * x;
                    }
                }
                s
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |s, i| s + self.get(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let x = m.get(r, j);
                    if !x.is_zero() {
                        let y = m.get(i, j) - &f * x;
                        m.set(i, j, y);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<Q, LaError> {
        if self.rows != self.cols {
            return Err(LaError::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Q::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let y = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, y);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, LaError> {
        if self.rows != self.cols {
            return Err(LaError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LaError::Degenerate { radical: n - pivots.iter().filter(|&&p| p < n).count() });
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Solves `self * X = rhs` for a matrix right-hand side with a unique solution.
    pub fn solve_many(&self, rhs: &Matrix) -> Result<Matrix, LaError> {
        if self.rows != rhs.rows {
            return Err(LaError::DimensionMismatch("row counts differ".into()));
        }
        let (n, k) = (self.cols, rhs.cols);
        let mut aug = Matrix::zeros(self.rows, n + k);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..k {
                aug.set(i, n + j, rhs.get(i, j).clone());
            }
        }
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= n) {
            return Err(LaError::Inconsistent);
        }
        if pivots.len() < n {
            return Err(LaError::Degenerate { radical: n - pivots.len() });
        }
        let mut x = Matrix::zeros(n, k);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..k {
                x.set(p, j, r.get(row, n + j).clone());
            }
        }
        Ok(x)
    }
}

/// Result of [`solve`]: one particular solution and a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Q>,
    pub kernel: Vec<Vec<Q>>,
}

/// Solves `a * x = b`, returning a particular solution and the kernel of `a`.
pub fn solve(a: &Matrix, b: &[Q]) -> Result<Solution, LaError> {
    if a.rows != b.len() {
        return Err(LaError::DimensionMismatch(format!(
            "{} rows but right-hand side of length {}",
            a.rows,
            b.len()
        )));
    }
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return Err(LaError::Inconsistent);
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, n).clone();
    }
    Ok(Solution { x, kernel: a.kernel() })
}

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    pub gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Result<Self, LaError> {
        if !gram.is_symmetric() {
            return Err(LaError::DimensionMismatch("Gram matrix is not symmetric".into()));
        }
        Ok(BilinearForm { gram })
    }

    pub fn eval(&self, u: &[Q], v: &[Q]) -> Q {
        let gv = self.gram.mul_vec(v).expect("dimension");
        u.iter().zip(&gv).fold(Q::zero(), |s, (a, b)| s + a * b)
    }

    /// Returns `v` minus its form-orthogonal projection onto the row span of `basis`.
    pub fn project_orthogonal(&self, basis: &Matrix, v: &[Q]) -> Result<Vec<Q>, LaError> {
        if basis.cols != self.gram.rows || v.len() != self.gram.rows {
            return Err(LaError::DimensionMismatch("basis or vector does not match the form".into()));
        }
        let k = basis.rows;
        if k == 0 {
            return Ok(v.to_vec());
        }
        let gb = self.gram.mul(&basis.transpose())?;
        let restricted = basis.mul(&gb)?;
        let rank = restricted.rank();
        if rank < k {
            return Err(LaError::Degenerate { radical: k - rank });
        }
        let rhs: Vec<Q> = (0..k).map(|i| self.eval(&basis.row(i), v)).collect();
        let coeffs = solve(&restricted, &rhs)?.x;
        let mut out = v.to_vec();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, x) in basis.row(i).iter().enumerate() {
                out[j] -= c * x;
            }
        }
        Ok(out)
    }
}

/// Incremental row echelon basis of sparse vectors.
///
/// Stored rows have leading coefficient 1 and no other row has a nonzero entry
/// at their pivot, so reduction is a single pass.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut cur = v.clone();
        for (p, row) in &self.rows {
            let c = cur.get(*p);
            if !c.is_zero() {
                cur = cur.add_scaled(row, &-c);
            }
        }
        cur
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns the reduced remainder when it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let r = self.reduce(v);
        let (p, lead) = r.leading()?.clone();
        let row = r.scale(&lead.recip());
        for other in self.rows.values_mut() {
            let c = other.get(p);
            if !c.is_zero() {
                *other = other.add_scaled(&row, &-c);
            }
        }
        self.rows.insert(p, row.clone());
        Some(row)
    }
}

/// Echelon basis that remembers how each row combines the inserted vectors,
/// so a vector in the span can be written in terms of them.
#[derive(Clone, Debug, Default)]
pub struct TaggedEchelon {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    count: usize,
}

impl TaggedEchelon {
    pub fn new() -> Self {
        TaggedEchelon { rows: BTreeMap::new(), count: 0 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.count
    }

    /// Inserts `v` with tag `self.inserted()`; returns false on dependence.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let tag = self.count;
        self.count += 1;
        let (r, comb) = self.reduce(v);
        let Some((p, lead)) = r.leading().cloned() else {
            return false;
        };
        let comb = SparseVec::unit(tag).sub(&comb);
        let inv = lead.recip();
        let (row, comb) = (r.scale(&inv), comb.scale(&inv));
        for (other, ocomb) in self.rows.values_mut() {
            let c = other.get(p);
            if !c.is_zero() {
                *other = other.add_scaled(&row, &-c.clone());
                *ocomb = ocomb.add_scaled(&comb, &-c);
            }
        }
        self.rows.insert(p, (row, comb));
        true
    }

    /// Returns the remainder and the coefficients over inserted vectors of the
    /// part that was removed.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut cur = v.clone();
        let mut comb = SparseVec::new();
        for (p, (row, rc)) in &self.rows {
            let c = cur.get(*p);
            if !c.is_zero() {
                cur = cur.add_scaled(row, &-c.clone());
                comb = comb.add_scaled(rc, &c);
            }
        }
        (cur, comb)
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
