use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::Q;

/// A sparse row: `(column, value)` pairs, strictly increasing columns,
/// no stored zeros.
pub type SparseRow = Vec<(usize, Q)>;

/// Sparse matrix over the rationals, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Q::one())]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions
    /// are summed and zeros dropped.
    pub fn from_triples(rows: usize, cols: usize, triples: impl IntoIterator<Item = (usize, usize, Q)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triples {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc[r].entry(c).or_insert_with(Q::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect()
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given sparse vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[SparseRow]) -> Self {
        let mut data: Vec<SparseRow> = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                data[*r].push((c, v.clone()));
            }
        }
        SparseMatrix { rows, cols: columns.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseRow {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        match self.data[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Columns as sparse vectors.
    pub fn columns(&self) -> Vec<SparseRow> {
        self.transpose().data
    }

    pub fn scale(&self, c: &Q) -> SparseMatrix {
        if c.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        let data = self.data.iter().map(|row| row.iter().map(|(k, v)| (*k, v * c)).collect()).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &Q::one(), b)).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_insert_with(Q::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, data }
    }

    /// `self * v` for a sparse column vector `v`.
    pub fn apply(&self, v: &SparseRow) -> SparseRow {
        let dense: BTreeMap<usize, &Q> = v.iter().map(|(k, x)| (*k, x)).collect();
        let mut out = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut s = Q::zero();
            for (c, a) in row {
                if let Some(x) = dense.get(c) {
                    s += a * *x;
                }
            }
            if !s.is_zero() {
                out.push((r, s));
            }
        }
        out
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for row in &self.data {
            ech.insert(row.clone());
        }
        ech.rank()
    }

    /// Basis of the null space `{v : self * v = 0}`, as dense vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        self.kernel_sparse()
            .into_iter()
            .map(|v| {
                let mut d = vec![Q::zero(); self.cols];
                for (k, x) in v {
                    d[k] = x;
                }
                d
            })
            .collect()
    }

    /// Basis of the null space as sparse vectors.
    pub fn kernel_sparse(&self) -> Vec<SparseRow> {
        let mut ech = Echelon::new(self.cols);
        for row in &self.data {
            ech.insert(row.clone());
        }
        ech.reduce_fully();
        let pivots: BTreeMap<usize, &SparseRow> = ech.pivot_rows().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains_key(&free) {
                continue;
            }
            // x_free = 1, x_pivot = -row_pivot[free]
            let mut v: BTreeMap<usize, Q> = BTreeMap::new();
            v.insert(free, Q::one());
            for (p, row) in &pivots {
                if let Ok(i) = row.binary_search_by_key(&free, |(k, _)| *k) {
                    v.insert(*p, -row[i].1.clone());
                }
            }
            basis.push(v.into_iter().collect());
        }
        basis
    }

    /// Rank of the matrix with entries reduced modulo the prime `p`.
    /// Entries with denominators divisible by `p` make the result
    /// meaningless; callers pick `p` large.
    pub fn rank_mod_p(&self, p: u64) -> usize {
        let to_mod = |x: &Q| -> u64 {
            let pb = num_bigint::BigInt::from(p);
            let n = ((x.numer() % &pb) + &pb) % &pb;
            let d = ((x.denom() % &pb) + &pb) % &pb;
            let n: u64 = n.try_into().unwrap();
            let d: u64 = d.try_into().unwrap();
            mulmod(n, powmod(d, p - 2, p), p)
        };
        let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
        for row in &self.data {
            let mut work: BTreeMap<usize, u64> =
                row.iter().map(|(k, v)| (*k, to_mod(v))).filter(|(_, v)| *v != 0).collect();
            while let Some((&c, &v)) = work.iter().find(|(c, _)| pivots.contains_key(c)) {
                let prow = &pivots[&c];
                for (k, pv) in prow {
                    let e = work.entry(*k).or_insert(0);
                    *e = (*e + p - mulmod(v, *pv, p)) % p;
                }
                work.retain(|_, x| *x != 0);
            }
            if let Some((&lead, &lv)) = work.iter().next() {
                let inv = powmod(lv, p - 2, p);
                let r = work.into_iter().map(|(k, x)| (k, mulmod(x, inv, p))).collect();
                pivots.insert(lead, r);
            }
        }
        pivots.len()
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// `a + c * b` on sparse rows.
pub(crate) fn axpy(a: &SparseRow, c: &Q, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = c * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form. Rows are inserted one at a time and
/// reduced against the current pivots; every stored row is normalised to
/// have leading coefficient 1 at its pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, pivots: BTreeMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the pivots: the result has no entries in any
    /// pivot column.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut work = row.clone();
        let mut idx = 0;
        while idx < work.len() {
            let (c, v) = (work[idx].0, work[idx].1.clone());
            if let Some(prow) = self.pivots.get(&c) {
                work = axpy(&work, &(-v), prow);
                // entry at c is now gone; entries before idx unchanged
            } else {
                idx += 1;
            }
        }
        work
    }

    /// Inserts a row; returns `true` when it was independent of the span.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let r = self.reduce(&row);
        match r.first() {
            None => false,
            Some((lead, lv)) => {
                let inv = lv.recip();
                let lead = *lead;
                let r: SparseRow = r.into_iter().map(|(k, v)| (k, v * &inv)).collect();
                self.pivots.insert(lead, r);
                true
            }
        }
    }

    /// Whether `row` lies in the span.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Back-substitutes so every pivot column is zero in all other rows.
    pub fn reduce_fully(&mut self) {
        let keys: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for (n, &p) in keys.iter().enumerate() {
            // rows with larger pivots are already reduced
            let prow = self.pivots[&p].clone();
            let mut reduced = vec![prow[0].clone()];
            let tail: SparseRow = prow[1..].to_vec();
            let mut tail_red = tail;
            for &q in keys[..n].iter() {
                if let Ok(i) = tail_red.binary_search_by_key(&q, |(k, _)| *k) {
                    let v = tail_red[i].1.clone();
                    tail_red = axpy(&tail_red, &(-v), &self.pivots[&q]);
                }
            }
            reduced.extend(tail_red);
            self.pivots.insert(p, reduced);
        }
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> {
        self.pivots.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q_int;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(SparseMatrix::zero(4, 4).rank(), 0);
        assert_eq!(SparseMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
    }

    #[test]
    fn kernel_small_cases() {
        assert!(SparseMatrix::identity(2).kernel_basis().is_empty());
        assert_eq!(SparseMatrix::zero(1, 3).kernel_basis().len(), 3);
        let k = m(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0].clone() + k[0][1].clone(), q_int(0));
        assert!(k[0][0] != q_int(0));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 0, -1], &[0, 1, 1, 1], &[1, 3, 1, 0]]);
        for v in a.kernel_sparse() {
            assert!(a.apply(&v).is_empty());
        }
        assert_eq!(a.rank() + a.kernel_basis().len(), 4);
    }

    #[test]
    fn reduce_fully_clears_pivot_columns() {
        let a = m(&[&[1, 1, 1], &[0, 1, 2], &[1, 0, 5]]);
        let mut e = Echelon::new(3);
        for r in 0..3 {
            e.insert(a.row(r).clone());
        }
        e.reduce_fully();
        let pivots: Vec<usize> = e.pivot_rows().map(|(p, _)| p).collect();
        for (p, row) in e.pivot_rows() {
            for (c, _) in row {
                assert!(*c == p || !pivots.contains(c));
            }
        }
    }
}
