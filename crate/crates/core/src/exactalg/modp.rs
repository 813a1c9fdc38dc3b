//! Sparse linear algebra over the prime field `F_p`, `p = 2^61 - 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{SparseRow, Q};

pub const PRIME: u64 = (1 << 61) - 1;

pub type ModRow = Vec<(usize, u64)>;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        PRIME - a
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    assert!(a != 0, "division by zero mod p");
    pow(a, PRIME - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = n.mod_floor(&p);
    debug_assert!(!r.is_negative());
    r.to_u64().unwrap()
}

/// Image of a rational number; `None` if its denominator vanishes mod p.
pub fn reduce(q: &Q) -> Option<u64> {
    let d = reduce_int(q.denom());
    if d == 0 {
        return None;
    }
    Some(mul(reduce_int(q.numer()), inv(d)))
}

pub fn reduce_row(row: &SparseRow) -> ModRow {
    row.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (*k, reduce(v).expect("denominator divisible by the working prime")))
        .filter(|(_, v)| *v != 0)
        .collect()
}

/// `x + c*y` on sorted sparse rows.
fn axpy(x: &ModRow, c: u64, y: &ModRow) -> ModRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i]);
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, mul(c, y[j].1)));
            j += 1;
        } else {
            let v = add(x[i].1, mul(c, y[j].1));
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form with normalized pivots, grown one row at a time.
#[derive(Clone, Debug, Default)]
pub struct ModEchelon {
    pivots: BTreeMap<usize, ModRow>,
}

impl ModEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduce(&self, row: &ModRow) -> ModRow {
        let mut r = row.clone();
        let mut from = 0;
        loop {
            let Some(pos) = r.iter().position(|(k, _)| *k >= from && self.pivots.contains_key(k)) else { return r };
            let (k, v) = r[pos];
            r = axpy(&r, neg(v), &self.pivots[&k]);
            from = k + 1;
        }
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: ModRow) -> bool {
        let r = self.reduce(&row);
        let Some(&(k, v)) = r.first() else { return false };
        let c = inv(v);
        let r: ModRow = r.into_iter().map(|(j, x)| (j, mul(x, c))).collect();
        self.pivots.insert(k, r);
        true
    }
}

/// Kernel of the matrix with the given columns (`nrows` rows).
pub fn kernel(cols: &[ModRow], nrows: usize) -> Vec<ModRow> {
    let mut ech = ModEchelon::new();
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let mut row = c.clone();
        row.push((nrows + j, 1));
        let r = ech.reduce(&row);
        match r.first() {
            Some(&(k, _)) if k >= nrows => {
                out.push(r.into_iter().map(|(k, v)| (k - nrows, v)).collect());
            }
            None => unreachable!("augmented row cannot vanish"),
            _ => {
                ech.insert(r);
            }
        }
    }
    out
}

/// `M v` for a matrix given by columns.
pub fn apply(cols: &[ModRow], v: &ModRow) -> ModRow {
    let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
    for (j, x) in v {
        for (i, y) in &cols[*j] {
            let e = acc.entry(*i).or_insert(0);
            *e = add(*e, mul(*x, *y));
        }
    }
    acc.into_iter().filter(|(_, v)| *v != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{q_frac, q_int, SparseMatrix};

    #[test]
    fn reduction_is_a_homomorphism() {
        let a = q_frac(3, 7);
        let b = q_frac(-5, 11);
        assert_eq!(reduce(&(&a * &b)).unwrap(), mul(reduce(&a).unwrap(), reduce(&b).unwrap()));
        assert_eq!(reduce(&(&a + &b)).unwrap(), add(reduce(&a).unwrap(), reduce(&b).unwrap()));
        assert_eq!(reduce(&q_int(-1)).unwrap(), PRIME - 1);
    }

    #[test]
    fn kernel_matches_rational() {
        let m = SparseMatrix::from_dense(&[
            vec![q_int(1), q_int(2), q_int(3), q_int(4)],
            vec![q_int(2), q_int(4), q_int(6), q_int(8)],
            vec![q_int(0), q_int(1), q_int(1), q_int(0)],
        ]);
        let cols: Vec<ModRow> = m.columns().iter().map(reduce_row).collect();
        let k = kernel(&cols, 3);
        assert_eq!(k.len(), m.cols() - m.rank());
        for v in &k {
            assert!(apply(&cols, v).is_empty());
        }
    }
}
