use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exactalg::Q;

pub type Monomial = Vec<u16>;

/// Commutative polynomial with rational coefficients in a fixed number of
/// variables. Used both for polynomials in actual alphabet variables and
/// for polynomials in generator symbols (e.g. block elementary symmetric
/// functions).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::from_monomial(m, Q::one())
    }

    pub fn from_monomial(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u16]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(m, x * y);
            }
        }
        out
    }

    pub fn mul_monomial(&self, mono: &[u16]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            let m: Monomial = a.iter().zip(mono).map(|(i, j)| i + j).collect();
            out.add_term(m, x.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut r = Poly::one(self.nvars);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Weighted degree of each term; `None` for the zero polynomial or a
    /// non-homogeneous polynomial.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = weighted_degree(m, weights);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, Poly::nvars);
        let mut out = Poly::zero(target);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Embeds into `nvars` variables, moving variable `i` to `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut mm = vec![0; nvars];
            mm[offset..offset + m.len()].copy_from_slice(m);
            out.add_term(mm, c.clone());
        }
        out
    }

    /// Whether variable `i` occurs in any term.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m[i] > 0)
    }

    /// Swaps variables `i` and `j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            mm.swap(i, j);
            out.add_term(mm, c.clone());
        }
        out
    }

    /// Drops the listed variables, which must not occur.
    pub fn drop_vars(&self, keep: &[usize]) -> Poly {
        let mut out = Poly::zero(keep.len());
        for (m, c) in &self.terms {
            out.add_term(keep.iter().map(|&k| m[k]).collect(), c.clone());
        }
        out
    }
}

pub fn weighted_degree(m: &[u16], weights: &[u32]) -> u32 {
    m.iter().zip(weights).map(|(e, w)| *e as u32 * w).sum()
}

/// All exponent vectors with weighted degree exactly `degree`.
pub fn monomials_of_degree(weights: &[u32], degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; weights.len()];
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        if w == 0 {
            panic!("zero-weight variable");
        }
        let mut e = 0u32;
        while e * w <= left {
            cur[i] = e as u16;
            rec(weights, i + 1, left - e * w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(weights, 0, degree, &mut cur, &mut out);
    out
}

/// Elementary symmetric functions of a union of blocks, given those of
/// each block: `blocks[b][j]` is `e_j` of block `b` for `j = 0..=size_b`
/// (with `blocks[b][0] = 1`). Returns `e_0..=e_total` of the union.
pub fn elementary_of_union(nvars: usize, blocks: &[Vec<Poly>]) -> Vec<Poly> {
    let mut acc = vec![Poly::one(nvars)];
    for b in blocks {
        let mut next = vec![Poly::zero(nvars); acc.len() + b.len() - 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                next[i + j] = next[i + j].add(&x.mul(y));
            }
        }
        acc = next;
    }
    acc
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| if *e == 1 { format!("v{i}") } else { format!("v{i}^{e}") })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
