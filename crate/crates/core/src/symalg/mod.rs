//! Partially symmetric polynomial rings `R_λ = k[x_1..x_N]^{S_λ}`.
//!
//! Grading: every variable has degree 2, so `e_k` has degree `2k`. Degrees
//! are counted in units of `q^{1/2}` throughout the crate.

mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::One;
use serde::{Deserialize, Serialize};

pub use poly::{elementary_of_union, monomials_of_degree, weighted_degree, Monomial, Poly};

use crate::error::{Error, Result};
use crate::exactalg::{LaurentQ, TruncatedSeries, Q};

/// Ordered list of positive block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::BadComposition);
        }
        Ok(Composition(parts))
    }

    /// All-ones composition of `n`.
    pub fn ones(n: usize) -> Self {
        Composition(vec![1; n])
    }

    /// Possibly empty list of parts, used for spectator contexts.
    pub fn context(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::BadComposition);
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Half-open variable ranges of each block.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.0
            .iter()
            .map(|&p| {
                let r = start..start + p;
                start += p;
                r
            })
            .collect()
    }

    /// Number of polynomial generators `e_k(block)` of `R_λ`, i.e. `N`.
    pub fn num_generators(&self) -> usize {
        self.total()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `R_λ` on a named alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantRing {
    pub alphabet: char,
    pub composition: Composition,
}

impl InvariantRing {
    pub fn new(alphabet: char, composition: Composition) -> Self {
        InvariantRing { alphabet, composition }
    }

    pub fn num_vars(&self) -> usize {
        self.composition.total()
    }

    /// Whether `p` (in the ring's variables) is fixed by every in-block
    /// adjacent transposition.
    pub fn contains(&self, p: &SymPolynomial) -> bool {
        self.composition.blocks().iter().all(|b| {
            (b.start..b.end.saturating_sub(1)).all(|i| p.poly().swap_vars(i, i + 1) == *p.poly())
        })
    }
}

/// Polynomial in alphabet variables (one alphabet, or several
/// concatenated), expected to be invariant under a Young subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPolynomial(Poly);

impl SymPolynomial {
    pub fn new(p: Poly) -> Self {
        SymPolynomial(p)
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }
}

impl fmt::Display for SymPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `e_k` of the chosen variables among `nvars`.
pub fn elementary_symmetric(nvars: usize, subset: &[usize], k: usize) -> Result<SymPolynomial> {
    if k > subset.len() {
        return Err(Error::OutOfRange { index: k, max: subset.len() });
    }
    let mut p = Poly::zero(nvars);
    for combo in combinations(subset, k) {
        let mut m = vec![0u16; nvars];
        for v in combo {
            m[v] += 1;
        }
        p.add_term(m, Q::one());
    }
    Ok(SymPolynomial(p))
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = combinations(&items[1..], k - 1);
    for c in out.iter_mut() {
        c.insert(0, items[0]);
    }
    out.extend(combinations(&items[1..], k));
    out
}

type BasisCache = RwLock<HashMap<(Vec<usize>, u32), Arc<Vec<SymPolynomial>>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Basis of the degree-`degree` part of `R_λ`: orbit sums of monomials
/// whose exponents weakly decrease inside each block.
pub fn monomial_basis(ring: &InvariantRing, degree: i64) -> Result<Arc<Vec<SymPolynomial>>> {
    if degree < 0 || degree % 2 != 0 {
        return Err(Error::OddDegree(degree));
    }
    let key = (ring.composition.parts().to_vec(), degree as u32);
    if let Some(b) = basis_cache().read().unwrap().get(&key) {
        return Ok(b.clone());
    }
    let n = ring.num_vars();
    let blocks = ring.composition.blocks();
    let poly_deg = (degree / 2) as u32;
    let mut basis = Vec::new();
    for m in monomials_of_degree(&vec![1; n], poly_deg) {
        let dominant = blocks.iter().all(|b| m[b.clone()].windows(2).all(|w| w[0] >= w[1]));
        if !dominant {
            continue;
        }
        // orbit sum: all distinct in-block permutations
        let mut orbit: Vec<Monomial> = vec![m.clone()];
        for b in &blocks {
            let mut next = Vec::new();
            for o in &orbit {
                for perm in distinct_permutations(&o[b.clone()]) {
                    let mut oo = o.clone();
                    oo[b.clone()].copy_from_slice(&perm);
                    next.push(oo);
                }
            }
            orbit = next;
        }
        let mut p = Poly::zero(n);
        for o in orbit {
            p.add_term(o, Q::one());
        }
        basis.push(SymPolynomial(p));
    }
    let basis = Arc::new(basis);
    basis_cache().write().unwrap().entry(key).or_insert_with(|| basis.clone());
    Ok(basis)
}

fn distinct_permutations(items: &[u16]) -> Vec<Vec<u16>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // next_permutation loop
    loop {
        let n = sorted.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && sorted[i - 1] >= sorted[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while sorted[j] <= sorted[i - 1] {
            j -= 1;
        }
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
        out.push(sorted.clone());
    }
    out
}

/// `Π_blocks Π_{k=1..size} 1/(1 - q^{2k})` (exponents in `q^{1/2}` units as
/// everywhere), truncated at `bound`.
pub fn hilbert_series(ring: &InvariantRing, bound: i64) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(bound);
    for &p in ring.composition.parts() {
        for k in 1..=p {
            s = s.try_mul(&TruncatedSeries::geometric(bound, 2 * k as i64)).expect("same bound");
        }
    }
    s
}

/// Gaussian multinomial `[whole]! / Π [part]!` in the variable `q`.
pub fn q_multinomial(whole: usize, parts: &Composition) -> Result<LaurentQ> {
    if parts.total() != whole {
        return Err(Error::PartsMismatch { sum: parts.total(), whole });
    }
    let mut acc = LaurentQ::one();
    let mut remaining = whole;
    for &p in parts.parts() {
        acc = &acc * &q_binomial(remaining, p);
        remaining -= p;
    }
    Ok(acc)
}

/// Gaussian binomial `(n choose k)_q` by the q-Pascal rule.
pub fn q_binomial(n: usize, k: usize) -> LaurentQ {
    if k > n {
        return LaurentQ::zero();
    }
    // row[k] = (n choose k)_q, built row by row
    let mut row = vec![LaurentQ::one()];
    for m in 1..=n {
        let mut next = vec![LaurentQ::zero(); m + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            // (m choose j) = (m-1 choose j-1) + q^j (m-1 choose j)
            let mut v = LaurentQ::zero();
            if j >= 1 {
                v = &v + &row[j - 1];
            }
            if j < m {
                v = &v + &row[j].shift(2 * j as i64);
            }
            *slot = v;
        }
        row = next;
    }
    row[k].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q_int;

    fn ring(parts: &[usize]) -> InvariantRing {
        InvariantRing::new('x', Composition::new(parts.to_vec()).unwrap())
    }

    #[test]
    fn elementary_examples() {
        let e0 = elementary_symmetric(3, &[0, 1, 2], 0).unwrap();
        assert_eq!(*e0.poly(), Poly::one(3));
        let e2 = elementary_symmetric(2, &[0, 1], 2).unwrap();
        assert_eq!(*e2.poly(), Poly::from_monomial(vec![1, 1], q_int(1)));
        let e2_3 = elementary_symmetric(3, &[0, 1, 2], 2).unwrap();
        let mut expect = Poly::zero(3);
        for m in [[1, 1, 0], [1, 0, 1], [0, 1, 1]] {
            expect.add_term(m.to_vec(), q_int(1));
        }
        assert_eq!(*e2_3.poly(), expect);
        assert!(elementary_symmetric(2, &[0, 1], 3).is_err());
    }

    #[test]
    fn elementary_is_block_invariant() {
        let r = ring(&[2, 3]);
        for k in 0..=3 {
            let e = elementary_symmetric(5, &[2, 3, 4], k).unwrap();
            assert!(r.contains(&e));
        }
        let e = elementary_symmetric(5, &[1, 2], 1).unwrap();
        assert!(!r.contains(&e));
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis(&ring(&[3]), 0).unwrap().len(), 1);
        assert_eq!(monomial_basis(&ring(&[1, 1]), 2).unwrap().len(), 2);
        assert_eq!(monomial_basis(&ring(&[2]), 4).unwrap().len(), 2);
        assert!(monomial_basis(&ring(&[2]), 3).is_err());
    }

    #[test]
    fn hilbert_examples() {
        let d = 8;
        let h1 = hilbert_series(&ring(&[1]), d);
        for k in 0..=4 {
            assert_eq!(h1.q_coeff(2 * k), q_int(1));
        }
        let h2 = hilbert_series(&ring(&[2]), d);
        let expect2 = [1, 1, 2, 2, 3];
        for (k, &c) in expect2.iter().enumerate() {
            assert_eq!(h2.q_coeff(2 * k as i64), q_int(c));
        }
        let h11 = hilbert_series(&ring(&[1, 1]), d);
        for (k, c) in [1, 2, 3, 4, 5].iter().enumerate() {
            assert_eq!(h11.q_coeff(2 * k as i64), q_int(*c));
        }
    }

    #[test]
    fn basis_matches_hilbert() {
        for parts in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![3], vec![1, 2, 1]] {
            let r = ring(&parts);
            let h = hilbert_series(&r, 12);
            for d in (0..=12).step_by(2) {
                let b = monomial_basis(&r, d).unwrap();
                assert_eq!(q_int(b.len() as i64), h.q_coeff(d), "parts {parts:?} degree {d}");
                assert!(b.iter().all(|p| r.contains(p)));
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        let c = |p: &[usize]| Composition::new(p.to_vec()).unwrap();
        assert_eq!(q_multinomial(2, &c(&[1, 1])).unwrap(), LaurentQ::from_q_coeffs(&[1, 1]));
        assert_eq!(q_multinomial(3, &c(&[1, 2])).unwrap(), LaurentQ::from_q_coeffs(&[1, 1, 1]));
        assert!(q_multinomial(4, &c(&[1, 2])).is_err());
        assert!(q_multinomial(5, &c(&[2, 1, 2])).unwrap().is_natural_polynomial());
    }
}
