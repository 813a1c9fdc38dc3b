//! The Hecke algebra of type A with generators `σ_i` satisfying
//! `(σ_i + q^{1/2})(σ_i - q^{-1/2}) = 0`, the Jones–Ocneanu trace, wedge
//! idempotents, cabling and the colored HOMFLYPT polynomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::complex::{BimoduleComplex, Piece};
use crate::error::{Error, Result};
use crate::exactalg::{LaurentQ, Q};
use crate::knotio::BraidWord;
use crate::symalg::Composition;

/// A permutation in one-line notation (0-based values).
pub type Perm = Vec<u8>;

fn length(w: &[u8]) -> usize {
    let mut l = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                l += 1;
            }
        }
    }
    l
}

/// A reduced word (1-based generator indices) for `w`.
fn reduced_word(w: &[u8]) -> Vec<usize> {
    // bubble sort `w` to the identity; the swaps read backwards form a word for w
    let mut v = w.to_vec();
    let mut swaps = Vec::new();
    while let Some(i) = (0..v.len().saturating_sub(1)).find(|&i| v[i] > v[i + 1]) {
        v.swap(i, i + 1);
        swaps.push(i + 1);
    }
    swaps.reverse();
    swaps
}

/// `q^{-1/2} - q^{1/2}`.
fn quadratic_coefficient() -> LaurentQ {
    &LaurentQ::q_half(-1) - &LaurentQ::q_half(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    terms: BTreeMap<Perm, LaurentQ>,
}

impl HeckeElement {
    pub fn zero(n: usize) -> Self {
        HeckeElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(n, (0..n as u8).collect(), LaurentQ::one())
    }

    pub fn basis(n: usize, w: Perm, c: LaurentQ) -> Self {
        let mut x = Self::zero(n);
        x.add_term(w, c);
        x
    }

    /// `σ_i` (1-based).
    pub fn generator(n: usize, i: usize) -> Self {
        let mut w: Perm = (0..n as u8).collect();
        w.swap(i - 1, i);
        Self::basis(n, w, LaurentQ::one())
    }

    /// `σ_i^{-1} = σ_i + q^{1/2} - q^{-1/2}`.
    pub fn inverse_generator(n: usize, i: usize) -> Self {
        let mut x = Self::generator(n, i);
        x.add_term((0..n as u8).collect(), -&quadratic_coefficient());
        x
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, w: Perm, c: LaurentQ) {
        let e = self.terms.entry(w.clone()).or_insert_with(LaurentQ::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Perm, &LaurentQ)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> LaurentQ {
        self.terms.get(w).cloned().unwrap_or_else(LaurentQ::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &LaurentQ) -> Self {
        let mut out = Self::zero(self.n);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&LaurentQ::constant(-Q::one())))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RingMismatch(format!("H_{} against H_{}", self.n, other.n)));
        }
        Ok(())
    }

    /// Right multiplication by `σ_i` (1-based).
    pub fn mul_generator(&self, i: usize) -> Self {
        let k = quadratic_coefficient();
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            let mut ws = w.clone();
            ws.swap(i - 1, i);
            if w[i - 1] < w[i] {
                out.add_term(ws, c.clone());
            } else {
                out.add_term(ws, c.clone());
                out.add_term(w.clone(), c * &k);
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.n);
        for (v, c) in &other.terms {
            let mut x = self.scale(c);
            for g in reduced_word(v) {
                x = x.mul_generator(g);
            }
            out = out.add(&x)?;
        }
        Ok(out)
    }

    /// Image under `H_n ⊂ H_{n+k}`.
    pub fn extend(&self, n: usize) -> Self {
        let mut out = Self::zero(n);
        for (w, c) in &self.terms {
            let mut v = w.clone();
            v.extend(self.n as u8..n as u8);
            out.add_term(v, c.clone());
        }
        out
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<String> = reduced_word(w).iter().map(|g| g.to_string()).collect();
                format!("({c})T[{}]", word.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Image of an uncolored braid word in `H_n`.
pub fn braid_image(w: &BraidWord) -> Result<HeckeElement> {
    if !w.is_uncolored() {
        return Err(Error::Colored);
    }
    Ok(word_image(w.strands(), w.word()))
}

fn word_image(n: usize, word: &[i64]) -> HeckeElement {
    let k = quadratic_coefficient();
    let mut x = HeckeElement::one(n);
    for &g in word {
        let i = g.unsigned_abs() as usize;
        let xs = x.mul_generator(i);
        // σ^{-1} = σ - (q^{-1/2} - q^{1/2})
        x = if g > 0 { xs } else { xs.sub(&x.scale(&k)).unwrap() };
    }
    x
}

/// A polynomial in the trace variable `z` with coefficients in `q^{±1/2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TracePolynomial {
    terms: BTreeMap<usize, LaurentQ>,
}

impl TracePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: LaurentQ) -> Self {
        let mut t = Self::zero();
        t.add_term(0, c);
        t
    }

    pub fn add_term(&mut self, k: usize, c: LaurentQ) {
        let e = self.terms.entry(k).or_insert_with(LaurentQ::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: usize) -> LaurentQ {
        self.terms.get(&k).cloned().unwrap_or_else(LaurentQ::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &LaurentQ)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &LaurentQ) -> Self {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            out.add_term(*k, x * c);
        }
        out
    }

    /// Multiplication by `z^k`.
    pub fn shift_z(&self, k: usize) -> Self {
        TracePolynomial { terms: self.terms.iter().map(|(j, c)| (j + k, c.clone())).collect() }
    }

    /// Value at `q^{1/2} = s`, `z = z`.
    pub fn eval(&self, s: &Q, z: &Q) -> Q {
        let mut acc = Q::zero();
        for (k, c) in &self.terms {
            acc += c.eval_half(s) * crate::exactalg::pow_q(z, *k as i64);
        }
        acc
    }
}

impl fmt::Display for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let c = if c.terms().count() == 1 { c.to_string() } else { format!("({c})") };
                match k {
                    0 => c,
                    1 => format!("{c} z"),
                    _ => format!("{c} z^{k}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn trace_cache() -> &'static Mutex<HashMap<Perm, TracePolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<Perm, TracePolynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn trace_basis(w: &[u8]) -> TracePolynomial {
    let n = w.len();
    if n <= 1 {
        return TracePolynomial::constant(LaurentQ::one());
    }
    if let Some(t) = trace_cache().lock().unwrap().get(w) {
        return t.clone();
    }
    let top = (n - 1) as u8;
    let p = w.iter().position(|&x| x == top).unwrap();
    let result = if p == n - 1 {
        trace_basis(&w[..n - 1])
    } else {
        // w = v·s_{n-1}·s_{n-2}···s_{p+1} with v fixing the last strand
        let mut v = w.to_vec();
        for i in p..n - 1 {
            v.swap(i, i + 1);
        }
        let mut x = HeckeElement::basis(n - 1, v[..n - 1].to_vec(), LaurentQ::one());
        for g in (p + 1..=n - 2).rev() {
            x = x.mul_generator(g);
        }
        jones_ocneanu_trace(&x).shift_z(1)
    };
    trace_cache().lock().unwrap().insert(w.to_vec(), result.clone());
    result
}

/// The Markov trace with `Tr(1) = 1` on every `H_n` and
/// `Tr(x σ_n) = z Tr(x)` for `x ∈ H_n`.
pub fn jones_ocneanu_trace(x: &HeckeElement) -> TracePolynomial {
    let mut out = TracePolynomial::zero();
    for (w, c) in &x.terms {
        out = out.add(&trace_basis(w).scale(c));
    }
    out
}

/// Numerator `Σ_{w ∈ W_P} q^{-ℓ(w)/2} T_w` of the wedge idempotent and the
/// Poincaré polynomial `q_P = Σ q^{-ℓ(w)}`; the idempotent is their
/// quotient, and every in-block `σ_i` acts on it by `q^{-1/2}`.
pub fn wedge_idempotent(parts: &Composition) -> (HeckeElement, LaurentQ) {
    let n = parts.total();
    let mut num = HeckeElement::zero(n);
    let mut qp = LaurentQ::zero();
    for w in young_subgroup(parts) {
        let l = length(&w) as i64;
        num.add_term(w, LaurentQ::q_half(-l));
        qp.add_term(-2 * l, Q::one());
    }
    (num, qp)
}

fn young_subgroup(parts: &Composition) -> Vec<Perm> {
    let mut out: Vec<Perm> = vec![vec![]];
    let mut start = 0u8;
    for &p in parts.parts() {
        let block: Vec<u8> = (start..start + p as u8).collect();
        let perms = permutations(&block);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |q| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(q);
                    v
                })
            })
            .collect();
        start += p as u8;
    }
    out
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Replaces every `(m,n)`-crossing by the lift of the block transposition,
/// `m·n` crossings of the same sign, on `Σ colors` strands.
pub fn cabled_braid(w: &BraidWord) -> BraidWord {
    let colorings = w.colorings();
    let mut word = Vec::new();
    for (step, &g) in w.word().iter().enumerate() {
        let col = &colorings[step];
        let p = g.unsigned_abs() as usize - 1;
        let offset: usize = col[..p].iter().sum();
        word.extend(block_swap(offset, col[p], col[p + 1]).into_iter().map(|i| g.signum() * i as i64));
    }
    BraidWord::uncolored(w.colors().total(), word).expect("cable indices are in range")
}

fn block_swap(offset: usize, m: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for a in (0..m).rev() {
        for b in 0..n {
            out.push(offset + a + b + 1);
        }
    }
    out
}

/// Colored HOMFLYPT data of a closable braid: the trace of
/// `N_P · image(cable)` together with the denominator `q_P`, where `N_P`
/// is the wedge numerator of the top coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredHomfly {
    pub numerator: TracePolynomial,
    pub denominator: LaurentQ,
    pub strands: usize,
}

pub fn colored_homfly(w: &BraidWord) -> Result<ColoredHomfly> {
    w.check_closable()?;
    let cab = cabled_braid(w);
    let (num, qp) = wedge_idempotent(w.colors());
    let x = num.multiply(&braid_image(&cab)?)?;
    Ok(ColoredHomfly { numerator: jones_ocneanu_trace(&x), denominator: qp, strands: cab.strands() })
}

/// Uncolored HOMFLYPT polynomial `λ^{writhe} D^{n-1} Tr`, evaluated at
/// `q^{1/2} = s` and `a`, with `λ = -1/a`, `D = (a - a^{-1})/(s - s^{-1})`
/// and `z = 1/(λ D)`. The unknot has value 1.
pub fn homfly_at(w: &BraidWord, s: &Q, a: &Q) -> Result<Q> {
    let tr = jones_ocneanu_trace(&braid_image(w)?);
    let lambda = -a.recip();
    let d = (a - a.recip()) / (s - s.recip());
    let z = (&lambda * &d).recip();
    let pw = crate::exactalg::pow_q(&lambda, w.writhe());
    let pd = crate::exactalg::pow_q(&d, w.strands() as i64 - 1);
    Ok(pw * pd * tr.eval(s, &z))
}

/// Hecke class of a single `M_i` factor (colors 1 only): the regular
/// bimodule is `1`, `M_0` on strands `p, p+1` is `q^{1/2} σ_p + q`.
fn piece_class(n: usize, p: &Piece) -> Result<HeckeElement> {
    if p.m != 1 || p.n != 1 {
        return Err(Error::Colored);
    }
    Ok(match p.i {
        1 => HeckeElement::one(n),
        _ => {
            let mut x = HeckeElement::generator(n, p.strand + 1).scale(&LaurentQ::q_half(1));
            x.add_term((0..n as u8).collect(), LaurentQ::q_half(2));
            x
        }
    })
}

/// Graded Euler characteristic of an uncolored complex in the Hecke
/// algebra: `Σ (-1)^hdeg q^{shift/2} Π class(pieces)`.
pub fn complex_class(c: &BimoduleComplex) -> Result<HeckeElement> {
    let n = c.left.len();
    let mut out = HeckeElement::zero(n);
    for t in &c.terms {
        let mut x = HeckeElement::one(n);
        for p in &t.pieces {
            x = x.multiply(&piece_class(n, p)?)?;
        }
        let sign = if t.hdeg.rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
        out = out.add(&x.scale(&LaurentQ::monomial(t.shift, sign)))?;
    }
    Ok(out)
}

/// `Σ_k coeff_k κ^k δ^{N-k}` for `Tr = Σ coeff_k z^k`, as a polynomial in `a`
/// with Laurent coefficients; helper for comparing with Hochschild data.
pub fn substitute_trace(t: &TracePolynomial, kappa: &[(i64, LaurentQ)], delta: &[(i64, LaurentQ)], strands: usize) -> BTreeMap<i64, LaurentQ> {
    // polynomials in `a` are maps a-degree -> coefficient
    type APoly = BTreeMap<i64, LaurentQ>;
    fn mul(x: &APoly, y: &APoly) -> APoly {
        let mut out = APoly::new();
        for (i, a) in x {
            for (j, b) in y {
                let e = out.entry(i + j).or_insert_with(LaurentQ::zero);
                *e = &*e + &(a * b);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
    let k: APoly = kappa.iter().cloned().collect();
    let d: APoly = delta.iter().cloned().collect();
    let pow = |p: &APoly, e: usize| {
        let mut acc: APoly = [(0, LaurentQ::one())].into_iter().collect();
        for _ in 0..e {
            acc = mul(&acc, p);
        }
        acc
    };
    let mut out = APoly::new();
    for (j, c) in t.terms() {
        let term = mul(&pow(&k, j), &pow(&d, strands - j));
        for (i, v) in term {
            let e = out.entry(i).or_insert_with(LaurentQ::zero);
            *e = &*e + &(&v * c);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q_int;

    fn q(h: i64) -> LaurentQ {
        LaurentQ::q_half(h)
    }

    #[test]
    fn quadratic_relation() {
        for n in 2..=4 {
            for i in 1..n {
                let s = HeckeElement::generator(n, i);
                let a = s.add(&HeckeElement::one(n).scale(&q(1))).unwrap();
                let b = s.sub(&HeckeElement::one(n).scale(&q(-1))).unwrap();
                assert!(a.multiply(&b).unwrap().is_zero());
                let inv = HeckeElement::inverse_generator(n, i);
                assert_eq!(s.multiply(&inv).unwrap(), HeckeElement::one(n));
            }
        }
        let s = HeckeElement::generator(2, 1);
        let mut rhs = s.scale(&(&q(-1) - &q(1)));
        rhs.add_term(vec![0, 1], LaurentQ::one());
        assert_eq!(s.multiply(&s).unwrap(), rhs);
    }

    #[test]
    fn length_additive_and_unit() {
        let s1 = HeckeElement::generator(3, 1);
        let s2 = HeckeElement::generator(3, 2);
        let p = s1.multiply(&s2).unwrap();
        assert_eq!(p.terms().count(), 1);
        assert_eq!(HeckeElement::one(3).multiply(&p).unwrap(), p);
    }

    #[test]
    fn braid_images() {
        let id = BraidWord::uncolored(2, vec![1, -1]).unwrap();
        assert_eq!(braid_image(&id).unwrap(), HeckeElement::one(2));
        let t = BraidWord::uncolored(2, vec![1, 1, 1]).unwrap();
        let s = HeckeElement::generator(2, 1);
        let cube = s.multiply(&s).unwrap().multiply(&s).unwrap();
        assert_eq!(braid_image(&t).unwrap(), cube);
        assert!(braid_image(&BraidWord::new(Composition::new(vec![2, 1]).unwrap(), vec![1, 1]).unwrap()).is_err());
    }

    #[test]
    fn trace_basics() {
        assert_eq!(jones_ocneanu_trace(&HeckeElement::one(1)), TracePolynomial::constant(LaurentQ::one()));
        assert_eq!(jones_ocneanu_trace(&HeckeElement::one(3)), TracePolynomial::constant(LaurentQ::one()));
        let t = jones_ocneanu_trace(&HeckeElement::generator(3, 2));
        assert_eq!(t.coeff(1), LaurentQ::one());
    }

    #[test]
    fn wedge_numerators() {
        let (n, qp) = wedge_idempotent(&Composition::ones(3));
        assert_eq!(n, HeckeElement::one(3));
        assert_eq!(qp, LaurentQ::one());
        let (n, qp) = wedge_idempotent(&Composition::new(vec![2]).unwrap());
        assert_eq!(n.multiply(&n).unwrap(), n.scale(&qp));
        assert_eq!(qp, &LaurentQ::one() + &q(-2));
    }

    #[test]
    fn cable_shapes() {
        let w = BraidWord::new(Composition::new(vec![2, 1]).unwrap(), vec![1]).unwrap();
        let c = cabled_braid(&w);
        assert_eq!(c.strands(), 3);
        assert_eq!(c.word(), &[2, 1]);
        let u = BraidWord::uncolored(3, vec![1, -2]).unwrap();
        assert_eq!(cabled_braid(&u), u);
        let w = BraidWord::new(Composition::new(vec![2, 2]).unwrap(), vec![1, -1]).unwrap();
        assert_eq!(cabled_braid(&w).word().len(), 8);
    }

    #[test]
    fn homfly_unknot_and_unlink() {
        let (s, a) = (q_int(3), q_int(5));
        let u = BraidWord::uncolored(1, vec![]).unwrap();
        assert_eq!(homfly_at(&u, &s, &a).unwrap(), q_int(1));
        let st = BraidWord::uncolored(2, vec![1]).unwrap();
        assert_eq!(homfly_at(&st, &s, &a).unwrap(), q_int(1));
        let st = BraidWord::uncolored(2, vec![-1]).unwrap();
        assert_eq!(homfly_at(&st, &s, &a).unwrap(), q_int(1));
    }
}
