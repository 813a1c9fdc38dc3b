use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Q;
use crate::error::{Error, Result};

/// Laurent polynomial in `q^{1/2}` with rational coefficients.
///
/// Exponents are stored as integers counting units of `q^{1/2}`, so the
/// key `2` is `q`, `-1` is `q^{-1/2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentQ {
    terms: BTreeMap<i64, Q>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        LaurentQ::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Q::one())
    }

    /// `c * q^{half/2}`.
    pub fn monomial(half: i64, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half, c);
        }
        LaurentQ { terms }
    }

    /// `q^{half/2}`.
    pub fn q_half(half: i64) -> Self {
        Self::monomial(half, Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(0, c)
    }

    /// From integer coefficients of `1, q, q^2, ...` (whole powers of `q`).
    pub fn from_q_coeffs(coeffs: &[i64]) -> Self {
        let mut out = LaurentQ::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            out.add_term(2 * k as i64, Q::from_integer(c.into()));
        }
        out
    }

    pub fn add_term(&mut self, half: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(half).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&half);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, half: i64) -> Q {
        self.terms.get(&half).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = LaurentQ::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// Multiplies by `q^{half/2}`.
    pub fn shift(&self, half: i64) -> Self {
        LaurentQ { terms: self.terms.iter().map(|(k, v)| (k + half, v.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = LaurentQ::one();
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// Evaluates at `q^{1/2} = s` (with `s` nonzero).
    pub fn eval_half(&self, s: &Q) -> Q {
        let mut acc = Q::zero();
        for (k, v) in &self.terms {
            acc += v * pow_q(s, *k);
        }
        acc
    }

    /// Whether every coefficient is a nonnegative integer and every
    /// exponent is a whole power of `q`.
    pub fn is_natural_polynomial(&self) -> bool {
        self.terms.iter().all(|(k, v)| *k >= 0 && k % 2 == 0 && v.is_integer() && *v > Q::zero())
    }
}

pub(crate) fn pow_q(s: &Q, k: i64) -> Q {
    let mut r = Q::one();
    let base = if k < 0 { s.recip() } else { s.clone() };
    for _ in 0..k.unsigned_abs() {
        r *= &base;
    }
    r
}

impl<'a> Add<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.terms {
            write_term(f, v, &[("q", *k, true)], first)?;
            first = false;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, c: &Q, vars: &[(&str, i64, bool)], first: bool) -> fmt::Result {
    let neg = *c < Q::zero();
    let abs = if neg { -c.clone() } else { c.clone() };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    let mut factors = Vec::new();
    for (name, e, halves) in vars {
        if *e == 0 {
            continue;
        }
        let exp = if *halves {
            if e % 2 == 0 {
                format!("{}", e / 2)
            } else {
                format!("{}/2", e)
            }
        } else {
            format!("{e}")
        };
        if exp == "1" {
            factors.push(name.to_string());
        } else {
            factors.push(format!("{name}^{exp}"));
        }
    }
    if factors.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{}", factors.join("*"))
    } else {
        write!(f, "{abs}*{}", factors.join("*"))
    }
}

/// Formal series in `q^{1/2}` (with an optional polynomial variable `a`)
/// truncated above q-exponent `bound` (in units of `q^{1/2}`).
///
/// Coefficients are keyed by `(q_half_exponent, a_exponent)`. No
/// coefficient with q-exponent above the bound is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    bound: i64,
    terms: BTreeMap<(i64, i64), Q>,
}

impl TruncatedSeries {
    pub fn zero(bound: i64) -> Self {
        TruncatedSeries { bound, terms: BTreeMap::new() }
    }

    pub fn one(bound: i64) -> Self {
        Self::monomial(bound, 0, 0, Q::one())
    }

    pub fn monomial(bound: i64, q_half: i64, a: i64, c: Q) -> Self {
        let mut s = Self::zero(bound);
        s.add_term(q_half, a, c);
        s
    }

    pub fn from_laurent(bound: i64, p: &LaurentQ) -> Self {
        let mut s = Self::zero(bound);
        for (k, v) in p.terms() {
            s.add_term(k, 0, v.clone());
        }
        s
    }

    /// `1 / (1 - q^{step/2})` expanded up to the bound; `step > 0`.
    pub fn geometric(bound: i64, step: i64) -> Self {
        assert!(step > 0);
        let mut s = Self::zero(bound);
        let mut k = 0;
        while k <= bound {
            s.add_term(k, 0, Q::one());
            k += step;
        }
        s
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn add_term(&mut self, q_half: i64, a: i64, c: Q) {
        if q_half > self.bound || c.is_zero() {
            return;
        }
        let e = self.terms.entry((q_half, a)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(q_half, a));
        }
    }

    pub fn coeff(&self, q_half: i64, a: i64) -> Q {
        self.terms.get(&(q_half, a)).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of `q^{q_half/2}` summed over all powers of `a`.
    pub fn q_coeff(&self, q_half: i64) -> Q {
        self.terms.iter().filter(|((q, _), _)| *q == q_half).map(|(_, v)| v.clone()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &Q)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-truncates at a lower bound.
    pub fn truncate(&self, bound: i64) -> Self {
        assert!(bound <= self.bound);
        let mut s = Self::zero(bound);
        for ((q, a), v) in &self.terms {
            s.add_term(*q, *a, v.clone());
        }
        s
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::BoundMismatch(self.bound, other.bound));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((q, a), v) in &other.terms {
            out.add_term(*q, *a, v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Q::one()))
    }

    /// Product truncated at the common bound. Both factors must share the
    /// bound and be bounded below in q, which holds for every finite support.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.bound);
        let (Some(lo_a), Some(lo_b)) = (self.min_q(), other.min_q()) else {
            return Ok(out);
        };
        for ((qa, aa), x) in &self.terms {
            if qa + lo_b > self.bound {
                break;
            }
            for ((qb, ab), y) in &other.terms {
                if qa + qb > self.bound {
                    if *qb > self.bound - lo_a {
                        break;
                    }
                    continue;
                }
                out.add_term(qa + qb, aa + ab, x * y);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.bound);
        for ((q, a), v) in &self.terms {
            out.add_term(*q, *a, v * c);
        }
        out
    }

    /// Multiplies by `q^{q_half/2} a^a`, re-truncating.
    pub fn shift(&self, q_half: i64, a: i64) -> Self {
        let mut out = Self::zero(self.bound);
        for ((q, b), v) in &self.terms {
            out.add_term(q + q_half, b + a, v.clone());
        }
        out
    }

    pub fn min_q(&self) -> Option<i64> {
        self.terms.keys().map(|(q, _)| *q).min()
    }

    /// Multiplicative inverse. The lowest q-coefficient must be a nonzero
    /// constant (no `a`). Because inversion can pull in terms from above the
    /// bound only through negative exponents, the result is exact up to
    /// `bound - 2*min_q` relative terms; callers keep `min_q = 0`.
    pub fn inverse(&self) -> Result<Self> {
        let lo = self.min_q().ok_or(Error::NotInvertible)?;
        let lead: Vec<_> = self.terms.iter().filter(|((q, _), _)| *q == lo).collect();
        if lead.len() != 1 || lead[0].0 .1 != 0 {
            return Err(Error::NotInvertible);
        }
        let c0 = lead[0].1.clone();
        // normalise to 1 + r with r of positive q-degree
        let norm = self.shift(-lo, 0).scale(&c0.recip());
        let mut r = norm.clone();
        r.add_term(0, 0, -Q::one());
        // (1 + r)^{-1} = sum (-r)^k ; r has q-degree >= 1 so k <= bound
        let neg_r = r.scale(&-Q::one());
        let mut acc = Self::one(self.bound);
        let mut power = Self::one(self.bound);
        let min_r = r.min_q().unwrap_or(self.bound + 1).max(1);
        let mut k = 0;
        while !power.is_zero() && k * min_r <= self.bound {
            power = power.try_mul(&neg_r)?;
            acc = acc.try_add(&power)?;
            k += 1;
        }
        Ok(acc.shift(-lo, 0).scale(&c0.recip()))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for ((q, a), v) in &self.terms {
            write_term(f, v, &[("a", *a, false), ("q", *q, true)], first)?;
            first = false;
        }
        write!(f, " + O(q^{})", fmt_half(self.bound + 1))
    }
}

fn fmt_half(e: i64) -> String {
    if e % 2 == 0 {
        format!("{}", e / 2)
    } else {
        format!("{e}/2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q_int;

    #[test]
    fn unit_and_geometric() {
        let d = 12;
        let s = TruncatedSeries::geometric(d, 2);
        assert_eq!(TruncatedSeries::one(d).try_mul(&s).unwrap(), s);
        let one_minus = TruncatedSeries::from_laurent(d, &LaurentQ::from_q_coeffs(&[1, 0, -1]));
        // (1 - q^2) * (1 + q^2 + q^4 + ...) = 1
        let g = TruncatedSeries::geometric(d, 4);
        assert_eq!(one_minus.try_mul(&g).unwrap(), TruncatedSeries::one(d));
    }

    #[test]
    fn square_of_one_plus_q() {
        let d = 10;
        let p = TruncatedSeries::from_laurent(d, &LaurentQ::from_q_coeffs(&[1, 1]));
        let sq = p.try_mul(&p).unwrap();
        assert_eq!(sq, TruncatedSeries::from_laurent(d, &LaurentQ::from_q_coeffs(&[1, 2, 1])));
    }

    #[test]
    fn mismatched_bounds_error() {
        let a = TruncatedSeries::one(4);
        let b = TruncatedSeries::one(6);
        assert!(matches!(a.try_mul(&b), Err(Error::BoundMismatch(4, 6))));
    }

    #[test]
    fn inverse_of_geometric() {
        let d = 16;
        let g = TruncatedSeries::geometric(d, 2);
        let inv = g.inverse().unwrap();
        assert_eq!(inv, TruncatedSeries::from_laurent(d, &LaurentQ::from_q_coeffs(&[1, -1])).truncate(d));
        let with_a = TruncatedSeries::one(d).try_add(&TruncatedSeries::monomial(d, 2, 1, q_int(1))).unwrap();
        let prod = with_a.try_mul(&with_a.inverse().unwrap()).unwrap();
        assert_eq!(prod, TruncatedSeries::one(d));
    }

    #[test]
    fn laurent_display() {
        let p = &LaurentQ::q_half(-1) - &LaurentQ::q_half(1);
        assert_eq!(p.to_string(), "q^-1/2 - q^1/2");
    }
}
