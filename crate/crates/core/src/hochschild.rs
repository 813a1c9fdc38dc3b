//! Hochschild homology through the Koszul complex of the diagonal, and the
//! triply graded invariant: cohomology of termwise Hochschild homology.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bimod::PresentedBimodule;
use crate::complex::{rouquier_complex, BimoduleComplex, GradingShift, Term};
use crate::error::{Error, Result};
use num_traits::Zero;

use crate::exactalg::{modp, Echelon, SparseMatrix, SparseRow, TruncatedSeries, Q};
use crate::knotio::BraidWord;
use crate::symalg::{InvariantRing, Poly};

/// Koszul complex on the differences `e_k(x-block) - e_k(y-block)` over the
/// regular bimodule of a ring.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub ring: InvariantRing,
    /// The sequence with the degree of each element.
    pub sequence: Vec<(Poly, u32)>,
    pub module: PresentedBimodule,
}

impl KoszulComplex {
    /// Number of terms minus one.
    pub fn length(&self) -> usize {
        self.sequence.len()
    }
}

pub fn koszul_diagonal(ring: &InvariantRing) -> KoszulComplex {
    let module = PresentedBimodule::regular(&ring.composition);
    let alg = &module.algebra;
    let n = alg.num_generators();
    let sequence = alg
        .left()
        .iter()
        .zip(alg.right())
        .zip(alg.left_weights())
        .map(|((l, r), w)| (l.sub(r).embed(n, 0), *w))
        .collect();
    KoszulComplex { ring: ring.clone(), sequence, module }
}

/// Dimensions keyed by `(q, hochschild, homological)`; `q` in powers of
/// `q^{1/2}`, everything above `bound` dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriGradedSeries {
    pub bound: i64,
    cells: BTreeMap<(i64, i64, i64), usize>,
}

impl TriGradedSeries {
    pub fn new(bound: i64) -> Self {
        TriGradedSeries { bound, cells: BTreeMap::new() }
    }

    pub fn insert(&mut self, q: i64, hh: i64, hom: i64, dim: usize) {
        if dim > 0 && q <= self.bound {
            *self.cells.entry((q, hh, hom)).or_default() += dim;
        }
    }

    pub fn get(&self, q: i64, hh: i64, hom: i64) -> usize {
        self.cells.get(&(q, hh, hom)).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = ((i64, i64, i64), usize)> + '_ {
        self.cells.iter().map(|(k, v)| (*k, *v))
    }

    pub fn total_dimension(&self) -> usize {
        self.cells.values().sum()
    }

    pub fn shifted(&self, s: GradingShift, hh: i64) -> Self {
        let mut out = TriGradedSeries::new(self.bound);
        for (&(q, k, l), &d) in &self.cells {
            out.insert(q + s.q, k + hh, l + s.hom, d);
        }
        out
    }

    pub fn truncate(&self, bound: i64) -> Self {
        let mut out = TriGradedSeries::new(bound.min(self.bound));
        for (&(q, k, l), &d) in &self.cells {
            out.insert(q, k, l, d);
        }
        out
    }

    /// `Σ (-1)^hom q^{q/2} a^hh dim`.
    pub fn euler_characteristic(&self) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(self.bound);
        for (&(q, k, l), &d) in &self.cells {
            let c = Q::from_integer((d as i64).into());
            s.add_term(q, k, if l.rem_euclid(2) == 0 { c } else { -c });
        }
        s
    }
}

impl fmt::Display for TriGradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q\thh\thom\tdim")?;
        for (&(q, k, l), &d) in &self.cells {
            writeln!(f, "{q}\t{k}\t{l}\t{d}")?;
        }
        Ok(())
    }
}

/// Subsets of `0..r` of size `k`, as sorted index lists.
fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            go(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, r, k, &mut Vec::new(), &mut out);
    out
}

/// One summand `A_e ξ_S` of the Koszul chains of a term.
struct Block {
    term: usize,
    subset: Vec<usize>,
    e: i64,
    offset: usize,
}

struct Space {
    blocks: Vec<Block>,
    dim: usize,
}

struct Engine<'a> {
    c: &'a BimoduleComplex,
    /// closure sequence per term
    seqs: Vec<Vec<(Poly, u32)>>,
}

impl<'a> Engine<'a> {
    fn new(c: &'a BimoduleComplex) -> Result<Self> {
        if c.left != c.right {
            return Err(Error::NotClosable { top: c.left.parts().to_vec(), bottom: c.right.parts().to_vec() });
        }
        let seqs = c
            .terms
            .iter()
            .map(|t| t.algebra().closure_sequence().expect("closable term"))
            .collect();
        Ok(Engine { c, seqs })
    }

    fn rank(&self) -> usize {
        self.c.left.num_generators()
    }

    fn space(&self, hom: i64, k: usize, q: i64) -> Space {
        let mut blocks = Vec::new();
        let mut dim = 0;
        for (t, term) in self.c.terms.iter().enumerate() {
            if term.hdeg != hom {
                continue;
            }
            for s in subsets(self.rank(), k) {
                let w: i64 = s.iter().map(|&j| self.seqs[t][j].1 as i64).sum();
                let e = q - term.shift - w;
                let d = if e < 0 { 0 } else { term.algebra().dim(e) };
                if d > 0 {
                    blocks.push(Block { term: t, subset: s, e, offset: dim });
                    dim += d;
                }
            }
        }
        Space { blocks, dim }
    }

    /// Koszul differential `src (k) -> tgt (k-1)`, as columns.
    fn koszul(&self, src: &Space, tgt: &Space) -> Vec<SparseRow> {
        let mut cols = vec![SparseRow::new(); src.dim];
        for b in &src.blocks {
            let alg = self.c.terms[b.term].algebra();
            for (idx, &j) in b.subset.iter().enumerate() {
                let mut rest = b.subset.clone();
                rest.remove(idx);
                let Some(tb) = tgt.blocks.iter().find(|x| x.term == b.term && x.subset == rest) else { continue };
                let (c, w) = &self.seqs[b.term][j];
                let m = alg.multiplication(c, *w, b.e);
                let sign = if idx % 2 == 0 { Q::from_integer(1.into()) } else { Q::from_integer((-1).into()) };
                add_block(&mut cols, b.offset, tb.offset, &m, &sign);
            }
        }
        cols
    }

    /// Differential of the complex `src (hom) -> tgt (hom+1)`, as columns.
    fn differential(&self, src: &Space, tgt: &Space) -> Vec<SparseRow> {
        let mut cols = vec![SparseRow::new(); src.dim];
        let one = Q::from_integer(1.into());
        for a in &self.c.arrows {
            for b in src.blocks.iter().filter(|b| b.term == a.from) {
                let Some(tb) = tgt.blocks.iter().find(|x| x.term == a.to && x.subset == b.subset) else { continue };
                let m = a.map.matrix(b.e);
                add_block(&mut cols, b.offset, tb.offset, &m, &one);
            }
        }
        cols
    }

    /// Cohomology dimensions of `HH_k` in total degree `q` for every
    /// homological degree in `lo..=hi`.
    fn column<F: Field>(&self, k: usize, q: i64, lo: i64, hi: i64) -> Vec<usize> {
        let spaces: Vec<Space> = (lo..=hi + 1).map(|h| self.space(h, k, q)).collect();
        let cycles: Vec<Vec<F::Row>> = (lo..=hi)
            .map(|h| {
                let s = &spaces[(h - lo) as usize];
                if k == 0 {
                    (0..s.dim).map(F::unit).collect()
                } else {
                    let t = self.space(h, k - 1, q);
                    let cols: Vec<F::Row> = self.koszul(s, &t).iter().map(F::row).collect();
                    F::kernel(&cols, t.dim)
                }
            })
            .collect();
        let boundaries = |h: i64| -> F::Ech {
            let s = &spaces[(h - lo) as usize];
            let mut ech = F::echelon(s.dim);
            if k < self.rank() && s.dim > 0 {
                let up = self.space(h, k + 1, q);
                for c in self.koszul(&up, s) {
                    F::insert(&mut ech, F::row(&c));
                }
            }
            ech
        };
        // f applied to the cycles at h, landing in degree h + 1
        let pushed: Vec<Vec<F::Row>> = (lo..=hi)
            .map(|h| {
                let (s, t) = (&spaces[(h - lo) as usize], &spaces[(h - lo + 1) as usize]);
                let z = &cycles[(h - lo) as usize];
                if t.dim == 0 || z.is_empty() {
                    return vec![Default::default(); z.len()];
                }
                let f: Vec<F::Row> = self.differential(s, t).iter().map(F::row).collect();
                z.iter().map(|v| F::apply(&f, v)).collect()
            })
            .collect();
        let bs: Vec<F::Ech> = (lo..=hi + 1).map(boundaries).collect();
        (lo..=hi)
            .map(|h| {
                let i = (h - lo) as usize;
                if spaces[i].dim == 0 {
                    return 0;
                }
                let mut next = bs[i + 1].clone();
                let base = F::rank(&next);
                for v in &pushed[i] {
                    F::insert(&mut next, v.clone());
                }
                let kernel = cycles[i].len() - (F::rank(&next) - base);
                let mut here = bs[i].clone();
                if i > 0 {
                    for v in &pushed[i - 1] {
                        F::insert(&mut here, v.clone());
                    }
                }
                kernel - F::rank(&here)
            })
            .collect()
    }
}

/// Linear algebra backend for the Hochschild pass.
trait Field {
    type Row: Clone + Default + Send;
    type Ech: Clone;
    fn row(r: &SparseRow) -> Self::Row;
    fn unit(i: usize) -> Self::Row;
    fn echelon(dim: usize) -> Self::Ech;
    fn insert(e: &mut Self::Ech, r: Self::Row) -> bool;
    fn rank(e: &Self::Ech) -> usize;
    fn kernel(cols: &[Self::Row], nrows: usize) -> Vec<Self::Row>;
    fn apply(cols: &[Self::Row], v: &Self::Row) -> Self::Row;
}

struct Rationals;

impl Field for Rationals {
    type Row = SparseRow;
    type Ech = Echelon;

    fn row(r: &SparseRow) -> SparseRow {
        r.clone()
    }

    fn unit(i: usize) -> SparseRow {
        vec![(i, Q::from_integer(1.into()))]
    }

    fn echelon(dim: usize) -> Echelon {
        Echelon::new(dim)
    }

    fn insert(e: &mut Echelon, r: SparseRow) -> bool {
        e.insert(r)
    }

    fn rank(e: &Echelon) -> usize {
        e.rank()
    }

    fn kernel(cols: &[SparseRow], nrows: usize) -> Vec<SparseRow> {
        SparseMatrix::from_columns(nrows, cols).kernel_sparse()
    }

    fn apply(cols: &[SparseRow], v: &SparseRow) -> SparseRow {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (j, x) in v {
            for (i, y) in &cols[*j] {
                *acc.entry(*i).or_insert_with(Q::zero) += x * y;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

struct ModP;

impl Field for ModP {
    type Row = modp::ModRow;
    type Ech = modp::ModEchelon;

    fn row(r: &SparseRow) -> modp::ModRow {
        modp::reduce_row(r)
    }

    fn unit(i: usize) -> modp::ModRow {
        vec![(i, 1)]
    }

    fn echelon(_: usize) -> modp::ModEchelon {
        modp::ModEchelon::new()
    }

    fn insert(e: &mut modp::ModEchelon, r: modp::ModRow) -> bool {
        e.insert(r)
    }

    fn rank(e: &modp::ModEchelon) -> usize {
        e.rank()
    }

    fn kernel(cols: &[modp::ModRow], nrows: usize) -> Vec<modp::ModRow> {
        modp::kernel(cols, nrows)
    }

    fn apply(cols: &[modp::ModRow], v: &modp::ModRow) -> modp::ModRow {
        modp::apply(cols, v)
    }
}

/// Field used for the ranks of the Hochschild pass. The bimodule maps are
/// always exact over the rationals; `Modular` reduces them modulo the prime
/// `2^61 - 1` before eliminating.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arithmetic {
    Rational,
    #[default]
    Modular,
}

fn add_block(cols: &mut [SparseRow], src_off: usize, tgt_off: usize, m: &SparseMatrix, sign: &Q) {
    for r in 0..m.rows() {
        for (c, v) in m.row(r) {
            cols[src_off + c].push((tgt_off + r, v * sign));
        }
    }
    for col in cols.iter_mut() {
        col.sort_by_key(|(k, _)| *k);
        let mut merged: SparseRow = Vec::with_capacity(col.len());
        for (k, v) in col.drain(..) {
            match merged.last_mut() {
                Some((lk, lv)) if *lk == k => *lv += v,
                _ => merged.push((k, v)),
            }
        }
        merged.retain(|(_, v)| !num_traits::Zero::is_zero(v));
        *col = merged;
    }
}

/// Cohomology of termwise Hochschild homology of a closable complex,
/// without any normalization, in total degrees up to `bound`.
pub fn e2_of_complex(c: &BimoduleComplex, bound: i64) -> Result<TriGradedSeries> {
    e2_of_complex_with(c, bound, Arithmetic::default())
}

pub fn e2_of_complex_with(c: &BimoduleComplex, bound: i64, arithmetic: Arithmetic) -> Result<TriGradedSeries> {
    let engine = Engine::new(c)?;
    let mut out = TriGradedSeries::new(bound);
    let Some((lo, hi)) = c.homological_range() else { return Ok(out) };
    let min_shift = c.terms.iter().map(|t| t.shift).min().unwrap_or(0);
    let mut cells = Vec::new();
    for k in 0..=engine.rank() {
        for q in (min_shift..=bound).filter(|q| (q - min_shift) % 2 == 0) {
            cells.push((k, q));
        }
    }
    let columns: Vec<((usize, i64), Vec<usize>)> = cells
        .into_par_iter()
        .map(|(k, q)| {
            let col = match arithmetic {
                Arithmetic::Rational => engine.column::<Rationals>(k, q, lo, hi),
                Arithmetic::Modular => engine.column::<ModP>(k, q, lo, hi),
            };
            ((k, q), col)
        })
        .collect();
    for ((k, q), col) in columns {
        for (i, d) in col.into_iter().enumerate() {
            out.insert(q, k as i64, lo + i as i64, d);
        }
    }
    Ok(out)
}

/// Hochschild homology of a bimodule: dimensions keyed by
/// `(hochschild degree, q)` up to `bound`.
pub fn hochschild_homology(m: &PresentedBimodule, bound: i64) -> Result<BTreeMap<(i64, i64), usize>> {
    let c = BimoduleComplex {
        left: m.left.clone(),
        right: m.right.clone(),
        terms: vec![Term { module: m.clone(), shift: 0, hdeg: 0, pieces: vec![] }],
        arrows: vec![],
    };
    let s = e2_of_complex(&c, bound)?;
    Ok(s.cells().map(|((q, k, _), d)| ((k, q), d)).collect())
}

/// Overall shift applied to the raw invariant of a braid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub shift: GradingShift,
    pub hochschild: i64,
}

/// The raw invariant is shifted by `k` in Hochschild and homological
/// degree, `2k = Σ ε c - Σ strand colors + Σ component colors`, where the
/// first sum runs over crossings between strands of the same color `c`
/// with sign `ε`.
pub fn normalization_shift(w: &BraidWord) -> Normalization {
    let colorings = w.colorings();
    let mut twice = 0i64;
    for (step, &g) in w.word().iter().enumerate() {
        let p = g.unsigned_abs() as usize - 1;
        let (m, n) = (colorings[step][p], colorings[step][p + 1]);
        if m == n {
            twice += g.signum() * m as i64;
        }
    }
    let colors = w.colors().parts();
    twice -= colors.iter().sum::<usize>() as i64;
    twice += w.components().iter().map(|c| colors[c[0]] as i64).sum::<i64>();
    debug_assert!(twice % 2 == 0, "odd normalization for {w}");
    let k = twice / 2;
    Normalization { shift: GradingShift { q: 0, hom: k }, hochschild: k }
}

/// The normalized triply graded invariant of the closure of `w`, in
/// q-degrees up to `bound`.
pub fn e2_invariant(w: &BraidWord, bound: i64) -> Result<TriGradedSeries> {
    w.check_closable()?;
    let n = normalization_shift(w);
    // the raw invariant is needed up to bound minus the (possibly negative) q-shift
    let raw_bound = bound - n.shift.q;
    let c = rouquier_complex(w, raw_bound)?;
    Ok(e2_of_complex(&c, raw_bound)?.shifted(n.shift, n.hochschild).truncate(bound))
}

/// Same as [`e2_invariant`] but from an already built complex of `w`.
pub fn e2_from_complex(w: &BraidWord, c: &BimoduleComplex, bound: i64) -> Result<TriGradedSeries> {
    let n = normalization_shift(w);
    let raw_bound = bound - n.shift.q;
    Ok(e2_of_complex(c, raw_bound)?.shifted(n.shift, n.hochschild).truncate(bound))
}

/// Decategorified prediction for the Euler characteristic of
/// [`e2_invariant`]: the trace `Tr = Σ c_k z^k` of the colored HOMFLYPT
/// data with `z^k` replaced by `κ^k δ^{N-k}`, `κ = q^{-1/2}`,
/// `δ = (1 + a q)/(1 - q)`, times `q^{±mn/2}` per crossing, divided by
/// `q_P`, times the normalization monomial.
pub fn euler_prediction(w: &BraidWord, bound: i64) -> Result<TruncatedSeries> {
    let hf = crate::hecke::colored_homfly(w)?;
    let colorings = w.colorings();
    let mut crossing_q = 0i64;
    for (step, &g) in w.word().iter().enumerate() {
        let p = g.unsigned_abs() as usize - 1;
        crossing_q += g.signum() * (colorings[step][p] * colorings[step][p + 1]) as i64;
    }
    let n = hf.strands as i64;
    let depth = -hf.denominator.min_exponent().unwrap_or(0);
    let work = bound + 2 * n + crossing_q.abs() + 2 * depth + 4;
    let one = Q::from_integer(1.into());
    let kappa = TruncatedSeries::monomial(work, -1, 0, one.clone());
    let delta = TruncatedSeries::one(work)
        .try_add(&TruncatedSeries::monomial(work, 2, 1, one.clone()))?
        .try_mul(&TruncatedSeries::geometric(work, 2))?;
    let pow = |x: &TruncatedSeries, k: i64| -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::one(work);
        for _ in 0..k {
            acc = acc.try_mul(x)?;
        }
        Ok(acc)
    };
    let mut total = TruncatedSeries::zero(work);
    for (k, c) in hf.numerator.terms() {
        let coeff = TruncatedSeries::from_laurent(work, c);
        let term = coeff.try_mul(&pow(&kappa, k as i64)?)?.try_mul(&pow(&delta, n - k as i64)?)?;
        total = total.try_add(&term)?;
    }
    let denom = TruncatedSeries::from_laurent(work, &hf.denominator).inverse()?;
    let norm = normalization_shift(w);
    let sign = if norm.shift.hom.rem_euclid(2) == 0 { one } else { -one };
    Ok(total
        .try_mul(&denom)?
        .shift(crossing_q + norm.shift.q, norm.hochschild)
        .scale(&sign)
        .truncate(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::parse_braid;
    use crate::symalg::Composition;

    #[test]
    fn koszul_sequences() {
        let r = |p: Vec<usize>| InvariantRing::new('x', Composition::new(p).unwrap());
        assert_eq!(koszul_diagonal(&r(vec![1])).length(), 1);
        let k = koszul_diagonal(&r(vec![2]));
        assert_eq!(k.sequence.iter().map(|s| s.1).collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(koszul_diagonal(&r(vec![1, 1])).length(), 2);
    }

    #[test]
    fn unknot_homology() {
        let m = PresentedBimodule::regular(&Composition::new(vec![1]).unwrap());
        let hh = hochschild_homology(&m, 10).unwrap();
        for q in (0..=10).step_by(2) {
            assert_eq!(hh.get(&(0, q)), Some(&1));
            assert_eq!(hh.get(&(1, q)).copied().unwrap_or(0), usize::from(q >= 2));
        }
        assert!(hh.keys().all(|(k, _)| *k <= 1));
    }

    #[test]
    fn small_links_match_prediction() {
        for s in ["colors: 1 ; word:", "colors: 1 1 ; word: 1", "colors: 1 1 ; word: -1", "colors: 1 1 ; word: 1 1", "colors: 2 ; word:"] {
            let w = parse_braid(s).unwrap();
            let e = e2_invariant(&w, 8).unwrap();
            assert_eq!(e.euler_characteristic(), euler_prediction(&w, 8).unwrap(), "{s}");
        }
    }
}
