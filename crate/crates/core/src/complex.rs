//! Bounded complexes of presented bimodules: tensor products along braid
//! words and Gaussian elimination.

use std::collections::{BTreeMap, HashMap};
use std::ops::Add;
use std::sync::Arc;

use num_traits::One;

use crate::bimod::{hom_space, soergel_m, BimoduleMap, GradedAlgebra, PresentedBimodule, Shifted, Tensor};
use crate::error::{Error, Result};
use crate::exactalg::Q;
use crate::knotio::BraidWord;
use crate::symalg::Composition;

/// Shift in q (cohomological units, i.e. powers of `q^{1/2}`) and in
/// homological degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GradingShift {
    pub q: i64,
    pub hom: i64,
}

impl Add for GradingShift {
    type Output = GradingShift;

    fn add(self, o: GradingShift) -> GradingShift {
        GradingShift { q: self.q + o.q, hom: self.hom + o.hom }
    }
}

/// One `M_i` factor of a term: an `(m,n)`-crossing bimodule whose left
/// boundary starts at strand `strand`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub strand: usize,
    pub m: usize,
    pub n: usize,
    pub i: usize,
}

#[derive(Clone, Debug)]
pub struct Term {
    pub module: PresentedBimodule,
    /// Total degree of internal degree 0.
    pub shift: i64,
    pub hdeg: i64,
    /// Tensor factors from left to right (empty for a regular bimodule).
    pub pieces: Vec<Piece>,
}

impl Term {
    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.module.algebra
    }
}

/// A component of the differential; its internal degree is
/// `shift(from) - shift(to)`.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub map: BimoduleMap,
}

#[derive(Clone, Debug)]
pub struct BimoduleComplex {
    pub left: Composition,
    pub right: Composition,
    pub terms: Vec<Term>,
    pub arrows: Vec<Arrow>,
}

impl BimoduleComplex {
    /// The one-term complex of the regular bimodule.
    pub fn identity(colors: &Composition) -> Self {
        BimoduleComplex {
            left: colors.clone(),
            right: colors.clone(),
            terms: vec![Term { module: PresentedBimodule::regular(colors), shift: 0, hdeg: 0, pieces: vec![] }],
            arrows: vec![],
        }
    }

    pub fn homological_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.iter().map(|t| t.hdeg).min()?;
        let hi = self.terms.iter().map(|t| t.hdeg).max()?;
        Some((lo, hi))
    }

    pub fn shifted(mut self, s: GradingShift) -> Self {
        for t in &mut self.terms {
            t.shift += s.q;
            t.hdeg += s.hom;
        }
        self
    }

    /// Total dimension of all terms in total degree `j`.
    pub fn graded_dimension(&self, j: i64) -> usize {
        self.terms.iter().map(|t| t.algebra().dim(j - t.shift)).sum()
    }

    /// Sum of the graded dimensions up to total degree `bound`.
    pub fn size(&self, bound: i64) -> usize {
        self.terms.iter().map(|t| (0..=bound - t.shift).step_by(2).map(|e| t.algebra().dim(e)).sum::<usize>()).sum()
    }

    /// Multiplies the arrow `k` by `c`.
    pub fn rescale_arrow(&mut self, k: usize, c: Q) {
        self.arrows[k].map = self.arrows[k].map.scaled(c);
    }

    /// Checks `d∘d = 0` in every total degree up to `bound`.
    pub fn check_square_zero(&self, bound: i64) -> Result<()> {
        let mut by_pair: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (a, x) in self.arrows.iter().enumerate() {
            for (b, y) in self.arrows.iter().enumerate() {
                if x.to == y.from {
                    by_pair.entry((x.from, y.to)).or_default().push((a, b));
                }
            }
        }
        for ((from, _), paths) in by_pair {
            let s = self.terms[from].shift;
            for e in (0..=bound - s).step_by(2) {
                let mut acc: Option<crate::exactalg::SparseMatrix> = None;
                for (a, b) in &paths {
                    let x = &self.arrows[*a].map;
                    let y = &self.arrows[*b].map;
                    let m = y.matrix(e + x.degree()).mul(&x.matrix(e));
                    acc = Some(match acc {
                        None => m,
                        Some(p) => p.add(&m),
                    });
                }
                if acc.is_some_and(|m| !m.is_zero()) {
                    return Err(Error::NotAComplex(format!("d∘d is nonzero from term {from} in degree {e}")));
                }
            }
        }
        Ok(())
    }

    /// Every term tensored over the ground field with the regular
    /// bimodules of the spectator colors on either side.
    pub fn induce(&self, left_context: &Composition, right_context: &Composition) -> Result<BimoduleComplex> {
        if left_context.is_empty() && right_context.is_empty() {
            return Ok(self.clone());
        }
        let lspec = (!left_context.is_empty()).then(|| PresentedBimodule::regular(left_context).algebra);
        let rspec = (!right_context.is_empty()).then(|| PresentedBimodule::regular(right_context).algebra);
        let cat = |c: &Composition| {
            let mut p = left_context.parts().to_vec();
            p.extend_from_slice(c.parts());
            p.extend_from_slice(right_context.parts());
            Composition::new(p)
        };
        let left = cat(&self.left)?;
        let right = cat(&self.right)?;
        let offset = left_context.len();
        let mut tensors = Vec::new();
        let mut terms = Vec::new();
        for t in &self.terms {
            let mut factors = Vec::new();
            factors.extend(lspec.clone());
            factors.push(t.algebra().clone());
            factors.extend(rspec.clone());
            let tensor = Tensor::new(factors, false);
            let module = PresentedBimodule::new(tensor.algebra.clone(), left.clone(), right.clone());
            let pieces = t.pieces.iter().map(|p| Piece { strand: p.strand + offset, ..*p }).collect();
            terms.push(Term { module, shift: t.shift, hdeg: t.hdeg, pieces });
            tensors.push(tensor);
        }
        let middle = usize::from(lspec.is_some());
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                let mut f: Vec<Option<BimoduleMap>> = vec![None; tensors[a.from].factors.len()];
                f[middle] = Some(a.map.clone());
                Arrow { from: a.from, to: a.to, map: BimoduleMap::tensor(tensors[a.from].clone(), tensors[a.to].clone(), f) }
            })
            .collect();
        Ok(BimoduleComplex { left, right, terms, arrows })
    }

    /// Homological degree of a term, as a sign `(-1)^hdeg`.
    fn sign(&self, t: usize) -> Q {
        if self.terms[t].hdeg.rem_euclid(2) == 0 {
            Q::one()
        } else {
            -Q::one()
        }
    }
}

/// Total complex of the termwise tensor product over the shared ring.
pub fn tensor(f: &BimoduleComplex, g: &BimoduleComplex) -> Result<BimoduleComplex> {
    if f.right != g.left {
        return Err(Error::RingMismatch(format!("right ring {} against left ring {}", f.right, g.left)));
    }
    let mut index = HashMap::new();
    let mut tensors = Vec::new();
    let mut terms = Vec::new();
    for (a, ta) in f.terms.iter().enumerate() {
        for (b, tb) in g.terms.iter().enumerate() {
            let tensor = Tensor::new(vec![ta.algebra().clone(), tb.algebra().clone()], true);
            let module = PresentedBimodule::new(tensor.algebra.clone(), f.left.clone(), g.right.clone());
            let mut pieces = ta.pieces.clone();
            pieces.extend_from_slice(&tb.pieces);
            index.insert((a, b), terms.len());
            terms.push(Term { module, shift: ta.shift + tb.shift, hdeg: ta.hdeg + tb.hdeg, pieces });
            tensors.push(tensor);
        }
    }
    let mut arrows = Vec::new();
    for x in &f.arrows {
        for b in 0..g.terms.len() {
            let (s, t) = (index[&(x.from, b)], index[&(x.to, b)]);
            let map = BimoduleMap::tensor(tensors[s].clone(), tensors[t].clone(), vec![Some(x.map.clone()), None]);
            arrows.push(Arrow { from: s, to: t, map });
        }
    }
    for y in &g.arrows {
        for a in 0..f.terms.len() {
            let (s, t) = (index[&(a, y.from)], index[&(a, y.to)]);
            let map = BimoduleMap::tensor(tensors[s].clone(), tensors[t].clone(), vec![None, Some(y.map.clone())]);
            let sign = f.sign(a);
            let map = if sign.is_one() { map } else { map.scaled(sign) };
            arrows.push(Arrow { from: s, to: t, map });
        }
    }
    Ok(BimoduleComplex { left: f.left.clone(), right: g.right.clone(), terms, arrows })
}

/// Total IC-type shift of `M_i` in a crossing complex, by sign.
pub fn crossing_shift(m: usize, n: usize, i: usize, positive: bool) -> i64 {
    let i = i as i64;
    if positive {
        i * i + i
    } else {
        i * i - i - 2 * (m * n) as i64
    }
}

/// The complex attached to a single `(m,n)`-crossing: `M_0 ... M_min(m,n)`
/// with one-dimensional lowest-degree differentials. For the positive
/// crossing `M_i` sits in homological degree `-i` and the differential
/// lowers `i`; for the negative one `M_i` sits in degree `i`.
pub fn crossing_complex(m: usize, n: usize, positive: bool, bound: i64) -> Result<BimoduleComplex> {
    let k = m.min(n);
    let mut terms = Vec::new();
    for i in 0..=k {
        let module = soergel_m(m, n, i)?;
        let hdeg = if positive { -(i as i64) } else { i as i64 };
        terms.push(Term { module, shift: crossing_shift(m, n, i, positive), hdeg, pieces: vec![Piece { strand: 0, m, n, i }] });
    }
    let mut arrows = Vec::new();
    for i in 0..k {
        let (from, to) = if positive { (i + 1, i) } else { (i, i + 1) };
        let s = Shifted { module: terms[from].module.clone(), shift: terms[from].shift };
        let t = Shifted { module: terms[to].module.clone(), shift: terms[to].shift };
        let basis = hom_space(&s, &t, 0, bound)?;
        let map = basis
            .into_iter()
            .next()
            .ok_or_else(|| Error::NotAComplex(format!("no differential for ({m},{n}) between M_{from} and M_{to}")))?;
        arrows.push(Arrow { from, to, map });
    }
    let c = BimoduleComplex {
        left: Composition::new(vec![m, n])?,
        right: Composition::new(vec![n, m])?,
        terms,
        arrows,
    };
    c.check_square_zero(bound)?;
    Ok(c)
}

type CrossingKey = (usize, usize, bool, i64);

fn cached_crossing(m: usize, n: usize, positive: bool, bound: i64) -> Result<BimoduleComplex> {
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<CrossingKey, BimoduleComplex>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&(m, n, positive, bound)) {
        return Ok(c.clone());
    }
    let c = crossing_complex(m, n, positive, bound)?;
    cache.lock().unwrap().insert((m, n, positive, bound), c.clone());
    Ok(c)
}

/// Options for building the complex of a braid.
#[derive(Clone, Debug, Default)]
pub struct RouquierOptions {
    /// Run Gaussian elimination after every tensor step.
    pub minimize: bool,
    /// Multiply the differentials of the `k`-th crossing by these scalars
    /// (cycled); empty means no rescaling.
    pub scales: Vec<Q>,
}

/// The complex of bimodules of a colored braid word, up to total degree
/// `bound`.
pub fn rouquier_complex(w: &BraidWord, bound: i64) -> Result<BimoduleComplex> {
    rouquier_complex_with(w, bound, &RouquierOptions { minimize: true, scales: vec![] })
}

pub fn rouquier_complex_with(w: &BraidWord, bound: i64, opts: &RouquierOptions) -> Result<BimoduleComplex> {
    let colorings = w.colorings();
    let mut acc = BimoduleComplex::identity(w.colors());
    let mut scale_idx = 0;
    for (step, &g) in w.word().iter().enumerate() {
        let col = &colorings[step];
        let p = g.unsigned_abs() as usize - 1;
        let mut c = cached_crossing(col[p], col[p + 1], g > 0, bound)?;
        if !opts.scales.is_empty() {
            for k in 0..c.arrows.len() {
                c.rescale_arrow(k, opts.scales[scale_idx % opts.scales.len()].clone());
                scale_idx += 1;
            }
        }
        let c = c.induce(&Composition::context(col[..p].to_vec())?, &Composition::context(col[p + 2..].to_vec())?)?;
        acc = if step == 0 { c } else { tensor(&acc, &c)? };
        if opts.minimize {
            acc = gaussian_eliminate(&acc, bound);
        }
    }
    Ok(acc)
}

/// Repeatedly cancels arrows that are isomorphisms (up to total degree
/// `bound`), replacing `x → b ← a → y` by the zigzag `x → y`.
pub fn gaussian_eliminate(c: &BimoduleComplex, bound: i64) -> BimoduleComplex {
    let mut c = c.clone();
    while let Some(k) = find_isomorphism(&c, bound) {
        c = cancel(&c, k);
    }
    c
}

fn find_isomorphism(c: &BimoduleComplex, bound: i64) -> Option<usize> {
    c.arrows.iter().position(|a| {
        let (s, t) = (&c.terms[a.from], &c.terms[a.to]);
        s.shift == t.shift && a.map.is_isomorphism_up_to(bound - s.shift)
    })
}

fn cancel(c: &BimoduleComplex, k: usize) -> BimoduleComplex {
    let iso = &c.arrows[k];
    let (a, b) = (iso.from, iso.to);
    let inv = iso.map.inverse();
    let keep: Vec<usize> = (0..c.terms.len()).filter(|&t| t != a && t != b).collect();
    let renum: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let mut maps: BTreeMap<(usize, usize), Vec<BimoduleMap>> = BTreeMap::new();
    for (j, x) in c.arrows.iter().enumerate() {
        if j == k || x.from == a || x.from == b || x.to == a || x.to == b {
            continue;
        }
        maps.entry((x.from, x.to)).or_default().push(x.map.clone());
    }
    for x in c.arrows.iter().filter(|x| x.to == b && x.from != a) {
        for y in c.arrows.iter().filter(|y| y.from == a && y.to != b) {
            let zigzag = x.map.then(&inv).then(&y.map).scaled(-Q::one());
            maps.entry((x.from, y.to)).or_default().push(zigzag);
        }
    }
    let arrows = maps
        .into_iter()
        .map(|((f, t), ms)| {
            let map = if ms.len() == 1 {
                ms.into_iter().next().unwrap()
            } else {
                BimoduleMap::combination(ms.into_iter().map(|m| (Q::one(), m)).collect())
            };
            Arrow { from: renum[&f], to: renum[&t], map }
        })
        .collect();
    let terms = keep.iter().map(|&t| c.terms[t].clone()).collect();
    BimoduleComplex { left: c.left.clone(), right: c.right.clone(), terms, arrows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_complexes_square_to_zero() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            for pos in [true, false] {
                let c = crossing_complex(m, n, pos, 8).unwrap();
                assert_eq!(c.terms.len(), m.min(n) + 1);
                assert_eq!(c.arrows.len(), m.min(n));
            }
        }
    }

    #[test]
    fn identity_differential_cancels() {
        let m = soergel_m(1, 1, 0).unwrap();
        let c = BimoduleComplex {
            left: m.left.clone(),
            right: m.right.clone(),
            terms: vec![
                Term { module: m.clone(), shift: 0, hdeg: 0, pieces: vec![] },
                Term { module: m.clone(), shift: 0, hdeg: 1, pieces: vec![] },
            ],
            arrows: vec![Arrow { from: 0, to: 1, map: BimoduleMap::identity(m.algebra.clone()) }],
        };
        let r = gaussian_eliminate(&c, 8);
        assert!(r.terms.is_empty());
        let again = gaussian_eliminate(&crossing_complex(1, 1, true, 8).unwrap(), 8);
        assert_eq!(again.terms.len(), 2);
    }

    #[test]
    fn unit_tensor_keeps_dimensions() {
        let c = crossing_complex(1, 1, true, 8).unwrap();
        let id = BimoduleComplex::identity(&c.left);
        let t = tensor(&id, &c).unwrap();
        for j in (0..=8).step_by(2) {
            assert_eq!(t.graded_dimension(j), c.graded_dimension(j));
        }
        t.check_square_zero(8).unwrap();
    }

    #[test]
    fn induced_dimension_counts() {
        let c = crossing_complex(1, 1, true, 6).unwrap();
        let ctx = Composition::new(vec![1]).unwrap();
        let ind = c.induce(&Composition::context(vec![]).unwrap(), &ctx).unwrap();
        assert_eq!(ind.left.parts(), &[1, 1, 1]);
        for (t, orig) in ind.terms.iter().zip(&c.terms) {
            assert_eq!(t.algebra().dim(2), orig.algebra().dim(2) + 1);
        }
        ind.check_square_zero(6).unwrap();
    }

    #[test]
    fn braid_complexes_are_complexes() {
        let w = BraidWord::uncolored(3, vec![1, -2, 1]).unwrap();
        let c = rouquier_complex(&w, 6).unwrap();
        assert_eq!(c.terms.len(), 8);
        c.check_square_zero(6).unwrap();
    }
}
