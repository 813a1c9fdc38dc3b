//! Singular Soergel bimodules `M_i` of an `(m,n)`-crossing, their graded
//! pieces, spaces of bimodule maps, and the crossing complexes.
//!
//! `M_i = R_{i,m-i,n} ⊗_{R_{i,m+n-i}} R_{i,n-i,m}` is presented on a left
//! alphabet `x` (blocks `i, m-i, n`) and a right alphabet `y` (blocks
//! `i, n-i, m`) by the relations `e_k(x_1..x_i) = e_k(y_1..y_i)` and
//! `e_k(x) = e_k(y)`. Internally each block is represented by its
//! elementary symmetric functions, which generate the invariant ring
//! freely.

pub mod algebra;
pub mod map;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

pub use algebra::{DegreePiece, GradedAlgebra, Tensor};
pub use map::BimoduleMap;
pub use crate::complex::crossing_complex;

use crate::error::{Error, Result};
use crate::exactalg::{Echelon, SparseMatrix, SparseRow, Q};
use crate::symalg::{elementary_of_union, monomials_of_degree, Composition, Poly};

type Generators = Vec<(Poly, u32)>;

/// A graded bimodule over `(R_left, R_right)` presented as a quotient of a
/// polynomial ring in block elementary symmetric functions.
#[derive(Clone)]
pub struct PresentedBimodule {
    pub algebra: Arc<GradedAlgebra>,
    pub left: Composition,
    pub right: Composition,
    generators: Arc<RwLock<Option<(i64, Generators)>>>,
}

impl std::fmt::Debug for PresentedBimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PresentedBimodule({} -> {}, {} generators, {} relations)",
            self.left,
            self.right,
            self.algebra.num_generators(),
            self.algebra.relations().len()
        )
    }
}

/// A bimodule whose internal degree 0 sits in total degree `shift`.
#[derive(Clone, Debug)]
pub struct Shifted {
    pub module: PresentedBimodule,
    pub shift: i64,
}

/// Allocates generator symbols `e_1..e_s` for a sequence of blocks.
struct BlockGens {
    weights: Vec<u32>,
    /// per block: indices of `e_1..e_s`
    blocks: Vec<Vec<usize>>,
}

impl BlockGens {
    fn new() -> Self {
        BlockGens { weights: Vec::new(), blocks: Vec::new() }
    }

    fn add_block(&mut self, size: usize) -> usize {
        let idx: Vec<usize> = (0..size).map(|k| {
            self.weights.push(2 * (k as u32 + 1));
            self.weights.len() - 1
        }).collect();
        self.blocks.push(idx);
        self.blocks.len() - 1
    }

    /// `e_0..=e_s` of a union of blocks, as polynomials in `n` generators.
    fn elementary(&self, n: usize, blocks: &[usize]) -> Vec<Poly> {
        let lists: Vec<Vec<Poly>> = blocks
            .iter()
            .map(|&b| {
                let mut v = vec![Poly::one(n)];
                v.extend(self.blocks[b].iter().map(|&g| Poly::var(n, g)));
                v
            })
            .collect();
        elementary_of_union(n, &lists)
    }
}

fn composition_weights(c: &Composition) -> Vec<u32> {
    c.parts().iter().flat_map(|&p| (1..=p as u32).map(|k| 2 * k)).collect()
}

impl PresentedBimodule {
    pub fn new(algebra: Arc<GradedAlgebra>, left: Composition, right: Composition) -> Self {
        assert_eq!(algebra.left_weights(), composition_weights(&left).as_slice());
        assert_eq!(algebra.right_weights(), composition_weights(&right).as_slice());
        PresentedBimodule { algebra, left, right, generators: Arc::new(RwLock::new(None)) }
    }

    /// Regular bimodule `R_λ` (also the identity braid). An empty context
    /// gives the ground field.
    pub fn regular(parts: &Composition) -> Self {
        let mut g = BlockGens::new();
        for &p in parts.parts() {
            g.add_block(p);
        }
        let n = g.weights.len();
        let gens: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let w = g.weights.clone();
        let built = GradedAlgebra::build(g.weights, vec![], gens.clone(), w.clone(), gens, w);
        PresentedBimodule::new(built.algebra, parts.clone(), parts.clone())
    }

    pub fn graded_dimension(&self, degree: i64) -> Result<usize> {
        if degree < 0 || degree % 2 != 0 {
            return Err(Error::OddDegree(degree));
        }
        Ok(self.algebra.dim(degree))
    }

    /// Generators of the bimodule as a module over `R_left ⊗ R_right`, in
    /// all degrees up to `bound`: standard monomials spanning
    /// `A_e / (R_+ A)_e`.
    pub fn module_generators(&self, bound: i64) -> Vec<(Poly, u32)> {
        if let Some((b, gens)) = &*self.generators.read().unwrap() {
            if *b >= bound {
                return gens.iter().filter(|(_, d)| *d as i64 <= bound).cloned().collect();
            }
        }
        let alg = &self.algebra;
        let bw = alg.boundary_weights();
        let mut gens = Vec::new();
        for e in (0..=bound).step_by(2) {
            let dim = alg.dim(e);
            if dim == 0 {
                continue;
            }
            let mut span = Echelon::new(dim);
            for (b, &w) in bw.iter().enumerate() {
                let w = w as i64;
                if w > e {
                    continue;
                }
                let mut mono = vec![0u16; bw.len()];
                mono[b] = 1;
                let f = alg.boundary_monomial(&mono);
                let m = alg.multiplication(&f, w as u32, e - w);
                for col in m.columns() {
                    span.insert(col);
                }
            }
            for i in 0..dim {
                let unit: SparseRow = vec![(i, Q::from_integer(1.into()))];
                if span.insert(unit.clone()) {
                    gens.push((alg.lift(&unit, e), e as u32));
                }
            }
        }
        *self.generators.write().unwrap() = Some((bound, gens.clone()));
        gens
    }
}

/// The bimodule `M_i` for an `(m,n)`-crossing, over `(R_{m,n}, R_{n,m})`.
pub fn soergel_m(m: usize, n: usize, i: usize) -> Result<PresentedBimodule> {
    if m == 0 || n == 0 || i > m.min(n) {
        return Err(Error::OrbitOutOfRange { m, n, i });
    }
    let mut g = BlockGens::new();
    let x1 = g.add_block(i);
    let x2 = g.add_block(m - i);
    let xy = g.add_block(n);
    let y1 = g.add_block(i);
    let z2 = g.add_block(n - i);
    let z3 = g.add_block(m);
    let nv = g.weights.len();
    let mut rels = Vec::new();
    let ex1 = g.elementary(nv, &[x1]);
    let ey1 = g.elementary(nv, &[y1]);
    for k in 1..=i {
        rels.push(ex1[k].sub(&ey1[k]));
    }
    let ex = g.elementary(nv, &[x1, x2, xy]);
    let ey = g.elementary(nv, &[y1, z2, z3]);
    for k in 1..=m + n {
        rels.push(ex[k].sub(&ey[k]));
    }
    let left_a = g.elementary(nv, &[x1, x2]);
    let left_b = g.elementary(nv, &[xy]);
    let right_a = g.elementary(nv, &[y1, z2]);
    let right_b = g.elementary(nv, &[z3]);
    let left: Vec<Poly> = left_a[1..].iter().chain(&left_b[1..]).cloned().collect();
    let right: Vec<Poly> = right_a[1..].iter().chain(&right_b[1..]).cloned().collect();
    let lc = Composition::new(vec![m, n])?;
    let rc = Composition::new(vec![n, m])?;
    let built = GradedAlgebra::build(g.weights, rels, left, composition_weights(&lc), right, composition_weights(&rc));
    Ok(PresentedBimodule::new(built.algebra, lc, rc))
}

/// Basis of the bimodule maps `M -> N` of total degree `degree` (internal
/// degree `degree + M.shift - N.shift`), found by solving for generator
/// images that respect every relation among the generators up to `bound`.
pub fn hom_space(source: &Shifted, target: &Shifted, degree: i64, bound: i64) -> Result<Vec<BimoduleMap>> {
    let m = &source.module;
    let n = &target.module;
    if m.left != n.left || m.right != n.right {
        return Err(Error::RingMismatch(format!("{}|{} vs {}|{}", m.left, m.right, n.left, n.right)));
    }
    let internal = degree + source.shift - target.shift;
    let ma = &m.algebra;
    let na = &n.algebra;
    let gens = m.module_generators(bound);
    let bw = ma.boundary_weights();
    // unknown blocks: generator j gets coordinates in N_{deg_j + internal}
    let mut offsets = Vec::new();
    let mut total = 0usize;
    for (_, d) in &gens {
        offsets.push(total);
        total += na.dim(*d as i64 + internal);
    }
    if total == 0 {
        return Ok(Vec::new());
    }
    let mut constraints: Vec<SparseRow> = Vec::new();
    for e in (0..=bound).step_by(2) {
        let tdeg = e + internal;
        let tdim = na.dim(tdeg);
        // spanning set of M_e: c * g_j
        let mut span_cols: Vec<SparseRow> = Vec::new();
        let mut span_meta: Vec<(usize, Vec<u16>)> = Vec::new();
        for (j, (g, d)) in gens.iter().enumerate() {
            let d = *d as i64;
            if d > e {
                continue;
            }
            for cm in monomials_of_degree(&bw, (e - d) as u32) {
                span_cols.push(ma.normal_form(&ma.boundary_monomial(&cm).mul(g), e));
                span_meta.push((j, cm));
            }
        }
        if span_cols.is_empty() || tdim == 0 {
            continue;
        }
        let s = SparseMatrix::from_columns(ma.dim(e), &span_cols);
        let kernel = s.kernel_sparse();
        if kernel.is_empty() {
            continue;
        }
        // L_(c,j): N_{deg_j+internal} -> N_{tdeg}, multiplication by c
        let mut mults: HashMap<usize, SparseMatrix> = HashMap::new();
        for lambda in kernel {
            let mut block_rows: Vec<HashMap<usize, Q>> = vec![HashMap::new(); tdim];
            for (idx, coef) in &lambda {
                let (j, cm) = &span_meta[*idx];
                let dj = gens[*j].1 as i64 + internal;
                let mult = mults.entry(*idx).or_insert_with(|| {
                    let f = na.boundary_monomial(cm);
                    let w: u32 = cm.iter().zip(&bw).map(|(a, b)| *a as u32 * b).sum();
                    na.multiplication(&f, w, dj)
                });
                for (r, out) in block_rows.iter_mut().enumerate() {
                    for (c, v) in mult.row(r) {
                        let e = out.entry(offsets[*j] + c).or_insert_with(Q::zero);
                        *e += coef * v;
                    }
                }
            }
            for row in block_rows {
                let mut r: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                r.sort_by_key(|(k, _)| *k);
                if !r.is_empty() {
                    constraints.push(r);
                }
            }
        }
    }
    let mut cm = SparseMatrix::zero(0, total);
    if !constraints.is_empty() {
        let triples = constraints.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v.clone())));
        cm = SparseMatrix::from_triples(constraints.len(), total, triples);
    }
    let solutions = cm.kernel_sparse();
    Ok(solutions
        .into_iter()
        .map(|sol| {
            let images = gens
                .iter()
                .enumerate()
                .map(|(j, (_, d))| {
                    let dj = *d as i64 + internal;
                    let len = na.dim(dj);
                    let v: SparseRow = sol
                        .iter()
                        .filter(|(k, _)| *k >= offsets[j] && *k < offsets[j] + len)
                        .map(|(k, x)| (k - offsets[j], x.clone()))
                        .collect();
                    if v.is_empty() {
                        Poly::zero(na.num_generators())
                    } else {
                        na.lift(&v, dj)
                    }
                })
                .collect();
            BimoduleMap::generated(ma.clone(), na.clone(), internal, gens.clone(), images)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: &PresentedBimodule, top: i64) -> Vec<usize> {
        (0..=top).step_by(2).map(|d| m.graded_dimension(d).unwrap()).collect()
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(dims(&soergel_m(1, 1, 1).unwrap(), 4), vec![1, 2, 3]);
        assert_eq!(dims(&soergel_m(1, 1, 0).unwrap(), 4), vec![1, 3, 5]);
        assert_eq!(soergel_m(2, 1, 1).unwrap().graded_dimension(2).unwrap(), 3);
        assert!(soergel_m(1, 1, 1).unwrap().graded_dimension(3).is_err());
        assert!(soergel_m(1, 2, 2).is_err());
    }

    #[test]
    fn lowest_hom_degrees() {
        let bound = 8;
        for (m, n) in [(1usize, 1usize), (1, 2), (2, 2)] {
            for i in 0..m.min(n) {
                let a = Shifted { module: soergel_m(m, n, i).unwrap(), shift: 0 };
                let b = Shifted { module: soergel_m(m, n, i + 1).unwrap(), shift: 0 };
                let lowest = |s: &Shifted, t: &Shifted| {
                    (-12..=12).step_by(2).find(|&g| !hom_space(s, t, g, bound).unwrap().is_empty())
                };
                assert_eq!(lowest(&a, &b), Some(-2 * i as i64), "up {m} {n} {i}");
                assert_eq!(lowest(&b, &a), Some(2 * i as i64 + 2), "down {m} {n} {i}");
            }
        }
    }
}
