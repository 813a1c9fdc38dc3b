//! Graded commutative algebras `k[g_1..g_r] / I` realised degree by degree.
//!
//! Every bimodule in the engine is such an algebra together with two lists
//! of boundary elements: the images of the generators of the left and the
//! right invariant rings. Generators are block elementary symmetric
//! functions, so all degrees are even.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::exactalg::{Echelon, SparseMatrix, SparseRow};
use crate::symalg::{monomials_of_degree, weighted_degree, Monomial, Poly};

/// One graded piece `A_e`: the monomials of degree `e` in the generators,
/// the relation subspace `I_e` in reduced echelon form, and the standard
/// monomials (non-pivot columns) forming a basis of the quotient.
#[derive(Debug)]
pub struct DegreePiece {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: Echelon,
    basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

impl DegreePiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The standard monomial representing basis vector `i`.
    pub fn basis_monomial(&self, i: usize) -> &Monomial {
        &self.monomials[self.basis[i]]
    }

    pub fn basis_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.basis.iter().map(|&i| &self.monomials[i])
    }

    fn reduce_row(&self, row: SparseRow) -> SparseRow {
        let r = self.relations.reduce(&row);
        let mut out: SparseRow = r.into_iter().map(|(c, v)| (self.basis_pos[&c], v)).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }
}

#[derive(Debug)]
pub struct GradedAlgebra {
    weights: Vec<u32>,
    relations: Vec<Poly>,
    rel_degrees: Vec<u32>,
    left: Vec<Poly>,
    right: Vec<Poly>,
    left_weights: Vec<u32>,
    right_weights: Vec<u32>,
    pieces: RwLock<HashMap<u32, Arc<DegreePiece>>>,
    boundary_mult: RwLock<HashMap<(usize, i64), Arc<SparseMatrix>>>,
}

/// Result of building an algebra: the algebra and, for every generator of
/// the unsimplified presentation, its image in the simplified one.
pub struct Built {
    pub algebra: Arc<GradedAlgebra>,
    pub substitution: Vec<Poly>,
    /// Old index of each surviving generator.
    pub kept: Vec<usize>,
}

impl GradedAlgebra {
    /// Builds `k[g] / (relations)` and eliminates every generator that some
    /// relation expresses linearly in terms of the others.
    pub fn build(
        weights: Vec<u32>,
        relations: Vec<Poly>,
        left: Vec<Poly>,
        left_weights: Vec<u32>,
        right: Vec<Poly>,
        right_weights: Vec<u32>,
    ) -> Built {
        let n = weights.len();
        let mut relations: Vec<Poly> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let mut left = left;
        let mut right = right;
        let mut substitution: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let mut alive = vec![true; n];
        loop {
            let mut found = None;
            'search: for (ri, r) in relations.iter().enumerate() {
                for g in 0..n {
                    if !alive[g] {
                        continue;
                    }
                    let mut unit = vec![0u16; n];
                    unit[g] = 1;
                    let c = r.coeff(&unit);
                    if c.is_zero() {
                        continue;
                    }
                    let others_free = r.terms().all(|(m, _)| m == &unit || m[g] == 0);
                    if others_free {
                        found = Some((ri, g, c));
                        break 'search;
                    }
                }
            }
            let Some((ri, g, c)) = found else { break };
            let r = relations.remove(ri);
            let mut unit = vec![0u16; n];
            unit[g] = 1;
            let mut rest = r.clone();
            rest.add_term(unit, -c.clone());
            let value = rest.scale(&(-c.recip()));
            let mut images: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
            images[g] = value;
            let apply = |p: &Poly| p.compose(&images);
            relations = relations.iter().map(apply).filter(|p| !p.is_zero()).collect();
            left = left.iter().map(apply).collect();
            right = right.iter().map(apply).collect();
            substitution = substitution.iter().map(apply).collect();
            alive[g] = false;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        let squash = |p: &Poly| p.drop_vars(&keep);
        let weights: Vec<u32> = keep.iter().map(|&i| weights[i]).collect();
        let relations: Vec<Poly> = relations.iter().map(squash).collect();
        let rel_degrees = relations
            .iter()
            .map(|r| r.homogeneous_degree(&weights).expect("relations must be homogeneous"))
            .collect();
        let algebra = GradedAlgebra {
            left: left.iter().map(squash).collect(),
            right: right.iter().map(squash).collect(),
            weights,
            relations,
            rel_degrees,
            left_weights,
            right_weights,
            pieces: RwLock::new(HashMap::new()),
            boundary_mult: RwLock::new(HashMap::new()),
        };
        Built { algebra: Arc::new(algebra), substitution: substitution.iter().map(squash).collect(), kept: keep }
    }

    pub fn num_generators(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn left(&self) -> &[Poly] {
        &self.left
    }

    pub fn right(&self) -> &[Poly] {
        &self.right
    }

    pub fn left_weights(&self) -> &[u32] {
        &self.left_weights
    }

    pub fn right_weights(&self) -> &[u32] {
        &self.right_weights
    }

    /// Degree piece `A_e`; odd or negative degrees are zero.
    pub fn piece(&self, e: i64) -> Arc<DegreePiece> {
        let key = if e < 0 || e % 2 != 0 { u32::MAX } else { e as u32 };
        if let Some(p) = self.pieces.read().unwrap().get(&key) {
            return p.clone();
        }
        let piece = Arc::new(if key == u32::MAX { empty_piece() } else { self.compute_piece(key) });
        self.pieces.write().unwrap().entry(key).or_insert(piece).clone()
    }

    pub fn dim(&self, e: i64) -> usize {
        self.piece(e).dim()
    }

    fn compute_piece(&self, e: u32) -> DegreePiece {
        let monomials = monomials_of_degree(&self.weights, e);
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut relations = Echelon::new(monomials.len());
        for (r, &d) in self.relations.iter().zip(&self.rel_degrees) {
            if d > e {
                continue;
            }
            for b in monomials_of_degree(&self.weights, e - d) {
                let mut row: SparseRow = r
                    .terms()
                    .map(|(m, c)| {
                        let mm: Monomial = m.iter().zip(&b).map(|(x, y)| x + y).collect();
                        (index[&mm], c.clone())
                    })
                    .collect();
                row.sort_by_key(|(k, _)| *k);
                relations.insert(row);
            }
        }
        relations.reduce_fully();
        let basis: Vec<usize> = (0..monomials.len()).filter(|&c| !relations.is_pivot(c)).collect();
        let basis_pos = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        DegreePiece { monomials, index, relations, basis, basis_pos }
    }

    /// Coordinates of a homogeneous polynomial of degree `e` in the
    /// standard-monomial basis of `A_e`.
    pub fn normal_form(&self, p: &Poly, e: i64) -> SparseRow {
        if p.is_zero() {
            return Vec::new();
        }
        let piece = self.piece(e);
        let mut row: SparseRow = p
            .terms()
            .map(|(m, c)| {
                let i = *piece.index.get(m).unwrap_or_else(|| panic!("term of wrong degree in normal_form (expected {e})"));
                (i, c.clone())
            })
            .collect();
        row.sort_by_key(|(k, _)| *k);
        piece.reduce_row(row)
    }

    /// Polynomial representative of a coordinate vector in `A_e`.
    pub fn lift(&self, v: &SparseRow, e: i64) -> Poly {
        let piece = self.piece(e);
        let mut p = Poly::zero(self.num_generators());
        for (i, c) in v {
            p.add_term(piece.basis_monomial(*i).clone(), c.clone());
        }
        p
    }

    /// Degree of a homogeneous element of the left/right boundary ring
    /// monomial `m` over `left_weights ++ right_weights`.
    pub fn boundary_weights(&self) -> Vec<u32> {
        self.left_weights.iter().chain(&self.right_weights).copied().collect()
    }

    /// Image in the algebra of a monomial over the boundary generators
    /// (left generators first, then right).
    pub fn boundary_monomial(&self, m: &[u16]) -> Poly {
        let mut p = Poly::one(self.num_generators());
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let g = if i < self.left.len() { &self.left[i] } else { &self.right[i - self.left.len()] };
            p = p.mul(&g.pow(e as u32));
        }
        p
    }

    /// Elements `left[j] - right[j]`, defined when both sides carry the
    /// same ring.
    pub fn closure_sequence(&self) -> Option<Vec<(Poly, u32)>> {
        if self.left_weights != self.right_weights {
            return None;
        }
        Some(
            self.left
                .iter()
                .zip(&self.right)
                .zip(&self.left_weights)
                .map(|((l, r), w)| (l.sub(r), *w))
                .collect(),
        )
    }

    /// Multiplication by the `b`-th boundary generator (left ones first),
    /// `A_e -> A_{e+w_b}`.
    pub fn boundary_multiplication(&self, b: usize, e: i64) -> Arc<SparseMatrix> {
        if let Some(m) = self.boundary_mult.read().unwrap().get(&(b, e)) {
            return m.clone();
        }
        let (g, w) = if b < self.left.len() {
            (&self.left[b], self.left_weights[b])
        } else {
            (&self.right[b - self.left.len()], self.right_weights[b - self.left.len()])
        };
        let m = Arc::new(self.multiplication(g, w, e));
        self.boundary_mult.write().unwrap().entry((b, e)).or_insert(m).clone()
    }

    /// Multiplication by a homogeneous polynomial `f` of degree `deg_f`,
    /// as a map `A_e -> A_{e+deg_f}` (columns are images of basis vectors).
    pub fn multiplication(&self, f: &Poly, deg_f: u32, e: i64) -> SparseMatrix {
        let src = self.piece(e);
        let tgt_dim = self.dim(e + deg_f as i64);
        let cols: Vec<SparseRow> =
            src.basis_monomials().map(|m| self.normal_form(&f.mul_monomial(m), e + deg_f as i64)).collect();
        SparseMatrix::from_columns(tgt_dim, &cols)
    }
}

fn empty_piece() -> DegreePiece {
    DegreePiece {
        monomials: Vec::new(),
        index: HashMap::new(),
        relations: Echelon::new(0),
        basis: Vec::new(),
        basis_pos: HashMap::new(),
    }
}

/// A tensor product of algebras, possibly glued along shared boundary
/// rings, with the embedding of every factor's generators.
#[derive(Debug, Clone)]
pub struct Tensor {
    pub algebra: Arc<GradedAlgebra>,
    pub factors: Vec<Arc<GradedAlgebra>>,
    /// `iota[f][g]`: image of generator `g` of factor `f`.
    pub iota: Vec<Vec<Poly>>,
    /// For each surviving generator: `(factor, generator)` it came from.
    pub origin: Vec<(usize, usize)>,
}

impl Tensor {
    /// Tensor product of `factors`. With `glue`, consecutive factors are
    /// tensored over the shared ring (right boundary of one with left
    /// boundary of the next); otherwise over the ground field, with boundary
    /// lists concatenated.
    pub fn new(factors: Vec<Arc<GradedAlgebra>>, glue: bool) -> Tensor {
        let sizes: Vec<usize> = factors.iter().map(|f| f.num_generators()).collect();
        let total: usize = sizes.iter().sum();
        let mut offsets = Vec::new();
        let mut o = 0;
        for s in &sizes {
            offsets.push(o);
            o += s;
        }
        let weights: Vec<u32> = factors.iter().flat_map(|f| f.weights().iter().copied()).collect();
        let emb = |f: usize, p: &Poly| p.embed(total, offsets[f]);
        let mut relations = Vec::new();
        for (f, a) in factors.iter().enumerate() {
            relations.extend(a.relations().iter().map(|r| emb(f, r)));
        }
        let (left, left_w, right, right_w);
        if glue {
            for f in 0..factors.len().saturating_sub(1) {
                assert_eq!(
                    factors[f].right_weights(),
                    factors[f + 1].left_weights(),
                    "gluing along different rings"
                );
                for (r, l) in factors[f].right().iter().zip(factors[f + 1].left()) {
                    relations.push(emb(f, r).sub(&emb(f + 1, l)));
                }
            }
            let last = factors.len() - 1;
            left = factors[0].left().iter().map(|p| emb(0, p)).collect::<Vec<_>>();
            left_w = factors[0].left_weights().to_vec();
            right = factors[last].right().iter().map(|p| emb(last, p)).collect::<Vec<_>>();
            right_w = factors[last].right_weights().to_vec();
        } else {
            let mut l = Vec::new();
            let mut r = Vec::new();
            let mut lw = Vec::new();
            let mut rw = Vec::new();
            for (f, a) in factors.iter().enumerate() {
                l.extend(a.left().iter().map(|p| emb(f, p)));
                r.extend(a.right().iter().map(|p| emb(f, p)));
                lw.extend_from_slice(a.left_weights());
                rw.extend_from_slice(a.right_weights());
            }
            left = l;
            right = r;
            left_w = lw;
            right_w = rw;
        }
        let built = GradedAlgebra::build(weights, relations, left, left_w, right, right_w);
        let mut iota = Vec::new();
        for (f, &s) in sizes.iter().enumerate() {
            iota.push(built.substitution[offsets[f]..offsets[f] + s].to_vec());
        }
        let origin = built
            .kept
            .iter()
            .map(|&old| {
                let f = (0..sizes.len()).find(|&f| old >= offsets[f] && old < offsets[f] + sizes[f]).unwrap();
                (f, old - offsets[f])
            })
            .collect();
        Tensor { algebra: built.algebra, factors, iota, origin }
    }

    /// Splits a monomial of the tensor algebra into one monomial per factor.
    pub fn split(&self, m: &[u16]) -> Vec<Monomial> {
        let mut parts: Vec<Monomial> = self.factors.iter().map(|f| vec![0; f.num_generators()]).collect();
        for (v, &e) in m.iter().enumerate() {
            let (f, g) = self.origin[v];
            parts[f][g] += e;
        }
        parts
    }
}

/// Degree of a monomial under the algebra's weights.
pub fn monomial_degree(alg: &GradedAlgebra, m: &[u16]) -> i64 {
    weighted_degree(m, alg.weights()) as i64
}

