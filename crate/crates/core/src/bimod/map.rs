//! Bimodule maps, realised lazily as one matrix per source degree.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use super::algebra::{GradedAlgebra, Tensor};
use crate::error::{Error, Result};
use crate::exactalg::{Echelon, SparseMatrix, SparseRow, Q};
use crate::symalg::Poly;

#[derive(Clone)]
pub struct BimoduleMap {
    inner: Arc<MapInner>,
}

struct MapInner {
    source: Arc<GradedAlgebra>,
    target: Arc<GradedAlgebra>,
    degree: i64,
    kind: MapKind,
    cache: RwLock<HashMap<i64, Arc<SparseMatrix>>>,
}

enum MapKind {
    Zero,
    Identity,
    /// Linear over the boundary rings, determined by the images of a set of
    /// module generators of the source.
    Generated { generators: Vec<(Poly, u32)>, images: Vec<Poly> },
    /// `f_1 ⊗ f_2 ⊗ ...` on tensor products; `None` stands for an identity
    /// factor.
    Tensor { source: Tensor, target: Tensor, factors: Vec<Option<BimoduleMap>> },
    Combination(Vec<(Q, BimoduleMap)>),
    /// `second ∘ first`.
    Compose(BimoduleMap, BimoduleMap),
    Inverse(BimoduleMap),
    Explicit(HashMap<i64, Arc<SparseMatrix>>),
}

impl fmt::Debug for BimoduleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.inner.kind {
            MapKind::Zero => "zero",
            MapKind::Identity => "identity",
            MapKind::Generated { .. } => "generated",
            MapKind::Tensor { .. } => "tensor",
            MapKind::Combination(_) => "combination",
            MapKind::Compose(..) => "compose",
            MapKind::Inverse(_) => "inverse",
            MapKind::Explicit(_) => "explicit",
        };
        write!(f, "BimoduleMap({kind}, degree {})", self.inner.degree)
    }
}

impl BimoduleMap {
    fn make(source: Arc<GradedAlgebra>, target: Arc<GradedAlgebra>, degree: i64, kind: MapKind) -> Self {
        BimoduleMap { inner: Arc::new(MapInner { source, target, degree, kind, cache: RwLock::new(HashMap::new()) }) }
    }

    pub fn zero(source: Arc<GradedAlgebra>, target: Arc<GradedAlgebra>, degree: i64) -> Self {
        Self::make(source, target, degree, MapKind::Zero)
    }

    pub fn identity(a: Arc<GradedAlgebra>) -> Self {
        Self::make(a.clone(), a, 0, MapKind::Identity)
    }

    /// Map sending each generator `generators[i]` (an element of the source,
    /// with its degree) to `images[i]` (an element of the target of degree
    /// `deg + degree`), extended linearly over both boundary rings.
    pub fn generated(
        source: Arc<GradedAlgebra>,
        target: Arc<GradedAlgebra>,
        degree: i64,
        generators: Vec<(Poly, u32)>,
        images: Vec<Poly>,
    ) -> Self {
        assert_eq!(generators.len(), images.len());
        Self::make(source, target, degree, MapKind::Generated { generators, images })
    }

    pub fn tensor(source: Tensor, target: Tensor, factors: Vec<Option<BimoduleMap>>) -> Self {
        assert_eq!(source.factors.len(), factors.len());
        let degree = factors.iter().flatten().map(|f| f.degree()).sum();
        Self::make(source.algebra.clone(), target.algebra.clone(), degree, MapKind::Tensor { source, target, factors })
    }

    pub fn combination(terms: Vec<(Q, BimoduleMap)>) -> Self {
        let first = &terms[0].1;
        for (_, t) in &terms {
            assert_eq!(t.degree(), first.degree());
            assert!(Arc::ptr_eq(&t.inner.source, &first.inner.source));
            assert!(Arc::ptr_eq(&t.inner.target, &first.inner.target));
        }
        Self::make(first.source().clone(), first.target().clone(), first.degree(), MapKind::Combination(terms))
    }

    pub fn scaled(&self, c: Q) -> Self {
        Self::combination(vec![(c, self.clone())])
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &BimoduleMap) -> Self {
        assert!(Arc::ptr_eq(&self.inner.target, &then.inner.source), "composing maps with mismatched middle");
        Self::make(
            self.source().clone(),
            then.target().clone(),
            self.degree() + then.degree(),
            MapKind::Compose(self.clone(), then.clone()),
        )
    }

    /// Inverse of a degree-0 isomorphism.
    pub fn inverse(&self) -> Self {
        assert_eq!(self.degree(), 0);
        Self::make(self.target().clone(), self.source().clone(), 0, MapKind::Inverse(self.clone()))
    }

    pub fn explicit(source: Arc<GradedAlgebra>, target: Arc<GradedAlgebra>, degree: i64, mats: HashMap<i64, Arc<SparseMatrix>>) -> Self {
        Self::make(source, target, degree, MapKind::Explicit(mats))
    }

    pub fn source(&self) -> &Arc<GradedAlgebra> {
        &self.inner.source
    }

    pub fn target(&self) -> &Arc<GradedAlgebra> {
        &self.inner.target
    }

    pub fn degree(&self) -> i64 {
        self.inner.degree
    }

    pub fn is_structurally_zero(&self) -> bool {
        matches!(self.inner.kind, MapKind::Zero)
    }

    /// Matrix of the map `A_e -> B_{e+degree}`; columns are images of the
    /// standard basis of `A_e`.
    pub fn matrix(&self, e: i64) -> Arc<SparseMatrix> {
        if let Some(m) = self.inner.cache.read().unwrap().get(&e) {
            return m.clone();
        }
        let m = Arc::new(self.compute(e).unwrap_or_else(|err| panic!("{err}")));
        self.inner.cache.write().unwrap().entry(e).or_insert(m).clone()
    }

    /// Fallible version of [`matrix`](Self::matrix).
    pub fn try_matrix(&self, e: i64) -> Result<Arc<SparseMatrix>> {
        if let Some(m) = self.inner.cache.read().unwrap().get(&e) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.compute(e)?);
        Ok(self.inner.cache.write().unwrap().entry(e).or_insert(m).clone())
    }

    /// Applies the map to a homogeneous element of the source of degree `e`,
    /// returning a polynomial representative in the target.
    pub fn apply(&self, p: &Poly, e: i64) -> Poly {
        let v = self.source().normal_form(p, e);
        let w = self.matrix(e).apply(&v);
        self.target().lift(&w, e + self.degree())
    }

    fn compute(&self, e: i64) -> Result<SparseMatrix> {
        let src = &self.inner.source;
        let tgt = &self.inner.target;
        let d = self.inner.degree;
        let (rows, cols) = (tgt.dim(e + d), src.dim(e));
        match &self.inner.kind {
            MapKind::Zero => Ok(SparseMatrix::zero(rows, cols)),
            MapKind::Identity => Ok(SparseMatrix::identity(cols)),
            MapKind::Explicit(m) => Ok(m.get(&e).map(|m| (**m).clone()).unwrap_or_else(|| SparseMatrix::zero(rows, cols))),
            MapKind::Combination(terms) => {
                let mut acc = SparseMatrix::zero(rows, cols);
                for (c, t) in terms {
                    acc = acc.add(&t.try_matrix(e)?.scale(c));
                }
                Ok(acc)
            }
            MapKind::Compose(first, second) => {
                let a = first.try_matrix(e)?;
                let b = second.try_matrix(e + first.degree())?;
                Ok(b.mul(&a))
            }
            MapKind::Inverse(f) => {
                let m = f.try_matrix(e)?;
                // pairs (f(v), v) define the inverse on the span of f's image
                let cols_f = m.columns();
                let pairs: Vec<(SparseRow, SparseRow)> =
                    cols_f.into_iter().enumerate().map(|(j, c)| (c, vec![(j, Q::one())])).collect();
                solve_linear_map(&pairs, rows, cols)
            }
            MapKind::Generated { generators, images } => {
                // A_e is spanned by the generators of degree e together with
                // boundary generators times A_{e-w}; use f(b v) = b f(v).
                let bw = src.boundary_weights();
                let mut pairs = Vec::new();
                let mut span = Echelon::new(cols);
                for ((g, gd), img) in generators.iter().zip(images) {
                    if *gd as i64 != e {
                        continue;
                    }
                    let a = src.normal_form(g, e);
                    let b = if img.is_zero() { Vec::new() } else { tgt.normal_form(img, e + d) };
                    span.insert(a.clone());
                    pairs.push((a, b));
                }
                for (b, &w) in bw.iter().enumerate() {
                    if span.rank() == cols {
                        break;
                    }
                    let lower = e - w as i64;
                    if lower < 0 || src.dim(lower) == 0 {
                        continue;
                    }
                    let s = src.boundary_multiplication(b, lower);
                    let f = self.try_matrix(lower)?;
                    let t = tgt.boundary_multiplication(b, lower + d);
                    for (v, col) in s.columns().into_iter().enumerate() {
                        if span.rank() == cols {
                            break;
                        }
                        if !span.insert(col.clone()) {
                            continue;
                        }
                        let fv = f.apply(&vec![(v, Q::one())]);
                        pairs.push((col, t.apply(&fv)));
                    }
                }
                solve_linear_map(&pairs, cols, rows)
            }
            MapKind::Tensor { source, target, factors } => {
                let piece = src.piece(e);
                let mut columns = Vec::with_capacity(cols);
                for m in piece.basis_monomials() {
                    let parts = source.split(m);
                    let mut image = Poly::one(tgt.num_generators());
                    let mut zero = false;
                    for (f, part) in parts.iter().enumerate() {
                        let fa = &source.factors[f];
                        let pe = crate::bimod::algebra::monomial_degree(fa, part);
                        let piece_poly = match &factors[f] {
                            None => Poly::from_monomial(part.clone(), Q::one()),
                            Some(map) => {
                                let p = map.apply(&Poly::from_monomial(part.clone(), Q::one()), pe);
                                if p.is_zero() {
                                    zero = true;
                                    break;
                                }
                                p
                            }
                        };
                        image = image.mul(&piece_poly.compose(&target.iota[f]));
                    }
                    if zero {
                        columns.push(Vec::new());
                    } else {
                        columns.push(tgt.normal_form(&image, e + d));
                    }
                }
                Ok(SparseMatrix::from_columns(rows, &columns))
            }
        }
    }

    /// Whether the map is an isomorphism in every degree up to `max_e`.
    pub fn is_isomorphism_up_to(&self, max_e: i64) -> bool {
        if self.degree() != 0 {
            return false;
        }
        (0..=max_e).step_by(2).all(|e| {
            let (a, b) = (self.source().dim(e), self.target().dim(e));
            a == b && (a == 0 || self.matrix(e).rank() == a)
        })
    }

    /// Whether the map vanishes in every degree up to `max_e`.
    pub fn is_zero_up_to(&self, max_e: i64) -> bool {
        (0..=max_e).step_by(2).all(|e| self.matrix(e).is_zero())
    }
}

/// Linear map `A -> B` (dimensions `a_dim`, `b_dim`) from pairs `(a_i, b_i)`
/// meaning `a_i ↦ b_i`. The `a_i` must span `A` and the assignment must be
/// consistent.
pub fn solve_linear_map(pairs: &[(SparseRow, SparseRow)], a_dim: usize, b_dim: usize) -> Result<SparseMatrix> {
    let mut ech = Echelon::new(a_dim + b_dim);
    for (a, b) in pairs {
        let mut row = a.clone();
        row.extend(b.iter().map(|(k, v)| (k + a_dim, v.clone())));
        ech.insert(row);
    }
    ech.reduce_fully();
    let mut columns: Vec<SparseRow> = vec![Vec::new(); a_dim];
    let mut covered = 0;
    for (p, row) in ech.pivot_rows() {
        if p >= a_dim {
            return Err(Error::NotAComplex(format!(
                "map is not well defined: a relation of the source maps to a nonzero element (column {})",
                p - a_dim
            )));
        }
        covered += 1;
        let image: SparseRow = row.iter().filter(|(k, _)| *k >= a_dim).map(|(k, v)| (k - a_dim, v.clone())).collect();
        if row.iter().any(|(k, v)| *k < a_dim && *k != p && !v.is_zero()) {
            return Err(Error::NotAComplex("generators do not span the source".into()));
        }
        columns[p] = image;
    }
    if covered != a_dim {
        return Err(Error::NotAComplex("generators do not span the source".into()));
    }
    Ok(SparseMatrix::from_columns(b_dim, &columns))
}
