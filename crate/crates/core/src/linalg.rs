//! Graded pieces of ideals as row-reduced subspaces of `R_d`.
//!
//! Every subspace of `R_d` is stored as a matrix in reduced row echelon form
//! over GF(p) whose columns are the degree-d monomials in descending lex
//! order. All dimension counts elsewhere in the crate go through here.

use std::borrow::Cow;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::monomial::{dim_graded_piece, Monomial, MonomialTable};
use crate::ring::RingContext;

/// Incremental row echelon form over GF(p).
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    p: u64,
    cols: usize,
    rows: Vec<Vec<u32>>,
    // row index owning each pivot column
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub(crate) fn new(p: u32, cols: usize) -> Self {
        Echelon {
            p: p as u64,
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub(crate) fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Reduces `v` in place against the current rows; returns the first
    /// nonzero column left over, if any.
    fn reduce(&self, v: &mut [u32]) -> Option<usize> {
        if self.p < LAZY_LIMIT {
            return self.reduce_lazy(v);
        }
        let p = self.p;
        let mut lead = None;
        for c in 0..self.cols {
            if v[c] == 0 {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => {
                    let row = &self.rows[r];
                    let f = p - v[c] as u64;
                    for j in c..self.cols {
                        if row[j] != 0 {
                            v[j] = ((v[j] as u64 + f * row[j] as u64) % p) as u32;
                        }
                    }
                }
                None => {
                    if lead.is_none() {
                        lead = Some(c);
                    }
                }
            }
        }
        lead
    }

    // Small p: products fit in 32 bits, so a u64 accumulator absorbs one
    // update per pivot and is reduced only when read.
    fn reduce_lazy(&self, v: &mut [u32]) -> Option<usize> {
        let p = self.p;
        let mut acc: Vec<u64> = v.iter().map(|&x| x as u64).collect();
        let mut lead = None;
        for c in 0..self.cols {
            if acc[c] == 0 {
                continue;
            }
            let x = acc[c] % p;
            acc[c] = x;
            if x == 0 {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => axpy(&mut acc[c..], &self.rows[r][c..], p - x),
                None => {
                    if lead.is_none() {
                        lead = Some(c);
                    }
                }
            }
        }
        for (out, a) in v.iter_mut().zip(acc) {
            *out = (a % p) as u32;
        }
        lead
    }

    /// Adds a row; returns whether the rank grew.
    pub(crate) fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        if self.is_full() {
            return false;
        }
        let Some(c) = self.reduce(&mut v) else {
            return false;
        };
        let inv = inverse(v[c] as u64, self.p);
        for x in v[c..].iter_mut() {
            *x = ((*x as u64 * inv) % self.p) as u32;
        }
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    /// Back-substitutes into reduced row echelon form, rows sorted by pivot.
    pub(crate) fn into_rref(self) -> (Vec<Vec<u32>>, Vec<usize>) {
        let p = self.p;
        let pivots: Vec<usize> = (0..self.cols).filter(|&c| self.pivot_row[c].is_some()).collect();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(pivots.len());
        let mut slots: Vec<Option<Vec<u32>>> = self.rows.into_iter().map(Some).collect();
        for &c in &pivots {
            rows.push(slots[self.pivot_row[c].unwrap()].take().unwrap());
        }
        // clear above each pivot, bottom-up
        for i in (0..rows.len()).rev() {
            let c = pivots[i];
            let (above, rest) = rows.split_at_mut(i);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                if row[c] == 0 {
                    continue;
                }
                let f = p - row[c] as u64;
                for j in c..pivot_row.len() {
                    if pivot_row[j] != 0 {
                        row[j] = ((row[j] as u64 + f * pivot_row[j] as u64) % p) as u32;
                    }
                }
            }
        }
        (rows, pivots)
    }
}

// Below this modulus the lazy u64 accumulation cannot overflow for any
// ambient dimension that fits in memory.
const LAZY_LIMIT: u64 = 1 << 16;

#[inline]
fn axpy(acc: &mut [u64], row: &[u32], f: u64) {
    for (a, &r) in acc.iter_mut().zip(row) {
        *a += f * r as u64;
    }
}

fn inverse(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A subspace of `R_d` in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    ctx: Arc<RingContext>,
    degree: u32,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl GradedBasis {
    pub(crate) fn from_echelon(ctx: &Arc<RingContext>, degree: u32, e: Echelon) -> Self {
        let cols = e.cols;
        let (rows, pivots) = e.into_rref();
        GradedBasis {
            ctx: ctx.clone(),
            degree,
            cols,
            rows,
            pivots,
        }
    }

    pub(crate) fn from_rows<I>(ctx: &Arc<RingContext>, degree: u32, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let cols = dim_graded_piece(ctx.n(), degree);
        let mut e = Echelon::new(ctx.p(), cols);
        for r in rows {
            e.insert(r);
            if e.is_full() {
                break;
            }
        }
        GradedBasis::from_echelon(ctx, degree, e)
    }

    pub fn zero(ctx: &Arc<RingContext>, degree: u32) -> Self {
        GradedBasis::from_rows(ctx, degree, std::iter::empty())
    }

    /// All of `R_d`.
    pub fn full(ctx: &Arc<RingContext>, degree: u32) -> Self {
        let cols = dim_graded_piece(ctx.n(), degree);
        let rows = (0..cols).map(|i| {
            let mut r = vec![0; cols];
            r[i] = 1;
            r
        });
        GradedBasis::from_rows(ctx, degree, rows)
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `dim R_d`.
    pub fn ambient_dim(&self) -> usize {
        self.cols
    }

    /// `dim R_d - dim self`.
    pub fn codim(&self) -> usize {
        self.cols - self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn forms(&self) -> Vec<Form> {
        self.rows
            .iter()
            .map(|r| Form::from_dense(&self.ctx, self.degree, r))
            .collect()
    }

    /// Remainder of `v` modulo the subspace; zero exactly on pivot columns.
    pub fn normal_form(&self, v: &mut [u32]) {
        let p = self.ctx.p() as u64;
        if p < LAZY_LIMIT {
            let mut acc: Vec<u64> = v.iter().map(|&x| x as u64).collect();
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                let x = acc[c] % p;
                acc[c] = x;
                if x != 0 {
                    axpy(&mut acc[c..], &row[c..], p - x);
                }
            }
            for (out, a) in v.iter_mut().zip(acc) {
                *out = (a % p) as u32;
            }
            return;
        }
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[c] == 0 {
                continue;
            }
            let f = p - v[c] as u64;
            for j in c..self.cols {
                if row[j] != 0 {
                    v[j] = ((v[j] as u64 + f * row[j] as u64) % p) as u32;
                }
            }
        }
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.normal_form(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, f: &Form) -> Result<bool> {
        self.check_form(f)?;
        Ok(self.contains_vector(&f.to_dense()))
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains_basis(&self, other: &GradedBasis) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(other.rows.iter().all(|r| self.contains_vector(r)))
    }

    fn check_form(&self, f: &Form) -> Result<()> {
        self.ctx.check_same(f.ctx())?;
        if f.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: f.degree(),
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &GradedBasis) -> Result<()> {
        self.ctx.check_same(&other.ctx)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &GradedBasis) -> Result<GradedBasis> {
        self.check_compatible(other)?;
        Ok(GradedBasis::from_rows(
            &self.ctx,
            self.degree,
            self.rows.iter().chain(&other.rows).cloned(),
        ))
    }

    /// Intersection by the Zassenhaus procedure: reduce `[u | u]` and
    /// `[v | 0]` together; rows whose left half vanishes span `U ∩ V`.
    pub fn intersection(&self, other: &GradedBasis) -> Result<GradedBasis> {
        self.check_compatible(other)?;
        let c = self.cols;
        let mut e = Echelon::new(self.ctx.p(), 2 * c);
        for r in &self.rows {
            let mut v = r.clone();
            v.extend_from_slice(r);
            e.insert(v);
        }
        for r in &other.rows {
            let mut v = r.clone();
            v.resize(2 * c, 0);
            e.insert(v);
        }
        let (rows, _) = e.into_rref();
        let inter = rows
            .into_iter()
            .filter(|r| r[..c].iter().all(|&x| x == 0))
            .map(|r| r[c..].to_vec());
        Ok(GradedBasis::from_rows(&self.ctx, self.degree, inter))
    }
}

/// K-span of forms of a common degree `d`.
pub fn span(ctx: &Arc<RingContext>, forms: &[Form], d: u32) -> Result<GradedBasis> {
    for f in forms {
        ctx.check_same(f.ctx())?;
        if f.degree() != d {
            return Err(Error::DegreeMismatch {
                expected: d,
                found: f.degree(),
            });
        }
    }
    Ok(GradedBasis::from_rows(ctx, d, forms.iter().map(Form::to_dense)))
}

/// Dense rows of `{m * g : deg m = d - deg g}` for each generator.
fn multiples<'a>(
    ctx: &'a Arc<RingContext>,
    gens: &'a [Form],
    d: u32,
) -> impl Iterator<Item = Vec<u32>> + 'a {
    let target = MonomialTable::get(ctx.n(), d);
    gens.iter()
        .filter(move |g| g.degree() <= d && !g.is_zero())
        .flat_map(move |g| {
            let shifts = MonomialTable::get(ctx.n(), d - g.degree());
            let target = target.clone();
            let terms: Vec<_> = g.terms().map(|(m, c)| (*m, c.value())).collect();
            (0..shifts.len()).map(move |i| {
                let u = shifts.monomial(i);
                let mut row = vec![0u32; target.len()];
                for (m, c) in &terms {
                    row[target.index_of(&m.mul(u)).unwrap()] = *c;
                }
                row
            })
        })
}

/// `base + (gens)_d` for a degree-d subspace `base`.
pub(crate) fn extend_piece(base: &GradedBasis, gens: &[Form]) -> GradedBasis {
    if base.codim() == 0 {
        return base.clone();
    }
    let ctx = base.ctx();
    GradedBasis::from_rows(
        ctx,
        base.degree(),
        base.rows().iter().cloned().chain(multiples(ctx, gens, base.degree())),
    )
}

/// Degree-d piece of the ideal generated by `gens`.
pub fn ideal_piece(ctx: &Arc<RingContext>, gens: &[Form], d: u32) -> Result<GradedBasis> {
    for g in gens {
        ctx.check_same(g.ctx())?;
    }
    Ok(GradedBasis::from_rows(ctx, d, multiples(ctx, gens, d)))
}

/// `dim U`, `dim V`, `dim(U+V)`, `dim(U∩V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDims {
    pub dim_u: usize,
    pub dim_v: usize,
    pub dim_sum: usize,
    pub dim_intersection: usize,
}

pub fn subspace_dims(u: &GradedBasis, v: &GradedBasis) -> Result<SubspaceDims> {
    Ok(SubspaceDims {
        dim_u: u.dim(),
        dim_v: v.dim(),
        dim_sum: u.sum(v)?.dim(),
        dim_intersection: u.intersection(v)?.dim(),
    })
}

/// Sequence of Hilbert-function values indexed from degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OSequence(pub Vec<usize>);

impl OSequence {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// Value at `d`, zero past the stored range.
    pub fn get(&self, d: usize) -> usize {
        self.0.get(d).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for OSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// `Hf_{R/(gens)}(d)` for `0 <= d <= max_degree`.
pub fn hilbert_function(ctx: &Arc<RingContext>, gens: &[Form], max_degree: u32) -> Result<OSequence> {
    (0..=max_degree)
        .map(|d| ideal_piece(ctx, gens, d).map(|b| b.codim()))
        .collect::<Result<Vec<_>>>()
        .map(OSequence)
}

/// Kernel of `u ↦ (u·t mod modulus_{d + deg t})_t` on `R_d`.
fn colon_kernel<'a, F>(ctx: &Arc<RingContext>, targets: &[Form], d: u32, mut modulus: F) -> Result<GradedBasis>
where
    F: FnMut(u32) -> Result<Cow<'a, GradedBasis>>,
{
    let n = ctx.n();
    let source = MonomialTable::get(n, d);
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); source.len()];
    for t in targets {
        ctx.check_same(t.ctx())?;
        if t.is_zero() {
            continue;
        }
        let e = d + t.degree();
        let piece = modulus(e)?;
        if piece.codim() == 0 {
            continue;
        }
        let target = MonomialTable::get(n, e);
        let terms: Vec<_> = t.terms().map(|(m, c)| (*m, c.value())).collect();
        for (j, u) in source.monomials().iter().enumerate() {
            let mut v = vec![0u32; target.len()];
            for (m, c) in &terms {
                v[target.index_of(&m.mul(u)).unwrap()] = *c;
            }
            piece.normal_form(&mut v);
            // only non-pivot coordinates carry information
            let mut pivot = piece.pivots().iter().peekable();
            for (col, x) in v.into_iter().enumerate() {
                if pivot.peek() == Some(&&col) {
                    pivot.next();
                } else {
                    images[j].push(x);
                }
            }
        }
    }
    // [image | identity]; rows with vanishing image part span the kernel
    let width = images.first().map_or(0, Vec::len);
    let m = source.len();
    let mut ech = Echelon::new(ctx.p(), width + m);
    for (j, img) in images.into_iter().enumerate() {
        let mut row = img;
        row.resize(width + m, 0);
        row[width + j] = 1;
        ech.insert(row);
    }
    let (rows, _) = ech.into_rref();
    let kernel = rows
        .into_iter()
        .filter(|r| r[..width].iter().all(|&x| x == 0))
        .map(|r| r[width..].to_vec());
    Ok(GradedBasis::from_rows(ctx, d, kernel))
}

/// Degree-d piece of `(modulus_gens) : (targets)`.
pub fn colon_piece(
    ctx: &Arc<RingContext>,
    modulus_gens: &[Form],
    targets: &[Form],
    d: u32,
) -> Result<GradedBasis> {
    if targets.is_empty() {
        return Err(Error::Input("colon needs at least one target".into()));
    }
    for g in modulus_gens {
        ctx.check_same(g.ctx())?;
    }
    colon_kernel(ctx, targets, d, |e| ideal_piece(ctx, modulus_gens, e).map(Cow::Owned))
}

/// Coefficients of `prod_i (1 + t + ... + t^{a_i - 1})`, followed by a zero.
pub fn complete_intersection_series(a: &[u32]) -> OSequence {
    let mut coeffs = vec![1usize];
    for &ai in a {
        let mut next = vec![0usize; coeffs.len() + ai as usize - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for k in 0..ai as usize {
                next[i + k] += c;
            }
        }
        coeffs = next;
    }
    coeffs.push(0);
    OSequence(coeffs)
}

/// A subspace of the degree-d dual space in reduced echelon form with
/// trailing pivots: each row vanishes after its pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
struct DualPiece {
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl DualPiece {
    fn from_vectors(p: u32, cols: usize, vs: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut e = Echelon::new(p, cols);
        for mut v in vs {
            v.reverse();
            e.insert(v);
        }
        let (rows, pivots) = e.into_rref();
        DualPiece {
            cols,
            rows: rows
                .into_iter()
                .map(|mut r| {
                    r.reverse();
                    r
                })
                .collect(),
            pivots: pivots.into_iter().map(|c| cols - 1 - c).collect(),
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The annihilator in `R_d` under the diagonal monomial pairing.
    fn perp(&self, ctx: &Arc<RingContext>, degree: u32) -> GradedBasis {
        let p = ctx.p();
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut rows = Vec::with_capacity(self.cols - self.rows.len());
        let mut pivots = Vec::with_capacity(self.cols - self.rows.len());
        for f in (0..self.cols).filter(|&f| !is_pivot[f]) {
            let mut row = vec![0u32; self.cols];
            row[f] = 1;
            for (g, &c) in self.rows.iter().zip(&self.pivots) {
                if g[f] != 0 {
                    row[c] = p - g[f];
                }
            }
            rows.push(row);
            pivots.push(f);
        }
        GradedBasis {
            ctx: ctx.clone(),
            degree,
            cols: self.cols,
            rows,
            pivots,
        }
    }
}

/// Degree-d monomials with their first variable `j` and the index of `m / x_j`.
fn lift_table(n: usize, d: u32) -> Vec<(usize, usize)> {
    let here = MonomialTable::get(n, d);
    let below = MonomialTable::get(n, d - 1);
    here.monomials()
        .iter()
        .map(|m| {
            let j = (0..n).find(|&i| m.exponent(i) > 0).unwrap();
            let mut e: Vec<u32> = (0..n).map(|i| m.exponent(i)).collect();
            e[j] -= 1;
            let q = Monomial::from_exponents(&e).unwrap();
            (j, below.index_of(&q).unwrap())
        })
        .collect()
}

/// The inverse system of a homogeneous ideal: for each degree `d`, the
/// forms `G` of degree `d` in the dual ring killed by `I_d` under contraction.
///
/// `dim I_d^⊥ = Hf_{R/I}(d)`, and `I_d^⊥` is cut out inside the forms whose
/// first contractions lie in `I_{d-1}^⊥`, so each step solves a system whose
/// size follows the Hilbert function rather than `dim R_d`.
#[derive(Debug, Clone)]
pub struct InverseSystem {
    ctx: Arc<RingContext>,
    pieces: Vec<DualPiece>,
}

impl InverseSystem {
    pub fn new(ctx: &Arc<RingContext>, gens: &[Form], max_degree: u32) -> Result<Self> {
        for g in gens {
            ctx.check_same(g.ctx())?;
        }
        let p = ctx.p();
        let mut pieces = Vec::with_capacity(max_degree as usize + 1);
        let unit = gens.iter().any(|g| g.degree() == 0 && !g.is_zero());
        pieces.push(DualPiece::from_vectors(p, 1, (!unit).then(|| vec![1])));
        for d in 1..=max_degree {
            let next = Self::step(ctx, &pieces, gens, d);
            pieces.push(next);
        }
        Ok(InverseSystem { ctx: ctx.clone(), pieces })
    }

    fn step(ctx: &Arc<RingContext>, pieces: &[DualPiece], gens: &[Form], d: u32) -> DualPiece {
        let (n, p) = (ctx.n(), ctx.p());
        let cols = dim_graded_piece(n, d);
        let prev = &pieces[d as usize - 1];
        let k = prev.dim();
        if k == 0 {
            return DualPiece::from_vectors(p, cols, std::iter::empty());
        }
        // Unknowns c[j*k + l]: the contraction x_j ∘ G is sum_l c[j*k + l] v_l.
        let width = n * k;
        let mut ech = Echelon::new(p, width);
        if d >= 2 {
            // x_i ∘ (x_j ∘ G) = x_j ∘ (x_i ∘ G), compared in the coordinates of
            // the degree d - 2 piece, which contains every contraction of a v_l.
            let before = &pieces[d as usize - 2];
            let low = MonomialTable::get(n, d - 2);
            let mid = MonomialTable::get(n, d - 1);
            let up: Vec<Vec<usize>> = before
                .pivots
                .iter()
                .map(|&c| {
                    (0..n)
                        .map(|i| mid.index_of(&low.monomial(c).mul(&Monomial::var(n, i))).unwrap())
                        .collect()
                })
                .collect();
            'pairs: for i in 0..n {
                for j in i + 1..n {
                    for idx in &up {
                        let mut row = vec![0u32; width];
                        for (l, v) in prev.rows.iter().enumerate() {
                            row[j * k + l] = v[idx[i]];
                            row[i * k + l] = (p - v[idx[j]]) % p;
                        }
                        ech.insert(row);
                        if ech.is_full() {
                            break 'pairs;
                        }
                    }
                }
            }
        }
        let lift = lift_table(n, d);
        let table = MonomialTable::get(n, d);
        for g in gens.iter().filter(|g| g.degree() == d && !g.is_zero()) {
            let mut acc = vec![0u64; width];
            for (m, c) in g.terms() {
                let (j, q) = lift[table.index_of(m).unwrap()];
                for (l, v) in prev.rows.iter().enumerate() {
                    acc[j * k + l] = (acc[j * k + l] + c.value() as u64 * v[q] as u64) % p as u64;
                }
            }
            ech.insert(acc.into_iter().map(|x| x as u32).collect());
        }
        let (rows, pivots) = ech.into_rref();
        let mut is_pivot = vec![false; width];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let kernel = (0..width).filter(|&f| !is_pivot[f]).map(|f| {
            let mut c = vec![0u64; width];
            c[f] = 1;
            for (r, &pc) in rows.iter().zip(&pivots) {
                c[pc] = ((p - r[f]) % p) as u64;
            }
            lift.iter()
                .map(|&(j, q)| {
                    let s = prev
                        .rows
                        .iter()
                        .enumerate()
                        .fold(0u64, |s, (l, v)| (s + c[j * k + l] * v[q] as u64) % p as u64);
                    s as u32
                })
                .collect::<Vec<u32>>()
        });
        DualPiece::from_vectors(p, cols, kernel)
    }

    pub fn max_degree(&self) -> u32 {
        self.pieces.len() as u32 - 1
    }

    /// `Hf_{R/I}(d)`; zero above `max_degree` only if the last piece is zero.
    pub fn dim(&self, d: u32) -> Option<usize> {
        match self.pieces.get(d as usize) {
            Some(v) => Some(v.dim()),
            None if self.pieces.last().is_some_and(|v| v.dim() == 0) => Some(0),
            None => None,
        }
    }

    pub fn hilbert_function(&self) -> OSequence {
        OSequence(self.pieces.iter().map(DualPiece::dim).collect())
    }

    /// `I_d`, recovered as the annihilator of the dual piece.
    pub fn ideal_piece(&self, d: u32) -> Option<GradedBasis> {
        match self.pieces.get(d as usize) {
            Some(v) => Some(v.perp(&self.ctx, d)),
            None if self.pieces.last().is_some_and(|v| v.dim() == 0) => Some(GradedBasis::full(&self.ctx, d)),
            None => None,
        }
    }
}

/// `A = R/(f1..fn)` for a regular sequence, with cached pieces of `(f)`.
///
/// Construction fails unless the Hilbert function matches the complete
/// intersection series, i.e. unless the forms are a regular sequence.
#[derive(Debug, Clone)]
pub struct ArtinQuotient {
    ctx: Arc<RingContext>,
    generators: Vec<Form>,
    degrees: Vec<u32>,
    socle_degree: u32,
    dual: InverseSystem,
    // built on first use, for 0..=socle_degree; everything above is all of R_d
    pieces: Vec<OnceLock<GradedBasis>>,
}

impl ArtinQuotient {
    pub fn new(ctx: &Arc<RingContext>, generators: Vec<Form>) -> Result<Self> {
        if generators.len() != ctx.n() {
            return Err(Error::Input(format!(
                "need {} forms for a regular sequence, got {}",
                ctx.n(),
                generators.len()
            )));
        }
        let mut degrees = Vec::with_capacity(generators.len());
        for g in &generators {
            ctx.check_same(g.ctx())?;
            if g.degree() == 0 {
                return Err(Error::Input("regular sequence forms need positive degree".into()));
            }
            degrees.push(g.degree());
        }
        let socle_degree: u32 = degrees.iter().map(|a| a - 1).sum();
        let expected = complete_intersection_series(&degrees);
        let dual = InverseSystem::new(ctx, &generators, socle_degree + 1)?;
        if dual.hilbert_function() != expected {
            return Err(Error::NotRegular);
        }
        let pieces = (0..=socle_degree).map(|_| OnceLock::new()).collect();
        Ok(ArtinQuotient {
            ctx: ctx.clone(),
            generators,
            degrees,
            socle_degree,
            dual,
            pieces,
        })
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Form] {
        &self.generators
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn socle_degree(&self) -> u32 {
        self.socle_degree
    }

    /// `(f)_d`; all of `R_d` above the socle degree.
    pub fn ci_piece(&self, d: u32) -> Cow<'_, GradedBasis> {
        match self.ci_piece_ref(d) {
            Some(b) => Cow::Borrowed(b),
            None => Cow::Owned(GradedBasis::full(&self.ctx, d)),
        }
    }

    pub(crate) fn ci_piece_ref(&self, d: u32) -> Option<&GradedBasis> {
        let cell = self.pieces.get(d as usize)?;
        Some(cell.get_or_init(|| self.dual.ideal_piece(d).expect("within socle degree")))
    }

    /// The inverse system of `(f)` through `s + 1`.
    pub fn inverse_system(&self) -> &InverseSystem {
        &self.dual
    }

    /// `dim A_d`.
    pub fn hf(&self, d: u32) -> usize {
        self.dual.dim(d).unwrap_or(0)
    }

    /// `Hf_A` through `s + 1`.
    pub fn hilbert_function(&self) -> OSequence {
        self.dual.hilbert_function()
    }

    /// `((f) : (targets))_d`, reusing the cached pieces.
    pub fn colon(&self, targets: &[Form], d: u32) -> Result<GradedBasis> {
        if targets.is_empty() {
            return Err(Error::Input("colon needs at least one target".into()));
        }
        if d > self.socle_degree {
            return Ok(GradedBasis::full(&self.ctx, d));
        }
        // targets inside (f) impose nothing
        let mut live = Vec::with_capacity(targets.len());
        for t in targets {
            if !self.contains(t)? {
                live.push(t.clone());
            }
        }
        if live.is_empty() {
            return Ok(GradedBasis::full(&self.ctx, d));
        }
        colon_kernel(&self.ctx, &live, d, |e| Ok(self.ci_piece(e)))
    }

    /// `Hf_{R/((f):(targets))}(d)`.
    pub fn colon_hf(&self, targets: &[Form], d: u32) -> Result<usize> {
        Ok(self.colon(targets, d)?.codim())
    }

    /// `dim Ann_{A_i}(g)`: kernel of multiplication by `g` from `A_i` to `A_{i+deg g}`.
    pub fn annihilator_dim(&self, g: &Form, i: u32) -> Result<usize> {
        self.annihilator_dim_of(std::slice::from_ref(g), i)
    }

    /// `dim Ann_{A_i}(g1, ..., gk)`.
    pub fn annihilator_dim_of(&self, gs: &[Form], i: u32) -> Result<usize> {
        Ok(self.colon(gs, i)?.dim() - self.ci_piece(i).dim())
    }

    /// `dim g·A_i` inside `A_{i + deg g}`.
    pub fn multiple_dim(&self, g: &Form, i: u32) -> Result<usize> {
        Ok(self.hf(i) - self.annihilator_dim(g, i)?)
    }

    /// Whether `f` lies in `(f1..fn)`.
    pub fn contains(&self, f: &Form) -> Result<bool> {
        self.ctx.check_same(f.ctx())?;
        match self.ci_piece_ref(f.degree()) {
            Some(b) => b.contains(f),
            None => Ok(true),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{monomials_of_degree, Monomial};
    use proptest::prelude::*;

    fn ring(n: usize) -> Arc<RingContext> {
        Arc::new(RingContext::new(n, 101).unwrap())
    }

    fn forms(r: &Arc<RingContext>, s: &[&str]) -> Vec<Form> {
        s.iter().map(|t| Form::parse(r, t).unwrap()).collect()
    }

    fn squares(r: &Arc<RingContext>) -> Vec<Form> {
        (1..=r.n()).map(|i| Form::parse(r, &format!("x{i}^2")).unwrap()).collect()
    }

    fn assert_rref(b: &GradedBasis) {
        assert!(b.pivots().windows(2).all(|w| w[0] < w[1]));
        for (i, (row, &c)) in b.rows().iter().zip(b.pivots()).enumerate() {
            assert_eq!(row[c], 1);
            assert!(row[..c].iter().all(|&x| x == 0));
            for (j, other) in b.rows().iter().enumerate() {
                if i != j {
                    assert_eq!(other[c], 0);
                }
            }
        }
    }

    #[test]
    fn span_examples() {
        let r = ring(5);
        assert_eq!(span(&r, &forms(&r, &["x1^2", "x1^2", "x2^2"]), 2).unwrap().dim(), 2);
        assert_eq!(span(&r, &[], 3).unwrap().dim(), 0);
        let all: Vec<Form> = monomials_of_degree(5, 2)
            .into_iter()
            .map(|m| Form::monomial(&r, m, r.field().one()))
            .collect();
        let b = span(&r, &all, 2).unwrap();
        assert_eq!(b.dim(), 15);
        assert_rref(&b);
        assert!(matches!(
            span(&r, &forms(&r, &["x1", "x2^2"]), 2),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn rref_shape() {
        let r = ring(3);
        let b = span(&r, &forms(&r, &["x1^2 + 2*x2^2", "3*x1^2 + x1*x3", "x2*x3 + x2^2", "x1^2"]), 2).unwrap();
        assert_rref(&b);
        assert_eq!(b.dim(), 4);
    }

    #[test]
    fn ideal_piece_examples() {
        let r = ring(5);
        let sq = squares(&r);
        assert_eq!(ideal_piece(&r, &sq, 3).unwrap().dim(), 25);
        assert_eq!(ideal_piece(&r, &sq, 2).unwrap().dim(), 5);
        assert_eq!(ideal_piece(&r, &sq, 1).unwrap().dim(), 0);
        // oracle: span of the five products x_i * x1x2 computed by hand
        let g = forms(&r, &["x1*x2"]);
        let by_hand = forms(&r, &["x1^2*x2", "x1*x2^2", "x1*x2*x3", "x1*x2*x4", "x1*x2*x5"]);
        let piece = ideal_piece(&r, &g, 3).unwrap();
        assert_eq!(piece, span(&r, &by_hand, 3).unwrap());
        assert_eq!(piece.dim(), 5);
    }

    #[test]
    fn subspace_dims_examples() {
        let r = ring(5);
        let u = span(&r, &forms(&r, &["x1^2"]), 2).unwrap();
        let v = span(&r, &forms(&r, &["x2^2"]), 2).unwrap();
        let d = subspace_dims(&u, &v).unwrap();
        assert_eq!((d.dim_u, d.dim_v, d.dim_sum, d.dim_intersection), (1, 1, 2, 0));
        assert_eq!(subspace_dims(&u, &u).unwrap().dim_intersection, 1);

        let c3 = ideal_piece(&r, &squares(&r), 3).unwrap();
        let gr1 = ideal_piece(&r, &forms(&r, &["x1*x2"]), 3).unwrap();
        let d = subspace_dims(&c3, &gr1).unwrap();
        assert_eq!(d.dim_intersection, 2);
        let inter = c3.intersection(&gr1).unwrap();
        assert!(inter.contains(&Form::parse(&r, "x1^2*x2").unwrap()).unwrap());
        assert!(inter.contains(&Form::parse(&r, "x1*x2^2").unwrap()).unwrap());
        assert!(subspace_dims(&u, &c3).is_err());
    }

    #[test]
    fn hilbert_function_examples() {
        let r = ring(5);
        assert_eq!(hilbert_function(&r, &squares(&r), 6).unwrap().0, vec![1, 5, 10, 10, 5, 1, 0]);
        assert_eq!(hilbert_function(&r, &[], 3).unwrap().0, vec![1, 5, 15, 35]);
        let mut lpp = squares(&r);
        lpp.extend(forms(&r, &["x1*x2", "x1*x3"]));
        assert_eq!(hilbert_function(&r, &lpp, 3).unwrap().0, vec![1, 5, 8, 5]);
    }

    #[test]
    fn colon_examples() {
        let r = ring(5);
        let sq = squares(&r);
        // target already in the ideal: everything
        assert_eq!(colon_piece(&r, &sq, &forms(&r, &["x1^2*x3"]), 2).unwrap().codim(), 0);
        let c = colon_piece(&r, &sq, &forms(&r, &["x1*x2"]), 1).unwrap();
        assert_eq!(c, span(&r, &forms(&r, &["x1", "x2"]), 1).unwrap());
        assert!(colon_piece(&r, &sq, &[], 1).is_err());
    }

    #[test]
    fn colon_contains_modulus() {
        let r = ring(4);
        let sq = squares(&r);
        let t = forms(&r, &["x1*x2 + x3*x4", "x2*x3"]);
        for d in 0..5 {
            let c = colon_piece(&r, &sq, &t, d).unwrap();
            assert!(c.contains_basis(&ideal_piece(&r, &sq, d).unwrap()).unwrap());
        }
    }

    #[test]
    fn artin_quotient_and_annihilators() {
        let r = ring(5);
        let a = ArtinQuotient::new(&r, squares(&r)).unwrap();
        assert_eq!(a.socle_degree(), 5);
        assert_eq!(a.hilbert_function().0, vec![1, 5, 10, 10, 5, 1, 0]);
        let g = Form::parse(&r, "x1*x2").unwrap();
        assert_eq!(a.annihilator_dim(&g, 1).unwrap(), 2);
        let inside = Form::parse(&r, "x3^2 + 7*x1^2").unwrap();
        for i in 0..=4 {
            assert_eq!(a.annihilator_dim(&inside, i).unwrap(), a.hf(i));
        }
        // 5x10 multiplication matrix of full column rank
        let h = Form::parse(&r, "x1*x2 + x3*x4").unwrap();
        assert_eq!(a.annihilator_dim(&h, 1).unwrap(), 0);
        assert_eq!(a.multiple_dim(&h, 1).unwrap(), 5);
        // cross-check against the uncached colon
        for i in 0..=4 {
            let direct = colon_piece(&r, &squares(&r), std::slice::from_ref(&g), i).unwrap().codim();
            assert_eq!(a.colon_hf(std::slice::from_ref(&g), i).unwrap(), direct);
        }
    }

    #[test]
    fn artin_quotient_rejects_non_regular() {
        let r = ring(2);
        let err = ArtinQuotient::new(&r, forms(&r, &["x1^2", "x1*x2"])).unwrap_err();
        assert_eq!(err, Error::NotRegular);
        assert!(ArtinQuotient::new(&r, forms(&r, &["x1^2"])).is_err());
    }

    #[test]
    fn ci_series() {
        assert_eq!(complete_intersection_series(&[2, 2, 2]).0, vec![1, 3, 3, 1, 0]);
        assert_eq!(complete_intersection_series(&[2, 3]).0, vec![1, 2, 2, 1, 0]);
        assert_eq!(complete_intersection_series(&[]).0, vec![1, 0]);
    }

    #[test]
    fn monomial_ideal_full_rank_shortcut() {
        let r = ring(3);
        let gens: Vec<Form> = vec![Form::monomial(&r, Monomial::var(3, 0), r.field().one())];
        let b = ideal_piece(&r, &gens, 2).unwrap();
        assert_eq!(b.dim(), 6 - 3);
    }
    #[test]
    fn single_common_zero_fails_only_above_socle() {
        // Three quadrics without an x3^2 term all vanish at (0:0:1) and
        // nowhere else, so Hf agrees with (1,3,3,1) through degree 3.
        let r = ring(3);
        let gens = forms(&r, &["x1^2 + 2*x1*x3 + 5*x2*x3", "x2^2 + 3*x1*x2 + 7*x1*x3", "x1*x2 + 4*x2^2 + 9*x2*x3 + 11*x1^2"]);
        let hf = hilbert_function(&r, &gens, 4).unwrap();
        assert_eq!(&hf.0[..4], &[1, 3, 3, 1]);
        assert_eq!(hf.get(4), 1);
        assert_eq!(ArtinQuotient::new(&r, gens).unwrap_err(), Error::NotRegular);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn regularity_shortcut_matches_full_check(
            coeffs in proptest::collection::vec(0u32..3, 18),
        ) {
            // GF(3) makes non-regular draws common.
            let r = Arc::new(RingContext::new(3, 3).unwrap());
            let gens: Vec<Form> = coeffs.chunks(6).map(|c| Form::from_dense(&r, 2, c)).collect();
            prop_assume!(gens.iter().all(|g| !g.is_zero()));
            let full = hilbert_function(&r, &gens, 4).unwrap() == complete_intersection_series(&[2, 2, 2]);
            prop_assert_eq!(ArtinQuotient::new(&r, gens).is_ok(), full);
        }
    }
    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]
        #[test]
        fn inverse_system_matches_macaulay_matrices(
            n in 1usize..=4,
            p in prop::sample::select(vec![2u64, 3, 101]),
            spec in proptest::collection::vec((1u32..=3, proptest::collection::vec(0u32..101, 20)), 0..5),
        ) {
            let r = Arc::new(RingContext::new(n, p).unwrap());
            let gens: Vec<Form> = spec
                .iter()
                .map(|(d, c)| {
                    let len = dim_graded_piece(n, *d);
                    let c: Vec<u32> = c.iter().cycle().take(len).map(|&x| x % p as u32).collect();
                    Form::from_dense(&r, *d, &c)
                })
                .collect();
            let dual = InverseSystem::new(&r, &gens, 5).unwrap();
            prop_assert_eq!(dual.hilbert_function(), hilbert_function(&r, &gens, 5).unwrap());
            for d in 0..=5 {
                prop_assert_eq!(dual.ideal_piece(d).unwrap(), ideal_piece(&r, &gens, d).unwrap());
            }
        }
    }

    #[test]
    fn quotient_pieces_match_macaulay_matrices() {
        let r = ring(4);
        let gens = forms(&r, &["x1^2 + x2*x3", "x2^2 + 98*x1*x4", "x3^2 + x1*x2 + x4^2", "x4^2 + 5*x1*x3"]);
        let q = ArtinQuotient::new(&r, gens.clone()).unwrap();
        assert_eq!(q.hilbert_function().0, vec![1, 4, 6, 4, 1, 0]);
        for d in 0..=6 {
            assert_eq!(*q.ci_piece(d), ideal_piece(&r, &gens, d).unwrap());
        }
        assert_eq!(q.inverse_system().dim(9), Some(0));
    }
}
