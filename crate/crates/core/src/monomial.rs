//! Monomials, the lexicographic order, and per-degree monomial tables.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::ring::{RingContext, MAX_VARS};

/// `x1^e1 * ... * xn^en`, exponents at most 255 each.
///
/// `Ord` is degree first, then lex with `x1 > x2 > ... > xn`. On monomials of
/// equal degree this is exactly the lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    n: u8,
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        assert!(n <= MAX_VARS);
        Monomial {
            degree: 0,
            n: n as u8,
            exps: [0; MAX_VARS],
        }
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "{} exponents exceed {MAX_VARS} variables",
                exps.len()
            )));
        }
        let mut m = Monomial::one(exps.len());
        for (i, &e) in exps.iter().enumerate() {
            if e > u8::MAX as u32 {
                return Err(Error::Input(format!("exponent {e} exceeds 255")));
            }
            m.exps[i] = e as u8;
            m.degree += e;
        }
        Ok(m)
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut m = Monomial::one(n);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps[..self.n as usize]
    }

    /// Product; panics on exponent overflow past 255.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..self.n as usize {
            out.exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("monomial exponent overflow");
        }
        out.degree += other.degree;
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..self.n as usize).all(|i| self.exps[i] <= other.exps[i])
    }

    /// Index of the last variable with positive exponent.
    pub fn max_var(&self) -> Option<usize> {
        (0..self.n as usize).rev().find(|&i| self.exps[i] > 0)
    }

    pub fn display<'a>(&'a self, ctx: &'a RingContext) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, ctx }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.exponents())
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    ctx: &'a RingContext,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.ctx.var_names()[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Lexicographic comparison with `x1 > ... > xn`.
///
/// Monomials of different degree are ordered by degree first.
pub fn lex_cmp(u: &Monomial, v: &Monomial) -> Result<Ordering> {
    if u.n != v.n {
        return Err(Error::ContextMismatch(format!(
            "monomials in {} and {} variables",
            u.n, v.n
        )));
    }
    Ok(u.cmp(v))
}

fn enumerate(n: usize, d: u32, var: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
    if var + 1 == n {
        cur.exps[var] = d as u8;
        cur.degree += d;
        out.push(*cur);
        cur.degree -= d;
        cur.exps[var] = 0;
        return;
    }
    for e in (0..=d).rev() {
        cur.exps[var] = e as u8;
        cur.degree += e;
        enumerate(n, d - e, var + 1, cur, out);
        cur.degree -= e;
    }
    cur.exps[var] = 0;
}

/// All monomials of degree `d` in `n` variables, strictly descending in lex.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    assert!((1..=MAX_VARS).contains(&n), "1 <= n <= {MAX_VARS}");
    assert!(d <= u8::MAX as u32, "degree above 255");
    let mut out = Vec::with_capacity(binomial((n as u32 + d - 1) as u64, d as u64) as usize);
    enumerate(n, d, 0, &mut Monomial::one(n), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `dim R_d = C(n+d-1, d)`.
pub fn dim_graded_piece(n: usize, d: u32) -> usize {
    binomial(n as u64 + d as u64 - 1, d as u64) as usize
}

/// The degree-d monomials of a ring in descending lex, with a reverse index.
#[derive(Debug)]
pub struct MonomialTable {
    n: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

type TableCache = HashMap<(usize, u32), Arc<MonomialTable>>;

impl MonomialTable {
    fn build(n: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(n, degree);
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        MonomialTable {
            n,
            degree,
            monomials,
            index,
        }
    }

    /// Shared table for `(n, d)`, built once per process.
    pub fn get(n: usize, degree: u32) -> Arc<MonomialTable> {
        static CACHE: OnceLock<Mutex<TableCache>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&(n, degree)) {
            return t.clone();
        }
        let table = Arc::new(MonomialTable::build(n, degree));
        cache
            .lock()
            .unwrap()
            .entry((n, degree))
            .or_insert(table)
            .clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_cmp(&mono(&[1, 0, 1]), &mono(&[0, 2, 0])).unwrap(), Ordering::Greater);
        assert_eq!(lex_cmp(&mono(&[1, 1, 0]), &mono(&[1, 1, 0])).unwrap(), Ordering::Equal);
        assert_eq!(lex_cmp(&mono(&[0, 1, 1]), &mono(&[0, 2, 0])).unwrap(), Ordering::Less);
        assert!(matches!(
            lex_cmp(&mono(&[1, 1]), &mono(&[1, 1, 0])),
            Err(Error::ContextMismatch(_))
        ));
        // cross-degree: degree first
        assert_eq!(lex_cmp(&mono(&[0, 0, 3]), &mono(&[2, 0, 0])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            monomials_of_degree(2, 2),
            vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]
        );
        assert_eq!(monomials_of_degree(5, 3).len(), 35);
        assert_eq!(monomials_of_degree(5, 0), vec![Monomial::one(5)]);
    }

    #[test]
    fn enumeration_counts_and_order() {
        for n in 1..=8 {
            for d in 0..=6 {
                let ms = monomials_of_degree(n, d);
                assert_eq!(ms.len(), dim_graded_piece(n, d), "n={n} d={d}");
                assert!(ms.windows(2).all(|w| w[0] > w[1]));
                assert!(ms.iter().all(|m| m.degree() == d));
            }
        }
    }

    #[test]
    fn table_lookup() {
        let t = MonomialTable::get(4, 3);
        for (i, m) in t.monomials().iter().enumerate() {
            assert_eq!(t.index_of(m), Some(i));
        }
        assert!(Arc::ptr_eq(&t, &MonomialTable::get(4, 3)));
    }

    #[test]
    fn display() {
        let ctx = RingContext::new(3, 101).unwrap();
        assert_eq!(mono(&[2, 0, 1]).display(&ctx).to_string(), "x1^2*x3");
        assert_eq!(Monomial::one(3).display(&ctx).to_string(), "1");
    }

    proptest! {
        #[test]
        fn lex_is_total_order(
            a in proptest::collection::vec(0u32..4, 4),
            b in proptest::collection::vec(0u32..4, 4),
            c in proptest::collection::vec(0u32..4, 4),
        ) {
            let (u, v, w) = (mono(&a), mono(&b), mono(&c));
            let uv = lex_cmp(&u, &v).unwrap();
            prop_assert_eq!(uv.reverse(), lex_cmp(&v, &u).unwrap());
            prop_assert_eq!(uv == Ordering::Equal, u == v);
            if uv != Ordering::Less && lex_cmp(&v, &w).unwrap() != Ordering::Less {
                prop_assert_ne!(lex_cmp(&u, &w).unwrap(), Ordering::Less);
            }
        }
    }
}
