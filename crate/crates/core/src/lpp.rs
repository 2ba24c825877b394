//! Lex segments, lex-plus-powers ideals and Macaulay's growth bound.
//!
//! Everything here is combinatorial: pieces of monomial ideals are counted
//! by divisibility, never by linear algebra. That keeps this module an
//! independent check on [`crate::linalg`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::linalg::OSequence;
use crate::monomial::{binomial, Monomial, MonomialTable};
use crate::ring::RingContext;

/// Degrees `2 <= a1 <= ... <= an` of the pure powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct DegreeVector {
    a: Vec<u32>,
    socle_degree: u32,
}

impl DegreeVector {
    pub fn new(a: Vec<u32>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::DegreeVector("empty".into()));
        }
        if a.iter().any(|&x| x < 2) {
            return Err(Error::DegreeVector(format!("entries must be >= 2: {a:?}")));
        }
        if a.iter().any(|&x| x > u8::MAX as u32) {
            return Err(Error::DegreeVector(format!("entries must be <= 255: {a:?}")));
        }
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::DegreeVector(format!("must be non-decreasing: {a:?}")));
        }
        let socle_degree = a.iter().map(|x| x - 1).sum();
        Ok(DegreeVector { a, socle_degree })
    }

    /// `(2, ..., 2)` of length `n`.
    pub fn quadrics(n: usize) -> Self {
        DegreeVector::new(vec![2; n]).unwrap()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `s = sum(a_i - 1)`.
    pub fn socle_degree(&self) -> u32 {
        self.socle_degree
    }

    /// Whether `m` lies in `(x1^{a1}, ..., xn^{an})`.
    pub fn kills(&self, m: &Monomial) -> bool {
        self.a.iter().enumerate().any(|(i, &ai)| m.exponent(i) >= ai)
    }
}

impl TryFrom<Vec<u32>> for DegreeVector {
    type Error = Error;
    fn try_from(a: Vec<u32>) -> Result<Self> {
        DegreeVector::new(a)
    }
}

impl From<DegreeVector> for Vec<u32> {
    fn from(d: DegreeVector) -> Self {
        d.a
    }
}

/// Number of degree-d monomials outside the monomial ideal `(gens)`.
pub fn standard_monomial_count(n: usize, gens: &[Monomial], d: u32) -> usize {
    MonomialTable::get(n, d)
        .monomials()
        .iter()
        .filter(|m| !gens.iter().any(|g| g.divides(m)))
        .count()
}

/// Hilbert function of `R/(gens)` for a monomial ideal, by counting.
pub fn monomial_hilbert_function(n: usize, gens: &[Monomial], max_degree: u32) -> OSequence {
    OSequence(
        (0..=max_degree)
            .map(|d| standard_monomial_count(n, gens, d))
            .collect(),
    )
}

/// `(x1^{a1}, ..., xn^{an}) + J` with `J` generated by lex segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LppIdeal {
    ctx: Arc<RingContext>,
    a: DegreeVector,
    // ascending degree; descending lex within a degree
    lex_gens: Vec<Monomial>,
}

impl LppIdeal {
    /// The pure powers `(x^a)` alone.
    pub fn powers(ctx: &Arc<RingContext>, a: DegreeVector) -> Result<Self> {
        if a.len() != ctx.n() {
            return Err(Error::DegreeVector(format!(
                "{} degrees for {} variables",
                a.len(),
                ctx.n()
            )));
        }
        Ok(LppIdeal {
            ctx: ctx.clone(),
            a,
            lex_gens: Vec::new(),
        })
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn degree_vector(&self) -> &DegreeVector {
        &self.a
    }

    pub fn lex_generators(&self) -> &[Monomial] {
        &self.lex_gens
    }

    /// Pure powers followed by the lex generators.
    pub fn all_generators(&self) -> Vec<Monomial> {
        let n = self.ctx.n();
        let mut out: Vec<Monomial> = self
            .a
            .degrees()
            .iter()
            .enumerate()
            .map(|(i, &ai)| {
                let mut e = vec![0; n];
                e[i] = ai;
                Monomial::from_exponents(&e).unwrap()
            })
            .collect();
        out.extend_from_slice(&self.lex_gens);
        out
    }

    pub fn generator_forms(&self) -> Vec<Form> {
        let one = self.ctx.field().one();
        self.all_generators()
            .into_iter()
            .map(|m| Form::monomial(&self.ctx, m, one))
            .collect()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.a.kills(m) || self.lex_gens.iter().any(|g| g.divides(m))
    }

    /// Degree-d monomials outside the ideal, descending lex.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        MonomialTable::get(self.ctx.n(), d)
            .monomials()
            .iter()
            .filter(|m| !self.contains(m))
            .copied()
            .collect()
    }

    /// `dim L_d`, counted monomial by monomial.
    pub fn piece_dim(&self, d: u32) -> usize {
        let table = MonomialTable::get(self.ctx.n(), d);
        table.monomials().iter().filter(|m| self.contains(m)).count()
    }

    pub fn hilbert_function(&self, max_degree: u32) -> OSequence {
        OSequence(
            (0..=max_degree)
                .map(|d| self.standard_monomials(d).len())
                .collect(),
        )
    }

    /// Adds the `k` greatest standard monomials of degree `d` as generators.
    pub fn add_segment(&mut self, d: u32, k: usize) -> Result<()> {
        let seg = lex_segment(&self.ctx, d, k, Some(self))?;
        if let Some(last) = self.lex_gens.last() {
            if last.degree() > d && !seg.is_empty() {
                return Err(Error::Input(format!(
                    "segments must be added in increasing degree ({} after {})",
                    d,
                    last.degree()
                )));
            }
        }
        self.lex_gens.extend(seg);
        Ok(())
    }

    /// Degree-d monomials of the ideal form an initial lex segment of the
    /// standard monomials of `(x^a)` in that degree.
    pub fn is_lex_plus_powers(&self, max_degree: u32) -> bool {
        (0..=max_degree).all(|d| {
            let outside_powers = MonomialTable::get(self.ctx.n(), d)
                .monomials()
                .iter()
                .filter(|m| !self.a.kills(m))
                .map(|m| self.contains(m))
                .collect::<Vec<_>>();
            // a run of `true` followed by only `false`
            outside_powers.windows(2).all(|w| w[0] || !w[1])
        })
    }
}

impl fmt::Display for LppIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.all_generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", m.display(&self.ctx))?;
        }
        write!(f, ")")
    }
}

/// The `k` greatest degree-d monomials not in `exclude` (or in all of `R_d`).
pub fn lex_segment(
    ctx: &Arc<RingContext>,
    d: u32,
    k: usize,
    exclude: Option<&LppIdeal>,
) -> Result<Vec<Monomial>> {
    let candidates: Vec<Monomial> = match exclude {
        Some(l) => {
            ctx.check_same(l.ctx())?;
            l.standard_monomials(d)
        }
        None => MonomialTable::get(ctx.n(), d).monomials().to_vec(),
    };
    if k > candidates.len() {
        return Err(Error::Capacity {
            degree: d,
            requested: k,
            available: candidates.len(),
        });
    }
    Ok(candidates[..k].to_vec())
}

/// `(x^a)` plus the `delta` greatest degree-d monomials outside `(x^a)`.
pub fn lpp_defect(ctx: &Arc<RingContext>, a: DegreeVector, d: u32, delta: usize) -> Result<LppIdeal> {
    let mut l = LppIdeal::powers(ctx, a)?;
    l.add_segment(d, delta)?;
    Ok(l)
}

pub fn lpp_piece_dim(l: &LppIdeal, d: u32) -> usize {
    l.piece_dim(d)
}

/// Greedy `d`-th binomial representation `h = C(b_d, d) + ... + C(b_j, j)`,
/// returned as `(b_k, k)` pairs from the top.
pub fn binomial_representation(mut h: u64, d: u32) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut k = d;
    while h > 0 && k >= 1 {
        // largest b with C(b, k) <= h; b >= k since C(k, k) = 1 <= h
        let mut b = k as u64;
        while binomial(b + 1, k as u64) <= h {
            b += 1;
        }
        out.push((b, k));
        h -= binomial(b, k as u64);
        k -= 1;
    }
    out
}

/// Macaulay's bound `h^<d>`: the largest possible `Hf(d+1)` given `Hf(d) = h`.
pub fn macaulay_bound(h: u64, d: u32) -> u64 {
    assert!(d >= 1, "macaulay_bound needs d >= 1");
    binomial_representation(h, d)
        .into_iter()
        .map(|(b, k)| binomial(b + 1, k as u64 + 1))
        .sum()
}

/// Why no lex-plus-powers ideal matches a target sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchFailure {
    /// First degree at which the target cannot be met.
    pub degree: u32,
    pub target: usize,
    /// `Hf_{R/L}(degree)` before any generators of this degree are added.
    pub available: usize,
    /// Generators accepted below the failing degree.
    pub partial_generators: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum MatchOutcome {
    Matched(LppIdeal),
    Infeasible(MatchFailure),
}

impl MatchOutcome {
    pub fn matched(&self) -> Option<&LppIdeal> {
        match self {
            MatchOutcome::Matched(l) => Some(l),
            MatchOutcome::Infeasible(_) => None,
        }
    }
}

/// Finds the lex-plus-powers ideal with Hilbert function `target`, degree by
/// degree, adding the fewest greatest standard monomials at each degree.
pub fn lpp_match_full(target: &OSequence, ctx: &Arc<RingContext>, a: &DegreeVector) -> Result<MatchOutcome> {
    if target.get(0) != 1 {
        return Err(Error::Input(format!(
            "target must start with 1, got {}",
            target.get(0)
        )));
    }
    let mut l = LppIdeal::powers(ctx, a.clone())?;
    let top = (target.len() as u32).max(a.socle_degree() + 2);
    for d in 0..top {
        let want = target.get(d as usize);
        let have = l.standard_monomials(d).len();
        if have < want {
            return Ok(MatchOutcome::Infeasible(MatchFailure {
                degree: d,
                target: want,
                available: have,
                partial_generators: l
                    .lex_gens
                    .iter()
                    .map(|m| m.display(ctx).to_string())
                    .collect(),
            }));
        }
        if have > want {
            l.add_segment(d, have - want)?;
        }
    }
    Ok(MatchOutcome::Matched(l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Arc<RingContext> {
        Arc::new(RingContext::new(n, 101).unwrap())
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn degree_vector_validation() {
        assert_eq!(DegreeVector::new(vec![2, 3, 3]).unwrap().socle_degree(), 5);
        assert!(DegreeVector::new(vec![3, 2]).is_err());
        assert!(DegreeVector::new(vec![1, 2]).is_err());
        assert!(DegreeVector::new(vec![]).is_err());
        assert!(serde_json::from_str::<DegreeVector>("[2,1]").is_err());
    }

    #[test]
    fn lex_segment_examples() {
        let r = ring(5);
        let powers = LppIdeal::powers(&r, DegreeVector::quadrics(5)).unwrap();
        assert_eq!(
            lex_segment(&r, 2, 2, Some(&powers)).unwrap(),
            vec![m(&[1, 1, 0, 0, 0]), m(&[1, 0, 1, 0, 0])]
        );
        assert!(lex_segment(&r, 2, 0, None).unwrap().is_empty());
        assert!(matches!(
            lex_segment(&r, 2, 11, Some(&powers)),
            Err(Error::Capacity { available: 10, .. })
        ));
        let r3 = ring(3);
        let p3 = LppIdeal::powers(&r3, DegreeVector::quadrics(3)).unwrap();
        assert_eq!(
            lex_segment(&r3, 2, 3, Some(&p3)).unwrap(),
            vec![m(&[1, 1, 0]), m(&[1, 0, 1]), m(&[0, 1, 1])]
        );
    }

    #[test]
    fn lpp_defect_examples() {
        let r = ring(5);
        let q = DegreeVector::quadrics(5);
        let l2 = lpp_defect(&r, q.clone(), 2, 2).unwrap();
        assert_eq!(l2.to_string(), "(x1^2, x2^2, x3^2, x4^2, x5^2, x1*x2, x1*x3)");
        assert_eq!(lpp_piece_dim(&l2, 3), 30);
        let l3 = lpp_defect(&r, q.clone(), 2, 3).unwrap();
        assert_eq!(l3.lex_generators().last(), Some(&m(&[1, 0, 0, 1, 0])));
        assert_eq!(lpp_piece_dim(&l3, 3), 31);
        let l4 = lpp_defect(&r, q.clone(), 2, 4).unwrap();
        assert_eq!(lpp_piece_dim(&l4, 3), 31);
        let dims: Vec<usize> = (0..=4)
            .map(|delta| lpp_piece_dim(&lpp_defect(&r, q.clone(), 2, delta).unwrap(), 3))
            .collect();
        assert_eq!(dims, vec![25, 28, 30, 31, 31]);
        assert_eq!(lpp_piece_dim(&LppIdeal::powers(&r, q).unwrap(), 3), 25);
    }

    #[test]
    fn macaulay_examples() {
        assert_eq!(macaulay_bound(0, 3), 0);
        assert_eq!(macaulay_bound(10, 3), 15);
        assert_eq!(macaulay_bound(5, 2), 7);
        assert_eq!(binomial_representation(5, 2), vec![(3, 2), (2, 1)]);
        assert_eq!(macaulay_bound(1, 1), 1);
    }

    #[test]
    fn macaulay_monotone() {
        for d in 1..=5 {
            for h in 0..200 {
                assert!(macaulay_bound(h, d) <= macaulay_bound(h + 1, d));
            }
        }
    }

    #[test]
    fn match_complete_intersection() {
        let r = ring(5);
        let q = DegreeVector::quadrics(5);
        let out = lpp_match_full(&OSequence(vec![1, 5, 10, 10, 5, 1]), &r, &q).unwrap();
        assert!(out.matched().unwrap().lex_generators().is_empty());
    }

    #[test]
    fn match_defect_two_shape() {
        let r = ring(5);
        let q = DegreeVector::quadrics(5);
        let target = OSequence(vec![1, 5, 8, 5, 1, 0]);
        let l = lpp_match_full(&target, &r, &q).unwrap().matched().unwrap().clone();
        assert_eq!(&l.lex_generators()[..2], &[m(&[1, 1, 0, 0, 0]), m(&[1, 0, 1, 0, 0])]);
        assert!(l.lex_generators()[2..].iter().all(|g| g.degree() >= 4));
        assert_eq!(l.hilbert_function(6).0, vec![1, 5, 8, 5, 1, 0, 0]);
        assert!(l.is_lex_plus_powers(6));
    }

    #[test]
    fn match_rejects_infeasible_growth() {
        let r = ring(5);
        let q = DegreeVector::quadrics(5);
        // Hf(2) = 9 forces L ⊇ (x^2, x1*x2), leaving 10 - 3 = 7 squarefree cubics
        let target = OSequence(vec![1, 5, 9, 8]);
        match lpp_match_full(&target, &r, &q).unwrap() {
            MatchOutcome::Infeasible(f) => {
                assert_eq!(f.degree, 3);
                assert_eq!(f.target, 8);
                assert_eq!(f.available, 7);
            }
            MatchOutcome::Matched(l) => panic!("unexpected match {l}"),
        }
        assert!(lpp_match_full(&OSequence(vec![0]), &r, &q).is_err());
    }

    #[test]
    fn counting_helpers() {
        let gens = [m(&[2, 0, 0]), m(&[0, 1, 1])];
        assert_eq!(monomial_hilbert_function(3, &gens, 3).0, vec![1, 3, 4, 4]);
    }
}
