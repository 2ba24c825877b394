//! Seeded random instances and the trial runner behind `egh search`.
//!
//! Every trial draws from its own `ChaCha8Rng`: the generator is seeded with
//! the master seed and switched to stream number `index`, so any trial can be
//! replayed alone.

mod file;
mod search;

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::form::Form;
use crate::linalg::{extend_piece, ArtinQuotient};
use crate::lpp::DegreeVector;
use crate::monomial::MonomialTable;
use crate::ring::RingContext;
use crate::verify::IdealInstance;

pub use file::IdealFile;
pub use search::{
    evaluate, replay_trial, run_search, run_trial, Check, CheckOutcome, DefectSpec, SearchConfig,
    SearchSummary, TrialRecord, LOG_GENERATOR, LOG_SEED_DERIVATION,
};

pub const DEFAULT_ATTEMPT_CAP: usize = 1000;

/// The generator for trial `index` under master seed `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform coefficients on every degree-`d` monomial; the zero form is redrawn.
pub fn random_form<R: Rng + ?Sized>(ctx: &Arc<RingContext>, d: u32, rng: &mut R) -> Form {
    let vars: Vec<usize> = (0..ctx.n()).collect();
    random_form_in_vars(ctx, d, &vars, rng)
}

/// Like [`random_form`] but supported on monomials in the listed variables only.
pub fn random_form_in_vars<R: Rng + ?Sized>(
    ctx: &Arc<RingContext>,
    d: u32,
    vars: &[usize],
    rng: &mut R,
) -> Form {
    assert!(d >= 1, "random forms need positive degree");
    assert!(!vars.is_empty());
    let table = MonomialTable::get(ctx.n(), d);
    let allowed: Vec<bool> = table
        .monomials()
        .iter()
        .map(|m| (0..ctx.n()).all(|i| m.exponent(i) == 0 || vars.contains(&i)))
        .collect();
    let p = ctx.p();
    loop {
        let coeffs: Vec<u32> = allowed
            .iter()
            .map(|&ok| if ok { rng.gen_range(0..p) } else { 0 })
            .collect();
        let f = Form::from_dense(ctx, d, &coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Rejection-samples a regular sequence of degrees `a`.
///
/// Returns the quotient by it and the number of rejected draws.
pub fn random_regular_sequence<R: Rng + ?Sized>(
    ctx: &Arc<RingContext>,
    a: &DegreeVector,
    rng: &mut R,
    cap: usize,
) -> Result<(ArtinQuotient, usize)> {
    if a.len() != ctx.n() {
        return Err(Error::Input(format!("{} degrees for {} variables", a.len(), ctx.n())));
    }
    for attempt in 0..cap {
        let forms: Vec<Form> = a.degrees().iter().map(|&d| random_form(ctx, d, rng)).collect();
        match ArtinQuotient::new(ctx, forms) {
            Ok(q) => return Ok((q, attempt)),
            Err(Error::NotRegular) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Generation {
        attempts: cap,
        what: "regular sequence".into(),
    })
}

/// Draws extras of the given degrees until they are independent modulo `c`
/// in each degree.
pub fn random_extras<R: Rng + ?Sized>(
    q: &ArtinQuotient,
    degrees: &[u32],
    rng: &mut R,
    cap: usize,
) -> Result<Vec<Form>> {
    let ctx = q.ctx();
    'attempt: for _ in 0..cap {
        let extras: Vec<Form> = degrees.iter().map(|&d| random_form(ctx, d, rng)).collect();
        let mut ds = degrees.to_vec();
        ds.sort_unstable();
        ds.dedup();
        for d in ds {
            let same: Vec<Form> = extras.iter().filter(|g| g.degree() == d).cloned().collect();
            let base = q.ci_piece(d);
            if extend_piece(&base, &same).dim() != base.dim() + same.len() {
                continue 'attempt;
            }
        }
        return Ok(extras);
    }
    Err(Error::Generation {
        attempts: cap,
        what: format!("extras of degrees {degrees:?}"),
    })
}

/// A regular sequence of degrees `a` plus `delta` extras of degree `a1`,
/// independent modulo `c`.
pub fn random_defect_instance<R: Rng + ?Sized>(
    ctx: &Arc<RingContext>,
    a: &DegreeVector,
    delta: usize,
    rng: &mut R,
) -> Result<IdealInstance> {
    let e = a.degrees()[0];
    let room = MonomialTable::get(ctx.n(), e).len() - a.degrees().iter().filter(|&&x| x == e).count();
    if delta > room {
        return Err(Error::Input(format!("defect {delta} exceeds {room} in degree {e}")));
    }
    let (q, _) = random_regular_sequence(ctx, a, rng, DEFAULT_ATTEMPT_CAP)?;
    let extras = random_extras(&q, &vec![e; delta], rng, DEFAULT_ATTEMPT_CAP)?;
    IdealInstance::from_quotient(q, extras)
}

/// A regular sequence of degrees `a` plus between 0 and `max_extras` extras,
/// each of degree `a1`, `a1 + 1` or `a1 + 2`.
///
/// Extras are independent modulo `c` in each degree, so a degree holds at
/// most `dim A_d` of them; the surplus moves up a degree, and whatever does
/// not fit by `a1 + 2` is dropped.
pub fn random_mixed_instance<R: Rng + ?Sized>(
    ctx: &Arc<RingContext>,
    a: &DegreeVector,
    max_extras: usize,
    rng: &mut R,
) -> Result<IdealInstance> {
    let e = a.degrees()[0];
    let (q, _) = random_regular_sequence(ctx, a, rng, DEFAULT_ATTEMPT_CAP)?;
    let delta = rng.gen_range(0..=max_extras);
    let mut counts = [0usize; 3];
    for _ in 0..delta {
        counts[rng.gen_range(0..3)] += 1;
    }
    let mut degrees = Vec::with_capacity(delta);
    let mut carry = 0;
    for (k, c) in counts.iter().enumerate() {
        let d = e + k as u32;
        let want = c + carry;
        let fit = want.min(q.hf(d));
        carry = want - fit;
        degrees.extend(std::iter::repeat_n(d, fit));
    }
    let extras = random_extras(&q, &degrees, rng, DEFAULT_ATTEMPT_CAP)?;
    IdealInstance::from_quotient(q, extras)
}

/// Four quadrics in the listed four variables that form a regular sequence
/// there, checked by adjoining the square of the fifth variable.
pub fn random_case_tuple<R: Rng + ?Sized>(
    ctx: &Arc<RingContext>,
    vars: [usize; 4],
    rng: &mut R,
) -> Result<[Form; 4]> {
    if ctx.n() != 5 {
        return Err(Error::UnsupportedShape("case ideals live in five variables".into()));
    }
    let other = (0..5).find(|i| !vars.contains(i)).unwrap();
    let sq = Form::var(ctx, other).mul(&Form::var(ctx, other))?;
    for _ in 0..DEFAULT_ATTEMPT_CAP {
        let fs: [Form; 4] = std::array::from_fn(|_| random_form_in_vars(ctx, 2, &vars, rng));
        let mut all = fs.to_vec();
        all.push(sq.clone());
        if ArtinQuotient::new(ctx, all).is_ok() {
            return Ok(fs);
        }
    }
    Err(Error::Generation {
        attempts: DEFAULT_ATTEMPT_CAP,
        what: "regular quadrics in four variables".into(),
    })
}

/// A uniformly random nonzero scalar.
pub fn random_unit<R: Rng + ?Sized>(ctx: &RingContext, rng: &mut R) -> crate::field::Scalar {
    ctx.field().from_u64(rng.gen_range(1..ctx.p()) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::defect;

    fn ring(n: usize, p: u64) -> Arc<RingContext> {
        Arc::new(RingContext::new(n, p).unwrap())
    }

    #[test]
    fn random_form_is_reproducible() {
        let r = ring(5, 101);
        let f = random_form(&r, 2, &mut trial_rng(42, 0));
        let g = random_form(&r, 2, &mut trial_rng(42, 0));
        assert_eq!(f, g);
        assert_eq!(f.to_dense().len(), 15);
        assert!(!f.is_zero());
        assert_ne!(f, random_form(&r, 2, &mut trial_rng(42, 1)));
    }

    #[test]
    fn restricted_support() {
        let r = ring(5, 101);
        let f = random_form_in_vars(&r, 2, &[1, 2, 3, 4], &mut trial_rng(1, 0));
        assert!(f.terms().all(|(m, _)| m.exponent(0) == 0));
    }

    #[test]
    fn regular_sequences() {
        let r = ring(5, 101);
        let a = DegreeVector::quadrics(5);
        let mut rng = trial_rng(7, 0);
        let mut first_try = 0;
        for _ in 0..20 {
            let (q, rejected) = random_regular_sequence(&r, &a, &mut rng, DEFAULT_ATTEMPT_CAP).unwrap();
            assert_eq!(q.hilbert_function().0, vec![1, 5, 10, 10, 5, 1, 0]);
            first_try += (rejected == 0) as usize;
        }
        assert!(first_try >= 15);
        let r2 = ring(5, 2);
        assert!(random_regular_sequence(&r2, &a, &mut rng, 100_000).is_ok());
        assert!(matches!(
            random_regular_sequence(&r, &a, &mut rng, 0),
            Err(Error::Generation { attempts: 0, .. })
        ));
    }

    #[test]
    fn defect_instances() {
        let r = ring(5, 101);
        let a = DegreeVector::quadrics(5);
        let mut rng = trial_rng(3, 0);
        let ci = random_defect_instance(&r, &a, 0, &mut rng).unwrap();
        assert!(ci.extras().is_empty());
        let two = random_defect_instance(&r, &a, 2, &mut rng).unwrap();
        assert_eq!(defect(&two).unwrap(), 2);
        let ten = random_defect_instance(&r, &a, 10, &mut rng).unwrap();
        assert_eq!(ten.hilbert_function().0, vec![1, 5, 0, 0, 0, 0, 0]);
        assert!(random_defect_instance(&r, &a, 11, &mut rng).is_err());
    }

    #[test]
    fn mixed_instances_validate() {
        let r = ring(5, 101);
        let a = DegreeVector::quadrics(5);
        let mut rng = trial_rng(11, 0);
        for _ in 0..300 {
            let inst = random_mixed_instance(&r, &a, 10, &mut rng).unwrap();
            let hf = inst.quotient().hilbert_function();
            for d in 2..=4 {
                assert!(inst.extras().iter().filter(|g| g.degree() == d).count() <= hf.get(d as usize));
            }
            assert!(inst.extras().len() <= 10);
            assert!(inst.extras().iter().all(|g| (2..=4).contains(&g.degree())));
        }
    }
}
