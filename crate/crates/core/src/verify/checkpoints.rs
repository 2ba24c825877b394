use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{egh_d_check, egh_full_check, thm315_check, IdealInstance};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::form::Form;
use crate::harness::{
    random_case_tuple, random_defect_instance, random_unit, trial_rng, IdealFile,
    DEFAULT_ATTEMPT_CAP,
};
use crate::lpp::DegreeVector;
use crate::ring::RingContext;

fn quad(ctx: &Arc<RingContext>, i: usize, j: usize) -> Form {
    Form::var(ctx, i).mul(&Form::var(ctx, j)).expect("same ring")
}

fn require_five(ctx: &RingContext) -> Result<()> {
    if ctx.n() == 5 {
        Ok(())
    } else {
        Err(Error::UnsupportedShape("case ideals live in five variables".into()))
    }
}

/// `(f1, f2, f3, f4 + c·x1^2, x1x5) + (x1x2, x1x3, x1x4)` with `f` in `x2..x5`.
pub fn case1_ideal(ctx: &Arc<RingContext>, f: &[Form; 4], c: Scalar) -> Result<IdealInstance> {
    require_five(ctx)?;
    let ci = vec![
        f[0].clone(),
        f[1].clone(),
        f[2].clone(),
        f[3].add(&quad(ctx, 0, 0).scale(c))?,
        quad(ctx, 0, 4),
    ];
    let extras = vec![quad(ctx, 0, 1), quad(ctx, 0, 2), quad(ctx, 0, 3)];
    IdealInstance::new(ctx, ci, extras)
}

/// `(f1, f2, f3, f4 + c·x4x5, x5^2) + (x1x5, x2x5, x3x5)` with `f` in `x1..x4`.
pub fn case2_ideal(ctx: &Arc<RingContext>, f: &[Form; 4], c: Scalar) -> Result<IdealInstance> {
    require_five(ctx)?;
    let ci = vec![
        f[0].clone(),
        f[1].clone(),
        f[2].clone(),
        f[3].add(&quad(ctx, 3, 4).scale(c))?,
        quad(ctx, 4, 4),
    ];
    let extras = vec![quad(ctx, 0, 4), quad(ctx, 1, 4), quad(ctx, 2, 4)];
    IdealInstance::new(ctx, ci, extras)
}

/// `dim a_2` for `a = (f1, f2, f3, f4 + c·x4x5, x5^2) : (x1x5, x2x5, x3x5)`.
pub fn case2_colon_dim(ctx: &Arc<RingContext>, f: &[Form; 4], c: Scalar) -> Result<usize> {
    let inst = case2_ideal(ctx, f, c)?;
    Ok(inst.quotient().colon(inst.extras(), 2)?.dim())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointResult {
    pub name: String,
    pub trials: usize,
    pub passed: bool,
    pub detail: String,
    /// The first failing instance, in ideal-file JSON.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointSummary {
    pub seed: u64,
    pub results: Vec<CheckpointResult>,
}

impl CheckpointSummary {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

struct Tally {
    name: String,
    trials: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.into(),
            trials: 0,
            failure: None,
        }
    }

    fn record(&mut self, ok: bool, inst: &IdealInstance) {
        self.trials += 1;
        if !ok && self.failure.is_none() {
            self.failure = serde_json::to_string(&IdealFile::from_instance(inst)).ok();
        }
    }

    fn finish(self, detail: String) -> CheckpointResult {
        CheckpointResult {
            name: self.name,
            trials: self.trials,
            passed: self.failure.is_none(),
            detail,
            failure: self.failure,
        }
    }
}

const CASE_TRIALS: usize = 100;
const HIGH_DEFECT_TRIALS: usize = 50;
const DEFECT_TWO_TRIALS: usize = 1000;

/// Draws case-ideal instances, redrawing `f` until the designated
/// sequence is regular.
fn sample_case<R, F>(ctx: &Arc<RingContext>, vars: [usize; 4], rng: &mut R, build: F) -> Result<IdealInstance>
where
    R: rand::Rng,
    F: Fn(&[Form; 4]) -> Result<IdealInstance>,
{
    for _ in 0..DEFAULT_ATTEMPT_CAP {
        let f = random_case_tuple(ctx, vars, rng)?;
        match build(&f) {
            Ok(inst) => return Ok(inst),
            Err(Error::NotRegular) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Generation {
        attempts: DEFAULT_ATTEMPT_CAP,
        what: "regular case-ideal sequence".into(),
    })
}

fn colon_battery(ctx: &Arc<RingContext>, seed: u64) -> Result<CheckpointResult> {
    let mut rng = trial_rng(seed, 1);
    let mut tally = Tally::new("colon (f1,f2,f3,f4+c·x4x5,x5^2):(x1x5,x2x5,x3x5) has Hf(2) = 6");
    let one = ctx.field().one();
    let mut general = Vec::new();
    for _ in 0..CASE_TRIALS {
        let c = random_unit(ctx, &mut rng);
        for (coef, track) in [(one, false), (c, true)] {
            let inst = sample_case(ctx, [0, 1, 2, 3], &mut rng, |f| case2_ideal(ctx, f, coef))?;
            let dim = inst.quotient().colon(inst.extras(), 2)?.dim();
            if track {
                general.push(dim);
            }
            tally.record(dim == 9 && 15 - dim == 6, &inst);
        }
    }
    let detail = format!(
        "dim a_2 = 9 on {} draws with c = 1 and random c; random-c dims in [{}, {}]",
        tally.trials,
        general.iter().min().unwrap_or(&0),
        general.iter().max().unwrap_or(&0)
    );
    Ok(tally.finish(detail))
}

fn case_ideals(ctx: &Arc<RingContext>, seed: u64) -> Result<Vec<CheckpointResult>> {
    let mut out = Vec::new();
    let cases: [(&str, [usize; 4], u64); 2] = [
        ("case ideal with x1x5: Hf(3) = 4 and a full lex-plus-powers match", [1, 2, 3, 4], 2),
        ("case ideal with x5^2: Hf(3) = 4 and a full lex-plus-powers match", [0, 1, 2, 3], 3),
    ];
    for (name, vars, stream) in cases {
        let mut rng = trial_rng(seed, stream);
        let mut tally = Tally::new(name);
        for _ in 0..CASE_TRIALS {
            let c = random_unit(ctx, &mut rng);
            let inst = if stream == 2 {
                sample_case(ctx, vars, &mut rng, |f| case1_ideal(ctx, f, c))?
            } else {
                sample_case(ctx, vars, &mut rng, |f| case2_ideal(ctx, f, c))?
            };
            let full = egh_full_check(&inst)?;
            tally.record(full.holds() && full.hilbert_function().get(3) == 4, &inst);
        }
        out.push(tally.finish(format!("{} draws with random c", CASE_TRIALS)));
    }
    Ok(out)
}

fn high_defect(ctx: &Arc<RingContext>, seed: u64) -> Result<CheckpointResult> {
    let mut rng = trial_rng(seed, 4);
    let a = DegreeVector::quadrics(5);
    let mut tally = Tally::new("defect 5..10: Hf_{R/I}(3) <= Hf_{R/L}(3)");
    for delta in 5..=10 {
        for _ in 0..HIGH_DEFECT_TRIALS {
            let inst = random_defect_instance(ctx, &a, delta, &mut rng)?;
            tally.record(egh_d_check(&inst, 2)?.holds, &inst);
        }
    }
    Ok(tally.finish(format!("{HIGH_DEFECT_TRIALS} draws per defect")))
}

fn defect_two(ctx: &Arc<RingContext>, seed: u64) -> Result<CheckpointResult> {
    let mut rng = trial_rng(seed, 5);
    let a = DegreeVector::quadrics(5);
    let mut tally = Tally::new("defect 2: dim I_3 >= 30");
    let mut min = usize::MAX;
    for _ in 0..DEFECT_TWO_TRIALS {
        let inst = random_defect_instance(ctx, &a, 2, &mut rng)?;
        let rep = thm315_check(&inst)?;
        min = min.min(rep.measured);
        tally.record(rep.holds, &inst);
    }
    Ok(tally.finish(format!("min dim I_3 = {min}")))
}

/// The fixed battery over five variables at `p = 101`.
pub fn paper_checkpoints(seed: u64) -> Result<CheckpointSummary> {
    let ctx = Arc::new(RingContext::new(5, 101)?);
    let mut results = vec![colon_battery(&ctx, seed)?];
    results.extend(case_ideals(&ctx, seed)?);
    results.push(high_defect(&ctx, seed)?);
    results.push(defect_two(&ctx, seed)?);
    Ok(CheckpointSummary { seed, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<RingContext> {
        Arc::new(RingContext::new(5, 101).unwrap())
    }

    fn parse4(r: &Arc<RingContext>, s: [&str; 4]) -> [Form; 4] {
        s.map(|t| Form::parse(r, t).unwrap())
    }

    #[test]
    fn monomial_case2_colon() {
        let r = ring();
        let f = parse4(&r, ["x1^2", "x2^2", "x3^2", "x4^2"]);
        let one = r.field().one();
        let inst = case2_ideal(&r, &f, one).unwrap();
        // x5 kills every extra modulo x5^2.
        assert_eq!(inst.quotient().colon(&inst.extras()[..2], 1).unwrap().dim(), 1);
        assert_eq!(case2_colon_dim(&r, &f, one).unwrap(), 9);
        assert_eq!(inst.hilbert_function().get(3), 4);
    }

    #[test]
    fn monomial_case1() {
        let r = ring();
        let f = parse4(&r, ["x2^2", "x3^2", "x4^2", "x5^2"]);
        let inst = case1_ideal(&r, &f, r.field().from_u64(3)).unwrap();
        let full = egh_full_check(&inst).unwrap();
        assert!(full.holds());
        assert_eq!(full.hilbert_function().get(3), 4);
        let zero = case1_ideal(&r, &f, r.field().zero());
        assert!(zero.is_err());
    }

    #[test]
    fn battery_passes() {
        let s = paper_checkpoints(1).unwrap();
        for r in &s.results {
            println!("{}: {}", r.name, r.detail);
            assert!(r.passed, "{r:?}");
        }
        assert_eq!(s.results.len(), 5);
    }
}
