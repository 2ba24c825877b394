use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{random_defect_instance, random_mixed_instance, trial_rng, IdealFile};
use crate::error::{Error, Result};
use crate::linalg::complete_intersection_series;
use crate::lpp::DegreeVector;
use crate::monomial::dim_graded_piece;
use crate::ring::RingContext;
use crate::verify::{
    colon_linear_bound_check, cor24_check, duality_check, egh_d_check, egh_full_check,
    intersection_bound_check, lemma35_identity, thm315_check, IdealInstance,
    IntersectionBoundReport,
};

pub const LOG_GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.3)";
pub const LOG_SEED_DERIVATION: &str = "ChaCha8Rng::seed_from_u64(seed) then set_stream(trial index)";

/// One named check that a trial can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Check {
    /// `Hf_{R/c}` is the complete intersection series and symmetric.
    HfCi,
    Cor24,
    Thm315,
    Lemma35,
    EghD(u32),
    EghFull,
    Duality,
    ColonLinear,
    IntersectionBound,
}

impl Check {
    pub const ALL_NAMES: &'static [&'static str] = &[
        "hf_ci",
        "cor_2_4",
        "thm_3_15",
        "lemma_3_5",
        "egh_d(D)",
        "egh_full",
        "duality",
        "colon_linear",
        "intersection_bound",
    ];
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::HfCi => write!(f, "hf_ci"),
            Check::Cor24 => write!(f, "cor_2_4"),
            Check::Thm315 => write!(f, "thm_3_15"),
            Check::Lemma35 => write!(f, "lemma_3_5"),
            Check::EghD(d) => write!(f, "egh_d({d})"),
            Check::EghFull => write!(f, "egh_full"),
            Check::Duality => write!(f, "duality"),
            Check::ColonLinear => write!(f, "colon_linear"),
            Check::IntersectionBound => write!(f, "intersection_bound"),
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "hf_ci" => Check::HfCi,
            "cor_2_4" | "cor24" => Check::Cor24,
            "thm_3_15" | "thm315" => Check::Thm315,
            "lemma_3_5" | "lemma35" => Check::Lemma35,
            "egh_d" => Check::EghD(2),
            "egh_full" => Check::EghFull,
            "duality" => Check::Duality,
            "colon_linear" | "lemma_4_3" => Check::ColonLinear,
            "intersection_bound" | "prop_3_12" => Check::IntersectionBound,
            _ => {
                let d = s
                    .strip_prefix("egh_d(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| {
                        Error::Input(format!(
                            "unknown check {s:?}; known: {}",
                            Check::ALL_NAMES.join(", ")
                        ))
                    })?;
                Check::EghD(d)
            }
        })
    }
}

impl TryFrom<String> for Check {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Check> for String {
    fn from(c: Check) -> String {
        c.to_string()
    }
}

/// Which ideals a search samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectSpec {
    /// Exactly `delta` extras of degree `a1`.
    Fixed(usize),
    /// Uniform in `lo..=hi` extras of degree `a1`.
    Range(usize, usize),
    /// Up to ten extras of degrees `a1..=a1+2`.
    Mixed,
}

impl FromStr for DefectSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("defect must be N, LO-HI or mixed, got {s:?}"));
        if s == "mixed" {
            return Ok(DefectSpec::Mixed);
        }
        if let Some((lo, hi)) = s.split_once('-') {
            let lo = lo.parse().map_err(|_| bad())?;
            let hi = hi.parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            return Ok(DefectSpec::Range(lo, hi));
        }
        s.parse().map(DefectSpec::Fixed).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub p: u64,
    pub a: DegreeVector,
    pub defect: DefectSpec,
    pub trials: u64,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Input("trials must be at least 1".into()));
        }
        if self.a.len() != self.n {
            return Err(Error::Input(format!("{} degrees for n = {}", self.a.len(), self.n)));
        }
        RingContext::new(self.n, self.p)?;
        let e = self.a.degrees()[0];
        let room = dim_graded_piece(self.n, e) - self.a.degrees().iter().filter(|&&x| x == e).count();
        let top = match self.defect {
            DefectSpec::Fixed(d) => d,
            DefectSpec::Range(_, hi) => hi,
            DefectSpec::Mixed => 0,
        };
        if top > room {
            return Err(Error::Input(format!("defect {top} exceeds {room}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Fail,
    /// The check does not apply to this instance's shape.
    Skipped,
    /// A conditional statement whose hypothesis the instance does not meet.
    HypothesisNotMet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub seed: u64,
    pub instance: IdealFile,
    pub measurements: BTreeMap<String, usize>,
    pub outcomes: BTreeMap<String, CheckOutcome>,
    pub failed: bool,
    /// Not covered by the determinism contract.
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSummary {
    pub trials: u64,
    pub failures: u64,
    pub failed_indices: Vec<u64>,
    /// Smallest and largest value of each measurement over all trials.
    pub ranges: BTreeMap<String, (usize, usize)>,
    pub runtime_ms: f64,
    #[serde(skip)]
    pub first_failure: Option<TrialRecord>,
}

fn sample(cfg: &SearchConfig, ctx: &Arc<RingContext>, index: u64) -> Result<IdealInstance> {
    use rand::Rng;
    let mut rng = trial_rng(cfg.seed, index);
    match cfg.defect {
        DefectSpec::Fixed(d) => random_defect_instance(ctx, &cfg.a, d, &mut rng),
        DefectSpec::Range(lo, hi) => {
            let d = rng.gen_range(lo..=hi);
            random_defect_instance(ctx, &cfg.a, d, &mut rng)
        }
        DefectSpec::Mixed => random_mixed_instance(ctx, &cfg.a, 10, &mut rng),
    }
}

struct Recorder {
    measurements: BTreeMap<String, usize>,
    outcomes: BTreeMap<String, CheckOutcome>,
}

impl Recorder {
    fn measure(&mut self, check: Check, what: &str, v: usize) {
        self.measurements.insert(format!("{check}.{what}"), v);
    }

    fn outcome(&mut self, check: Check, holds: bool) {
        let o = if holds { CheckOutcome::Pass } else { CheckOutcome::Fail };
        self.outcomes.insert(check.to_string(), o);
    }
}

/// Runs `checks` on one instance. Shape mismatches are recorded as skipped.
pub fn evaluate(inst: &IdealInstance, checks: &[Check]) -> Result<(BTreeMap<String, usize>, BTreeMap<String, CheckOutcome>)> {
    let mut r = Recorder {
        measurements: BTreeMap::new(),
        outcomes: BTreeMap::new(),
    };
    for &check in checks {
        match run_check(inst, check, &mut r) {
            Ok(()) => {}
            Err(Error::UnsupportedShape(_)) => {
                r.outcomes.insert(check.to_string(), CheckOutcome::Skipped);
            }
            Err(e) => return Err(e),
        }
    }
    Ok((r.measurements, r.outcomes))
}

fn run_check(inst: &IdealInstance, check: Check, r: &mut Recorder) -> Result<()> {
    let q = inst.quotient();
    match check {
        Check::HfCi => {
            let hf = q.hilbert_function();
            let s = inst.socle_degree() as usize;
            let symmetric = (0..=s).all(|d| hf.get(d) == hf.get(s - d));
            r.measure(check, "socle_degree", s);
            r.outcome(check, symmetric && hf == complete_intersection_series(q.degrees()));
        }
        Check::Cor24 => {
            let Some(g) = inst.extras().first() else {
                return Err(Error::UnsupportedShape("needs an extra generator".into()));
            };
            if !inst.is_equigenerated() {
                return Err(Error::UnsupportedShape("needs quadrics".into()));
            }
            let rep = cor24_check(q, g, g.degree())?;
            r.measure(check, "intersection", rep.intersection);
            r.measure(check, "dim_j", rep.dim_j);
            r.outcome(check, rep.holds);
        }
        Check::Thm315 => {
            let rep = thm315_check(inst)?;
            r.measure(check, "dim_i3", rep.measured);
            r.outcome(check, rep.holds);
        }
        Check::Lemma35 => {
            let rep = lemma35_identity(inst)?;
            r.measure(check, "dim_i3", rep.dim_i3);
            r.measure(check, "c_cap_g", rep.c_cap_g);
            r.measure(check, "j_cap_h", rep.j_cap_h);
            r.outcome(check, rep.holds);
        }
        Check::EghD(d) => {
            let rep = egh_d_check(inst, d)?;
            r.measure(check, "dim_i_next", rep.dim_i_next);
            r.measure(check, "dim_l_next", rep.dim_l_next);
            r.outcome(check, rep.holds);
        }
        Check::EghFull => {
            let rep = egh_full_check(inst)?;
            for (d, &v) in rep.hilbert_function().values().iter().enumerate() {
                r.measure(check, &format!("hf{d}"), v);
            }
            r.outcome(check, rep.holds());
        }
        Check::Duality => {
            let mut holds = true;
            for d in 0..=inst.socle_degree() {
                let rep = duality_check(inst, d)?;
                r.measure(check, &format!("colon_hf{}", rep.degree), rep.hf_colon);
                holds &= rep.holds;
            }
            r.outcome(check, holds);
        }
        Check::ColonLinear => {
            let rep = colon_linear_bound_check(inst)?;
            let max = rep.pairs.iter().map(|&(_, d)| d).max().unwrap_or(0).max(rep.triple);
            r.measure(check, "max", max);
            r.outcome(check, rep.holds);
        }
        Check::IntersectionBound => match intersection_bound_check(inst)? {
            IntersectionBoundReport::HypothesisNotMet { .. } => {
                r.outcomes.insert(check.to_string(), CheckOutcome::HypothesisNotMet);
            }
            IntersectionBoundReport::Checked { measured, holds, .. } => {
                r.measure(check, "measured", measured);
                r.outcome(check, holds);
            }
        },
    }
    Ok(())
}

/// Samples and checks trial `index`.
pub fn run_trial(cfg: &SearchConfig, ctx: &Arc<RingContext>, index: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let inst = sample(cfg, ctx, index)?;
    let (measurements, outcomes) = evaluate(&inst, &cfg.checks)?;
    let failed = outcomes.values().any(|&o| o == CheckOutcome::Fail);
    Ok(TrialRecord {
        index,
        seed: cfg.seed,
        instance: IdealFile::from_instance(&inst),
        measurements,
        outcomes,
        failed,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Recomputes trial `index` from scratch.
pub fn replay_trial(cfg: &SearchConfig, index: u64) -> Result<TrialRecord> {
    cfg.validate()?;
    let ctx = Arc::new(RingContext::new(cfg.n, cfg.p)?);
    run_trial(cfg, &ctx, index)
}

const CHUNK: u64 = 256;

/// Runs all trials, writing a header line and one JSON record per trial to
/// `log` in index order.
pub fn run_search(cfg: &SearchConfig, jobs: Option<usize>, mut log: Option<&mut dyn Write>) -> Result<SearchSummary> {
    cfg.validate()?;
    let ctx = Arc::new(RingContext::new(cfg.n, cfg.p)?);
    let start = Instant::now();
    let io = |e: std::io::Error| Error::Input(format!("writing log: {e}"));
    if let Some(w) = log.as_deref_mut() {
        let started_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
        let header = serde_json::json!({
            "kind": "header",
            "generator": LOG_GENERATOR,
            "seed_derivation": LOG_SEED_DERIVATION,
            "config": cfg,
            "started_at": started_at as u64,
        });
        writeln!(w, "{header}").map_err(io)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Input(e.to_string()))?;
    let mut summary = SearchSummary {
        trials: cfg.trials,
        failures: 0,
        failed_indices: Vec::new(),
        ranges: BTreeMap::new(),
        runtime_ms: 0.0,
        first_failure: None,
    };
    let mut lo = 0;
    while lo < cfg.trials {
        let hi = (lo + CHUNK).min(cfg.trials);
        let records: Vec<Result<TrialRecord>> =
            pool.install(|| (lo..hi).into_par_iter().map(|i| run_trial(cfg, &ctx, i)).collect());
        for rec in records {
            let rec = rec?;
            if let Some(w) = log.as_deref_mut() {
                let line = serde_json::to_string(&rec).map_err(|e| Error::Input(e.to_string()))?;
                writeln!(w, "{line}").map_err(io)?;
            }
            for (k, &v) in &rec.measurements {
                let e = summary.ranges.entry(k.clone()).or_insert((v, v));
                e.0 = e.0.min(v);
                e.1 = e.1.max(v);
            }
            if rec.failed {
                summary.failures += 1;
                summary.failed_indices.push(rec.index);
                summary.first_failure.get_or_insert(rec);
            }
        }
        lo = hi;
    }
    summary.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(defect: DefectSpec, checks: &str, trials: u64) -> SearchConfig {
        SearchConfig {
            n: 5,
            p: 101,
            a: DegreeVector::quadrics(5),
            defect,
            trials,
            seed: 9,
            checks: checks.split(',').map(|c| c.parse().unwrap()).collect(),
        }
    }

    #[test]
    fn check_names_round_trip() {
        for c in [
            Check::HfCi,
            Check::Cor24,
            Check::Thm315,
            Check::Lemma35,
            Check::EghD(3),
            Check::EghFull,
            Check::Duality,
            Check::ColonLinear,
            Check::IntersectionBound,
        ] {
            assert_eq!(c.to_string().parse::<Check>().unwrap(), c);
        }
        assert!("egh_d(x)".parse::<Check>().is_err());
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn defect_spec_parsing() {
        assert_eq!("3".parse::<DefectSpec>().unwrap(), DefectSpec::Fixed(3));
        assert_eq!("0-10".parse::<DefectSpec>().unwrap(), DefectSpec::Range(0, 10));
        assert_eq!("mixed".parse::<DefectSpec>().unwrap(), DefectSpec::Mixed);
        assert!("5-2".parse::<DefectSpec>().is_err());
    }

    #[test]
    fn validation() {
        assert!(cfg(DefectSpec::Fixed(11), "hf_ci", 1).validate().is_err());
        assert!(cfg(DefectSpec::Fixed(2), "hf_ci", 0).validate().is_err());
        assert!(cfg(DefectSpec::Fixed(10), "hf_ci", 1).validate().is_ok());
    }

    #[test]
    fn defect_two_search() {
        let c = cfg(DefectSpec::Fixed(2), "thm_3_15,lemma_3_5,egh_d(2)", 40);
        let mut buf = Vec::new();
        let s = run_search(&c, Some(2), Some(&mut buf)).unwrap();
        assert_eq!(s.failures, 0);
        assert!(s.ranges["thm_3_15.dim_i3"].0 >= 30);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 41);
        let rec: TrialRecord = serde_json::from_str(text.lines().nth(5).unwrap()).unwrap();
        assert_eq!(rec.index, 4);
        let again = replay_trial(&c, 4).unwrap();
        assert_eq!(again.measurements, rec.measurements);
        assert_eq!(again.instance, rec.instance);
    }

    #[test]
    fn skipped_checks() {
        let c = cfg(DefectSpec::Fixed(0), "thm_3_15,cor_2_4,hf_ci", 3);
        let rec = replay_trial(&c, 0).unwrap();
        assert_eq!(rec.outcomes["thm_3_15"], CheckOutcome::Skipped);
        assert_eq!(rec.outcomes["cor_2_4"], CheckOutcome::Skipped);
        assert_eq!(rec.outcomes["hf_ci"], CheckOutcome::Pass);
        assert!(!rec.failed);
    }
}
