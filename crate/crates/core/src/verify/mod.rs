//! Checks of the EGH inequalities and the dimension bounds around them.
//!
//! Every checker takes an [`IdealInstance`]: a designated regular sequence
//! `c = (f1..fn)` plus extra generators `g1..g_delta`. All reported numbers
//! are dimensions of graded pieces, so rescaling a generator never changes
//! an outcome.

mod bounds;
mod checkpoints;
mod pencil;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::linalg::{
    complete_intersection_series, hilbert_function, span, ArtinQuotient, GradedBasis,
    InverseSystem, OSequence,
};
use crate::lpp::{lpp_match_full, DegreeVector, LppIdeal, MatchFailure, MatchOutcome};
use crate::ring::RingContext;

pub use bounds::{
    colon_linear_bound_check, cor24_check, intersection_bound_check, lemma35_identity,
    thm315_check, BoundReport, ColonBoundReport, IntersectionBoundReport, Lemma35Report,
};
pub use checkpoints::{
    case1_ideal, case2_ideal, case2_colon_dim, paper_checkpoints, CheckpointResult,
    CheckpointSummary,
};
pub use pencil::{pencil_report, PencilMember, PencilReport};

/// An ideal `c + (g1..g_delta)` with `c` generated by a regular sequence.
#[derive(Debug, Clone)]
pub struct IdealInstance {
    ctx: Arc<RingContext>,
    ci: Vec<Form>,
    extras: Vec<Form>,
    a: DegreeVector,
    quotient: ArtinQuotient,
    dual: InverseSystem,
}

impl IdealInstance {
    /// Validates that `ci` is a regular sequence and that, in each degree,
    /// the generators of that degree are linearly independent.
    pub fn new(ctx: &Arc<RingContext>, ci: Vec<Form>, extras: Vec<Form>) -> Result<Self> {
        if ci.len() != ctx.n() {
            return Err(Error::Input(format!(
                "regular sequence needs {} forms, got {}",
                ctx.n(),
                ci.len()
            )));
        }
        let mut degrees: Vec<u32> = ci.iter().map(Form::degree).collect();
        degrees.sort_unstable();
        DegreeVector::new(degrees)?;
        let quotient = ArtinQuotient::new(ctx, ci)?;
        Self::from_quotient(quotient, extras)
    }

    /// Reuses an already validated quotient `A = R/c`.
    pub fn from_quotient(quotient: ArtinQuotient, extras: Vec<Form>) -> Result<Self> {
        let ctx = quotient.ctx().clone();
        let mut degrees = quotient.degrees().to_vec();
        degrees.sort_unstable();
        let a = DegreeVector::new(degrees)?;
        for g in &extras {
            ctx.check_same(g.ctx())?;
            if g.is_zero() {
                return Err(Error::NonMinimal("zero extra generator".into()));
            }
        }
        let ci = quotient.generators().to_vec();
        let all: Vec<Form> = ci.iter().chain(&extras).cloned().collect();
        let dual = InverseSystem::new(&ctx, &all, quotient.socle_degree() + 1)?;
        let inst = IdealInstance {
            ctx,
            ci,
            extras,
            a,
            quotient,
            dual,
        };
        inst.check_independent()?;
        Ok(inst)
    }

    fn check_independent(&self) -> Result<()> {
        let mut degrees: Vec<u32> = self.all_generators().iter().map(Form::degree).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let gens: Vec<Form> = self
                .all_generators()
                .into_iter()
                .filter(|g| g.degree() == d)
                .collect();
            let dim = span(&self.ctx, &gens, d)?.dim();
            if dim < gens.len() {
                return Err(Error::NonMinimal(format!(
                    "{} generators of degree {d} span only {dim} dimensions",
                    gens.len()
                )));
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn ci(&self) -> &[Form] {
        &self.ci
    }

    pub fn extras(&self) -> &[Form] {
        &self.extras
    }

    pub fn all_generators(&self) -> Vec<Form> {
        self.ci.iter().chain(&self.extras).cloned().collect()
    }

    pub fn degree_vector(&self) -> &DegreeVector {
        &self.a
    }

    pub fn socle_degree(&self) -> u32 {
        self.a.socle_degree()
    }

    /// `A = R/c`.
    pub fn quotient(&self) -> &ArtinQuotient {
        &self.quotient
    }

    /// `I_d`.
    pub fn ideal_piece(&self, d: u32) -> GradedBasis {
        self.dual.ideal_piece(d).expect("I contains R_{s+1}")
    }

    /// `Hf_{R/I}` through degree `max_degree`.
    pub fn hilbert_function_to(&self, max_degree: u32) -> OSequence {
        OSequence((0..=max_degree).map(|d| self.dual.dim(d).unwrap_or(0)).collect())
    }

    /// `Hf_{R/I}` through the socle degree plus one.
    pub fn hilbert_function(&self) -> OSequence {
        self.hilbert_function_to(self.socle_degree() + 1)
    }

    /// Whether every generator has degree `a1` and `a` is constant.
    pub fn is_equigenerated(&self) -> bool {
        let e = self.a.degrees()[0];
        self.a.degrees().iter().all(|&x| x == e) && self.extras.iter().all(|g| g.degree() == e)
    }

    fn require_quadratic(&self, what: &str) -> Result<()> {
        if self.is_equigenerated() && self.a.degrees()[0] == 2 {
            Ok(())
        } else {
            Err(Error::UnsupportedShape(format!("{what} needs a quadratic ideal")))
        }
    }
}

/// `true` iff `forms` have degrees `a` and `R/(forms)` has the complete
/// intersection Hilbert function through degree `s + 1`.
pub fn is_regular_sequence(ctx: &Arc<RingContext>, forms: &[Form], a: &DegreeVector) -> Result<bool> {
    if forms.len() != ctx.n() || a.len() != ctx.n() {
        return Err(Error::Input(format!(
            "need {} forms and degrees, got {} and {}",
            ctx.n(),
            forms.len(),
            a.len()
        )));
    }
    let mut degrees: Vec<u32> = forms.iter().map(Form::degree).collect();
    degrees.sort_unstable();
    if degrees != a.degrees() {
        return Err(Error::Input(format!(
            "form degrees {degrees:?} do not match {:?}",
            a.degrees()
        )));
    }
    let expected = complete_intersection_series(a.degrees());
    let hf = hilbert_function(ctx, forms, a.socle_degree() + 1)?;
    Ok(hf == expected)
}

/// Number of extra generators of an equigenerated ideal, measured as
/// `dim span(generators) - n`.
pub fn defect(inst: &IdealInstance) -> Result<usize> {
    if !inst.is_equigenerated() {
        return Err(Error::UnsupportedShape(
            "defect is defined here for equigenerated ideals".into(),
        ));
    }
    let e = inst.a.degrees()[0];
    let dim = span(&inst.ctx, &inst.all_generators(), e)?.dim();
    let n = inst.ctx.n();
    if dim < n + inst.extras.len() {
        return Err(Error::NonMinimal(format!(
            "extras span only {} dimensions modulo c",
            dim - n
        )));
    }
    Ok(dim - n)
}

/// Outcome of comparing `I` with the lex-plus-powers ideal matching it in degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EghReport {
    pub degree: u32,
    pub dim_i_d: usize,
    pub dim_i_next: usize,
    pub dim_l_d: usize,
    pub dim_l_next: usize,
    pub holds: bool,
    pub lpp: String,
}

/// `L = (x^a) + (greatest monomials of degree d)` with `dim L_d = dim I_d`;
/// holds iff `dim I_{d+1} >= dim L_{d+1}`.
pub fn egh_d_check(inst: &IdealInstance, d: u32) -> Result<EghReport> {
    let dim_i_d = inst.ideal_piece(d).dim();
    let dim_i_next = inst.ideal_piece(d + 1).dim();
    let mut l = LppIdeal::powers(&inst.ctx, inst.a.clone())?;
    let powers_d = l.piece_dim(d);
    if dim_i_d < powers_d {
        return Err(Error::Capacity {
            degree: d,
            requested: dim_i_d,
            available: powers_d,
        });
    }
    l.add_segment(d, dim_i_d - powers_d)?;
    let dim_l_next = l.piece_dim(d + 1);
    Ok(EghReport {
        degree: d,
        dim_i_d,
        dim_i_next,
        dim_l_d: l.piece_dim(d),
        dim_l_next,
        holds: dim_i_next >= dim_l_next,
        lpp: l.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FullCheck {
    Matched {
        hilbert_function: OSequence,
        lpp: String,
        lex_generators: Vec<String>,
    },
    Counterexample {
        hilbert_function: OSequence,
        failure: MatchFailure,
    },
}

impl FullCheck {
    pub fn holds(&self) -> bool {
        matches!(self, FullCheck::Matched { .. })
    }

    pub fn hilbert_function(&self) -> &OSequence {
        match self {
            FullCheck::Matched { hilbert_function, .. } => hilbert_function,
            FullCheck::Counterexample { hilbert_function, .. } => hilbert_function,
        }
    }
}

/// Finds the lex-plus-powers ideal with the same Hilbert function as `I`.
///
/// A match is re-verified degree by degree through `s + 1`; a failed match
/// is returned as a counterexample report, never swallowed.
pub fn egh_full_check(inst: &IdealInstance) -> Result<FullCheck> {
    let top = inst.socle_degree() + 1;
    let target = inst.hilbert_function_to(top);
    match lpp_match_full(&target, &inst.ctx, &inst.a)? {
        MatchOutcome::Matched(l) => {
            let got = l.hilbert_function(top);
            if got != target {
                return Ok(FullCheck::Counterexample {
                    hilbert_function: target.clone(),
                    failure: MatchFailure {
                        degree: (0..=top)
                            .find(|&d| got.get(d as usize) != target.get(d as usize))
                            .unwrap_or(top),
                        target: 0,
                        available: 0,
                        partial_generators: vec![l.to_string()],
                    },
                });
            }
            Ok(FullCheck::Matched {
                hilbert_function: target,
                lpp: l.to_string(),
                lex_generators: l
                    .lex_generators()
                    .iter()
                    .map(|m| m.display(&inst.ctx).to_string())
                    .collect(),
            })
        }
        MatchOutcome::Infeasible(failure) => Ok(FullCheck::Counterexample {
            hilbert_function: target,
            failure,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub degree: u32,
    pub hf_i: usize,
    pub hf_ci: usize,
    /// `Hf_{R/(c:I)}(s - d)`.
    pub hf_colon: usize,
    pub holds: bool,
}

/// `Hf_{R/I}(d) = Hf_{R/c}(d) - Hf_{R/(c:I)}(s - d)`.
pub fn duality_check(inst: &IdealInstance, d: u32) -> Result<DualityReport> {
    let s = inst.socle_degree();
    if d > s {
        return Err(Error::Input(format!("degree {d} above socle degree {s}")));
    }
    let hf_i = inst.ideal_piece(d).codim();
    let hf_ci = inst.quotient.hf(d);
    let hf_colon = inst.quotient.colon_hf(&inst.all_generators(), s - d)?;
    Ok(DualityReport {
        degree: d,
        hf_i,
        hf_ci,
        hf_colon,
        holds: hf_ci >= hf_colon && hf_i == hf_ci - hf_colon,
    })
}
