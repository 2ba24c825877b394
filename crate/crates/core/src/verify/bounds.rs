use serde::{Deserialize, Serialize};

use super::IdealInstance;
use crate::error::{Error, Result};
use crate::form::Form;
use crate::linalg::{span, subspace_dims, ArtinQuotient, GradedBasis};

/// A measured dimension compared with a fixed bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub measured: usize,
    pub bound: usize,
    pub holds: bool,
}

/// `g·R_1` as a subspace of `R_{deg g + 1}`.
fn linear_multiples(g: &Form) -> Result<GradedBasis> {
    let ctx = g.ctx();
    let xs: Vec<Form> = (0..ctx.n()).map(|i| g.mul(&Form::var(ctx, i))).collect::<Result<_>>()?;
    span(ctx, &xs, g.degree() + 1)
}

fn require_quadrics(q: &ArtinQuotient, what: &str) -> Result<()> {
    if q.degrees().iter().all(|&a| a == 2) {
        Ok(())
    } else {
        Err(Error::UnsupportedShape(format!("{what} needs a regular sequence of quadrics")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cor24Report {
    /// `dim(c_{d+1} ∩ g·R_1)`.
    pub intersection: usize,
    pub bound: usize,
    /// `dim J_{d+1}` for `J = c + (g)`.
    pub dim_j: usize,
    /// `dim c_{d+1} + n - d`.
    pub dim_j_bound: usize,
    pub holds: bool,
}

/// `dim(c_{d+1} ∩ g·R_1) <= d` for a form `g` of degree `d` outside `c`.
pub fn cor24_check(q: &ArtinQuotient, g: &Form, d: u32) -> Result<Cor24Report> {
    require_quadrics(q, "the intersection bound")?;
    if g.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: g.degree(),
        });
    }
    if q.contains(g)? {
        return Err(Error::Degenerate("g lies in the complete intersection".into()));
    }
    let c = q.ci_piece(d + 1);
    let gr = linear_multiples(g)?;
    let dims = subspace_dims(&c, &gr)?;
    let dim_j_bound = c.dim() + q.ctx().n() - d as usize;
    Ok(Cor24Report {
        intersection: dims.dim_intersection,
        bound: d as usize,
        dim_j: dims.dim_sum,
        dim_j_bound,
        holds: dims.dim_intersection <= d as usize && dims.dim_sum >= dim_j_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IntersectionBoundReport {
    /// No linear `L` kills `g1..g_{delta-1}` in `A` while `L·g_delta` survives.
    HypothesisNotMet { annihilator_dim: usize },
    Checked {
        annihilator_dim: usize,
        /// `dim((c + (g1..g_{delta-1}))_3 ∩ g_delta·R_1)`.
        measured: usize,
        bound: usize,
        holds: bool,
    },
}

impl IntersectionBoundReport {
    /// A vacuous report counts as holding.
    pub fn holds(&self) -> bool {
        match self {
            IntersectionBoundReport::HypothesisNotMet { .. } => true,
            IntersectionBoundReport::Checked { holds, .. } => *holds,
        }
    }
}

/// Conditional bound `dim((c + (g1..g_{delta-1}))_3 ∩ g_delta·R_1) <= 3`.
pub fn intersection_bound_check(inst: &IdealInstance) -> Result<IntersectionBoundReport> {
    inst.require_quadratic("the intersection bound")?;
    let extras = inst.extras();
    if extras.len() < 2 {
        return Err(Error::UnsupportedShape("needs at least two extra generators".into()));
    }
    let (head, last) = extras.split_at(extras.len() - 1);
    let last = &last[0];
    let q = inst.quotient();
    let ann = q.colon(head, 1)?;
    let mut met = false;
    for l in ann.forms() {
        if !q.contains(&l.mul(last)?)? {
            met = true;
            break;
        }
    }
    if !met {
        return Ok(IntersectionBoundReport::HypothesisNotMet {
            annihilator_dim: ann.dim(),
        });
    }
    let partial = crate::linalg::extend_piece(&q.ci_piece(3), head);
    let measured = subspace_dims(&partial, &linear_multiples(last)?)?.dim_intersection;
    Ok(IntersectionBoundReport::Checked {
        annihilator_dim: ann.dim(),
        measured,
        bound: 3,
        holds: measured <= 3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma35Report {
    pub dim_i3: usize,
    /// `dim(c_3 ∩ g·R_1)`.
    pub c_cap_g: usize,
    /// `dim(J_3 ∩ h·R_1)`, `J = c + (g)`.
    pub j_cap_h: usize,
    /// `n^2 + 2n - c_cap_g - j_cap_h`.
    pub predicted: usize,
    pub holds: bool,
}

/// `dim I_3 = n^2 + 2n - dim(c_3 ∩ gR_1) - dim(J_3 ∩ hR_1)` for `I = c + (g, h)`.
pub fn lemma35_identity(inst: &IdealInstance) -> Result<Lemma35Report> {
    inst.require_quadratic("the four-term identity")?;
    let [g, h] = inst.extras() else {
        return Err(Error::UnsupportedShape("needs exactly two extra generators".into()));
    };
    let n = inst.ctx().n();
    let c3 = inst.quotient().ci_piece(3);
    let c_cap_g = subspace_dims(&c3, &linear_multiples(g)?)?.dim_intersection;
    let j3 = crate::linalg::extend_piece(&c3, std::slice::from_ref(g));
    let j_cap_h = subspace_dims(&j3, &linear_multiples(h)?)?.dim_intersection;
    let dim_i3 = inst.ideal_piece(3).dim();
    let predicted = (n * n + 2 * n).saturating_sub(c_cap_g + j_cap_h);
    Ok(Lemma35Report {
        dim_i3,
        c_cap_g,
        j_cap_h,
        predicted,
        holds: dim_i3 == predicted,
    })
}

/// `dim I_3 >= n^2 + 2n - 5` for a defect-2 quadratic ideal.
pub fn thm315_check(inst: &IdealInstance) -> Result<BoundReport> {
    inst.require_quadratic("the degree-3 bound")?;
    if inst.extras().len() != 2 {
        return Err(Error::UnsupportedShape("needs exactly two extra generators".into()));
    }
    let n = inst.ctx().n();
    let measured = inst.ideal_piece(3).dim();
    let bound = n * n + 2 * n - 5;
    Ok(BoundReport {
        measured,
        bound,
        holds: measured >= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColonBoundReport {
    /// `dim (c : (g_i, g_j))_1` for each pair `i < j`.
    pub pairs: Vec<([usize; 2], usize)>,
    /// `dim (c : (g1, g2, g3))_1`.
    pub triple: usize,
    pub holds: bool,
}

/// Every pair and the triple of extras has at most a one-dimensional
/// linear colon into `c`.
pub fn colon_linear_bound_check(inst: &IdealInstance) -> Result<ColonBoundReport> {
    inst.require_quadratic("the linear colon bound")?;
    if inst.ctx().n() != 5 || inst.extras().len() != 3 {
        return Err(Error::UnsupportedShape("needs n = 5 and three extra generators".into()));
    }
    let q = inst.quotient();
    let g = inst.extras();
    let mut pairs = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let dim = q.colon(&[g[i].clone(), g[j].clone()], 1)?.dim();
            pairs.push(([i, j], dim));
        }
    }
    let triple = q.colon(g, 1)?.dim();
    let holds = triple <= 1 && pairs.iter().all(|&(_, d)| d <= 1);
    Ok(ColonBoundReport { pairs, triple, holds })
}
