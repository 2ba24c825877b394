use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::linalg::{extend_piece, ArtinQuotient};

/// One member `g + c·h` of the pencil, or `h` itself when `c` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilMember {
    pub c: Option<u32>,
    /// `dim g'·A_1`.
    pub multiple_dim: usize,
    /// `dim Ann_{A_1}(g')`.
    pub annihilator_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilReport {
    pub members: Vec<PencilMember>,
    /// Some member has a nonzero linear annihilator.
    pub witness: bool,
    pub note: String,
}

/// Walks all `p + 1` members of the pencil spanned by `g` and `h` in `A`.
pub fn pencil_report(q: &ArtinQuotient, g: &Form, h: &Form) -> Result<PencilReport> {
    let ctx = q.ctx();
    ctx.check_same(g.ctx())?;
    ctx.check_same(h.ctx())?;
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch {
            expected: g.degree(),
            found: h.degree(),
        });
    }
    let base = q.ci_piece(g.degree());
    if extend_piece(&base, &[g.clone(), h.clone()]).dim() != base.dim() + 2 {
        return Err(Error::Degenerate("g and h are dependent modulo c".into()));
    }
    let field = ctx.field();
    let mut members = Vec::with_capacity(field.modulus() as usize + 1);
    let mut push = |c: Option<u32>, f: &Form| -> Result<()> {
        let annihilator_dim = q.annihilator_dim(f, 1)?;
        members.push(PencilMember {
            c,
            multiple_dim: q.hf(1) - annihilator_dim,
            annihilator_dim,
        });
        Ok(())
    };
    for c in 0..field.modulus() {
        push(Some(c), &g.add(&h.scale(field.from_u64(c as u64)))?)?;
    }
    push(None, h)?;
    let witness = members.iter().any(|m| m.annihilator_dim > 0);
    let note = if witness {
        let k = members.iter().filter(|m| m.annihilator_dim > 0).count();
        format!("{k} member(s) with a nonzero linear annihilator")
    } else {
        "no GF(p)-rational witness".to_string()
    };
    Ok(PencilReport { members, witness, note })
}
