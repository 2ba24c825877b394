use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;

pub const MAX_VARS: usize = 16;

/// The ambient polynomial ring GF(p)[x1, ..., xn].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingSpec", into = "RingSpec")]
pub struct RingContext {
    n: usize,
    field: PrimeField,
    var_names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RingSpec {
    n: usize,
    p: u64,
    vars: Vec<String>,
}

impl TryFrom<RingSpec> for RingContext {
    type Error = Error;
    fn try_from(s: RingSpec) -> Result<Self> {
        if s.n != s.vars.len() {
            return Err(Error::InvalidRing(format!(
                "n = {} but {} variable names given",
                s.n,
                s.vars.len()
            )));
        }
        RingContext::with_names(s.p, s.vars)
    }
}

impl From<RingContext> for RingSpec {
    fn from(c: RingContext) -> Self {
        RingSpec {
            n: c.n,
            p: c.p() as u64,
            vars: c.var_names,
        }
    }
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingContext {
    /// Ring with default variable names `x1..xn`.
    pub fn new(n: usize, p: u64) -> Result<Self> {
        Self::with_names(p, (1..=n).map(|i| format!("x{i}")).collect())
    }

    pub fn with_names(p: u64, var_names: Vec<String>) -> Result<Self> {
        let n = var_names.len();
        if n == 0 || n > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "number of variables must be in 1..={MAX_VARS}, got {n}"
            )));
        }
        let field = PrimeField::new(p)?;
        for (i, name) in var_names.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(Error::InvalidRing(format!("bad variable name {name:?}")));
            }
            if var_names[..i].contains(name) {
                return Err(Error::InvalidRing(format!("duplicate variable name {name:?}")));
            }
        }
        Ok(RingContext { n, field, var_names })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    pub(crate) fn check_same(&self, other: &RingContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "ring with n={} p={} vs n={} p={}",
                self.n,
                self.p(),
                other.n,
                other.p()
            )))
        }
    }
}
