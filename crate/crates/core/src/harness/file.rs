use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::form::Form;
use crate::ring::RingContext;
use crate::verify::IdealInstance;

/// On-disk form of an ideal: `{"p", "n", "vars", "regular_sequence", "extras"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    pub p: u64,
    pub n: usize,
    pub vars: Vec<String>,
    pub regular_sequence: Vec<String>,
    #[serde(default)]
    pub extras: Vec<String>,
}

impl IdealFile {
    pub fn from_instance(inst: &IdealInstance) -> Self {
        let ctx = inst.ctx();
        IdealFile {
            p: ctx.p() as u64,
            n: ctx.n(),
            vars: ctx.var_names().to_vec(),
            regular_sequence: inst.ci().iter().map(Form::to_string).collect(),
            extras: inst.extras().iter().map(Form::to_string).collect(),
        }
    }

    pub fn ring(&self) -> Result<Arc<RingContext>> {
        let ctx: RingContext = serde_json::from_value(serde_json::json!({
            "n": self.n,
            "p": self.p,
            "vars": self.vars,
        }))
        .map_err(|e| crate::error::Error::InvalidRing(e.to_string()))?;
        Ok(Arc::new(ctx))
    }

    /// Parses every form and validates the instance.
    pub fn to_instance(&self) -> Result<IdealInstance> {
        let ctx = self.ring()?;
        let parse = |v: &[String]| -> Result<Vec<Form>> { v.iter().map(|s| Form::parse(&ctx, s)).collect() };
        IdealInstance::new(&ctx, parse(&self.regular_sequence)?, parse(&self.extras)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Input(e.to_string()))
    }
}
