use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::context::{Var, VarContext};
use super::gauss::GaussRational;
use super::poly::{rat_from_str, rat_pair_str, MultiLaurent};
use super::LaurentError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<i32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextJson {
    pub variables: Vec<Var>,
}

/// Self-describing polynomial: context header plus terms in internal variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub context: ContextJson,
    pub terms: Vec<TermJson>,
}

impl ContextJson {
    pub fn from_ctx(ctx: &VarContext) -> Self {
        ContextJson { variables: ctx.vars().to_vec() }
    }

    pub fn to_ctx(&self) -> Result<Arc<VarContext>, LaurentError> {
        VarContext::new(self.variables.clone())
    }
}

impl MultiLaurent {
    pub fn to_terms_json(&self) -> Vec<TermJson> {
        self.terms()
            .into_iter()
            .map(|(e, c)| {
                let (re, im) = rat_pair_str(&c);
                TermJson { exponents: e, re, im }
            })
            .collect()
    }

    pub fn from_terms_json(ctx: &Arc<VarContext>, terms: &[TermJson]) -> Result<Self, LaurentError> {
        let mut v = Vec::with_capacity(terms.len());
        for t in terms {
            v.push((t.exponents.clone(), GaussRational::new(rat_from_str(&t.re)?, rat_from_str(&t.im)?)));
        }
        MultiLaurent::from_terms(ctx, v)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson { context: ContextJson::from_ctx(self.ctx()), terms: self.to_terms_json() }
    }

    pub fn from_json(p: &PolyJson) -> Result<Self, LaurentError> {
        let ctx = p.context.to_ctx()?;
        MultiLaurent::from_terms_json(&ctx, &p.terms)
    }
}
