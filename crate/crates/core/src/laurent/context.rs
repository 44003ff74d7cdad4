use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LaurentError;

/// Maximum number of internal variables in one context (monomials are packed
/// into a `u64`, 16 bits per variable).
pub const MAX_VARS: usize = 4;

/// One internal variable. When `root == 2` the variable is a square root:
/// it prints as `display^(1/2)`, so `u²` prints as `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub display: String,
    pub root: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarContext {
    vars: Vec<Var>,
}

impl VarContext {
    pub fn new(vars: Vec<Var>) -> Result<Arc<VarContext>, LaurentError> {
        if vars.len() > MAX_VARS {
            return Err(LaurentError::Context(format!("at most {MAX_VARS} variables supported")));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.root != 1 && v.root != 2 {
                return Err(LaurentError::Context(format!("unsupported root {} for {}", v.root, v.name)));
            }
            if v.name == "i" || v.display == "i" {
                return Err(LaurentError::Context("`i` is reserved for the imaginary unit".into()));
            }
            for w in &vars[..i] {
                if w.name == v.name || w.display == v.display || w.name == v.display || w.display == v.name {
                    return Err(LaurentError::Context(format!("duplicate variable name {}", v.name)));
                }
            }
        }
        Ok(Arc::new(VarContext { vars }))
    }

    /// Context of plain Laurent variables.
    pub fn plain(names: &[&str]) -> Arc<VarContext> {
        let vars = names
            .iter()
            .map(|n| Var { name: n.to_string(), display: n.to_string(), root: 1 })
            .collect();
        VarContext::new(vars).expect("valid context")
    }

    /// Context whose variables are square roots: `(internal, display)` pairs.
    pub fn sqrt(pairs: &[(&str, &str)]) -> Arc<VarContext> {
        let vars = pairs
            .iter()
            .map(|(n, d)| Var { name: n.to_string(), display: d.to_string(), root: 2 })
            .collect();
        VarContext::new(vars).expect("valid context")
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn index_of_display(&self, display: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.display == display)
    }
}

impl fmt::Display for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                if v.root == 1 {
                    v.name.clone()
                } else {
                    format!("{}={}^(1/{})", v.name, v.display, v.root)
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub(crate) fn same_ctx(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
