//! Braid words, the representation ρ_R and closures.
//!
//! Letters act bottom to top: `ρ(w₁·w₂) = ρ(w₂) ∘ ρ(w₁)`. Letter `k > 0` is the
//! positive crossing of strands `k, k+1` (acting by `R`), `-k` the negative one
//! (acting by `R⁻¹`).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::laurent::MultiLaurent;
use crate::rmatrices::EnhancedRMatrix;
use crate::tensorops::{SparseOp, TensorError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BraidError {
    #[error("braid parse error: {0}")]
    Parse(String),
    #[error("letter {letter} out of range for {strands} strands")]
    Letter { letter: i32, strands: usize },
    #[error("closure operator is not a scalar multiple of the identity")]
    NotScalar(Box<SparseOp>),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::Parse("need at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(BraidError::Letter { letter: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn trivial(strands: usize) -> Self {
        BraidWord::new(strands, Vec::new()).expect("valid")
    }

    /// Parse `strands=N; l1 l2 ...` or the JSON form `{"strands":N,"letters":[...]}`.
    pub fn parse(s: &str) -> Result<Self, BraidError> {
        let s = s.trim();
        if s.starts_with('{') {
            let b: BraidWord = serde_json::from_str(s).map_err(|e| BraidError::Parse(e.to_string()))?;
            return BraidWord::new(b.strands, b.letters);
        }
        let (head, rest) = s.split_once(';').unwrap_or((s, ""));
        let n = head
            .trim()
            .strip_prefix("strands")
            .and_then(|x| x.trim_start().strip_prefix('='))
            .ok_or_else(|| BraidError::Parse("expected `strands=N;`".into()))?
            .trim()
            .parse::<usize>()
            .map_err(|e| BraidError::Parse(format!("strand count: {e}")))?;
        let letters = rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<i32>().map_err(|e| BraidError::Parse(format!("letter `{x}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(n, letters)
    }

    pub fn inverse(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// `self` followed by `other` (same strand count).
    pub fn then(&self, other: &BraidWord) -> Self {
        assert_eq!(self.strands, other.strands, "strand counts differ");
        let mut letters = self.letters.clone();
        letters.extend(&other.letters);
        BraidWord { strands: self.strands, letters }
    }

    /// The underlying permutation: `perm[i]` is where the strand starting at
    /// position `i` ends.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let k = l.unsigned_abs() as usize - 1;
            at.swap(k, k + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Random word with letters in `±1..±(strands-1)`.
    pub fn random(rng: &mut impl Rng, strands: usize, len: usize) -> Self {
        let letters = if strands < 2 {
            Vec::new()
        } else {
            (0..len)
                .map(|_| {
                    let k = rng.gen_range(1..strands as i32);
                    if rng.gen_bool(0.5) {
                        k
                    } else {
                        -k
                    }
                })
                .collect()
        };
        BraidWord { strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;
    fn from_str(s: &str) -> Result<Self, BraidError> {
        BraidWord::parse(s)
    }
}

/// Number of components of the closure (cycles of the permutation).
pub fn component_count(beta: &BraidWord) -> usize {
    let perm = beta.permutation();
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for i in 0..perm.len() {
        if !seen[i] {
            count += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
    }
    count
}

/// `γ β γ⁻¹`.
pub fn markov_conjugate(beta: &BraidWord, gamma: &BraidWord) -> BraidWord {
    gamma.then(beta).then(&gamma.inverse())
}

/// `β` on `n+1` strands followed by `σ_n^{±1}`.
pub fn markov_stabilize(beta: &BraidWord, positive: bool) -> BraidWord {
    let n = beta.strands as i32;
    let mut letters = beta.letters.clone();
    letters.push(if positive { n } else { -n });
    BraidWord { strands: beta.strands + 1, letters }
}

/// `ρ_R(β)` on `V^⊗n`.
pub fn rho(e: &EnhancedRMatrix, beta: &BraidWord) -> Result<SparseOp, BraidError> {
    let mut m = SparseOp::identity(&e.ctx, e.dim, beta.strands);
    for &l in &beta.letters {
        let k = l.unsigned_abs() as usize;
        if l == 0 || k >= beta.strands {
            return Err(BraidError::Letter { letter: l, strands: beta.strands });
        }
        m = m.apply_two_site_left(e.r_sign(l > 0), k)?;
    }
    Ok(m)
}

/// `tr₂((id ⊗ h) ∘ F)`, the closure of the right strand of a (2,2)-tangle.
pub fn left_closure(e: &EnhancedRMatrix, f: &SparseOp) -> Result<SparseOp, TensorError> {
    let id = SparseOp::identity(&e.ctx, e.dim, 1);
    id.tensor(&e.h)?.compose(f)?.partial_trace(2)
}

/// `tr₁(F ∘ (h⁻¹ ⊗ id))`, the closure of the left strand.
pub fn right_closure(e: &EnhancedRMatrix, f: &SparseOp) -> Result<SparseOp, TensorError> {
    let id = SparseOp::identity(&e.ctx, e.dim, 1);
    f.compose(&e.h_inv().tensor(&id)?)?.partial_trace(1)
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    /// `F_{L^cut}` on `V`.
    pub operator: SparseOp,
    /// `⟨F_{L^cut}⟩ = tr(F)/dim V`.
    pub scalar: MultiLaurent,
    pub components: usize,
}

/// `F_{L^cut} = tr_{2..n}((id ⊗ h^{⊗(n-1)}) ∘ ρ(β))` computed by a transfer over
/// active strands: a position enters the operator at its first letter and is
/// closed off (h applied, then traced) right after its last one. Positions
/// that no letter touches contribute `tr(h)` each.
pub fn closure_operator(e: &EnhancedRMatrix, beta: &BraidWord) -> Result<SparseOp, BraidError> {
    let n = beta.strands;
    let mut first = vec![usize::MAX; n + 1];
    let mut last = vec![0usize; n + 1];
    for (t, &l) in beta.letters.iter().enumerate() {
        let k = l.unsigned_abs() as usize;
        if l == 0 || k >= n {
            return Err(BraidError::Letter { letter: l, strands: n });
        }
        for p in [k, k + 1] {
            first[p] = first[p].min(t);
            last[p] = t;
        }
    }
    let curl = |positive: bool, right: bool| -> Result<SparseOp, TensorError> {
        let r = e.r_sign(positive);
        let id = SparseOp::identity(&e.ctx, e.dim, 1);
        if right {
            id.tensor(&e.h)?.compose(r)?.partial_trace(2)
        } else {
            e.h.tensor(&id)?.compose(r)?.partial_trace(1)
        }
    };
    let mut m = SparseOp::identity(&e.ctx, e.dim, 1);
    let mut active: Vec<usize> = vec![1];
    for (t, &l) in beta.letters.iter().enumerate() {
        let k = l.unsigned_abs() as usize;
        let only = |p: usize| p >= 2 && first[p] == t && last[p] == t;
        if only(k + 1) {
            // a kink on the right: its closed strand reduces to a one-site map
            if !active.contains(&k) {
                let idx = active.partition_point(|&q| q < k);
                m = m.insert_identity(idx + 1)?;
                active.insert(idx, k);
            }
            let site = active.iter().position(|&q| q == k).unwrap() + 1;
            m = m.apply_one_site_left(&curl(l > 0, true)?, site)?;
        } else if only(k) {
            if !active.contains(&(k + 1)) {
                let idx = active.partition_point(|&q| q < k + 1);
                m = m.insert_identity(idx + 1)?;
                active.insert(idx, k + 1);
            }
            let site = active.iter().position(|&q| q == k + 1).unwrap() + 1;
            m = m.apply_one_site_left(&curl(l > 0, false)?, site)?;
        } else {
            for p in [k, k + 1] {
                if !active.contains(&p) {
                    let idx = active.partition_point(|&q| q < p);
                    m = m.insert_identity(idx + 1)?;
                    active.insert(idx, p);
                }
            }
            let site = active.iter().position(|&q| q == k).unwrap() + 1;
            m = m.apply_two_site_left(e.r_sign(l > 0), site)?;
        }
        for p in [k + 1, k] {
            if p >= 2 && last[p] == t {
                if let Some(pos) = active.iter().position(|&q| q == p) {
                    m = m.apply_one_site_left(&e.h, pos + 1)?.partial_trace(pos + 1)?;
                    active.remove(pos);
                }
            }
        }
    }
    debug_assert_eq!(active, vec![1]);
    let untouched = (2..=n).filter(|&p| first[p] == usize::MAX).count();
    if untouched > 0 {
        let trh = e.h.trace().pow(untouched as i32).expect("non-negative power");
        m = m.scale(&trh);
    }
    Ok(m)
}

/// Closure by the defining formula: `ρ(β)`, then `h` on strands `2..n`, then
/// partial traces from the last strand inward.
pub fn closure_operator_direct(e: &EnhancedRMatrix, beta: &BraidWord) -> Result<SparseOp, BraidError> {
    let mut m = rho(e, beta)?;
    for p in (2..=beta.strands).rev() {
        m = m.apply_one_site_left(&e.h, p)?.partial_trace(p)?;
    }
    Ok(m)
}

/// The mRT closure: operator, scalar and component count. Fails with
/// [`BraidError::NotScalar`] if the operator is not `scalar·id`.
pub fn closure_mrt(e: &EnhancedRMatrix, beta: &BraidWord) -> Result<ClosureResult, BraidError> {
    let operator = closure_operator(e, beta)?;
    let dim = MultiLaurent::from_int(&e.ctx, e.dim as i64);
    let scalar = operator.trace().div_exact(&dim).expect("division by a constant");
    match operator.as_scalar_multiple_of_identity() {
        Some(l) if l == scalar => Ok(ClosureResult { operator, scalar, components: component_count(beta) }),
        _ => Err(BraidError::NotScalar(Box::new(operator))),
    }
}
