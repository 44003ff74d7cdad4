//! Named link polynomials, tensor products of pairs and the identities
//! relating them.

use std::sync::{Arc, OnceLock};

use crate::braidrep::{closure_mrt, BraidError, BraidWord};
use crate::laurent::{exponent, GaussRational, MultiLaurent, VarContext};
use crate::rmatrices::{self, build_alexander_in, check_axioms, EnhancedRMatrix, Grading};
use crate::tensorops::{SparseOp, TensorError};

#[derive(Clone, Debug)]
pub struct InvariantValue {
    pub name: String,
    pub value: MultiLaurent,
    pub braid: BraidWord,
    pub components: usize,
}

pub const INVARIANT_NAMES: [&str; 5] = ["alexander", "v1", "lambda1", "lambda-1", "sl3"];

macro_rules! cached {
    ($f:ident, $e:expr) => {
        pub fn $f() -> &'static EnhancedRMatrix {
            static CELL: OnceLock<EnhancedRMatrix> = OnceLock::new();
            CELL.get_or_init(|| $e)
        }
    };
}

/// Shared, lazily built catalog pairs.
pub mod pairs {
    use super::*;
    cached!(alexander, rmatrices::build_alexander());
    cached!(v1, rmatrices::build_v1(&GaussRational::one()));
    cached!(lambda1, rmatrices::build_lambda1());
    cached!(lambda_minus1, rmatrices::build_lambda_minus1(1).expect("r = 1"));
    cached!(sl3, rmatrices::build_sl3());

    pub fn by_name(name: &str) -> Option<&'static EnhancedRMatrix> {
        match name {
            "alexander" => Some(alexander()),
            "v1" => Some(v1()),
            "lambda1" => Some(lambda1()),
            "lambda-1" | "lambda_minus1" => Some(lambda_minus1()),
            "sl3" | "delta_sl3" => Some(sl3()),
            _ => None,
        }
    }
}

fn evaluate(name: &str, e: &EnhancedRMatrix, beta: &BraidWord) -> Result<InvariantValue, BraidError> {
    let c = closure_mrt(e, beta)?;
    Ok(InvariantValue { name: name.to_string(), value: c.scalar, braid: beta.clone(), components: c.components })
}

pub fn alexander(beta: &BraidWord) -> Result<InvariantValue, BraidError> {
    evaluate("alexander", pairs::alexander(), beta)
}

pub fn v1(beta: &BraidWord) -> Result<InvariantValue, BraidError> {
    evaluate("v1", pairs::v1(), beta)
}

pub fn lambda1(beta: &BraidWord) -> Result<InvariantValue, BraidError> {
    evaluate("lambda1", pairs::lambda1(), beta)
}

pub fn lambda_minus1(beta: &BraidWord) -> Result<InvariantValue, BraidError> {
    evaluate("lambda-1", pairs::lambda_minus1(), beta)
}

pub fn delta_sl3(beta: &BraidWord) -> Result<InvariantValue, BraidError> {
    evaluate("sl3", pairs::sl3(), beta)
}

pub fn compute(name: &str, beta: &BraidWord) -> Option<Result<InvariantValue, BraidError>> {
    pairs::by_name(name).map(|e| evaluate(name, e, beta))
}

/// `R ⊗̂ R' = τ(R ⊗ R')τ` on `(V⊗W)^⊗2` with `h = h₁ ⊗ h₂`; basis `v_i ⊗ w_j`
/// of `V⊗W` is flattened as `i·dim W + j`. Both pairs must share a context.
pub fn tensor_product_pair(e1: &EnhancedRMatrix, e2: &EnhancedRMatrix) -> Result<EnhancedRMatrix, TensorError> {
    let (d1, d2) = (e1.dim, e2.dim);
    let d = d1 * d2;
    let pair = |i: usize, j: usize| i * d2 + j;
    let mut entries = Vec::new();
    for (r1, c1, x) in e1.r.entries_flat() {
        let (i, k) = (r1 / d1, r1 % d1);
        let (i2, k2) = (c1 / d1, c1 % d1);
        for (r2, c2, y) in e2.r.entries_flat() {
            let (j, l) = (r2 / d2, r2 % d2);
            let (j2, l2) = (c2 / d2, c2 % d2);
            let row = pair(i, j) * d + pair(k, l);
            let col = pair(i2, j2) * d + pair(k2, l2);
            entries.push((row, col, x.mul_ref(&y)));
        }
    }
    let r = SparseOp::from_flat(&e1.ctx, d, 2, entries)?;
    let mut hentries = Vec::new();
    for (a, b, x) in e1.h.entries_flat() {
        for (c, f, y) in e2.h.entries_flat() {
            hentries.push((pair(a, c), pair(b, f), x.mul_ref(&y)));
        }
    }
    let h = SparseOp::from_flat(&e1.ctx, d, 1, hentries)?;
    let gradings = e1
        .gradings
        .iter()
        .flat_map(|g1| e2.gradings.iter().map(move |g2| (g1, g2)))
        .map(|(g1, g2)| {
            let mut w = Vec::with_capacity(d);
            for a in &g1.weights {
                for b in &g2.weights {
                    w.push(a.iter().chain(b).copied().collect());
                }
            }
            Grading::new(&format!("{}x{}", g1.label, g2.label), w)
        })
        .collect();
    let out = EnhancedRMatrix::new(&format!("{}(x){}", e1.name, e2.name), r, h, gradings)?;
    if !check_axioms(&out).all_pass() {
        return Err(TensorError::Shape("tensor product pair fails the axioms".into()));
    }
    Ok(out)
}

/// `Alexander(t₁) ⊗̂ Alexander(t₀)` in the Λ₁ context.
pub fn alexander_product_pair() -> EnhancedRMatrix {
    let ctx = rmatrices::lambda1_ctx();
    tensor_product_pair(&build_alexander_in(&ctx, "t1"), &build_alexander_in(&ctx, "t0")).expect("valid pair")
}

/// Move an Alexander value from its own context to variable `display` (a
/// square-root variable) of `target`.
pub fn rename_alexander(p: &MultiLaurent, target: &Arc<VarContext>, display: &str) -> MultiLaurent {
    let idx = target.index_of_display(display).expect("variable in target");
    p.substitute(target, &[MultiLaurent::var(target, idx)]).expect("monomial substitution")
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub label: String,
    pub lhs: MultiLaurent,
    pub rhs: MultiLaurent,
}

impl IdentityCheck {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Λ₁(t₀,t₁) = Δ(t₀)Δ(t₁)`.
pub fn check_theorem2_lambda1(beta: &BraidWord) -> Result<IdentityCheck, BraidError> {
    let lam = lambda1(beta)?.value;
    let ctx = lam.ctx().clone();
    let a = alexander(beta)?.value;
    let rhs = rename_alexander(&a, &ctx, "t0").mul_ref(&rename_alexander(&a, &ctx, "t1"));
    Ok(IdentityCheck { label: format!("Lambda1 = Delta(t0)Delta(t1) on {beta}"), lhs: lam, rhs })
}

/// How `Λ₋₁(t, s)` is moved into the `(t₁, t₂)` context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lam1Substitution {
    /// `t ↦ t₂⁻², s ↦ t₁⁻²`, the assignment under which the matrices agree.
    Matched,
    /// `t ↦ t₁⁻², s ↦ t₂⁻²`, as written in the statement.
    Stated,
}

pub fn substitute_lambda_minus1(p: &MultiLaurent, which: Lam1Substitution) -> MultiLaurent {
    let target = rmatrices::sl3_ctx();
    let (tv, sv) = match which {
        Lam1Substitution::Matched => ("t2^-2", "t1^-2"),
        Lam1Substitution::Stated => ("t1^-2", "t2^-2"),
    };
    let t = MultiLaurent::parse(&target, tv).expect("valid");
    let s = MultiLaurent::parse(&target, sv).expect("valid");
    // the Λ₋₁ context is (t, s)
    p.substitute(&target, &[t, s]).expect("monomial substitution")
}

pub fn substitute_lambda_minus1_op(m: &SparseOp, which: Lam1Substitution) -> SparseOp {
    m.map_entries(|x| substitute_lambda_minus1(x, which))
}

/// `Λ₋₁` after substitution equals `Δ_{sl3}`.
pub fn check_theorem2_lambda_minus1(beta: &BraidWord, which: Lam1Substitution) -> Result<IdentityCheck, BraidError> {
    let lam = lambda_minus1(beta)?.value;
    let rhs = delta_sl3(beta)?.value;
    Ok(IdentityCheck {
        label: format!("Lambda-1 ({which:?} substitution) = Delta_sl3 on {beta}"),
        lhs: substitute_lambda_minus1(&lam, which),
        rhs,
    })
}

#[derive(Clone, Debug)]
pub struct SkeinTriple {
    pub plus: MultiLaurent,
    pub minus: MultiLaurent,
    pub zero: MultiLaurent,
    /// `Δ₊ − Δ₋ − (t^{-1/2} − t^{1/2})Δ₀`.
    pub residual: MultiLaurent,
}

/// Alexander values of `β·σᵢ`, `β·σᵢ⁻¹` and `β`, with the skein residual.
pub fn skein_triple(beta: &BraidWord, i: usize) -> Result<SkeinTriple, BraidError> {
    let n = beta.strands;
    if i == 0 || i >= n {
        return Err(BraidError::Letter { letter: i as i32, strands: n });
    }
    let ext = |s: i32| BraidWord::new(n, [beta.letters.clone(), vec![s * i as i32]].concat());
    let plus = alexander(&ext(1)?)?.value;
    let minus = alexander(&ext(-1)?)?.value;
    let zero = alexander(beta)?.value;
    let z = MultiLaurent::parse(plus.ctx(), "t^(-1/2) - t^(1/2)").expect("valid");
    let residual = plus.sub_ref(&minus).sub_ref(&z.mul_ref(&zero));
    Ok(SkeinTriple { plus, minus, zero, residual })
}

/// First term of `p` outside `ℤ[x₁^{±step₁}, …]` (exponents counted in internal
/// variables), printed as `coeff*monomial`.
pub fn offending_term(p: &MultiLaurent, step: &[i32]) -> Option<String> {
    let ctx = p.ctx();
    for (k, c) in p.raw_terms() {
        let bad_exp = (0..ctx.len()).any(|i| exponent(*k, i).rem_euclid(step[i]) != 0);
        let bad_coeff = !c.is_real() || !c.is_gauss_integer();
        if bad_exp || bad_coeff {
            let single = MultiLaurent::monomial(ctx, c.clone(), &(0..ctx.len()).map(|i| exponent(*k, i)).collect::<Vec<_>>());
            return Some(single.to_string());
        }
    }
    None
}

/// Integer-power integrality in the display variables (`ℤ[t^{±1}, …]`).
pub fn integrality(p: &MultiLaurent) -> Result<(), String> {
    let step: Vec<i32> = p.ctx().vars().iter().map(|v| v.root as i32).collect();
    match offending_term(p, &step) {
        None => Ok(()),
        Some(t) => Err(t),
    }
}

/// `p = unit · q` with `unit` a monomial making `q` use only integer powers of
/// the display variables, when all terms agree on parity.
pub fn clear_unit_monomial(p: &MultiLaurent) -> Option<(MultiLaurent, MultiLaurent)> {
    let ctx = p.ctx();
    let (k0, _) = p.raw_terms().first()?;
    let shift: Vec<i32> = ctx.vars().iter().enumerate().map(|(i, v)| exponent(*k0, i).rem_euclid(v.root as i32)).collect();
    let unit = MultiLaurent::monomial(ctx, GaussRational::one(), &shift);
    let q = p.div_exact(&unit)?;
    integrality_exponents_only(&q).then_some((unit, q))
}

fn integrality_exponents_only(p: &MultiLaurent) -> bool {
    let ctx = p.ctx();
    p.raw_terms().iter().all(|(k, _)| ctx.vars().iter().enumerate().all(|(i, v)| exponent(*k, i).rem_euclid(v.root as i32) == 0))
}

/// Concatenation `β₁ # β₂` of two knot braids sharing strand 1: `β₂` is
/// shifted to strands `n₁ .. n₁+n₂-1`.
pub fn connected_sum(b1: &BraidWord, b2: &BraidWord) -> BraidWord {
    let shift = b1.strands as i32 - 1;
    let mut letters = b1.letters.clone();
    letters.extend(b2.letters.iter().map(|l| l.signum() * (l.abs() + shift)));
    BraidWord { strands: b1.strands + b2.strands - 1, letters }
}
