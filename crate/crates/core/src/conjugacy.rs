//! Conjugation and weak conjugation of enhanced R-matrices.
//!
//! The weak conjugacy between `Δ_sl3` and `Λ₋₁` uses maps on the weight basis
//! `v₁..v₈` of `V`: `σ` multiplies `v₅..v₈` by a phase, `ν` scales `vᵢ` by
//! `t₁^{-deg₁} t₂^{-deg₂}` and `γ` scales `vᵢ⊗vⱼ` by a phase to the power
//! `deg₂(vᵢ)deg₁(vⱼ)`. The equality `φ R_sl3 φ⁻¹ = R̃_Λ₋₁` holds for `Λ₋₁` at
//! `r` with both phases equal to `(r√-1)⁻¹`.

use std::sync::Arc;

use rand::Rng;

use crate::braidrep::{rho, BraidWord};
use crate::invariants::{self, substitute_lambda_minus1_op, IdentityCheck, Lam1Substitution};
use crate::laurent::{GaussRational, MultiLaurent, Rat, VarContext};
use crate::rmatrices::{self, build_alexander_in, check_axioms, AxiomReport, EnhancedRMatrix, SL3_WEIGHTS};
use crate::tensorops::{SparseOp, TensorError};

/// Result of comparing two operators entry by entry.
#[derive(Clone, Debug)]
pub struct OpComparison {
    pub label: String,
    pub mismatches: usize,
    /// `(row, col, lhs, rhs)` of the first differing entry.
    pub first: Option<(usize, usize, String, String)>,
}

impl OpComparison {
    pub fn pass(&self) -> bool {
        self.mismatches == 0
    }
}

pub fn compare_ops(label: &str, a: &SparseOp, b: &SparseOp) -> Result<OpComparison, TensorError> {
    let diff = a.sub(b)?;
    let first = diff.entries_flat().first().map(|(r, c, _)| (*r, *c, a.get_flat(*r, *c).to_string(), b.get_flat(*r, *c).to_string()));
    Ok(OpComparison { label: label.to_string(), mismatches: diff.nnz(), first })
}

/// `(φ⊗φ) R (φ⁻¹⊗φ⁻¹)` and `φ h φ⁻¹`; the result is checked against the axioms.
pub fn conjugate(e: &EnhancedRMatrix, phi: &SparseOp) -> Result<(EnhancedRMatrix, AxiomReport), TensorError> {
    if phi.arity() != 1 || phi.dim() != e.dim {
        return Err(TensorError::Shape(format!("phi must be {0}x{0}", e.dim)));
    }
    let phi_inv = phi.invert()?;
    let pp = phi.tensor(phi)?;
    let pp_inv = phi_inv.tensor(&phi_inv)?;
    let r = pp.compose(&e.r)?.compose(&pp_inv)?;
    let h = phi.compose(&e.h)?.compose(&phi_inv)?;
    let out = EnhancedRMatrix::new(&format!("{}^phi", e.name), r, h, e.gradings.clone())?;
    let report = check_axioms(&out);
    Ok((out, report))
}

/// Conjugate a diagonal-in-basis map action entrywise: `D M D⁻¹`.
fn diag_conjugate(m: &SparseOp, d: &[MultiLaurent]) -> Result<SparseOp, TensorError> {
    let inv: Vec<MultiLaurent> = d.iter().map(|x| x.inverse().ok_or(TensorError::Singular)).collect::<Result<_, _>>()?;
    let entries = m.entries_flat().into_iter().map(|(r, c, x)| (r, c, d[r].mul_ref(&x).mul_ref(&inv[c]))).collect();
    SparseOp::from_flat(m.ctx(), m.dim(), m.arity(), entries)
}

/// Permutation operator `e_c ↦ e_{perm[c]}` on flat indices.
fn permutation_op(ctx: &Arc<VarContext>, dim: usize, arity: usize, perm: &[usize]) -> Result<SparseOp, TensorError> {
    SparseOp::from_flat(ctx, dim, arity, perm.iter().enumerate().map(|(c, &r)| (r, c, MultiLaurent::one(ctx))).collect())
}

#[derive(Clone, Debug)]
pub struct LemmaRRReport {
    pub h: OpComparison,
    pub r: OpComparison,
}

impl LemmaRRReport {
    pub fn pass(&self) -> bool {
        self.h.pass() && self.r.pass()
    }
}

/// `θ(y_a ⊗ y_b) = x_{2a+b}` (0-based), the identification used for `Λ₁`.
pub const THETA: [usize; 4] = [0, 1, 2, 3];

/// `h_Λ₁ = θ(h_{t₁}⊗h_{t₀})θ⁻¹` and `R̃_Λ₁ = (θ⊗θ)τ(R_{t₁}⊗R_{t₀})τ(θ⁻¹⊗θ⁻¹)`,
/// with `θ` given as the image index of each `y_a⊗y_b` (flat `2a+b`).
pub fn check_lemma_rr_with(theta: &[usize; 4]) -> Result<LemmaRRReport, TensorError> {
    let ctx = rmatrices::lambda1_ctx();
    let a1 = build_alexander_in(&ctx, "t1");
    let a0 = build_alexander_in(&ctx, "t0");
    let lam = invariants::pairs::lambda1();
    // τ on Y^⊗4 swaps slots 2 and 3
    let tau_perm: Vec<usize> = (0..16)
        .map(|f| {
            let (a, b, c, d) = (f >> 3 & 1, f >> 2 & 1, f >> 1 & 1, f & 1);
            a << 3 | c << 2 | b << 1 | d
        })
        .collect();
    let tau = permutation_op(&ctx, 2, 4, &tau_perm)?;
    let inner = tau.compose(&a1.r.tensor(&a0.r)?)?.compose(&tau)?;
    let theta2 = |f: usize| theta[f >> 2] * 4 + theta[f & 3];
    let r = SparseOp::from_flat(&ctx, 4, 2, inner.entries_flat().into_iter().map(|(i, j, x)| (theta2(i), theta2(j), x)).collect())?;
    let hh = a1.h.tensor(&a0.h)?;
    let h = SparseOp::from_flat(&ctx, 4, 1, hh.entries_flat().into_iter().map(|(i, j, x)| (theta[i], theta[j], x)).collect())?;
    Ok(LemmaRRReport { h: compare_ops("h_Lambda1", &lam.h, &h)?, r: compare_ops("R_Lambda1", &lam.r, &r)? })
}

pub fn check_lemma_rr() -> Result<LemmaRRReport, TensorError> {
    check_lemma_rr_with(&THETA)
}

#[derive(Clone, Debug)]
pub struct WeakConjugacyData {
    pub ctx: Arc<VarContext>,
    pub sigma_phase: GaussRational,
    pub gamma_phase: GaussRational,
    pub sigma: SparseOp,
    pub nu: SparseOp,
    pub gamma: SparseOp,
}

fn deg(i: usize) -> (i32, i32) {
    (SL3_WEIGHTS[i][0], SL3_WEIGHTS[i][1])
}

impl WeakConjugacyData {
    pub fn new(sigma_phase: GaussRational, gamma_phase: GaussRational) -> Self {
        let ctx = rmatrices::sl3_ctx();
        let sigma_d: Vec<MultiLaurent> = (0..8)
            .map(|i| if i >= 4 { MultiLaurent::constant(&ctx, sigma_phase.clone()) } else { MultiLaurent::one(&ctx) })
            .collect();
        let nu_d: Vec<MultiLaurent> = (0..8)
            .map(|i| {
                let (a, b) = deg(i);
                MultiLaurent::monomial(&ctx, GaussRational::one(), &[-a, -b])
            })
            .collect();
        let gamma_d: Vec<MultiLaurent> = (0..64)
            .map(|f| MultiLaurent::constant(&ctx, gamma_phase.pow(deg(f / 8).1 * deg(f % 8).0)))
            .collect();
        WeakConjugacyData {
            sigma: SparseOp::diagonal(&ctx, 8, 1, &sigma_d),
            nu: SparseOp::diagonal(&ctx, 8, 1, &nu_d),
            gamma: SparseOp::diagonal(&ctx, 8, 2, &gamma_d),
            ctx,
            sigma_phase,
            gamma_phase,
        }
    }

    /// Phases `(r√-1)⁻¹`, matching `Λ₋₁` at `r`.
    pub fn standard(r: i64) -> Self {
        let z = GaussRational::new(Rat::zero(), Rat::from_int(r)).inv();
        Self::new(z.clone(), z)
    }

    /// Phases `r√-1` as literally written for `σ` and `γ`.
    pub fn literal(r: i64) -> Self {
        let z = GaussRational::new(Rat::zero(), Rat::from_int(r));
        Self::new(z.clone(), z)
    }
}

#[derive(Clone, Debug)]
pub struct PhiN {
    pub n: usize,
    pub phi: SparseOp,
    /// `ν^{⊗(n-1)}`, absent for `n = 1`.
    pub nu_prev: Option<SparseOp>,
    /// `∏_{i<n} (γ)_{i,n}`, absent for `n = 1`.
    pub gamma_n: Option<SparseOp>,
    /// The factorization `φₙ = (φₙ₋₁⊗id)(νₙ₋₁⊗σ)γₙ`.
    pub factorization: Option<OpComparison>,
}

fn tensor_all(ops: &[SparseOp]) -> Result<SparseOp, TensorError> {
    let mut acc = ops[0].clone();
    for o in &ops[1..] {
        acc = acc.tensor(o)?;
    }
    Ok(acc)
}

/// `φₙ = (⊗ᵢ σ∘ν^{n-i}) ∘ ∏_{i<j} (γ)_{i,j}`.
pub fn phi_n_definition(d: &WeakConjugacyData, n: usize) -> Result<SparseOp, TensorError> {
    let mut factors = Vec::with_capacity(n);
    for i in 1..=n {
        let mut f = d.sigma.clone();
        for _ in 0..n - i {
            f = f.compose(&d.nu)?;
        }
        factors.push(f);
    }
    let mut phi = tensor_all(&factors)?;
    for i in 1..n {
        for j in i + 1..=n {
            phi = phi.compose(&SparseOp::embed_two_site(&d.gamma, i, j, n)?)?;
        }
    }
    Ok(phi)
}

pub fn build_phi_n(d: &WeakConjugacyData, n: usize) -> Result<PhiN, TensorError> {
    if n == 0 {
        return Err(TensorError::Index("n must be at least 1".into()));
    }
    let phi = phi_n_definition(d, n)?;
    if n == 1 {
        return Ok(PhiN { n, phi, nu_prev: None, gamma_n: None, factorization: None });
    }
    let nu_prev = tensor_all(&vec![d.nu.clone(); n - 1])?;
    let mut gamma_n = SparseOp::identity(&d.ctx, 8, n);
    for i in 1..n {
        gamma_n = gamma_n.compose(&SparseOp::embed_two_site(&d.gamma, i, n, n)?)?;
    }
    let prev = phi_n_definition(d, n - 1)?;
    let id = SparseOp::identity(&d.ctx, 8, 1);
    let rhs = prev.tensor(&id)?.compose(&nu_prev.tensor(&d.sigma)?)?.compose(&gamma_n)?;
    let factorization = Some(compare_ops(&format!("phi_{n} factorization"), &phi, &rhs)?);
    Ok(PhiN { n, phi, nu_prev: Some(nu_prev), gamma_n: Some(gamma_n), factorization })
}

/// `φₙ (R_sl3)_{k,k+1} φₙ⁻¹` against `[(R̃_Λ₋₁)_{k,k+1}]` after substitution.
pub fn check_lemma_rn(
    d: &WeakConjugacyData,
    sl3: &EnhancedRMatrix,
    lam: &EnhancedRMatrix,
    which: Lam1Substitution,
    n: usize,
    k: usize,
) -> Result<OpComparison, TensorError> {
    if k == 0 || k >= n {
        return Err(TensorError::Index(format!("need 1 <= k < n, got k={k} n={n}")));
    }
    let phi = phi_n_definition(d, n)?.diagonal_entries().ok_or_else(|| TensorError::Shape("phi_n not diagonal".into()))?;
    let lhs = diag_conjugate(&SparseOp::embed_two_site(&sl3.r, k, k + 1, n)?, &phi)?;
    let lam_r = substitute_lambda_minus1_op(&lam.r, which);
    let rhs = SparseOp::embed_two_site(&lam_r, k, k + 1, n)?;
    compare_ops(&format!("R conjugacy n={n} k={k} ({which:?})"), &lhs, &rhs)
}

/// `φ R_sl3 φ⁻¹ = [R̃_Λ₋₁]`.
pub fn check_lemma_r2(
    d: &WeakConjugacyData,
    sl3: &EnhancedRMatrix,
    lam: &EnhancedRMatrix,
    which: Lam1Substitution,
) -> Result<OpComparison, TensorError> {
    check_lemma_rn(d, sl3, lam, which, 2, 1)
}

/// Tally of one BC₂ equation over sampled tangles.
#[derive(Clone, Debug, Default)]
pub struct EqTally {
    pub passed: usize,
    pub total: usize,
}

impl EqTally {
    fn record(&mut self, ok: bool) {
        self.total += 1;
        if ok {
            self.passed += 1;
        }
    }
    pub fn pass(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug)]
pub struct BC2Report {
    pub n: usize,
    pub sn: bool,
    pub n1: bool,
    pub gn: EqTally,
    pub nun: EqTally,
    pub g2: EqTally,
    /// `γₙ` is constant on the weight blocks `(wt of factors 1..n-1, wt of factor n)`
    /// and `νₙ₋₁` on weight spaces of `V^⊗(n-1)`.
    pub structural: bool,
}

impl BC2Report {
    pub fn pass(&self) -> bool {
        self.sn && self.n1 && self.gn.pass() && self.nun.pass() && self.g2.pass() && self.structural
    }
}

/// Sampled `F_T` for `(n,n)`-tangles: `ρ(β)` on `n` strands, and partial
/// closures `tr_{n+1}((id⊗h)ρ(β'))` of braids on `n+1` strands.
pub fn sample_tangles(e: &EnhancedRMatrix, rng: &mut impl Rng, n: usize, count: usize) -> Result<Vec<SparseOp>, TensorError> {
    let mut out = Vec::with_capacity(count);
    for s in 0..count {
        if s % 2 == 0 {
            let len = rng.gen_range(1..=5);
            out.push(rho(e, &BraidWord::random(rng, n, len)).map_err(braid_to_tensor)?);
        } else {
            let len = rng.gen_range(1..=if n >= 3 { 3 } else { 5 });
            let m = rho(e, &BraidWord::random(rng, n + 1, len)).map_err(braid_to_tensor)?;
            out.push(m.apply_one_site_left(&e.h, n + 1)?.partial_trace(n + 1)?);
        }
    }
    Ok(out)
}

fn braid_to_tensor(e: crate::braidrep::BraidError) -> TensorError {
    match e {
        crate::braidrep::BraidError::Tensor(t) => t,
        other => TensorError::Shape(other.to_string()),
    }
}

fn weight_of_flat(mut f: usize, n: usize) -> Vec<(i32, i32)> {
    let mut w = vec![(0, 0); n];
    for slot in (0..n).rev() {
        w[slot] = deg(f % 8);
        f /= 8;
    }
    w
}

fn constant_on_blocks(diag: &[MultiLaurent], key: impl Fn(usize) -> (i32, i32, i32, i32)) -> bool {
    let mut seen: std::collections::HashMap<(i32, i32, i32, i32), &MultiLaurent> = Default::default();
    diag.iter().enumerate().all(|(f, x)| *seen.entry(key(f)).or_insert(x) == x)
}

/// BC₂ for `(sl3, Λ₋₁)`: the `sn` and `n1` identities once, and the `gn`,
/// `nun` and (for `n = 2`) `g2` identities on each sampled tangle operator.
pub fn check_bc2(
    d: &WeakConjugacyData,
    sl3: &EnhancedRMatrix,
    lam: &EnhancedRMatrix,
    which: Lam1Substitution,
    n: usize,
    tangles: &[SparseOp],
) -> Result<BC2Report, TensorError> {
    if n < 2 {
        return Err(TensorError::Index("BC2 needs n >= 2".into()));
    }
    let h = &sl3.h;
    let h_prime = substitute_lambda_minus1_op(&lam.h, which);
    let sigma_inv = d.sigma.invert()?;
    let sn = sigma_inv.compose(&h_prime)?.compose(&d.sigma)? == *h;
    let nu_inv = d.nu.invert()?;
    let n1 = nu_inv.compose(h)?.compose(&d.nu)? == *h;

    let phi = build_phi_n(d, n)?;
    let gamma_n = phi.gamma_n.expect("n >= 2");
    let nu_prev = phi.nu_prev.expect("n >= 2");
    let gamma_diag = gamma_n.diagonal_entries().expect("diagonal");
    let nu_diag = nu_prev.diagonal_entries().expect("diagonal");
    let total = |w: &[(i32, i32)]| w.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let structural = constant_on_blocks(&gamma_diag, |f| {
        let w = weight_of_flat(f, n);
        let head = total(&w[..n - 1]);
        (head.0, head.1, w[n - 1].0, w[n - 1].1)
    }) && constant_on_blocks(&nu_diag, |f| {
        let t = total(&weight_of_flat(f, n - 1));
        (t.0, t.1, 0, 0)
    });

    let (mut gn, mut nun, mut g2) = (EqTally::default(), EqTally::default(), EqTally::default());
    let close_last = |f: &SparseOp| f.apply_one_site_left(h, n).and_then(|m| m.partial_trace(n));
    let h_inv = sl3.h_inv();
    for f in tangles {
        let conj = diag_conjugate(f, &gamma_diag)?;
        let base = close_last(f)?;
        gn.record(close_last(&conj)? == base);
        nun.record(diag_conjugate(&base, &nu_diag)? == base);
        if n == 2 {
            let close_first = |g: &SparseOp| g.apply_one_site_left(&h_inv, 1).and_then(|m| m.partial_trace(1));
            g2.record(close_first(&conj)? == close_first(f)?);
        }
    }
    Ok(BC2Report { n, sn, n1, gn, nun, g2, structural })
}

/// `Δ_sl3` of the closure equals `Λ₋₁` after substitution.
pub fn check_lemma_weak_conjugacy_transfer(beta: &BraidWord) -> Result<IdentityCheck, crate::braidrep::BraidError> {
    invariants::check_theorem2_lambda_minus1(beta, Lam1Substitution::Matched)
}
