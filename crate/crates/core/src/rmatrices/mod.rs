//! The catalog of enhanced R-matrices, axiom checks and enhancement solving.

pub mod data;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::laurent::{GaussRational, MultiLaurent, Rat, VarContext};
use crate::linalg::{LinearSystem, Solution};
use crate::tensorops::{OpJson, SparseOp, TensorError};

/// Integer weight vectors on the basis of `V` (0-based basis index).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub label: String,
    pub weights: Vec<Vec<i32>>,
}

impl Grading {
    pub fn new(label: &str, weights: Vec<Vec<i32>>) -> Self {
        assert!(weights.windows(2).all(|w| w[0].len() == w[1].len()), "weight vectors must have equal length");
        Grading { label: label.to_string(), weights }
    }

    /// Total weight of a flat multi-index on `V^⊗n`.
    pub fn weight_of(&self, mut flat: usize, arity: usize) -> Vec<i32> {
        let d = self.weights.len();
        let mut w = vec![0; self.weights.first().map_or(0, Vec::len)];
        for _ in 0..arity {
            for (a, b) in w.iter_mut().zip(&self.weights[flat % d]) {
                *a += b;
            }
            flat /= d;
        }
        w
    }
}

#[derive(Clone, Debug)]
pub struct EnhancedRMatrix {
    pub name: String,
    pub ctx: Arc<VarContext>,
    pub dim: usize,
    pub r: SparseOp,
    pub r_inv: SparseOp,
    pub h: SparseOp,
    pub gradings: Vec<Grading>,
    /// False when `h` is attached only for diagnostics and is not a valid
    /// enhancement of `r`.
    pub enhanced: bool,
    pub note: Option<String>,
}

impl EnhancedRMatrix {
    /// Assemble a pair, computing `R⁻¹` exactly.
    pub fn new(name: &str, r: SparseOp, h: SparseOp, gradings: Vec<Grading>) -> Result<Self, TensorError> {
        if r.arity() != 2 || h.arity() != 1 || r.dim() != h.dim() {
            return Err(TensorError::Shape("need R on V⊗V and h on V".into()));
        }
        let r_inv = r.invert()?;
        Ok(EnhancedRMatrix {
            name: name.to_string(),
            ctx: r.ctx().clone(),
            dim: r.dim(),
            r,
            r_inv,
            h,
            gradings,
            enhanced: true,
            note: None,
        })
    }

    pub fn h_inv(&self) -> SparseOp {
        self.h.invert().expect("h is invertible")
    }

    /// `R^{±1}` for a crossing sign.
    pub fn r_sign(&self, positive: bool) -> &SparseOp {
        if positive {
            &self.r
        } else {
            &self.r_inv
        }
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { name: self.name.clone(), r: self.r.to_json(), h: self.h.to_json() }
    }

    pub fn from_json(j: &MatrixJson) -> Result<Self, TensorError> {
        let r = SparseOp::from_json(&j.r, None)?;
        let h = SparseOp::from_json(&j.h, Some(r.ctx()))?;
        Self::new(&j.name, r, h, Vec::new())
    }
}

/// File form of an enhanced pair, as read by `verify axioms --matrix-file`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub name: String,
    pub r: OpJson,
    pub h: OpJson,
}

fn poly(ctx: &Arc<VarContext>, s: &str) -> MultiLaurent {
    MultiLaurent::parse(ctx, s).expect("valid built-in expression")
}

fn signs(ctx: &Arc<VarContext>, scale: &MultiLaurent, s: &[i64]) -> SparseOp {
    let d: Vec<MultiLaurent> = s.iter().map(|&x| scale.mul_ref(&MultiLaurent::from_int(ctx, x))).collect();
    SparseOp::diagonal(ctx, s.len(), 1, &d)
}

pub fn alexander_ctx() -> Arc<VarContext> {
    VarContext::sqrt(&[("u", "t")])
}

/// `R_t = t^{-1/2}[[1,0,0,0],[0,0,1,0],[0,t,1-t,0],[0,0,0,-t]]`,
/// `h_t = t^{1/2} diag(1,-1)`.
pub fn build_alexander_in(ctx: &Arc<VarContext>, var: &str) -> EnhancedRMatrix {
    let idx = ctx.index_of_display(var).expect("variable in context");
    assert_eq!(ctx.vars()[idx].root, 2, "Alexander variable must be a square-root variable");
    let u = MultiLaurent::var(ctx, idx);
    let t = u.mul_ref(&u);
    let one = MultiLaurent::one(ctx);
    let ui = u.inverse().expect("unit");
    let r = SparseOp::from_flat(
        ctx,
        2,
        2,
        vec![
            (0, 0, ui.clone()),
            (1, 2, ui.clone()),
            (2, 1, ui.mul_ref(&t)),
            (2, 2, ui.mul_ref(&one.sub_ref(&t))),
            (3, 3, ui.mul_ref(&t).neg_ref()),
        ],
    )
    .expect("valid entries");
    let h = signs(ctx, &u, &[1, -1]);
    let g = Grading::new("deg", vec![vec![0], vec![1]]);
    EnhancedRMatrix::new("alexander", r, h, vec![g]).expect("invertible")
}

pub fn build_alexander() -> EnhancedRMatrix {
    build_alexander_in(&alexander_ctx(), "t")
}

pub fn v1_ctx() -> Arc<VarContext> {
    VarContext::plain(&["t0", "t1"])
}

fn v1_gradings() -> Vec<Grading> {
    vec![
        Grading::new("deg_e2", vec![vec![0], vec![1], vec![0], vec![1]]),
        Grading::new("deg_e3", vec![vec![0], vec![0], vec![1], vec![1]]),
    ]
}

/// The V₁ R-matrix `R_r`; the transcription is read in full form, or in the
/// reordered block form when `blocks` is set.
pub fn v1_matrix(r: &GaussRational, blocks: bool) -> SparseOp {
    let ctx = v1_ctx();
    let rv = MultiLaurent::constant(&ctx, r.clone());
    let bind = [("r", rv)];
    if blocks {
        data::parse_blocks(data::V1_BLOCKS, &ctx, 4, &bind).expect("V1 block data")
    } else {
        data::parse_sparse(data::V1_FULL, &ctx, 4, &bind).expect("V1 data")
    }
}

/// V₁ with `h = diag(-1,1,1,-1)`; the pair is flagged as not enhanced unless
/// `r = ±1`.
pub fn build_v1(r: &GaussRational) -> EnhancedRMatrix {
    let ctx = v1_ctx();
    let h = signs(&ctx, &MultiLaurent::one(&ctx), &[-1, 1, 1, -1]);
    let mut e = EnhancedRMatrix::new(&format!("v1(r={r})"), v1_matrix(r, false), h, v1_gradings()).expect("invertible");
    let unit = r.is_one() || r.neg().is_one();
    if !unit {
        e.enhanced = false;
        e.note = Some("R-matrix only, no valid enhancement".into());
    }
    e
}

pub fn lambda1_ctx() -> Arc<VarContext> {
    VarContext::sqrt(&[("u0", "t0"), ("u1", "t1")])
}

/// The raw `R_{Λ₁}` with parameter `r`.
pub fn lambda1_matrix(r: &GaussRational) -> SparseOp {
    let ctx = lambda1_ctx();
    let bind = [("r", MultiLaurent::constant(&ctx, r.clone()))];
    data::parse_sparse(data::LAMBDA1_FULL, &ctx, 4, &bind).expect("Lambda1 data")
}

pub fn build_lambda1_r(r: &GaussRational) -> EnhancedRMatrix {
    let ctx = lambda1_ctx();
    let u = poly(&ctx, "t0^(1/2)*t1^(1/2)");
    let rt = lambda1_matrix(r).scale(&u.inverse().expect("unit"));
    let h = signs(&ctx, &u, &[1, -1, -1, 1]);
    let g = vec![
        Grading::new("deg_1", vec![vec![0], vec![0], vec![1], vec![1]]),
        Grading::new("deg_2", vec![vec![0], vec![1], vec![0], vec![1]]),
    ];
    let name = if r.is_one() { "lambda1".to_string() } else { format!("lambda1(r={r})") };
    EnhancedRMatrix::new(&name, rt, h, g).expect("invertible")
}

/// `R̃_{Λ₁} = R_{Λ₁}/(t₀t₁)^{1/2}` at `r = 1`, `h = (t₀t₁)^{1/2} diag(1,-1,-1,1)`.
pub fn build_lambda1() -> EnhancedRMatrix {
    build_lambda1_r(&GaussRational::one())
}

/// Weights of `v₁..v₈` in the basis `(α₁, α₂)`.
pub const SL3_WEIGHTS: [[i32; 2]; 8] = [[0, 0], [1, 0], [0, 1], [1, 1], [1, 1], [2, 1], [1, 2], [2, 2]];

pub fn weight_grading() -> Grading {
    Grading::new("wt", SL3_WEIGHTS.iter().map(|w| w.to_vec()).collect())
}

pub fn lambda_minus1_ctx() -> Arc<VarContext> {
    VarContext::plain(&["t", "s"])
}

pub fn lambda_minus1_matrix(r: i64) -> SparseOp {
    let ctx = lambda_minus1_ctx();
    let bind = [("r", MultiLaurent::from_int(&ctx, r))];
    data::parse_blocks(data::LAMBDA_MINUS1_BLOCKS, &ctx, 8, &bind).expect("Lambda-1 data")
}

/// `R̃_{Λ₋₁} = R_{Λ₋₁}/(st)`, `h = st·diag(1,-1,-1,1,1,-1,-1,1)`, `r = ±1`.
pub fn build_lambda_minus1(r: i64) -> Result<EnhancedRMatrix, TensorError> {
    if r != 1 && r != -1 {
        return Err(TensorError::Shape(format!("Lambda_-1 needs r = 1 or r = -1, got {r}")));
    }
    let ctx = lambda_minus1_ctx();
    let st = poly(&ctx, "s*t");
    let rt = lambda_minus1_matrix(r).scale(&st.inverse().expect("unit"));
    let h = signs(&ctx, &st, &[1, -1, -1, 1, 1, -1, -1, 1]);
    let name = if r == 1 { "lambda-1".to_string() } else { "lambda-1(r=-1)".to_string() };
    EnhancedRMatrix::new(&name, rt, h, vec![weight_grading()])
}

pub fn sl3_ctx() -> Arc<VarContext> {
    VarContext::plain(&["t1", "t2"])
}

/// Entries of the printed sl₃ matrix that are replaced: row label, column
/// label, printed value, value used. With the printed values the pair fails
/// (1b), (1c) and the Yang–Baxter equation; with these values it satisfies all
/// four axioms.
pub const SL3_CORRECTIONS: [((usize, usize), (usize, usize), &str, &str); 11] = [
    ((6, 5), (6, 5), "-t1^-2*(1+t1^-2)", "-t1^-2*(t1^2+1)"),
    ((8, 2), (5, 6), "z*t1^-2*(t2^-1-t2)", "-z*t1^-1*t2^-1*(t2^2+1)"),
    ((8, 2), (6, 4), "z*(t1^2*t2+t2^-1)", "z*t1^-2*t2^-1*(t1^2*t2^2+1)"),
    ((8, 2), (6, 5), "-(t1*t2+t1^-1*t2^-1)", "-t1^-2*t2^-1*(t1^2*t2^2+1)"),
    ((8, 3), (4, 7), "z*t2^-2*(t1^-1-t1)", "-z*t1^-1*t2^-1*(t1^2+1)"),
    ((8, 3), (7, 4), "-(t1*t2+t1^-1*t2^-1)", "-t1^-1*t2^-2*(t1^2*t2^2+1)"),
    ((8, 3), (7, 5), "z*(t1*t2^2+t1^-1)", "z*t1^-1*t2^-2*(t1^2*t2^2+1)"),
    ((8, 4), (7, 6), "-z*t2^-2*(t1+t1^-1)", "-z*t1^-1*t2^-2*(t2^2+1)"),
    ((8, 4), (8, 4), "-z*t2^-1*(1+t1^-2)", "-t1^-2*t2^-2*(t1^2-1)"),
    ((8, 5), (6, 7), "-z*t1^-2*(t2+t2^-1)", "-z*t1^-2*t2^-1*(t1^2+1)"),
    ((8, 5), (8, 5), "-z*t1^-1*(1+t2^-2)", "-t1^-2*t2^-2*(t2^2-1)"),
];

/// The sl₃ matrix exactly as printed (no corrections).
pub fn sl3_matrix_printed() -> SparseOp {
    let ctx = sl3_ctx();
    let bind = [("z", MultiLaurent::zeta(&ctx))];
    data::parse_blocks(data::SL3_BLOCKS, &ctx, 8, &bind).expect("sl3 data")
}

/// The sl₃ matrix with [`SL3_CORRECTIONS`] applied.
pub fn sl3_matrix() -> SparseOp {
    let ctx = sl3_ctx();
    let bind = [("z", MultiLaurent::zeta(&ctx))];
    let printed = sl3_matrix_printed();
    let flat = |(i, j): (usize, usize)| (i - 1) * 8 + (j - 1);
    let mut entries: Vec<(usize, usize, MultiLaurent)> = printed.entries_flat();
    for (row, col, was, now) in SL3_CORRECTIONS {
        let (r, c) = (flat(row), flat(col));
        let was = MultiLaurent::parse_with(&ctx, was, &bind).expect("valid");
        let now = MultiLaurent::parse_with(&ctx, now, &bind).expect("valid");
        let e = entries.iter_mut().find(|e| e.0 == r && e.1 == c).expect("corrected entry is present");
        assert_eq!(e.2, was, "printed value at {row:?},{col:?}");
        e.2 = now;
    }
    SparseOp::from_flat(&ctx, 8, 2, entries).expect("valid entries")
}

fn sl3_h(ctx: &Arc<VarContext>) -> SparseOp {
    signs(ctx, &poly(ctx, "t1^-2*t2^-2"), &[1, -1, -1, 1, 1, -1, -1, 1])
}

/// `(R_{sl3}, h_{sl3})` with `h = t₁⁻²t₂⁻² diag(1,-1,-1,1,1,-1,-1,1)`.
pub fn build_sl3() -> EnhancedRMatrix {
    let ctx = sl3_ctx();
    EnhancedRMatrix::new("sl3", sl3_matrix(), sl3_h(&ctx), vec![weight_grading()]).expect("invertible")
}

/// The sl₃ pair exactly as printed, for diagnostics.
pub fn build_sl3_printed() -> EnhancedRMatrix {
    let ctx = sl3_ctx();
    let mut e = EnhancedRMatrix::new("sl3(printed)", sl3_matrix_printed(), sl3_h(&ctx), vec![weight_grading()]).expect("invertible");
    e.enhanced = false;
    e.note = Some("entries as printed; fails the axioms".into());
    e
}

pub const CATALOG_NAMES: [&str; 5] = ["alexander", "v1", "lambda1", "lambda-1", "sl3"];

/// Catalog lookup: `alexander`, `v1`, `lambda1`, `lambda-1`, `sl3`.
pub fn by_name(name: &str) -> Option<EnhancedRMatrix> {
    match name {
        "alexander" => Some(build_alexander()),
        "v1" => Some(build_v1(&GaussRational::one())),
        "lambda1" => Some(build_lambda1()),
        "lambda-1" | "lambda_minus1" => build_lambda_minus1(1).ok(),
        "sl3" => Some(build_sl3()),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub id: &'static str,
    pub pass: bool,
    /// `lhs − rhs`; zero iff the check passes.
    pub residual: SparseOp,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub name: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<12} {:<6} {}  (residual nnz {})",
                self.name,
                c.id,
                if c.pass { "PASS" } else { "FAIL" },
                c.residual.nnz()
            )?;
        }
        Ok(())
    }
}

fn check(id: &'static str, lhs: SparseOp, rhs: &SparseOp) -> AxiomCheck {
    let residual = lhs.sub(rhs).expect("same shape");
    AxiomCheck { id, pass: residual.is_zero(), residual }
}

/// `tr₂((id ⊗ h) ∘ X)`.
pub fn left_trace(x: &SparseOp, h: &SparseOp) -> SparseOp {
    let id = SparseOp::identity(h.ctx(), h.dim(), 1);
    id.tensor(h).expect("dims").compose(x).expect("shape").partial_trace(2).expect("arity 2")
}

/// The (1c) composite `rot_left(R⁻¹) ∘ rot_right((id⊗h) R (h⁻¹⊗id))`.
pub fn rotation_composite(r: &SparseOp, r_inv: &SparseOp, h: &SparseOp) -> SparseOp {
    let id = SparseOp::identity(h.ctx(), h.dim(), 1);
    let h_inv = h.invert().expect("h invertible");
    let x = id.tensor(h).unwrap().compose(r).unwrap().compose(&h_inv.tensor(&id).unwrap()).unwrap();
    r_inv.rot_left().unwrap().compose(&x.rot_right().unwrap()).unwrap()
}

/// Both sides of the Yang–Baxter equation on `V^⊗3`.
pub fn yang_baxter_sides(r: &SparseOp) -> (SparseOp, SparseOp) {
    let id = SparseOp::identity(r.ctx(), r.dim(), 3);
    let lhs = id.apply_two_site_left(r, 1).unwrap().apply_two_site_left(r, 2).unwrap().apply_two_site_left(r, 1).unwrap();
    let rhs = id.apply_two_site_left(r, 2).unwrap().apply_two_site_left(r, 1).unwrap().apply_two_site_left(r, 2).unwrap();
    (lhs, rhs)
}

/// Checks R∘R⁻¹ = id, (1a), (1b) for `R` and `R⁻¹`, (1c) and (1d).
pub fn check_axioms(e: &EnhancedRMatrix) -> AxiomReport {
    check_axioms_with(&e.name, &e.r, &e.r_inv, &e.h)
}

pub fn check_axioms_with(name: &str, r: &SparseOp, r_inv: &SparseOp, h: &SparseOp) -> AxiomReport {
    let ctx = r.ctx();
    let d = r.dim();
    let id1 = SparseOp::identity(ctx, d, 1);
    let id2 = SparseOp::identity(ctx, d, 2);
    let hh = h.tensor(h).unwrap();
    let (y_l, y_r) = yang_baxter_sides(r);
    let checks = vec![
        check("inv", r.compose(r_inv).unwrap(), &id2),
        check("1a", r.compose(&hh).unwrap(), &hh.compose(r).unwrap()),
        check("1b+", left_trace(r, h), &id1),
        check("1b-", left_trace(r_inv, h), &id1),
        check("1c", rotation_composite(r, r_inv, h), &id2),
        check("1d", y_l, &y_r),
    ];
    AxiomReport { name: name.to_string(), checks }
}

/// Every nonzero entry of `R` and `R⁻¹` connects basis vectors of equal
/// total weight.
pub fn check_grading_preserved(e: &EnhancedRMatrix, g: &Grading) -> bool {
    [&e.r, &e.r_inv].iter().all(|m| {
        m.entries_flat().iter().all(|(r, c, _)| g.weight_of(*r, 2) == g.weight_of(*c, 2))
    })
}

pub fn support(m: &SparseOp) -> BTreeSet<(usize, usize)> {
    m.entries_flat().into_iter().map(|(r, c, _)| (r, c)).collect()
}

pub fn same_support(a: &SparseOp, b: &SparseOp) -> bool {
    a.size() == b.size() && support(a) == support(b)
}

/// Result of solving (1b) for a diagonal `h`.
#[derive(Clone, Debug)]
pub struct EnhancementSolve {
    /// The linear system from (1b) for `R` and `R⁻¹`, in the unknowns
    /// `h₁..h_d`.
    pub system: LinearSystem,
    pub solution: Solution,
    /// Candidates from (1b) with Laurent entries, with their full reports.
    pub candidates: Vec<(Vec<MultiLaurent>, AxiomReport)>,
}

impl EnhancementSolve {
    /// Candidates that also pass (1a) and (1c).
    pub fn accepted(&self) -> Vec<&Vec<MultiLaurent>> {
        self.candidates
            .iter()
            .filter(|(_, rep)| ["1a", "1c"].iter().all(|id| rep.get(id).is_some_and(|c| c.pass)))
            .map(|(h, _)| h)
            .collect()
    }
}

/// Solve the linear constraints (1b) imposes on a diagonal `h`, then filter
/// the candidates by (1a) and (1c).
pub fn solve_diagonal_enhancement(r: &SparseOp, r_inv: &SparseOp) -> EnhancementSolve {
    let ctx = r.ctx();
    let d = r.dim();
    let mut sys = LinearSystem::new(ctx, (1..=d).map(|i| format!("h{i}")).collect());
    for m in [r, r_inv] {
        // tr₂((id⊗h)M)[k,i] = Σ_j h_j M[(k,j),(i,j)]
        for k in 0..d {
            for i in 0..d {
                let coeffs: Vec<(usize, MultiLaurent)> = (0..d).map(|j| (j, m.get_flat(k * d + j, i * d + j))).collect();
                let rhs = if k == i { MultiLaurent::one(ctx) } else { MultiLaurent::zero(ctx) };
                sys.push(coeffs, rhs);
            }
        }
    }
    let solution = sys.solve(&[]);
    let mut candidates = Vec::new();
    if solution.consistent && solution.nullity() == 0 {
        let vals: Option<Vec<MultiLaurent>> = solution.particular.iter().map(|x| x.as_laurent().cloned()).collect();
        if let Some(vals) = vals {
            let h = SparseOp::diagonal(ctx, d, 1, &vals);
            if h.invert().is_ok() {
                let rep = check_axioms_with("candidate", r, r_inv, &h);
                candidates.push((vals, rep));
            }
        }
    }
    EnhancementSolve { system: sys, solution, candidates }
}

/// Rational constant as a [`GaussRational`].
pub fn rational(p: i64, q: i64) -> GaussRational {
    GaussRational::real(Rat::new(p, q))
}

/// The (1c) residual of `V₁(r)` with `h = diag(-1,1,1,-1)` in the slot
/// `(e₂ ⊗ e₁*) ⊗ (e₄ ⊗ e₃*)`, next to the value `(1-r²)(1-t₀)`.
#[derive(Clone, Debug)]
pub struct RotationSlot {
    pub entry: MultiLaurent,
    pub claimed: MultiLaurent,
    pub residual_nnz: usize,
}

pub fn v1_rotation_slot(r: &GaussRational) -> RotationSlot {
    let e = build_v1(r);
    let id2 = SparseOp::identity(&e.ctx, 4, 2);
    let residual = rotation_composite(&e.r, &e.r_inv, &e.h).sub(&id2).expect("same shape");
    let entry = residual.get(&[2, 4], &[1, 3]).expect("in range");
    let one = GaussRational::one();
    let factor = MultiLaurent::constant(&e.ctx, one.sub(&r.mul(r)));
    let claimed = factor.mul_ref(&poly(&e.ctx, "1 - t0"));
    RotationSlot { entry, claimed, residual_nnz: residual.nnz() }
}
