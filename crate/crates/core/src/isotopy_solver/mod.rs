//! Linear systems expressing the isotopy conditions on generic tangle
//! operators. An `(m,m)`-tangle operator is weight preserving, so it is
//! written as a combination of the matrix units `E_{row,col}` allowed by the
//! gradings, and each isotopy becomes a linear system in those coefficients.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::laurent::{LaurentError, MultiLaurent, VarContext};
use crate::linalg::{LinearSystem, RationalFn, Solution};
use crate::rmatrices::EnhancedRMatrix;
use crate::tensorops::{SparseOp, TensorError};

const V1_P2: &str = include_str!("v1_p2.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnsatzOrder {
    RowMajor,
    ColumnMajor,
}

#[derive(Clone, Debug)]
pub struct GradedAnsatz {
    pub dim: usize,
    pub arity: usize,
    /// Flat `(row, col)` of each parameter.
    pub positions: Vec<(usize, usize)>,
    pub names: Vec<String>,
}

const GREEK: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

fn letter_name(k: usize) -> String {
    const L: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if k < L.len() {
        (L[k] as char).to_string()
    } else {
        format!("x{k}")
    }
}

impl GradedAnsatz {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The matrix unit of parameter `p`.
    pub fn unit(&self, ctx: &Arc<VarContext>, p: usize) -> SparseOp {
        let (r, c) = self.positions[p];
        SparseOp::from_flat(ctx, self.dim, self.arity, vec![(r, c, MultiLaurent::one(ctx))]).expect("in range")
    }

    /// Parameter values of a concrete operator, or `None` if it has support
    /// outside the ansatz.
    pub fn coordinates(&self, op: &SparseOp) -> Option<Vec<MultiLaurent>> {
        let idx: BTreeMap<(usize, usize), usize> = self.positions.iter().enumerate().map(|(p, &rc)| (rc, p)).collect();
        let mut out = vec![MultiLaurent::zero(op.ctx()); self.len()];
        for (r, c, x) in op.entries_flat() {
            out[*idx.get(&(r, c))?] = x;
        }
        Some(out)
    }
}

/// All `(row, col)` of `V^⊗arity` whose total weights agree in every
/// grading of `e`, named in the given reading order.
pub fn graded_ansatz(e: &EnhancedRMatrix, arity: usize, order: AnsatzOrder) -> GradedAnsatz {
    let size = e.dim.pow(arity as u32);
    let weight = |f: usize| -> Vec<i32> { e.gradings.iter().flat_map(|g| g.weight_of(f, arity)).collect() };
    let w: Vec<Vec<i32>> = (0..size).map(weight).collect();
    let mut positions = Vec::new();
    for a in 0..size {
        for b in 0..size {
            let (r, c) = match order {
                AnsatzOrder::RowMajor => (a, b),
                AnsatzOrder::ColumnMajor => (b, a),
            };
            if w[r] == w[c] {
                positions.push((r, c));
            }
        }
    }
    let names = (0..positions.len())
        .map(|k| if arity == 1 && positions.len() <= GREEK.len() { GREEK[k].to_string() } else { letter_name(k) })
        .collect();
    GradedAnsatz { dim: e.dim, arity, positions, names }
}

/// One row per nonzero `(equation, row, col)` slot of the operators `M_p`,
/// where `M_p` is the constraint evaluated on the `p`-th matrix unit.
fn collect_system(ctx: &Arc<VarContext>, names: Vec<String>, per_unknown: Vec<Vec<SparseOp>>) -> LinearSystem {
    let mut eqs: BTreeMap<(usize, usize, usize), Vec<(usize, MultiLaurent)>> = BTreeMap::new();
    for (p, ops) in per_unknown.into_iter().enumerate() {
        for (k, m) in ops.into_iter().enumerate() {
            for (r, c, x) in m.entries_flat() {
                eqs.entry((k, r, c)).or_default().push((p, x));
            }
        }
    }
    let mut sys = LinearSystem::new(ctx, names);
    for (_, coeffs) in eqs {
        sys.push(coeffs, MultiLaurent::zero(ctx));
    }
    sys
}

/// `(id ⊗ F) R = R (F ⊗ id)` for an arity-1 ansatz.
pub fn build_p1_system(e: &EnhancedRMatrix, ansatz: &GradedAnsatz) -> Result<LinearSystem, TensorError> {
    if ansatz.arity != 1 {
        return Err(TensorError::Arity { expected: 1, got: ansatz.arity });
    }
    let id = SparseOp::identity(&e.ctx, e.dim, 1);
    let mut per = Vec::with_capacity(ansatz.len());
    for p in 0..ansatz.len() {
        let f = ansatz.unit(&e.ctx, p);
        let lhs = id.tensor(&f)?.compose(&e.r)?;
        let rhs = e.r.compose(&f.tensor(&id)?)?;
        per.push(vec![lhs.sub(&rhs)?]);
    }
    Ok(collect_system(&e.ctx, ansatz.names.clone(), per))
}

/// `R² F − F R² = 0` and `(R⊗id)(id⊗R)(F⊗id) − (id⊗F)(R⊗id)(id⊗R) = 0` for
/// an arity-2 ansatz.
pub fn build_p2_system(e: &EnhancedRMatrix, ansatz: &GradedAnsatz) -> Result<LinearSystem, TensorError> {
    if ansatz.arity != 2 {
        return Err(TensorError::Arity { expected: 2, got: ansatz.arity });
    }
    let id = SparseOp::identity(&e.ctx, e.dim, 1);
    let r2 = e.r.compose(&e.r)?;
    let braid = SparseOp::identity(&e.ctx, e.dim, 3).apply_two_site_left(&e.r, 2)?.apply_two_site_left(&e.r, 1)?;
    let mut per = Vec::with_capacity(ansatz.len());
    for p in 0..ansatz.len() {
        let f = ansatz.unit(&e.ctx, p);
        let first = r2.compose(&f)?.sub(&f.compose(&r2)?)?;
        let left = f.tensor(&id)?.apply_two_site_left(&e.r, 2)?.apply_two_site_left(&e.r, 1)?;
        let right = braid.apply_two_site_left(&f, 2)?;
        per.push(vec![first, left.sub(&right)?]);
    }
    Ok(collect_system(&e.ctx, ansatz.names.clone(), per))
}

#[derive(Clone, Debug)]
pub struct RankReport {
    /// Rank of the coefficient matrix over the rational function field.
    pub symbolic: usize,
    pub unknowns: usize,
    /// Ranks at random rational points.
    pub sampled: Vec<usize>,
}

impl RankReport {
    pub fn nullity(&self) -> usize {
        self.unknowns - self.symbolic
    }

    pub fn agree(&self) -> bool {
        self.sampled.iter().all(|&r| r == self.symbolic)
    }
}

pub fn rank(sys: &LinearSystem, solution: &Solution, rng: &mut impl Rng) -> RankReport {
    RankReport { symbolic: solution.rank, unknowns: sys.nvars(), sampled: sys.probabilistic_ranks(rng, 3) }
}

/// Dense `dim × dim` operator with rational-function entries.
pub type RationalMatrix = Vec<Vec<RationalFn>>;

/// The solution space as coefficient vectors of the free parameters, and the
/// two closures of the generic operator, one matrix per free parameter.
#[derive(Clone, Debug)]
pub struct IsotopyResult {
    pub name: String,
    pub ansatz: GradedAnsatz,
    pub solution: Solution,
    pub rank: RankReport,
    /// Names of the free parameters.
    pub free: Vec<String>,
    pub left: Vec<RationalMatrix>,
    pub right: Vec<RationalMatrix>,
}

impl IsotopyResult {
    /// `tr₂((id⊗h)F) = tr₁(F(h⁻¹⊗id))` on the whole solution space.
    pub fn closures_agree(&self) -> bool {
        self.left == self.right
    }

    /// Coefficient of free parameter `k` in unknown `name`.
    pub fn coefficient(&self, name: &str, k: usize) -> Option<&RationalFn> {
        self.ansatz.index_of(name).map(|p| &self.solution.basis[k][p])
    }

    /// `true` if both closures are diagonal; returns the diagonals per free
    /// parameter.
    pub fn closure_diagonals(&self) -> Option<(Vec<Vec<RationalFn>>, Vec<Vec<RationalFn>>)> {
        let diag = |ms: &[RationalMatrix]| -> Option<Vec<Vec<RationalFn>>> {
            ms.iter()
                .map(|m| {
                    for (i, row) in m.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            if i != j && !x.is_zero() {
                                return None;
                            }
                        }
                    }
                    Some((0..m.len()).map(|i| m[i][i].clone()).collect())
                })
                .collect()
        };
        Some((diag(&self.left)?, diag(&self.right)?))
    }
}

fn closure_of_units(e: &EnhancedRMatrix, ansatz: &GradedAnsatz, left: bool) -> Result<Vec<SparseOp>, TensorError> {
    let id = SparseOp::identity(&e.ctx, e.dim, 1);
    let h_inv = e.h_inv();
    (0..ansatz.len())
        .map(|p| {
            let f = ansatz.unit(&e.ctx, p);
            if left {
                id.tensor(&e.h)?.compose(&f)?.partial_trace(2)
            } else {
                f.compose(&h_inv.tensor(&id)?)?.partial_trace(1)
            }
        })
        .collect()
}

fn combine(ctx: &Arc<VarContext>, dim: usize, units: &[SparseOp], coeffs: &[RationalFn]) -> RationalMatrix {
    let mut m = vec![vec![RationalFn::zero(ctx); dim]; dim];
    for (u, c) in units.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (r, col, x) in u.entries_flat() {
            m[r][col] = m[r][col].add(&c.scale(&x));
        }
    }
    m
}

/// Build and solve the P2 system, preferring `prefer_free` as parameters,
/// and evaluate both closures over the solution space.
pub fn solve_and_verify(
    e: &EnhancedRMatrix,
    order: AnsatzOrder,
    prefer_free: &[&str],
    rng: &mut impl Rng,
) -> Result<IsotopyResult, TensorError> {
    let ansatz = graded_ansatz(e, 2, order);
    let sys = build_p2_system(e, &ansatz)?;
    let prefer: Vec<usize> = prefer_free.iter().filter_map(|n| ansatz.index_of(n)).collect();
    let mut solution = sys.solve(&prefer);
    // present free parameters in the requested order
    let key = |j: usize| prefer.iter().position(|&q| q == j).unwrap_or(usize::MAX);
    let mut perm: Vec<usize> = (0..solution.free.len()).collect();
    perm.sort_by_key(|&k| (key(solution.free[k]), solution.free[k]));
    solution.free = perm.iter().map(|&k| solution.free[k]).collect();
    solution.basis = perm.iter().map(|&k| solution.basis[k].clone()).collect();
    let rank = rank(&sys, &solution, rng);
    let lu = closure_of_units(e, &ansatz, true)?;
    let ru = closure_of_units(e, &ansatz, false)?;
    let left = solution.basis.iter().map(|b| combine(&e.ctx, e.dim, &lu, b)).collect();
    let right = solution.basis.iter().map(|b| combine(&e.ctx, e.dim, &ru, b)).collect();
    let free = solution.free.iter().map(|&j| ansatz.names[j].clone()).collect();
    Ok(IsotopyResult { name: e.name.clone(), ansatz, solution, rank, free, left, right })
}

/// Solve the P1 system; returns the solution of the arity-1 ansatz.
pub fn solve_p1(e: &EnhancedRMatrix) -> Result<(GradedAnsatz, Solution), TensorError> {
    let ansatz = graded_ansatz(e, 1, AnsatzOrder::RowMajor);
    let sys = build_p1_system(e, &ansatz)?;
    let sol = sys.solve(&[0]);
    Ok((ansatz, sol))
}

/// A sum of `num // den` pieces joined by `&`.
pub fn parse_rational(ctx: &Arc<VarContext>, s: &str) -> Result<RationalFn, LaurentError> {
    let mut acc = RationalFn::zero(ctx);
    for piece in s.split('&') {
        let (n, d) = piece.split_once("//").unwrap_or((piece, "1"));
        let term = RationalFn::new(MultiLaurent::parse(ctx, n.trim())?, MultiLaurent::parse(ctx, d.trim())?)?;
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// A printed expression `name = c₁ | c₂ | …` in the listed free parameters.
#[derive(Clone, Debug)]
pub struct PrintedExpression {
    pub name: String,
    pub coefficients: Vec<RationalFn>,
}

fn parse_expressions(ctx: &Arc<VarContext>, text: &str) -> Vec<PrintedExpression> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, rhs) = l.split_once('=').expect("name = ...");
            let coefficients = rhs.split('|').map(|c| parse_rational(ctx, c).expect("valid expression")).collect();
            PrintedExpression { name: name.trim().to_string(), coefficients }
        })
        .collect()
}

/// The printed `V₁` solution in `(E, i, p)`: the 33 dependent unknowns
/// followed by the closure values `x1..x4`.
pub fn v1_printed_solution(ctx: &Arc<VarContext>) -> Vec<PrintedExpression> {
    parse_expressions(ctx, V1_P2)
}

/// The printed Alexander solution in `(b, c)`.
pub fn alexander_printed_solution(ctx: &Arc<VarContext>) -> Vec<PrintedExpression> {
    parse_expressions(ctx, "a = 1 | 1\nd = 0 | t\ne = 1 | 1 - t\nf = 1 | -t\n")
}

#[derive(Clone, Debug)]
pub struct ExpressionMismatch {
    pub name: String,
    pub printed: String,
    pub computed: String,
}

/// Compare printed expressions for unknowns against the solution; names not
/// in the ansatz are skipped.
pub fn compare_solution(res: &IsotopyResult, printed: &[PrintedExpression]) -> (usize, Vec<ExpressionMismatch>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for pe in printed {
        if res.ansatz.index_of(&pe.name).is_none() {
            continue;
        }
        checked += 1;
        let computed: Vec<RationalFn> = (0..res.free.len()).map(|k| res.coefficient(&pe.name, k).expect("known").clone()).collect();
        if computed != pe.coefficients {
            bad.push(ExpressionMismatch { name: pe.name.clone(), printed: fmt_vec(&pe.coefficients), computed: fmt_vec(&computed) });
        }
    }
    (checked, bad)
}

fn fmt_vec(v: &[RationalFn]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

#[derive(Clone, Debug)]
pub struct V1ClosureCheck {
    /// Left closure diagonal equals `diag(x1, x2, x3, x4)`.
    pub left_matches: bool,
    /// Right closure diagonal equals `diag(x4, x2, x3, x1)`.
    pub right_matches: bool,
    /// `x1 = x4` as printed.
    pub printed_x1_eq_x4: bool,
}

pub fn check_v1_closures(res: &IsotopyResult, printed: &[PrintedExpression]) -> Option<V1ClosureCheck> {
    let (ld, rd) = res.closure_diagonals()?;
    let x: Vec<&PrintedExpression> = ["x1", "x2", "x3", "x4"].iter().map(|n| printed.iter().find(|p| p.name == *n)).collect::<Option<_>>()?;
    let slot = |d: &[Vec<RationalFn>], i: usize| -> Vec<RationalFn> { d.iter().map(|v| v[i].clone()).collect() };
    let left_matches = (0..4).all(|i| slot(&ld, i) == x[i].coefficients);
    let right_matches = [3, 1, 2, 0].iter().enumerate().all(|(i, &j)| slot(&rd, i) == x[j].coefficients);
    Some(V1ClosureCheck { left_matches, right_matches, printed_x1_eq_x4: x[0].coefficients == x[3].coefficients })
}

/// Concrete `(2,2)`-tangle operators: powers of `R`, partial closures of
/// random 3-strand braids on either side, and their products with powers of `R`.
pub fn tangle_operators(e: &EnhancedRMatrix, rng: &mut impl Rng, closures: usize) -> Result<Vec<(String, SparseOp)>, TensorError> {
    use crate::braidrep::{rho, BraidWord};
    let err = |b: crate::braidrep::BraidError| TensorError::Shape(b.to_string());
    let mut out = Vec::new();
    for k in [0i32, 1, 2, 3, -1] {
        let b = BraidWord::new(2, vec![k.signum(); k.unsigned_abs() as usize]).map_err(err)?;
        out.push((b.to_string(), rho(e, &b).map_err(err)?));
    }
    let h_inv = e.h_inv();
    for s in 0..closures {
        let len = rng.gen_range(2..=6);
        let b = BraidWord::random(rng, 3, len);
        let m = rho(e, &b).map_err(err)?;
        if s % 2 == 0 {
            out.push((format!("close strand 3 of {b}"), m.apply_one_site_left(&e.h, 3)?.partial_trace(3)?));
        } else {
            out.push((format!("close strand 1 of {b}"), m.apply_one_site_left(&h_inv, 1)?.partial_trace(1)?));
        }
    }
    let base = out.len();
    for i in 5..base {
        for j in 1..5 {
            let label = format!("({}) * ({})", out[i].0, out[j].0);
            let op = out[i].1.compose(&out[j].1)?;
            out.push((label, op));
        }
    }
    Ok(out)
}

/// Exact rank of a P2 system and closure equality without symbolic
/// elimination. The rank at a point bounds the symbolic rank from below;
/// exact solutions that are independent at a point bound the nullity from
/// below. When the bounds meet, those solutions span the solution space, so
/// checking both closures on them decides equality.
#[derive(Clone, Debug)]
pub struct SpanCertificate {
    pub unknowns: usize,
    /// Ranks at random points (lower bounds for the symbolic rank).
    pub sampled: Vec<usize>,
    /// Labels of the independent candidates that were kept.
    pub spanning: Vec<String>,
    pub independent: usize,
    /// Every candidate solves every equation exactly.
    pub basis_solves: bool,
    pub closures_agree: bool,
}

impl SpanCertificate {
    /// The symbolic rank, when the two bounds meet.
    pub fn rank(&self) -> Option<usize> {
        let lower = *self.sampled.iter().max()?;
        (lower + self.independent == self.unknowns).then_some(lower)
    }
}

fn solves(sys: &LinearSystem, x: &[MultiLaurent]) -> bool {
    sys.rows.iter().all(|(c, b)| {
        let mut acc = b.neg_ref();
        for (j, a) in c {
            acc.add_mul_assign(a, &x[*j]);
        }
        acc.is_zero()
    })
}

fn vectors_as_rows<'a>(ctx: &Arc<VarContext>, ansatz: &GradedAnsatz, xs: impl IntoIterator<Item = &'a Vec<MultiLaurent>>) -> LinearSystem {
    let mut v = LinearSystem::new(ctx, ansatz.names.clone());
    v.rows = xs
        .into_iter()
        .map(|x| (x.iter().enumerate().filter(|(_, y)| !y.is_zero()).map(|(j, y)| (j, y.clone())).collect(), MultiLaurent::zero(ctx)))
        .collect();
    v
}

/// Certify `sys` from candidate solutions given by their coordinates.
pub fn certify(
    e: &EnhancedRMatrix,
    ansatz: &GradedAnsatz,
    sys: &LinearSystem,
    candidates: &[(String, Vec<MultiLaurent>)],
    rng: &mut impl Rng,
) -> Result<SpanCertificate, TensorError> {
    let sampled = sys.probabilistic_ranks(rng, 3);
    let basis_solves = candidates.iter().all(|(_, x)| solves(sys, x));
    let vectors = vectors_as_rows(&e.ctx, ansatz, candidates.iter().map(|(_, x)| x));
    let keep = loop {
        let point = crate::linalg::random_point(rng, e.ctx.len());
        if let Some(k) = vectors.independent_rows_at(&point) {
            break k;
        }
    };
    let id = SparseOp::identity(&e.ctx, e.dim, 1);
    let h_inv = e.h_inv();
    let mut closures_agree = true;
    for &k in &keep {
        let entries = ansatz.positions.iter().zip(&candidates[k].1).filter(|(_, v)| !v.is_zero()).map(|(&(r, c), v)| (r, c, v.clone())).collect();
        let f = SparseOp::from_flat(&e.ctx, e.dim, 2, entries)?;
        let left = id.tensor(&e.h)?.compose(&f)?.partial_trace(2)?;
        let right = f.compose(&h_inv.tensor(&id)?)?.partial_trace(1)?;
        closures_agree &= left == right;
    }
    Ok(SpanCertificate {
        unknowns: ansatz.len(),
        sampled,
        independent: keep.len(),
        spanning: keep.iter().map(|&k| candidates[k].0.clone()).collect(),
        basis_solves,
        closures_agree,
    })
}

/// Certificate from tangle operators alone.
pub fn certify_p2(e: &EnhancedRMatrix, order: AnsatzOrder, closures: usize, rng: &mut impl Rng) -> Result<SpanCertificate, TensorError> {
    let ansatz = graded_ansatz(e, 2, order);
    let sys = build_p2_system(e, &ansatz)?;
    let mut candidates = Vec::new();
    for (label, op) in tangle_operators(e, rng, closures)? {
        let x = ansatz.coordinates(&op).ok_or_else(|| TensorError::Shape(format!("{label} breaks the grading")))?;
        candidates.push((label, x));
    }
    certify(e, &ansatz, &sys, &candidates, rng)
}

/// The `Λ₋₁` (r = 1) certificate. Tangle operators span only part of the
/// solution space; the rest comes from exact solutions with all but a few
/// unknowns set to zero, on supports found by a search modulo a prime.
pub fn certify_lambda_minus1(e: &EnhancedRMatrix, closures: usize, rng: &mut impl Rng) -> Result<SpanCertificate, TensorError> {
    let ansatz = graded_ansatz(e, 2, AnsatzOrder::ColumnMajor);
    let sys = build_p2_system(e, &ansatz)?;
    let mut candidates = Vec::new();
    for (label, op) in tangle_operators(e, rng, closures)? {
        let x = ansatz.coordinates(&op).ok_or_else(|| TensorError::Shape(format!("{label} breaks the grading")))?;
        candidates.push((label, x));
    }
    let known: Vec<Vec<MultiLaurent>> = candidates.iter().map(|(_, x)| x.clone()).collect();
    let point = crate::linalg::random_point(rng, e.ctx.len());
    let nullity = sys.nvars() - sys.rank_at(&point).unwrap_or(0);
    let known_rank = vectors_as_rows(&e.ctx, &ansatz, &known).rank_at(&point).unwrap_or(0);
    let want = nullity.saturating_sub(known_rank);
    let supports = sys.kernel_supports_extending(&point, &known, want, 1000, rng).unwrap_or_default();
    for support in supports {
        let restricted = sys.restrict(&support).solve(&[]);
        for b in &restricted.basis {
            let Some(y) = crate::linalg::clear_denominators(b) else { continue };
            let mut x = vec![MultiLaurent::zero(&e.ctx); ansatz.len()];
            for (&j, v) in support.iter().zip(y) {
                x[j] = v;
            }
            candidates.push((format!("solution supported on {} unknowns", support.len()), x));
        }
    }
    certify(e, &ansatz, &sys, &candidates, rng)
}
