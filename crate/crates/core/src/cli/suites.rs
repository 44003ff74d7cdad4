//! Verification suites behind `verify`.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::catalog::{load_catalog, LinkEntry};
use super::report::{timed, Check, Report};
use crate::braidrep::{closure_mrt, markov_conjugate, markov_stabilize, BraidWord};
use crate::conjugacy::{self, WeakConjugacyData};
use crate::invariants::{self, pairs, Lam1Substitution};
use crate::isotopy_solver::{self as iso, AnsatzOrder};
use crate::laurent::{GaussRational, MultiLaurent};
use crate::rmatrices::{self, check_axioms, EnhancedRMatrix, MatrixJson};

pub const SUITES: [&str; 6] = ["axioms", "isotopy", "conjugacy", "theorem2", "skein", "markov"];

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    /// Catalog entry name or `all`.
    pub link: String,
    pub matrix_file: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, samples: 20, link: "all".into(), matrix_file: None }
    }
}

/// How a suite can fail to produce a report.
#[derive(Debug)]
pub enum SuiteError {
    /// Bad user input (exit code 2).
    Usage(String),
    /// Internal invariant violation (exit code 3).
    Internal(String),
}

type Task<'a> = Box<dyn Fn() -> Result<Vec<Check>, String> + Send + Sync + 'a>;

fn run_tasks(tasks: Vec<Task>) -> Result<Vec<Check>, SuiteError> {
    let results: Vec<Result<Vec<Check>, String>> = tasks.par_iter().map(|t| {
        let mut err = None;
        let checks = timed(|| t().unwrap_or_else(|e| {
            err = Some(e);
            Vec::new()
        }));
        err.map_or(Ok(checks), Err)
    }).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r.map_err(SuiteError::Internal)?);
    }
    Ok(out)
}

/// Independent stream per task so results do not depend on scheduling.
fn task_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn ise<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run_suite(name: &str, opts: &Options) -> Result<Report, SuiteError> {
    let checks = match name {
        "axioms" => axioms(opts)?,
        "isotopy" => isotopy(opts)?,
        "conjugacy" => conjugacy(opts)?,
        "theorem2" => theorem2(opts)?,
        "skein" => skein(opts)?,
        "markov" => markov(opts)?,
        "all" => {
            let parts = SUITES.iter().map(|s| run_suite(s, opts)).collect::<Result<Vec<_>, _>>()?;
            return Ok(Report::merge("all", opts.seed, opts.samples, parts));
        }
        other => return Err(SuiteError::Usage(format!("unknown suite '{other}'; expected one of {} or all", SUITES.join(", ")))),
    };
    Ok(Report::new(name, opts.seed, opts.samples, checks))
}

fn selected_links(opts: &Options) -> Result<Vec<LinkEntry>, SuiteError> {
    let catalog = load_catalog().map_err(SuiteError::Internal)?;
    if opts.link == "all" {
        return Ok(catalog);
    }
    super::catalog::find(&catalog, &opts.link).map(|e| vec![e]).ok_or_else(|| SuiteError::Usage(format!("unknown link '{}'", opts.link)))
}

fn axiom_checks(e: &EnhancedRMatrix, label: &str) -> Vec<Check> {
    check_axioms(e).checks.into_iter().map(|c| Check::new(format!("{label}/{}", c.id), c.pass, format!("residual nnz {}", c.residual.nnz()))).collect()
}

fn axioms(opts: &Options) -> Result<Vec<Check>, SuiteError> {
    if let Some(path) = &opts.matrix_file {
        let text = std::fs::read_to_string(path).map_err(|e| SuiteError::Usage(format!("{}: {e}", path.display())))?;
        let j: MatrixJson = serde_json::from_str(&text).map_err(|e| SuiteError::Usage(format!("{}: {e}", path.display())))?;
        let e = EnhancedRMatrix::from_json(&j).map_err(|e| SuiteError::Usage(format!("{}: {e}", path.display())))?;
        return Ok(axiom_checks(&e, &e.name));
    }
    let one = GaussRational::one();
    let minus = GaussRational::from_int(-1);
    let mut tasks: Vec<Task> = vec![
        Box::new(|| Ok(axiom_checks(pairs::alexander(), "alexander"))),
        Box::new(|| Ok(axiom_checks(pairs::v1(), "v1(r=1)"))),
        Box::new(|| Ok(axiom_checks(&rmatrices::build_v1(&GaussRational::from_int(-1)), "v1(r=-1)"))),
        Box::new(|| Ok(axiom_checks(pairs::lambda1(), "lambda1"))),
        Box::new(|| Ok(axiom_checks(pairs::lambda_minus1(), "lambda-1(r=1)"))),
        Box::new(|| Ok(axiom_checks(&rmatrices::build_lambda_minus1(-1).map_err(ise)?, "lambda-1(r=-1)"))),
        Box::new(|| Ok(axiom_checks(pairs::sl3(), "sl3"))),
        Box::new(|| Ok(axiom_checks(&invariants::alexander_product_pair(), "alexander(t1)x alexander(t0)"))),
    ];
    for r in [one, minus] {
        tasks.push(Box::new(move || {
            let e = rmatrices::build_v1(&r);
            let s = rmatrices::solve_diagonal_enhancement(&e.r, &e.r_inv);
            let want: Vec<MultiLaurent> = [-1, 1, 1, -1].iter().map(|&x| MultiLaurent::from_int(&e.ctx, x)).collect();
            let acc = s.accepted();
            let shown: Vec<String> = acc.iter().map(|h| format!("({})", h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
            Ok(vec![Check::new(format!("v1(r={r})/enhancement"), acc.len() == 1 && acc[0] == &want, format!("accepted {}", shown.join(" ")))])
        }));
    }
    tasks.push(Box::new(|| {
        let slot = rmatrices::v1_rotation_slot(&rmatrices::rational(2, 1));
        Ok(vec![Check::new(
            "v1(r=2)/1c-slot",
            slot.entry == slot.claimed,
            format!("slot (e2 x e1*)(e4 x e3*) = {}, expected {}; full residual nnz {}", slot.entry, slot.claimed, slot.residual_nnz),
        )])
    }));
    run_tasks(tasks)
}

fn isotopy(opts: &Options) -> Result<Vec<Check>, SuiteError> {
    let seed = opts.seed;
    let mut tasks: Vec<Task> = Vec::new();
    for (label, build) in [
        ("alexander", (|| rmatrices::build_alexander()) as fn() -> EnhancedRMatrix),
        ("v1(r=1)", || rmatrices::build_v1(&GaussRational::one())),
        ("v1(r=-1)", || rmatrices::build_v1(&GaussRational::from_int(-1))),
        ("lambda-1", || rmatrices::build_lambda_minus1(1).expect("r = 1")),
        ("sl3", rmatrices::build_sl3),
    ] {
        tasks.push(Box::new(move || {
            let e = build();
            let (_, s) = iso::solve_p1(&e).map_err(ise)?;
            let scalar = s.nullity() == 1 && s.basis[0].iter().all(|x| x.as_laurent().is_some_and(|p| p.is_constant()));
            Ok(vec![Check::new(format!("{label}/P1"), scalar, format!("rank {}, nullity {}", s.rank, s.nullity()))])
        }));
    }
    tasks.push(Box::new(move || {
        let e = rmatrices::build_alexander();
        let res = iso::solve_and_verify(&e, AnsatzOrder::RowMajor, &["b", "c"], &mut task_rng(seed, 1)).map_err(ise)?;
        let (n, bad) = iso::compare_solution(&res, &iso::alexander_printed_solution(&e.ctx));
        Ok(vec![
            rank_check("alexander/P2-rank", &res.rank, 2),
            Check::new("alexander/P2-solution", bad.is_empty() && n == 4, format!("{n} printed expressions checked, free ({})", res.free.join(","))),
            Check::new("alexander/P2-closures", res.closures_agree(), ""),
        ])
    }));
    tasks.push(Box::new(move || {
        let e = rmatrices::build_v1(&GaussRational::one());
        let res = iso::solve_and_verify(&e, AnsatzOrder::ColumnMajor, &["E", "i", "p"], &mut task_rng(seed, 2)).map_err(ise)?;
        let printed = iso::v1_printed_solution(&e.ctx);
        let (n, bad) = iso::compare_solution(&res, &printed);
        let detail = if bad.is_empty() {
            format!("{n} printed expressions reproduced")
        } else {
            let shown: Vec<String> = bad.iter().map(|b| format!("{}: printed {} computed {}", b.name, b.printed, b.computed)).collect();
            format!("{} of {n} reproduced; {}", n - bad.len(), shown.join("; "))
        };
        let closures = iso::check_v1_closures(&res, &printed);
        let closures_ok = closures.as_ref().is_some_and(|c| c.left_matches && c.right_matches);
        Ok(vec![
            rank_check("v1(r=1)/P2-rank", &res.rank, 3),
            Check::new("v1(r=1)/P2-expressions", bad.is_empty() && n == 33, detail),
            Check::new("v1(r=1)/P2-closures", res.closures_agree() && closures_ok, format!("{closures:?}")),
        ])
    }));
    tasks.push(Box::new(move || {
        let e = rmatrices::build_v1(&GaussRational::from_int(-1));
        let res = iso::solve_and_verify(&e, AnsatzOrder::ColumnMajor, &["E", "i", "p"], &mut task_rng(seed, 3)).map_err(ise)?;
        Ok(vec![rank_check("v1(r=-1)/P2-rank", &res.rank, 3), Check::new("v1(r=-1)/P2-closures", res.closures_agree(), "")])
    }));
    tasks.push(Box::new(move || {
        let e = rmatrices::build_lambda_minus1(1).map_err(ise)?;
        let c = iso::certify_lambda_minus1(&e, 10, &mut task_rng(seed, 4)).map_err(ise)?;
        let rank = c.rank();
        Ok(vec![
            Check::new(
                "lambda-1/P2-rank",
                rank.is_some() && c.basis_solves,
                format!(
                    "unknowns {}, sampled ranks {:?}, independent exact solutions {}, {}",
                    c.unknowns,
                    c.sampled,
                    c.independent,
                    rank.map_or("bounds do not meet".to_string(), |r| format!("rank {r}, nullity {}", c.unknowns - r))
                ),
            ),
            Check::new("lambda-1/P2-closures", c.closures_agree, ""),
        ])
    }));
    run_tasks(tasks)
}

/// The stated ranks count the free parameters of the solution.
fn rank_check(id: &str, r: &iso::RankReport, stated: usize) -> Check {
    Check::new(
        id,
        r.agree() && r.nullity() == stated,
        format!("unknowns {}, rank {}, nullity {} (stated {stated}), sampled {:?}", r.unknowns, r.symbolic, r.nullity(), r.sampled),
    )
}

fn conjugacy(opts: &Options) -> Result<Vec<Check>, SuiteError> {
    let seed = opts.seed;
    let tangles = opts.samples.max(10);
    let mut tasks: Vec<Task> = vec![Box::new(|| {
        let r = conjugacy::check_lemma_rr().map_err(ise)?;
        Ok(vec![
            Check::new("lambda1/h-conjugacy", r.h.pass(), format!("mismatches {}", r.h.mismatches)),
            Check::new("lambda1/R-conjugacy", r.r.pass(), format!("mismatches {}", r.r.mismatches)),
        ])
    })];
    for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        tasks.push(Box::new(move || {
            let d = WeakConjugacyData::standard(1);
            let c = conjugacy::check_lemma_rn(&d, pairs::sl3(), pairs::lambda_minus1(), Lam1Substitution::Matched, n, k).map_err(ise)?;
            Ok(vec![Check::new(format!("sl3~lambda-1/R n={n} k={k}"), c.pass(), format!("mismatches {}", c.mismatches))])
        }));
    }
    for n in 2..=4 {
        tasks.push(Box::new(move || {
            let d = WeakConjugacyData::standard(1);
            let p = conjugacy::build_phi_n(&d, n).map_err(ise)?;
            let f = p.factorization.expect("n >= 2");
            Ok(vec![Check::new(format!("phi_{n}/factorization"), f.pass(), format!("mismatches {}", f.mismatches))])
        }));
    }
    for n in 2..=3 {
        tasks.push(Box::new(move || {
            let d = WeakConjugacyData::standard(1);
            let mut rng = task_rng(seed, 10 + n as u64);
            let t = conjugacy::sample_tangles(pairs::sl3(), &mut rng, n, tangles).map_err(ise)?;
            let r = conjugacy::check_bc2(&d, pairs::sl3(), pairs::lambda_minus1(), Lam1Substitution::Matched, n, &t).map_err(ise)?;
            Ok(vec![Check::new(
                format!("BC2 n={n}"),
                r.pass(),
                format!("sn {} n1 {} gn {}/{} nun {}/{} g2 {}/{} structural {}", r.sn, r.n1, r.gn.passed, r.gn.total, r.nun.passed, r.nun.total, r.g2.passed, r.g2.total, r.structural),
            )])
        }));
    }
    run_tasks(tasks)
}

fn theorem2(opts: &Options) -> Result<Vec<Check>, SuiteError> {
    let links = selected_links(opts)?;
    let tasks: Vec<Task> = links
        .into_iter()
        .map(|l| -> Task {
            Box::new(move || {
                let b = &l.braid;
                let la1 = invariants::check_theorem2_lambda1(b).map_err(ise)?;
                let matched = invariants::check_theorem2_lambda_minus1(b, Lam1Substitution::Matched).map_err(ise)?;
                let stated = invariants::check_theorem2_lambda_minus1(b, Lam1Substitution::Stated).map_err(ise)?;
                let integral = invariants::integrality(&la1.lhs);
                let integral_detail = match &integral {
                    Ok(()) => String::new(),
                    Err(t) => {
                        let unit = invariants::clear_unit_monomial(&la1.lhs).map(|(u, _)| format!("; integral after dividing by {u}")).unwrap_or_default();
                        format!("offending monomial {t}{unit}")
                    }
                };
                Ok(vec![
                    Check::new(format!("{}/La1", l.name), la1.pass(), format!("{}", la1.lhs)),
                    Check::new(format!("{}/Lam1", l.name), matched.pass(), ""),
                    Check::new(format!("{}/Lam1-stated-substitution", l.name), stated.pass(), ""),
                    Check::new(format!("{}/Lambda1-integral", l.name), integral.is_ok(), integral_detail),
                ])
            })
        })
        .collect();
    run_tasks(tasks)
}

fn skein(opts: &Options) -> Result<Vec<Check>, SuiteError> {
    let seed = opts.seed;
    let samples = opts.samples;
    let tasks: Vec<Task> = vec![
        Box::new(|| {
            let e = pairs::alexander();
            let z = MultiLaurent::parse(&e.ctx, "t^(-1/2) - t^(1/2)").map_err(ise)?;
            let diff = e.r.sub(&e.r_inv).map_err(ise)?;
            let ok = diff.as_scalar_multiple_of_identity().is_some_and(|x| x == z);
            Ok(vec![Check::new("alexander/R-Rinv", ok, format!("R - R^-1 = ({z}) id"))])
        }),
        Box::new(move || {
            let mut rng = task_rng(seed, 20);
            let mut out = Vec::with_capacity(samples);
            for s in 0..samples {
                let n = rng.gen_range(2..=3);
                let len = rng.gen_range(0..=5);
                let b = BraidWord::random(&mut rng, n, len);
                let i = rng.gen_range(1..n);
                let t = invariants::skein_triple(&b, i).map_err(ise)?;
                out.push(Check::new(format!("triple {s}"), t.residual.is_zero(), format!("{b}, i={i}")));
            }
            Ok(out)
        }),
    ];
    run_tasks(tasks)
}

fn markov(opts: &Options) -> Result<Vec<Check>, SuiteError> {
    let seed = opts.seed;
    let samples = opts.samples;
    let tasks: Vec<Task> = invariants::INVARIANT_NAMES
        .iter()
        .enumerate()
        .map(|(k, &name)| -> Task {
            Box::new(move || {
                let e = pairs::by_name(name).expect("catalog name");
                let mut rng = task_rng(seed, 30 + k as u64);
                let (mut conj, mut stab) = (0, 0);
                let mut first_failure = None;
                for _ in 0..samples {
                    let n = rng.gen_range(1..=3);
                    let len = rng.gen_range(0..=6);
                    let b = BraidWord::random(&mut rng, n, len);
                    let glen = rng.gen_range(1..=4);
                    let g = BraidWord::random(&mut rng, n, glen);
                    let sign = rng.gen_bool(0.5);
                    let base = closure_mrt(e, &b).map_err(ise)?.scalar;
                    let c = closure_mrt(e, &markov_conjugate(&b, &g)).map_err(ise)?.scalar == base;
                    let s = closure_mrt(e, &markov_stabilize(&b, sign)).map_err(ise)?.scalar == base;
                    conj += c as usize;
                    stab += s as usize;
                    if (!c || !s) && first_failure.is_none() {
                        first_failure = Some(format!("{b}"));
                    }
                }
                Ok(vec![
                    Check::new(format!("{name}/conjugation"), conj == samples, format!("{conj}/{samples}")),
                    Check::new(
                        format!("{name}/stabilization"),
                        stab == samples,
                        format!("{stab}/{samples}{}", first_failure.map(|f| format!("; first failure {f}")).unwrap_or_default()),
                    ),
                ])
            })
        })
        .collect();
    run_tasks(tasks)
}
