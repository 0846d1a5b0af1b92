//! Command-line front end.
//!
//! Every command prints a plain table by default and a JSON document with
//! `--json`; rationals are always exact (`p/q` strings in JSON). Exit code 0
//! is success, 1 a domain error, 2 a failed verification.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::correspondence::{to_parabolic, to_stack};
use crate::error::{Error, Result};
use crate::inertia_rr::{chi_par_three_way, DEFAULT_TOL};
use crate::local_model::{
    cokernel_free_check, decompose_shifts, invariant_part_rank, GradedModule, GradedModuleRecord,
};
use crate::moduli::{
    enumerate_finite_lines, is_finite, is_semistable, max_line_sub_degree, slope, verify_structure_theorem,
    witness_polynomials,
};
use crate::parabolic::{deg_par, deg_par_hilbert, tensor_par, ParBundle};
use crate::rational::{format, format_strict, Q};
use crate::root_stack::{deg_stack, deg_stack_bundle, tensor_stack_bundle, StackBundle};
use crate::session::{par_record, read_structured, stack_record, Bundle, Session};
use crate::{correspondence, selftest};

pub const TOL_ENV: &str = "ORBIROOT_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "orbiroot",
    version,
    about = "Parabolic bundles and bundles on root stacks, exactly"
)]
pub struct Cli {
    /// Session file (JSON, or TOML with a `.toml` extension).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Emit a JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Tolerance for root-of-unity evaluations (default 1e-9, or $ORBIROOT_TOL).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parabolic degree, stack degree, and the Hilbert-polynomial degree.
    Degree {
        name: String,
    },
    /// Parabolic Euler characteristic.
    Chi {
        name: String,
        #[arg(long, value_enum, default_value_t = ChiMethod::All)]
        method: ChiMethod,
    },
    /// Tensor product on both sides of the correspondence.
    Tensor {
        a: String,
        b: String,
    },
    /// Apply the correspondence functors.
    Correspond {
        #[arg(value_enum)]
        direction: Direction,
        name: String,
    },
    Semistable {
        name: String,
    },
    CheckFinite {
        name: String,
    },
    /// Search for P ≠ Q with P(F) ≅ Q(F).
    Witness {
        name: String,
        #[arg(long)]
        bound: i64,
    },
    /// List all finite line objects for the session config.
    ClassifyFinite,
    /// Decompose a graded module over the local model ring.
    LocalDecompose {
        module: PathBuf,
    },
    /// Run the randomised cross-checks.
    Selftest {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChiMethod {
    Parabolic,
    Pushforward,
    Inertia,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Stack bundle to parabolic bundle.
    F,
    /// Parabolic bundle to stack bundle.
    G,
    Roundtrip,
}

/// Command output: a JSON document plus its table rendering.
pub struct Output {
    pub json: Value,
    pub table: Vec<(String, String)>,
}

impl Output {
    fn new() -> Self {
        Output {
            json: json!({}),
            table: Vec::new(),
        }
    }

    fn row(mut self, key: &str, text: impl Into<String>, value: Value) -> Self {
        self.table.push((key.to_string(), text.into()));
        self.json[key] = value;
        self
    }

    pub fn render_table(&self) -> String {
        let width = self.table.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        self.table.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

fn qj(x: Q) -> Value {
    Value::String(format_strict(x))
}

fn verification(msg: String) -> Error {
    Error::Inconsistency(msg)
}

/// Parses `argv` (including the program name), runs, prints, and returns
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.render_table());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_verification_failure() {
                2
            } else {
                1
            }
        }
    }
}

pub fn tolerance(cli: &Cli) -> Result<f64> {
    if let Some(t) = cli.tol {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("{TOL_ENV} must be a number, got `{s}`"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn session(cli: &Cli) -> Result<Session> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Domain("this command needs --config <session file>".into()))?;
    Session::load(path)
}

fn par_json(e: &ParBundle) -> Value {
    serde_json::to_value(par_record(e)).expect("serializable")
}

fn stack_json(f: &StackBundle) -> Value {
    serde_json::to_value(stack_record(f)).expect("serializable")
}

pub fn execute(cli: &Cli) -> Result<Output> {
    let tol = tolerance(cli)?;
    match &cli.command {
        Command::Degree { name } => {
            let s = session(cli)?;
            let cfg = &s.config;
            let b = s.bundle(name)?;
            let e = b.as_parabolic(cfg)?;
            let f = b.as_stack(cfg)?;
            let dp = deg_par(&e);
            let ds = deg_stack_bundle(cfg, &f);
            let dh = deg_par_hilbert(cfg, &e)?;
            if dp != ds || dp != dh {
                return Err(verification(format!("degrees disagree: {dp} / {ds} / {dh}")));
            }
            Ok(Output::new()
                .row("deg_par", format(dp), qj(dp))
                .row("deg_stack", format(ds), qj(ds))
                .row("deg_hilbert", format(dh), qj(dh)))
        }
        Command::Chi { name, method } => {
            let s = session(cli)?;
            let e = s.bundle(name)?.as_parabolic(&s.config)?;
            let t = chi_par_three_way(&s.config, &e, tol)?;
            if !t.agree() {
                return Err(verification(format!("Euler characteristics disagree: {t:?}")));
            }
            let mut out = Output::new();
            let rows = [
                (ChiMethod::Parabolic, "parabolic", t.parabolic),
                (ChiMethod::Pushforward, "pushforward", t.pushforward),
                (ChiMethod::Inertia, "inertia", t.inertia),
            ];
            for (m, key, v) in rows {
                if *method == m || *method == ChiMethod::All {
                    out = out.row(key, format(v), qj(v));
                }
            }
            Ok(out)
        }
        Command::Tensor { a, b } => {
            let s = session(cli)?;
            let cfg = &s.config;
            let (ba, bb) = (s.bundle(a)?, s.bundle(b)?);
            let par = tensor_par(cfg, &ba.as_parabolic(cfg)?, &bb.as_parabolic(cfg)?)?;
            let stack = tensor_stack_bundle(cfg, &ba.as_stack(cfg)?, &bb.as_stack(cfg)?)?;
            if to_stack(cfg, &par)? != stack {
                return Err(verification(format!(
                    "tensor products do not correspond: {par} vs {stack}"
                )));
            }
            Ok(Output::new()
                .row("parabolic", par.to_string(), par_json(&par))
                .row("stack", stack.to_string(), stack_json(&stack))
                .row("deg_par", format(deg_par(&par)), qj(deg_par(&par))))
        }
        Command::Correspond { direction, name } => {
            let s = session(cli)?;
            let cfg = &s.config;
            match (direction, s.bundle(name)?) {
                (Direction::F, Bundle::Stack(f)) => {
                    let e = to_parabolic(cfg, f)?;
                    Ok(Output::new().row("parabolic", e.to_string(), par_json(&e)))
                }
                (Direction::G, Bundle::Parabolic(e)) => {
                    let f = to_stack(cfg, e)?;
                    Ok(Output::new().row("stack", f.to_string(), stack_json(&f)))
                }
                (Direction::F, Bundle::Parabolic(_)) => {
                    Err(Error::Domain(format!("`{name}` is parabolic; F takes a stack bundle")))
                }
                (Direction::G, Bundle::Stack(_)) => Err(Error::Domain(format!(
                    "`{name}` is a stack bundle; G takes a parabolic bundle"
                ))),
                (Direction::Roundtrip, b) => {
                    let e = b.as_parabolic(cfg)?;
                    let f = b.as_stack(cfg)?;
                    let via_coend: StackBundle = e
                        .summands()
                        .iter()
                        .map(|l| correspondence::coend_evaluate(cfg, l))
                        .collect();
                    let ok = to_stack(cfg, &to_parabolic(cfg, &f)?)? == f
                        && to_parabolic(cfg, &to_stack(cfg, &e)?)? == e
                        && via_coend == f;
                    if !ok {
                        return Err(verification(format!("round trip failed for `{name}`")));
                    }
                    Ok(Output::new()
                        .row("parabolic", e.to_string(), par_json(&e))
                        .row("stack", f.to_string(), stack_json(&f))
                        .row("roundtrip", "ok", Value::Bool(true)))
                }
            }
        }
        Command::Semistable { name } => {
            let s = session(cli)?;
            let cfg = &s.config;
            let f = s.bundle(name)?.as_stack(cfg)?;
            let mu = slope(cfg, &f)?;
            let ss = is_semistable(cfg, &f)?;
            let max = max_line_sub_degree(cfg, &f)?;
            Ok(Output::new()
                .row("slope", format(mu), qj(mu))
                .row("max_line_sub_degree", format(max), qj(max))
                .row("semistable", ss.to_string(), Value::Bool(ss)))
        }
        Command::CheckFinite { name } => {
            let s = session(cli)?;
            let cfg = &s.config;
            let f = s.bundle(name)?.as_stack(cfg)?;
            let fin = is_finite(cfg, &f)?;
            let degrees: Vec<Q> = f.summands().iter().map(|k| deg_stack(cfg, k)).collect();
            let text: Vec<String> = degrees.iter().map(|&d| format(d)).collect();
            Ok(Output::new()
                .row(
                    "summand_degrees",
                    text.join(" "),
                    Value::Array(degrees.into_iter().map(qj).collect()),
                )
                .row("finite", fin.to_string(), Value::Bool(fin)))
        }
        Command::Witness { name, bound } => {
            let s = session(cli)?;
            let cfg = &s.config;
            let f = s.bundle(name)?.as_stack(cfg)?;
            match witness_polynomials(cfg, &f, *bound)? {
                None => Ok(Output::new().row("witness", "none", Value::Null)),
                Some(w) => {
                    let poly = |c: &[num_bigint::BigUint]| -> String {
                        let terms: Vec<String> = c
                            .iter()
                            .enumerate()
                            .filter(|(_, x)| **x != num_bigint::BigUint::from(0u32))
                            .map(|(n, x)| match n {
                                0 => x.to_string(),
                                1 => format!("{x}*X"),
                                _ => format!("{x}*X^{n}"),
                            })
                            .collect();
                        if terms.is_empty() {
                            "0".into()
                        } else {
                            terms.join(" + ")
                        }
                    };
                    let coeffs = |c: &[num_bigint::BigUint]| {
                        Value::Array(c.iter().map(|x| Value::String(x.to_string())).collect())
                    };
                    Ok(Output::new()
                        .row("P", poly(&w.p), coeffs(&w.p))
                        .row("Q", poly(&w.q), coeffs(&w.q))
                        .row("classes", w.lhs.len().to_string(), json!(w.lhs.len())))
                }
            }
        }
        Command::ClassifyFinite => {
            let s = session(cli)?;
            let cfg = &s.config;
            let lines = enumerate_finite_lines(cfg);
            let mut out = Output::new();
            let rows: Vec<Value> = lines
                .iter()
                .map(|k| {
                    let e = correspondence::to_parabolic_line(cfg, k);
                    json!({
                        "d": k.d,
                        "res": k.res,
                        "weights": e.weights.iter().map(|&w| format_strict(w)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            for (i, k) in lines.iter().enumerate() {
                out.table.push((
                    format!("{}", i + 1),
                    format!("{k}  ~  {}", correspondence::to_parabolic_line(cfg, k)),
                ));
            }
            out.json["lines"] = Value::Array(rows);
            out = out.row("count", lines.len().to_string(), json!(lines.len()));
            if cfg.num_points() >= 1 {
                let rep = verify_structure_theorem(cfg)?;
                let bound = format!(
                    "{} < d ≤ 0 (min {}, max {})",
                    -(cfg.num_points() as i64),
                    rep.min_degree,
                    rep.max_degree
                );
                out = out.row(
                    "degree_bounds",
                    bound,
                    json!({"min": rep.min_degree, "max": rep.max_degree}),
                );
            }
            Ok(out)
        }
        Command::LocalDecompose { module } => {
            let rec: GradedModuleRecord = read_structured(module)?;
            let m = GradedModule::from_record(&rec)?;
            let shifts = decompose_shifts(&m)?;
            let inv = invariant_part_rank(&m)?;
            let r = m.root_index() as i64;
            let mut all_free = true;
            for l in 0..r {
                for l2 in l..l + r {
                    all_free &= cokernel_free_check(&m, l, l2)?;
                }
            }
            if !all_free {
                return Err(verification(
                    "a cokernel of the invariant filtration is not free".into(),
                ));
            }
            let text: Vec<String> = shifts.iter().map(|(j, n)| format!("A[{j}]^{n}")).collect();
            Ok(Output::new()
                .row(
                    "shifts",
                    text.join(" + "),
                    json!(shifts
                        .iter()
                        .map(|(j, n)| (j.to_string(), json!(*n)))
                        .collect::<serde_json::Map<_, _>>()),
                )
                .row("invariant_rank", inv.rank.to_string(), json!(inv.rank))
                .row("invariant_profile", format!("{:?}", inv.profile), json!(inv.profile))
                .row("cokernels_free", all_free.to_string(), Value::Bool(all_free)))
        }
        Command::Selftest { samples, seed } => {
            let report = selftest::run(*samples, *seed, tol)?;
            if !report.passed() {
                let failed: Vec<String> = report
                    .checks
                    .iter()
                    .filter(|c| c.failures > 0)
                    .map(|c| {
                        format!(
                            "{} ({} failures, first: {})",
                            c.name,
                            c.failures,
                            c.first_failure.clone().unwrap_or_default()
                        )
                    })
                    .collect();
                return Err(verification(format!("selftest failed: {}", failed.join("; "))));
            }
            let mut out = Output::new();
            for c in &report.checks {
                out.table.push((
                    c.name.to_string(),
                    format!("{} cases, {} failures", c.cases, c.failures),
                ));
            }
            out.json = serde_json::to_value(&report).expect("serializable");
            Ok(out)
        }
    }
}
