use std::fmt;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, Context};
use ftl_core::comparison::solve_comparison;
use ftl_core::dsl::{self, eval_fuzzy, eval_fuzzy_vector, eval_scalar, Env, Slot};
use ftl_core::fuzzy::{AlphaGrid, FuzzyVector, DEFAULT_LEVELS};
use ftl_core::hukuhara::{delta_h_derivative_at, DENSE_AGREEMENT_RTOL};
use ftl_core::hybrid::{solve, HybridSolution, StepMode};
use ftl_core::io::{write_comparison_csv, write_derivative_csv, write_trajectory_csv};
use ftl_core::stability::{
    check_practical_stability, verify_comparison_bound, Outcome, Property, Verdict, HYPOTHESIS_TOL,
};
use ftl_core::timescale::{TimeScale, TimeScaleSpec};
use ftl_core::Error;
use serde::Serialize;

use crate::config::RunConfig;
use crate::problem::Problem;
use crate::{EvalArgs, RunArgs};

pub const META_SCHEMA_VERSION: u32 = 1;

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    /// Invalid input or a failed hypothesis gate (exit 2).
    pub fn config(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }

    /// The run itself failed (exit 1).
    pub fn run(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

fn io_fail(e: std::io::Error) -> Failure {
    Failure::run(e)
}

#[derive(Serialize)]
struct Meta<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    mode: StepMode,
    horizon: f64,
    alpha_levels: usize,
    seed: Option<u64>,
    files: Vec<&'a str>,
    config: RunConfig,
}

fn meta_json(p: &Problem, command: &str, seed: Option<u64>, files: &[&str]) -> Result<Vec<u8>, Failure> {
    // The output directory is not part of the echo so that runs into
    // different directories produce identical metadata.
    let mut config = p.config.clone();
    config.output.dir = None;
    let meta = Meta {
        schema_version: META_SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        mode: p.mode,
        horizon: p.horizon,
        alpha_levels: p.grid.len(),
        seed,
        files: files.to_vec(),
        config,
    };
    to_json(&meta)
}

fn to_json<S: Serialize>(value: &S) -> Result<Vec<u8>, Failure> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(Failure::run)?;
    buf.push(b'\n');
    Ok(buf)
}

fn write_files(dir: &Path, files: &[(&str, Vec<u8>)]) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(Failure::run)?;
    for (name, bytes) in files {
        let path = dir.join(name);
        std::fs::write(&path, bytes)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::run)?;
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn prepare(args: &RunArgs) -> Result<Problem, Failure> {
    let file = match &args.config {
        Some(path) => RunConfig::load(path).map_err(Failure::config)?,
        None => RunConfig::default(),
    };
    let merged = file.overlay(args.to_config());
    if merged.system.catalog.is_none() && merged.system.rhs.is_none() {
        return Err(Failure::config(anyhow!(
            "no system given: pass --system NAME or a config with a [system] table"
        )));
    }
    let p = Problem::from_config(merged).map_err(Failure::config)?;
    log::debug!("time scale {} with {} points", p.ts.spec(), p.ts.len());
    Ok(p)
}

fn simulate_problem(p: &Problem) -> Result<HybridSolution<f64>, Failure> {
    let sol = solve(&p.system, p.mode, p.horizon).map_err(Failure::run)?;
    if let Some(i) = sol.left_domain_at {
        log::warn!(
            "trajectory leaves S(rho) at t = {} (rho = {})",
            sol.trajectory.times()[i],
            p.system.rho()
        );
    }
    Ok(sol)
}

fn trajectory_csv(sol: &HybridSolution<f64>) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &sol.trajectory, &sol.segments).map_err(Failure::run)?;
    Ok(buf)
}

pub fn simulate(args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = prepare(args)?;
    let sol = simulate_problem(&p)?;
    let files = [
        ("trajectory.csv", trajectory_csv(&sol)?),
        ("meta.json", meta_json(&p, "simulate", None, &["trajectory.csv"])?),
    ];
    write_files(&p.output_dir(), &files)?;
    writeln!(
        out,
        "simulate: {} points on [{}, {}], {} mode, {} segment(s)",
        sol.trajectory.len(),
        p.ts.first(),
        p.horizon,
        p.mode,
        p.system.switch_indices().len()
    )
    .map_err(io_fail)?;
    Ok(0)
}

pub fn compare(args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = prepare(args)?;
    let v = p.lyapunov().map_err(Failure::config)?;
    let r0 = p.r0().map_err(Failure::config)?;
    let comp = p.scalar_system(r0).map_err(Failure::config)?;
    let sol = simulate_problem(&p)?;
    let scalar = solve_comparison(&comp, p.horizon).map_err(Failure::run)?;
    let report = verify_comparison_bound(&v, &sol.trajectory, &scalar, HYPOTHESIS_TOL).map_err(Failure::run)?;
    if !report.precondition_met {
        return Err(Failure::config(anyhow!(
            "hypothesis gate: V(t0, u0) = {} exceeds r0 = {}",
            report.v0,
            report.r0
        )));
    }
    let mut comparison = Vec::new();
    write_comparison_csv(&mut comparison, &report.rows).map_err(Failure::run)?;
    let names = ["trajectory.csv", "comparison.csv"];
    let files = [
        (names[0], trajectory_csv(&sol)?),
        (names[1], comparison),
        ("meta.json", meta_json(&p, "compare", None, &names)?),
    ];
    write_files(&p.output_dir(), &files)?;
    let min_margin = report.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    writeln!(
        out,
        "compare: {} points, min margin r - V = {min_margin}, {} violation(s){}",
        report.rows.len(),
        report.violations.len(),
        if report.approximate { " (comparison solution approximate)" } else { "" }
    )
    .map_err(io_fail)?;
    for &i in &report.violations {
        let row = &report.rows[i];
        writeln!(out, "  V = {} > r = {} at t = {}", row.v, row.r, row.t).map_err(io_fail)?;
    }
    Ok(if report.violations.is_empty() { 0 } else { 1 })
}

fn status<W>(o: &Outcome<W>) -> &'static str {
    match o {
        Outcome::HoldsOnSamples => "holds-on-samples",
        Outcome::Violated { .. } => "violated",
        Outcome::NotTested { .. } => "not-tested",
    }
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::Practical => "practical",
        Property::Quasi => "quasi",
        Property::Strong => "strong",
        Property::Asymptotic => "asymptotic",
    }
}

/// Runs the stability check and returns the verdict without writing anything.
pub fn stability_verdict(p: &Problem) -> Result<Verdict, Failure> {
    let v = p.lyapunov().map_err(Failure::config)?;
    let kpair = p.class_k().map_err(Failure::config)?;
    let q = p.query().map_err(Failure::config)?;
    let comp = p.scalar_system(0.0).map_err(Failure::config)?;
    check_practical_stability(&p.system, &comp, &v, &kpair, &q, p.mode, p.horizon).map_err(|e| match e {
        Error::InvalidQuery(_) | Error::Config(_) => Failure::config(e),
        _ => Failure::run(e),
    })
}

pub fn stability(args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = prepare(args)?;
    let verdict = stability_verdict(&p)?;
    let files = [
        ("verdict.json", to_json(&verdict)?),
        (
            "meta.json",
            meta_json(&p, "stability", Some(verdict.query.sampling.seed), &["verdict.json"])?,
        ),
    ];
    write_files(&p.output_dir(), &files)?;
    let mut lines = Vec::new();
    for g in verdict.gate.iter().filter(|g| !g.passed) {
        lines.push(format!("gate failed: {} ({})", g.name, g.detail));
    }
    if let Some(h) = &verdict.hypotheses {
        lines.push(format!("hypotheses: {}", if h.passed { "passed" } else { "failed" }));
    }
    for prop in Property::ALL {
        lines.push(format!(
            "{:<10} direct: {:<16} comparison: {}",
            property_name(prop),
            status(verdict.direct.get(prop)),
            status(verdict.comparison.get(prop))
        ));
        if let Outcome::Violated { witness } = verdict.direct.get(prop) {
            lines.push(format!(
                "           witness: sample {} at t = {}, D = {} >= {}",
                witness.sample, witness.t, witness.d_inf, witness.bound
            ));
        }
    }
    for inc in &verdict.inconsistencies {
        lines.push(format!(
            "inconsistency: {} implied but violated by sample {}",
            property_name(inc.property),
            inc.witness.sample
        ));
    }
    if !verdict.solver_failures.is_empty() {
        lines.push(format!("{} sample(s) failed to solve", verdict.solver_failures.len()));
    }
    for line in lines {
        writeln!(out, "{line}").map_err(io_fail)?;
    }
    Ok(verdict.exit_code())
}

pub fn deriv(args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = prepare(args)?;
    let sol = simulate_problem(&p)?;
    let traj = &sol.trajectory;
    let mut rows: Vec<(f64, Option<FuzzyVector<f64>>)> = Vec::with_capacity(traj.len());
    for i in 0..traj.len().saturating_sub(1) {
        let d = delta_h_derivative_at(traj, i, DENSE_AGREEMENT_RTOL).map_err(Failure::run)?;
        rows.push((traj.times()[i], d.into_derivative()));
    }
    let mut csv = Vec::new();
    write_derivative_csv(&mut csv, &rows).map_err(Failure::run)?;
    let files = [
        ("derivative.csv", csv),
        ("meta.json", meta_json(&p, "deriv", None, &["derivative.csv"])?),
    ];
    write_files(&p.output_dir(), &files)?;
    let missing = rows.iter().filter(|r| r.1.is_none()).count();
    writeln!(out, "deriv: {} points, {missing} without a derivative", rows.len()).map_err(io_fail)?;
    Ok(0)
}

fn eval_timescale(src: &str, t: Option<f64>) -> anyhow::Result<TimeScale<f64>> {
    if src.trim() == "integer" {
        let n = t.map_or(1.0, |t| t.max(0.0).ceil() + 1.0) as usize;
        return Ok(TimeScale::integer(n)?);
    }
    let spec: TimeScaleSpec = src.parse()?;
    Ok(TimeScale::from_spec(&spec)?)
}

/// `error` followed by the source line and a caret under the column.
fn syntax_report(src: &str, err: &Error) -> anyhow::Error {
    match err {
        Error::Syntax { line, column, .. } => {
            let text = src.lines().nth(line.saturating_sub(1)).unwrap_or("");
            anyhow!("{err}\n  {text}\n  {}^", " ".repeat(column.saturating_sub(1)))
        }
        _ => anyhow!("{err}"),
    }
}

fn syntax_column(err: &Error) -> (usize, usize) {
    match err {
        Error::Syntax { line, column, .. } => (*line, *column),
        _ => (0, 0),
    }
}

pub fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if args.r.is_some() && args.w.is_some() && args.r != args.w {
        return Err(Failure::config(anyhow!("--r and --w name the same variable")));
    }
    if args.v.is_some() && args.wk.is_some() && args.v != args.wk {
        return Err(Failure::config(anyhow!("--v and --wk name the same variable")));
    }
    let ts = match &args.timescale {
        Some(s) => Some(eval_timescale(s, args.t).context("--timescale").map_err(Failure::config)?),
        None => None,
    };
    let grid = AlphaGrid::uniform(args.alpha_levels.unwrap_or(DEFAULT_LEVELS))
        .context("--alpha-levels")
        .map_err(Failure::config)?;
    let constant = |flag: &str, srcs: &[String]| -> Result<Option<FuzzyVector<f64>>, Failure> {
        if srcs.is_empty() {
            return Ok(None);
        }
        let exprs = srcs
            .iter()
            .map(|s| dsl::parse_fuzzy_in(s, Slot::CONSTANT).map_err(|e| syntax_report(s, &e)))
            .collect::<anyhow::Result<Vec<_>>>()
            .with_context(|| format!("--{flag}"))
            .map_err(Failure::config)?;
        let env = Env {
            grid: Some(&grid),
            ..Env::default()
        };
        eval_fuzzy_vector(&exprs, &env)
            .with_context(|| format!("--{flag}"))
            .map(Some)
            .map_err(Failure::config)
    };
    let u = constant("u", &args.u)?;
    let u_k = constant("u-k", &args.u_k)?;
    let lam = constant("lam", &args.lam)?;
    let env = Env {
        ts: ts.as_ref(),
        grid: Some(&grid),
        t: args.t,
        r: args.r.or(args.w),
        v: args.v.or(args.wk),
        d: args.d,
        x: args.x,
        k: args.k,
        u: u.as_ref(),
        u_k: u_k.as_ref(),
        lam: lam.as_ref(),
        component: 0,
    };
    let src = args.expr.as_str();
    match dsl::parse_scalar(src) {
        Ok(e) => {
            let value = eval_scalar(&e, &env).map_err(Failure::config)?;
            writeln!(out, "{value}").map_err(io_fail)?;
        }
        Err(scalar_err) => match dsl::parse_fuzzy(src) {
            Ok(e) => {
                let value = eval_fuzzy(&e, &env).map_err(Failure::config)?;
                writeln!(out, "alpha,lower,upper").map_err(io_fail)?;
                for (alpha, cut) in value.levels() {
                    writeln!(out, "{alpha},{},{}", cut.lo, cut.hi).map_err(io_fail)?;
                }
            }
            Err(fuzzy_err) => {
                // Report whichever reading got further into the input.
                let err = if syntax_column(&fuzzy_err) > syntax_column(&scalar_err) {
                    fuzzy_err
                } else {
                    scalar_err
                };
                return Err(Failure::config(syntax_report(src, &err)));
            }
        },
    }
    Ok(0)
}
