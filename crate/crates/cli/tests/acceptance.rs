//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

#![allow(clippy::needless_range_loop)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ftl_cli::config::RunConfig;
use ftl_cli::problem::Problem;
use ftl_core::comparison::solve_comparison;
use ftl_core::fuzzy::{AlphaGrid, FuzzyNumber, FuzzyVector};
use ftl_core::hukuhara::{delta_h_derivative, FuzzyTrajectory};
use ftl_core::hybrid::{solve, HybridFuzzySystem, StepMode};
use ftl_core::stability::{sample_initial, verify_comparison_bound, Property, ShapeFamily};
use ftl_core::timescale::{RegressiveFn, TimeScale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn random_fuzzy(rng: &mut ChaCha8Rng, grid: &AlphaGrid<f64>) -> FuzzyNumber<f64> {
    let m = grid.len();
    let c: f64 = rng.random_range(-5.0..5.0);
    let w: f64 = rng.random_range(0.0..2.0);
    let mut lo = vec![c - w / 2.0; m];
    let mut hi = vec![c + w / 2.0; m];
    for i in (0..m - 1).rev() {
        lo[i] = lo[i + 1] - rng.random_range(0.0..1.0);
        hi[i] = hi[i + 1] + rng.random_range(0.0..1.0);
    }
    FuzzyNumber::from_cuts(grid.clone(), lo, hi).unwrap()
}

fn metric_properties() -> Check {
    let start = Instant::now();
    let grid = AlphaGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tol = 1e-12;
    for n in 0..1000 {
        let [u, v, w, e] = [0; 4].map(|_| random_fuzzy(&mut rng, &grid));
        let k: f64 = rng.random_range(-4.0..4.0);
        let d = |a: &FuzzyNumber<f64>, b: &FuzzyNumber<f64>| a.dist(b).unwrap();
        ensure!(d(&u, &u) == 0.0 && d(&u, &v) >= 0.0, "identity/positivity, triple {n}");
        ensure!(d(&u, &v) == d(&v, &u), "symmetry, triple {n}");
        ensure!(d(&u, &w) <= d(&u, &v) + d(&v, &w) + tol, "triangle inequality, triple {n}");
        let (uw, vw) = (u.add(&w).unwrap(), v.add(&w).unwrap());
        ensure!(close(d(&uw, &vw), d(&u, &v), tol), "translation invariance, triple {n}");
        ensure!(close(d(&u.scale(k), &v.scale(k)), k.abs() * d(&u, &v), tol), "homogeneity, triple {n}");
        let lhs = d(&u.add(&v).unwrap(), &w.add(&e).unwrap());
        ensure!(lhs <= d(&u, &w) + d(&v, &e) + tol, "sum bound, triple {n}");
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(5), "took {took:?}");
    Ok(format!("1000 triples in {:.2} s", took.as_secs_f64()))
}

fn gh_round_trip() -> Check {
    let grid = AlphaGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tol = 1e-12;
    let mut tested = 0;
    let mut drawn = 0;
    while tested < 1000 {
        drawn += 1;
        let a = random_fuzzy(&mut rng, &grid);
        let b = random_fuzzy(&mut rng, &grid);
        // A third of the pairs are raw draws; the rest have a difference by construction.
        let (u, v) = match rng.random_range(0..3) {
            0 => (b.add(&a).unwrap(), b),
            1 => (a.clone(), a.add(&b.neg()).unwrap()),
            _ => (a, b),
        };
        let Ok(w) = u.gh_difference(&v) else { continue };
        tested += 1;
        for i in 0..grid.len() {
            let (cu, cv, cw) = (u.cut(i), v.cut(i), w.cut(i));
            let first = close(cu.lo, cv.lo + cw.lo, tol) && close(cu.hi, cv.hi + cw.hi, tol);
            let second = close(cv.lo, cu.lo - cw.hi, tol) && close(cv.hi, cu.hi - cw.lo, tol);
            ensure!(first || second, "pair {drawn}, level {i}");
        }
    }
    let interval = FuzzyNumber::crisp_interval(0.0, 1.0, &grid);
    let tri = FuzzyNumber::triangular(0.0, 0.5, 1.0, &grid).unwrap();
    ensure!(interval.gh_difference(&tri).is_err(), "[0,1] gH tri(0,0.5,1) was accepted");
    Ok(format!("1000 existing pairs out of {drawn} draws; [0,1] gH tri(0,0.5,1) rejected"))
}

fn derivative_exactness() -> Check {
    let grid = AlphaGrid::default();
    let tol = 1e-12;
    let mut points = 0;
    for ts in [TimeScale::integer(20).unwrap(), TimeScale::qscale(1.0, 1.5, 12).unwrap()] {
        let ts = Arc::new(ts);
        let fuzzy = FuzzyTrajectory::from_fn(ts.clone(), |t: f64| {
            let c = (0.7 * t).sin();
            Ok(FuzzyVector::scalar(FuzzyNumber::trapezoid(c - 1.0 - 0.1 * t, c, c + 0.2, c + 0.2 + t.sqrt(), &grid)?))
        })
        .unwrap();
        let f = |t: f64| t.powi(2) - 2.0 * (0.3 * t).cos();
        let crisp = FuzzyTrajectory::from_fn(ts.clone(), |t| FuzzyVector::crisp(&[f(t)], &grid)).unwrap();
        for i in 0..ts.len() - 1 {
            let (t, s) = (ts.point(i), ts.point(i + 1));
            let d = delta_h_derivative(&fuzzy, t).unwrap();
            let d = d.derivative().ok_or(format!("no derivative at t = {t}"))?;
            let q = fuzzy.value(i + 1).gh_difference(fuzzy.value(i)).unwrap().scale(1.0 / (s - t));
            ensure!(d.approx_eq(&q, tol), "fuzzy quotient mismatch at t = {t}");

            let want = ts.delta_derivative(f, t).unwrap();
            let oracle = (f(s) - f(t)) / (s - t);
            ensure!(close(want, oracle, tol), "scalar delta derivative at t = {t}");
            let dc = delta_h_derivative(&crisp, t).unwrap();
            let dc = dc.derivative().ok_or(format!("no crisp derivative at t = {t}"))?.component(0);
            ensure!(dc.is_crisp() && close(dc.lower()[0], oracle, tol), "crisp reduction at t = {t}");
            points += 1;
        }
    }
    Ok(format!("{points} right-scattered points on N0 and a q-scale"))
}

fn example_problem(horizon: usize) -> Problem {
    let switches: Vec<String> = (0..horizon).step_by(5).map(|t| t.to_string()).collect();
    let text = format!(
        "[system]\ncatalog = \"example_3_9\"\ntimescale = \"integer({horizon})\"\nswitch_times = [{}]\n[solver]\nhorizon = {horizon}\n",
        switches.join(", ")
    );
    Problem::from_config(RunConfig::parse(&text).unwrap()).unwrap()
}

fn example_reproduction() -> Check {
    let start = Instant::now();
    let p = example_problem(50);
    let v = p.lyapunov().unwrap();
    let comp = p.scalar_system(1.0).unwrap();
    let scalar = solve_comparison(&comp, 50.0).unwrap();
    let base = solve(&p.system, StepMode::Expansive, 50.0).unwrap();
    let vs: Vec<f64> = (0..3).map(|i| v.eval(i as f64, base.trajectory.value(i)).unwrap()).collect();
    ensure!(vs == [1.0, 1.5, 2.25], "V sequence {vs:?}");
    ensure!(scalar.values[..3] == [1.0, 2.0, 3.5], "r sequence {:?}", &scalar.values[..3]);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut min_margin = f64::INFINITY;
    for n in 0..100 {
        let family = [ShapeFamily::Crisp, ShapeFamily::Triangular, ShapeFamily::Trapezoidal][n % 3];
        let u0 = sample_initial(family, &p.grid, 1, 1.0, &mut rng).unwrap();
        ensure!(u0.norm() <= 1.0, "sample {n} has norm {}", u0.norm());
        let sys = p.system.with_initial(u0).unwrap();
        let sol = solve(&sys, StepMode::Expansive, 50.0).unwrap();
        let report = verify_comparison_bound(&v, &sol.trajectory, &scalar, 1e-9).unwrap();
        ensure!(report.precondition_met, "sample {n}: V0 = {} > r0", report.v0);
        ensure!(report.violations.is_empty(), "sample {n}: {} violations", report.violations.len());
        min_margin = report.rows.iter().map(|r| r.margin).fold(min_margin, f64::min);
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(30), "took {took:?}");
    Ok(format!(
        "V = 1, 1.5, 2.25; r = 1, 2, 3.5; 100 initial states, 0 violations, min margin {min_margin:.3e}, {:.2} s",
        took.as_secs_f64()
    ))
}

/// `Δu = A_k u + c_k` on `{0, …, n}` with the crisp segment index as switch value.
fn linear_system(n: usize, switches: &[f64], mats: Vec<(Vec<Vec<f64>>, Vec<f64>)>, x0: &[f64]) -> HybridFuzzySystem<f64> {
    let grid = AlphaGrid::default();
    let ts = Arc::new(TimeScale::integer(n).unwrap());
    let dim = x0.len();
    let switch = move |k: usize, _t: f64, u: &FuzzyVector<f64>| FuzzyVector::crisp(&vec![k as f64; dim], u.grid());
    let rhs = move |_t: f64, u: &FuzzyVector<f64>, lam: &FuzzyVector<f64>| {
        let (a, c) = &mats[lam.component(0).lower()[0] as usize];
        let rows = (0..u.dim())
            .map(|j| {
                let mut acc = FuzzyNumber::crisp(c[j], u.grid());
                for (i, comp) in u.components().iter().enumerate() {
                    acc = acc.add(&comp.scale(a[j][i]))?;
                }
                Ok(acc)
            })
            .collect::<ftl_core::Result<Vec<_>>>()?;
        FuzzyVector::new(rows)
    };
    let u0 = FuzzyVector::crisp(x0, &grid).unwrap();
    HybridFuzzySystem::new(ts, switches, Arc::new(rhs), Arc::new(switch), 1e12, u0).unwrap()
}

fn crisp_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = 1e-12;
    for case in 0..50 {
        let n = rng.random_range(6..25);
        let dim = rng.random_range(1..=2);
        let n_switch = rng.random_range(1..=3);
        let mut switches = vec![0.0];
        while switches.len() < n_switch + 1 {
            let s = rng.random_range(1..n) as f64;
            if !switches.contains(&s) {
                switches.push(s);
            }
        }
        switches.sort_by(f64::total_cmp);
        let mats: Vec<(Vec<Vec<f64>>, Vec<f64>)> = (0..switches.len())
            .map(|_| {
                let a = (0..dim).map(|_| (0..dim).map(|_| rng.random_range(-0.8..0.4)).collect()).collect();
                let c = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                (a, c)
            })
            .collect();
        let x0: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let sys = linear_system(n, &switches, mats.clone(), &x0);
        let sol = solve(&sys, StepMode::Expansive, n as f64).unwrap();

        let mut x = x0.clone();
        for t in 0..=n {
            let u = sol.trajectory.value(t);
            for (j, xj) in x.iter().enumerate() {
                let c = u.component(j);
                ensure!(c.is_crisp(), "case {case}: fuzzy state at t = {t}");
                ensure!(close(c.lower()[0], *xj, tol), "case {case}: t = {t}, {} vs {xj}", c.lower()[0]);
            }
            let k = switches.iter().rposition(|&s| s <= t as f64).unwrap();
            let (a, c) = &mats[k];
            x = (0..dim)
                .map(|j| x[j] + (0..dim).map(|i| a[j][i] * x[i]).sum::<f64>() + c[j])
                .collect();
        }
    }
    Ok("50 random linear systems, 1 to 3 switches, dimension 1 or 2".into())
}

fn run_cli(args: &[&str], out: &Path) -> (i32, Value) {
    let mut full = vec!["ftl"];
    full.extend_from_slice(args);
    full.extend(["--out", out.to_str().unwrap()]);
    let code = match ftl_cli::run(full, &mut std::io::sink()) {
        Ok(c) => c,
        Err(f) => f.code,
    };
    let verdict = std::fs::read_to_string(out.join("verdict.json"))
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or(Value::Null);
    (code, verdict)
}

fn stability_soundness() -> Check {
    let dir = TempDir::new().unwrap();
    let (code, v) = run_cli(&["stability", "--system", "crisp_contraction", "--samples", "200"], dir.path());
    ensure!(code == 0, "crisp contraction exit code {code}");
    for p in ["practical", "quasi", "strong", "asymptotic"] {
        let status = &v["direct"][p]["status"];
        ensure!(status == "holds-on-samples", "crisp contraction {p}: {status}");
    }
    ensure!(v["query"]["B"] == 0.1 && v["query"]["T0"] == 4.0, "unexpected query {}", v["query"]);

    // The literal (lambda = 1, A = 1) query fails the 0 < lambda < A gate.
    let literal = TempDir::new().unwrap();
    let cfg = literal.path().join("literal.toml");
    std::fs::write(&cfg, "[system]\ncatalog = \"crisp_contraction\"\n[stability]\nA = 1\n").unwrap();
    let (literal_code, _) = run_cli(&["stability", "--config", cfg.to_str().unwrap()], literal.path());

    let dir = TempDir::new().unwrap();
    let (code, v) = run_cli(&["stability", "--system", "example_3_9", "--horizon", "10"], dir.path());
    ensure!(code == 1, "example exit code {code}");
    let w = &v["direct"]["practical"]["witness"];
    let (t, d) = (w["t"].as_f64().unwrap_or(f64::NAN), w["d_inf"].as_f64().unwrap_or(f64::NAN));
    ensure!(t == 2.0 && (d - 2.25).abs() < 1e-9, "witness at t = {t}, D = {d}");
    Ok(format!(
        "crisp contraction (lambda 1, A 1.5): all four hold, exit 0; example (lambda 1, A 2): witness t = 2, D = {d:.12}, exit 1; literal A = 1 exits {literal_code}"
    ))
}

fn catalog_consistency() -> Check {
    let mut runs = 0;
    for name in ftl_cli::catalog::NAMES {
        for mode in ["expansive", "contractive"] {
            for seed in ["0", "1", "2"] {
                let dir = TempDir::new().unwrap();
                let (code, v) = run_cli(
                    &["stability", "--system", name, "--mode", mode, "--seed", seed, "--samples", "100"],
                    dir.path(),
                );
                ensure!(v != Value::Null, "{name}/{mode}/{seed}: no verdict (exit {code})");
                runs += 1;
                let hyp = v["hypotheses"]["passed"] == true;
                for p in Property::ALL {
                    let key = serde_json::to_value(p).unwrap();
                    let key = key.as_str().unwrap();
                    let comparison_holds = v["comparison"][key]["status"] == "holds-on-samples";
                    let direct_fails = v["direct"][key]["status"] == "violated";
                    ensure!(
                        !(hyp && comparison_holds && direct_fails),
                        "{name}/{mode}/seed {seed}: {key} implied but violated"
                    );
                }
                ensure!(
                    v["inconsistencies"].as_array().is_some_and(|a| a.is_empty()),
                    "{name}/{mode}/seed {seed}: inconsistencies {}",
                    v["inconsistencies"]
                );
            }
        }
    }
    Ok(format!("{runs} catalog runs, no implied property violated"))
}

fn regressive_algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tol = 1e-12;
    let scales = [
        TimeScale::integer(15).unwrap(),
        TimeScale::qscale(1.0, 1.3, 15).unwrap(),
        TimeScale::intervals(&[(0.0, 1.0), (2.0, 3.0), (4.5, 4.5)], 0.25).unwrap(),
    ];
    for ts in &scales {
        let n = ts.len() - 1;
        let mus: Vec<f64> = (0..n).map(|i| ts.mu_at(i).unwrap()).collect();
        let one = RegressiveFn::constant(ts, 1.0).unwrap();
        let neg_one = one.ominus().unwrap();
        for i in 0..n {
            ensure!(close(neg_one.values()[i], -1.0 / (1.0 + mus[i]), tol), "ominus 1 at {}", ts.point(i));
        }
        for pair in 0..100 {
            // 1 + mu p > 0 keeps both functions regressive.
            let mut draw = || -> Vec<f64> { mus.iter().map(|mu| rng.random_range(-0.95..3.0) / mu).collect() };
            let p = RegressiveFn::from_values(ts, draw()).unwrap();
            let q = RegressiveFn::from_values(ts, draw()).unwrap();
            let sum = p.circle_plus(&q).unwrap();
            let zero = p.circle_minus(&p).unwrap();
            for i in 0..n {
                let (a, b) = (p.values()[i], q.values()[i]);
                ensure!(close(sum.values()[i], a + b + mus[i] * a * b, tol), "pair {pair}: p + q + mu p q at {}", ts.point(i));
                ensure!(zero.values()[i].abs() <= tol, "pair {pair}: p - p at {}", ts.point(i));
            }
        }
    }
    Ok("100 pairs on N0, a q-scale and a union of intervals".into())
}

fn determinism() -> Check {
    let cfg_dir = TempDir::new().unwrap();
    let cfg = cfg_dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[system]\ncatalog = \"switched_pair\"\n[sampling]\ncount = 150\nseed = 42\nfamily = \"mixed\"\n",
    )
    .unwrap();
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["stability", "--config", cfg.to_str().unwrap()];
    let (ca, _) = run_cli(&args, a.path());
    let (cb, _) = run_cli(&args, b.path());
    let va = std::fs::read(a.path().join("verdict.json")).map_err(|e| e.to_string())?;
    let vb = std::fs::read(b.path().join("verdict.json")).map_err(|e| e.to_string())?;
    ensure!(ca == cb, "exit codes {ca} vs {cb}");
    ensure!(va == vb, "verdict.json differs between runs");
    Ok(format!("two runs, {} identical bytes", va.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("metric axioms and translation invariance", metric_properties),
        ("gH-difference round trip", gh_round_trip),
        ("delta-Hukuhara derivative at scattered points", derivative_exactness),
        ("switched example and comparison bound", example_reproduction),
        ("crisp systems match real Euler", crisp_equivalence),
        ("stability checker soundness", stability_soundness),
        ("catalog consistency", catalog_consistency),
        ("regressive algebra", regressive_algebra),
        ("deterministic verdict", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
