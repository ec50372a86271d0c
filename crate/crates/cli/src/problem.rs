//! Turns a merged [`RunConfig`] into solver inputs.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use ftl_core::comparison::ScalarHybridSystem;
use ftl_core::dsl::{self, eval_fuzzy_vector, eval_scalar, Env, FuzzyExpr, ScalarExpr, Slot};
use ftl_core::fuzzy::{AlphaGrid, FuzzyVector, DEFAULT_LEVELS};
use ftl_core::hybrid::{HybridFuzzySystem, RhsFn, StepMode, SwitchFn};
use ftl_core::stability::{ClassKPair, LyapunovFn, Sampling, ShapeFamily, StabilityQuery};
use ftl_core::timescale::{TimeScale, TimeScaleSpec};

use crate::catalog;
use crate::config::RunConfig;

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_OUT_DIR: &str = "out";

/// A validated run: the merged config with defaults filled in, plus the
/// objects every command needs.
pub struct Problem {
    pub config: RunConfig,
    pub grid: AlphaGrid<f64>,
    pub ts: Arc<TimeScale<f64>>,
    pub system: HybridFuzzySystem<f64>,
    pub mode: StepMode,
    pub horizon: f64,
}

fn scalar_in(src: &str, slot: Slot, key: &str) -> Result<ScalarExpr> {
    dsl::parse_scalar_in(src, slot).with_context(|| format!("{key} = \"{src}\""))
}

fn fuzzy_in(src: &str, slot: Slot, key: &str) -> Result<FuzzyExpr> {
    dsl::parse_fuzzy_in(src, slot).with_context(|| format!("{key} = \"{src}\""))
}

fn required<'a, T>(v: &'a Option<T>, key: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| anyhow!("missing required key {key}"))
}

/// One expression per component; a single expression is used for every component.
fn per_component(srcs: &[String], dim: usize, slot: Slot, key: &str) -> Result<Vec<FuzzyExpr>> {
    let exprs = srcs
        .iter()
        .enumerate()
        .map(|(j, s)| fuzzy_in(s, slot, &format!("{key}[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    match exprs.len() {
        1 => Ok(vec![exprs[0].clone(); dim]),
        n if n == dim => Ok(exprs),
        n => bail!("{key} has {n} expressions but the state has {dim} components"),
    }
}

/// Merges the catalog entry named in `cfg` (if any) underneath it.
pub fn merge_catalog(cfg: RunConfig) -> Result<RunConfig> {
    match cfg.system.catalog.clone() {
        Some(name) => Ok(catalog::lookup(&name)?.overlay(cfg)),
        None => Ok(cfg),
    }
}

impl Problem {
    pub fn from_config(cfg: RunConfig) -> Result<Self> {
        let mut cfg = merge_catalog(cfg)?;

        let levels = *cfg.solver.alpha_levels.get_or_insert(DEFAULT_LEVELS);
        let grid = AlphaGrid::uniform(levels).context("solver.alpha_levels")?;

        let spec: TimeScaleSpec = required(&cfg.system.timescale, "system.timescale")?
            .parse()
            .context("system.timescale")?;
        let mut ts = TimeScale::from_spec(&spec).context("system.timescale")?;
        if let Some(th) = cfg.system.dense_threshold {
            ts = ts.with_dense_threshold(th).context("system.dense_threshold")?;
        }
        let ts = Arc::new(ts);

        let u0_src = required(&cfg.system.u0, "system.u0")?.clone();
        if u0_src.is_empty() {
            bail!("system.u0 must have at least one component");
        }
        let env = Env {
            grid: Some(&grid),
            ..Env::default()
        };
        let u0_exprs = u0_src
            .iter()
            .enumerate()
            .map(|(j, s)| fuzzy_in(s, Slot::CONSTANT, &format!("system.u0[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        let u0 = eval_fuzzy_vector(&u0_exprs, &env).context("system.u0")?;
        let dim = u0.dim();

        let rhs = per_component(required(&cfg.system.rhs, "system.rhs")?, dim, Slot::RHS, "system.rhs")?;
        let switch_src = cfg.system.switch.get_or_insert_with(|| vec!["u_k".into()]).clone();
        let switch = per_component(&switch_src, dim, Slot::SWITCH, "system.switch")?;
        let switch_times = cfg.system.switch_times.get_or_insert_with(|| vec![ts.first()]).clone();
        let rho = *required(&cfg.system.rho, "system.rho")?;

        let ts_f = ts.clone();
        let grid_f = grid.clone();
        let rhs_fn: Arc<RhsFn<f64>> = Arc::new(move |t, u, lam| {
            let env = Env {
                ts: Some(&ts_f),
                grid: Some(&grid_f),
                t: Some(t),
                u: Some(u),
                lam: Some(lam),
                ..Env::default()
            };
            eval_fuzzy_vector(&rhs, &env)
        });
        let ts_s = ts.clone();
        let grid_s = grid.clone();
        let switch_fn: Arc<SwitchFn<f64>> = Arc::new(move |k, t, u_k| {
            let env = Env {
                ts: Some(&ts_s),
                grid: Some(&grid_s),
                t: Some(t),
                k: Some(k as f64),
                u_k: Some(u_k),
                ..Env::default()
            };
            eval_fuzzy_vector(&switch, &env)
        });
        let system = HybridFuzzySystem::new(ts.clone(), &switch_times, rhs_fn, switch_fn, rho, u0)
            .context("system")?;

        let mode = *cfg.solver.mode.get_or_insert(StepMode::default());
        let horizon = *cfg.solver.horizon.get_or_insert(ts.last());
        ts.index_of(horizon)
            .map_err(|_| anyhow!("solver.horizon = {horizon} is not a point of the time scale {spec}"))?;

        cfg.lyapunov.v.get_or_insert_with(|| "d".into());
        cfg.comparison.psi.get_or_insert_with(|| "v".into());
        cfg.class_k.a.get_or_insert_with(|| "x".into());
        cfg.class_k.b.get_or_insert_with(|| "x".into());
        cfg.sampling.count.get_or_insert(DEFAULT_SAMPLES);
        cfg.sampling.seed.get_or_insert(0);
        cfg.sampling.family.get_or_insert(ShapeFamily::default());
        cfg.output.dir.get_or_insert_with(|| PathBuf::from(DEFAULT_OUT_DIR));

        let problem = Problem {
            config: cfg,
            grid,
            ts,
            system,
            mode,
            horizon,
        };
        // Parse every remaining expression up front so that a bad slot is a config error.
        problem.lyapunov()?;
        problem.class_k()?;
        if problem.config.comparison.g.is_some() {
            problem.scalar_system(0.0)?;
        }
        Ok(problem)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.config.output.dir.clone().unwrap_or_else(|| DEFAULT_OUT_DIR.into())
    }

    pub fn lyapunov(&self) -> Result<LyapunovFn<f64>> {
        let e = scalar_in(required(&self.config.lyapunov.v, "lyapunov.v")?, Slot::LYAPUNOV, "lyapunov.v")?;
        let ts = self.ts.clone();
        let v = LyapunovFn::new(Arc::new(move |t, u: &FuzzyVector<f64>| {
            let env = Env {
                ts: Some(&ts),
                t: Some(t),
                d: Some(u.norm()),
                ..Env::default()
            };
            eval_scalar(&e, &env)
        }));
        Ok(match self.config.lyapunov.lipschitz {
            Some(c) => v.with_lipschitz(c),
            None => v,
        })
    }

    pub fn class_k(&self) -> Result<ClassKPair<f64>> {
        let k = |key: &str, src: &Option<String>| -> Result<Arc<ftl_core::stability::KFn<f64>>> {
            let e = scalar_in(required(src, key)?, Slot::CLASS_K, key)?;
            Ok(Arc::new(move |x| {
                let env = Env {
                    x: Some(x),
                    ..Env::default()
                };
                eval_scalar(&e, &env)
            }))
        };
        Ok(ClassKPair::new(
            k("class_k.a", &self.config.class_k.a)?,
            k("class_k.b", &self.config.class_k.b)?,
        ))
    }

    /// Comparison system with starting value `r0`.
    pub fn scalar_system(&self, r0: f64) -> Result<ScalarHybridSystem<f64>> {
        let g = scalar_in(required(&self.config.comparison.g, "comparison.g")?, Slot::G, "comparison.g")?;
        let psi = scalar_in(required(&self.config.comparison.psi, "comparison.psi")?, Slot::PSI, "comparison.psi")?;
        let ts = self.ts.clone();
        let g_fn = move |t, r, v| {
            let env = Env {
                ts: Some(&ts),
                t: Some(t),
                r: Some(r),
                v: Some(v),
                ..Env::default()
            };
            eval_scalar(&g, &env)
        };
        let psi_fn = move |k: usize, v| {
            let env = Env {
                k: Some(k as f64),
                v: Some(v),
                ..Env::default()
            };
            eval_scalar(&psi, &env)
        };
        Ok(ScalarHybridSystem::new(
            self.ts.clone(),
            &self.system.switch_times(),
            Arc::new(g_fn),
            Arc::new(psi_fn),
            r0,
        )?)
    }

    /// `comparison.r0`, defaulting to `V(t0, u0)`.
    pub fn r0(&self) -> Result<f64> {
        match self.config.comparison.r0 {
            Some(r0) => Ok(r0),
            None => Ok(self.lyapunov()?.eval(self.ts.first(), self.system.initial())?),
        }
    }

    pub fn query(&self) -> Result<StabilityQuery> {
        let q = &self.config.stability;
        Ok(StabilityQuery {
            lambda: *required(&q.lambda, "stability.lambda")?,
            bound_a: *required(&q.bound_a, "stability.A")?,
            bound_b: q.bound_b,
            settle_time: q.settle_time,
            rho: q.rho.unwrap_or(self.system.rho()),
            sampling: Sampling {
                count: self.config.sampling.count.unwrap_or(DEFAULT_SAMPLES),
                seed: self.config.sampling.seed.unwrap_or(0),
                family: self.config.sampling.family.unwrap_or_default(),
            },
        })
    }
}
