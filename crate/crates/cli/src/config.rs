//! Run configuration.
//!
//! A run is described by a TOML file with one table per concern. Every key
//! is optional in the file; catalog entries fill in a complete system and the
//! command line overrides individual values. The merged result is echoed
//! into `meta.json`.
//!
//! ```toml
//! [system]
//! catalog = "example_3_9"       # or give the fields below
//! timescale = "integer(10)"
//! switch_times = [0, 5]
//! rhs = ["fadd(circminus(u), smul(eta(t), lam))"]
//! switch = ["smul(min(k, 1), u_k)"]
//! u0 = ["tri(-1, 0, 1)"]
//! rho = 10
//!
//! [solver]
//! mode = "expansive"
//! horizon = 10
//! alpha_levels = 11
//!
//! [lyapunov]
//! v = "d"
//! lipschitz = 1
//!
//! [comparison]
//! g = "(w + w_k) * eta(t)"
//! psi = "v"
//! r0 = 1
//!
//! [class_k]
//! a = "x"
//! b = "x"
//!
//! [stability]
//! lambda = 1
//! A = 2
//! B = 0.1
//! T0 = 4
//!
//! [sampling]
//! count = 200
//! seed = 7
//! family = "triangular"
//!
//! [output]
//! dir = "out"
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ftl_core::hybrid::StepMode;
use ftl_core::stability::ShapeFamily;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timescale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_times: Option<Vec<f64>>,
    /// One expression per component, or a single one used for all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<StepMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_levels: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassKSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub bound_a: Option<f64>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub bound_b: Option<f64>,
    #[serde(rename = "T0", default, skip_serializing_if = "Option::is_none")]
    pub settle_time: Option<f64>,
    /// Defaults to the system's `rho`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<ShapeFamily>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub lyapunov: LyapunovSection,
    #[serde(default)]
    pub comparison: ComparisonSection,
    #[serde(default)]
    pub class_k: ClassKSection,
    #[serde(default)]
    pub stability: StabilitySection,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn over<T>(base: &mut Option<T>, top: Option<T>) {
    if top.is_some() {
        *base = top;
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Values set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        let s = &mut self.system;
        over(&mut s.catalog, top.system.catalog);
        over(&mut s.timescale, top.system.timescale);
        over(&mut s.dense_threshold, top.system.dense_threshold);
        over(&mut s.switch_times, top.system.switch_times);
        over(&mut s.rhs, top.system.rhs);
        over(&mut s.switch, top.system.switch);
        over(&mut s.u0, top.system.u0);
        over(&mut s.rho, top.system.rho);
        let s = &mut self.solver;
        over(&mut s.mode, top.solver.mode);
        over(&mut s.horizon, top.solver.horizon);
        over(&mut s.alpha_levels, top.solver.alpha_levels);
        over(&mut self.lyapunov.v, top.lyapunov.v);
        over(&mut self.lyapunov.lipschitz, top.lyapunov.lipschitz);
        let c = &mut self.comparison;
        over(&mut c.g, top.comparison.g);
        over(&mut c.psi, top.comparison.psi);
        over(&mut c.r0, top.comparison.r0);
        over(&mut self.class_k.a, top.class_k.a);
        over(&mut self.class_k.b, top.class_k.b);
        let q = &mut self.stability;
        over(&mut q.lambda, top.stability.lambda);
        over(&mut q.bound_a, top.stability.bound_a);
        over(&mut q.bound_b, top.stability.bound_b);
        over(&mut q.settle_time, top.stability.settle_time);
        over(&mut q.rho, top.stability.rho);
        let m = &mut self.sampling;
        over(&mut m.count, top.sampling.count);
        over(&mut m.seed, top.sampling.seed);
        over(&mut m.family, top.sampling.family);
        over(&mut self.output.dir, top.output.dir);
        self
    }
}
