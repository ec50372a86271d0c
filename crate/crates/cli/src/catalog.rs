//! Built-in systems, written in the same TOML form as user configs.

use anyhow::{anyhow, Result};

use crate::config::RunConfig;

/// Scalar switched decay on `{0, …, 10}` with one switch at `t = 5`:
/// `Δ_H u = ⊖u ⊕ η(t)·λ_k`, where `λ_0 = 0̃` and `λ_1 = u(5)`.
/// The spread of a fuzzy state grows by 1.5 per step in expansive mode.
const EXAMPLE_3_9: &str = r#"
[system]
timescale = "integer(10)"
switch_times = [0, 5]
rhs = ["fadd(circminus(u), smul(eta(t), lam))"]
switch = ["smul(min(k, 1), u_k)"]
u0 = ["tri(-1, 0, 1)"]
rho = 10

[solver]
mode = "expansive"
horizon = 10

[lyapunov]
v = "d"
lipschitz = 1

[comparison]
g = "(w + w_k) * eta(t)"
psi = "v"
r0 = 1

[class_k]
a = "x"
b = "x"

[stability]
lambda = 1
A = 2

[sampling]
count = 200
seed = 0
family = "triangular"
"#;

/// `u(t+1) = u(t)/2` for crisp states.
const CRISP_CONTRACTION: &str = r#"
[system]
timescale = "integer(10)"
switch_times = [0]
rhs = ["circminus(u)"]
switch = ["u_k"]
u0 = ["crisp(0.5)"]
rho = 10

[solver]
mode = "expansive"
horizon = 10

[lyapunov]
v = "d"
lipschitz = 1

[comparison]
g = "-r * eta(t)"
psi = "v"
r0 = 0.5

[class_k]
a = "x"
b = "x"

[stability]
lambda = 1
A = 1.5
B = 0.1
T0 = 4

[sampling]
count = 200
seed = 0
family = "crisp"
"#;

/// Same dynamics as `crisp_contraction` with fuzzy states; contractive
/// steps halve both centre and spread.
const FUZZY_DECAY: &str = r#"
[system]
timescale = "integer(10)"
switch_times = [0]
rhs = ["circminus(u)"]
switch = ["u_k"]
u0 = ["tri(-0.5, 0, 0.5)"]
rho = 10

[solver]
mode = "contractive"
horizon = 10

[lyapunov]
v = "d"
lipschitz = 1

[comparison]
g = "-r * eta(t)"
psi = "v"
r0 = 0.5

[class_k]
a = "x"
b = "x"

[stability]
lambda = 1
A = 1.5
B = 0.1
T0 = 4

[sampling]
count = 200
seed = 0
family = "triangular"
"#;

/// Two components with three switches, each feeding a quarter of the
/// last switching state back in. Unstable in expansive mode.
const SWITCHED_PAIR: &str = r#"
[system]
timescale = "integer(9)"
switch_times = [0, 3, 6]
rhs = ["fadd(circminus(u), smul(0.25 * eta(t), lam))"]
switch = ["u_k"]
u0 = ["tri(-0.4, 0, 0.4)", "crisp(0.3)"]
rho = 100

[solver]
mode = "expansive"
horizon = 9

[lyapunov]
v = "d"
lipschitz = 1

[comparison]
g = "0.5 * r + 0.25 * v"
psi = "v"
r0 = 0.4

[class_k]
a = "x"
b = "x"

[stability]
lambda = 0.5
A = 4

[sampling]
count = 100
seed = 0
family = "mixed"
"#;

pub const NAMES: [&str; 4] = ["example_3_9", "crisp_contraction", "fuzzy_decay", "switched_pair"];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "example_3_9" => Some(EXAMPLE_3_9),
        "crisp_contraction" => Some(CRISP_CONTRACTION),
        "fuzzy_decay" => Some(FUZZY_DECAY),
        "switched_pair" => Some(SWITCHED_PAIR),
        _ => None,
    }
}

pub fn lookup(name: &str) -> Result<RunConfig> {
    let src = source(name)
        .ok_or_else(|| anyhow!("unknown catalog system '{name}' (known: {})", NAMES.join(", ")))?;
    let mut cfg = RunConfig::parse(src)?;
    cfg.system.catalog = Some(name.to_string());
    Ok(cfg)
}
