use super::ast::{BinOp, FuzzyExpr, FuzzyVar, Func, ScalarExpr};
use crate::error::{Error, Result, Span};
use crate::fuzzy::{AlphaGrid, FuzzyNumber, FuzzyVector};
use crate::timescale::TimeScale;

/// Bindings for evaluation. Unset fields are unbound.
///
/// `w` and `w_k` read `r` and `v`. A bare fuzzy variable refers to
/// component [`Env::component`]; `u[j]` selects component `j`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Env<'a> {
    pub ts: Option<&'a TimeScale<f64>>,
    pub grid: Option<&'a AlphaGrid<f64>>,
    pub t: Option<f64>,
    pub r: Option<f64>,
    pub v: Option<f64>,
    pub d: Option<f64>,
    pub x: Option<f64>,
    pub k: Option<f64>,
    pub u: Option<&'a FuzzyVector<f64>>,
    pub u_k: Option<&'a FuzzyVector<f64>>,
    pub lam: Option<&'a FuzzyVector<f64>>,
    pub component: usize,
}

fn eval_err(message: impl Into<String>, span: Span) -> Error {
    Error::Eval {
        message: message.into(),
        span,
    }
}

impl Env<'_> {
    fn scalar_var(&self, name: &str, span: Span) -> Result<f64> {
        let slot = match name {
            "t" => self.t,
            "r" | "w" => self.r,
            "v" | "w_k" => self.v,
            "d" => self.d,
            "x" => self.x,
            "k" => self.k,
            _ => return Err(eval_err(format!("unknown variable '{name}'"), span)),
        };
        slot.ok_or_else(|| eval_err(format!("unbound variable '{name}'"), span))
    }

    fn time_scale(&self, span: Span) -> Result<&TimeScale<f64>> {
        self.ts
            .ok_or_else(|| eval_err("no time scale bound for mu/sigma/eta", span))
    }

    fn fuzzy_var(&self, var: FuzzyVar, index: Option<usize>, span: Span) -> Result<FuzzyNumber<f64>> {
        let bound = match var {
            FuzzyVar::U => self.u,
            FuzzyVar::Uk => self.u_k,
            FuzzyVar::Lam => self.lam,
        }
        .ok_or_else(|| eval_err(format!("unbound fuzzy variable '{}'", var.name()), span))?;
        let j = index.unwrap_or(self.component);
        if j >= bound.dim() {
            return Err(eval_err(
                format!("component {j} out of range for '{}' of dimension {}", var.name(), bound.dim()),
                span,
            ));
        }
        Ok(bound.component(j).clone())
    }

    fn grid(&self) -> AlphaGrid<f64> {
        self.grid
            .cloned()
            .or_else(|| self.u.or(self.u_k).or(self.lam).map(|u| u.grid().clone()))
            .unwrap_or_default()
    }
}

pub fn eval_scalar(e: &ScalarExpr, env: &Env) -> Result<f64> {
    match e {
        ScalarExpr::Num { value, .. } => Ok(*value),
        ScalarExpr::Var { name, span } => env.scalar_var(name, *span),
        ScalarExpr::Neg { expr, .. } => Ok(-eval_scalar(expr, env)?),
        ScalarExpr::Bin { op, lhs, rhs, span } => {
            let (a, b) = (eval_scalar(lhs, env)?, eval_scalar(rhs, env)?);
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div if b == 0.0 => Err(eval_err("division by zero", *span)),
                BinOp::Div => Ok(a / b),
            }
        }
        ScalarExpr::Call { func, args, span } => {
            let vals = args.iter().map(|a| eval_scalar(a, env)).collect::<Result<Vec<_>>>()?;
            let at = |span: Span| -> Result<(&TimeScale<f64>, usize)> {
                let ts = env.time_scale(span)?;
                let i = ts
                    .index_of(vals[0])
                    .map_err(|e| eval_err(e.to_string(), span))?;
                Ok((ts, i))
            };
            let out = match func {
                Func::Mu => {
                    let (ts, i) = at(*span)?;
                    ts.mu_at(i).map_err(|e| eval_err(e.to_string(), *span))?
                }
                Func::Sigma => {
                    let (ts, i) = at(*span)?;
                    ts.sigma_at(i).map_err(|e| eval_err(e.to_string(), *span))?
                }
                Func::Eta => {
                    let (ts, i) = at(*span)?;
                    1.0 / (1.0 + ts.mu_at(i).map_err(|e| eval_err(e.to_string(), *span))?)
                }
                Func::Min => vals[0].min(vals[1]),
                Func::Max => vals[0].max(vals[1]),
                Func::Abs => vals[0].abs(),
                Func::Pow => vals[0].powf(vals[1]),
            };
            if !out.is_finite() {
                return Err(eval_err(format!("{}(...) is not finite", func.name()), *span));
            }
            Ok(out)
        }
    }
}

pub fn eval_fuzzy(e: &FuzzyExpr, env: &Env) -> Result<FuzzyNumber<f64>> {
    let wrap = |span: Span| move |err: Error| eval_err(err.to_string(), span);
    match e {
        FuzzyExpr::Var { var, index, span } => env.fuzzy_var(*var, *index, *span),
        FuzzyExpr::Tri { args, span } => {
            let [a, b, c] = [&args[0], &args[1], &args[2]].map(|x| eval_scalar(x, env));
            FuzzyNumber::triangular(a?, b?, c?, &env.grid()).map_err(wrap(*span))
        }
        FuzzyExpr::Trap { args, span } => {
            let [a, b, c, d] = [&args[0], &args[1], &args[2], &args[3]].map(|x| eval_scalar(x, env));
            FuzzyNumber::trapezoid(a?, b?, c?, d?, &env.grid()).map_err(wrap(*span))
        }
        FuzzyExpr::Crisp { value, .. } => Ok(FuzzyNumber::crisp(eval_scalar(value, env)?, &env.grid())),
        FuzzyExpr::Add { lhs, rhs, span } => eval_fuzzy(lhs, env)?
            .add(&eval_fuzzy(rhs, env)?)
            .map_err(wrap(*span)),
        FuzzyExpr::GhSub { lhs, rhs, span } => eval_fuzzy(lhs, env)?
            .gh_difference(&eval_fuzzy(rhs, env)?)
            .map_err(wrap(*span)),
        FuzzyExpr::Smul { k, expr, .. } => Ok(eval_fuzzy(expr, env)?.scale(eval_scalar(k, env)?)),
        FuzzyExpr::CircMinus { expr, span } => {
            let ts = env.time_scale(*span)?;
            let t = env.scalar_var("t", *span)?;
            let mu = ts.mu(t).map_err(wrap(*span))?;
            Ok(eval_fuzzy(expr, env)?.scale(-1.0 / (1.0 + mu)))
        }
    }
}

/// Evaluates one expression per component into a fuzzy vector.
pub fn eval_fuzzy_vector(exprs: &[FuzzyExpr], env: &Env) -> Result<FuzzyVector<f64>> {
    let comps = exprs
        .iter()
        .enumerate()
        .map(|(j, e)| eval_fuzzy(e, &Env { component: j, ..*env }))
        .collect::<Result<Vec<_>>>()?;
    FuzzyVector::new(comps)
}
