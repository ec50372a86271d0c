//! Expression language for right-hand sides, Lyapunov functions and bounds.
//!
//! ```text
//! scalar    = term { ("+" | "-") term } ;
//! term      = unary { ("*" | "/") unary } ;
//! unary     = "-" unary | primary ;
//! primary   = number | variable | func "(" scalar { "," scalar } ")" | "(" scalar ")" ;
//! func      = "mu" | "sigma" | "eta" | "abs"            (one argument)
//!           | "min" | "max" | "pow" ;                   (two arguments)
//! variable  = "t" | "r" | "v" | "w" | "w_k" | "d" | "x" | "k" ;
//!
//! fuzzy     = fterm { ("fadd" | "ghsub") fterm } ;
//! fterm     = fvar [ "[" integer "]" ]
//!           | "tri" "(" scalar "," scalar "," scalar ")"
//!           | "trap" "(" scalar "," scalar "," scalar "," scalar ")"
//!           | "crisp" "(" scalar ")" | number
//!           | "fadd" "(" fuzzy "," fuzzy ")" | "ghsub" "(" fuzzy "," fuzzy ")"
//!           | "smul" "(" scalar "," fuzzy ")" | "circminus" "(" fuzzy ")"
//!           | "(" fuzzy ")" ;
//! fvar      = "u" | "u_k" | "lam" ;
//! number    = digit { digit } [ "." digit { digit } ] [ ("e" | "E") [ "+" | "-" ] digit { digit } ] ;
//! ```
//!
//! `eta(t)` is `1/(1+mu(t))` and `circminus(f)` is `smul(-eta(t), f)`.
//! `ghsub` is the generalized Hukuhara difference. `w` and `w_k` are
//! aliases of `r` and `v`. A bare number in fuzzy position is a crisp
//! number. Each configuration slot only accepts some variables; see [`Slot`].

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::{BinOp, FuzzyExpr, FuzzyVar, Func, ScalarExpr};
pub use eval::{eval_fuzzy, eval_fuzzy_vector, eval_scalar, Env};

use crate::error::{Error, Result};
use parser::Parser;

pub fn parse_scalar(src: &str) -> Result<ScalarExpr> {
    let mut p = Parser::new(src)?;
    let e = p.scalar()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_fuzzy(src: &str) -> Result<FuzzyExpr> {
    let mut p = Parser::new(src)?;
    let e = p.fuzzy()?;
    p.finish()?;
    Ok(e)
}

/// Variables an expression may use in a given configuration slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub name: &'static str,
    pub scalar: &'static [&'static str],
    pub fuzzy: &'static [FuzzyVar],
}

impl Slot {
    /// Comparison right-hand side `g(t, r, v)`.
    pub const G: Slot = Slot {
        name: "g",
        scalar: &["t", "r", "v", "w", "w_k"],
        fuzzy: &[],
    };
    /// Switch map of the comparison system, `psi_k(v)`.
    pub const PSI: Slot = Slot {
        name: "psi",
        scalar: &["v", "k"],
        fuzzy: &[],
    };
    /// Lyapunov function `V(t, d)` with `d = D(u, 0)`.
    pub const LYAPUNOV: Slot = Slot {
        name: "V",
        scalar: &["t", "d"],
        fuzzy: &[],
    };
    pub const CLASS_K: Slot = Slot {
        name: "class K",
        scalar: &["x"],
        fuzzy: &[],
    };
    /// Fuzzy right-hand side `f(t, u, lam)`.
    pub const RHS: Slot = Slot {
        name: "f",
        scalar: &["t"],
        fuzzy: &[FuzzyVar::U, FuzzyVar::Lam],
    };
    /// Fuzzy switch map `lambda_k(t_k, u_k)`.
    pub const SWITCH: Slot = Slot {
        name: "lambda",
        scalar: &["t", "k"],
        fuzzy: &[FuzzyVar::Uk],
    };
    /// Closed literals such as initial conditions.
    pub const CONSTANT: Slot = Slot {
        name: "constant",
        scalar: &[],
        fuzzy: &[],
    };
    pub const ANY: Slot = Slot {
        name: "any",
        scalar: &["t", "r", "v", "w", "w_k", "d", "x", "k"],
        fuzzy: &[FuzzyVar::U, FuzzyVar::Uk, FuzzyVar::Lam],
    };

    fn reject(&self, name: &str, span: crate::error::Span) -> Error {
        Error::Eval {
            message: format!("variable '{name}' is not available in {} expressions", self.name),
            span,
        }
    }

    pub fn check_scalar(&self, e: &ScalarExpr) -> Result<()> {
        match e.vars().into_iter().find(|(n, _)| !self.scalar.contains(n)) {
            Some((n, span)) => Err(self.reject(n, span)),
            None => Ok(()),
        }
    }

    pub fn check_fuzzy(&self, e: &FuzzyExpr) -> Result<()> {
        let (fuzzy, scalar) = e.vars();
        if let Some((v, span)) = fuzzy.into_iter().find(|(v, _)| !self.fuzzy.contains(v)) {
            return Err(self.reject(v.name(), span));
        }
        match scalar.into_iter().find(|(n, _)| !self.scalar.contains(n)) {
            Some((n, span)) => Err(self.reject(n, span)),
            None => Ok(()),
        }
    }
}

pub fn parse_scalar_in(src: &str, slot: Slot) -> Result<ScalarExpr> {
    let e = parse_scalar(src)?;
    slot.check_scalar(&e)?;
    Ok(e)
}

pub fn parse_fuzzy_in(src: &str, slot: Slot) -> Result<FuzzyExpr> {
    let e = parse_fuzzy(src)?;
    slot.check_fuzzy(&e)?;
    Ok(e)
}
