use std::fmt;

use crate::error::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Mu,
    Sigma,
    Eta,
    Min,
    Max,
    Abs,
    Pow,
}

impl Func {
    pub const ALL: [Func; 7] = [Func::Mu, Func::Sigma, Func::Eta, Func::Min, Func::Max, Func::Abs, Func::Pow];

    pub fn name(self) -> &'static str {
        match self {
            Func::Mu => "mu",
            Func::Sigma => "sigma",
            Func::Eta => "eta",
            Func::Min => "min",
            Func::Max => "max",
            Func::Abs => "abs",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max | Func::Pow => 2,
            _ => 1,
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Real-valued expression. Equality ignores source spans.
#[derive(Debug, Clone)]
pub enum ScalarExpr {
    Num { value: f64, span: Span },
    Var { name: String, span: Span },
    Neg { expr: Box<ScalarExpr>, span: Span },
    Bin { op: BinOp, lhs: Box<ScalarExpr>, rhs: Box<ScalarExpr>, span: Span },
    Call { func: Func, args: Vec<ScalarExpr>, span: Span },
}

impl ScalarExpr {
    pub fn span(&self) -> Span {
        match self {
            ScalarExpr::Num { span, .. }
            | ScalarExpr::Var { span, .. }
            | ScalarExpr::Neg { span, .. }
            | ScalarExpr::Bin { span, .. }
            | ScalarExpr::Call { span, .. } => *span,
        }
    }

    /// Variable occurrences in source order.
    pub fn vars(&self) -> Vec<(&str, Span)> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<(&'a str, Span)>) {
        match self {
            ScalarExpr::Num { .. } => {}
            ScalarExpr::Var { name, span } => out.push((name, *span)),
            ScalarExpr::Neg { expr, .. } => expr.collect_vars(out),
            ScalarExpr::Bin { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            ScalarExpr::Call { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        use ScalarExpr::*;
        match (self, other) {
            (Num { value: a, .. }, Num { value: b, .. }) => a == b,
            (Var { name: a, .. }, Var { name: b, .. }) => a == b,
            (Neg { expr: a, .. }, Neg { expr: b, .. }) => a == b,
            (Bin { op: o1, lhs: l1, rhs: r1, .. }, Bin { op: o2, lhs: l2, rhs: r2, .. }) => o1 == o2 && l1 == l2 && r1 == r2,
            (Call { func: f1, args: a1, .. }, Call { func: f2, args: a2, .. }) => f1 == f2 && a1 == a2,
            _ => false,
        }
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarExpr::Num { value, .. } => write!(f, "{value}"),
            ScalarExpr::Var { name, .. } => f.write_str(name),
            ScalarExpr::Neg { expr, .. } => write!(f, "(-{expr})"),
            ScalarExpr::Bin { op, lhs, rhs, .. } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            ScalarExpr::Call { func, args, .. } => {
                write!(f, "{}(", func.name())?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list<D: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[D]) -> fmt::Result {
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzyVar {
    /// Current state `u`.
    U,
    /// State at the last switching instant.
    Uk,
    /// Switch value of the current segment.
    Lam,
}

impl FuzzyVar {
    pub fn name(self) -> &'static str {
        match self {
            FuzzyVar::U => "u",
            FuzzyVar::Uk => "u_k",
            FuzzyVar::Lam => "lam",
        }
    }

    pub fn from_name(name: &str) -> Option<FuzzyVar> {
        [FuzzyVar::U, FuzzyVar::Uk, FuzzyVar::Lam].into_iter().find(|v| v.name() == name)
    }
}

/// Fuzzy and scalar variable occurrences of a [`FuzzyExpr`].
pub type VarUses<'a> = (Vec<(FuzzyVar, Span)>, Vec<(&'a str, Span)>);

/// Fuzzy-number-valued expression. Equality ignores source spans.
#[derive(Debug, Clone)]
pub enum FuzzyExpr {
    /// `u`, or `u[j]` for component `j` (0-based).
    Var { var: FuzzyVar, index: Option<usize>, span: Span },
    Tri { args: Box<[ScalarExpr; 3]>, span: Span },
    Trap { args: Box<[ScalarExpr; 4]>, span: Span },
    Crisp { value: ScalarExpr, span: Span },
    Add { lhs: Box<FuzzyExpr>, rhs: Box<FuzzyExpr>, span: Span },
    GhSub { lhs: Box<FuzzyExpr>, rhs: Box<FuzzyExpr>, span: Span },
    Smul { k: ScalarExpr, expr: Box<FuzzyExpr>, span: Span },
    CircMinus { expr: Box<FuzzyExpr>, span: Span },
}

impl FuzzyExpr {
    pub fn span(&self) -> Span {
        match self {
            FuzzyExpr::Var { span, .. }
            | FuzzyExpr::Tri { span, .. }
            | FuzzyExpr::Trap { span, .. }
            | FuzzyExpr::Crisp { span, .. }
            | FuzzyExpr::Add { span, .. }
            | FuzzyExpr::GhSub { span, .. }
            | FuzzyExpr::Smul { span, .. }
            | FuzzyExpr::CircMinus { span, .. } => *span,
        }
    }

    /// Fuzzy and scalar variable occurrences in source order.
    pub fn vars(&self) -> VarUses<'_> {
        let mut fuzzy = Vec::new();
        let mut scalar = Vec::new();
        self.collect_vars(&mut fuzzy, &mut scalar);
        (fuzzy, scalar)
    }

    fn collect_vars<'a>(&'a self, fuzzy: &mut Vec<(FuzzyVar, Span)>, scalar: &mut Vec<(&'a str, Span)>) {
        match self {
            FuzzyExpr::Var { var, span, .. } => fuzzy.push((*var, *span)),
            FuzzyExpr::Tri { args, .. } => args.iter().for_each(|a| a.collect_vars(scalar)),
            FuzzyExpr::Trap { args, .. } => args.iter().for_each(|a| a.collect_vars(scalar)),
            FuzzyExpr::Crisp { value, .. } => value.collect_vars(scalar),
            FuzzyExpr::Add { lhs, rhs, .. } | FuzzyExpr::GhSub { lhs, rhs, .. } => {
                lhs.collect_vars(fuzzy, scalar);
                rhs.collect_vars(fuzzy, scalar);
            }
            FuzzyExpr::Smul { k, expr, .. } => {
                k.collect_vars(scalar);
                expr.collect_vars(fuzzy, scalar);
            }
            FuzzyExpr::CircMinus { expr, .. } => {
                // circminus reads the graininess at t
                scalar.push(("t", self.span()));
                expr.collect_vars(fuzzy, scalar);
            }
        }
    }
}

impl PartialEq for FuzzyExpr {
    fn eq(&self, other: &Self) -> bool {
        use FuzzyExpr::*;
        match (self, other) {
            (Var { var: a, index: i, .. }, Var { var: b, index: j, .. }) => a == b && i == j,
            (Tri { args: a, .. }, Tri { args: b, .. }) => a == b,
            (Trap { args: a, .. }, Trap { args: b, .. }) => a == b,
            (Crisp { value: a, .. }, Crisp { value: b, .. }) => a == b,
            (Add { lhs: l1, rhs: r1, .. }, Add { lhs: l2, rhs: r2, .. }) => l1 == l2 && r1 == r2,
            (GhSub { lhs: l1, rhs: r1, .. }, GhSub { lhs: l2, rhs: r2, .. }) => l1 == l2 && r1 == r2,
            (Smul { k: k1, expr: e1, .. }, Smul { k: k2, expr: e2, .. }) => k1 == k2 && e1 == e2,
            (CircMinus { expr: a, .. }, CircMinus { expr: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for FuzzyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzyExpr::Var { var, index, .. } => {
                f.write_str(var.name())?;
                if let Some(j) = index {
                    write!(f, "[{j}]")?;
                }
                Ok(())
            }
            FuzzyExpr::Tri { args, .. } => {
                f.write_str("tri(")?;
                write_list(f, &args[..])?;
                f.write_str(")")
            }
            FuzzyExpr::Trap { args, .. } => {
                f.write_str("trap(")?;
                write_list(f, &args[..])?;
                f.write_str(")")
            }
            FuzzyExpr::Crisp { value, .. } => write!(f, "crisp({value})"),
            FuzzyExpr::Add { lhs, rhs, .. } => write!(f, "fadd({lhs}, {rhs})"),
            FuzzyExpr::GhSub { lhs, rhs, .. } => write!(f, "ghsub({lhs}, {rhs})"),
            FuzzyExpr::Smul { k, expr, .. } => write!(f, "smul({k}, {expr})"),
            FuzzyExpr::CircMinus { expr, .. } => write!(f, "circminus({expr})"),
        }
    }
}
