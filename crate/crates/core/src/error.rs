use thiserror::Error;

/// Source location inside a DSL expression (byte offsets plus 1-based line/column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),
    #[error("invalid fuzzy number shape: {0}")]
    InvalidShape(String),
    #[error("alpha grids differ between operands")]
    IncompatibleGrids,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("gH-difference does not exist (nestedness violated at alpha = {alpha})")]
    GhDifferenceUndefined { alpha: f64 },
    #[error("Hukuhara difference does not exist at alpha = {alpha}")]
    HukuharaDifferenceUndefined { alpha: f64 },

    #[error("invalid time scale: {0}")]
    InvalidTimeScale(String),
    #[error("point {t} is not on the time scale")]
    UnknownPoint { t: f64 },
    #[error("point {t} is the terminal point and has no successor")]
    NoSuccessor { t: f64 },
    #[error("function is not regressive at t = {t} (1 + mu(t) p(t) = 0)")]
    NonRegressive { t: f64 },

    #[error("derivative verification inconclusive at t = {t}: {reason}")]
    VerificationInconclusive { t: f64, reason: String },

    #[error("invalid hybrid system: {0}")]
    InvalidSystem(String),
    #[error("step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },
    #[error("trajectory left the valid state space at t = {t}: {reason}")]
    InvalidTrajectory { t: f64, reason: String },
    #[error("comparison solution blew up at t = {t} (segment {segment})")]
    BlowUp { t: f64, segment: usize },

    #[error("invalid stability query: {0}")]
    InvalidQuery(String),
    #[error("configuration error: {0}")]
    Config(String),

    #[error("syntax error at {line}:{column}: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("evaluation error at {span}: {message}")]
    Eval { message: String, span: Span },

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
