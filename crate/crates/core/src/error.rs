use crate::expr::{EvalError, ParseError};
use crate::quad::QuadError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("quadrature fault: {0}")]
    Quad(#[from] QuadError),
    #[error("profile radius collapses at t = {t} (y = {y:e}); choose other constants c1, c2 or a smaller domain")]
    YCollapse { t: f64, y: f64 },
    #[error("invalid problem: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("t = {p} is not a singular point: l = {l_value:e}")]
    NotSingular { p: f64, l_value: f64 },
    #[error("root refinement did not converge in [{a}, {b}]")]
    RootRefinement { a: f64, b: f64 },
    #[error("{which} is not periodic with period {period}: |{which}(t + L) - {which}(t)| = {diff:e} at t = {t}")]
    PeriodAudit {
        which: &'static str,
        period: f64,
        t: f64,
        diff: f64,
    },
    #[error("H is inconsistent with m = H·l at t = {t}: |H·l - m| = {residual:e}")]
    InconsistentH { t: f64, residual: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
