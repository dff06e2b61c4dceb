//! Two-sample t-tests and the special functions behind them.

mod special;
mod summary;
mod ttest;

pub use special::{
    ln_beta, ln_gamma, regularized_incomplete_beta, student_t_cdf, student_t_quantile,
};
pub use summary::{Summary, LOW_N_THRESHOLD};
pub use ttest::{t_test, welch_t_test, TTestResult, VarianceModel};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample {which} needs at least {min} values, got {got}")]
    TooFewSamples {
        which: &'static str,
        min: usize,
        got: usize,
    },
    #[error("significance level must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("sample {0} contains a non-finite value")]
    NonFinite(&'static str),
}
