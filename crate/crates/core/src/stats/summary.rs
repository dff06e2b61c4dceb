use serde::{Deserialize, Serialize};

use super::special::student_t_quantile;
use crate::real::Real;

/// Sample sizes below this are flagged as low-n in summaries.
pub const LOW_N_THRESHOLD: usize = 10;

/// Mean, sample standard deviation and a t-based confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary<T = f64> {
    pub n: usize,
    pub mean: T,
    pub std_dev: T,
    pub confidence: T,
    /// `None` for fewer than two observations.
    pub ci_low: Option<T>,
    pub ci_high: Option<T>,
    pub low_n: bool,
}

impl<T: Real> Summary<T> {
    pub fn new(xs: &[T], confidence: T) -> Self {
        let n = xs.len();
        let nf = T::lit(n as f64);
        let mean = if n == 0 {
            T::nan()
        } else {
            xs.iter().copied().fold(T::zero(), |a, b| a + b) / nf
        };
        if n < 2 {
            return Self {
                n,
                mean,
                std_dev: T::nan(),
                confidence,
                ci_low: None,
                ci_high: None,
                low_n: true,
            };
        }
        let ss = xs
            .iter()
            .map(|&x| (x - mean) * (x - mean))
            .fold(T::zero(), |a, b| a + b);
        let std_dev = (ss / (nf - T::one())).sqrt();
        let q = student_t_quantile((T::one() + confidence) / T::lit(2.0), nf - T::one());
        let half = q * std_dev / nf.sqrt();
        Self {
            n,
            mean,
            std_dev,
            confidence,
            ci_low: Some(mean - half),
            ci_high: Some(mean + half),
            low_n: n < LOW_N_THRESHOLD,
        }
    }

    pub fn ci95(xs: &[T]) -> Self {
        Self::new(xs, T::lit(0.95))
    }

    pub fn ci_half_width(&self) -> Option<T> {
        Some((self.ci_high? - self.ci_low?) / T::lit(2.0))
    }
}
