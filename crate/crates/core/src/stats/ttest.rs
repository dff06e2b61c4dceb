use serde::{Deserialize, Serialize};

use super::special::student_t_two_sided;
use super::StatsError;
use crate::real::Real;

/// How the two sample variances are combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceModel {
    /// Unequal variances, Welch-Satterthwaite degrees of freedom.
    #[default]
    Welch,
    /// Classic Student test with a pooled variance and `na + nb - 2` df.
    Pooled,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestResult<T = f64> {
    pub mean_a: T,
    pub mean_b: T,
    pub t_stat: T,
    pub df: T,
    /// Two-sided.
    pub p_value: T,
    pub alpha: T,
    pub reject: bool,
    /// Both samples had zero variance; `p` is 1 or 0 by convention.
    pub degenerate: bool,
}

impl<T: Real> TTestResult<T> {
    pub fn mean_difference(&self) -> T {
        self.mean_a - self.mean_b
    }
}

fn mean_var<T: Real>(xs: &[T]) -> (T, T) {
    let n = T::lit(xs.len() as f64);
    let mean = xs.iter().copied().fold(T::zero(), |a, b| a + b) / n;
    let ss = xs
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .fold(T::zero(), |a, b| a + b);
    (mean, ss / (n - T::one()))
}

fn check<T: Real>(xs: &[T], which: &'static str) -> Result<(), StatsError> {
    if xs.len() < 2 {
        return Err(StatsError::TooFewSamples {
            which,
            min: 2,
            got: xs.len(),
        });
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite(which));
    }
    Ok(())
}

pub fn welch_t_test<T: Real>(a: &[T], b: &[T], alpha: T) -> Result<TTestResult<T>, StatsError> {
    t_test(a, b, alpha, VarianceModel::Welch)
}

/// Two-sample, two-sided t-test of equal means.
pub fn t_test<T: Real>(
    a: &[T],
    b: &[T],
    alpha: T,
    model: VarianceModel,
) -> Result<TTestResult<T>, StatsError> {
    check(a, "a")?;
    check(b, "b")?;
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(StatsError::InvalidAlpha(alpha.as_f64()));
    }
    let (na, nb) = (T::lit(a.len() as f64), T::lit(b.len() as f64));
    let (mean_a, var_a) = mean_var(a);
    let (mean_b, var_b) = mean_var(b);
    let one = T::one();

    let finish = |t_stat: T, df: T, p_value: T, degenerate: bool| TTestResult {
        mean_a,
        mean_b,
        t_stat,
        df,
        p_value,
        alpha,
        reject: p_value < alpha,
        degenerate,
    };

    if var_a == T::zero() && var_b == T::zero() {
        let df = na + nb - T::lit(2.0);
        let diff = mean_a - mean_b;
        return Ok(if diff == T::zero() {
            finish(T::zero(), df, one, true)
        } else {
            finish(diff.signum() * T::infinity(), df, T::zero(), true)
        });
    }

    let (t_stat, df) = match model {
        VarianceModel::Welch => {
            let (sa, sb) = (var_a / na, var_b / nb);
            let se2 = sa + sb;
            let df = se2 * se2 / (sa * sa / (na - one) + sb * sb / (nb - one));
            ((mean_a - mean_b) / se2.sqrt(), df)
        }
        VarianceModel::Pooled => {
            let df = na + nb - T::lit(2.0);
            let pooled = ((na - one) * var_a + (nb - one) * var_b) / df;
            let se = (pooled * (one / na + one / nb)).sqrt();
            ((mean_a - mean_b) / se, df)
        }
    };
    let p = student_t_two_sided(t_stat, df).max(T::zero()).min(one);
    Ok(finish(t_stat, df, p, false))
}
