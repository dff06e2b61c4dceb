use serde::{Deserialize, Serialize};

use super::{KernelError, RngStream, SimTime};
use crate::real::Real;

/// Number of hourly buckets in an arrival schedule (9 am to 5 pm).
pub const HOURS_PER_DAY: usize = 8;

/// Triangular distribution in minutes, `min <= mode <= max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangularParams<T = f64> {
    pub min: T,
    pub mode: T,
    pub max: T,
}

impl<T: Real> TriangularParams<T> {
    pub fn new(min: T, mode: T, max: T) -> Result<Self, KernelError> {
        let p = Self { min, mode, max };
        p.validate()?;
        Ok(p)
    }

    /// Point mass at `value`.
    pub fn fixed(value: T) -> Self {
        Self {
            min: value,
            mode: value,
            max: value,
        }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        let err = |reason| KernelError::InvalidTriangular {
            min: self.min.as_f64(),
            mode: self.mode.as_f64(),
            max: self.max.as_f64(),
            reason,
        };
        if !(self.min.is_finite() && self.mode.is_finite() && self.max.is_finite()) {
            return Err(err("values must be finite"));
        }
        if self.min < T::zero() {
            return Err(err("min must be >= 0"));
        }
        if !(self.min <= self.mode && self.mode <= self.max) {
            return Err(err("need min <= mode <= max"));
        }
        Ok(())
    }

    pub fn mean(&self) -> T {
        (self.min + self.mode + self.max) / T::lit(3.0)
    }

    pub fn variance(&self) -> T {
        let (a, c, b) = (self.min, self.mode, self.max);
        (a * a + b * b + c * c - a * b - a * c - b * c) / T::lit(18.0)
    }
}

/// Inverse CDF of the triangular distribution at `u` in `[0, 1)`.
pub fn triangular_inverse_cdf<T: Real>(p: &TriangularParams<T>, u: T) -> T {
    let span = p.max - p.min;
    if span <= T::zero() {
        return p.min;
    }
    let left = p.mode - p.min;
    if u < left / span {
        p.min + (u * span * left).sqrt()
    } else {
        p.max - ((T::one() - u) * span * (p.max - p.mode)).sqrt()
    }
}

pub fn sample_triangular<T: Real>(p: &TriangularParams<T>, s: &mut RngStream) -> T {
    triangular_inverse_cdf(p, s.uniform())
}

/// Inverse CDF of the exponential distribution: `-ln(1 - u) / rate`.
pub fn exponential_inverse_cdf<T: Real>(rate: T, u: T) -> Result<T, KernelError> {
    if !(rate > T::zero() && rate.is_finite()) {
        return Err(KernelError::InvalidRate(rate.as_f64()));
    }
    Ok(-(-u).ln_1p() / rate)
}

pub fn sample_exponential<T: Real>(
    rate_per_minute: T,
    s: &mut RngStream,
) -> Result<T, KernelError> {
    if !(rate_per_minute > T::zero() && rate_per_minute.is_finite()) {
        return Err(KernelError::InvalidRate(rate_per_minute.as_f64()));
    }
    exponential_inverse_cdf(rate_per_minute, s.uniform())
}

/// Service-time distribution of a server.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ServiceDist<T = f64> {
    Triangular { min: T, mode: T, max: T },
    Exponential { mean: T },
}

impl<T: Real> ServiceDist<T> {
    pub fn triangular(p: TriangularParams<T>) -> Self {
        ServiceDist::Triangular {
            min: p.min,
            mode: p.mode,
            max: p.max,
        }
    }

    pub fn as_triangular(&self) -> Option<TriangularParams<T>> {
        match *self {
            ServiceDist::Triangular { min, mode, max } => Some(TriangularParams { min, mode, max }),
            ServiceDist::Exponential { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        match self {
            ServiceDist::Triangular { .. } => {
                self.as_triangular().map(|p| p.validate()).unwrap_or(Ok(()))
            }
            ServiceDist::Exponential { mean } => {
                if *mean > T::zero() && mean.is_finite() {
                    Ok(())
                } else {
                    Err(KernelError::InvalidMean(mean.as_f64()))
                }
            }
        }
    }

    pub fn mean(&self) -> T {
        match self {
            ServiceDist::Triangular { .. } => {
                self.as_triangular().map(|p| p.mean()).unwrap_or(T::zero())
            }
            ServiceDist::Exponential { mean } => *mean,
        }
    }

    /// One draw; consumes exactly one uniform from `s`.
    pub fn sample(&self, s: &mut RngStream) -> T {
        let u = s.uniform();
        match self {
            ServiceDist::Triangular { min, mode, max } => triangular_inverse_cdf(
                &TriangularParams {
                    min: *min,
                    mode: *mode,
                    max: *max,
                },
                u,
            ),
            ServiceDist::Exponential { mean } => -(-u).ln_1p() * *mean,
        }
    }
}

/// Expected arrivals per operating hour, one rate per hour of the day.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
pub struct ArrivalSchedule<T: Real = f64> {
    hourly_rates: [T; HOURS_PER_DAY],
}

impl<T: Real> ArrivalSchedule<T> {
    pub fn new(rates: &[T]) -> Result<Self, KernelError> {
        if rates.len() != HOURS_PER_DAY {
            return Err(KernelError::ScheduleLength {
                expected: HOURS_PER_DAY,
                got: rates.len(),
            });
        }
        let mut hourly_rates = [T::zero(); HOURS_PER_DAY];
        for (hour, (&r, slot)) in rates.iter().zip(hourly_rates.iter_mut()).enumerate() {
            if !(r.is_finite() && r >= T::zero()) {
                return Err(KernelError::InvalidHourlyRate {
                    hour,
                    rate: r.as_f64(),
                });
            }
            *slot = r;
        }
        Ok(Self { hourly_rates })
    }

    pub fn zero() -> Self {
        Self {
            hourly_rates: [T::zero(); HOURS_PER_DAY],
        }
    }

    pub fn constant(per_hour: T) -> Result<Self, KernelError> {
        Self::new(&[per_hour; HOURS_PER_DAY])
    }

    pub fn hourly_rates(&self) -> &[T; HOURS_PER_DAY] {
        &self.hourly_rates
    }

    /// Arrivals per hour at `t`; zero outside the operating hours.
    pub fn rate_at(&self, t: SimTime<T>) -> T {
        match t.hour_index() {
            Some(h) if h < HOURS_PER_DAY => self.hourly_rates[h],
            _ => T::zero(),
        }
    }

    pub fn max_rate(&self) -> T {
        self.hourly_rates.iter().copied().fold(T::zero(), T::max)
    }

    pub fn expected_daily_arrivals(&self) -> T {
        self.hourly_rates
            .iter()
            .copied()
            .fold(T::zero(), |a, b| a + b)
    }
}

impl<T: Real> TryFrom<Vec<T>> for ArrivalSchedule<T> {
    type Error = KernelError;
    fn try_from(v: Vec<T>) -> Result<Self, Self::Error> {
        Self::new(&v)
    }
}

impl<T: Real> From<ArrivalSchedule<T>> for Vec<T> {
    fn from(s: ArrivalSchedule<T>) -> Self {
        s.hourly_rates.to_vec()
    }
}

/// Next event time after `now` of the piecewise-constant-rate Poisson process,
/// by thinning against the busiest hour. `None` when no arrival happens before
/// `horizon`.
///
/// Every candidate costs two uniforms (gap, acceptance), so the number of draws
/// depends only on the schedule and the stream.
pub fn next_arrival<T: Real>(
    sched: &ArrivalSchedule<T>,
    now: SimTime<T>,
    horizon: SimTime<T>,
    s: &mut RngStream,
) -> Option<SimTime<T>> {
    let peak = sched.max_rate();
    if peak <= T::zero() {
        return None;
    }
    let peak_per_minute = peak / T::lit(60.0);
    let mut t = now;
    loop {
        let gap = exponential_inverse_cdf(peak_per_minute, s.uniform()).ok()?;
        t = t + gap;
        if t.0 >= horizon.0 {
            return None;
        }
        if s.uniform::<T>() * peak < sched.rate_at(t) {
            return Some(t);
        }
    }
}
