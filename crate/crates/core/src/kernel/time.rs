use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Length of the operating day (9:00 am to 5:00 pm) in minutes.
pub const DAY_MINUTES: f64 = 480.0;

/// Minutes since the office opens at 9:00 am.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimTime<T = f64>(pub T);

impl<T: Real> SimTime<T> {
    pub fn zero() -> Self {
        SimTime(T::zero())
    }

    pub fn minutes(self) -> T {
        self.0
    }

    /// Zero-based operating hour containing this instant (`0` = 9:00-10:00 am).
    pub fn hour_index(self) -> Option<usize> {
        if self.0 < T::zero() || !self.0.is_finite() {
            return None;
        }
        (self.0 / T::lit(60.0)).floor().to_usize()
    }

    /// Total order for finite times; NaN never reaches the calendar.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

impl<T: Real> Add<T> for SimTime<T> {
    type Output = Self;
    fn add(self, rhs: T) -> Self {
        SimTime(self.0 + rhs)
    }
}

impl<T: Real> Sub for SimTime<T> {
    type Output = T;
    fn sub(self, rhs: Self) -> T {
        self.0 - rhs.0
    }
}

impl<T: Real> fmt::Display for SimTime<T> {
    /// Formats as a wall-clock time, e.g. `13:05`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.0.as_f64();
        let mins = total.floor() as i64;
        let (h, m) = (9 + mins.div_euclid(60), mins.rem_euclid(60));
        write!(f, "{h:02}:{m:02}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hour_buckets() {
        assert_eq!(SimTime(0.0).hour_index(), Some(0));
        assert_eq!(SimTime(59.999).hour_index(), Some(0));
        assert_eq!(SimTime(60.0).hour_index(), Some(1));
        assert_eq!(SimTime(479.0f32).hour_index(), Some(7));
        assert_eq!(SimTime(-1.0).hour_index(), None);
    }

    #[test]
    fn clock_display() {
        assert_eq!(SimTime(240.0).to_string(), "13:00");
        assert_eq!(SimTime(410.5).to_string(), "15:50");
    }
}
