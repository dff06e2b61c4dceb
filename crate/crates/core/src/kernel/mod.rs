//! Next-event time-advance engine and seeded random variates.
//!
//! Both paradigm modes of the office model drive the same [`EventCalendar`];
//! all randomness flows through labelled [`RngStream`]s so that a replication
//! is a pure function of `(scenario, master_seed, replication_index)`.

mod calendar;
mod dist;
mod rng;
mod time;

pub use calendar::{EventCalendar, SimEvent};
pub use dist::{
    exponential_inverse_cdf, next_arrival, sample_exponential, sample_triangular,
    triangular_inverse_cdf, ArrivalSchedule, ServiceDist, TriangularParams, HOURS_PER_DAY,
};
pub use rng::{mix_seed, RngStream, StreamId};
pub use time::{SimTime, DAY_MINUTES};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("event scheduled in the past: t={time} < clock={clock}")]
    ScheduledInPast { time: f64, clock: f64 },
    #[error("non-finite event time {0}")]
    NonFiniteTime(f64),
    #[error("invalid triangular parameters (min={min}, mode={mode}, max={max}): {reason}")]
    InvalidTriangular {
        min: f64,
        mode: f64,
        max: f64,
        reason: &'static str,
    },
    #[error("exponential rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("exponential mean must be positive and finite, got {0}")]
    InvalidMean(f64),
    #[error("arrival schedule needs exactly {expected} hourly rates, got {got}")]
    ScheduleLength { expected: usize, got: usize },
    #[error("arrival schedule rate for hour {hour} must be finite and >= 0, got {rate}")]
    InvalidHourlyRate { hour: usize, rate: f64 },
}
