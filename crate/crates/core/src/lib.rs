//! Simulation of a walk-in student support office with reactive and proactive behaviour,
//! runnable as a process-oriented model or as interacting state-chart agents.

pub mod behavior;
pub mod experiments;
pub mod kernel;
pub mod model;
pub mod queueing;
pub mod real;
pub mod report;
pub mod stats;

pub use real::Real;

/// Minutes since the office opens, at the default precision.
pub type Time = kernel::SimTime<f64>;
pub type Triangular = kernel::TriangularParams<f64>;
pub type Service = kernel::ServiceDist<f64>;
pub type Schedule = kernel::ArrivalSchedule<f64>;
pub type Calendar<A> = kernel::EventCalendar<f64, A>;
pub type Event<A> = kernel::SimEvent<f64, A>;
pub type TestResult = stats::TTestResult<f64>;
pub type SampleSummary = stats::Summary<f64>;
