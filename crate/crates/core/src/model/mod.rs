//! The university office: one simulated day under either execution mode.
//!
//! Visitors (general students, advisory students, phone calls) queue for the
//! receptionist. Advisory students then take a waiting number and queue for
//! one of the advisors, who only see students during the walk-in window.
//!
//! Both modes consume random numbers in the same order from the same streams,
//! so for equal seeds they produce identical days. Experiments normally give
//! each mode its own seeds; see the experiments module.

mod config;
mod des;
mod hybrid;
mod metrics;
mod office;
mod trace;

pub use config::{
    apply_override, AdvisoryConfig, ArrivalsConfig, ClockConfig, ConfigError, Mode,
    ReceptionConfig, ScenarioConfig, ScriptedArrival,
};
pub use metrics::{KindMetrics, PerKind, QueueMetrics, ReplicationMetrics};
pub use trace::{read_jsonl, write_jsonl, TraceEvent, TraceRecord};

use thiserror::Error;

use crate::kernel::KernelError;
use crate::queueing::{EntityTable, QueueError};
use office::Office;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Queue(#[from] QueueError),
    #[error("internal model error: {0}")]
    Internal(String),
}

/// Everything a simulated day leaves behind.
#[derive(Debug)]
pub struct DayOutcome {
    pub metrics: ReplicationMetrics,
    /// Empty unless tracing was requested.
    pub trace: Vec<TraceRecord>,
    pub entities: EntityTable,
}

/// Simulates one day in `mode`, ignoring `cfg.mode`.
pub fn simulate_day(
    cfg: &ScenarioConfig,
    mode: Mode,
    master_seed: u64,
    replication: u64,
    traced: bool,
) -> Result<DayOutcome, ModelError> {
    cfg.validate()?;
    let office = Office::new(cfg, master_seed, replication, traced);
    match mode {
        Mode::Des => des::run(office),
        Mode::Hybrid => hybrid::run(office),
    }
}

/// Simulates one day in the scenario's own mode and returns its measures.
pub fn run_day(
    cfg: &ScenarioConfig,
    master_seed: u64,
    replication: u64,
) -> Result<ReplicationMetrics, ModelError> {
    simulate_day(cfg, cfg.mode, master_seed, replication, false).map(|o| o.metrics)
}
