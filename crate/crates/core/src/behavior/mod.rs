//! Reactive and proactive behavior of staff and students.
//!
//! The three proactive rules are plain predicates ([`should_issue_number`],
//! [`effective_service_time`], [`decide_skip`]) used directly by the process
//! logic of the DES mode. The hybrid mode wires the very same predicates into
//! condition transitions of per-agent [`StateChart`]s (see [`roles`]).

mod chart;
pub mod roles;
mod rules;

pub use chart::{ChartError, Signal, StateChart, StateId, Transition, Trigger};
pub use roles::AgentRole;
pub use rules::{
    decide_skip, effective_service_time, should_issue_number, skip_eligible, speedup_triggered,
    ticket_available, BehaviorRuleSet,
};
