use std::fmt;

use thiserror::Error;

pub type StateId = &'static str;

/// What makes a transition fire.
pub enum Trigger<C> {
    /// A named message from another agent or the kernel.
    Message(&'static str),
    /// A named guard over the agent's context, checked on [`Signal::Evaluate`].
    Condition(&'static str, fn(&C) -> bool),
    /// Expiry of a named timer scheduled on the kernel.
    Timer(&'static str),
}

impl<C> Clone for Trigger<C> {
    fn clone(&self) -> Self {
        match self {
            Trigger::Message(m) => Trigger::Message(m),
            Trigger::Condition(n, f) => Trigger::Condition(n, *f),
            Trigger::Timer(t) => Trigger::Timer(t),
        }
    }
}

impl<C> fmt::Debug for Trigger<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trigger::Message(m) => write!(f, "message({m})"),
            Trigger::Condition(n, _) => write!(f, "condition({n})"),
            Trigger::Timer(t) => write!(f, "timer({t})"),
        }
    }
}

/// What is delivered to a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signal<'a> {
    Message(&'a str),
    Timer(&'a str),
    /// Re-check the condition transitions leaving the current state.
    Evaluate,
}

pub struct Transition<C> {
    pub from: StateId,
    pub to: StateId,
    pub trigger: Trigger<C>,
}

impl<C> Clone for Transition<C> {
    fn clone(&self) -> Self {
        Self {
            from: self.from,
            to: self.to,
            trigger: self.trigger.clone(),
        }
    }
}

impl<C> fmt::Debug for Transition<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --{:?}--> {}", self.from, self.trigger, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("state `{0}` is not declared")]
    UnknownState(StateId),
    #[error("state `{0}` declared twice")]
    DuplicateState(StateId),
}

/// A flat state machine. The first transition (in declaration order) that
/// leaves the current state and matches the signal fires; at most one fires
/// per dispatch.
#[derive(Clone, Debug)]
pub struct StateChart<C> {
    states: Vec<StateId>,
    current: StateId,
    transitions: Vec<Transition<C>>,
}

impl<C> StateChart<C> {
    pub fn new(
        states: &[StateId],
        initial: StateId,
        transitions: Vec<Transition<C>>,
    ) -> Result<Self, ChartError> {
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(ChartError::DuplicateState(s));
            }
        }
        let known = |s: StateId| {
            if states.contains(&s) {
                Ok(())
            } else {
                Err(ChartError::UnknownState(s))
            }
        };
        known(initial)?;
        for t in &transitions {
            known(t.from)?;
            known(t.to)?;
        }
        Ok(Self {
            states: states.to_vec(),
            current: initial,
            transitions,
        })
    }

    pub fn current(&self) -> StateId {
        self.current
    }

    pub fn is_in(&self, state: StateId) -> bool {
        self.current == state
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition<C>] {
        &self.transitions
    }

    /// Fires the first matching transition and returns the new state, or
    /// leaves the chart unchanged and returns `None`.
    pub fn dispatch(&mut self, signal: Signal<'_>, ctx: &C) -> Option<StateId> {
        let fired = self.transitions.iter().find(|t| {
            t.from == self.current
                && match (&t.trigger, signal) {
                    (Trigger::Message(m), Signal::Message(s)) => *m == s,
                    (Trigger::Timer(m), Signal::Timer(s)) => *m == s,
                    (Trigger::Condition(_, guard), Signal::Evaluate) => guard(ctx),
                    _ => false,
                }
        })?;
        self.current = fired.to;
        Some(fired.to)
    }
}
