use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{KernelError, SimTime};
use crate::real::Real;

/// A scheduled action. `(time, seq)` totally orders all events of a run.
#[derive(Debug, Clone)]
pub struct SimEvent<T, A> {
    pub time: SimTime<T>,
    pub seq: u64,
    pub action: A,
}

impl<T: Real, A> PartialEq for SimEvent<T, A> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real, A> Eq for SimEvent<T, A> {}

impl<T: Real, A> PartialOrd for SimEvent<T, A> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real, A> Ord for SimEvent<T, A> {
    // Reversed so that `BinaryHeap` (a max-heap) pops the earliest event.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Future event list with a monotone clock.
///
/// Equal-time events pop in insertion order.
#[derive(Debug)]
pub struct EventCalendar<T, A> {
    pending: BinaryHeap<SimEvent<T, A>>,
    clock: SimTime<T>,
    next_seq: u64,
}

impl<T: Real, A> Default for EventCalendar<T, A> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real, A> EventCalendar<T, A> {
    pub fn new() -> Self {
        Self::starting_at(SimTime::zero())
    }

    pub fn starting_at(clock: SimTime<T>) -> Self {
        Self {
            pending: BinaryHeap::new(),
            clock,
            next_seq: 0,
        }
    }

    pub fn now(&self) -> SimTime<T> {
        self.clock
    }

    /// Schedules `action` at absolute `time` and returns its sequence number.
    pub fn schedule(&mut self, time: SimTime<T>, action: A) -> Result<u64, KernelError> {
        if !time.0.is_finite() {
            return Err(KernelError::NonFiniteTime(time.0.as_f64()));
        }
        if time.0 < self.clock.0 {
            return Err(KernelError::ScheduledInPast {
                time: time.0.as_f64(),
                clock: self.clock.0.as_f64(),
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.pending.push(SimEvent { time, seq, action });
        Ok(seq)
    }

    /// Schedules `action` after a non-negative `delay` from the current clock.
    pub fn schedule_in(&mut self, delay: T, action: A) -> Result<u64, KernelError> {
        self.schedule(self.clock + delay, action)
    }

    /// Removes the earliest event and advances the clock to its time.
    pub fn pop_next(&mut self) -> Option<SimEvent<T, A>> {
        let ev = self.pending.pop()?;
        self.clock = ev.time;
        Some(ev)
    }

    pub fn peek_time(&self) -> Option<SimTime<T>> {
        self.pending.peek().map(|e| e.time)
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }
}
