//! Output measures of one simulated day.

use serde::{Deserialize, Serialize};

use crate::kernel::SimTime;
use crate::queueing::{Entity, EntityKind, EntityTable, FifoQueue, QueueId};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KindMetrics {
    pub arrivals: u64,
    pub served: u64,
    pub turned_away: u64,
    pub not_served: u64,
    pub skipped: u64,
    pub mean_wait_minutes: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerKind {
    pub general: KindMetrics,
    pub advisory: KindMetrics,
    pub phone: KindMetrics,
}

impl PerKind {
    pub fn get(&self, kind: EntityKind) -> &KindMetrics {
        match kind {
            EntityKind::StudentGeneral => &self.general,
            EntityKind::StudentAdvisory => &self.advisory,
            EntityKind::PhoneCall => &self.phone,
        }
    }

    fn get_mut(&mut self, kind: EntityKind) -> &mut KindMetrics {
        match kind {
            EntityKind::StudentGeneral => &mut self.general,
            EntityKind::StudentAdvisory => &mut self.advisory,
            EntityKind::PhoneCall => &mut self.phone,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QueueMetrics {
    pub entered: u64,
    pub departed: u64,
    /// Mean over everyone who left the queue for service.
    pub mean_wait_minutes: f64,
    pub max_len: usize,
    /// Time-average number waiting over the simulated day.
    pub mean_len: f64,
}

impl QueueMetrics {
    fn absorb(&mut self, q: &FifoQueue, until: SimTime) {
        let s = q.stats();
        let total = self.mean_wait_minutes * self.departed as f64 + s.total_wait;
        self.entered += s.entered;
        self.departed += s.departed;
        self.mean_wait_minutes = if self.departed == 0 {
            0.0
        } else {
            total / self.departed as f64
        };
        self.max_len = self.max_len.max(s.max_len);
        self.mean_len += q.time_average_len(until);
    }
}

/// Measures of one replication.
///
/// `n_not_served` counts visitors still waiting when the office shut (in the
/// reception line, or holding an advisory number). Students refused a number
/// are counted in `turned_away` instead, so that
/// `n_served + n_not_served + turned_away == n_arrivals`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReplicationMetrics {
    /// Mean over every completed queue wait of served visitors, both lines, all kinds.
    pub mean_wait_minutes: f64,
    pub n_arrivals: u64,
    pub n_served: u64,
    pub n_not_served: u64,
    pub turned_away: u64,
    pub left_in_reception: u64,
    pub left_holding_ticket: u64,
    pub skipped: u64,
    pub tickets_issued: u64,
    pub rushed_services: u64,
    /// Clock when the last service finished (never earlier than closing).
    pub end_time: f64,
    pub per_kind: PerKind,
    pub reception_queue: QueueMetrics,
    pub advisory_queue: QueueMetrics,
}

impl ReplicationMetrics {
    pub fn is_conserved(&self) -> bool {
        self.n_served + self.n_not_served + self.turned_away == self.n_arrivals
    }

    pub(crate) fn collect(
        entities: &EntityTable,
        reception: &[&FifoQueue],
        advisory: &FifoQueue,
        tickets_issued: u32,
        rushed_services: u64,
        close: SimTime,
        end: SimTime,
    ) -> Self {
        let mut m = ReplicationMetrics {
            tickets_issued: tickets_issued as u64,
            rushed_services,
            end_time: end.0,
            ..Default::default()
        };
        let (mut wait_sum, mut wait_n) = (0.0, 0u64);
        let mut kind_wait = [(0.0f64, 0u64); 3];
        for e in entities.iter() {
            m.n_arrivals += 1;
            let k = m.per_kind.get_mut(e.kind);
            k.arrivals += 1;
            k.skipped += e.skipped as u64;
            m.skipped += e.skipped as u64;
            if e.served {
                m.n_served += 1;
                k.served += 1;
                let slot = &mut kind_wait[kind_slot(e.kind)];
                for w in e.queue_entries.iter().filter_map(|q| q.wait()) {
                    wait_sum += w;
                    wait_n += 1;
                    slot.0 += w;
                    slot.1 += 1;
                }
            } else if e.turned_away {
                m.turned_away += 1;
                k.turned_away += 1;
            } else {
                m.n_not_served += 1;
                k.not_served += 1;
                if waiting_for_advisor(e) {
                    m.left_holding_ticket += 1;
                } else {
                    m.left_in_reception += 1;
                }
            }
        }
        m.mean_wait_minutes = mean(wait_sum, wait_n);
        for kind in EntityKind::ALL {
            let k = m.per_kind.get_mut(kind);
            let (sum, n) = kind_wait[kind_slot(kind)];
            k.mean_wait_minutes = mean(sum, n);
        }
        for q in reception {
            m.reception_queue.absorb(q, close);
        }
        m.advisory_queue.absorb(advisory, close);
        m
    }
}

fn waiting_for_advisor(e: &Entity) -> bool {
    e.is_waiting_in(QueueId::Advisory)
}

fn kind_slot(kind: EntityKind) -> usize {
    match kind {
        EntityKind::StudentGeneral => 0,
        EntityKind::StudentAdvisory => 1,
        EntityKind::PhoneCall => 2,
    }
}

fn mean(sum: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}
