//! FIFO queues, capacitated resources and waiting-number tickets.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::SimTime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    /// Walk-in student with a general enquiry for the receptionist.
    #[serde(rename = "general")]
    StudentGeneral,
    /// Walk-in student who wants to see an advisor.
    #[serde(rename = "advisory")]
    StudentAdvisory,
    #[serde(rename = "phone")]
    PhoneCall,
}

impl EntityKind {
    pub const ALL: [EntityKind; 3] = [
        EntityKind::StudentGeneral,
        EntityKind::StudentAdvisory,
        EntityKind::PhoneCall,
    ];

    pub fn is_student(self) -> bool {
        !matches!(self, EntityKind::PhoneCall)
    }

    pub fn label(self) -> &'static str {
        match self {
            EntityKind::StudentGeneral => "general",
            EntityKind::StudentAdvisory => "advisory",
            EntityKind::PhoneCall => "phone",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityId(pub u32);

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueueId {
    /// Reception line; holds phone calls too unless the desk and phone lines are split.
    Reception,
    /// Separate phone line, only used when calls do not share the desk queue.
    ReceptionPhone,
    /// Ticket holders waiting for an advisor.
    Advisory,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueueEntry {
    pub queue: QueueId,
    pub enter: SimTime,
    pub leave: Option<SimTime>,
}

impl QueueEntry {
    pub fn wait(&self) -> Option<f64> {
        self.leave.map(|l| l - self.enter)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub kind: EntityKind,
    pub arrival_time: SimTime,
    pub queue_entries: Vec<QueueEntry>,
    pub served: bool,
    pub turned_away: bool,
    /// Jumped the reception line with a quick question.
    pub skipped: bool,
    pub ticket: Option<u32>,
}

impl Entity {
    pub fn new(id: EntityId, kind: EntityKind, arrival_time: SimTime) -> Self {
        Self {
            id,
            kind,
            arrival_time,
            queue_entries: Vec::new(),
            served: false,
            turned_away: false,
            skipped: false,
            ticket: None,
        }
    }

    /// Sum of completed waits.
    pub fn total_wait(&self) -> f64 {
        self.queue_entries.iter().filter_map(QueueEntry::wait).sum()
    }

    pub fn is_waiting_in(&self, queue: QueueId) -> bool {
        self.queue_entries
            .iter()
            .any(|q| q.queue == queue && q.leave.is_none())
    }
}

/// All entities of one replication, indexed by id.
#[derive(Clone, Debug, Default)]
pub struct EntityTable {
    entities: Vec<Entity>,
}

impl EntityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&mut self, kind: EntityKind, now: SimTime) -> EntityId {
        let id = EntityId(self.entities.len() as u32);
        self.entities.push(Entity::new(id, kind, now));
        id
    }

    pub fn get(&self, id: EntityId) -> &Entity {
        &self.entities[id.0 as usize]
    }

    pub fn get_mut(&mut self, id: EntityId) -> &mut Entity {
        &mut self.entities[id.0 as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Entity> {
        self.entities.iter()
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueueError {
    #[error("entity {entity} is already waiting in {queue:?}")]
    Duplicate { entity: EntityId, queue: QueueId },
    #[error("release of idle resource {0:?}")]
    ReleaseIdle(ResourceId),
}

/// Running statistics of a queue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QueueStats {
    pub entered: u64,
    pub departed: u64,
    pub total_wait: f64,
    pub max_len: usize,
    /// Integral of the queue length over time.
    pub length_area: f64,
    pub last_change: f64,
}

impl QueueStats {
    pub fn mean_wait(&self) -> f64 {
        if self.departed == 0 {
            0.0
        } else {
            self.total_wait / self.departed as f64
        }
    }
}

/// A single waiting line.
#[derive(Clone, Debug)]
pub struct FifoQueue {
    id: QueueId,
    waiting: VecDeque<(EntityId, SimTime)>,
    stats: QueueStats,
}

impl FifoQueue {
    pub fn new(id: QueueId) -> Self {
        Self {
            id,
            waiting: VecDeque::new(),
            stats: QueueStats::default(),
        }
    }

    pub fn id(&self) -> QueueId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.waiting.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waiting.is_empty()
    }

    pub fn head(&self) -> Option<EntityId> {
        self.waiting.front().map(|(id, _)| *id)
    }

    pub fn ids(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.waiting.iter().map(|(id, _)| *id)
    }

    pub fn stats(&self) -> &QueueStats {
        &self.stats
    }

    fn touch(&mut self, now: SimTime) {
        let dt = now.0 - self.stats.last_change;
        if dt > 0.0 {
            self.stats.length_area += dt * self.waiting.len() as f64;
            self.stats.last_change = now.0;
        }
    }

    /// Time-average length over `[0, until]`.
    pub fn time_average_len(&self, until: SimTime) -> f64 {
        let tail = (until.0 - self.stats.last_change).max(0.0) * self.waiting.len() as f64;
        if until.0 <= 0.0 {
            0.0
        } else {
            (self.stats.length_area + tail) / until.0
        }
    }

    /// Adds `e` at the tail, or at the head when `at_front` is set.
    pub fn enqueue(
        &mut self,
        e: &mut Entity,
        now: SimTime,
        at_front: bool,
    ) -> Result<(), QueueError> {
        if self.waiting.iter().any(|(id, _)| *id == e.id) {
            return Err(QueueError::Duplicate {
                entity: e.id,
                queue: self.id,
            });
        }
        self.touch(now);
        if at_front {
            self.waiting.push_front((e.id, now));
        } else {
            self.waiting.push_back((e.id, now));
        }
        e.queue_entries.push(QueueEntry {
            queue: self.id,
            enter: now,
            leave: None,
        });
        self.stats.entered += 1;
        self.stats.max_len = self.stats.max_len.max(self.waiting.len());
        Ok(())
    }

    /// Removes the head and stamps its leave time.
    pub fn dequeue(&mut self, entities: &mut EntityTable, now: SimTime) -> Option<EntityId> {
        self.touch(now);
        let (id, enter) = self.waiting.pop_front()?;
        let e = entities.get_mut(id);
        if let Some(entry) = e
            .queue_entries
            .iter_mut()
            .rev()
            .find(|q| q.queue == self.id && q.leave.is_none())
        {
            entry.leave = Some(now);
        }
        self.stats.departed += 1;
        self.stats.total_wait += now - enter;
        Some(id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceId {
    Reception,
    Advisory,
}

/// A pool of identical servers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resource {
    id: ResourceId,
    capacity: u32,
    busy: u32,
}

impl Resource {
    /// `capacity` must be positive.
    pub fn new(id: ResourceId, capacity: u32) -> Self {
        assert!(capacity > 0, "resource {id:?} needs a positive capacity");
        Self {
            id,
            capacity,
            busy: 0,
        }
    }

    pub fn id(&self) -> ResourceId {
        self.id
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn busy(&self) -> u32 {
        self.busy
    }

    pub fn has_free_server(&self) -> bool {
        self.busy < self.capacity
    }

    pub fn release(&mut self) -> Result<(), QueueError> {
        if self.busy == 0 {
            return Err(QueueError::ReleaseIdle(self.id));
        }
        self.busy -= 1;
        Ok(())
    }
}

/// Takes the head of `q` onto a free server of `r`, if both exist.
pub fn seize(
    r: &mut Resource,
    q: &mut FifoQueue,
    entities: &mut EntityTable,
    now: SimTime,
) -> Option<EntityId> {
    if !r.has_free_server() || q.is_empty() {
        return None;
    }
    let id = q.dequeue(entities, now)?;
    r.busy += 1;
    Some(id)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaitingTicket {
    pub number: u32,
    pub holder: EntityId,
    pub issue_time: SimTime,
}

/// Hands out waiting numbers 1, 2, 3, ... for one day.
#[derive(Clone, Debug, Default)]
pub struct TicketCounter {
    last: u32,
}

impl TicketCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn issued(&self) -> u32 {
        self.last
    }

    pub fn issue(&mut self, e: &mut Entity, now: SimTime) -> WaitingTicket {
        self.last += 1;
        e.ticket = Some(self.last);
        WaitingTicket {
            number: self.last,
            holder: e.id,
            issue_time: now,
        }
    }
}
