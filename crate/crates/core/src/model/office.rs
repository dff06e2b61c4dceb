//! State and primitive actions shared by both execution modes.
//!
//! Each mode decides *when* to call these; the actions themselves (who moves
//! where, which stream a draw comes from, what gets traced) live here once.

use crate::behavior::speedup_triggered;
use crate::kernel::{next_arrival, sample_triangular, RngStream, SimTime, StreamId};
use crate::queueing::{
    seize, EntityId, EntityKind, EntityTable, FifoQueue, QueueId, Resource, ResourceId,
    TicketCounter,
};

use super::config::ScenarioConfig;
use super::metrics::ReplicationMetrics;
use super::trace::{TraceEvent, TraceRecord};
use super::{DayOutcome, ModelError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ArrivalSource {
    Random(EntityKind),
    Script,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ClockEvent {
    WalkinOpen,
    WalkinClose,
    DayClose,
}

impl ClockEvent {
    fn trace_event(self) -> TraceEvent {
        match self {
            ClockEvent::WalkinOpen => TraceEvent::WalkinOpen,
            ClockEvent::WalkinClose => TraceEvent::WalkinClose,
            ClockEvent::DayClose => TraceEvent::DayClose,
        }
    }
}

fn arrival_stream(kind: EntityKind) -> StreamId {
    match kind {
        EntityKind::StudentGeneral => StreamId::ArrivalsGeneral,
        EntityKind::StudentAdvisory => StreamId::ArrivalsAdvisory,
        EntityKind::PhoneCall => StreamId::ArrivalsPhone,
    }
}

pub(crate) struct Office<'c> {
    pub cfg: &'c ScenarioConfig,
    pub entities: EntityTable,
    desk_q: FifoQueue,
    phone_q: Option<FifoQueue>,
    pub adv_q: FifoQueue,
    receptionist: Resource,
    advisors: Resource,
    tickets: TicketCounter,
    arrivals: [RngStream; 3],
    reception_rng: RngStream,
    advisor_rng: RngStream,
    pub behavior_rng: RngStream,
    script_cursor: usize,
    rushed: u64,
    trace: Option<Vec<TraceRecord>>,
    pub mean_adv: f64,
}

impl<'c> Office<'c> {
    pub fn new(cfg: &'c ScenarioConfig, master_seed: u64, replication: u64, traced: bool) -> Self {
        let s = |id| RngStream::new(master_seed, replication, id);
        Self {
            cfg,
            entities: EntityTable::new(),
            desk_q: FifoQueue::new(QueueId::Reception),
            phone_q: cfg
                .reception
                .split_phone_queue
                .then(|| FifoQueue::new(QueueId::ReceptionPhone)),
            adv_q: FifoQueue::new(QueueId::Advisory),
            receptionist: Resource::new(ResourceId::Reception, cfg.reception.capacity),
            advisors: Resource::new(ResourceId::Advisory, cfg.advisory.capacity),
            tickets: TicketCounter::new(),
            arrivals: EntityKind::ALL.map(|k| s(arrival_stream(k))),
            reception_rng: s(StreamId::ServiceReception),
            advisor_rng: s(StreamId::ServiceAdvisor),
            behavior_rng: s(StreamId::Behavior),
            script_cursor: 0,
            rushed: 0,
            trace: traced.then(Vec::new),
            mean_adv: cfg.mean_advisory_service(),
        }
    }

    fn log(
        &mut self,
        now: SimTime,
        event: TraceEvent,
        entity: Option<EntityId>,
        f: impl FnOnce(&mut TraceRecord),
    ) {
        if let Some(trace) = self.trace.as_mut() {
            let mut r = TraceRecord::new(now.0, event);
            if let Some(id) = entity {
                r.entity = Some(id);
                r.kind = Some(self.entities.get(id).kind);
            }
            f(&mut r);
            trace.push(r);
        }
    }

    pub fn clock(&mut self, now: SimTime, ev: ClockEvent) {
        self.log(now, ev.trace_event(), None, |_| {});
    }

    /// The day's fixed timetable, in scheduling order.
    pub fn timetable(&self) -> [(SimTime, ClockEvent); 3] {
        let c = &self.cfg.clock;
        [
            (c.walkin_open, ClockEvent::WalkinOpen),
            (c.walkin_close, ClockEvent::WalkinClose),
            (c.day_close, ClockEvent::DayClose),
        ]
    }

    fn draw_next(&mut self, src: ArrivalSource, now: SimTime) -> Option<(SimTime, ArrivalSource)> {
        match src {
            ArrivalSource::Random(kind) => {
                let sched = self.cfg.arrivals.schedule(kind);
                let slot = EntityKind::ALL
                    .iter()
                    .position(|k| *k == kind)
                    .expect("known kind");
                next_arrival(
                    sched,
                    now,
                    self.cfg.clock.day_close,
                    &mut self.arrivals[slot],
                )
                .map(|t| (t, src))
            }
            ArrivalSource::Script => self
                .cfg
                .arrivals
                .scripted
                .get(self.script_cursor)
                .map(|a| (a.time, ArrivalSource::Script)),
        }
    }

    /// First arrival of every source, in a fixed order.
    pub fn first_arrivals(&mut self) -> Vec<(SimTime, ArrivalSource)> {
        let open = self.cfg.clock.day_open;
        if self.cfg.arrivals.scripted.is_empty() {
            EntityKind::ALL
                .into_iter()
                .filter_map(|k| self.draw_next(ArrivalSource::Random(k), open))
                .collect()
        } else {
            self.draw_next(ArrivalSource::Script, open)
                .into_iter()
                .collect()
        }
    }

    /// Consumes the arrival due now: its kind, and the same source's next arrival.
    pub fn take_arrival(
        &mut self,
        src: ArrivalSource,
        now: SimTime,
    ) -> (EntityKind, Option<(SimTime, ArrivalSource)>) {
        let kind = match src {
            ArrivalSource::Random(kind) => kind,
            ArrivalSource::Script => {
                let kind = self.cfg.arrivals.scripted[self.script_cursor].kind;
                self.script_cursor += 1;
                kind
            }
        };
        (kind, self.draw_next(src, now))
    }

    pub fn admit(&mut self, kind: EntityKind, now: SimTime) -> EntityId {
        let id = self.entities.create(kind, now);
        self.log(now, TraceEvent::Arrive, Some(id), |_| {});
        id
    }

    pub fn kind(&self, id: EntityId) -> EntityKind {
        self.entities.get(id).kind
    }

    pub fn reception_len(&self) -> usize {
        self.desk_q.len() + self.phone_q.as_ref().map_or(0, FifoQueue::len)
    }

    /// The crowd an arriving student sees: the reception line plus number holders.
    pub fn observed_len(&self) -> usize {
        self.reception_len() + self.adv_q.len()
    }

    pub fn join_reception(
        &mut self,
        id: EntityId,
        now: SimTime,
        at_front: bool,
    ) -> Result<(), ModelError> {
        if at_front {
            self.entities.get_mut(id).skipped = true;
            self.log(now, TraceEvent::Skip, Some(id), |_| {});
        }
        let e = self.entities.get_mut(id);
        let q = match self.phone_q.as_mut() {
            Some(pq) if e.kind == EntityKind::PhoneCall => pq,
            _ => &mut self.desk_q,
        };
        q.enqueue(e, now, at_front)?;
        let len = q.len();
        self.log(now, TraceEvent::JoinReception, Some(id), |r| {
            r.queue_len = Some(len)
        });
        Ok(())
    }

    /// Takes the next visitor onto the desk. Desk visitors come before held calls
    /// when the phone line is separate. Nobody is taken after closing.
    pub fn seize_reception(&mut self, now: SimTime) -> Option<EntityId> {
        if now.0 >= self.cfg.clock.day_close.0 {
            return None;
        }
        let q = match self.phone_q.as_mut() {
            Some(pq) if self.desk_q.is_empty() => pq,
            _ => &mut self.desk_q,
        };
        seize(&mut self.receptionist, q, &mut self.entities, now)
    }

    pub fn start_reception(&mut self, id: EntityId, now: SimTime) -> SimTime {
        let e = self.entities.get(id);
        let duration = if e.skipped {
            sample_triangular(&self.cfg.rules.quick_service, &mut self.reception_rng)
        } else {
            self.cfg.reception.service.sample(&mut self.reception_rng)
        };
        let len = self.reception_len();
        self.log(now, TraceEvent::StartReception, Some(id), |r| {
            r.duration = Some(duration);
            r.queue_len = Some(len);
        });
        now + duration
    }

    pub fn finish_reception(&mut self, id: EntityId, now: SimTime) -> Result<(), ModelError> {
        self.receptionist.release()?;
        self.log(now, TraceEvent::EndReception, Some(id), |_| {});
        Ok(())
    }

    /// Whether the visitor just served at the desk still needs an advisor.
    pub fn needs_advisor(&self, id: EntityId) -> bool {
        let e = self.entities.get(id);
        e.kind == EntityKind::StudentAdvisory && !e.skipped
    }

    pub fn issue_ticket(&mut self, id: EntityId, now: SimTime) -> u32 {
        let t = self.tickets.issue(self.entities.get_mut(id), now);
        self.log(now, TraceEvent::IssueTicket, Some(id), |r| {
            r.ticket = Some(t.number)
        });
        t.number
    }

    pub fn join_advisory(&mut self, id: EntityId, now: SimTime) -> Result<(), ModelError> {
        self.adv_q.enqueue(self.entities.get_mut(id), now, false)?;
        let len = self.adv_q.len();
        let ticket = self.entities.get(id).ticket;
        self.log(now, TraceEvent::JoinAdvisory, Some(id), |r| {
            r.queue_len = Some(len);
            r.ticket = ticket;
        });
        Ok(())
    }

    pub fn turn_away(&mut self, id: EntityId, now: SimTime) {
        self.entities.get_mut(id).turned_away = true;
        self.log(now, TraceEvent::TurnAway, Some(id), |_| {});
    }

    pub fn mark_served(&mut self, id: EntityId) {
        self.entities.get_mut(id).served = true;
    }

    pub fn walkin_open(&self, now: SimTime) -> bool {
        let c = &self.cfg.clock;
        c.walkin_open.0 <= now.0 && now.0 < c.walkin_close.0
    }

    pub fn seize_advisory(&mut self, now: SimTime) -> Option<EntityId> {
        seize(&mut self.advisors, &mut self.adv_q, &mut self.entities, now)
    }

    /// Whether the advisor about to start should hurry, given who is still waiting.
    pub fn behind_schedule(&self, now: SimTime) -> bool {
        speedup_triggered(
            self.adv_q.len(),
            now,
            self.mean_adv,
            self.cfg.advisory.capacity,
            &self.cfg.rules,
        )
    }

    /// Draws the advisory service and returns its end time.
    pub fn start_advisory(&mut self, id: EntityId, now: SimTime, rushed: bool) -> SimTime {
        let base = self.cfg.advisory.service.sample(&mut self.advisor_rng);
        let duration = if rushed {
            base * self.cfg.rules.speedup_factor
        } else {
            base
        };
        self.rushed += rushed as u64;
        let len = self.adv_q.len();
        let ticket = self.entities.get(id).ticket;
        self.log(now, TraceEvent::StartAdvisory, Some(id), |r| {
            r.duration = Some(duration);
            r.queue_len = Some(len);
            r.ticket = ticket;
            r.rushed = rushed;
        });
        now + duration
    }

    pub fn finish_advisory(&mut self, id: EntityId, now: SimTime) -> Result<(), ModelError> {
        self.advisors.release()?;
        self.log(now, TraceEvent::EndAdvisory, Some(id), |_| {});
        Ok(())
    }

    /// Visitors neither served nor turned away once all activity has stopped.
    pub fn leftovers(&self) -> Vec<EntityId> {
        self.entities
            .iter()
            .filter(|e| !e.served && !e.turned_away)
            .map(|e| e.id)
            .collect()
    }

    pub fn finish_day(mut self, end: SimTime) -> Result<DayOutcome, ModelError> {
        if self.receptionist.busy() != 0 || self.advisors.busy() != 0 {
            return Err(ModelError::Internal(
                "a server is still busy after the last event".into(),
            ));
        }
        let close = self.cfg.clock.day_close;
        let end = SimTime(end.0.max(close.0));
        for id in self.leftovers() {
            self.log(end, TraceEvent::Unserved, Some(id), |_| {});
        }
        let mut reception: Vec<&FifoQueue> = vec![&self.desk_q];
        reception.extend(self.phone_q.as_ref());
        let metrics = ReplicationMetrics::collect(
            &self.entities,
            &reception,
            &self.adv_q,
            self.tickets.issued(),
            self.rushed,
            close,
            end,
        );
        Ok(DayOutcome {
            metrics,
            trace: self.trace.unwrap_or_default(),
            entities: self.entities,
        })
    }
}
