//! Process-oriented execution: passive entities, central process logic.

use crate::behavior::{decide_skip, ticket_available};
use crate::kernel::{EventCalendar, SimTime};
use crate::queueing::EntityId;

use super::office::{ArrivalSource, ClockEvent, Office};
use super::{DayOutcome, ModelError};

#[derive(Clone, Copy, Debug)]
enum Event {
    Arrival(ArrivalSource),
    ReceptionDone(EntityId),
    AdvisoryDone(EntityId),
    Clock(ClockEvent),
}

struct Des<'c> {
    office: Office<'c>,
    cal: EventCalendar<f64, Event>,
}

pub(crate) fn run(mut office: Office<'_>) -> Result<DayOutcome, ModelError> {
    let mut cal = EventCalendar::starting_at(office.cfg.clock.day_open);
    for (t, src) in office.first_arrivals() {
        cal.schedule(t, Event::Arrival(src))?;
    }
    for (t, ev) in office.timetable() {
        cal.schedule(t, Event::Clock(ev))?;
    }
    let mut des = Des { office, cal };
    while let Some(ev) = des.cal.pop_next() {
        let now = ev.time;
        match ev.action {
            Event::Arrival(src) => des.arrival(src, now)?,
            Event::ReceptionDone(id) => des.reception_done(id, now)?,
            Event::AdvisoryDone(id) => des.advisory_done(id, now)?,
            Event::Clock(c) => {
                des.office.clock(now, c);
                if c == ClockEvent::WalkinOpen {
                    des.try_start_advisory(now)?;
                }
            }
        }
    }
    let end = des.cal.now();
    des.office.finish_day(end)
}

impl Des<'_> {
    fn arrival(&mut self, src: ArrivalSource, now: SimTime) -> Result<(), ModelError> {
        let (kind, next) = self.office.take_arrival(src, now);
        if let Some((t, src)) = next {
            self.cal.schedule(t, Event::Arrival(src))?;
        }
        let id = self.office.admit(kind, now);
        let observed = self.office.observed_len();
        let cfg = self.office.cfg;
        let skip = decide_skip(kind, observed, &cfg.rules, &mut self.office.behavior_rng);
        self.office.join_reception(id, now, skip)?;
        self.try_start_reception(now)
    }

    fn try_start_reception(&mut self, now: SimTime) -> Result<(), ModelError> {
        while let Some(id) = self.office.seize_reception(now) {
            let done = self.office.start_reception(id, now);
            self.cal.schedule(done, Event::ReceptionDone(id))?;
        }
        Ok(())
    }

    fn reception_done(&mut self, id: EntityId, now: SimTime) -> Result<(), ModelError> {
        self.office.finish_reception(id, now)?;
        let mut ticketed = false;
        if self.office.needs_advisor(id) {
            let cfg = self.office.cfg;
            if ticket_available(
                self.office.adv_q.len(),
                now,
                self.office.mean_adv,
                cfg.advisory.capacity,
                &cfg.rules,
                cfg.clock.walkin_close,
            ) {
                self.office.issue_ticket(id, now);
                self.office.join_advisory(id, now)?;
                ticketed = true;
            } else {
                self.office.turn_away(id, now);
            }
        } else {
            self.office.mark_served(id);
        }
        self.try_start_reception(now)?;
        if ticketed {
            self.try_start_advisory(now)?;
        }
        Ok(())
    }

    fn try_start_advisory(&mut self, now: SimTime) -> Result<(), ModelError> {
        if !self.office.walkin_open(now) {
            return Ok(());
        }
        while let Some(id) = self.office.seize_advisory(now) {
            let rushed = self.office.behind_schedule(now);
            let done = self.office.start_advisory(id, now, rushed);
            self.cal.schedule(done, Event::AdvisoryDone(id))?;
        }
        Ok(())
    }

    fn advisory_done(&mut self, id: EntityId, now: SimTime) -> Result<(), ModelError> {
        self.office.finish_advisory(id, now)?;
        self.office.mark_served(id);
        self.try_start_advisory(now)
    }
}
