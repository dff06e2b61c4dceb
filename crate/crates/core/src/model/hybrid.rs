//! Hybrid execution: the same process skeleton, but every actor is an agent
//! with its own state chart. Agents talk through a mailbox that is drained
//! in FIFO order before the clock moves on.

use std::collections::VecDeque;

use crate::behavior::roles::{
    advisor, caller, receptionist, student, AdvisorView, ReceptionView, StudentView,
};
use crate::behavior::{skip_eligible, Signal, StateChart};
use crate::kernel::{EventCalendar, SimTime};
use crate::queueing::{EntityId, EntityKind};

use super::office::{ArrivalSource, ClockEvent, Office};
use super::{DayOutcome, ModelError};

#[derive(Clone, Copy, Debug)]
enum Event {
    Spawn(ArrivalSource),
    ReceptionTimer(usize, EntityId),
    AdvisorTimer(usize, EntityId),
    Clock(ClockEvent),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Note {
    Wake,
    Called,
    Ticket,
    Finished,
    Refused,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Actor {
    Receptionists,
    Advisors,
    Visitor(EntityId),
}

struct Hybrid<'c> {
    office: Office<'c>,
    cal: EventCalendar<f64, Event>,
    receptionists: Vec<StateChart<ReceptionView>>,
    advisors: Vec<StateChart<AdvisorView>>,
    visitors: Vec<StateChart<StudentView>>,
    mailbox: VecDeque<(Actor, Note)>,
}

pub(crate) fn run(mut office: Office<'_>) -> Result<DayOutcome, ModelError> {
    let mut cal = EventCalendar::starting_at(office.cfg.clock.day_open);
    for (t, src) in office.first_arrivals() {
        cal.schedule(t, Event::Spawn(src))?;
    }
    for (t, ev) in office.timetable() {
        cal.schedule(t, Event::Clock(ev))?;
    }
    let cfg = office.cfg;
    let mut h = Hybrid {
        office,
        cal,
        receptionists: (0..cfg.reception.capacity)
            .map(|_| receptionist::chart())
            .collect(),
        advisors: (0..cfg.advisory.capacity)
            .map(|_| advisor::chart())
            .collect(),
        visitors: Vec::new(),
        mailbox: VecDeque::new(),
    };
    while let Some(ev) = h.cal.pop_next() {
        let now = ev.time;
        match ev.action {
            Event::Spawn(src) => h.spawn(src, now)?,
            Event::ReceptionTimer(k, id) => h.reception_timer(k, id, now),
            Event::AdvisorTimer(k, id) => h.advisor_timer(k, id, now)?,
            Event::Clock(c) => {
                h.office.clock(now, c);
                if c != ClockEvent::DayClose {
                    h.post(Actor::Advisors, Note::Wake);
                }
            }
        }
        h.drain(now)?;
    }
    let end = h.cal.now();
    let student_view = h.student_view(EntityKind::StudentGeneral, 0, None);
    for id in h.office.leftovers() {
        let chart = &mut h.visitors[id.0 as usize];
        if chart
            .dispatch(Signal::Message(student::OFFICE_CLOSED), &student_view)
            .is_none()
        {
            return Err(ModelError::Internal(format!(
                "visitor {id} left in state {} at closing",
                chart.current()
            )));
        }
    }
    h.office.finish_day(end)
}

impl Hybrid<'_> {
    fn post(&mut self, to: Actor, note: Note) {
        self.mailbox.push_back((to, note));
    }

    fn drain(&mut self, now: SimTime) -> Result<(), ModelError> {
        while let Some((to, note)) = self.mailbox.pop_front() {
            match to {
                Actor::Receptionists => {
                    for k in 0..self.receptionists.len() {
                        self.receptionist_wake(k, now)?;
                    }
                }
                Actor::Advisors => {
                    for k in 0..self.advisors.len() {
                        self.advisor_wake(k, now)?;
                    }
                }
                Actor::Visitor(id) => self.visitor_note(id, note, now)?,
            }
        }
        Ok(())
    }

    fn student_view(
        &self,
        kind: EntityKind,
        observed_len: usize,
        draw: Option<f64>,
    ) -> StudentView {
        StudentView {
            kind,
            observed_len,
            rules: self.office.cfg.rules,
            draw,
        }
    }

    fn reception_view(&self, id: EntityId, now: SimTime) -> ReceptionView {
        let cfg = self.office.cfg;
        let e = self.office.entities.get(id);
        ReceptionView {
            visitor: e.kind,
            visitor_skipped: e.skipped,
            advisory_queue_len: self.office.adv_q.len(),
            now,
            mean_adv_service: self.office.mean_adv,
            advisors: cfg.advisory.capacity,
            walkin_close: cfg.clock.walkin_close,
            rules: cfg.rules,
        }
    }

    fn advisor_view(&self, now: SimTime) -> AdvisorView {
        let cfg = self.office.cfg;
        AdvisorView {
            now,
            walkin_open: cfg.clock.walkin_open,
            walkin_close: cfg.clock.walkin_close,
            waiting: self.office.adv_q.len(),
            mean_adv_service: self.office.mean_adv,
            advisors: cfg.advisory.capacity,
            rules: cfg.rules,
        }
    }

    /// A new visitor agent appears and decides how to enter the office.
    fn spawn(&mut self, src: ArrivalSource, now: SimTime) -> Result<(), ModelError> {
        let (kind, next) = self.office.take_arrival(src, now);
        if let Some((t, src)) = next {
            self.cal.schedule(t, Event::Spawn(src))?;
        }
        let id = self.office.admit(kind, now);
        let mut chart = if kind.is_student() {
            student::chart()
        } else {
            caller::chart()
        };
        let observed = self.office.observed_len();
        let rules = self.office.cfg.rules;
        let draw =
            skip_eligible(kind, observed, &rules).then(|| self.office.behavior_rng.uniform_f64());
        let view = self.student_view(kind, observed, draw);
        let skipping = chart.dispatch(Signal::Evaluate, &view) == Some(student::SKIPPING);
        if !skipping {
            chart.dispatch(Signal::Message(student::JOIN), &view);
        }
        self.visitors.push(chart);
        self.office.join_reception(id, now, skipping)?;
        self.post(Actor::Receptionists, Note::Wake);
        Ok(())
    }

    fn receptionist_wake(&mut self, k: usize, now: SimTime) -> Result<(), ModelError> {
        if !self.receptionists[k].is_in(receptionist::IDLE) {
            return Ok(());
        }
        let Some(id) = self.office.seize_reception(now) else {
            return Ok(());
        };
        let request = if self.office.kind(id) == EntityKind::PhoneCall {
            receptionist::PHONE_REQUEST
        } else {
            receptionist::DESK_REQUEST
        };
        let view = self.reception_view(id, now);
        self.receptionists[k].dispatch(Signal::Message(request), &view);
        let done = self.office.start_reception(id, now);
        self.cal.schedule(done, Event::ReceptionTimer(k, id))?;
        self.post(Actor::Visitor(id), Note::Called);
        Ok(())
    }

    fn reception_timer(&mut self, k: usize, id: EntityId, now: SimTime) {
        // release cannot fail: this receptionist seized the visitor
        self.office
            .finish_reception(id, now)
            .expect("receptionist was busy");
        let view = self.reception_view(id, now);
        let chart = &mut self.receptionists[k];
        if chart.dispatch(Signal::Evaluate, &view) == Some(receptionist::ISSUING_TICKET) {
            self.office.issue_ticket(id, now);
            self.post(Actor::Visitor(id), Note::Ticket);
            self.receptionists[k].dispatch(Signal::Message(receptionist::TICKET_HANDED), &view);
        } else {
            chart.dispatch(Signal::Timer(receptionist::SERVICE_DONE), &view);
            let note = if self.office.needs_advisor(id) {
                Note::Refused
            } else {
                Note::Finished
            };
            self.post(Actor::Visitor(id), note);
        }
        self.post(Actor::Receptionists, Note::Wake);
    }

    fn advisor_wake(&mut self, k: usize, now: SimTime) -> Result<(), ModelError> {
        let view = self.advisor_view(now);
        let chart = &mut self.advisors[k];
        chart.dispatch(Signal::Evaluate, &view);
        if !chart.is_in(advisor::IDLE) {
            return Ok(());
        }
        let Some(id) = self.office.seize_advisory(now) else {
            return Ok(());
        };
        let view = self.advisor_view(now);
        let chart = &mut self.advisors[k];
        chart.dispatch(Signal::Message(advisor::CALL_NEXT), &view);
        chart.dispatch(Signal::Evaluate, &view);
        let rushed = chart.is_in(advisor::SERVING_RUSHED);
        let done = self.office.start_advisory(id, now, rushed);
        self.cal.schedule(done, Event::AdvisorTimer(k, id))?;
        self.post(Actor::Visitor(id), Note::Called);
        Ok(())
    }

    fn advisor_timer(&mut self, k: usize, id: EntityId, now: SimTime) -> Result<(), ModelError> {
        self.office.finish_advisory(id, now)?;
        let view = self.advisor_view(now);
        self.advisors[k].dispatch(Signal::Timer(advisor::SERVICE_DONE), &view);
        self.post(Actor::Visitor(id), Note::Finished);
        self.post(Actor::Advisors, Note::Wake);
        Ok(())
    }

    fn visitor_note(&mut self, id: EntityId, note: Note, now: SimTime) -> Result<(), ModelError> {
        let view = self.student_view(self.office.kind(id), 0, None);
        let msg = match note {
            Note::Called => student::CALLED,
            Note::Ticket => student::TICKET,
            Note::Finished => student::FINISHED,
            Note::Refused => student::REFUSED,
            Note::Wake => return Ok(()),
        };
        let chart = &mut self.visitors[id.0 as usize];
        let from = chart.current();
        if chart.dispatch(Signal::Message(msg), &view).is_none() {
            return Err(ModelError::Internal(format!(
                "visitor {id} in {from} cannot handle `{msg}`"
            )));
        }
        match note {
            Note::Ticket => {
                self.office.join_advisory(id, now)?;
                self.post(Actor::Advisors, Note::Wake);
            }
            Note::Finished => self.office.mark_served(id),
            Note::Refused => self.office.turn_away(id, now),
            Note::Called | Note::Wake => {}
        }
        Ok(())
    }
}
