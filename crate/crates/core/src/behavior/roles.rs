//! Agent state-chart templates for the hybrid mode.
//!
//! Proactive rules appear as condition transitions whose guards call the
//! same predicates the DES process logic uses.

use serde::{Deserialize, Serialize};

use super::chart::{StateChart, StateId, Transition, Trigger};
use super::rules::{skip_eligible, speedup_triggered, ticket_available, BehaviorRuleSet};
use crate::kernel::SimTime;
use crate::queueing::EntityKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentRole {
    Receptionist,
    Advisor,
    Student,
    PhoneCaller,
}

impl AgentRole {
    pub fn states(self) -> &'static [StateId] {
        match self {
            AgentRole::Receptionist => &receptionist::STATES,
            AgentRole::Advisor => &advisor::STATES,
            AgentRole::Student => &student::STATES,
            AgentRole::PhoneCaller => &caller::STATES,
        }
    }

    pub fn for_kind(kind: EntityKind) -> Self {
        if kind.is_student() {
            AgentRole::Student
        } else {
            AgentRole::PhoneCaller
        }
    }
}

/// What the receptionist sees when a desk service ends.
#[derive(Clone, Copy, Debug)]
pub struct ReceptionView {
    pub visitor: EntityKind,
    pub visitor_skipped: bool,
    pub advisory_queue_len: usize,
    pub now: SimTime,
    pub mean_adv_service: f64,
    pub advisors: u32,
    pub walkin_close: SimTime,
    pub rules: BehaviorRuleSet,
}

impl ReceptionView {
    /// The visitor came for an advisor and the receptionist is willing to hand out a number.
    pub fn ticket_due(&self) -> bool {
        self.visitor == EntityKind::StudentAdvisory
            && !self.visitor_skipped
            && ticket_available(
                self.advisory_queue_len,
                self.now,
                self.mean_adv_service,
                self.advisors,
                &self.rules,
                self.walkin_close,
            )
    }
}

/// What an advisor sees when deciding whether to work and how fast.
#[derive(Clone, Copy, Debug)]
pub struct AdvisorView {
    pub now: SimTime,
    pub walkin_open: SimTime,
    pub walkin_close: SimTime,
    /// Ticket holders still waiting, excluding the one being called.
    pub waiting: usize,
    pub mean_adv_service: f64,
    pub advisors: u32,
    pub rules: BehaviorRuleSet,
}

impl AdvisorView {
    pub fn on_duty(&self) -> bool {
        self.walkin_open.0 <= self.now.0 && self.now.0 < self.walkin_close.0
    }

    pub fn behind_schedule(&self) -> bool {
        speedup_triggered(
            self.waiting,
            self.now,
            self.mean_adv_service,
            self.advisors,
            &self.rules,
        )
    }
}

/// What an arriving student sees in the reception area.
#[derive(Clone, Copy, Debug)]
pub struct StudentView {
    pub kind: EntityKind,
    pub observed_len: usize,
    pub rules: BehaviorRuleSet,
    /// The student's private uniform draw, present only when eligible to skip.
    pub draw: Option<f64>,
}

impl StudentView {
    pub fn eligible(&self) -> bool {
        skip_eligible(self.kind, self.observed_len, &self.rules)
    }

    pub fn wants_quick_question(&self) -> bool {
        self.eligible() && self.draw.is_some_and(|u| u < self.rules.quick_enquiry_prob)
    }
}

fn t<C>(from: StateId, to: StateId, trigger: Trigger<C>) -> Transition<C> {
    Transition { from, to, trigger }
}

pub mod receptionist {
    use super::*;

    pub const IDLE: StateId = "idle";
    pub const SERVING_DESK: StateId = "serving_desk";
    pub const SERVING_PHONE: StateId = "serving_phone";
    pub const ISSUING_TICKET: StateId = "issuing_ticket";
    pub const STATES: [StateId; 4] = [IDLE, SERVING_DESK, SERVING_PHONE, ISSUING_TICKET];

    pub const DESK_REQUEST: &str = "desk_request";
    pub const PHONE_REQUEST: &str = "phone_request";
    pub const SERVICE_DONE: &str = "service_done";
    pub const TICKET_HANDED: &str = "ticket_handed";

    pub fn chart() -> StateChart<ReceptionView> {
        StateChart::new(
            &STATES,
            IDLE,
            vec![
                t(IDLE, SERVING_DESK, Trigger::Message(DESK_REQUEST)),
                t(IDLE, SERVING_PHONE, Trigger::Message(PHONE_REQUEST)),
                t(
                    SERVING_DESK,
                    ISSUING_TICKET,
                    Trigger::Condition("ticket_due", ReceptionView::ticket_due),
                ),
                t(SERVING_DESK, IDLE, Trigger::Timer(SERVICE_DONE)),
                t(SERVING_PHONE, IDLE, Trigger::Timer(SERVICE_DONE)),
                t(ISSUING_TICKET, IDLE, Trigger::Message(TICKET_HANDED)),
            ],
        )
        .expect("receptionist chart is well-formed")
    }
}

pub mod advisor {
    use super::*;

    pub const OFF_DUTY: StateId = "off_duty";
    pub const IDLE: StateId = "idle";
    pub const SERVING: StateId = "serving";
    pub const SERVING_RUSHED: StateId = "serving_rushed";
    pub const STATES: [StateId; 4] = [OFF_DUTY, IDLE, SERVING, SERVING_RUSHED];

    pub const CALL_NEXT: &str = "call_next";
    pub const SERVICE_DONE: &str = "service_done";

    pub fn chart() -> StateChart<AdvisorView> {
        StateChart::new(
            &STATES,
            OFF_DUTY,
            vec![
                t(
                    OFF_DUTY,
                    IDLE,
                    Trigger::Condition("on_duty", AdvisorView::on_duty),
                ),
                t(
                    IDLE,
                    OFF_DUTY,
                    Trigger::Condition("off_duty", |v: &AdvisorView| !v.on_duty()),
                ),
                t(IDLE, SERVING, Trigger::Message(CALL_NEXT)),
                t(
                    SERVING,
                    SERVING_RUSHED,
                    Trigger::Condition("behind_schedule", AdvisorView::behind_schedule),
                ),
                t(SERVING, IDLE, Trigger::Timer(SERVICE_DONE)),
                t(SERVING_RUSHED, IDLE, Trigger::Timer(SERVICE_DONE)),
            ],
        )
        .expect("advisor chart is well-formed")
    }
}

pub mod student {
    use super::*;

    pub const ARRIVING: StateId = "arriving";
    pub const SKIPPING: StateId = "skipping";
    pub const QUEUEING: StateId = "queueing";
    pub const BEING_SERVED: StateId = "being_served";
    pub const HOLDING_TICKET: StateId = "holding_ticket";
    pub const WITH_ADVISOR: StateId = "with_advisor";
    pub const DONE: StateId = "done";
    pub const TURNED_AWAY: StateId = "turned_away";
    pub const UNSERVED: StateId = "unserved";
    pub const STATES: [StateId; 9] = [
        ARRIVING,
        SKIPPING,
        QUEUEING,
        BEING_SERVED,
        HOLDING_TICKET,
        WITH_ADVISOR,
        DONE,
        TURNED_AWAY,
        UNSERVED,
    ];

    pub const JOIN: &str = "join";
    pub const CALLED: &str = "called";
    pub const TICKET: &str = "ticket";
    pub const FINISHED: &str = "done";
    pub const REFUSED: &str = "turned_away";
    pub const OFFICE_CLOSED: &str = "office_closed";

    pub fn chart() -> StateChart<StudentView> {
        StateChart::new(
            &STATES,
            ARRIVING,
            vec![
                t(
                    ARRIVING,
                    SKIPPING,
                    Trigger::Condition("quick_question", StudentView::wants_quick_question),
                ),
                t(ARRIVING, QUEUEING, Trigger::Message(JOIN)),
                t(SKIPPING, BEING_SERVED, Trigger::Message(CALLED)),
                t(QUEUEING, BEING_SERVED, Trigger::Message(CALLED)),
                t(QUEUEING, TURNED_AWAY, Trigger::Message(REFUSED)),
                t(BEING_SERVED, HOLDING_TICKET, Trigger::Message(TICKET)),
                t(BEING_SERVED, DONE, Trigger::Message(FINISHED)),
                t(BEING_SERVED, TURNED_AWAY, Trigger::Message(REFUSED)),
                t(HOLDING_TICKET, WITH_ADVISOR, Trigger::Message(CALLED)),
                t(WITH_ADVISOR, DONE, Trigger::Message(FINISHED)),
                t(SKIPPING, UNSERVED, Trigger::Message(OFFICE_CLOSED)),
                t(QUEUEING, UNSERVED, Trigger::Message(OFFICE_CLOSED)),
                t(HOLDING_TICKET, UNSERVED, Trigger::Message(OFFICE_CLOSED)),
            ],
        )
        .expect("student chart is well-formed")
    }
}

pub mod caller {
    pub use super::student::{CALLED, FINISHED, JOIN, OFFICE_CLOSED};
    use super::*;

    pub const ARRIVING: StateId = "arriving";
    pub const ON_HOLD: StateId = "on_hold";
    pub const BEING_SERVED: StateId = "being_served";
    pub const DONE: StateId = "done";
    pub const UNSERVED: StateId = "unserved";
    pub const STATES: [StateId; 5] = [ARRIVING, ON_HOLD, BEING_SERVED, DONE, UNSERVED];

    pub fn chart() -> StateChart<StudentView> {
        StateChart::new(
            &STATES,
            ARRIVING,
            vec![
                t(ARRIVING, ON_HOLD, Trigger::Message(JOIN)),
                t(ON_HOLD, BEING_SERVED, Trigger::Message(CALLED)),
                t(BEING_SERVED, DONE, Trigger::Message(FINISHED)),
                t(ON_HOLD, UNSERVED, Trigger::Message(OFFICE_CLOSED)),
            ],
        )
        .expect("caller chart is well-formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::chart::Signal;
    use crate::behavior::rules::{effective_service_time, ticket_available};

    fn reception_view(len: usize, now: f64, rules: BehaviorRuleSet) -> ReceptionView {
        ReceptionView {
            visitor: EntityKind::StudentAdvisory,
            visitor_skipped: false,
            advisory_queue_len: len,
            now: SimTime(now),
            mean_adv_service: 10.0,
            advisors: 2,
            walkin_close: SimTime(420.0),
            rules,
        }
    }

    #[test]
    fn role_state_sets() {
        for s in ["idle", "serving_desk", "serving_phone", "issuing_ticket"] {
            assert!(AgentRole::Receptionist.states().contains(&s));
        }
        for s in ["idle", "serving"] {
            assert!(AgentRole::Advisor.states().contains(&s));
        }
        for s in [
            "arriving",
            "queueing",
            "being_served",
            "done",
            "turned_away",
        ] {
            assert!(AgentRole::Student.states().contains(&s));
        }
    }

    #[test]
    fn receptionist_takes_desk_request() {
        let mut c = receptionist::chart();
        let v = reception_view(0, 0.0, BehaviorRuleSet::default());
        assert_eq!(
            c.dispatch(Signal::Message(receptionist::DESK_REQUEST), &v),
            Some(receptionist::SERVING_DESK)
        );
    }

    #[test]
    fn advisor_finishes_on_timer() {
        let mut c = advisor::chart();
        let v = AdvisorView {
            now: SimTime(300.0),
            walkin_open: SimTime(240.0),
            walkin_close: SimTime(420.0),
            waiting: 0,
            mean_adv_service: 10.0,
            advisors: 2,
            rules: BehaviorRuleSet::default(),
        };
        c.dispatch(Signal::Evaluate, &v);
        c.dispatch(Signal::Message(advisor::CALL_NEXT), &v);
        assert!(c.is_in(advisor::SERVING));
        assert_eq!(
            c.dispatch(Signal::Timer(advisor::SERVICE_DONE), &v),
            Some(advisor::IDLE)
        );
    }

    #[test]
    fn queueing_student_can_be_turned_away() {
        let mut c = student::chart();
        let v = StudentView {
            kind: EntityKind::StudentGeneral,
            observed_len: 0,
            rules: BehaviorRuleSet::default(),
            draw: None,
        };
        c.dispatch(Signal::Message(student::JOIN), &v);
        assert_eq!(
            c.dispatch(Signal::Message(student::REFUSED), &v),
            Some(student::TURNED_AWAY)
        );
    }

    /// The hybrid condition transitions agree with the DES predicates on a grid of states.
    #[test]
    fn chart_conditions_match_process_predicates() {
        let rule_sets = [
            BehaviorRuleSet::default(),
            BehaviorRuleSet {
                stop_numbers_enabled: true,
                speedup_enabled: true,
                ..Default::default()
            },
            BehaviorRuleSet {
                stop_numbers_enabled: true,
                speedup_enabled: true,
                stop_slack_minutes: -15.0,
                speedup_close: SimTime(420.0),
                speedup_factor: 0.6,
                ..Default::default()
            },
        ];
        let mut checked = 0;
        for rules in rule_sets {
            for len in 0..40 {
                for step in 0..=96 {
                    let now = step as f64 * 5.0;
                    for mean in [2.0, 10.0, 11.7] {
                        for advisors in 1..=3 {
                            let mut v = reception_view(len, now, rules);
                            v.mean_adv_service = mean;
                            v.advisors = advisors;
                            let mut c = receptionist::chart();
                            c.dispatch(Signal::Message(receptionist::DESK_REQUEST), &v);
                            let fired = c.dispatch(Signal::Evaluate, &v)
                                == Some(receptionist::ISSUING_TICKET);
                            let des = ticket_available(
                                len,
                                SimTime(now),
                                mean,
                                advisors,
                                &rules,
                                SimTime(420.0),
                            );
                            assert_eq!(fired, des, "stop rule at len={len} now={now}");

                            let av = AdvisorView {
                                now: SimTime(now),
                                walkin_open: SimTime(0.0),
                                walkin_close: SimTime(481.0),
                                waiting: len,
                                mean_adv_service: mean,
                                advisors,
                                rules,
                            };
                            let mut a = advisor::chart();
                            a.dispatch(Signal::Evaluate, &av);
                            a.dispatch(Signal::Message(advisor::CALL_NEXT), &av);
                            let rushed =
                                a.dispatch(Signal::Evaluate, &av) == Some(advisor::SERVING_RUSHED);
                            let des_time = effective_service_time(
                                7.0,
                                len,
                                SimTime(now),
                                mean,
                                advisors,
                                &rules,
                            );
                            assert_eq!(rushed, des_time < 7.0, "speedup at len={len} now={now}");
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 30_000);
    }

    #[test]
    fn skip_condition_matches_predicate() {
        let rules = BehaviorRuleSet {
            skip_enabled: true,
            quick_enquiry_prob: 0.3,
            ..Default::default()
        };
        for kind in EntityKind::ALL {
            for len in 0..10 {
                for draw in [0.0, 0.29, 0.3, 0.9] {
                    let v = StudentView {
                        kind,
                        observed_len: len,
                        rules,
                        draw: Some(draw),
                    };
                    let mut c = student::chart();
                    let fired = c.dispatch(Signal::Evaluate, &v).is_some();
                    let des = skip_eligible(kind, len, &rules) && draw < rules.quick_enquiry_prob;
                    assert_eq!(fired, des);
                }
            }
        }
    }
}
