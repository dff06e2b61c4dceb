use serde::{Deserialize, Serialize};

use crate::kernel::{RngStream, SimTime, TriangularParams};
use crate::queueing::EntityKind;

/// Switches and parameters of the three proactive rules.
///
/// The numeric defaults are calibration knobs, not observed values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BehaviorRuleSet {
    /// Receptionist stops handing out waiting numbers (type 1a).
    pub stop_numbers_enabled: bool,
    /// Advisors speed up when behind schedule (type 1b).
    pub speedup_enabled: bool,
    /// Students jump the reception line with a quick question (type 2).
    pub skip_enabled: bool,
    pub stop_slack_minutes: f64,
    pub speedup_factor: f64,
    pub speedup_close: SimTime,
    pub skip_threshold_len: u32,
    pub quick_enquiry_prob: f64,
    pub quick_service: TriangularParams,
}

impl Default for BehaviorRuleSet {
    fn default() -> Self {
        Self {
            stop_numbers_enabled: false,
            speedup_enabled: false,
            skip_enabled: false,
            stop_slack_minutes: 0.0,
            speedup_factor: 0.8,
            speedup_close: SimTime(480.0),
            skip_threshold_len: 4,
            quick_enquiry_prob: 0.15,
            quick_service: TriangularParams {
                min: 0.5,
                mode: 1.0,
                max: 2.0,
            },
        }
    }
}

impl BehaviorRuleSet {
    /// Purely reactive behavior: all three rules off, parameters kept.
    pub fn reactive(self) -> Self {
        Self {
            stop_numbers_enabled: false,
            speedup_enabled: false,
            skip_enabled: false,
            ..self
        }
    }

    /// Checks ranges; the error names the offending field.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if !self.stop_slack_minutes.is_finite() {
            return Err(("stop_slack_minutes", "must be finite".into()));
        }
        if !(self.speedup_factor > 0.0 && self.speedup_factor <= 1.0) {
            return Err((
                "speedup_factor",
                format!("must lie in (0, 1], got {}", self.speedup_factor),
            ));
        }
        if !(self.speedup_close.0.is_finite() && self.speedup_close.0 >= 0.0) {
            return Err((
                "speedup_close",
                "must be a finite, non-negative clock time".into(),
            ));
        }
        if self.skip_threshold_len < 1 {
            return Err(("skip_threshold_len", "must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.quick_enquiry_prob) {
            return Err((
                "quick_enquiry_prob",
                format!("must lie in [0, 1], got {}", self.quick_enquiry_prob),
            ));
        }
        self.quick_service
            .validate()
            .map_err(|e| ("quick_service", e.to_string()))
    }
}

/// Type 1a: may the receptionist hand out another waiting number?
///
/// Projects the advisors' remaining workload, `(queue_len + 1)` students at
/// `mean_adv_service` each over `advisors` servers, against the minutes left
/// before the walk-in window shuts (plus slack).
pub fn should_issue_number(
    queue_len: usize,
    now: SimTime,
    mean_adv_service: f64,
    advisors: u32,
    rules: &BehaviorRuleSet,
    walkin_close: SimTime,
) -> bool {
    debug_assert!(advisors >= 1);
    if !rules.stop_numbers_enabled {
        return true;
    }
    if now.0 > walkin_close.0 {
        return false;
    }
    let workload = (queue_len as f64 + 1.0) * mean_adv_service / advisors.max(1) as f64;
    workload <= (walkin_close - now) + rules.stop_slack_minutes
}

/// Whether a student leaving the desk gets a waiting number at all.
///
/// Once the walk-in window has shut no number is handed out, rule or not;
/// before that the stop-numbers rule decides.
pub fn ticket_available(
    queue_len: usize,
    now: SimTime,
    mean_adv_service: f64,
    advisors: u32,
    rules: &BehaviorRuleSet,
    walkin_close: SimTime,
) -> bool {
    now.0 < walkin_close.0
        && should_issue_number(
            queue_len,
            now,
            mean_adv_service,
            advisors,
            rules,
            walkin_close,
        )
}

/// Type 1b trigger: `waiting` students cannot be cleared before `speedup_close` at the normal pace.
pub fn speedup_triggered(
    waiting: usize,
    now: SimTime,
    mean_adv_service: f64,
    advisors: u32,
    rules: &BehaviorRuleSet,
) -> bool {
    rules.speedup_enabled
        && waiting as f64 * mean_adv_service / advisors.max(1) as f64 > rules.speedup_close - now
}

/// Type 1b: the service time actually spent on a student.
pub fn effective_service_time(
    base: f64,
    waiting: usize,
    now: SimTime,
    mean_adv_service: f64,
    advisors: u32,
    rules: &BehaviorRuleSet,
) -> f64 {
    if speedup_triggered(waiting, now, mean_adv_service, advisors, rules) {
        base * rules.speedup_factor
    } else {
        base
    }
}

/// Whether a visitor is in a position to consider skipping at all.
pub fn skip_eligible(kind: EntityKind, observed_len: usize, rules: &BehaviorRuleSet) -> bool {
    kind.is_student() && rules.skip_enabled && observed_len >= rules.skip_threshold_len as usize
}

/// Type 2: does an arriving student jump the line with a quick question?
///
/// Draws one uniform from `s` only when [`skip_eligible`] holds.
pub fn decide_skip(
    kind: EntityKind,
    observed_len: usize,
    rules: &BehaviorRuleSet,
    s: &mut RngStream,
) -> bool {
    skip_eligible(kind, observed_len, rules) && s.uniform_f64() < rules.quick_enquiry_prob
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::StreamId;
    use proptest::prelude::*;

    fn stop_rule() -> BehaviorRuleSet {
        BehaviorRuleSet {
            stop_numbers_enabled: true,
            ..Default::default()
        }
    }

    #[test]
    fn disabled_stop_rule_always_issues() {
        let r = BehaviorRuleSet::default();
        assert!(should_issue_number(
            1000,
            SimTime(479.0),
            30.0,
            2,
            &r,
            SimTime(420.0)
        ));
    }

    #[test]
    fn stop_rule_late_and_crowded() {
        // (10 + 1) * 10 / 2 = 55 > 420 - 410
        assert!(!should_issue_number(
            10,
            SimTime(410.0),
            10.0,
            2,
            &stop_rule(),
            SimTime(420.0)
        ));
    }

    #[test]
    fn stop_rule_early_and_quiet() {
        // (2 + 1) * 10 / 2 = 15 <= 180
        assert!(should_issue_number(
            2,
            SimTime(240.0),
            10.0,
            2,
            &stop_rule(),
            SimTime(420.0)
        ));
    }

    #[test]
    fn no_numbers_after_window_even_when_reactive() {
        let r = BehaviorRuleSet::default();
        assert!(ticket_available(
            50,
            SimTime(419.9),
            30.0,
            2,
            &r,
            SimTime(420.0)
        ));
        assert!(!ticket_available(
            0,
            SimTime(420.0),
            1.0,
            2,
            &r,
            SimTime(420.0)
        ));
        assert!(!ticket_available(
            0,
            SimTime(455.0),
            1.0,
            2,
            &stop_rule(),
            SimTime(420.0)
        ));
    }

    #[test]
    fn stop_rule_after_window() {
        assert!(!should_issue_number(
            0,
            SimTime(420.5),
            0.0,
            2,
            &stop_rule(),
            SimTime(420.0)
        ));
    }

    #[test]
    fn speedup_cases() {
        let on = BehaviorRuleSet {
            speedup_enabled: true,
            ..Default::default()
        };
        assert_eq!(
            effective_service_time(10.0, 0, SimTime(479.0), 10.0, 2, &on),
            10.0
        );
        // 20 * 10 / 2 = 100 > 480 - 400
        assert_eq!(
            effective_service_time(10.0, 20, SimTime(400.0), 10.0, 2, &on),
            8.0
        );
        let identity = BehaviorRuleSet {
            speedup_factor: 1.0,
            ..on
        };
        assert_eq!(
            effective_service_time(10.0, 20, SimTime(400.0), 10.0, 2, &identity),
            10.0
        );
    }

    #[test]
    fn skip_cases() {
        let mut s = RngStream::new(3, 0, StreamId::Behavior);
        let on = BehaviorRuleSet {
            skip_enabled: true,
            ..Default::default()
        };
        assert!(!decide_skip(EntityKind::StudentGeneral, 0, &on, &mut s));
        assert_eq!(s.draws(), 0);
        let always = BehaviorRuleSet {
            quick_enquiry_prob: 1.0,
            ..on
        };
        assert!(decide_skip(EntityKind::StudentAdvisory, 4, &always, &mut s));
        assert!(!decide_skip(EntityKind::PhoneCall, 40, &always, &mut s));
        let never = BehaviorRuleSet {
            quick_enquiry_prob: 0.0,
            ..on
        };
        assert!((0..1000).all(|_| !decide_skip(EntityKind::StudentGeneral, 10, &never, &mut s)));
    }

    #[test]
    fn validation_names_fields() {
        let bad = BehaviorRuleSet {
            speedup_factor: 0.0,
            ..Default::default()
        };
        assert_eq!(bad.validate().unwrap_err().0, "speedup_factor");
        let bad = BehaviorRuleSet {
            quick_enquiry_prob: 1.5,
            ..Default::default()
        };
        assert_eq!(bad.validate().unwrap_err().0, "quick_enquiry_prob");
        assert!(BehaviorRuleSet::default().validate().is_ok());
    }

    proptest! {
        #[test]
        fn stop_rule_is_monotone_in_queue_length(
            len in 0usize..60, extra in 1usize..20, now in 0.0f64..480.0,
            mean in 0.1f64..40.0, advisors in 1u32..5, slack in -30.0f64..30.0,
        ) {
            let rules = BehaviorRuleSet { stop_slack_minutes: slack, ..stop_rule() };
            if !should_issue_number(len, SimTime(now), mean, advisors, &rules, SimTime(420.0)) {
                prop_assert!(!should_issue_number(len + extra, SimTime(now), mean, advisors, &rules, SimTime(420.0)));
            }
        }

        #[test]
        fn speedup_never_lengthens_service(
            base in 0.01f64..100.0, waiting in 0usize..50, now in 0.0f64..480.0,
            mean in 0.1f64..40.0, advisors in 1u32..5, factor in 0.01f64..=1.0, enabled: bool,
        ) {
            let rules = BehaviorRuleSet { speedup_enabled: enabled, speedup_factor: factor, ..Default::default() };
            prop_assert!(effective_service_time(base, waiting, SimTime(now), mean, advisors, &rules) <= base);
        }

        #[test]
        fn reactive_rules_are_identities(
            len in 0usize..100, now in 0.0f64..480.0, base in 0.01f64..60.0, seed: u64,
        ) {
            let all_on = BehaviorRuleSet {
                stop_numbers_enabled: true, speedup_enabled: true, skip_enabled: true,
                quick_enquiry_prob: 1.0, ..Default::default()
            };
            let r = all_on.reactive();
            let mut s = RngStream::new(seed, 0, StreamId::Behavior);
            prop_assert!(should_issue_number(len, SimTime(now), 12.0, 2, &r, SimTime(420.0)));
            prop_assert_eq!(effective_service_time(base, len, SimTime(now), 12.0, 2, &r), base);
            prop_assert!(!decide_skip(EntityKind::StudentGeneral, len, &r, &mut s));
            prop_assert_eq!(s.draws(), 0);
        }
    }
}
