//! Acceptance suite: prints one PASS/FAIL line per criterion and fails if any criterion fails.
//!
//! Run with `cargo test -p isst-cli --test acceptance -- --nocapture` to see the lines.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use isst_core::behavior::roles::{advisor, receptionist, AdvisorView, ReceptionView};
use isst_core::behavior::{
    effective_service_time, should_issue_number, speedup_triggered, ticket_available,
    BehaviorRuleSet, Signal,
};
use isst_core::experiments::ExperimentId;
use isst_core::kernel::{
    next_arrival, sample_exponential, sample_triangular, ArrivalSchedule, RngStream, SimTime,
    StreamId, TriangularParams, DAY_MINUTES,
};
use isst_core::model::{simulate_day, Mode, ScenarioConfig, TraceEvent};
use isst_core::queueing::EntityKind;
use isst_core::report::{Measure, Tables};
use isst_core::stats::{student_t_cdf, welch_t_test};
use serde::Deserialize;

const SEED: &str = "1";
const REPS: &str = "100";

struct Ledger {
    failed: Vec<&'static str>,
}

impl Ledger {
    fn report(&mut self, name: &'static str, pass: bool, detail: String) {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(name);
        }
    }
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn isst(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_isst"))
        .args(args)
        .env_remove("ISST_OUTPUT_DIR")
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn suite(dir: &Path) -> f64 {
    let scenario = root().join("scenarios/isst-default.toml");
    let start = Instant::now();
    isst(&[
        "suite",
        "--scenario",
        scenario.to_str().unwrap(),
        "--seed",
        SEED,
        "-r",
        REPS,
        "-o",
        dir.to_str().unwrap(),
    ]);
    start.elapsed().as_secs_f64()
}

fn mean(t: &Tables, exp: ExperimentId, mode: Mode, m: Measure) -> f64 {
    t.table2
        .iter()
        .find(|r| r.experiment == exp && r.mode == mode)
        .map(|r| r.summary(m).mean)
        .unwrap_or(f64::NAN)
}

fn calibration(l: &mut Ledger) {
    let shipped = ScenarioConfig::load::<&str>(&root().join("scenarios/isst-default.toml"), &[]);
    let ok = shipped
        .as_ref()
        .is_ok_and(|c| *c == ScenarioConfig::default());
    l.report(
        "calibration scenario",
        ok,
        "scenarios/isst-default.toml loads and equals the built-in calibration used below".into(),
    );
}

fn table2(l: &mut Ledger, t: &Tables, secs: f64) {
    use ExperimentId::*;
    use Measure::*;
    let w1 = mean(t, E1, Mode::Des, WaitingTime);
    let n1 = mean(t, E1, Mode::Des, CustomersNotServed);
    let mut ok = (1.2..=1.7).contains(&w1) && (4.0..=8.0).contains(&n1);
    let mut detail = format!("des E1 wait {w1:.3} in [1.2,1.7], not-served {n1:.2} in [4,8]");
    for mode in Mode::ALL {
        let base = mean(t, E1, mode, WaitingTime);
        for exp in [E2, E3, E4, E5] {
            let (w, n) = (
                mean(t, exp, mode, WaitingTime),
                mean(t, exp, mode, CustomersNotServed),
            );
            ok &= n < 0.5 && w < base;
            detail += &format!("; {mode} {exp} wait {w:.3} < {base:.3}, ns {n:.2} < 0.5");
        }
    }
    ok &= secs < 30.0;
    detail += &format!("; suite 5x2 x {REPS} reps in {secs:.2}s < 30s");
    l.report("performance-measure direction", ok, detail);
}

fn table3(l: &mut Ledger, t: &Tables) {
    let rows = &t.table3.rows;
    let rejected = rows.iter().filter(|r| r.test.reject).count();
    let worst = rows.iter().map(|r| r.test.p_value).fold(0.0, f64::max);
    l.report(
        "comparison table all Reject",
        rows.len() == 16 && rejected == 16 && t.table3.alpha == 0.05,
        format!(
            "{rejected}/{} E1-vs-Ex rows reject at alpha 0.05 (largest p {worst:.4})",
            rows.len()
        ),
    );
}

fn script() -> ScenarioConfig {
    let arrivals = [
        (10.0, "general"),
        (11.0, "phone"),
        (11.5, "advisory"),
        (200.0, "advisory"),
        (250.0, "advisory"),
        (251.0, "general"),
        (400.0, "advisory"),
        (405.0, "advisory"),
        (419.0, "advisory"),
        (477.0, "general"),
    ];
    let list: Vec<String> = arrivals
        .iter()
        .map(|(t, k)| format!("{{time={t},kind=\"{k}\"}}"))
        .collect();
    ScenarioConfig::default()
        .with_overrides(&[
            "arrivals.general=[0,0,0,0,0,0,0,0]".to_string(),
            "arrivals.advisory=[0,0,0,0,0,0,0,0]".to_string(),
            "arrivals.phone=[0,0,0,0,0,0,0,0]".to_string(),
            format!("arrivals.scripted=[{}]", list.join(",")),
            "reception.service={kind=\"triangular\",min=2,mode=2,max=2}".to_string(),
            "advisory.service={kind=\"triangular\",min=30,mode=30,max=30}".to_string(),
        ])
        .unwrap()
}

fn similarity(l: &mut Ledger, t: &Tables) {
    let mut ok = true;
    let mut detail = Vec::new();
    for exp in ExperimentId::ALL {
        let dw = (mean(t, exp, Mode::Des, Measure::WaitingTime)
            - mean(t, exp, Mode::Hybrid, Measure::WaitingTime))
        .abs();
        let dn = (mean(t, exp, Mode::Des, Measure::CustomersNotServed)
            - mean(t, exp, Mode::Hybrid, Measure::CustomersNotServed))
        .abs();
        ok &= dw <= 0.1 && dn <= 1.5;
        detail.push(format!("{exp} |dw| {dw:.3} |dn| {dn:.2}"));
    }
    let mut identical = true;
    for exp in ExperimentId::ALL {
        let cfg = exp.apply(&script());
        let a = simulate_day(&cfg, Mode::Des, 7, 0, true).unwrap();
        let b = simulate_day(&cfg, Mode::Hybrid, 7, 0, true).unwrap();
        identical &= a.trace == b.trace && a.metrics == b.metrics;
    }
    ok &= identical;
    l.report(
        "des/hybrid similarity",
        ok,
        format!(
            "{} (limits 0.1 min, 1.5); scripted traces identical in all experiments: {identical}",
            detail.join(", ")
        ),
    );
}

fn erlang_c_wait(lambda: f64, mu: f64, c: u32) -> f64 {
    let a = lambda / mu;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..c {
        term *= a / k as f64;
        sum += term;
    }
    let last = term * a / c as f64 / (1.0 - a / c as f64);
    last / (sum + last) / (c as f64 * mu - lambda)
}

fn pooled_wait(cfg: &ScenarioConfig, customers: u64, advisory: bool) -> (f64, u64) {
    let (mut total, mut n, mut rep) = (0.0, 0u64, 0);
    while n < customers {
        let m = simulate_day(cfg, Mode::Des, 42, rep, false)
            .unwrap()
            .metrics;
        let q = if advisory {
            m.advisory_queue
        } else {
            m.reception_queue
        };
        total += q.mean_wait_minutes * q.departed as f64;
        n += q.departed;
        rep += 1;
    }
    (total / n as f64, n)
}

fn queueing(l: &mut Ledger) {
    let none = "[0,0,0,0,0,0,0,0]";
    let start = Instant::now();
    let mm1 = ScenarioConfig::default()
        .with_overrides(&[
            "arrivals.general=[30,30,30,30,30,30,30,30]".to_string(),
            format!("arrivals.advisory={none}"),
            format!("arrivals.phone={none}"),
            "reception.service={kind=\"exponential\",mean=1.0}".to_string(),
        ])
        .unwrap();
    let (w1, n1) = pooled_wait(&mm1, 100_000, false);
    let s1 = start.elapsed().as_secs_f64();
    let want1 = erlang_c_wait(0.5, 1.0, 1);

    let start = Instant::now();
    let mm2 = ScenarioConfig::default()
        .with_overrides(&[
            format!("arrivals.general={none}"),
            "arrivals.advisory=[60,60,60,60,60,60,60,60]".to_string(),
            format!("arrivals.phone={none}"),
            "reception.capacity=4".to_string(),
            "reception.service={kind=\"exponential\",mean=0.0001}".to_string(),
            "advisory.capacity=2".to_string(),
            "advisory.service={kind=\"exponential\",mean=1.5}".to_string(),
            "clock.walkin_open=0".to_string(),
            "clock.walkin_close=480".to_string(),
        ])
        .unwrap();
    let (w2, n2) = pooled_wait(&mm2, 100_000, true);
    let s2 = start.elapsed().as_secs_f64();
    let want2 = erlang_c_wait(1.0, 1.0 / 1.5, 2);

    let e1 = (w1 - want1).abs() / want1;
    let e2 = (w2 - want2).abs() / want2;
    l.report(
        "queueing oracle",
        e1 <= 0.05 && e2 <= 0.05 && n1 >= 100_000 && n2 >= 100_000 && s1 < 10.0 && s2 < 10.0,
        format!(
            "M/M/1 W_q {w1:.4} vs {want1:.4} ({:.2}%, n={n1}, {s1:.2}s); M/M/2 W_q {w2:.4} vs {want2:.4} ({:.2}%, n={n2}, {s2:.2}s); limit 5%, 10s",
            100.0 * e1,
            100.0 * e2
        ),
    );
}

fn samplers(l: &mut Ledger) {
    const N: usize = 1_000_000;
    let tri = TriangularParams::new(1.0, 2.0, 6.0).unwrap();
    let mut s = RngStream::new(11, 0, StreamId::ServiceReception);
    let xs: Vec<f64> = (0..N).map(|_| sample_triangular(&tri, &mut s)).collect();
    let m = xs.iter().sum::<f64>() / N as f64;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (N - 1) as f64;
    let tri_ok = (m - 3.0).abs() <= 0.03 && (v - 21.0 / 18.0).abs() <= 0.01 * 21.0 / 18.0;

    let mut s = RngStream::new(1, 0, StreamId::ArrivalsGeneral);
    let rate = 0.1;
    let em = (0..N)
        .map(|_| sample_exponential(rate, &mut s).unwrap())
        .sum::<f64>()
        / N as f64;
    let exp_ok = (em - 1.0 / rate).abs() <= 0.01 / rate;

    let rates = [5.0, 12.0, 20.0, 0.0, 8.0, 30.0, 15.0, 2.0];
    let sched = ArrivalSchedule::new(&rates).unwrap();
    let mut counts = [0u64; 8];
    for day in 0..1000 {
        let mut s = RngStream::new(77, day, StreamId::ArrivalsAdvisory);
        let mut t = SimTime(0.0);
        while let Some(next) = next_arrival(&sched, t, SimTime(DAY_MINUTES), &mut s) {
            counts[(next.0 / 60.0) as usize] += 1;
            t = next;
        }
    }
    let worst_z = counts
        .iter()
        .zip(&rates)
        .filter(|(_, &r)| r > 0.0)
        .map(|(&c, &r)| (c as f64 - 1000.0 * r).abs() / (1000.0 * r).sqrt())
        .fold(0.0, f64::max);
    let nhpp_ok = worst_z <= 3.0 && counts[3] == 0;
    l.report(
        "sampler suite",
        tri_ok && exp_ok && nhpp_ok,
        format!(
            "triangular(1,2,6) mean {m:.4} var {v:.4} (3, {:.4} +-1%); exponential(0.1) mean {em:.4} (10 +-1%); NHPP worst hourly |z| {worst_z:.2} <= 3 over 1000 days",
            21.0 / 18.0
        ),
    );
}

#[derive(Deserialize)]
struct WelchCase {
    a: Vec<f64>,
    b: Vec<f64>,
    p: String,
}

#[derive(Deserialize)]
struct CdfCase {
    x: f64,
    df: f64,
    cdf: String,
}

#[derive(Deserialize)]
struct Oracle {
    welch: Vec<WelchCase>,
    student_t_cdf: Vec<CdfCase>,
}

fn statistics(l: &mut Ledger) {
    let text = fs::read_to_string(root().join("crates/core/tests/data/stats_oracle.json")).unwrap();
    let o: Oracle = serde_json::from_str(&text).unwrap();
    let mut p_err: f64 = 0.0;
    let mut sym_err: f64 = 0.0;
    let mut scale_err: f64 = 0.0;
    for c in &o.welch {
        let r = welch_t_test(&c.a, &c.b, 0.05).unwrap();
        p_err = p_err.max((r.p_value - c.p.parse::<f64>().unwrap()).abs());
        let rev = welch_t_test(&c.b, &c.a, 0.05).unwrap();
        sym_err = sym_err
            .max((rev.p_value - r.p_value).abs())
            .max((rev.t_stat + r.t_stat).abs());
        let k = 3.7;
        let sa: Vec<f64> = c.a.iter().map(|x| x * k).collect();
        let sb: Vec<f64> = c.b.iter().map(|x| x * k).collect();
        let sc = welch_t_test(&sa, &sb, 0.05).unwrap();
        scale_err = scale_err
            .max((sc.p_value - r.p_value).abs())
            .max((sc.t_stat - r.t_stat).abs())
            .max((sc.df - r.df).abs() / r.df.max(1.0));
    }
    let mut cdf_err: f64 = 0.0;
    let mut refl_err: f64 = 0.0;
    for c in &o.student_t_cdf {
        cdf_err = cdf_err.max((student_t_cdf(c.x, c.df) - c.cdf.parse::<f64>().unwrap()).abs());
        refl_err = refl_err.max((student_t_cdf(c.x, c.df) + student_t_cdf(-c.x, c.df) - 1.0).abs());
    }
    l.report(
        "statistics oracle",
        o.welch.len() == 20 && p_err <= 1e-8 && cdf_err <= 1e-10 && sym_err <= 1e-12 && scale_err <= 1e-12 && refl_err <= 1e-12,
        format!(
            "{} Welch cases max |dp| {p_err:.1e} (<=1e-8); {} cdf points max err {cdf_err:.1e} (<=1e-10); symmetry {sym_err:.1e}, scale {scale_err:.1e}, reflection {refl_err:.1e} (<=1e-12)",
            o.welch.len(),
            o.student_t_cdf.len()
        ),
    );
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

fn determinism(l: &mut Ledger, first: &Path) {
    let second = tempfile::tempdir().unwrap();
    suite(second.path());
    let (a, b) = (files(first), files(second.path()));
    let suite_same = !a.is_empty() && a == b;

    let run = |d: &Path| {
        isst(&[
            "run",
            "--seed",
            "12",
            "--mode",
            "hybrid",
            "--trace",
            "-o",
            d.to_str().unwrap(),
        ]);
        files(d)
    };
    let (r1, r2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let run_same = run(r1.path()) == run(r2.path());
    l.report(
        "determinism",
        suite_same && run_same,
        format!(
            "suite rerun: {} files byte-identical: {suite_same}; traced run rerun identical: {run_same}",
            a.len()
        ),
    );
}

fn properties(l: &mut Ledger) {
    // conservation, ticket order and the walk-in window over many random days
    let base = ScenarioConfig::default();
    let (mut days, mut conserved, mut ordered) = (0, true, true);
    for exp in ExperimentId::ALL {
        let cfg = exp.apply(&base);
        for mode in Mode::ALL {
            for rep in 0..20 {
                let day = simulate_day(&cfg, mode, 4242, rep, true).unwrap();
                let m = &day.metrics;
                conserved &= m.is_conserved()
                    && EntityKind::ALL.iter().all(|&k| {
                        let x = m.per_kind.get(k);
                        x.served + x.not_served + x.turned_away == x.arrivals
                    });
                let called: Vec<u32> = day
                    .trace
                    .iter()
                    .filter(|r| r.event == TraceEvent::StartAdvisory)
                    .filter_map(|r| r.ticket)
                    .collect();
                ordered &= called.windows(2).all(|w| w[0] < w[1])
                    && day
                        .trace
                        .iter()
                        .filter(|r| r.event == TraceEvent::StartAdvisory)
                        .all(|r| {
                            cfg.clock.walkin_open.0 <= r.time && r.time < cfg.clock.walkin_close.0
                        });
                days += 1;
            }
        }
    }

    // rule predicates on a state grid
    let (mut monotone, mut shorter, mut equivalent, mut states) = (true, true, true, 0);
    for slack in [-30.0, 0.0, 20.0] {
        for factor in [0.4, 0.8, 1.0] {
            let rules = BehaviorRuleSet {
                stop_numbers_enabled: true,
                speedup_enabled: true,
                stop_slack_minutes: slack,
                speedup_factor: factor,
                speedup_close: SimTime(400.0),
                ..Default::default()
            };
            for advisors in 1..=3 {
                for mean in [2.0, 6.5, 12.0] {
                    for step in 0..=96 {
                        let now = step as f64 * 5.0;
                        for len in 0..30usize {
                            states += 1;
                            let issue = |l: usize, t: f64| {
                                should_issue_number(
                                    l,
                                    SimTime(t),
                                    mean,
                                    advisors,
                                    &rules,
                                    SimTime(420.0),
                                )
                            };
                            if !issue(len, now) {
                                monotone &= !issue(len + 1, now) && !issue(len, now + 5.0);
                            }
                            let eff = effective_service_time(
                                7.0,
                                len,
                                SimTime(now),
                                mean,
                                advisors,
                                &rules,
                            );
                            shorter &= eff <= 7.0;

                            let rv = ReceptionView {
                                visitor: EntityKind::StudentAdvisory,
                                visitor_skipped: false,
                                advisory_queue_len: len,
                                now: SimTime(now),
                                mean_adv_service: mean,
                                advisors,
                                walkin_close: SimTime(420.0),
                                rules,
                            };
                            let mut rc = receptionist::chart();
                            rc.dispatch(Signal::Message(receptionist::DESK_REQUEST), &rv);
                            let fired = rc.dispatch(Signal::Evaluate, &rv)
                                == Some(receptionist::ISSUING_TICKET);
                            equivalent &= fired
                                == ticket_available(
                                    len,
                                    SimTime(now),
                                    mean,
                                    advisors,
                                    &rules,
                                    SimTime(420.0),
                                );

                            let av = AdvisorView {
                                now: SimTime(now),
                                walkin_open: SimTime(0.0),
                                walkin_close: SimTime(481.0),
                                waiting: len,
                                mean_adv_service: mean,
                                advisors,
                                rules,
                            };
                            let mut ac = advisor::chart();
                            ac.dispatch(Signal::Evaluate, &av);
                            ac.dispatch(Signal::Message(advisor::CALL_NEXT), &av);
                            let rushed =
                                ac.dispatch(Signal::Evaluate, &av) == Some(advisor::SERVING_RUSHED);
                            equivalent &= rushed
                                == speedup_triggered(len, SimTime(now), mean, advisors, &rules);
                        }
                    }
                }
            }
        }
    }
    l.report(
        "property suites",
        conserved && ordered && monotone && shorter && equivalent,
        format!(
            "{days} days: conservation {conserved}, ticket order and window {ordered}; {states} grid states: stop-numbers monotone {monotone}, effective <= base {shorter}, chart = predicate {equivalent}"
        ),
    );
}

#[test]
fn acceptance() {
    let mut l = Ledger { failed: Vec::new() };
    let out = tempfile::tempdir().unwrap();
    let secs = suite(out.path());
    let tables: Tables =
        serde_json::from_slice(&fs::read(out.path().join("tables.json")).unwrap()).unwrap();

    calibration(&mut l);
    table2(&mut l, &tables, secs);
    table3(&mut l, &tables);
    similarity(&mut l, &tables);
    queueing(&mut l);
    samplers(&mut l);
    statistics(&mut l);
    determinism(&mut l, out.path());
    properties(&mut l);

    assert!(l.failed.is_empty(), "failed: {:?}", l.failed);
}
