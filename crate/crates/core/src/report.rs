//! Performance-measure and comparison tables built from per-replication rows.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::experiments::{ExperimentId, ReplicationRow};
use crate::model::Mode;
use crate::stats::{t_test, StatsError, Summary, TTestResult, VarianceModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    WaitingTime,
    CustomersNotServed,
}

impl Measure {
    pub const ALL: [Measure; 2] = [Measure::WaitingTime, Measure::CustomersNotServed];

    pub fn label(self) -> &'static str {
        match self {
            Measure::WaitingTime => "waiting_time",
            Measure::CustomersNotServed => "customers_not_served",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Measure::WaitingTime => "Wait (min)",
            Measure::CustomersNotServed => "Not served",
        }
    }

    pub fn of(self, row: &ReplicationRow) -> f64 {
        match self {
            Measure::WaitingTime => row.mean_wait_minutes,
            Measure::CustomersNotServed => row.n_not_served as f64,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no E1 baseline for mode {0}")]
    MissingBaseline(Mode),
    #[error("no experiment besides E1 for mode {0}")]
    NothingToCompare(Mode),
    #[error("no result rows")]
    Empty,
    #[error("{what}: {source}")]
    Stats {
        what: String,
        #[source]
        source: StatsError,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Per-experiment, per-mode summaries of both measures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub experiment: ExperimentId,
    pub mode: Mode,
    pub replications: usize,
    pub waiting_time: Summary,
    pub customers_not_served: Summary,
}

impl Table2Row {
    pub fn summary(&self, m: Measure) -> &Summary {
        match m {
            Measure::WaitingTime => &self.waiting_time,
            Measure::CustomersNotServed => &self.customers_not_served,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub baseline: ExperimentId,
    pub experiment: ExperimentId,
    pub measure: Measure,
    pub mode: Mode,
    pub test: TTestResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub variance_model: VarianceModel,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn all_reject(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.test.reject)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub modes: Vec<Mode>,
    pub table2: Vec<Table2Row>,
    pub table3: ComparisonReport,
}

type Groups = BTreeMap<(Mode, ExperimentId), Vec<ReplicationRow>>;

fn group(rows: &[ReplicationRow]) -> Groups {
    let mut g = Groups::new();
    for r in rows {
        g.entry((r.mode, r.experiment)).or_default().push(r.clone());
    }
    g
}

fn samples(rows: &[ReplicationRow], m: Measure) -> Vec<f64> {
    rows.iter().map(|r| m.of(r)).collect()
}

/// Builds both tables. Every mode present must contain E1 and at least one other experiment.
pub fn render_tables(
    rows: &[ReplicationRow],
    alpha: f64,
    variance_model: VarianceModel,
) -> Result<Tables, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let groups = group(rows);
    let mut modes: Vec<Mode> = groups.keys().map(|(m, _)| *m).collect();
    modes.dedup();

    let mut table2 = Vec::new();
    for exp in ExperimentId::ALL {
        for &mode in &modes {
            if let Some(g) = groups.get(&(mode, exp)) {
                table2.push(Table2Row {
                    experiment: exp,
                    mode,
                    replications: g.len(),
                    waiting_time: Summary::ci95(&samples(g, Measure::WaitingTime)),
                    customers_not_served: Summary::ci95(&samples(g, Measure::CustomersNotServed)),
                });
            }
        }
    }

    let mut cmp = Vec::new();
    for &mode in &modes {
        let base = groups
            .get(&(mode, ExperimentId::E1))
            .ok_or(ReportError::MissingBaseline(mode))?;
        let others: Vec<_> = ExperimentId::ALL[1..]
            .iter()
            .filter_map(|&e| groups.get(&(mode, e)).map(|g| (e, g)))
            .collect();
        if others.is_empty() {
            return Err(ReportError::NothingToCompare(mode));
        }
        for (exp, g) in others {
            for measure in Measure::ALL {
                let test = t_test(
                    &samples(base, measure),
                    &samples(g, measure),
                    alpha,
                    variance_model,
                )
                .map_err(|source| ReportError::Stats {
                    what: format!("E1 vs {exp} {measure} ({mode})"),
                    source,
                })?;
                cmp.push(ComparisonRow {
                    baseline: ExperimentId::E1,
                    experiment: exp,
                    measure,
                    mode,
                    test,
                });
            }
        }
    }
    // Table order: pair, then measure, then mode.
    cmp.sort_by_key(|r| (r.experiment, r.measure, r.mode));

    Ok(Tables {
        modes,
        table2,
        table3: ComparisonReport {
            alpha,
            variance_model,
            rows: cmp,
        },
    })
}

/// Welch (or pooled) tests of every measure between two sets of rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub measure: Measure,
    pub n_a: usize,
    pub n_b: usize,
    pub test: TTestResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub label_a: String,
    pub label_b: String,
    pub alpha: f64,
    pub variance_model: VarianceModel,
    pub rows: Vec<CompareRow>,
}

pub fn compare_runs(
    label_a: &str,
    a: &[ReplicationRow],
    label_b: &str,
    b: &[ReplicationRow],
    alpha: f64,
    variance_model: VarianceModel,
) -> Result<CompareReport, ReportError> {
    let rows = Measure::ALL
        .iter()
        .map(|&measure| {
            t_test(
                &samples(a, measure),
                &samples(b, measure),
                alpha,
                variance_model,
            )
            .map(|test| CompareRow {
                measure,
                n_a: a.len(),
                n_b: b.len(),
                test,
            })
            .map_err(|source| ReportError::Stats {
                what: format!("{measure}: {label_a} vs {label_b}"),
                source,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(CompareReport {
        label_a: label_a.to_string(),
        label_b: label_b.to_string(),
        alpha,
        variance_model,
        rows,
    })
}

/// p-values below 1e-4 print as `<1e-4` rather than a misleading zero.
pub fn format_p(p: f64) -> String {
    if p < 1e-4 {
        "<1e-4".to_string()
    } else {
        format!("{p:.4}")
    }
}

fn decision(t: &TTestResult) -> &'static str {
    if t.reject {
        "Reject"
    } else {
        "Fail to reject"
    }
}

fn ci(s: &Summary) -> String {
    match (s.ci_low, s.ci_high) {
        (Some(lo), Some(hi)) => format!("[{lo:.3}, {hi:.3}]"),
        _ => "n/a".to_string(),
    }
}

impl Tables {
    pub fn table2_markdown(&self) -> String {
        let mut s = String::from("| Experiment |");
        let mut rule = String::from("|---|");
        for mode in &self.modes {
            for m in Measure::ALL {
                let _ = write!(s, " {}: {} |", mode.label(), m.title());
                rule.push_str("---:|");
            }
        }
        s.push('\n');
        s.push_str(&rule);
        s.push('\n');
        let mut any_low = false;
        for exp in ExperimentId::ALL {
            let cells: Vec<_> = self
                .modes
                .iter()
                .map(|&mode| {
                    self.table2
                        .iter()
                        .find(|r| r.experiment == exp && r.mode == mode)
                })
                .collect();
            if cells.iter().all(Option::is_none) {
                continue;
            }
            let _ = write!(s, "| {exp} |");
            for cell in cells {
                for m in Measure::ALL {
                    match cell {
                        Some(r) => {
                            let sm = r.summary(m);
                            any_low |= sm.low_n;
                            let flag = if sm.low_n { "*" } else { "" };
                            let _ = write!(s, " {:.2} {}{} |", sm.mean, ci(sm), flag);
                        }
                        None => s.push_str(" |"),
                    }
                }
            }
            s.push('\n');
        }
        if any_low {
            s.push_str("\n\\* fewer than 10 replications; interval is unreliable.\n");
        }
        s
    }

    pub fn table3_markdown(&self) -> String {
        let t3 = &self.table3;
        let mut s = format!(
            "alpha = {}, {} t-test\n\n| Comparison | Measure | Mode | Mean A | Mean B | t | df | p | Decision |\n|---|---|---|---:|---:|---:|---:|---:|---|\n",
            t3.alpha,
            match t3.variance_model {
                VarianceModel::Welch => "Welch",
                VarianceModel::Pooled => "pooled",
            }
        );
        for r in &t3.rows {
            let t = &r.test;
            let _ = writeln!(
                s,
                "| {} vs {} | {} | {} | {:.3} | {:.3} | {:.3} | {:.1} | {} | {} |",
                r.baseline,
                r.experiment,
                r.measure,
                r.mode,
                t.mean_a,
                t.mean_b,
                t.t_stat,
                t.df,
                format_p(t.p_value),
                decision(t)
            );
        }
        s
    }

    pub fn markdown(&self) -> String {
        format!(
            "## Performance measures\n\n{}\n## E1 against each proactive experiment\n\n{}",
            self.table2_markdown(),
            self.table3_markdown()
        )
    }

    pub fn write_table2_csv<W: io::Write>(&self, out: W) -> Result<(), ReportError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "experiment",
            "mode",
            "replications",
            "measure",
            "mean",
            "std_dev",
            "ci_low",
            "ci_high",
            "low_n",
        ])?;
        for r in &self.table2 {
            for m in Measure::ALL {
                let sm = r.summary(m);
                let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
                w.write_record([
                    r.experiment.label().to_string(),
                    r.mode.label().to_string(),
                    r.replications.to_string(),
                    m.label().to_string(),
                    sm.mean.to_string(),
                    sm.std_dev.to_string(),
                    opt(sm.ci_low),
                    opt(sm.ci_high),
                    sm.low_n.to_string(),
                ])?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn write_table3_csv<W: io::Write>(&self, out: W) -> Result<(), ReportError> {
        write_tests_csv(
            out,
            &["baseline", "experiment", "measure", "mode"],
            self.table3.rows.iter().map(|r| {
                (
                    vec![
                        r.baseline.label().to_string(),
                        r.experiment.label().to_string(),
                        r.measure.label().to_string(),
                        r.mode.label().to_string(),
                    ],
                    &r.test,
                )
            }),
        )
    }
}

impl CompareReport {
    pub fn markdown(&self) -> String {
        let mut s = format!(
            "A = {}, B = {}, alpha = {}\n\n| Measure | n A | n B | Mean A | Mean B | Difference | t | df | p | Decision |\n|---|---:|---:|---:|---:|---:|---:|---:|---:|---|\n",
            self.label_a, self.label_b, self.alpha
        );
        for r in &self.rows {
            let t = &r.test;
            let _ = writeln!(
                s,
                "| {} | {} | {} | {:.3} | {:.3} | {:.3} | {:.3} | {:.1} | {} | {} |",
                r.measure,
                r.n_a,
                r.n_b,
                t.mean_a,
                t.mean_b,
                t.mean_difference(),
                t.t_stat,
                t.df,
                format_p(t.p_value),
                decision(t)
            );
        }
        s
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), ReportError> {
        write_tests_csv(
            out,
            &["a", "b", "measure", "n_a", "n_b"],
            self.rows.iter().map(|r| {
                (
                    vec![
                        self.label_a.clone(),
                        self.label_b.clone(),
                        r.measure.label().to_string(),
                        r.n_a.to_string(),
                        r.n_b.to_string(),
                    ],
                    &r.test,
                )
            }),
        )
    }
}

fn write_tests_csv<'a, W: io::Write>(
    out: W,
    keys: &[&str],
    rows: impl Iterator<Item = (Vec<String>, &'a TTestResult)>,
) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = keys.to_vec();
    header.extend([
        "mean_a",
        "mean_b",
        "mean_difference",
        "t_stat",
        "df",
        "p_value",
        "alpha",
        "reject",
        "degenerate",
    ]);
    w.write_record(&header)?;
    for (mut rec, t) in rows {
        rec.extend([
            t.mean_a.to_string(),
            t.mean_b.to_string(),
            t.mean_difference().to_string(),
            t.t_stat.to_string(),
            t.df.to_string(),
            t.p_value.to_string(),
            t.alpha.to_string(),
            t.reject.to_string(),
            t.degenerate.to_string(),
        ]);
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
