//! The five experiment presets, replication control and per-replication output.

use std::fmt;
use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behavior::BehaviorRuleSet;
use crate::kernel::mix_seed;
use crate::model::{simulate_day, Mode, ModelError, ReplicationMetrics, ScenarioConfig};
use crate::stats::Summary;

/// E1 is purely reactive; E2-E4 switch on one proactive rule each; E5 all three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExperimentId {
    E1,
    E2,
    E3,
    E4,
    E5,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 5] = [
        ExperimentId::E1,
        ExperimentId::E2,
        ExperimentId::E3,
        ExperimentId::E4,
        ExperimentId::E5,
    ];

    pub fn number(self) -> u64 {
        match self {
            ExperimentId::E1 => 1,
            ExperimentId::E2 => 2,
            ExperimentId::E3 => 3,
            ExperimentId::E4 => 4,
            ExperimentId::E5 => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ExperimentId::E1 => "E1",
            ExperimentId::E2 => "E2",
            ExperimentId::E3 => "E3",
            ExperimentId::E4 => "E4",
            ExperimentId::E5 => "E5",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentId::E1 => "reactive only",
            ExperimentId::E2 => "stop handing out numbers",
            ExperimentId::E3 => "advisors speed up",
            ExperimentId::E4 => "students skip with quick questions",
            ExperimentId::E5 => "all proactive rules",
        }
    }

    /// `(stop_numbers, speedup, skip)`.
    pub fn toggles(self) -> (bool, bool, bool) {
        match self {
            ExperimentId::E1 => (false, false, false),
            ExperimentId::E2 => (true, false, false),
            ExperimentId::E3 => (false, true, false),
            ExperimentId::E4 => (false, false, true),
            ExperimentId::E5 => (true, true, true),
        }
    }

    /// The rule set with this experiment's switches; parameters come from `base`.
    pub fn rules(self, base: BehaviorRuleSet) -> BehaviorRuleSet {
        let (stop, speedup, skip) = self.toggles();
        BehaviorRuleSet {
            stop_numbers_enabled: stop,
            speedup_enabled: speedup,
            skip_enabled: skip,
            ..base
        }
    }

    pub fn apply(self, cfg: &ScenarioConfig) -> ScenarioConfig {
        let mut out = cfg.clone();
        out.rules = self.rules(cfg.rules);
        out
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ExperimentId {
    type Err = ExperimentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let digits = t.strip_prefix(['E', 'e']).unwrap_or(t);
        match digits {
            "1" => Ok(ExperimentId::E1),
            "2" => Ok(ExperimentId::E2),
            "3" => Ok(ExperimentId::E3),
            "4" => Ok(ExperimentId::E4),
            "5" => Ok(ExperimentId::E5),
            _ => Err(ExperimentError::UnknownExperiment(s.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown experiment `{0}` (expected E1..E5)")]
    UnknownExperiment(String),
    #[error("need at least 2 replications, got {0}")]
    TooFewReplications(u32),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("malformed results: {0}")]
    Results(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Master seed handed to every replication of one `(experiment, mode)` run.
///
/// Without common random numbers each experiment and each mode draws from
/// its own streams. With them, replication `i` of every experiment in a mode
/// sees the same streams, so comparisons between experiments are paired.
pub fn run_seed(master_seed: u64, exp: ExperimentId, mode: Mode, crn: bool) -> u64 {
    if crn {
        mix_seed(&[master_seed, 0, mode.tag()])
    } else {
        mix_seed(&[master_seed, exp.number(), mode.tag()])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRun {
    pub experiment: ExperimentId,
    pub mode: Mode,
    pub replications: u32,
    pub master_seed: u64,
    pub crn: bool,
    /// Ordered by replication index.
    pub results: Vec<ReplicationMetrics>,
}

pub fn run_experiment(
    cfg: &ScenarioConfig,
    exp: ExperimentId,
    mode: Mode,
    replications: u32,
    master_seed: u64,
    crn: bool,
) -> Result<ExperimentRun, ExperimentError> {
    if replications < 2 {
        return Err(ExperimentError::TooFewReplications(replications));
    }
    let scenario = exp.apply(cfg);
    scenario.validate().map_err(ModelError::from)?;
    let seed = run_seed(master_seed, exp, mode, crn);
    let results = (0..replications as u64)
        .into_par_iter()
        .map(|r| simulate_day(&scenario, mode, seed, r, false).map(|o| o.metrics))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentRun {
        experiment: exp,
        mode,
        replications,
        master_seed,
        crn,
        results,
    })
}

/// Every requested experiment in every requested mode, in (mode, experiment) order.
pub fn run_suite(
    cfg: &ScenarioConfig,
    experiments: &[ExperimentId],
    modes: &[Mode],
    replications: u32,
    master_seed: u64,
    crn: bool,
) -> Result<Vec<ExperimentRun>, ExperimentError> {
    let mut runs = Vec::with_capacity(experiments.len() * modes.len());
    for &mode in modes {
        for &exp in experiments {
            runs.push(run_experiment(
                cfg,
                exp,
                mode,
                replications,
                master_seed,
                crn,
            )?);
        }
    }
    Ok(runs)
}

impl ExperimentRun {
    pub fn waits(&self) -> Vec<f64> {
        self.results.iter().map(|m| m.mean_wait_minutes).collect()
    }

    pub fn not_served(&self) -> Vec<f64> {
        self.results.iter().map(|m| m.n_not_served as f64).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = ReplicationRow> + '_ {
        self.results
            .iter()
            .enumerate()
            .map(|(i, m)| ReplicationRow {
                experiment: self.experiment,
                mode: self.mode,
                replication: i as u32,
                mean_wait_minutes: m.mean_wait_minutes,
                n_served: m.n_served,
                n_not_served: m.n_not_served,
                turned_away: m.turned_away,
                leftover: m.left_in_reception + m.left_holding_ticket,
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunAggregate {
    pub experiment: ExperimentId,
    pub mode: Mode,
    pub replications: u32,
    pub master_seed: u64,
    pub crn: bool,
    pub mean_wait_minutes: Summary,
    pub n_served: Summary,
    pub n_not_served: Summary,
    pub turned_away: Summary,
}

/// Sample mean, standard deviation and 95% t interval of each measure.
pub fn aggregate(run: &ExperimentRun) -> Result<RunAggregate, ExperimentError> {
    if run.results.is_empty() {
        return Err(ExperimentError::Results(format!(
            "{} / {} has no replications",
            run.experiment, run.mode
        )));
    }
    let col = |f: fn(&ReplicationMetrics) -> f64| {
        Summary::ci95(&run.results.iter().map(f).collect::<Vec<_>>())
    };
    Ok(RunAggregate {
        experiment: run.experiment,
        mode: run.mode,
        replications: run.replications,
        master_seed: run.master_seed,
        crn: run.crn,
        mean_wait_minutes: col(|m| m.mean_wait_minutes),
        n_served: col(|m| m.n_served as f64),
        n_not_served: col(|m| m.n_not_served as f64),
        turned_away: col(|m| m.turned_away as f64),
    })
}

/// One line of the per-replication CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplicationRow {
    pub experiment: ExperimentId,
    pub mode: Mode,
    pub replication: u32,
    pub mean_wait_minutes: f64,
    pub n_served: u64,
    pub n_not_served: u64,
    pub turned_away: u64,
    pub leftover: u64,
}

pub const CSV_HEADER: [&str; 8] = [
    "experiment",
    "mode",
    "replication",
    "mean_wait_minutes",
    "n_served",
    "n_not_served",
    "turned_away",
    "leftover",
];

pub fn write_rows_csv<W: io::Write>(
    rows: impl IntoIterator<Item = ReplicationRow>,
    out: W,
) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_rows_csv`]; the header must match exactly.
pub fn read_rows_csv<R: io::Read>(input: R) -> Result<Vec<ReplicationRow>, ExperimentError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(ExperimentError::Results(format!(
            "unexpected CSV columns {header:?}, expected {CSV_HEADER:?}"
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(ExperimentError::from))
        .collect()
}
