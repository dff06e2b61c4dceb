use std::fs;
use std::path::Path;

use isst_core::experiments::{read_rows_csv, ExperimentId, ExperimentRun, ReplicationRow};
use isst_core::model::{Mode, ScenarioConfig};

use crate::error::CliError;
use crate::ScenarioArgs;

pub fn scenario(args: &ScenarioArgs) -> Result<ScenarioConfig, CliError> {
    let cfg = match &args.scenario {
        Some(path) => ScenarioConfig::load(path, &args.overrides),
        None => ScenarioConfig::default().with_overrides(&args.overrides),
    };
    cfg.map_err(CliError::input)
}

pub fn mode(s: &str) -> Result<Mode, CliError> {
    s.parse().map_err(CliError::Input)
}

/// A result file plus an optional `#E1`, `#des` or `#E1/des` filter.
#[derive(Debug, PartialEq)]
pub struct Selector<'a> {
    pub path: &'a str,
    pub experiment: Option<ExperimentId>,
    pub mode: Option<Mode>,
}

impl<'a> Selector<'a> {
    pub fn parse(s: &'a str) -> Result<Self, CliError> {
        let (path, filter) = match s.rsplit_once('#') {
            Some((p, f)) => (p, Some(f)),
            None => (s, None),
        };
        let mut sel = Selector {
            path,
            experiment: None,
            mode: None,
        };
        for part in filter
            .into_iter()
            .flat_map(|f| f.split('/'))
            .filter(|p| !p.is_empty())
        {
            if let Ok(e) = part.parse::<ExperimentId>() {
                sel.experiment = Some(e);
            } else if let Ok(m) = part.parse::<Mode>() {
                sel.mode = Some(m);
            } else {
                return Err(CliError::input(format!(
                    "`{part}` in `{s}` is neither an experiment (E1..E5) nor a mode (des, hybrid)"
                )));
            }
        }
        Ok(sel)
    }

    pub fn load(&self) -> Result<Vec<ReplicationRow>, CliError> {
        let rows: Vec<_> = load_rows(Path::new(self.path))?
            .into_iter()
            .filter(|r| self.experiment.is_none_or(|e| e == r.experiment))
            .filter(|r| self.mode.is_none_or(|m| m == r.mode))
            .collect();
        if rows.is_empty() {
            return Err(CliError::input(format!(
                "no replications in {} match the selection",
                self.path
            )));
        }
        Ok(rows)
    }

    pub fn label(&self) -> String {
        let mut s = self.path.to_string();
        if let Some(e) = self.experiment {
            s.push_str(&format!(" {e}"));
        }
        if let Some(m) = self.mode {
            s.push_str(&format!(" {m}"));
        }
        s
    }
}

/// Per-replication CSV, or the JSON written for one experiment or a whole suite.
pub fn load_rows(path: &Path) -> Result<Vec<ReplicationRow>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let bad = |e: &dyn std::fmt::Display| CliError::input(format!("{}: {e}", path.display()));
    if path
        .extension()
        .is_some_and(|x| x.eq_ignore_ascii_case("json"))
    {
        let runs: Vec<ExperimentRun> = match serde_json::from_str::<Vec<ExperimentRun>>(&text) {
            Ok(runs) => runs,
            Err(_) => vec![serde_json::from_str::<ExperimentRun>(&text).map_err(|e| bad(&e))?],
        };
        Ok(runs.iter().flat_map(|r| r.rows()).collect())
    } else {
        read_rows_csv(text.as_bytes()).map_err(|e| bad(&e))
    }
}
