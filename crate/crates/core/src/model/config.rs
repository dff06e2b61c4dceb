//! Scenario files: a TOML document validated strictly against [`ScenarioConfig`].
//!
//! Unknown keys are rejected with their full dotted path. Overrides given as
//! `dotted.key=value` are merged into the document before validation, so they
//! obey exactly the same rules as keys written in the file.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behavior::BehaviorRuleSet;
use crate::kernel::{ArrivalSchedule, ServiceDist, SimTime, TriangularParams};
use crate::queueing::EntityKind;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Process-oriented: passive entities flow through process logic.
    #[default]
    Des,
    /// Process skeleton whose actors are state-chart agents.
    Hybrid,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Des, Mode::Hybrid];

    pub fn label(self) -> &'static str {
        match self {
            Mode::Des => "des",
            Mode::Hybrid => "hybrid",
        }
    }

    pub fn tag(self) -> u64 {
        match self {
            Mode::Des => 1,
            Mode::Hybrid => 2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "des" => Ok(Mode::Des),
            "hybrid" | "abs" | "des-abs" => Ok(Mode::Hybrid),
            other => Err(format!("unknown mode `{other}` (expected des or hybrid)")),
        }
    }
}

/// Clock times in minutes after 9:00 am.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClockConfig {
    pub day_open: SimTime,
    pub day_close: SimTime,
    pub walkin_open: SimTime,
    pub walkin_close: SimTime,
}

impl Default for ClockConfig {
    fn default() -> Self {
        Self {
            day_open: SimTime(0.0),
            day_close: SimTime(480.0),
            walkin_open: SimTime(240.0),
            walkin_close: SimTime(420.0),
        }
    }
}

/// One hand-placed arrival; used for desk-checked traces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptedArrival {
    pub time: SimTime,
    pub kind: EntityKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArrivalsConfig {
    pub general: ArrivalSchedule,
    pub advisory: ArrivalSchedule,
    pub phone: ArrivalSchedule,
    /// When non-empty, replaces the three random arrival processes.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scripted: Vec<ScriptedArrival>,
}

impl ArrivalsConfig {
    pub fn schedule(&self, kind: EntityKind) -> &ArrivalSchedule {
        match kind {
            EntityKind::StudentGeneral => &self.general,
            EntityKind::StudentAdvisory => &self.advisory,
            EntityKind::PhoneCall => &self.phone,
        }
    }
}

impl Default for ArrivalsConfig {
    fn default() -> Self {
        let s = |r: [f64; 8]| ArrivalSchedule::new(&r).expect("valid default schedule");
        Self {
            general: s([26.0, 36.0, 42.0, 36.0, 31.0, 30.0, 12.0, 20.0]),
            advisory: s([0.0, 0.0, 0.0, 0.0, 6.0, 10.0, 36.0, 0.0]),
            phone: s([9.0, 12.0, 12.0, 9.0, 9.0, 12.0, 9.0, 6.0]),
            scripted: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReceptionConfig {
    pub capacity: u32,
    /// Phone calls wait in their own line and desk visitors are served first.
    pub split_phone_queue: bool,
    pub service: ServiceDist,
}

impl Default for ReceptionConfig {
    fn default() -> Self {
        Self {
            capacity: 1,
            split_phone_queue: false,
            service: ServiceDist::triangular(TriangularParams {
                min: 0.425,
                mode: 0.85,
                max: 1.36,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdvisoryConfig {
    pub capacity: u32,
    pub service: ServiceDist,
}

impl Default for AdvisoryConfig {
    fn default() -> Self {
        Self {
            capacity: 2,
            service: ServiceDist::triangular(TriangularParams {
                min: 2.16,
                mode: 3.6,
                max: 5.4,
            }),
        }
    }
}

/// Everything one simulated day needs.
///
/// `Default` is the shipped calibration (`scenarios/isst-default.toml`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub mode: Mode,
    pub clock: ClockConfig,
    pub arrivals: ArrivalsConfig,
    pub reception: ReceptionConfig,
    pub advisory: AdvisoryConfig,
    pub rules: BehaviorRuleSet,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "isst-default".into(),
            mode: Mode::Des,
            clock: ClockConfig::default(),
            arrivals: ArrivalsConfig::default(),
            reception: ReceptionConfig::default(),
            advisory: AdvisoryConfig::default(),
            rules: BehaviorRuleSet {
                stop_slack_minutes: -25.0,
                speedup_factor: 0.4,
                speedup_close: SimTime(360.0),
                skip_threshold_len: 1,
                quick_enquiry_prob: 0.95,
                quick_service: TriangularParams {
                    min: 0.2,
                    mode: 0.4,
                    max: 0.8,
                },
                ..BehaviorRuleSet::default()
            },
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scenario is not valid TOML: {0}")]
    Syntax(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("malformed override `{0}` (expected dotted.key=value)")]
    Override(String),
}

impl ConfigError {
    fn field(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Field {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Dotted path of the offending key, when known.
    pub fn path(&self) -> Option<&str> {
        match self {
            ConfigError::Field { path, .. } => Some(path),
            _ => None,
        }
    }
}

fn parse_override_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Sets `dotted.key=value` inside `doc`, creating intermediate tables.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<(), ConfigError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| ConfigError::Override(assignment.to_string()))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if key.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(ConfigError::Override(assignment.to_string()));
    }
    let (last, parents) = parts.split_last().expect("non-empty key");
    let mut table = doc;
    for (depth, part) in parents.iter().enumerate() {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = match entry {
            toml::Value::Table(t) => t,
            _ => {
                return Err(ConfigError::field(
                    parts[..=depth].join("."),
                    "is not a table, cannot override a key below it",
                ))
            }
        };
    }
    table.insert(last.to_string(), parse_override_value(raw.trim()));
    Ok(())
}

fn unknown_field_name(msg: &str) -> Option<&str> {
    let rest = msg.strip_prefix("unknown field `")?;
    rest.split('`').next()
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Self::from_toml_with_overrides::<&str>(text, &[])
    }

    pub fn from_toml_with_overrides<S: AsRef<str>>(
        text: &str,
        overrides: &[S],
    ) -> Result<Self, ConfigError> {
        let mut doc: toml::Table =
            toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        for o in overrides {
            apply_override(&mut doc, o.as_ref())?;
        }
        Self::from_table(doc)
    }

    pub fn from_table(doc: toml::Table) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(toml::Value::Table(doc))
            .map_err(|e| {
                let parent = e.path().to_string();
                let message = e.inner().to_string();
                let path = match unknown_field_name(&message) {
                    Some(name) if parent == "." => name.to_string(),
                    Some(name) if !parent.ends_with(name) => format!("{parent}.{name}"),
                    _ => parent,
                };
                ConfigError::field(path, message)
            })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load<S: AsRef<str>>(path: &Path, overrides: &[S]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    /// Applies overrides to an already-built config.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self, ConfigError> {
        let text = self.to_toml();
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    pub fn mean_advisory_service(&self) -> f64 {
        self.advisory.service.mean()
    }

    /// Checks every invariant; the error carries the dotted path of the culprit.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.clock;
        for (name, t) in [
            ("clock.day_open", c.day_open),
            ("clock.day_close", c.day_close),
            ("clock.walkin_open", c.walkin_open),
            ("clock.walkin_close", c.walkin_close),
        ] {
            if !(t.0.is_finite() && t.0 >= 0.0) {
                return Err(ConfigError::field(
                    name,
                    "must be a finite, non-negative number of minutes",
                ));
            }
        }
        if c.day_open.0 >= c.day_close.0 {
            return Err(ConfigError::field(
                "clock.day_close",
                "must be after clock.day_open",
            ));
        }
        if c.walkin_open.0 > c.walkin_close.0 {
            return Err(ConfigError::field(
                "clock.walkin_close",
                "must not precede clock.walkin_open",
            ));
        }
        if c.walkin_open.0 < c.day_open.0 || c.walkin_close.0 > c.day_close.0 {
            return Err(ConfigError::field(
                "clock.walkin_open",
                "walk-in window must lie inside the day",
            ));
        }
        if self.reception.capacity == 0 {
            return Err(ConfigError::field("reception.capacity", "must be >= 1"));
        }
        if self.advisory.capacity == 0 {
            return Err(ConfigError::field("advisory.capacity", "must be >= 1"));
        }
        self.reception
            .service
            .validate()
            .map_err(|e| ConfigError::field("reception.service", e.to_string()))?;
        self.advisory
            .service
            .validate()
            .map_err(|e| ConfigError::field("advisory.service", e.to_string()))?;
        for (i, a) in self.arrivals.scripted.iter().enumerate() {
            if !(a.time.0.is_finite() && a.time.0 >= c.day_open.0 && a.time.0 < c.day_close.0) {
                return Err(ConfigError::field(
                    format!("arrivals.scripted[{i}].time"),
                    "must lie inside the operating day",
                ));
            }
            if i > 0 && a.time.0 < self.arrivals.scripted[i - 1].time.0 {
                return Err(ConfigError::field(
                    format!("arrivals.scripted[{i}].time"),
                    "scripted arrivals must be sorted by time",
                ));
            }
        }
        self.rules
            .validate()
            .map_err(|(field, msg)| ConfigError::field(format!("rules.{field}"), msg))
    }
}
