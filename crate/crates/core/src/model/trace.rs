//! Per-event trace records, written as JSON lines.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::queueing::{EntityId, EntityKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    Arrive,
    Skip,
    JoinReception,
    StartReception,
    EndReception,
    IssueTicket,
    JoinAdvisory,
    TurnAway,
    StartAdvisory,
    EndAdvisory,
    WalkinOpen,
    WalkinClose,
    DayClose,
    Unserved,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub time: f64,
    pub event: TraceEvent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity: Option<EntityId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<EntityKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ticket: Option<u32>,
    /// Service length, on start events.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Length of the queue just joined or left.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub queue_len: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub rushed: bool,
}

impl TraceRecord {
    pub fn new(time: f64, event: TraceEvent) -> Self {
        Self {
            time,
            event,
            entity: None,
            kind: None,
            ticket: None,
            duration: None,
            queue_len: None,
            rushed: false,
        }
    }
}

pub fn write_jsonl<W: Write>(records: &[TraceRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_jsonl(text: &str) -> Result<Vec<TraceRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
