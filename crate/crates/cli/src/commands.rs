use std::fmt::Write as _;

use isst_core::experiments::{
    aggregate, run_experiment, run_suite, write_rows_csv, ExperimentId, ExperimentRun,
    ReplicationRow, RunAggregate,
};
use isst_core::model::{simulate_day, write_jsonl, Mode, ReplicationMetrics};
use isst_core::report::{compare_runs, render_tables, Tables};
use isst_core::stats::{Summary, VarianceModel};

use crate::error::CliError;
use crate::input::{self, Selector};
use crate::output::{buffer, json, Files, Output};
use crate::{Format, ScenarioArgs, TestArgs};

fn variance_model(t: &TestArgs) -> Result<VarianceModel, CliError> {
    if !(t.alpha > 0.0 && t.alpha <= 1.0) {
        return Err(CliError::input(format!(
            "--alpha must lie in (0, 1], got {}",
            t.alpha
        )));
    }
    Ok(if t.pooled {
        VarianceModel::Pooled
    } else {
        VarianceModel::Welch
    })
}

const METRIC_COLUMNS: [&str; 11] = [
    "mean_wait_minutes",
    "n_arrivals",
    "n_served",
    "n_not_served",
    "turned_away",
    "left_in_reception",
    "left_holding_ticket",
    "skipped",
    "tickets_issued",
    "rushed_services",
    "end_time",
];

fn metric_values(m: &ReplicationMetrics) -> [String; 11] {
    [
        m.mean_wait_minutes.to_string(),
        m.n_arrivals.to_string(),
        m.n_served.to_string(),
        m.n_not_served.to_string(),
        m.turned_away.to_string(),
        m.left_in_reception.to_string(),
        m.left_holding_ticket.to_string(),
        m.skipped.to_string(),
        m.tickets_issued.to_string(),
        m.rushed_services.to_string(),
        m.end_time.to_string(),
    ]
}

fn metrics_csv(m: &ReplicationMetrics) -> Result<Vec<u8>, CliError> {
    buffer(|out: &mut Vec<u8>| -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(METRIC_COLUMNS)?;
        w.write_record(metric_values(m))?;
        w.flush()?;
        Ok(())
    })
}

fn metrics_md(m: &ReplicationMetrics) -> Vec<u8> {
    let mut s = String::from("| Measure | Value |\n|---|---:|\n");
    for (k, v) in METRIC_COLUMNS.iter().zip(metric_values(m)) {
        let _ = writeln!(s, "| {k} | {v} |");
    }
    s.into_bytes()
}

pub fn run(
    out: &Output,
    args: &ScenarioArgs,
    mode: Option<&str>,
    replication: u64,
    trace: bool,
) -> Result<(), CliError> {
    if trace && !out.has_dir() {
        return Err(CliError::input(
            "--trace writes trace.jsonl and needs --output-dir",
        ));
    }
    let cfg = input::scenario(args)?;
    let mode = mode.map(input::mode).transpose()?.unwrap_or(cfg.mode);
    let day = simulate_day(&cfg, mode, args.seed, replication, trace)?;

    let mut files = Files::new();
    files.add("metrics.json", json(&day.metrics));
    files.add("metrics.csv", metrics_csv(&day.metrics)?);
    if trace {
        files.add(
            "trace.jsonl",
            buffer(|v: &mut Vec<u8>| write_jsonl(&day.trace, v))?,
        );
    }
    let stdout = match out.format_or(Format::Json) {
        Format::Json => json(&day.metrics),
        Format::Csv => metrics_csv(&day.metrics)?,
        Format::Md => metrics_md(&day.metrics),
    };
    out.finish(files, &stdout)
}

fn rows_csv<'a>(runs: impl IntoIterator<Item = &'a ExperimentRun>) -> Result<Vec<u8>, CliError> {
    let rows: Vec<ReplicationRow> = runs.into_iter().flat_map(|r| r.rows()).collect();
    buffer(|v: &mut Vec<u8>| write_rows_csv(rows, v))
}

fn summary_cells(s: &Summary) -> String {
    let ci = match (s.ci_low, s.ci_high) {
        (Some(lo), Some(hi)) => format!("[{lo:.3}, {hi:.3}]"),
        _ => "n/a".into(),
    };
    format!(
        "{:.3} | {:.3} | {ci}{}",
        s.mean,
        s.std_dev,
        if s.low_n { " (low n)" } else { "" }
    )
}

fn aggregates_md(aggs: &[RunAggregate]) -> Vec<u8> {
    let mut s = String::from(
        "| Experiment | Mode | Reps | Measure | Mean | SD | 95% CI |\n|---|---|---:|---|---:|---:|---|\n",
    );
    for a in aggs {
        for (name, sm) in [
            ("mean_wait_minutes", &a.mean_wait_minutes),
            ("n_served", &a.n_served),
            ("n_not_served", &a.n_not_served),
            ("turned_away", &a.turned_away),
        ] {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {name} | {} |",
                a.experiment,
                a.mode,
                a.replications,
                summary_cells(sm)
            );
        }
    }
    s.into_bytes()
}

pub fn experiment(
    out: &Output,
    args: &ScenarioArgs,
    exp: &str,
    mode: Option<&str>,
    replications: u32,
    crn: bool,
) -> Result<(), CliError> {
    let cfg = input::scenario(args)?;
    let exp: ExperimentId = exp.parse()?;
    let mode = mode.map(input::mode).transpose()?.unwrap_or(cfg.mode);
    let run = run_experiment(&cfg, exp, mode, replications, args.seed, crn)?;
    let agg = aggregate(&run)?;

    let csv = rows_csv([&run])?;
    let mut files = Files::new();
    files.add("replications.csv", csv.clone());
    files.add("run.json", json(&run));
    files.add("aggregate.json", json(&agg));
    let stdout = match out.format_or(Format::Md) {
        Format::Csv => csv,
        Format::Json => json(&run),
        Format::Md => aggregates_md(std::slice::from_ref(&agg)),
    };
    out.finish(files, &stdout)
}

fn table_files(files: &mut Files, tables: &Tables) -> Result<(), CliError> {
    files.add("tables.md", tables.markdown().into_bytes());
    files.add("tables.json", json(tables));
    files.add(
        "table2.csv",
        buffer(|v: &mut Vec<u8>| tables.write_table2_csv(v))?,
    );
    files.add(
        "table3.csv",
        buffer(|v: &mut Vec<u8>| tables.write_table3_csv(v))?,
    );
    Ok(())
}

fn tables_stdout(out: &Output, tables: &Tables) -> Result<Vec<u8>, CliError> {
    Ok(match out.format_or(Format::Md) {
        Format::Md => tables.markdown().into_bytes(),
        Format::Json => json(tables),
        Format::Csv => {
            let mut v = buffer(|v: &mut Vec<u8>| tables.write_table2_csv(v))?;
            v.push(b'\n');
            v.extend(buffer(|v: &mut Vec<u8>| tables.write_table3_csv(v))?);
            v
        }
    })
}

pub fn suite(
    out: &Output,
    args: &ScenarioArgs,
    replications: u32,
    crn: bool,
    test: &TestArgs,
) -> Result<(), CliError> {
    let model = variance_model(test)?;
    let cfg = input::scenario(args)?;
    let runs = run_suite(
        &cfg,
        &ExperimentId::ALL,
        &Mode::ALL,
        replications,
        args.seed,
        crn,
    )?;
    let aggs = runs.iter().map(aggregate).collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<ReplicationRow> = runs.iter().flat_map(|r| r.rows()).collect();
    let tables = render_tables(&rows, test.alpha, model)?;

    let mut files = Files::new();
    files.add("replications.csv", rows_csv(&runs)?);
    files.add("runs.json", json(&runs));
    files.add("aggregates.json", json(&aggs));
    table_files(&mut files, &tables)?;
    let stdout = tables_stdout(out, &tables)?;
    out.finish(files, &stdout)
}

pub fn compare(out: &Output, a: &str, b: &str, test: &TestArgs) -> Result<(), CliError> {
    let model = variance_model(test)?;
    let (sa, sb) = (Selector::parse(a)?, Selector::parse(b)?);
    let report = compare_runs(
        &sa.label(),
        &sa.load()?,
        &sb.label(),
        &sb.load()?,
        test.alpha,
        model,
    )?;

    let csv = buffer(|v: &mut Vec<u8>| report.write_csv(v))?;
    let mut files = Files::new();
    files.add("comparison.md", report.markdown().into_bytes());
    files.add("comparison.csv", csv.clone());
    files.add("comparison.json", json(&report));
    let stdout = match out.format_or(Format::Md) {
        Format::Md => report.markdown().into_bytes(),
        Format::Csv => csv,
        Format::Json => json(&report),
    };
    out.finish(files, &stdout)
}

pub fn render(out: &Output, inputs: &[String], test: &TestArgs) -> Result<(), CliError> {
    let model = variance_model(test)?;
    let mut rows = Vec::new();
    for i in inputs {
        rows.extend(Selector::parse(i)?.load()?);
    }
    let tables = render_tables(&rows, test.alpha, model)?;
    let mut files = Files::new();
    table_files(&mut files, &tables)?;
    let stdout = tables_stdout(out, &tables)?;
    out.finish(files, &stdout)
}
