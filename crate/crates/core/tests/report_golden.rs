//! Rendered tables for a fixed, hand-made result set. Set `UPDATE_GOLDEN=1` to rewrite.

use std::fs;
use std::path::PathBuf;

use isst_core::experiments::{ExperimentId, ReplicationRow};
use isst_core::model::Mode;
use isst_core::report::{render_tables, Tables};
use isst_core::stats::VarianceModel;

fn rows() -> Vec<ReplicationRow> {
    let waits = [
        [
            1.41, 1.62, 1.18, 1.55, 1.37, 1.49, 1.29, 1.66, 1.33, 1.45, 1.52, 1.24,
        ],
        [
            1.22, 1.35, 1.10, 1.41, 1.19, 1.28, 1.31, 1.16, 1.25, 1.38, 1.21, 1.12,
        ],
        [
            1.05, 1.21, 0.98, 1.12, 1.15, 1.01, 1.09, 1.18, 0.94, 1.11, 1.03, 1.07,
        ],
        [
            0.47, 0.45, 0.49, 0.44, 0.48, 0.46, 0.47, 0.45, 0.50, 0.43, 0.46, 0.48,
        ],
        [
            0.45, 0.46, 0.44, 0.47, 0.45, 0.43, 0.46, 0.44, 0.48, 0.45, 0.46, 0.44,
        ],
    ];
    let not_served = [
        [6, 4, 9, 5, 7, 3, 6, 8, 5, 6, 4, 7],
        [0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ];
    let mut out = Vec::new();
    for (k, exp) in ExperimentId::ALL.into_iter().enumerate() {
        for mode in Mode::ALL {
            for i in 0..12 {
                // hybrid sees the same days rotated by one
                let j = if mode == Mode::Des { i } else { (i + 1) % 12 };
                out.push(ReplicationRow {
                    experiment: exp,
                    mode,
                    replication: i as u32,
                    mean_wait_minutes: waits[k][j],
                    n_served: 360 - not_served[k][j],
                    n_not_served: not_served[k][j],
                    turned_away: 2,
                    leftover: not_served[k][j],
                });
            }
        }
    }
    out
}

fn tables() -> Tables {
    render_tables(&rows(), 0.05, VarianceModel::Welch).unwrap()
}

fn check(name: &str, actual: &[u8]) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let want = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        want == actual,
        "{name} differs from golden file:\n{}",
        String::from_utf8_lossy(actual)
    );
}

#[test]
fn markdown() {
    check("tables.md", tables().markdown().as_bytes());
}

#[test]
fn json_schema() {
    let mut v = serde_json::to_vec_pretty(&tables()).unwrap();
    v.push(b'\n');
    check("tables.json", &v);
    let back: Tables = serde_json::from_slice(&v).unwrap();
    assert_eq!(back, tables());
}

#[test]
fn csv() {
    let t = tables();
    let mut a = Vec::new();
    t.write_table2_csv(&mut a).unwrap();
    check("table2.csv", &a);
    let mut b = Vec::new();
    t.write_table3_csv(&mut b).unwrap();
    check("table3.csv", &b);
}
