use std::path::Path;

use isst_core::model::{ConfigError, ScenarioConfig};

fn shipped() -> &'static Path {
    Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../scenarios/isst-default.toml"
    ))
}

#[test]
fn shipped_file_is_the_built_in_calibration() {
    let cfg = ScenarioConfig::load::<&str>(shipped(), &[]).unwrap();
    assert_eq!(cfg, ScenarioConfig::default());
}

#[test]
fn default_survives_a_toml_round_trip() {
    let text = ScenarioConfig::default().to_toml();
    assert_eq!(
        ScenarioConfig::from_toml_str(&text).unwrap(),
        ScenarioConfig::default()
    );
}

#[test]
fn overrides_apply_on_top_of_the_file() {
    let cfg = ScenarioConfig::load(
        shipped(),
        &["rules.speedup_factor=0.75", "advisory.capacity=3"],
    )
    .unwrap();
    assert_eq!(cfg.rules.speedup_factor, 0.75);
    assert_eq!(cfg.advisory.capacity, 3);
}

#[test]
fn unknown_and_invalid_keys_name_their_path() {
    let err = ScenarioConfig::load(shipped(), &["reception.servcie.min=1"]).unwrap_err();
    assert_eq!(err.path(), Some("reception.servcie"));
    let err = ScenarioConfig::load(shipped(), &["rules.speedup_factor=1.5"]).unwrap_err();
    assert_eq!(err.path(), Some("rules.speedup_factor"));
    let err = ScenarioConfig::from_toml_str("[arrivals]\ngeneral = [1, 2]\n").unwrap_err();
    assert_eq!(err.path(), Some("arrivals.general"));
    assert!(matches!(
        ScenarioConfig::load::<&str>(Path::new("/nonexistent/scenario.toml"), &[]),
        Err(ConfigError::Io { .. })
    ));
}
