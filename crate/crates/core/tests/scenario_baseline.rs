//! Writes `tests/data/scenario_baseline.json`, the locked per-scenario means
//! the acceptance suite compares against. The baseline run uses shifted
//! seeds so the acceptance run is an independent replicate.
//!
//! `cargo test -p msl-core --release --test scenario_baseline -- --ignored`

use std::collections::BTreeMap;

use msl_core::harness::{generate_scenarios, run_experiment, RunOptions, ScenarioKind};

const SEED_OFFSET: u64 = 1_000_003;

#[test]
#[ignore]
fn regenerate_scenario_baseline() {
    let mut scenarios: BTreeMap<String, BTreeMap<String, (f64, f64)>> = BTreeMap::new();
    for kind in ScenarioKind::ALL {
        for mut spec in generate_scenarios(kind).unwrap() {
            spec.seed += SEED_OFFSET;
            let exp = spec.resolve(None).unwrap();
            let result = run_experiment(&exp, &RunOptions::default()).unwrap();
            assert_eq!(result.summary.violations, 0, "{}", spec.name);
            let per = result
                .summary
                .algorithms
                .iter()
                .map(|a| (a.algorithm.as_str().to_string(), (a.mean_value, a.std_error)))
                .collect();
            scenarios.insert(spec.name.clone(), per);
        }
    }
    let doc = serde_json::json!({ "seed_offset": SEED_OFFSET, "scenarios": scenarios });
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/scenario_baseline.json");
    std::fs::write(path, serde_json::to_string_pretty(&doc).unwrap() + "\n").unwrap();
}
