use std::path::Path;
use std::process::{Command, Output};

fn msl(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msl"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("msl runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const RANK_ONE: &str = r#"{
  "name": "rank-one",
  "matroid": {"family": "uniform", "n": 6, "k": 1},
  "valuation": {"values": [1, 2, 4, 8, 16, 32]},
  "trials": 40,
  "seed": 7,
  "algorithms": ["ma", "ta_only", "sa_exhaustive", "bucket_threshold"]
}"#;

#[test]
fn run_writes_summary_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", RANK_ONE);
    let out = dir.path().join("out");
    let o = msl(&["run", "--spec", &spec, "--out", out.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["trials"], 40);
    assert_eq!(summary["opt_ground"], 32.0);
    assert_eq!(summary["algorithms"].as_array().unwrap().len(), 4);
    let csv = std::fs::read_to_string(out.join("trials.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,seed,algorithm,order,w,sample,strategy,case,selected,value,opt_ground,bound,holds,independent,\
         discipline_violations,queries,valuable,lower,upper"
    );
    assert_eq!(lines.count(), 160);
}

#[test]
fn output_is_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", RANK_ONE);
    let mut csvs = Vec::new();
    for jobs in ["1", "3"] {
        let out = dir.path().join(format!("out{jobs}"));
        let o = msl(
            &["run", "--spec", &spec, "--out", out.to_str().unwrap(), "--jobs", jobs, "--trials", "25"],
            dir.path(),
        );
        assert!(o.status.success());
        csvs.push(std::fs::read(out.join("trials.csv")).unwrap());
        csvs.push(std::fs::read(out.join("summary.json")).unwrap());
    }
    assert_eq!(csvs[0], csvs[2]);
    assert_eq!(csvs[1], csvs[3]);
}

#[test]
fn overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", RANK_ONE);
    let constants = write(dir.path(), "c.json", r#"{"case_denom": 4}"#);
    let out = dir.path().join("out");
    let o = msl(
        &[
            "run",
            "--spec",
            &spec,
            "--out",
            out.to_str().unwrap(),
            "--trials",
            "9",
            "--seed",
            "3",
            "--constants",
            &constants,
            "--adversarial-order",
            "--timing",
            "--steps",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["trials"], 9);
    assert_eq!(summary["seed"], 3);
    assert_eq!(summary["adversarial_order"], true);
    assert_eq!(summary["constants"]["case_denom"], 4.0);
    let csv = std::fs::read_to_string(out.join("trials.csv")).unwrap();
    assert!(csv.lines().next().unwrap().ends_with(",wall_time_us"));
    assert!(csv.contains(",value_descending,"));
    let jsonl = std::fs::read_to_string(out.join("trials.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 36);
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", RANK_ONE);
    let o = msl(&["validate", "--spec", &good], dir.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("rank=1"));

    let zero_trials = write(dir.path(), "bad.json", &RANK_ONE.replace("\"trials\": 40", "\"trials\": 0"));
    assert_eq!(msl(&["validate", "--spec", &zero_trials], dir.path()).status.code(), Some(2));

    let short = write(dir.path(), "short.json", &RANK_ONE.replace("[1, 2, 4, 8, 16, 32]", "[1, 2]"));
    assert_eq!(msl(&["validate", "--spec", &short], dir.path()).status.code(), Some(2));

    let missing = write(
        dir.path(),
        "missing.json",
        &RANK_ONE.replace("\"seed\": 7,", "\"seed\": 7, \"constants\": \"nowhere.json\","),
    );
    assert_eq!(msl(&["validate", "--spec", &missing], dir.path()).status.code(), Some(2));
}

#[test]
fn constants_path_is_relative_to_spec() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("sub")).unwrap();
    write(&dir.path().join("sub"), "c.json", r#"{"negligible_div": 16}"#);
    let spec = write(
        &dir.path().join("sub"),
        "spec.json",
        &RANK_ONE.replace("\"seed\": 7,", "\"seed\": 7, \"constants\": \"c.json\","),
    );
    assert!(msl(&["validate", "--spec", &spec], dir.path()).status.success());
}

#[test]
fn scenarios_round_trip_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["a", "b", "c", "flat"] {
        let o = msl(&["scenarios", "--kind", kind], dir.path());
        assert!(o.status.success());
        let specs: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(!specs.as_array().unwrap().is_empty());

        let out = dir.path().join(kind);
        let o = msl(&["scenarios", "--kind", kind, "--out", out.to_str().unwrap()], dir.path());
        assert!(o.status.success());
        for line in String::from_utf8_lossy(&o.stdout).lines() {
            assert!(msl(&["validate", "--spec", line], dir.path()).status.success(), "{line}");
        }
    }
    assert!(!msl(&["scenarios", "--kind", "x"], dir.path()).status.success());
}
