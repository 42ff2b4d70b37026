use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use msl_core::harness::{
    generate_scenarios, run_experiment, write_outputs, write_trials_jsonl, ConstantsRef, Execution, ExperimentSpec,
    RunOptions, ScenarioKind,
};
use msl_core::RankAccess;

#[derive(Parser)]
#[command(name = "msl", version, about = "Matroid secretary experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write summary.json and trials.csv.
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Structure constants file, overriding the one in the spec.
        #[arg(long)]
        constants: Option<PathBuf>,
        /// Feed the remainder in adversarial orders instead of at random.
        #[arg(long)]
        adversarial_order: bool,
        /// Worker threads. 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
        /// Add a wall_time_us column. Output is then not reproducible.
        #[arg(long)]
        timing: bool,
        /// Also write trials.jsonl with every arrival decision.
        #[arg(long)]
        steps: bool,
    },
    /// Check an experiment file without running it.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Print the experiment files of a scenario family as a JSON array.
    Scenarios {
        #[arg(long)]
        kind: ScenarioKind,
        /// Write one file per experiment into this directory instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<ExperimentSpec> {
    ExperimentSpec::load(path).with_context(|| format!("reading {}", path.display()))
}

fn base_dir(path: &Path) -> Option<&Path> {
    path.parent().filter(|p| !p.as_os_str().is_empty())
}

#[allow(clippy::too_many_arguments)]
fn run(
    spec_path: &Path,
    out: &Path,
    trials: Option<u64>,
    seed: Option<u64>,
    constants: Option<PathBuf>,
    adversarial_order: bool,
    jobs: Option<usize>,
    timing: bool,
    steps: bool,
) -> Result<bool> {
    let mut spec = load(spec_path)?;
    if let Some(t) = trials {
        spec.trials = t;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(c) = constants {
        spec.constants = Some(ConstantsRef::Path(std::path::absolute(&c)?));
    }
    spec.adversarial_order |= adversarial_order;
    let experiment = spec.resolve(base_dir(spec_path)).context("invalid experiment")?;
    let execution = match jobs {
        Some(1) => Execution::Sequential,
        jobs => Execution::Parallel { jobs },
    };
    let result = run_experiment(&experiment, &RunOptions { execution, timing })?;
    write_outputs(out, &result.summary, &result.records, timing)?;
    if steps {
        let path = out.join("trials.jsonl");
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        write_trials_jsonl(&mut w, &result.records)?;
        w.flush()?;
    }
    let s = &result.summary;
    println!("{}: n={} rank={} OPT(U)={} trials={}", s.name, s.n, s.rank, s.opt_ground, s.trials);
    for a in &s.algorithms {
        let ratio = a.ratio.map_or("inf".to_string(), |r| format!("{r:.4}"));
        println!(
            "  {:<16} mean={:.4} se={:.4} ratio={} violations={}",
            a.algorithm.as_str(),
            a.mean_value,
            a.std_error,
            ratio,
            a.violations
        );
    }
    Ok(s.violations == 0)
}

fn validate(spec_path: &Path) -> Result<()> {
    let spec = load(spec_path)?;
    let experiment = spec.resolve(base_dir(spec_path)).context("invalid experiment")?;
    let oracle = msl_core::RankOracle::new(experiment.instance.clone());
    let n = experiment.instance.n();
    let rank = oracle.rank(&msl_core::ElementSet::full(n))?;
    let algorithms: Vec<&str> = experiment.algorithms.iter().map(|a| a.as_str()).collect();
    println!(
        "ok: {} family={} n={n} rank={rank} trials={} algorithms={}",
        experiment.name,
        experiment.instance.spec().family_name(),
        experiment.trials,
        algorithms.join(",")
    );
    Ok(())
}

fn scenarios(kind: ScenarioKind, out: Option<PathBuf>) -> Result<()> {
    let specs = generate_scenarios(kind)?;
    match out {
        None => println!("{}", serde_json::to_string_pretty(&specs)?),
        Some(dir) => {
            std::fs::create_dir_all(&dir)?;
            for spec in &specs {
                let path = dir.join(format!("{}.json", spec.name));
                std::fs::write(&path, serde_json::to_string_pretty(spec)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            spec,
            out,
            trials,
            seed,
            constants,
            adversarial_order,
            jobs,
            timing,
            steps,
        } => run(&spec, &out, trials, seed, constants, adversarial_order, jobs, timing, steps),
        Command::Validate { spec } => validate(&spec).map(|_| true),
        Command::Scenarios { kind, out } => scenarios(kind, out).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("guarantee or discipline violations recorded");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
