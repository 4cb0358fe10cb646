mod config;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use topobound_core::selfcheck::{run_selfcheck, SelfCheckConfig};

use crate::config::Config;

#[derive(Debug, Parser)]
#[command(
    name = "topobound",
    version,
    about = "Entropy bounds for stabilizer codes on tori"
)]
struct Args {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: the config's `output`, else the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Run the randomized internal consistency checks instead of an experiment.
    #[arg(long)]
    selfcheck: bool,
}

/// Usage or configuration problem.
struct UsageError(String);

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), UsageError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}

fn output_dir(args: &Args, config: Option<&Config>) -> Result<PathBuf, UsageError> {
    let dir = args
        .out
        .clone()
        .or_else(|| config.and_then(|c| c.output.as_ref().map(PathBuf::from)))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| UsageError(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn selfcheck(args: &Args) -> Result<i32, UsageError> {
    let config = SelfCheckConfig {
        seed: args.seed.unwrap_or(0),
        ..SelfCheckConfig::default()
    };
    let report = run_selfcheck(&config).map_err(|e| UsageError(e.to_string()))?;
    let dir = output_dir(args, None)?;
    write_json(&dir.join("selfcheck.json"), &report)?;
    for c in &report.checks {
        let status = if c.failures == 0 { "ok" } else { "FAILED" };
        println!("{:<24} {:>5} cases  {status}", c.name, c.cases);
        if let Some(f) = &c.first_failure {
            println!("  first failure: {f}");
        }
    }
    Ok(if report.passed { 0 } else { 1 })
}

fn experiment(args: &Args) -> Result<i32, UsageError> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| UsageError("either --config or --selfcheck is required".into()))?;
    let mut config = Config::load(path).map_err(UsageError)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let report = run::run(&config).map_err(UsageError)?;
    let dir = output_dir(args, Some(&config))?;
    write_json(&dir.join("report.json"), &report)?;
    if let Some(csv) = report.csv() {
        let path = dir.join("samples.csv");
        std::fs::write(&path, csv)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
    }

    for p in &report.points {
        let code = p.code;
        let d = code.d.map(|d| format!(", d={d}")).unwrap_or_default();
        println!("{} [n={}, k={}{d}]", p.model, code.n, code.k);
        for v in &p.verdicts {
            let status = if v.holds { "holds" } else { "fails" };
            println!("  {:<18} lhs={} rhs={} {status}", v.bound, v.lhs, v.rhs);
        }
    }
    if let Some(fit) = &report.fit {
        println!(
            "fit {:?}: coefficients {:?}, residual {:e}",
            fit.form, fit.coefficients, fit.residual_norm
        );
    }
    for f in &report.findings {
        println!("finding: {f}");
    }
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = if args.selfcheck {
        selfcheck(&args)
    } else {
        experiment(&args)
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
