use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use relaycov::cli::{error_json, parse_config, run, Command};
use relaycov::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Bounds,
    Optloc,
    Coverage,
    Coop,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Bounds => Command::Bounds,
            Cmd::Optloc => Command::OptLoc,
            Cmd::Coverage => Command::Coverage,
            Cmd::Coop => Command::Coop,
        }
    }
}

/// Capacity bounds, relay placement and coverage regions of MIMO
/// decode-and-forward relay networks.
#[derive(Debug, Parser)]
#[command(name = "relaycov", version)]
struct Args {
    command: Cmd,
    /// key=value configuration file
    #[arg(long)]
    config: PathBuf,
    /// CSV output path (default: <command>.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Print the run sidecar as JSON on stdout
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match try_main(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::FAILURE
        }
    }
}

fn try_main(args: &Args) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Io(format!("{}: {e}", args.config.display())))?;
    let mut manifest = parse_config(&text)?;
    manifest.command = args.command.into();
    manifest.output_path = args.out.clone();
    manifest.emit_json = args.json;
    if let Some(seed) = args.seed {
        manifest.mc.seed = seed;
    }
    if let Some(samples) = args.samples {
        manifest.mc.samples = samples;
    }
    manifest.validate()?;

    let summary = run(&manifest)?;
    if manifest.emit_json {
        println!("{}", summary.sidecar);
    } else {
        println!("wrote {}", summary.csv_path.display());
        println!("wrote {}", summary.sidecar_path.display());
        let report = &summary.sidecar["report"];
        if let Some(r) = report.get("r_star").and_then(|v| v.as_f64()) {
            println!("r* = {r:.4}");
        }
        if let Some(g) = report.get("min_gain").and_then(|v| v.as_f64()) {
            println!("min coverage gain = {g:.4}");
        }
        if let Some(f) = report.pointer("/extension/factor") {
            println!("extension factor = {f}");
        }
    }
    Ok(())
}
