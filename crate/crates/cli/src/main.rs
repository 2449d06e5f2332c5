use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jetbundle_cli::{check, config, scenario};

/// Exit codes: 0 success, 2 config error, 3 runtime
/// singularity/non-contraction, 4 I/O error.
#[derive(Parser)]
#[command(name = "jetbundle", version, about = "Run dynamical-system scenarios and emit CSV traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write its CSV trace.
    Run {
        /// Path to the TOML scenario config.
        config: PathBuf,
        /// Output CSV path (defaults to the config stem + ".csv").
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the summary only; skip writing the CSV.
        #[arg(long)]
        summary_only: bool,
    },
    /// Run the library invariant battery and print a report.
    Check {
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the built-in presets.
    Presets,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;
const EXIT_IO: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            summary_only,
        } => run(&config, out.as_deref(), summary_only),
        Command::Check { seed } => run_check(seed),
        Command::Presets => {
            for preset in config::Preset::ALL {
                println!("{:<18} {}", preset.name(), preset.describe());
            }
            ExitCode::SUCCESS
        }
    }
}

fn run(config_path: &Path, out: Option<&Path>, summary_only: bool) -> ExitCode {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", config_path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cfg = match config::parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let artifact = match scenario::run_scenario(&cfg) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    };

    let s = &artifact.summary;
    println!("scenario       {}", cfg.name);
    println!("preset         {}", cfg.preset.name());
    println!(
        "method         {}",
        match cfg.method {
            jetbundle::dynamics::Method::Rk4 => "rk4",
            jetbundle::dynamics::Method::Picard => "picard",
        }
    );
    println!("steps          {}", s.steps);
    println!("final time     {:.6}", s.final_time);
    println!(
        "final state    [{}]",
        s.final_state
            .iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("energy drift   {:.3e} (relative)", s.energy_drift);
    println!("Lz drift       {:.3e}", s.ang_momentum_drift);
    println!("max residual   {:.3e}", s.max_residual);

    if summary_only {
        return ExitCode::SUCCESS;
    }
    let default_out = config_path.with_extension("csv");
    let out_path = out.unwrap_or(&default_out);
    match scenario::emit_csv(&artifact, out_path) {
        Ok(()) => {
            println!("trace written  {}", out_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", out_path.display());
            ExitCode::from(EXIT_IO)
        }
    }
}

fn run_check(seed: u64) -> ExitCode {
    let report = check::run_battery(seed);
    let mut all_ok = true;
    for line in &report {
        let status = if line.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<48} {}", line.name, line.detail);
        all_ok &= line.passed;
    }
    println!(
        "{} of {} suites passed (seed {seed})",
        report.iter().filter(|l| l.passed).count(),
        report.len()
    );
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
