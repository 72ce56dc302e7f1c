//! `gablab` — run time-frequency verification batches on finite abelian
//! groups.
//!
//! Exit codes: 0 all verdicts pass (skipped preconditions count as passes),
//! 1 at least one verdict fails, 2 input error (unreadable file, schema
//! violation, cap exceeded).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gablab::report::Report;
use gablab::runner::{enumerate_listing, run_spec_resolved, sweep_resolved};
use gablab::schema::{max_order_from_env, parse_spec, resolve_spec, InputError, ResolvedSpec};

#[derive(Parser)]
#[command(
    name = "gablab",
    version,
    about = "Gabor frame laboratory on finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (lattice pair, task) case of a spec and write a JSON report.
    Run {
        /// Path to the experiment spec (JSON).
        spec: PathBuf,
        /// Path for the JSON report.
        #[arg(long)]
        out: PathBuf,
    },
    /// List all subgroups of a group with annihilators and coset sections.
    Enumerate {
        /// Comma-separated moduli, e.g. 4,3 for Z_4 x Z_3.
        #[arg(long, value_delimiter = ',', required = true)]
        moduli: Vec<i64>,
    },
    /// Run the completeness θ-sweep of a spec and write a CSV.
    Sweep {
        /// Path to the experiment spec (JSON); must request the density or
        /// completeness task.
        spec: PathBuf,
        /// Path for the CSV output.
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_spec(path: &Path) -> Result<ResolvedSpec, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
    let spec = parse_spec(&text)?;
    resolve_spec(&spec, max_order_from_env()?)
}

fn write_output(path: &Path, contents: &str) -> Result<(), InputError> {
    std::fs::write(path, contents)
        .map_err(|e| InputError::new(format!("cannot write {}: {e}", path.display())))
}

/// Prints to stdout, treating a closed pipe (`gablab enumerate | head`) as a
/// successful early stop rather than a panic. Other IO errors still surface.
fn print_line(text: &str) -> Result<(), InputError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(InputError::new(format!("cannot write to stdout: {e}"))),
    }
}

fn cmd_run(spec_path: &Path, out_path: &Path) -> Result<ExitCode, InputError> {
    let rs = load_spec(spec_path)?;
    let report: Report = run_spec_resolved(&rs);
    write_output(out_path, &report.to_json_string())?;
    print_line(&format!(
        "{} cases: {} pass, {} fail, {} skipped -> {}",
        report.cases.len(),
        report.summary.pass,
        report.summary.fail,
        report.summary.skipped,
        out_path.display()
    ))?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_enumerate(moduli: &[i64]) -> Result<ExitCode, InputError> {
    let listing = enumerate_listing(moduli)?;
    let text = serde_json::to_string_pretty(&listing).expect("listing serializes");
    print_line(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(spec_path: &Path, out_path: &Path) -> Result<ExitCode, InputError> {
    let rs = load_spec(spec_path)?;
    let outcome = sweep_resolved(&rs)?;
    write_output(out_path, &outcome.csv)?;
    for line in &outcome.summary_lines {
        print_line(line)?;
    }
    print_line(&format!("sweep -> {}", out_path.display()))?;
    Ok(if outcome.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { spec, out } => cmd_run(spec, out),
        Command::Enumerate { moduli } => cmd_enumerate(moduli),
        Command::Sweep { spec, out } => cmd_sweep(spec, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
