use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::problem::ProblemSpec;
use super::report::SynthesisReport;
use super::synth::run_pipeline;
use super::verify::verify_report;
use super::PipelineError;

#[derive(Parser, Debug)]
#[command(
    name = "fitting-synth",
    version,
    about = "Tame modules and certificates for class-2 nilpotent groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full synthesis and write the JSON report.
    Synth {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        text_report: Option<PathBuf>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Replay every certificate in a report.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
    /// Print the subdirect decomposition only.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path)
        .map_err(|e| PipelineError::InvalidInput(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text)
        .map_err(|e| PipelineError::InvalidInput(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<(), PipelineError> {
    match cmd {
        Command::Synth {
            input,
            output,
            text_report,
            degree,
            nmax,
        } => {
            let mut spec = ProblemSpec::from_json(&read(&input)?)?;
            if let Some(d) = degree {
                spec.options.degree = d;
            }
            if let Some(n) = nmax {
                spec.options.n_max = n;
            }
            let report = run_pipeline(&spec)?;
            write(&output, &report.to_json())?;
            if let Some(p) = text_report {
                write(&p, &report.to_text())?;
            }
            println!(
                "wrote {} ({} factors, {} cones, line-free)",
                output.display(),
                report.factors.len(),
                report.final_bound.cones.len()
            );
            Ok(())
        }
        Command::Verify { report } => {
            let text = read(&report)?;
            let report: SynthesisReport = serde_json::from_str(&text)
                .map_err(|e| PipelineError::InvalidInput(format!("report: {e}")))?;
            for c in verify_report(&report)? {
                println!("ok  {c}");
            }
            println!("all certificates replayed");
            Ok(())
        }
        Command::Decompose { input } => {
            let spec = ProblemSpec::from_json(&read(&input)?)?;
            let d = spec.decomposition()?;
            println!(
                "{}",
                serde_json::to_string_pretty(&d).expect("decomposition serializes")
            );
            Ok(())
        }
    }
}

/// Exit code 0 on success, 1 on certificate failure, 2 on input error.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
