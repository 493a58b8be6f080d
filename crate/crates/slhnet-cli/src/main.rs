//! Command line front end: load a network description, then analyze it,
//! sweep its frequency response, or print the factorization of one sample.
//!
//! Exit codes: 0 when the requested result was computed (verdicts may still
//! be negative), 2 for usage, file, parse, or instantiation problems, 3 when
//! a numerical routine fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slhnet::netdesc::{instantiate, parse, ModelDocument};
use slhnet::realization::to_state_space;
use slhnet::report::{analyze_model, decomposition_json, frequency_sweep, sweep_csv};
use slhnet::uncertainty::UncertainModel;

#[derive(Parser)]
#[command(name = "slhnet", version, about = "Robust stability analysis of linear quantum networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis and print a JSON report.
    Analyze {
        /// Network description file.
        file: PathBuf,
        /// Margin tolerance; overrides the analysis block.
        #[arg(long)]
        tol: Option<f64>,
        /// Declared uncertainty bound; overrides the analysis block.
        #[arg(long)]
        eta: Option<f64>,
        /// Also write the report to this path.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        /// Print a human summary to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Tabulate the nominal distance to instability over frequency.
    Sweep {
        /// Network description file.
        file: PathBuf,
        /// Largest frequency, swept from 0.
        #[arg(long)]
        wmax: f64,
        /// Number of sweep points; defaults to the analysis block.
        #[arg(long)]
        points: Option<usize>,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the nominal/uncertainty factorization of one grid sample.
    Decompose {
        /// Network description file.
        file: PathBuf,
        /// Zero-based sample index.
        #[arg(long)]
        sample: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { file, tol, eta, json, verbose } => analyze(&file, tol, eta, json.as_deref(), verbose),
        Command::Sweep { file, wmax, points, out } => sweep(&file, wmax, points, &out),
        Command::Decompose { file, sample } => decompose(&file, sample),
    };
    ExitCode::from(code)
}

fn load(path: &Path) -> Result<(UncertainModel, ModelDocument, String), u8> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot open {}: {e}", path.display());
            return Err(2);
        }
    };
    let doc = match parse(&text) {
        Ok(d) => d,
        Err(diags) => {
            for d in &diags {
                eprintln!("{}:{d}", path.display());
            }
            return Err(2);
        }
    };
    let model = match instantiate(&doc) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return Err(2);
        }
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".to_string());
    Ok((model, doc, name))
}

fn code_for(e: &slhnet::Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn analyze(
    file: &Path,
    tol: Option<f64>,
    eta: Option<f64>,
    json_out: Option<&Path>,
    verbose: bool,
) -> u8 {
    let (mut model, doc, name) = match load(file) {
        Ok(v) => v,
        Err(c) => return c,
    };
    if let Some(e) = eta {
        if let Err(err) = model.set_declared_eta(Some(e)) {
            eprintln!("{err}");
            return 2;
        }
    }
    let tol = tol.unwrap_or(doc.analysis.tol);
    let report = match analyze_model(&model, &name, tol) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("analysis failed: {e}");
            return code_for(&e);
        }
    };
    let json = report.to_json();
    print!("{json}");
    if let Some(out) = json_out {
        if let Err(e) = fs::write(out, &json) {
            eprintln!("cannot write {}: {e}", out.display());
            return 2;
        }
    }
    if verbose {
        eprint!("{}", report.summary());
    }
    0
}

fn sweep(file: &Path, wmax: f64, points: Option<usize>, out: &Path) -> u8 {
    let (model, doc, _) = match load(file) {
        Ok(v) => v,
        Err(c) => return c,
    };
    let points = points.unwrap_or(doc.analysis.sweep_points);
    let a_n = match to_state_space(model.nominal()) {
        Ok(r) => r.a().clone(),
        Err(e) => {
            eprintln!("realization failed: {e}");
            return code_for(&e);
        }
    };
    let rows = match frequency_sweep(&a_n, wmax, points) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sweep failed: {e}");
            return code_for(&e);
        }
    };
    if let Err(e) = fs::write(out, sweep_csv(&rows)) {
        eprintln!("cannot write {}: {e}", out.display());
        return 2;
    }
    0
}

fn decompose(file: &Path, sample: usize) -> u8 {
    let (model, _, _) = match load(file) {
        Ok(v) => v,
        Err(c) => return c,
    };
    let samples = model.samples();
    if sample >= samples.len() {
        eprintln!(
            "sample index {sample} out of range: the model has {} samples",
            samples.len()
        );
        return 2;
    }
    match decomposition_json(model.nominal(), &samples[sample]) {
        Ok(json) => {
            print!("{json}");
            0
        }
        Err(e) => {
            eprintln!("decomposition failed: {e}");
            code_for(&e)
        }
    }
}
