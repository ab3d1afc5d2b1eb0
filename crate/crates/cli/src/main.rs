mod experiment;
mod table;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cyclewalk::verify::{self, Faults, PropertyOutcome};
use cyclewalk::InitialStateSpec;

use experiment::{ExperimentConfig, Output};
use table::Table;

const EXIT_IO: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

/// Hadamard-coined quantum walk on even cycles.
#[derive(Debug, Parser)]
#[command(name = "cyclewalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one initial state and write a CSV.
    Simulate {
        /// Number of nodes (even, >= 4).
        #[arg(long)]
        d: usize,
        /// single:<v0> | pair:<m>,<k>[,upper] | quad:<m>,<k>
        #[arg(long, value_parser = parse_initial)]
        initial: InitialStateSpec,
        /// Last time step (inclusive).
        #[arg(long, default_value_t = 1000)]
        t_max: usize,
        #[arg(long, value_enum, default_value_t = Output::TvdSeries)]
        what: Output,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce one of the three distance-from-uniform time series (d = 24).
    Figure {
        /// 1: single node, 2: degenerate pair, 3: quad.
        n: u8,
        /// Override the preset horizon.
        #[arg(long)]
        t_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and print one line per property.
    Verify {
        #[arg(long, value_enum, hide = true)]
        fault: Option<Fault>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fault {
    FlipEigenvalueSign,
}

fn parse_initial(s: &str) -> Result<InitialStateSpec, String> {
    s.parse().map_err(|e: cyclewalk::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate {
            d,
            initial,
            t_max,
            what,
            out,
        } => {
            let config = ExperimentConfig {
                d,
                initial,
                t_max,
                what,
            };
            emit(experiment::run(&config), out)
        }
        Command::Figure { n, t_max, out } => emit(experiment::figure(n, t_max), out),
        Command::Verify { fault } => {
            let faults = Faults {
                flip_eigenvalue_sign: fault == Some(Fault::FlipEigenvalueSign),
            };
            run_verify(&faults)
        }
    }
}

fn emit(table: cyclewalk::Result<Table>, out: Option<PathBuf>) -> ExitCode {
    let table = match table {
        Ok(t) => t,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let text = table.render();
    let written = match &out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let target = out.map_or("stdout".into(), |p| p.display().to_string());
            eprintln!("error: cannot write {target}: {err}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn run_verify(faults: &Faults) -> ExitCode {
    let mut outcomes = verify::run(faults);
    outcomes.extend(output_checks());
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} [{}] {}: {}", o.module, o.name, o.detail);
    }
    println!("{} properties, {failed} failed", outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn output_checks() -> Vec<PropertyOutcome> {
    let deterministic = (|| {
        for n in 1..=3 {
            let a = experiment::figure(n, Some(300))
                .map_err(|e| e.to_string())?
                .render();
            let b = experiment::figure(n, Some(300))
                .map_err(|e| e.to_string())?
                .render();
            if a != b {
                return Err(format!("figure {n} differs between runs"));
            }
        }
        Ok("figures 1-3 render byte-identically".to_string())
    })();
    let formatted = (|| {
        let text = experiment::figure(3, Some(50))
            .map_err(|e| e.to_string())?
            .render();
        let mut lines = text.lines();
        if lines.next() != Some("t,delta,analytic") {
            return Err("missing header".to_string());
        }
        for line in lines {
            for field in line.split(',') {
                let digits = field
                    .chars()
                    .filter(|c| c.is_ascii_digit())
                    .collect::<String>();
                let significant = digits.trim_start_matches('0').len();
                if significant > 12 || field.contains('e') || field.parse::<f64>().is_err() {
                    return Err(format!("bad numeric field {field:?}"));
                }
            }
        }
        Ok("header present, <= 12 significant digits, plain decimals".to_string())
    })();
    [
        ("csv output is deterministic", deterministic),
        ("csv numeric format", formatted),
    ]
    .into_iter()
    .map(|(name, result)| {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        PropertyOutcome {
            module: "cli",
            name,
            passed,
            detail,
        }
    })
    .collect()
}
