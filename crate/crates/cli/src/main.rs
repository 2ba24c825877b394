use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use egh_core::harness::{run_search, Check, DefectSpec, IdealFile, SearchConfig};
use egh_core::verify::{egh_d_check, egh_full_check, paper_checkpoints, IdealInstance};
use egh_core::{lpp_defect, DegreeVector, Error, RingContext};
use serde_json::json;

#[derive(Parser)]
#[command(name = "egh", version, about = "Hilbert functions and lex-plus-powers checks over GF(p)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the Hilbert function of R/I.
    Hilbert {
        #[arg(long)]
        ideal: PathBuf,
        /// Defaults to the socle degree plus one.
        #[arg(long)]
        max_degree: Option<u32>,
        /// One `d Hf(d)` line per degree instead of a JSON array.
        #[arg(long)]
        table: bool,
    },
    /// Compare I with lex-plus-powers ideals.
    Check {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, conflicts_with = "full")]
        degree: Option<u32>,
        #[arg(long)]
        full: bool,
    },
    /// Build (x^a) plus the greatest `defect` standard monomials of a degree.
    Lpp {
        #[arg(long)]
        n: usize,
        /// Comma separated; defaults to all 2.
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<u32>>,
        #[arg(long)]
        defect: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Run seeded random trials and log them as JSON lines.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 101)]
        p: u64,
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<u32>>,
        /// `N`, `LO-HI`, or `mixed`.
        #[arg(long)]
        defect: DefectSpec,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        checks: Vec<Check>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the fixed battery of five-variable checkpoints.
    PaperCheckpoints {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum Outcome {
    Holds,
    Violation,
}

enum Failure {
    Usage(String),
    Input(String),
    Generation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Generation { .. } => Failure::Generation(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Generation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn load(path: &Path) -> Result<IdealInstance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file = IdealFile::from_json(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(file.to_instance()?)
}

fn degrees(n: usize, a: Option<Vec<u32>>) -> Result<DegreeVector, Failure> {
    match a {
        Some(a) => Ok(DegreeVector::new(a)?),
        None if n == 0 => Err(Failure::Input("n must be positive".into())),
        None => Ok(DegreeVector::quadrics(n)),
    }
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn out(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print(v: &serde_json::Value) {
    out(&serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn verdict(holds: bool) -> Outcome {
    if holds {
        Outcome::Holds
    } else {
        Outcome::Violation
    }
}

fn run(cmd: Cmd) -> Result<Outcome, Failure> {
    match cmd {
        Cmd::Hilbert { ideal, max_degree, table } => {
            let inst = load(&ideal)?;
            let top = max_degree.unwrap_or(inst.socle_degree() + 1);
            let hf = inst.hilbert_function_to(top);
            if table {
                for (d, v) in hf.values().iter().enumerate() {
                    out(&format!("{d} {v}"));
                }
            } else {
                out(&json!(hf.values()).to_string());
            }
            Ok(Outcome::Holds)
        }
        Cmd::Check { ideal, degree, full } => {
            let inst = load(&ideal)?;
            if full {
                let rep = egh_full_check(&inst)?;
                print(&json!(rep));
                return Ok(verdict(rep.holds()));
            }
            let ds: Vec<u32> = match degree {
                Some(d) => vec![d],
                None => (0..=inst.socle_degree()).collect(),
            };
            let reps = ds
                .into_iter()
                .map(|d| egh_d_check(&inst, d))
                .collect::<Result<Vec<_>, _>>()?;
            let holds = reps.iter().all(|r| r.holds);
            if reps.len() == 1 {
                print(&json!(reps[0]));
            } else {
                print(&json!(reps));
            }
            Ok(verdict(holds))
        }
        Cmd::Lpp { n, a, defect, degree } => {
            let a = degrees(n, a)?;
            let ctx = Arc::new(RingContext::new(n, 101)?);
            let l = lpp_defect(&ctx, a.clone(), degree, defect)?;
            let top = a.socle_degree() + 1;
            let gens: Vec<String> = l.generator_forms().iter().map(ToString::to_string).collect();
            print(&json!({
                "ideal": l.to_string(),
                "generators": gens,
                "piece_dims": (0..=top).map(|d| l.piece_dim(d)).collect::<Vec<_>>(),
                "hilbert_function": l.hilbert_function(top),
            }));
            Ok(Outcome::Holds)
        }
        Cmd::Search {
            n,
            p,
            a,
            defect,
            trials,
            seed,
            checks,
            out: log,
            jobs,
        } => {
            let cfg = SearchConfig {
                n,
                p,
                a: degrees(n, a)?,
                defect,
                trials,
                seed,
                checks,
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let file = File::create(&log).map_err(|e| Failure::Input(format!("{}: {e}", log.display())))?;
            let mut w = BufWriter::new(file);
            let summary = run_search(&cfg, jobs, Some(&mut w))?;
            w.flush().map_err(|e| Failure::Input(format!("{}: {e}", log.display())))?;
            print(&json!(summary));
            if let Some(rec) = &summary.first_failure {
                eprintln!("check failed on trial {}:", rec.index);
                eprintln!("{}", serde_json::to_string_pretty(&rec.instance).expect("json"));
                eprintln!("outcomes: {}", json!(rec.outcomes));
            }
            Ok(verdict(summary.failures == 0))
        }
        Cmd::PaperCheckpoints { seed } => {
            let summary = paper_checkpoints(seed)?;
            for r in &summary.results {
                let mark = if r.passed { "pass" } else { "FAIL" };
                eprintln!("[{mark}] {} ({} trials): {}", r.name, r.trials, r.detail);
            }
            print(&json!(summary));
            Ok(verdict(summary.all_passed()))
        }
    }
}
