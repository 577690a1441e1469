use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pfaffkit::cli::{self, RunOptions};
use pfaffkit::variational::Truncation;

#[derive(Parser)]
#[command(name = "pfaffkit", version, about = "Pfaffian systems, variational cohomology and Lie algebra cohomology")]
struct Args {
  #[command(subcommand)]
  cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
  /// Run a .pfk session and print a summary; the JSON report goes to --json or stdout.
  Run {
    file: PathBuf,
    /// Exit with status 2 when a `compare-theorem1` against the canonical module is unequal.
    #[arg(long)]
    strict_theorem1: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Override every `truncate` statement with degree D and frequency K.
    #[arg(long, num_args = 2, value_names = ["D", "K"])]
    truncate: Option<Vec<u32>>,
  },
  /// Run the bundled fixture corpus and report one line per fixture.
  Corpus,
}

fn configure_threads() {
  let Ok(v) = std::env::var("PFAFFKIT_THREADS") else { return };
  match v.trim().parse::<usize>() {
    Ok(n) if n > 0 => {
      // Fails only if a pool already exists, which cannot happen this early.
      let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    },
    _ => eprintln!("warning: ignoring PFAFFKIT_THREADS={v:?}; expected a positive integer"),
  }
}

fn run_file(file: PathBuf, strict: bool, json: Option<PathBuf>, truncate: Option<Vec<u32>>) -> ExitCode {
  let src = match std::fs::read_to_string(&file) {
    Ok(s) => s,
    Err(e) => {
      eprintln!("{}: {e}", file.display());
      return ExitCode::from(1);
    },
  };
  let spec = match cli::parse(&src) {
    Ok(s) => s,
    Err(d) => {
      eprintln!("{}:{d}", file.display());
      return ExitCode::from(1);
    },
  };
  let truncation = truncate.map(|v| Truncation::new(v[0], v[1]));
  let report = cli::run(&spec, RunOptions { truncation });
  let text = report.to_json_string();
  match json {
    Some(out) => {
      for line in &report.summary {
        println!("{line}");
      }
      if let Err(e) = std::fs::write(&out, text) {
        eprintln!("{}: {e}", out.display());
        return ExitCode::from(1);
      }
    },
    None => {
      for line in &report.summary {
        eprintln!("{line}");
      }
      print!("{text}");
    },
  }
  ExitCode::from(report.exit_code(strict) as u8)
}

fn corpus() -> ExitCode {
  let mut failed = 0;
  for (name, src) in cli::CORPUS {
    match cli::parse(src) {
      Ok(spec) => {
        let r = cli::run(&spec, RunOptions::default());
        let status = if r.exit_code(true) == 0 { "ok" } else { "FAILED" };
        println!("{name}: {status} ({} commands, {} errors)", spec.commands().count(), r.errors);
        for line in &r.summary {
          println!("  {line}");
        }
        failed += usize::from(r.exit_code(true) != 0);
      },
      Err(d) => {
        println!("{name}: parse error {d}");
        failed += 1;
      },
    }
  }
  println!("{} fixtures, {failed} failed", cli::CORPUS.len());
  if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) }
}

fn main() -> ExitCode {
  let args = Args::parse();
  configure_threads();
  match args.cmd {
    Cmd::Run { file, strict_theorem1, json, truncate } => run_file(file, strict_theorem1, json, truncate),
    Cmd::Corpus => corpus(),
  }
}
