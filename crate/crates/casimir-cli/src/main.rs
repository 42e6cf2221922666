use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser};

use casimir_cli::config::{Format, RunConfig};
use casimir_cli::{acceptance, output, tasks, CliError, EXIT_ACCEPTANCE};

/// Fluctuation-induced forces, energies and entropies from a TOML run file.
#[derive(Parser, Debug)]
#[command(name = "casimir", version)]
struct Args {
    /// Task to run (see the list below).
    task: String,
    /// TOML run configuration; without it every parameter takes its default.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; overrides [output].path. Standard output if neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides [output].format (default csv).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Random seed for stochastic tasks; overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(args: &Args) -> Result<ExitCode, CliError> {
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::empty(),
    };
    let table = tasks::run(&args.task, &cfg, args.seed)?;
    let spec = cfg.output.as_ref();
    let format = args.format.or(spec.and_then(|o| o.format)).unwrap_or(Format::Csv);
    let path = args.out.clone().or_else(|| spec.and_then(|o| o.path.as_ref()).map(|p| cfg.resolve_path(&p.to_string_lossy())));

    let mut code = ExitCode::SUCCESS;
    if args.task == "acceptance" {
        let mut ok = true;
        for row in &table.rows {
            let cell = |i: usize| match &row[i] {
                output::Cell::Text(s) => s.clone(),
                output::Cell::Num(v) => format!("{v:.3}"),
            };
            println!("{} {:<3} {:<44} {:>7}s / {:<5} {}", cell(1), cell(0), cell(4), cell(2), cell(3), cell(5));
        }
        for (k, v) in &table.summary {
            println!("# {k}: {v}");
            if k == "matches_expected" {
                ok = v == "true";
            }
        }
        if !ok {
            eprintln!("acceptance: failing set differs from the documented set {:?}", acceptance::KNOWN_UNATTAINABLE);
            code = ExitCode::from(EXIT_ACCEPTANCE as u8);
        }
        if path.is_none() {
            return Ok(code);
        }
    }

    let text = output::render(&table, format)?;
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let help = tasks::help_text();
    let matches = Args::command().after_long_help(help.clone()).after_help(help).get_matches();
    let args = match Args::from_arg_matches(&matches) {
        Ok(a) => a,
        Err(e) => e.exit(),
    };
    match execute(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("casimir: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
