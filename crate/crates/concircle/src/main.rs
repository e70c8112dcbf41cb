use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use concircle::file::parse_range;
use concircle::{Command, RunOptions};

/// Verify concircular structures and almost eta-Ricci solitons on charted
/// pseudo-Riemannian manifolds.
#[derive(Parser)]
#[command(name = "concircle", version)]
struct Cli {
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand)]
enum Action {
    /// Run verification suites on a fixture. Exit status 0 iff every suite passes.
    Run(RunArgs),
    /// List the bundled fixtures.
    Fixtures,
    /// Print a bundled fixture's manifold file.
    Show { name: String },
}

#[derive(Args)]
struct RunArgs {
    #[arg(value_enum)]
    command: Command,
    /// Manifold file, or the name of a bundled fixture.
    fixture: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for the pseudorandom sample points (default: the fixture's, else 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of pseudorandom sample points on top of the grid.
    #[arg(long)]
    points: Option<usize>,
    /// Also write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Coordinate range override, `coord=lo:hi`; repeatable.
    #[arg(long, value_parser = parse_window)]
    window: Vec<(String, (f64, f64))>,
    /// Parameter override, `name=value`; repeatable.
    #[arg(long, value_parser = parse_param)]
    param: Vec<(String, f64)>,
    /// Print per-point rows.
    #[arg(long)]
    rows: bool,
}

fn parse_window(s: &str) -> Result<(String, (f64, f64)), String> {
    let (coord, range) = s.split_once('=').ok_or("expected coord=lo:hi")?;
    let range = parse_range(range).ok_or("expected lo:hi with lo <= hi")?;
    Ok((coord.trim().to_string(), range))
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected name=value")?;
    let value: f64 = value.trim().parse().map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.trim().to_string(), value))
}

fn main() -> ExitCode {
    match Cli::parse().action {
        Action::Fixtures => {
            for (name, _) in concircle::fixtures::BUNDLED {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Action::Show { name } => match concircle::fixtures::bundled(&name) {
            Some(src) => {
                print!("{src}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: no bundled fixture named `{name}`");
                ExitCode::from(2)
            }
        },
        Action::Run(args) => {
            let opts = RunOptions { tol: args.tol, seed: args.seed, points: args.points, windows: args.window, params: args.param };
            let report = match concircle::run(args.command, &args.fixture, &opts) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            print!("{}", report.to_text(args.rows));
            if let Some(path) = args.json {
                if let Err(e) = std::fs::write(&path, report.to_json_string()) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
