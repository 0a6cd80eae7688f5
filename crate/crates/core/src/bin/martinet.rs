use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use martinet_geodesics::analysis::default_eps_grid;
use martinet_geodesics::cli::{self, RunSpec};
use martinet_geodesics::integrators::{Method, StepConfig};
use martinet_geodesics::{Error, DEFAULT_PZ, DEFAULT_THETA0, DEFAULT_T_END};

#[derive(Parser)]
#[command(name = "martinet", version, about = "Martinet geodesics: symplectic vs. non-symplectic integration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one geodesic and write t,x,y,z,px,py,pz,H as CSV
    Integrate(RunArgs),
    /// Print the first conjugate time of one geodesic
    Conjugate(RunArgs),
    /// Conjugate times for both methods, both metrics and h = 1e-1 .. 1e-4
    Table1 {
        #[arg(long, default_value_t = StepConfig::DEFAULT_FP_TOL)]
        fp_tol: f64,
    },
    /// Asymptotic ratio R over theta0 = pi - eps (flat case, Störmer–Verlet)
    Sweep {
        #[arg(long, default_value_t = DEFAULT_PZ)]
        pz: f64,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        /// Comma-separated eps values; defaults to 13 log-spaced points in [1e-4, 1e-1]
        #[arg(long)]
        eps_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = StepConfig::DEFAULT_FP_TOL)]
        fp_tol: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "verlet", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 1e-2)]
    h: f64,
    #[arg(long, default_value_t = DEFAULT_T_END)]
    t_end: f64,
    /// Initial momentum angle in radians
    #[arg(long, default_value_t = DEFAULT_THETA0)]
    theta0: f64,
    #[arg(long, default_value_t = DEFAULT_PZ)]
    pz: f64,
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = StepConfig::DEFAULT_FP_TOL)]
    fp_tol: f64,
}

impl From<RunArgs> for RunSpec {
    fn from(a: RunArgs) -> Self {
        RunSpec {
            method: a.method,
            beta: a.beta,
            h: a.h,
            t_end: a.t_end,
            theta0: a.theta0,
            pz: a.pz,
            output_path: a.out,
            fp_tol: a.fp_tol,
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Integrate(args) => {
            cli::cmd_integrate(&args.into())?;
        }
        Command::Conjugate(args) => {
            let event = cli::cmd_conjugate(&args.into())?;
            println!("{}", cli::format_conjugate(event.as_ref()));
        }
        Command::Table1 { fp_tol } => {
            let table = cli::cmd_table1(fp_tol);
            print!("{}", table.render());
            return Ok(table.all_ok());
        }
        Command::Sweep { pz, h, eps_grid, out, fp_tol } => {
            let grid = match eps_grid {
                Some(s) => cli::parse_list(&s)?,
                None => default_eps_grid(),
            };
            let cfg = StepConfig::new(h).with_fp_tol(fp_tol);
            cfg.validate()?;
            let records = cli::cmd_sweep(pz, &cfg, &grid, out.as_deref())?;
            return Ok(records.iter().all(|r| r.is_resolved()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
