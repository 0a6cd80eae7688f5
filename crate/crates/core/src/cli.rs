//! Experiment drivers behind the `martinet` binary, and their CSV formats.
//!
//! Trajectory CSV: `t,x,y,z,px,py,pz,H`. Sweep CSV:
//! `theta0,eps,t1,k,K,R,one_minus_R,status`. Numbers are written with 17
//! significant digits; unresolved sweep values are left empty.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;

use rayon::prelude::*;

use crate::analysis::{sweep_theta, SweepRecord};
use crate::error::{Error, Result};
use crate::integrators::{integrate, Method, StepConfig, Trajectory};
use crate::martinet::{PhaseState, ProblemParams};
use crate::variational::{find_first_conjugate, ConjugateEvent};
use crate::{DEFAULT_PZ, DEFAULT_THETA0, DEFAULT_T_END, PERTURBED_BETA};

pub const TRAJECTORY_HEADER: [&str; 8] = ["t", "x", "y", "z", "px", "py", "pz", "H"];
pub const SWEEP_HEADER: [&str; 8] = ["theta0", "eps", "t1", "k", "K", "R", "one_minus_R", "status"];

/// Step sizes of the conjugate-time table.
pub const TABLE1_STEPS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
/// Metric perturbations of the conjugate-time table: flat, then perturbed.
pub const TABLE1_BETAS: [f64; 2] = [0.0, PERTURBED_BETA];

/// Reference first conjugate times of the default geodesic,
/// indexed `[beta][step][method]` with methods ordered `rk2, verlet`.
pub const TABLE1_REFERENCE: [[[f64; 2]; 4]; 2] = [
    [
        [4.504945, 8.504716],
        [6.748262, 8.416622],
        [8.360340, 8.416412],
        [8.416349, 8.416410],
    ],
    [
        [4.511294, 4.883832],
        [7.380322, 4.877056],
        [4.877183, 4.876998],
        [4.876997, 4.876997],
    ],
];
/// Limits of the table columns: flat, then perturbed.
pub const TABLE1_EXACT: [f64; 2] = [8.416409, 4.876997];

/// Parameters of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub method: Method,
    pub beta: f64,
    pub h: f64,
    pub t_end: f64,
    /// Initial momentum angle in radians.
    pub theta0: f64,
    pub pz: f64,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub fp_tol: f64,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            method: Method::Verlet,
            beta: 0.0,
            h: 1e-2,
            t_end: DEFAULT_T_END,
            theta0: DEFAULT_THETA0,
            pz: DEFAULT_PZ,
            output_path: None,
            fp_tol: StepConfig::DEFAULT_FP_TOL,
        }
    }
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidConfig(format!("h must be positive, got {}", self.h)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidConfig(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        if !(self.theta0 > 0.0 && self.theta0 < std::f64::consts::PI) {
            return Err(Error::InvalidConfig(format!("theta0 must lie in (0, pi), got {}", self.theta0)));
        }
        if !(self.pz > 0.0 && self.pz.is_finite()) {
            return Err(Error::InvalidConfig(format!("pz must be positive, got {}", self.pz)));
        }
        ProblemParams::new(self.beta)?;
        self.step_config().validate()
    }

    pub fn params(&self) -> ProblemParams {
        ProblemParams { beta: self.beta }
    }

    pub fn step_config(&self) -> StepConfig {
        StepConfig::new(self.h).with_fp_tol(self.fp_tol)
    }

    pub fn initial_state(&self) -> PhaseState {
        PhaseState::initial(self.theta0, self.pz)
    }

    fn output(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output_path {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

/// Full-precision decimal representation (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRAJECTORY_HEADER)?;
    for ((t, s), e) in traj.times.iter().zip(&traj.states).zip(&traj.energies) {
        w.write_record([*t, s.x, s.y, s.z, s.px, s.py, s.pz, *e].map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}

/// One parsed row of a trajectory file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub state: PhaseState,
    pub energy: f64,
}

pub fn read_trajectory_csv<R: Read>(reader: R) -> Result<Vec<TrajectoryRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != TRAJECTORY_HEADER {
        return Err(Error::InvalidConfig(format!("unexpected trajectory header {header:?}")));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let v = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| Error::InvalidConfig(format!("bad number `{f}`: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            if v.len() != 8 {
                return Err(Error::InvalidConfig(format!("expected 8 fields, got {}", v.len())));
            }
            Ok(TrajectoryRow {
                t: v[0],
                state: PhaseState::new(v[1], v[2], v[3], v[4], v[5], v[6]),
                energy: v[7],
            })
        })
        .collect()
}

/// Integrates the run and writes its trajectory as CSV.
pub fn cmd_integrate(spec: &RunSpec) -> Result<Trajectory> {
    spec.validate()?;
    let traj = integrate(&spec.initial_state(), &spec.params(), &spec.step_config(), spec.t_end, spec.method)?;
    write_trajectory_csv(&traj, spec.output()?)?;
    Ok(traj)
}

pub fn cmd_conjugate(spec: &RunSpec) -> Result<Option<ConjugateEvent>> {
    spec.validate()?;
    find_first_conjugate(&spec.initial_state(), &spec.params(), &spec.step_config(), spec.t_end, spec.method)
}

/// `t1` with nine decimals, or `none`.
pub fn format_conjugate(event: Option<&ConjugateEvent>) -> String {
    match event {
        Some(e) => format!("{:.9}", e.t1),
        None => "none".to_owned(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub beta: f64,
    pub h: f64,
    pub method: Method,
    /// Conjugate time, `None` if there was none before the horizon, or the failure message.
    pub t1: std::result::Result<Option<f64>, String>,
}

impl Table1Cell {
    pub fn value(&self) -> Option<f64> {
        self.t1.as_ref().ok().copied().flatten()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    /// Cells ordered by beta, then step size, then method (`rk2, verlet`).
    pub cells: Vec<Table1Cell>,
}

impl Table1 {
    pub fn cell(&self, beta_idx: usize, h_idx: usize, method: Method) -> &Table1Cell {
        let m = Method::ALL.iter().position(|&x| x == method).unwrap_or(0);
        &self.cells[(beta_idx * TABLE1_STEPS.len() + h_idx) * 2 + m]
    }

    pub fn all_ok(&self) -> bool {
        self.cells.iter().all(|c| matches!(c.t1, Ok(Some(_))))
    }

    pub fn render(&self) -> String {
        let fmt_cell = |c: &Table1Cell| match &c.t1 {
            Ok(Some(t)) => format!("{t:>12.6}"),
            Ok(None) => format!("{:>12}", "none"),
            Err(_) => format!("{:>12}", "ERROR"),
        };
        let mut out = String::new();
        out.push_str("First conjugate time\n");
        out.push_str(&format!(
            "{:>8} {:>12} {:>12}   {:>8} {:>12} {:>12}\n",
            "h", "RK2", "Verlet", "h", "RK2", "Verlet"
        ));
        out.push_str(&format!("{:>8} {:^25}   {:>8} {:^25}\n", "", "beta = 0", "", "beta = -1e-4"));
        for (i, h) in TABLE1_STEPS.iter().enumerate() {
            let row: Vec<String> = (0..TABLE1_BETAS.len())
                .map(|b| {
                    format!(
                        "{:>8.0e} {} {}",
                        h,
                        fmt_cell(self.cell(b, i, Method::Rk2)),
                        fmt_cell(self.cell(b, i, Method::Verlet))
                    )
                })
                .collect();
            out.push_str(&row.join("   "));
            out.push('\n');
        }
        out.push_str(&format!(
            "reference limits: t1 = {:.6} (beta = 0), t1 = {:.6} (beta = -1e-4)\n",
            TABLE1_EXACT[0], TABLE1_EXACT[1]
        ));
        for c in &self.cells {
            if let Err(msg) = &c.t1 {
                out.push_str(&format!("ERROR {} beta={} h={}: {msg}\n", c.method, c.beta, c.h));
            }
        }
        out
    }
}

/// Runs both methods for both metrics and all table step sizes, in parallel.
pub fn run_table1(fp_tol: f64) -> Table1 {
    let jobs: Vec<(f64, f64, Method)> = TABLE1_BETAS
        .iter()
        .flat_map(|&b| TABLE1_STEPS.iter().flat_map(move |&h| Method::ALL.map(|m| (b, h, m))))
        .collect();
    let state0 = PhaseState::initial(DEFAULT_THETA0, DEFAULT_PZ);
    let cells = jobs
        .into_par_iter()
        .map(|(beta, h, method)| {
            let cfg = StepConfig::new(h).with_fp_tol(fp_tol);
            let t1 = find_first_conjugate(&state0, &ProblemParams { beta }, &cfg, DEFAULT_T_END, method)
                .map(|e| e.map(|e| e.t1))
                .map_err(|e| e.to_string());
            Table1Cell { beta, h, method, t1 }
        })
        .collect();
    Table1 { cells }
}

pub fn cmd_table1(fp_tol: f64) -> Table1 {
    run_table1(fp_tol)
}

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], writer: W) -> Result<()> {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record([
            fmt_f64(r.theta0),
            fmt_f64(r.eps),
            opt(r.t1),
            fmt_f64(r.k),
            fmt_f64(r.big_k),
            opt(r.r),
            opt(r.one_minus_r),
            if r.is_resolved() { "ok" } else { "unresolved" }.to_owned(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// θ₀ = π − ε sweep (flat case, Störmer–Verlet), written as CSV.
pub fn cmd_sweep(pz: f64, cfg: &StepConfig, eps_grid: &[f64], out: Option<&std::path::Path>) -> Result<Vec<SweepRecord>> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidConfig("empty eps grid".into()));
    }
    let thetas: Vec<f64> = eps_grid.iter().map(|e| std::f64::consts::PI - e).collect();
    let records = sweep_theta(&thetas, pz, cfg, None)?;
    match out {
        Some(path) => write_sweep_csv(&records, BufWriter::new(File::create(path)?))?,
        None => write_sweep_csv(&records, io::stdout().lock())?,
    }
    Ok(records)
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|f| f.parse::<f64>().map_err(|e| Error::InvalidConfig(format!("bad number `{f}`: {e}"))))
        .collect()
}
