//! Single-run execution and artifact writing.
//!
//! A run directory holds `trajectory.csv`, `ledger.csv`, `summary.json` and, when
//! snapshots are requested, `fields/step_XXXXXXXX.csv`. Inviscid Burgers runs from the
//! sine initial condition also get `reference.csv`, the analytic energy of the entropy
//! solution.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use dyngal::equations::{burgers_rhs, energy_2d, enstrophy, euler2d_rhs, random_vorticity, sine_initial, taylor_green, BurgersParams};
use dyngal::{
    advance, analytic_energy, delta, entropy_sample, relative_l2_error, shock_time, DissipationLedger, DynamicalProjector, ErrorIntegral,
    Grid64, LedgerTag, PhysicalField64, SpectralField64, StepperConfig,
};
use serde::Serialize;

use crate::config::{Equation, InitialConfig, ScenarioConfig};
use crate::error::CliError;

pub const TRAJECTORY_HEADER: &str = "# dyngal trajectory v1";
pub const FIELD_HEADER: &str = "# dyngal field v1";
pub const SUMMARY_SCHEMA: &str = "dyngal summary v1";
pub const REFERENCE_HEADER: &str = "# dyngal reference v1";
const REFERENCE_SAMPLES: usize = 300;

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub schema: &'static str,
    pub name: String,
    pub equation: Equation,
    pub n: usize,
    pub dt: f64,
    pub cfl_ratio: f64,
    pub scheme: &'static str,
    pub projector: String,
    pub steps: usize,
    pub t_end: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub final_enstrophy: Option<f64>,
    pub ledger_total: f64,
    pub ledger_by_tag: BTreeMap<&'static str, f64>,
    /// Time-integrated relative L2 error against the entropy solution.
    pub error: Option<f64>,
    pub error_window: Option<[f64; 2]>,
    pub delta: Option<f64>,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::io(path.display(), e)
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn initial_state(cfg: &ScenarioConfig, grid: &Grid64) -> Result<SpectralField64, CliError> {
    Ok(match cfg.initial() {
        InitialConfig::Sine => sine_initial(grid)?,
        InitialConfig::Random { seed, k_min, k_max, energy } => random_vorticity(grid, seed, k_min, k_max, energy)?,
        InitialConfig::TaylorGreen => taylor_green(grid)?,
        InitialConfig::File { path } => read_field(&path, grid)?.to_spectral().truncate(),
    })
}

/// Reads a field in the format written by [`write_field`]: `x,u` rows in 1D, or an
/// `n,<n>` row followed by `n` rows of `n` values (row index `y`) in 2D.
pub fn read_field(path: &Path, grid: &Grid64) -> Result<PhysicalField64, CliError> {
    let bad = |msg: String| CliError::config(format!("{}: {msg}", path.display()), Some("initial.path".into()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        rows.push(rec.map_err(|e| bad(e.to_string()))?);
    }
    let parse = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("'{s}' is not a number")));
    let n = grid.n();
    let values = match grid.dim() {
        dyngal::Dim::One => {
            let body: Vec<_> = rows.iter().filter(|r| r.get(0) != Some("x")).collect();
            if body.len() != n {
                return Err(bad(format!("expected {n} rows, found {}", body.len())));
            }
            body.iter()
                .map(|r| parse(r.get(1).ok_or_else(|| bad("row without a u column".into()))?))
                .collect::<Result<Vec<_>, _>>()?
        }
        dyngal::Dim::Two => {
            let header = rows.first().ok_or_else(|| bad("empty file".into()))?;
            if header.get(0) != Some("n") || header.get(1).map(|s| s.parse::<usize>()) != Some(Ok(n)) {
                return Err(bad(format!("expected an 'n,{n}' header row")));
            }
            if rows.len() != n + 1 || rows[1..].iter().any(|r| r.len() != n) {
                return Err(bad(format!("expected {n} rows of {n} values")));
            }
            rows[1..]
                .iter()
                .flat_map(|r| r.iter())
                .map(parse)
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    Ok(PhysicalField64::new(grid.clone(), values)?)
}

pub fn write_field(path: &Path, t: f64, field: &PhysicalField64) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path).map_err(io_err(path))?);
    let n = field.grid().n();
    let mut body = format!("{FIELD_HEADER}\n# t={}\n", num(t));
    match field.grid().dim() {
        dyngal::Dim::One => {
            body.push_str("x,u\n");
            for (m, v) in field.values().iter().enumerate() {
                body.push_str(&format!("{},{}\n", num(m as f64 / n as f64), num(*v)));
            }
        }
        dyngal::Dim::Two => {
            body.push_str(&format!("n,{n}\n"));
            for row in field.values().chunks(n) {
                let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
                body.push_str(&cells.join(","));
                body.push('\n');
            }
        }
    }
    out.write_all(body.as_bytes()).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("summary serializes");
    fs::write(path, text + "\n").map_err(io_err(path))
}

fn has_oracle(cfg: &ScenarioConfig) -> bool {
    cfg.equation == Equation::Burgers1d && cfg.nu == 0.0 && cfg.initial() == InitialConfig::Sine
}

/// Analytic energy of the entropy solution on a uniform time grid.
fn write_reference(path: &Path, t_end: f64) -> Result<(), CliError> {
    let mut out = format!("{REFERENCE_HEADER}\nt,E_ref\n");
    for i in 0..=REFERENCE_SAMPLES {
        let t = t_end * i as f64 / REFERENCE_SAMPLES as f64;
        out.push_str(&format!("{},{}\n", num(t), num(analytic_energy(t))));
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Whether the error functional against the entropy solution applies, and its window.
fn error_window(cfg: &ScenarioConfig, dt: f64) -> Option<[f64; 2]> {
    let oracle = has_oracle(cfg);
    match cfg.error_window {
        Some(w) if oracle => Some(w),
        None if oracle && cfg.t_end > shock_time() => Some([shock_time() - dt, cfg.t_end]),
        _ => None,
    }
}

/// Executes one member and writes its artifacts into `dir`.
pub fn run(cfg: &ScenarioConfig, dir: &Path) -> Result<RunSummary, CliError> {
    let result = execute(cfg, dir);
    if let Err(e) = &result {
        // Best effort: the error also goes to stderr.
        let _ = fs::write(dir.join("error.json"), e.to_json() + "\n");
    }
    result
}

fn execute(cfg: &ScenarioConfig, dir: &Path) -> Result<RunSummary, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let grid = Grid64::dealiased(cfg.equation.dim(), cfg.n)?;
    let rule = cfg.rule()?;
    let mut projector = DynamicalProjector::new(rule.clone(), &grid)?;
    let dt = cfg.time_step();
    let stepper = StepperConfig::new(cfg.scheme(), dt, cfg.t_end)?.with_substage(cfg.substage());
    let u0 = initial_state(cfg, &grid)?;
    let initial_energy = measure(cfg.equation, &u0)?.0;
    let burgers = BurgersParams::new(cfg.nu)?;
    let window = error_window(cfg, dt);
    let mut integral = window.map(|[t0, t1]| ErrorIntegral::new(t0, t1)).transpose()?;

    let fields_dir = dir.join("fields");
    let mut pending_times: Vec<f64> = cfg.snapshots.times.clone();
    pending_times.sort_by(f64::total_cmp);
    let snapshots_on = cfg.snapshots.stride > 0 || !pending_times.is_empty();
    if snapshots_on {
        fs::create_dir_all(&fields_dir).map_err(io_err(&fields_dir))?;
    }

    let traj_path = dir.join("trajectory.csv");
    let mut traj = BufWriter::new(File::create(&traj_path).map_err(io_err(&traj_path))?);
    writeln!(traj, "{TRAJECTORY_HEADER}\nt,E,Z,ledger,epsilon,retained").map_err(io_err(&traj_path))?;

    let mut trace: Vec<(f64, f64)> = Vec::new();
    let mut failure: Option<CliError> = None;
    let rhs = |u: &SpectralField64| match cfg.equation {
        Equation::Burgers1d => burgers_rhs(u, &burgers),
        Equation::Euler2d => euler2d_rhs(u),
    };
    let mut ledger = DissipationLedger::new();
    let outcome = advance(u0, rhs, &mut projector, &stepper, &mut ledger, |s| {
        let (e, z) = measure(cfg.equation, s.state)?;
        trace.push((s.t, e));
        let line = format!(
            "{},{},{},{},{},{}\n",
            num(s.t),
            num(e),
            opt(z),
            num(s.ledger.cumulative()),
            opt(s.cvs.map(|c| c.epsilon)),
            opt(s.cvs.map(|c| c.retained_fraction()))
        );
        if let Err(err) = traj.write_all(line.as_bytes()) {
            failure = Some(CliError::io(traj_path.display(), err));
            return Err(dyngal::Error::Argument("trajectory write failed".into()));
        }
        let by_stride = cfg.snapshots.stride > 0 && s.step % cfg.snapshots.stride == 0;
        let mut by_time = false;
        while pending_times.first().is_some_and(|&t| t <= s.t + 1e-12) {
            pending_times.remove(0);
            by_time = true;
        }
        if by_stride || by_time {
            let path = fields_dir.join(format!("step_{:08}.csv", s.step));
            if let Err(err) = write_field(&path, s.t, &s.state.to_physical()?) {
                failure = Some(err);
                return Err(dyngal::Error::Argument("field write failed".into()));
            }
        }
        if let Some(acc) = integral.as_mut() {
            // The first sample is the last one at or before t0.
            if s.t + dt >= acc.window().0 {
                let reference = entropy_sample(&grid, s.t)?;
                acc.push(s.t, relative_l2_error(&s.state.to_physical()?, &reference)?)?;
            }
        }
        Ok(())
    });
    traj.flush().map_err(io_err(&traj_path))?;
    let ledger_path = dir.join("ledger.csv");
    let ledger_file = File::create(&ledger_path).map_err(io_err(&ledger_path))?;
    ledger.write_csv(BufWriter::new(ledger_file)).map_err(io_err(&ledger_path))?;
    let final_state = match outcome {
        Ok(u) => u,
        Err(e) => return Err(failure.unwrap_or_else(|| e.into())),
    };

    let (final_energy, final_enstrophy) = measure(cfg.equation, &final_state)?;
    let delta = ledger.first(LedgerTag::Jump).and_then(|jump| {
        trace
            .iter()
            .find(|(t, _)| *t == jump.t)
            .map(|&(_, e_tb)| delta(initial_energy, e_tb, jump.loss))
    });
    let error = integral.map(|acc| acc.value()).transpose()?;
    let tags = [LedgerTag::Initial, LedgerTag::Jump, LedgerTag::Rezero, LedgerTag::Dealias, LedgerTag::Cvs];
    let summary = RunSummary {
        schema: SUMMARY_SCHEMA,
        name: cfg.name.clone(),
        equation: cfg.equation,
        n: cfg.n,
        dt,
        cfl_ratio: 1.0 / (cfg.n as f64 * dt),
        scheme: cfg.scheme().name(),
        projector: rule.describe(),
        steps: stepper.num_steps(),
        t_end: cfg.t_end,
        initial_energy,
        final_energy,
        final_enstrophy,
        ledger_total: ledger.cumulative(),
        ledger_by_tag: tags.iter().map(|&t| (t.name(), ledger.total(t))).collect(),
        error,
        error_window: window,
        delta,
    };
    if has_oracle(cfg) {
        write_reference(&dir.join("reference.csv"), cfg.t_end)?;
    }
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Kinetic energy, plus enstrophy in 2D.
fn measure(equation: Equation, s: &SpectralField64) -> dyngal::Result<(f64, Option<f64>)> {
    Ok(match equation {
        Equation::Burgers1d => (s.energy(), None),
        Equation::Euler2d => (energy_2d(s)?, Some(enstrophy(s))),
    })
}
