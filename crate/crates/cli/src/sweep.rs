//! Cartesian sweeps over `n` and the time step. Members run in a worker pool, each in
//! its own directory; `sweep.csv` has one row per member in axis order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::run::{run, RunSummary};

pub const SWEEP_HEADER: &str = "# dyngal sweep v1";

pub struct SweepRow {
    pub member: ScenarioConfig,
    pub outcome: Result<RunSummary, CliError>,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.outcome.is_err()
    }
}

pub fn sweep(cfg: &ScenarioConfig, dir: &Path, workers: usize) -> Result<Vec<SweepRow>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::config(format!("cannot start {workers} workers: {e}"), None))?;
    let members = cfg.members();
    let rows: Vec<SweepRow> = pool.install(|| {
        members
            .into_par_iter()
            .map(|member| {
                let outcome = run(&member, &dir.join(&member.name));
                SweepRow { member, outcome }
            })
            .collect()
    });
    write_table(&dir.join("sweep.csv"), &rows)?;
    Ok(rows)
}

fn write_table(path: &Path, rows: &[SweepRow]) -> Result<(), CliError> {
    let num = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
    let mut out = format!("{SWEEP_HEADER}\nname,n,dt,cfl_ratio,error,delta,final_energy,ledger_total,status,message\n");
    for row in rows {
        let m = &row.member;
        let dt = m.time_step();
        let (s, status, message) = match &row.outcome {
            Ok(s) => (Some(s), "ok", String::new()),
            Err(e) => (None, "failed", e.to_string().replace([',', '\n'], ";")),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{status},{message}",
            m.name,
            m.n,
            num(Some(dt)),
            num(Some(1.0 / (m.n as f64 * dt))),
            num(s.and_then(|s| s.error)),
            num(s.and_then(|s| s.delta)),
            num(s.map(|s| s.final_energy)),
            num(s.map(|s| s.ledger_total)),
        )
        .expect("writing to a string");
    }
    fs::write(path, out).map_err(|e| CliError::io(path.display(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;

    #[test]
    fn failed_members_do_not_stop_the_sweep() {
        let dir = tempfile::tempdir().unwrap();
        // dx/dt = 0.1 puts the Courant number near 10, far beyond the stability limit.
        let cfg = parse(
            r#"
            equation = "burgers1d"
            n = 32
            t_end = 0.3
            [sweep]
            cfl_ratio = [0.1, 16.0]
            "#,
            &[],
        )
        .unwrap();
        let rows = sweep(&cfg, dir.path(), 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].failed());
        assert!(!rows[1].failed());
        let table = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert!(lines[2].starts_with("n32_r0.1,32,") && lines[2].contains(",failed,"));
        assert!(lines[3].ends_with(",ok,"));
        assert!(dir.path().join("n32_r0.1/error.json").exists());
    }
}
