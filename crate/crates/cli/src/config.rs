//! Scenario files.
//!
//! A scenario is a TOML document. Top-level keys describe the run; the `[initial]`,
//! `[projector]`, `[snapshots]` and `[sweep]` tables are optional. Unknown keys are
//! rejected with the path of the offending key.
//!
//! ```toml
//! name = "fig4_1a"
//! equation = "burgers1d"        # burgers1d | euler2d
//! n = 2048
//! nu = 0.0
//! scheme = "rk4"                # rk4 | rk3; default rk4 (burgers1d), rk3 (euler2d)
//! cfl_ratio = 16.0              # dx / dt; ignored when dt is set
//! # dt = 3.0517578125e-5
//! t_end = 0.3
//! substage = "auto"             # auto | every-stage | step-end
//!
//! [initial]
//! kind = "sine"                 # sine | random | taylor-green | file
//! # seed = 42, k_min = 2, k_max = 10, energy = 0.5   (random)
//! # path = "u0.csv"                                  (file)
//!
//! [projector]
//! kind = "fourier"              # identity | fourier | wavelet | cvs
//! k_f = 2
//! t_b = 0.16
//! t_e = 0.2
//! # wavelet: family, j_f, i_f, t_b, t_e
//! # cvs: family, q, safety, sigma (centered | rms), initial_threshold
//! #      (norm-over-two-n | energy-over-two-n), max_iterations, rel_tol
//!
//! [snapshots]
//! stride = 0                    # write fields every `stride` steps; 0 disables
//! times = [0.1644, 0.3]         # and at the first step reaching each time
//!
//! [sweep]
//! n = [1024, 2048]
//! cfl_ratio = [16.0, 32.0]      # or dt = [...]
//! ```
//!
//! `error_window = [t0, t1]` sets the integration window of the error functional; it
//! defaults to `[t_s - dt, t_end]` for inviscid Burgers from the sine initial condition.

use std::path::{Path, PathBuf};

use dyngal::wavelets::{InitialThreshold, SigmaConvention, ThresholdOptions};
use dyngal::{CvsParams, Dim, ProjectorRule, Scheme, SubstagePolicy, WaveletFamily};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Burgers1d,
    Euler2d,
}

impl Equation {
    pub fn dim(self) -> Dim {
        match self {
            Self::Burgers1d => Dim::One,
            Self::Euler2d => Dim::Two,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Rk4,
    Rk3,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubstageName {
    #[default]
    Auto,
    EveryStage,
    StepEnd,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialConfig {
    Sine,
    Random {
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_k_min")]
        k_min: usize,
        #[serde(default = "default_k_max")]
        k_max: usize,
        #[serde(default = "default_energy")]
        energy: f64,
    },
    TaylorGreen,
    File { path: PathBuf },
}

fn default_k_min() -> usize {
    2
}

fn default_k_max() -> usize {
    10
}

fn default_energy() -> f64 {
    0.5
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaName {
    #[default]
    Centered,
    Rms,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialThresholdName {
    #[default]
    NormOverTwoN,
    EnergyOverTwoN,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProjectorConfig {
    #[default]
    Identity,
    Fourier { k_f: usize, t_b: f64, t_e: f64 },
    Wavelet { family: String, j_f: usize, i_f: usize, t_b: f64, t_e: f64 },
    Cvs {
        family: String,
        #[serde(default = "default_q")]
        q: f64,
        #[serde(default)]
        safety: bool,
        #[serde(default)]
        sigma: SigmaName,
        #[serde(default)]
        initial_threshold: InitialThresholdName,
        #[serde(default = "default_max_iterations")]
        max_iterations: usize,
        #[serde(default = "default_rel_tol")]
        rel_tol: f64,
    },
}

fn default_q() -> f64 {
    8.0
}

fn default_max_iterations() -> usize {
    ThresholdOptions::default().max_iterations
}

fn default_rel_tol() -> f64 {
    ThresholdOptions::default().rel_tol
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotConfig {
    #[serde(default)]
    pub stride: usize,
    #[serde(default)]
    pub times: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub cfl_ratio: Vec<f64>,
    #[serde(default)]
    pub dt: Vec<f64>,
}

impl SweepConfig {
    pub fn is_empty(&self) -> bool {
        self.n.is_empty() && self.cfl_ratio.is_empty() && self.dt.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub equation: Equation,
    pub n: usize,
    #[serde(default)]
    pub nu: f64,
    pub scheme: Option<SchemeName>,
    #[serde(default = "default_cfl")]
    pub cfl_ratio: f64,
    pub dt: Option<f64>,
    pub t_end: f64,
    #[serde(default)]
    pub substage: SubstageName,
    pub output: Option<PathBuf>,
    pub initial: Option<InitialConfig>,
    #[serde(default)]
    pub projector: ProjectorConfig,
    #[serde(default)]
    pub snapshots: SnapshotConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    pub error_window: Option<[f64; 2]>,
}

fn default_name() -> String {
    "scenario".into()
}

fn default_cfl() -> f64 {
    16.0
}

/// Parses a scenario, applying `key.path=value` overrides before deserialization.
pub fn parse(text: &str, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let mut doc: toml::Table = toml::from_str(text).map_err(|e| CliError::config(e.message().to_string(), None))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    untag(&mut doc)?;
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(toml::Value::Table(doc)).map_err(|e| {
        let mut path: Vec<String> = e.path().to_string().split('.').map(String::from).collect();
        if path.len() > 1 && TAGGED.contains(&path[0].as_str()) {
            path.remove(1);
        }
        CliError::config(e.into_inner().to_string(), Some(path.join(".")))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

const TAGGED: [&str; 2] = ["initial", "projector"];

// Rewrites `{ kind = "x", ... }` as `{ x = { ... } }`. Internally tagged enums are
// buffered by serde, which would cut error paths short at the table.
fn untag(doc: &mut toml::Table) -> Result<(), CliError> {
    for key in TAGGED {
        let Some(toml::Value::Table(table)) = doc.get_mut(key) else { continue };
        let kind = match table.remove("kind") {
            Some(toml::Value::String(kind)) => kind,
            Some(_) => return Err(CliError::config("`kind` must be a string", Some(format!("{key}.kind")))),
            None => return Err(CliError::config("missing field `kind`", Some(key.into()))),
        };
        let rest = std::mem::take(table);
        table.insert(kind, toml::Value::Table(rest));
    }
    Ok(())
}

/// Reads a scenario file. Relative `output` and initial-condition paths are resolved
/// against the file's directory.
pub fn load(path: &Path, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display()), None))?;
    let mut cfg = parse(&text, overrides)?;
    let base = path.parent().unwrap_or(Path::new("."));
    if let Some(InitialConfig::File { path }) = &mut cfg.initial {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
    Ok(cfg)
}

fn apply_override(doc: &mut toml::Table, item: &str) -> Result<(), CliError> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("override '{item}' is not key=value"), None))?;
    let key = key.trim();
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::config(format!("override key '{key}' is malformed"), Some(key.into())));
    }
    let mut table = doc;
    for part in &parts[..parts.len() - 1] {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::config(format!("'{part}' is not a table"), Some(key.into())))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |path: &str, msg: String| Err(CliError::config(msg, Some(path.into())));
        for &n in std::iter::once(&self.n).chain(&self.sweep.n) {
            if n < 8 || !n.is_power_of_two() {
                return bad("n", format!("n must be a power of two >= 8, got {n}"));
            }
        }
        if !(self.nu.is_finite() && self.nu >= 0.0) {
            return bad("nu", format!("viscosity must be non-negative, got {}", self.nu));
        }
        if self.equation == Equation::Euler2d && self.nu != 0.0 {
            return bad("nu", "the 2D Euler equations are inviscid".into());
        }
        for &r in std::iter::once(&self.cfl_ratio).chain(&self.sweep.cfl_ratio) {
            if !(r.is_finite() && r > 0.0) {
                return bad("cfl_ratio", format!("cfl_ratio must be positive, got {r}"));
            }
        }
        for &dt in self.dt.iter().chain(&self.sweep.dt) {
            if !(dt.is_finite() && dt > 0.0) {
                return bad("dt", format!("dt must be positive, got {dt}"));
            }
        }
        if !self.sweep.cfl_ratio.is_empty() && !self.sweep.dt.is_empty() {
            return bad("sweep", "sweep over either cfl_ratio or dt, not both".into());
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return bad("t_end", format!("t_end must be non-negative, got {}", self.t_end));
        }
        if self.snapshots.times.iter().any(|t| !t.is_finite()) {
            return bad("snapshots.times", "snapshot times must be finite".into());
        }
        if let Some([t0, t1]) = self.error_window {
            if !(t0 < t1) {
                return bad("error_window", format!("error window [{t0}, {t1}] is empty"));
            }
        }
        match (self.equation, self.initial()) {
            (Equation::Burgers1d, InitialConfig::Random { .. } | InitialConfig::TaylorGreen) => {
                return bad("initial.kind", "random and taylor-green initial conditions are two-dimensional".into())
            }
            (Equation::Euler2d, InitialConfig::Sine) => {
                return bad("initial.kind", "the sine initial condition is one-dimensional".into())
            }
            _ => {}
        }
        if self.equation == Equation::Euler2d
            && matches!(self.projector, ProjectorConfig::Fourier { .. } | ProjectorConfig::Wavelet { .. })
        {
            return bad("projector.kind", "punctual filters are one-dimensional".into());
        }
        self.rule()?;
        Ok(())
    }

    pub fn initial(&self) -> InitialConfig {
        self.initial.clone().unwrap_or(match self.equation {
            Equation::Burgers1d => InitialConfig::Sine,
            Equation::Euler2d => InitialConfig::Random {
                seed: 0,
                k_min: default_k_min(),
                k_max: default_k_max(),
                energy: default_energy(),
            },
        })
    }

    pub fn scheme(&self) -> Scheme {
        match self.scheme {
            Some(SchemeName::Rk4) => Scheme::Rk4,
            Some(SchemeName::Rk3) => Scheme::Rk3LowStorage,
            None => match self.equation {
                Equation::Burgers1d => Scheme::Rk4,
                Equation::Euler2d => Scheme::Rk3LowStorage,
            },
        }
    }

    pub fn substage(&self) -> SubstagePolicy {
        match self.substage {
            SubstageName::Auto => SubstagePolicy::Auto,
            SubstageName::EveryStage => SubstagePolicy::EveryStage,
            SubstageName::StepEnd => SubstagePolicy::StepEnd,
        }
    }

    /// `dt` when given, else `dx / cfl_ratio`.
    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or(1.0 / (self.n as f64 * self.cfl_ratio))
    }

    pub fn rule(&self) -> Result<ProjectorRule, CliError> {
        let family = |name: &str| {
            name.parse::<WaveletFamily>()
                .map_err(|e| CliError::config(e.to_string(), Some("projector.family".into())))
        };
        Ok(match &self.projector {
            ProjectorConfig::Identity => ProjectorRule::Identity,
            &ProjectorConfig::Fourier { k_f, t_b, t_e } => ProjectorRule::FourierPunctual { k_f, t_b, t_e },
            ProjectorConfig::Wavelet { family: f, j_f, i_f, t_b, t_e } => ProjectorRule::WaveletPunctual {
                family: family(f)?,
                j_f: *j_f,
                i_f: *i_f,
                t_b: *t_b,
                t_e: *t_e,
            },
            ProjectorConfig::Cvs {
                family: f,
                q,
                safety,
                sigma,
                initial_threshold,
                max_iterations,
                rel_tol,
            } => {
                let mut p = CvsParams::new(family(f)?, *q, *safety);
                p.threshold = ThresholdOptions {
                    sigma: match sigma {
                        SigmaName::Centered => SigmaConvention::Centered,
                        SigmaName::Rms => SigmaConvention::Rms,
                    },
                    initial: match initial_threshold {
                        InitialThresholdName::NormOverTwoN => InitialThreshold::NormOverTwoN,
                        InitialThresholdName::EnergyOverTwoN => InitialThreshold::EnergyOverTwoN,
                    },
                    max_iterations: *max_iterations,
                    rel_tol: *rel_tol,
                };
                ProjectorRule::Cvs(p)
            }
        })
    }

    /// The members of the sweep, in axis order (`n` outermost). A config without axes
    /// is its own single member.
    pub fn members(&self) -> Vec<ScenarioConfig> {
        let ns = if self.sweep.n.is_empty() { vec![self.n] } else { self.sweep.n.clone() };
        let mut out = Vec::new();
        for &n in &ns {
            let mut steps: Vec<(f64, Option<f64>)> = Vec::new();
            if !self.sweep.dt.is_empty() {
                steps.extend(self.sweep.dt.iter().map(|&dt| (self.cfl_ratio, Some(dt))));
            } else if !self.sweep.cfl_ratio.is_empty() {
                steps.extend(self.sweep.cfl_ratio.iter().map(|&r| (r, None)));
            } else {
                steps.push((self.cfl_ratio, self.dt));
            }
            for (ratio, dt) in steps {
                let mut m = self.clone();
                m.n = n;
                m.cfl_ratio = ratio;
                m.dt = dt;
                m.sweep = SweepConfig::default();
                m.name = if self.sweep.is_empty() { self.name.clone() } else { m.member_label() };
                out.push(m);
            }
        }
        out
    }

    fn member_label(&self) -> String {
        match self.dt {
            Some(dt) => format!("n{}_dt{dt:e}", self.n),
            None => format!("n{}_r{}", self.n, self.cfl_ratio),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        equation = "burgers1d"
        n = 64
        t_end = 0.1
        [projector]
        kind = "fourier"
        k_f = 2
        t_b = 0.05
        t_e = 0.08
    "#;

    #[test]
    fn defaults_fill_in() {
        let cfg = parse(BASE, &[]).unwrap();
        assert_eq!(cfg.cfl_ratio, 16.0);
        assert_eq!(cfg.scheme(), Scheme::Rk4);
        assert_eq!(cfg.initial(), InitialConfig::Sine);
        assert_eq!(cfg.time_step(), 1.0 / 1024.0);
        assert_eq!(cfg.rule().unwrap(), ProjectorRule::FourierPunctual { k_f: 2, t_b: 0.05, t_e: 0.08 });
        assert_eq!(cfg.members().len(), 1);
    }

    #[test]
    fn unknown_keys_report_their_path() {
        let err = parse(&format!("{BASE}\nbogus = 1\n"), &[]).unwrap_err();
        assert!(err.message.contains("bogus"), "{err:?}");
        let err = parse(BASE, &["projector.kq=3".into()]).unwrap_err();
        assert!(err.message.contains("kq"), "{err:?}");
        let err = parse(BASE, &["projector.k_f=\"two\"".into()]).unwrap_err();
        assert_eq!(err.path.as_deref(), Some("projector.k_f"));
    }

    #[test]
    fn tagged_tables_accept_bare_kinds() {
        let cfg = parse("equation = \"euler2d\"\nn = 32\nt_end = 0.1\n[initial]\nkind = \"taylor-green\"\n", &[]).unwrap();
        assert_eq!(cfg.initial(), InitialConfig::TaylorGreen);
        let cfg = parse("equation = \"euler2d\"\nn = 32\nt_end = 0.1\n[initial]\nkind = \"random\"\n[projector]\nkind = \"identity\"\n", &[]).unwrap();
        assert_eq!(cfg.initial(), InitialConfig::Random { seed: 0, k_min: 2, k_max: 10, energy: 0.5 });
        assert_eq!(cfg.projector, ProjectorConfig::Identity);
        let err = parse(BASE, &["projector.kind=\"spline\"".into()]).unwrap_err();
        assert_eq!(err.path.as_deref(), Some("projector"), "{err:?}");
        let err = parse("equation = \"euler2d\"\nn = 32\nt_end = 0.1\n[initial]\nseed = 1\n", &[]).unwrap_err();
        assert!(err.message.contains("kind"), "{err:?}");
    }

    #[test]
    fn overrides_replace_and_create_keys() {
        let cfg = parse(BASE, &["n=128".into(), "snapshots.stride=10".into(), "name=abc".into()]).unwrap();
        assert_eq!(cfg.n, 128);
        assert_eq!(cfg.snapshots.stride, 10);
        assert_eq!(cfg.name, "abc");
        assert!(parse(BASE, &["n".into()]).is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(parse(BASE, &["n=100".into()]).is_err());
        assert!(parse(BASE, &["cfl_ratio=0".into()]).is_err());
        assert!(parse(BASE, &["initial.kind=\"taylor-green\"".into()]).is_err());
        let err = parse(BASE, &["projector.kind=\"cvs\"".into(), "projector.family=\"haar\"".into()]);
        assert!(err.is_err());
    }

    #[test]
    fn sweep_members_in_axis_order() {
        let cfg = parse(BASE, &["sweep.n=[64, 128]".into(), "sweep.cfl_ratio=[16.0, 32.0]".into()]).unwrap();
        let members = cfg.members();
        let labels: Vec<&str> = members.iter().map(|m| m.name.as_str()).collect();
        assert_eq!(labels, ["n64_r16", "n64_r32", "n128_r16", "n128_r32"]);
        assert!(members.iter().all(|m| m.sweep.is_empty()));
        assert!(parse(BASE, &["sweep.cfl_ratio=[16.0]".into(), "sweep.dt=[0.001]".into()]).is_err());
    }

    #[test]
    fn cvs_options_map_to_threshold_settings() {
        let cfg = parse(
            BASE,
            &[
                "projector={kind=\"cvs\", family=\"shannon\", safety=true, sigma=\"rms\"}".into(),
            ],
        )
        .unwrap();
        match cfg.rule().unwrap() {
            ProjectorRule::Cvs(p) => {
                assert!(p.safety);
                assert_eq!(p.q, 8.0);
                assert_eq!(p.threshold.sigma, SigmaConvention::Rms);
            }
            other => panic!("{other:?}"),
        }
    }
}
