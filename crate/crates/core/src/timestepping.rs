//! Explicit Runge–Kutta integration with a dynamical projector.
//!
//! At every step boundary `t_n` the projector in force on `[t_n, t_n + dt)` is resolved
//! from the current state and applied with ledger recording. Punctual filters then
//! re-zero every substage state, the final combination included, with the same
//! projection and without recording: for a fixed orthogonal projection this is the same
//! as integrating `u' = P f(u)`, which conserves energy, so the ledger only sees changes
//! of the projector between consecutive steps. CVS filtering acts once per step.

use crate::error::{Error, Result};
use crate::projectors::{CvsStats, DissipationLedger, DynamicalProjector, Losses, Projection, ProjectorRule};
use crate::scalar::Real;
use crate::spectral::SpectralField;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scheme {
    /// Classical fourth-order Runge–Kutta.
    #[default]
    Rk4,
    /// Williamson's three-stage, two-register scheme.
    Rk3LowStorage,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Rk4 => "rk4",
            Scheme::Rk3LowStorage => "rk3-low-storage",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Scheme::Rk4 => 4,
            Scheme::Rk3LowStorage => 3,
        }
    }
}

/// Where the projector acts inside a step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SubstagePolicy {
    /// `EveryStage` for punctual filters, `StepEnd` for CVS.
    #[default]
    Auto,
    /// Re-zero every substage state.
    EveryStage,
    /// Project only at step boundaries.
    StepEnd,
}

impl SubstagePolicy {
    pub fn resolve(self, rule: &ProjectorRule) -> SubstagePolicy {
        match (self, rule) {
            (SubstagePolicy::Auto, ProjectorRule::Cvs(_)) => SubstagePolicy::StepEnd,
            (SubstagePolicy::Auto, _) => SubstagePolicy::EveryStage,
            (p, _) => p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    pub substage: SubstagePolicy,
}

impl StepperConfig {
    pub fn new(scheme: Scheme, dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            scheme,
            dt,
            t_end,
            substage: SubstagePolicy::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `dt = dx / cfl_ratio`.
    pub fn from_cfl(scheme: Scheme, dx: f64, cfl_ratio: f64, t_end: f64) -> Result<Self> {
        if !(cfl_ratio.is_finite() && cfl_ratio > 0.0) {
            return Err(Error::Config(format!("cfl_ratio must be positive, got {cfl_ratio}")));
        }
        Self::new(scheme, dx / cfl_ratio, t_end)
    }

    pub fn with_substage(mut self, substage: SubstagePolicy) -> Self {
        self.substage = substage;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Config(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        Ok(())
    }

    /// Number of steps; the last one is shortened to land on `t_end`.
    pub fn num_steps(&self) -> usize {
        let ratio = self.t_end / self.dt;
        let r = ratio.round();
        if (ratio - r).abs() <= 1e-9 * r.max(1.0) {
            r as usize
        } else {
            ratio.ceil() as usize
        }
    }

    /// `t_n`, clamped to `t_end`.
    pub fn time(&self, step: usize) -> f64 {
        if step >= self.num_steps() {
            self.t_end
        } else {
            step as f64 * self.dt
        }
    }
}

/// What the observer sees after the boundary projection at `t`.
#[derive(Debug)]
pub struct Snapshot<'a, T: Real> {
    pub t: f64,
    pub step: usize,
    pub state: &'a SpectralField<T>,
    pub ledger: &'a DissipationLedger,
    pub losses: Losses,
    pub cvs: Option<CvsStats>,
}

/// Integrates `du/dt = rhs(u)` from `t = 0` to `cfg.t_end`.
///
/// The observer is called at `t = 0` after the initial projection and after every
/// step; returning an error aborts the run.
pub fn advance<T, F, O>(
    u0: SpectralField<T>,
    rhs: F,
    projector: &mut DynamicalProjector<T>,
    cfg: &StepperConfig,
    ledger: &mut DissipationLedger,
    mut observer: O,
) -> Result<SpectralField<T>>
where
    T: Real,
    F: Fn(&SpectralField<T>) -> Result<SpectralField<T>>,
    O: FnMut(&Snapshot<'_, T>) -> Result<()>,
{
    cfg.validate()?;
    let policy = cfg.substage.resolve(projector.rule());
    let steps = cfg.num_steps();
    let mut u = u0;
    for step in 0..=steps {
        let t = cfg.time(step);
        let applied = projector.apply_detailed(t, u, ledger, true)?;
        u = applied.field;
        observer(&Snapshot {
            t,
            step,
            state: &u,
            ledger,
            losses: applied.losses,
            cvs: applied.cvs,
        })?;
        if step == steps {
            break;
        }
        let h = cfg.time(step + 1) - t;
        let p = match policy {
            SubstagePolicy::StepEnd => Projection::Identity,
            _ => applied.projection,
        };
        let rezero = |s: SpectralField<T>| -> Result<SpectralField<T>> {
            match p {
                Projection::Identity => Ok(s),
                _ => Ok(projector.project(&p, s)?.0),
            }
        };
        u = match cfg.scheme {
            Scheme::Rk4 => rk4_step_with(&u, &rhs, h, rezero)?,
            Scheme::Rk3LowStorage => rk3_low_storage_step_with(&u, &rhs, h, rezero)?,
        };
        u = rezero(u)?;
        if !u.is_finite() {
            return Err(Error::BlowUp { t: cfg.time(step + 1) });
        }
    }
    Ok(u)
}

fn axpy<T: Real>(u: &SpectralField<T>, h: T, k: &SpectralField<T>) -> SpectralField<T> {
    let mut out = u.clone();
    out.add_scaled(h, k);
    out
}

/// One classical RK4 step, `stage` applied to each intermediate state.
pub fn rk4_step_with<T, F, S>(u: &SpectralField<T>, rhs: &F, dt: f64, stage: S) -> Result<SpectralField<T>>
where
    T: Real,
    F: Fn(&SpectralField<T>) -> Result<SpectralField<T>>,
    S: Fn(SpectralField<T>) -> Result<SpectralField<T>>,
{
    let h = T::lit(dt);
    let half = T::lit(0.5 * dt);
    let k1 = rhs(u)?;
    let k2 = rhs(&stage(axpy(u, half, &k1))?)?;
    let k3 = rhs(&stage(axpy(u, half, &k2))?)?;
    let k4 = rhs(&stage(axpy(u, h, &k3))?)?;
    let mut out = u.clone();
    let sixth = T::lit(dt / 6.0);
    let third = T::lit(dt / 3.0);
    out.add_scaled(sixth, &k1);
    out.add_scaled(third, &k2);
    out.add_scaled(third, &k3);
    out.add_scaled(sixth, &k4);
    Ok(out)
}

pub fn rk4_step<T, F>(u: &SpectralField<T>, rhs: &F, dt: f64) -> Result<SpectralField<T>>
where
    T: Real,
    F: Fn(&SpectralField<T>) -> Result<SpectralField<T>>,
{
    rk4_step_with(u, rhs, dt, Ok)
}

const RK3_A: [f64; 3] = [0.0, -5.0 / 9.0, -153.0 / 128.0];
const RK3_B: [f64; 3] = [1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0];

/// One step of the 2N-storage scheme `q <- A_i q + dt f(u); u <- u + B_i q`, with
/// `stage` applied to the two intermediate states.
pub fn rk3_low_storage_step_with<T, F, S>(u: &SpectralField<T>, rhs: &F, dt: f64, stage: S) -> Result<SpectralField<T>>
where
    T: Real,
    F: Fn(&SpectralField<T>) -> Result<SpectralField<T>>,
    S: Fn(SpectralField<T>) -> Result<SpectralField<T>>,
{
    let h = T::lit(dt);
    let mut u = u.clone();
    let mut q = SpectralField::zeros(u.grid().clone());
    for i in 0..3 {
        let f = rhs(&u)?;
        q.scale(T::lit(RK3_A[i]));
        q.add_scaled(h, &f);
        u.add_scaled(T::lit(RK3_B[i]), &q);
        if i < 2 {
            u = stage(u)?;
        }
    }
    Ok(u)
}

pub fn rk3_low_storage_step<T, F>(u: &SpectralField<T>, rhs: &F, dt: f64) -> Result<SpectralField<T>>
where
    T: Real,
    F: Fn(&SpectralField<T>) -> Result<SpectralField<T>>,
{
    rk3_low_storage_step_with(u, rhs, dt, Ok)
}
