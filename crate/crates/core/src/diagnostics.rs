//! Measured quantities: energy records, the filtered-vs-dissipated discrepancy and the
//! time-integrated relative L2 error against a reference solution.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::PhysicalField;

/// One row of a trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `||u||^2`.
    pub energy: f64,
    /// `(1/2) ||omega||^2`, 2D only.
    pub enstrophy: Option<f64>,
    pub ledger: f64,
    pub epsilon: Option<f64>,
    pub retained_fraction: Option<f64>,
}

/// `(E0 - E_tb) - jump_loss`: zero when the energy lost up to `t_b` is exactly the energy
/// of the discarded component.
pub fn delta(e0: f64, e_tb: f64, jump_loss: f64) -> f64 {
    (e0 - e_tb) - jump_loss
}

/// `||u - r||^2 / ||r||^2` with norms on the collocation grid.
pub fn relative_l2_error<T: Real>(u: &PhysicalField<T>, reference: &PhysicalField<T>) -> Result<f64> {
    if u.grid() != reference.grid() {
        return Err(Error::Argument("error norm of fields on different grids".into()));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in u.values().iter().zip(reference.values()) {
        let (a, b) = (a.to_f64_lossy(), b.to_f64_lossy());
        num += (a - b) * (a - b);
        den += b * b;
    }
    if den == 0.0 {
        return Err(Error::Argument("relative error against a zero reference".into()));
    }
    Ok(num / den)
}

/// Streaming trapezoidal integral of `(t, value)` samples over `[t0, t1]`.
///
/// Samples must arrive in increasing time. The first interval straddling `t0` and the
/// last straddling `t1` are clipped by linear interpolation.
#[derive(Clone, Debug)]
pub struct ErrorIntegral {
    t0: f64,
    t1: f64,
    last: Option<(f64, f64)>,
    integral: f64,
    started: bool,
    finished: bool,
}

impl ErrorIntegral {
    pub fn new(t0: f64, t1: f64) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::Argument(format!("integration window [{t0}, {t1}] is empty")));
        }
        Ok(Self {
            t0,
            t1,
            last: None,
            integral: 0.0,
            started: false,
            finished: false,
        })
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        if let Some((tp, vp)) = self.last {
            if t <= tp {
                return Err(Error::Argument(format!("samples out of order: {t} after {tp}")));
            }
            let a = tp.max(self.t0);
            let b = t.min(self.t1);
            if b > a {
                let at = |s: f64| vp + (value - vp) * (s - tp) / (t - tp);
                self.integral += 0.5 * (b - a) * (at(a) + at(b));
            }
            if tp <= self.t0 + 1e-12 && t >= self.t0 {
                self.started = true;
            }
        } else if t <= self.t0 + 1e-12 {
            self.started = true;
        }
        if t >= self.t1 - 1e-12 {
            self.finished = true;
        }
        self.last = Some((t, value));
        Ok(())
    }

    /// The integral, or an argument error when the samples do not cover `[t0, t1]`.
    pub fn value(&self) -> Result<f64> {
        if !(self.started && self.finished) {
            return Err(Error::Argument(format!(
                "samples do not cover the integration window [{}, {}]",
                self.t0, self.t1
            )));
        }
        Ok(self.integral)
    }
}

/// Trapezoidal `int_{t0}^{t1} value dt` over stored `(t, value)` samples.
pub fn error_functional(samples: &[(f64, f64)], t0: f64, t1: f64) -> Result<f64> {
    let mut acc = ErrorIntegral::new(t0, t1)?;
    for &(t, v) in samples {
        acc.push(t, v)?;
    }
    acc.value()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Argument("slope needs at least two (x, y) pairs".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::Argument("log-log slope of non-positive data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
