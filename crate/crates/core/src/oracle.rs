//! Entropy solution of inviscid Burgers with `u0(x) = sin(2 pi x)` on the unit torus.
//!
//! Characteristics `x = x0 + t sin(2 pi x0)` are solved separately on each half of the
//! domain; the shock sits at `x = 1/2` for all time and the solution is odd about it.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::grid::{Dim, Grid};
use crate::scalar::Real;
use crate::spectral::PhysicalField;

const NEWTON_TOL: f64 = 1e-14;
const MAX_ITER: usize = 60;

/// `t_s = inf_x [-1 / u0'(x)] = 1 / (2 pi)`.
pub fn shock_time() -> f64 {
    1.0 / TAU
}

/// Right end of the monotone branch of `x0 -> x0 + t sin(2 pi x0)` on `[0, 1/2]`.
fn monotone_end(t: f64) -> f64 {
    if TAU * t <= 1.0 {
        0.5
    } else {
        ((-1.0 / (TAU * t)).acos() / TAU).min(0.5)
    }
}

/// Root of `x0 + t sin(2 pi x0) = x` on `[0, monotone_end(t)]` by Newton's method
/// safeguarded with bisection.
fn foot(x: f64, t: f64) -> f64 {
    let f = |y: f64| y + t * (TAU * y).sin() - x;
    let (mut lo, mut hi) = (0.0, monotone_end(t));
    if f(hi) <= 0.0 {
        return hi;
    }
    let mut y = x.clamp(lo, hi);
    for _ in 0..MAX_ITER {
        let r = f(y);
        if r.abs() <= NEWTON_TOL {
            break;
        }
        if r < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let d = 1.0 + TAU * t * (TAU * y).cos();
        let newton = y - r / d;
        y = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    y
}

/// Entropy solution `u(x, t)` for `x` in `[0, 1)` (other values are wrapped), `t >= 0`.
pub fn entropy_eval(x: f64, t: f64) -> f64 {
    let x = x.rem_euclid(1.0);
    if t <= 0.0 {
        return (TAU * x).sin();
    }
    if x == 0.0 || x == 0.5 {
        return 0.0;
    }
    if x > 0.5 {
        return -entropy_eval(1.0 - x, t);
    }
    (TAU * foot(x, t)).sin()
}

/// [`entropy_eval`] at the collocation points of a 1D grid.
pub fn entropy_sample<T: Real>(grid: &Grid<T>, t: f64) -> Result<PhysicalField<T>> {
    if grid.dim() != Dim::One {
        return Err(Error::Config("the entropy solution is one-dimensional".into()));
    }
    let n = grid.n();
    let values = (0..n).map(|m| T::lit(entropy_eval(m as f64 / n as f64, t))).collect();
    PhysicalField::new(grid.clone(), values)
}

/// `||u(., t)||^2` by adaptive Simpson quadrature of `u^2` on the left half, doubled.
pub fn analytic_energy(t: f64) -> f64 {
    let f = |x: f64| {
        let u = entropy_eval(x, t);
        u * u
    };
    2.0 * adaptive_simpson(&f, 0.0, 0.5, 1e-10)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Foot of the characteristic that reaches the shock from the left at time `t`.
pub fn shock_foot(t: f64) -> f64 {
    if TAU * t <= 1.0 {
        0.5
    } else {
        foot(0.5, t)
    }
}

/// Energy by the change of variables `x = x0 + t sin(2 pi x0)`, which makes the integral
/// elementary: `2 [y/2 - sin(4 pi y)/(8 pi) + t sin^3(2 pi y)/3]` at `y = shock_foot(t)`.
pub fn characteristic_energy(t: f64) -> f64 {
    let y = shock_foot(t.max(0.0));
    let s = (TAU * y).sin();
    2.0 * (0.5 * y - (2.0 * TAU * y).sin() / (8.0 * PI) + t.max(0.0) * s * s * s / 3.0)
}
