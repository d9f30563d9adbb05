//! Dealiased Galerkin right-hand sides: 1D Burgers and 2D Euler in vorticity form,
//! plus the initial conditions used by the experiments.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Axis, Dim, Grid};
use crate::scalar::Real;
use crate::spectral::{dealiased_product, PhysicalField, SpectralField};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BurgersParams {
    /// Kinematic viscosity; zero for the inviscid equation.
    pub nu: f64,
}

impl BurgersParams {
    pub fn inviscid() -> Self {
        Self { nu: 0.0 }
    }

    pub fn new(nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::Config(format!("viscosity must be finite and non-negative, got {nu}")));
        }
        Ok(Self { nu })
    }
}

fn require(dim: Dim, s: &SpectralField<impl Real>, what: &str) -> Result<()> {
    if s.grid().dim() != dim {
        return Err(Error::Config(format!("{what} needs a {dim:?}-dimensional grid")));
    }
    Ok(())
}

/// `-(1/2) d/dx P(u^2) + nu d^2u/dx^2`, conservative form. Only the band `|k| <= k_cut`
/// of `u` takes part.
pub fn burgers_rhs<T: Real>(u: &SpectralField<T>, params: &BurgersParams) -> Result<SpectralField<T>> {
    require(Dim::One, u, "Burgers")?;
    let sq = dealiased_product(u, u)?;
    let mut rhs = sq.derivative(Axis::X);
    rhs.scale(T::lit(-0.5));
    if params.nu > 0.0 {
        let lap = u.truncate().derivative(Axis::X).derivative(Axis::X);
        rhs.add_scaled(T::lit(params.nu), &lap);
    }
    Ok(rhs)
}

/// Velocity `(u, v) = (-d/dy, d/dx) psi` with `lap psi = omega` (Biot-Savart).
///
/// The mean of `omega` must vanish; anything above round-off is an integrity error.
pub fn velocity<T: Real>(omega: &SpectralField<T>) -> Result<(SpectralField<T>, SpectralField<T>)> {
    require(Dim::Two, omega, "Biot-Savart")?;
    let m = omega.mean().norm();
    let tol = T::tol(1e-12, 64.0) * omega.max_abs().max(T::one());
    if m > tol {
        return Err(Error::Integrity(format!(
            "cannot invert the Laplacian: vorticity has mean {m:e}"
        )));
    }
    let grid = omega.grid().clone();
    let n = grid.n();
    let mut psi = omega.clone();
    let four_pi2 = T::lit(4.0 * std::f64::consts::PI * std::f64::consts::PI);
    for (i, c) in psi.coeffs_mut().iter_mut().enumerate() {
        let kx = crate::grid::wavenumber(i % n, n);
        let ky = crate::grid::wavenumber(i / n, n);
        let k2 = (kx * kx + ky * ky) as f64;
        *c = if k2 == 0.0 {
            Complex::new(T::zero(), T::zero())
        } else {
            c.scale(-T::one() / (four_pi2 * T::lit(k2)))
        };
    }
    let mut u = psi.derivative(Axis::Y);
    u.scale(-T::one());
    let v = psi.derivative(Axis::X);
    Ok((u, v))
}

/// `-P(u . grad omega)`, evaluated as `-d/dx P(u omega) - d/dy P(v omega)`; the two agree
/// because the velocity is exactly divergence-free, and the conservative form keeps the
/// mean of the tendency at zero.
pub fn euler2d_rhs<T: Real>(omega: &SpectralField<T>) -> Result<SpectralField<T>> {
    let (u, v) = velocity(omega)?;
    let uw = dealiased_product(&u, omega)?;
    let vw = dealiased_product(&v, omega)?;
    let mut rhs = uw.derivative(Axis::X);
    rhs.add_scaled(T::one(), &vw.derivative(Axis::Y));
    rhs.scale(-T::one());
    Ok(rhs)
}

/// Kinetic energy `||u||^2` of the flow induced by `omega`.
pub fn energy_2d<T: Real>(omega: &SpectralField<T>) -> Result<T> {
    let (u, v) = velocity(omega)?;
    Ok(u.energy() + v.energy())
}

/// Enstrophy `(1/2) ||omega||^2`.
pub fn enstrophy<T: Real>(omega: &SpectralField<T>) -> T {
    T::lit(0.5) * omega.energy()
}

/// `u0(x) = sin(2 pi x)`.
pub fn sine_initial<T: Real>(grid: &Grid<T>) -> Result<SpectralField<T>> {
    if grid.dim() != Dim::One {
        return Err(Error::Config("the sine initial condition is one-dimensional".into()));
    }
    Ok(PhysicalField::from_fn(grid.clone(), |x| (T::TAU() * x).sin())
        .to_spectral()
        .truncate())
}

/// Taylor-Green vorticity `cos(2 pi x) cos(2 pi y)`, a steady state of 2D Euler.
pub fn taylor_green<T: Real>(grid: &Grid<T>) -> Result<SpectralField<T>> {
    if grid.dim() != Dim::Two {
        return Err(Error::Config("the Taylor-Green initial condition is two-dimensional".into()));
    }
    let quarter = Complex::new(T::lit(0.25), T::zero());
    let mut s = SpectralField::zeros(grid.clone());
    for (kx, ky) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        s.set_coeff2(kx, ky, quarter);
    }
    Ok(s)
}

/// Random vorticity with energy in the shells `k_min <= |k| <= k_max` (rounded), equal
/// enstrophy per shell and uniformly random phases, scaled to kinetic energy
/// `||u||^2 = energy`. Deterministic in `seed`.
pub fn random_vorticity<T: Real>(
    grid: &Grid<T>,
    seed: u64,
    k_min: usize,
    k_max: usize,
    energy: f64,
) -> Result<SpectralField<T>> {
    if grid.dim() != Dim::Two {
        return Err(Error::Config("the random vorticity initial condition is two-dimensional".into()));
    }
    if k_min == 0 || k_min > k_max || k_max > grid.k_cut() {
        return Err(Error::Config(format!(
            "random spectrum band [{k_min}, {k_max}] must satisfy 1 <= k_min <= k_max <= k_cut = {}",
            grid.k_cut()
        )));
    }
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::Config(format!("initial energy must be positive, got {energy}")));
    }
    let shell = |kx: i64, ky: i64| (((kx * kx + ky * ky) as f64).sqrt().round()) as usize;
    let mut counts = vec![0usize; k_max + 1];
    let km = k_max as i64;
    for ky in -km..=km {
        for kx in -km..=km {
            let s = shell(kx, ky);
            if (k_min..=k_max).contains(&s) {
                counts[s] += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = SpectralField::zeros(grid.clone());
    // One coefficient per conjugate pair: upper half-plane, plus kx > 0 on ky = 0.
    for ky in 0..=km {
        for kx in -km..=km {
            if ky == 0 && kx <= 0 {
                continue;
            }
            let s = shell(kx, ky);
            if !(k_min..=k_max).contains(&s) {
                continue;
            }
            let amp = (1.0 / counts[s] as f64).sqrt();
            let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let c = Complex::new(T::lit(amp * phase.cos()), T::lit(amp * phase.sin()));
            field.set_coeff2(kx, ky, c);
            field.set_coeff2(-kx, -ky, c.conj());
        }
    }
    let e = energy_2d(&field)?.to_f64_lossy();
    field.scale(T::lit((energy / e).sqrt()));
    Ok(field)
}
