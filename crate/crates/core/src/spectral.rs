//! Fourier representation of real periodic fields, dealiased products and
//! spectral differentiation.
//!
//! Coefficients are true Fourier-series coefficients on the unit torus,
//! `c_k = (1/n) sum_m u(x_m) exp(-2 pi i k m / n)`, stored in FFT order. With this
//! normalization `sum_k |c_k|^2` is the mean of `u^2` over the torus.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{Axis, Dim, Grid};
use crate::scalar::Real;

/// Samples of a real field at the collocation points `x_m = m/n` (row-major in 2D,
/// row index `y`).
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField<T: Real> {
    grid: Grid<T>,
    values: Vec<T>,
}

/// Fourier coefficients of a real field, Hermitian symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T: Real> {
    grid: Grid<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> PhysicalField<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "{} samples do not match a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// One-dimensional samples on a dealiased grid sized from the data.
    pub fn from_samples(values: Vec<T>) -> Result<Self> {
        let grid = Grid::dealiased(Dim::One, values.len())?;
        Self::new(grid, values)
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        let values = vec![T::zero(); grid.len()];
        Self { grid, values }
    }

    /// Samples `f(x_m)` on a 1D grid.
    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> T) -> Self {
        assert_eq!(grid.dim(), Dim::One, "from_fn expects a 1D grid");
        let dx = grid.dx();
        let values = (0..grid.n()).map(|m| f(T::from_usize_lossy(m) * dx)).collect();
        Self { grid, values }
    }

    /// Samples `f(x, y)` on a 2D grid.
    pub fn from_fn_2d(grid: Grid<T>, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(grid.dim(), Dim::Two, "from_fn_2d expects a 2D grid");
        let n = grid.n();
        let dx = grid.dx();
        let mut values = Vec::with_capacity(n * n);
        for iy in 0..n {
            let y = T::from_usize_lossy(iy) * dx;
            for ix in 0..n {
                values.push(f(T::from_usize_lossy(ix) * dx, y));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Mean of squares, i.e. the squared L2 norm on the unit torus.
    pub fn energy(&self) -> T {
        let sum: T = self.values.iter().map(|&v| v * v).sum();
        sum / T::from_usize_lossy(self.values.len())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn to_spectral(&self) -> SpectralField<T> {
        let mut buf: Vec<Complex<T>> = self
            .values
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        self.grid.forward(&mut buf);
        let scale = T::one() / T::from_usize_lossy(buf.len());
        for c in &mut buf {
            *c = c.scale(scale);
        }
        SpectralField {
            grid: self.grid.clone(),
            coeffs: buf,
        }
    }
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: Grid<T>) -> Self {
        let coeffs = vec![Complex::new(T::zero(), T::zero()); grid.len()];
        Self { grid, coeffs }
    }

    /// Wraps raw coefficients in FFT order. Symmetry is checked on the way back to
    /// physical space, not here.
    pub fn from_coeffs(grid: Grid<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Config(format!(
                "{} coefficients do not match a grid of {} modes",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    /// 1D field from `(k, c_k)` pairs with `k >= 0`; the conjugate partner is filled in.
    pub fn from_modes(grid: Grid<T>, modes: &[(i64, Complex<T>)]) -> Self {
        let mut s = Self::zeros(grid);
        for &(k, c) in modes {
            let i = s.grid.index_of(k);
            s.coeffs[i] = c;
            let j = s.grid.index_of(-k);
            s.coeffs[j] = c.conj();
        }
        s
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    /// Coefficient of wavenumber `k` (1D).
    pub fn coeff(&self, k: i64) -> Complex<T> {
        self.coeffs[self.grid.index_of(k)]
    }

    /// Coefficient of wavevector `(kx, ky)` (2D).
    pub fn coeff2(&self, kx: i64, ky: i64) -> Complex<T> {
        let n = self.grid.n();
        self.coeffs[self.grid.index_of(ky) * n + self.grid.index_of(kx)]
    }

    pub fn set_coeff2(&mut self, kx: i64, ky: i64, c: Complex<T>) {
        let n = self.grid.n();
        let i = self.grid.index_of(ky) * n + self.grid.index_of(kx);
        self.coeffs[i] = c;
    }

    /// `sum_k |c_k|^2`, equal to the squared L2 norm of the field on the torus.
    pub fn energy(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// L2 inner product `(a, b)` of two real fields.
    pub fn inner(&self, other: &Self) -> T {
        debug_assert_eq!(self.grid, other.grid);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// Zero-mode coefficient (the mean value).
    pub fn mean(&self) -> Complex<T> {
        self.coeffs[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Inverse transform. Fails if the samples carry an imaginary part beyond round-off,
    /// which happens exactly when Hermitian symmetry is broken.
    pub fn to_physical(&self) -> Result<PhysicalField<T>> {
        let mut buf = self.coeffs.clone();
        self.grid.inverse(&mut buf);
        let scale = buf.iter().map(|c| c.re.abs()).fold(T::one(), T::max);
        let tol = T::tol(1e-12, 64.0) * scale;
        let worst = buf.iter().map(|c| c.im.abs()).fold(T::zero(), T::max);
        if worst > tol {
            return Err(Error::Integrity(format!(
                "spectrum is not Hermitian: imaginary residue {worst:e} exceeds {tol:e}"
            )));
        }
        Ok(PhysicalField {
            grid: self.grid.clone(),
            values: buf.into_iter().map(|c| c.re).collect(),
        })
    }

    /// Orthogonal projection onto modes with `|k| <= k_max` in every direction.
    pub fn fourier_project(&self, k_max: usize) -> Self {
        let mut out = self.clone();
        out.project_in_place(k_max);
        out
    }

    pub fn project_in_place(&mut self, k_max: usize) {
        let n = self.grid.n();
        if k_max >= n / 2 {
            return;
        }
        let k_max = k_max as i64;
        let zero = Complex::new(T::zero(), T::zero());
        match self.grid.dim() {
            Dim::One => {
                for (i, c) in self.coeffs.iter_mut().enumerate() {
                    if crate::grid::wavenumber(i, n).abs() > k_max {
                        *c = zero;
                    }
                }
            }
            Dim::Two => {
                for iy in 0..n {
                    let ky_out = crate::grid::wavenumber(iy, n).abs() > k_max;
                    for ix in 0..n {
                        if ky_out || crate::grid::wavenumber(ix, n).abs() > k_max {
                            self.coeffs[iy * n + ix] = zero;
                        }
                    }
                }
            }
        }
    }

    /// Energy carried by modes with `|k| > k_max` in some direction.
    pub fn energy_outside(&self, k_max: usize) -> T {
        let n = self.grid.n();
        let k_max = k_max as i64;
        let outside = |i: usize| crate::grid::wavenumber(i, n).abs() > k_max;
        match self.grid.dim() {
            Dim::One => self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(i, _)| outside(*i))
                .map(|(_, c)| c.norm_sqr())
                .sum(),
            Dim::Two => self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(i, _)| outside(i / n) || outside(i % n))
                .map(|(_, c)| c.norm_sqr())
                .sum(),
        }
    }

    /// Projection onto the grid's dealiased band `|k| <= k_cut`.
    pub fn truncate(&self) -> Self {
        self.fourier_project(self.grid.k_cut())
    }

    pub fn truncate_in_place(&mut self) {
        let k = self.grid.k_cut();
        self.project_in_place(k);
    }

    /// Multiplies each coefficient by `2 pi i k` along `axis`; the Nyquist mode is zeroed.
    pub fn derivative(&self, axis: Axis) -> Self {
        let n = self.grid.n();
        let two_pi = T::TAU();
        let mut out = self.clone();
        let nyq = self.grid.nyquist_index();
        let factor = |i: usize| -> T {
            if i == nyq {
                T::zero()
            } else {
                two_pi * T::lit(crate::grid::wavenumber(i, n) as f64)
            }
        };
        match (self.grid.dim(), axis) {
            (Dim::One, _) => {
                for (i, c) in out.coeffs.iter_mut().enumerate() {
                    let f = factor(i);
                    *c = Complex::new(-c.im * f, c.re * f);
                }
            }
            (Dim::Two, axis) => {
                for iy in 0..n {
                    for ix in 0..n {
                        let f = match axis {
                            Axis::X => factor(ix),
                            Axis::Y => factor(iy),
                        };
                        let c = &mut out.coeffs[iy * n + ix];
                        *c = Complex::new(-c.im * f, c.re * f);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&mut self, alpha: T) {
        for c in &mut self.coeffs {
            *c = c.scale(alpha);
        }
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: T, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = *a + b.scale(alpha);
        }
    }

    /// Largest `|c(k) - conj c(-k)|` over all modes.
    pub fn hermitian_defect(&self) -> T {
        let n = self.grid.n();
        let mirror = |i: usize| (n - i) % n;
        let mut worst = T::zero();
        match self.grid.dim() {
            Dim::One => {
                for i in 0..n {
                    worst = worst.max((self.coeffs[i] - self.coeffs[mirror(i)].conj()).norm());
                }
            }
            Dim::Two => {
                for iy in 0..n {
                    for ix in 0..n {
                        let a = self.coeffs[iy * n + ix];
                        let b = self.coeffs[mirror(iy) * n + mirror(ix)];
                        worst = worst.max((a - b.conj()).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Copies modes `|k| <= k_cut` of `s` into a zero-padded spectrum of size `pad`.
fn embed<T: Real>(s: &SpectralField<T>) -> Vec<Complex<T>> {
    let g = s.grid();
    let (n, m, kc) = (g.n(), g.pad(), g.k_cut() as i64);
    let zero = Complex::new(T::zero(), T::zero());
    match g.dim() {
        Dim::One => {
            let mut out = vec![zero; m];
            for k in -kc..=kc {
                out[k.rem_euclid(m as i64) as usize] = s.coeffs[k.rem_euclid(n as i64) as usize];
            }
            out
        }
        Dim::Two => {
            let mut out = vec![zero; m * m];
            for ky in -kc..=kc {
                let (sy, dy) = (k_idx(ky, n), k_idx(ky, m));
                for kx in -kc..=kc {
                    out[dy * m + k_idx(kx, m)] = s.coeffs[sy * n + k_idx(kx, n)];
                }
            }
            out
        }
    }
}

#[inline]
fn k_idx(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Extracts modes `|k| <= k_cut` from a padded, normalized spectrum.
fn extract<T: Real>(grid: &Grid<T>, padded: &[Complex<T>]) -> SpectralField<T> {
    let (n, m, kc) = (grid.n(), grid.pad(), grid.k_cut() as i64);
    let mut out = SpectralField::zeros(grid.clone());
    match grid.dim() {
        Dim::One => {
            for k in -kc..=kc {
                out.coeffs[k_idx(k, n)] = padded[k_idx(k, m)];
            }
        }
        Dim::Two => {
            for ky in -kc..=kc {
                let (sy, dy) = (k_idx(ky, m), k_idx(ky, n));
                for kx in -kc..=kc {
                    out.coeffs[dy * n + k_idx(kx, n)] = padded[sy * m + k_idx(kx, m)];
                }
            }
        }
    }
    out
}

/// Dealiased Galerkin product: the coefficients of `a * b` restricted to `|k| <= k_cut`,
/// computed on a zero-padded grid large enough that no aliased mode lands in the band.
/// Only the modes `|k| <= k_cut` of the inputs take part.
pub fn dealiased_product<T: Real>(a: &SpectralField<T>, b: &SpectralField<T>) -> Result<SpectralField<T>> {
    dealiased_sum_of_products(&[(a, b)])
}

/// `P(sum_i a_i * b_i)` with a single forward transform.
pub fn dealiased_sum_of_products<T: Real>(
    pairs: &[(&SpectralField<T>, &SpectralField<T>)],
) -> Result<SpectralField<T>> {
    let Some((first, _)) = pairs.first() else {
        return Err(Error::Argument("empty product list".into()));
    };
    let grid = first.grid().clone();
    for (a, b) in pairs {
        if a.grid() != &grid || b.grid() != &grid {
            return Err(Error::Config("dealiased product of fields on different grids".into()));
        }
    }
    let mut acc: Option<Vec<Complex<T>>> = None;
    for (a, b) in pairs {
        let mut pa = embed(a);
        let mut pb = embed(b);
        grid.pad_inverse(&mut pa);
        grid.pad_inverse(&mut pb);
        let prod = pa.iter().zip(&pb).map(|(x, y)| Complex::new(x.re * y.re, T::zero()));
        match acc.as_mut() {
            None => acc = Some(prod.collect()),
            Some(acc) => {
                for (s, p) in acc.iter_mut().zip(prod) {
                    s.re = s.re + p.re;
                }
            }
        }
    }
    let mut acc = acc.expect("non-empty");
    grid.pad_forward(&mut acc);
    let scale = T::one() / T::from_usize_lossy(acc.len());
    for c in &mut acc {
        *c = c.scale(scale);
    }
    Ok(extract(&grid, &acc))
}
