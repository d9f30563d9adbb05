//! Periodic collocation grids on the unit torus and their FFT plans.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spatial dimension of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn rank(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }
}

/// Direction of differentiation. In 2D, storage is row-major with `y` as the row index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

struct Plans<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    pad_forward: Arc<dyn Fft<T>>,
    pad_inverse: Arc<dyn Fft<T>>,
}

/// A uniform periodic grid of `n` points per direction on `[0,1)^d`, together with the
/// spectral cutoff `k_cut` kept by dealiased products.
///
/// Cloning is cheap: FFT plans are shared.
#[derive(Clone)]
pub struct Grid<T: Real> {
    dim: Dim,
    n: usize,
    k_cut: usize,
    pad: usize,
    plans: Arc<Plans<T>>,
}

impl<T: Real> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n && self.k_cut == other.k_cut
    }
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("k_cut", &self.k_cut)
            .field("pad", &self.pad)
            .finish()
    }
}

/// Smallest power of two that holds all products of modes `|k| <= k_cut` without aliasing.
pub fn padded_size(k_cut: usize) -> usize {
    (3 * k_cut + 1).next_power_of_two().max(4)
}

impl<T: Real> Grid<T> {
    /// Grid with an explicit cutoff. `n` must be a power of two, at least 8, and
    /// `k_cut < n/2`.
    pub fn new(dim: Dim, n: usize, k_cut: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::Config(format!(
                "grid size {n} must be a power of two and at least 8"
            )));
        }
        if k_cut >= n / 2 {
            return Err(Error::Config(format!(
                "cutoff k_cut = {k_cut} must be below n/2 = {}",
                n / 2
            )));
        }
        let pad = padded_size(k_cut);
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            pad_forward: planner.plan_fft_forward(pad),
            pad_inverse: planner.plan_fft_inverse(pad),
        };
        Ok(Self {
            dim,
            n,
            k_cut,
            pad,
            plans: Arc::new(plans),
        })
    }

    /// Grid whose cutoff is the largest `k_cut` with `3 k_cut < n`, so that quadratic
    /// products are alias-free on the grid itself.
    pub fn dealiased(dim: Dim, n: usize) -> Result<Self> {
        Self::new(dim, n, n / 3)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_cut(&self) -> usize {
        self.k_cut
    }

    /// Size of the zero-padded grid used for products.
    pub fn pad(&self) -> usize {
        self.pad
    }

    pub fn dx(&self) -> T {
        T::one() / T::from_usize_lossy(self.n)
    }

    /// Number of stored samples / coefficients (`n` or `n^2`).
    pub fn len(&self) -> usize {
        match self.dim {
            Dim::One => self.n,
            Dim::Two => self.n * self.n,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed wavenumber stored at FFT index `idx` of an `n`-periodic axis.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> i64 {
        wavenumber(idx, self.n)
    }

    /// FFT index of wavenumber `k`.
    #[inline]
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Index of the unpaired mode `k = -n/2`.
    #[inline]
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Unnormalized forward transform in place (`n` or `n x n`).
    pub(crate) fn forward(&self, data: &mut [Complex<T>]) {
        match self.dim {
            Dim::One => self.plans.forward.process(data),
            Dim::Two => fft2(self.plans.forward.as_ref(), data, self.n),
        }
    }

    /// Unnormalized inverse transform in place.
    pub(crate) fn inverse(&self, data: &mut [Complex<T>]) {
        match self.dim {
            Dim::One => self.plans.inverse.process(data),
            Dim::Two => fft2(self.plans.inverse.as_ref(), data, self.n),
        }
    }

    pub(crate) fn pad_forward(&self, data: &mut [Complex<T>]) {
        match self.dim {
            Dim::One => self.plans.pad_forward.process(data),
            Dim::Two => fft2(self.plans.pad_forward.as_ref(), data, self.pad),
        }
    }

    pub(crate) fn pad_inverse(&self, data: &mut [Complex<T>]) {
        match self.dim {
            Dim::One => self.plans.pad_inverse.process(data),
            Dim::Two => fft2(self.plans.pad_inverse.as_ref(), data, self.pad),
        }
    }
}

#[inline]
pub fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Row-column 2D FFT of a row-major `n x n` array.
pub(crate) fn fft2<T: Real>(plan: &dyn Fft<T>, data: &mut [Complex<T>], n: usize) {
    plan.process(data);
    transpose_square(data, n);
    plan.process(data);
    transpose_square(data, n);
}

pub(crate) fn transpose_square<V: Copy>(data: &mut [V], n: usize) {
    for r in 0..n {
        for c in (r + 1)..n {
            data.swap(r * n + c, c * n + r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(Grid::<f64>::new(Dim::One, 12, 2), Err(Error::Config(_))));
        assert!(matches!(Grid::<f64>::new(Dim::One, 4, 1), Err(Error::Config(_))));
        assert!(matches!(Grid::<f64>::new(Dim::One, 16, 8), Err(Error::Config(_))));
    }

    #[test]
    fn dealiased_cutoff_is_alias_free() {
        for j in 3..14 {
            let n = 1usize << j;
            let g = Grid::<f64>::dealiased(Dim::One, n).unwrap();
            assert!(3 * g.k_cut() < n);
            assert_eq!(g.pad(), n);
        }
    }

    #[test]
    fn wavenumber_layout() {
        let g = Grid::<f64>::dealiased(Dim::One, 8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.index_of(-1), 7);
        assert_eq!(g.nyquist_index(), 4);
    }
}
