use crate::error::{Error, Result};
use crate::grid::{Dim, Grid};
use crate::scalar::Real;

use super::family::WaveletFamily;

/// Orthonormal periodic wavelet coefficients: the mean plus one array per level.
///
/// In 1D level `j` holds `2^j` coefficients indexed by position `i`. In 2D level `j`
/// holds three `2^j x 2^j` orientation bands stored back to back (band-major, then
/// row-major with `y` as the row): band 0 is high-pass in `x`, band 1 high-pass in `y`,
/// band 2 high-pass in both.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletCoeffs<T: Real> {
    pub(crate) grid: Grid<T>,
    pub(crate) family: WaveletFamily,
    pub(crate) mean: T,
    pub(crate) levels: Vec<Vec<T>>,
}

/// Number of coefficients stored at level `j`.
pub fn level_len(dim: Dim, j: usize) -> usize {
    match dim {
        Dim::One => 1 << j,
        Dim::Two => 3 << (2 * j),
    }
}

impl<T: Real> WaveletCoeffs<T> {
    pub fn zeros(grid: Grid<T>, family: WaveletFamily) -> Self {
        let levels = (0..grid.n().trailing_zeros() as usize)
            .map(|j| vec![T::zero(); level_len(grid.dim(), j)])
            .collect();
        Self {
            grid,
            family,
            mean: T::zero(),
            levels,
        }
    }

    /// Builds coefficients from raw arrays, checking the layout.
    pub fn from_parts(grid: Grid<T>, family: WaveletFamily, mean: T, levels: Vec<Vec<T>>) -> Result<Self> {
        let expect = grid.n().trailing_zeros() as usize;
        if levels.len() != expect {
            return Err(Error::Integrity(format!(
                "expected {expect} levels, found {}",
                levels.len()
            )));
        }
        for (j, lvl) in levels.iter().enumerate() {
            if lvl.len() != level_len(grid.dim(), j) {
                return Err(Error::Integrity(format!(
                    "level {j} holds {} coefficients, expected {}",
                    lvl.len(),
                    level_len(grid.dim(), j)
                )));
            }
        }
        Ok(Self {
            grid,
            family,
            mean,
            levels,
        })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn family(&self) -> WaveletFamily {
        self.family
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn set_mean(&mut self, v: T) {
        self.mean = v;
    }

    /// Number of detail levels `J = log2(n)`.
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<T>] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> &[T] {
        &self.levels[j]
    }

    pub fn level_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.levels[j]
    }

    /// Total count including the mean (`n` or `n^2`).
    pub fn len(&self) -> usize {
        1 + self.levels.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `mean^2 + sum of squared details`; equals the field's squared L2 norm.
    pub fn energy(&self) -> T {
        self.mean * self.mean + self.detail_energy()
    }

    pub fn detail_energy(&self) -> T {
        self.details().map(|c| c * c).sum()
    }

    /// All detail coefficients, coarse to fine.
    pub fn details(&self) -> impl Iterator<Item = T> + '_ {
        self.levels.iter().flat_map(|l| l.iter().copied())
    }

    /// Euclidean inner product of two coefficient sets.
    pub fn inner(&self, other: &Self) -> T {
        self.mean * other.mean + self.details().zip(other.details()).map(|(a, b)| a * b).sum::<T>()
    }

    pub(crate) fn same_layout(&self, other_dim: Dim, other_n: usize) -> bool {
        self.grid.dim() == other_dim && self.grid.n() == other_n
    }
}

/// Retained-coefficient index set over a wavelet layout. The mean is always retained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffMask {
    dim: Dim,
    n: usize,
    levels: Vec<Vec<bool>>,
}

impl CoeffMask {
    fn filled(dim: Dim, n: usize, value: bool) -> Self {
        let levels = (0..n.trailing_zeros() as usize)
            .map(|j| vec![value; level_len(dim, j)])
            .collect();
        Self { dim, n, levels }
    }

    /// Mask retaining only the mean.
    pub fn empty(dim: Dim, n: usize) -> Self {
        Self::filled(dim, n, false)
    }

    pub fn full(dim: Dim, n: usize) -> Self {
        Self::filled(dim, n, true)
    }

    pub fn empty_like<T: Real>(w: &WaveletCoeffs<T>) -> Self {
        Self::empty(w.grid.dim(), w.grid.n())
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> &[bool] {
        &self.levels[j]
    }

    pub fn level_mut(&mut self, j: usize) -> &mut [bool] {
        &mut self.levels[j]
    }

    pub fn get(&self, j: usize, i: usize) -> bool {
        self.levels[j][i]
    }

    pub fn set(&mut self, j: usize, i: usize, keep: bool) {
        self.levels[j][i] = keep;
    }

    /// Retained detail coefficients (the mean is not counted).
    pub fn count_details(&self) -> usize {
        self.levels.iter().flatten().filter(|&&b| b).count()
    }

    /// Retained coefficients including the mean.
    pub fn count(&self) -> usize {
        1 + self.count_details()
    }

    /// Size of the full layout, mean included.
    pub fn capacity(&self) -> usize {
        1 + self.levels.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_superset_of(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.n == other.n
            && self
                .levels
                .iter()
                .flatten()
                .zip(other.levels.iter().flatten())
                .all(|(&a, &b)| a || !b)
    }
}

/// Zeroes every detail coefficient outside `mask`.
pub fn apply_mask<T: Real>(w: &WaveletCoeffs<T>, mask: &CoeffMask) -> Result<WaveletCoeffs<T>> {
    if !w.same_layout(mask.dim, mask.n) {
        return Err(Error::Integrity(format!(
            "mask for {:?} n={} applied to coefficients for {:?} n={}",
            mask.dim,
            mask.n,
            w.grid.dim(),
            w.grid.n()
        )));
    }
    let mut out = w.clone();
    for (lvl, keep) in out.levels.iter_mut().zip(&mask.levels) {
        for (c, &k) in lvl.iter_mut().zip(keep) {
            if !k {
                *c = T::zero();
            }
        }
    }
    Ok(out)
}
