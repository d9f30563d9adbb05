//! Periodized fast wavelet transform (Mallat cascade).
//!
//! Each stage splits a length-`L` approximation into low- and high-pass halves with an
//! orthogonal two-channel filter bank. Band-limited families apply their two-scale
//! symbols `H(k/L)` and `G(k/L) = exp(-2 pi i k/L) H(k/L + 1/2)` in the Fourier domain;
//! Daubechies12 convolves with the periodized 12-tap filters. Either way the stage is
//! an orthogonal map, so the whole cascade is orthonormal once the samples are scaled
//! by `1/sqrt(n)` per direction.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Dim, Grid};
use crate::scalar::Real;
use crate::spectral::PhysicalField;

use super::coeffs::WaveletCoeffs;
use super::family::{daubechies12_highpass, lowpass_symbol, WaveletFamily, DAUBECHIES12_LOWPASS};

#[derive(Clone)]
enum Stage<T: Real> {
    Spectral {
        forward: Arc<dyn Fft<T>>,
        forward_half: Arc<dyn Fft<T>>,
        inverse: Arc<dyn Fft<T>>,
        inverse_half: Arc<dyn Fft<T>>,
        low: Vec<Complex<T>>,
        high: Vec<Complex<T>>,
    },
    Filter {
        low: [T; 12],
        high: [T; 12],
    },
}

impl<T: Real> Stage<T> {
    fn new(family: WaveletFamily, len: usize, planner: &mut FftPlanner<T>) -> Self {
        match family {
            WaveletFamily::Daubechies12 => {
                let g = daubechies12_highpass();
                Stage::Filter {
                    low: DAUBECHIES12_LOWPASS.map(T::lit),
                    high: g.map(T::lit),
                }
            }
            fam => {
                let half = len / 2;
                let mut low = Vec::with_capacity(len);
                let mut high = Vec::with_capacity(len);
                for k in 0..len {
                    let xi = k as f64 / len as f64;
                    let h = lowpass_symbol(fam, xi).expect("band-limited family");
                    let hs = lowpass_symbol(fam, xi + 0.5).expect("band-limited family");
                    let phase = -std::f64::consts::TAU * xi;
                    low.push(Complex::new(T::lit(h), T::zero()));
                    high.push(Complex::new(T::lit(hs * phase.cos()), T::lit(hs * phase.sin())));
                }
                Stage::Spectral {
                    forward: planner.plan_fft_forward(len),
                    forward_half: planner.plan_fft_forward(half),
                    inverse: planner.plan_fft_inverse(len),
                    inverse_half: planner.plan_fft_inverse(half),
                    low,
                    high,
                }
            }
        }
    }

    /// `input` (length L) -> (`lo`, `hi`), each of length L/2.
    fn split(&self, input: &[T], lo: &mut [T], hi: &mut [T], scratch: &mut Scratch<T>) {
        let len = input.len();
        let half = len / 2;
        match self {
            Stage::Filter { low, high } => {
                for m in 0..half {
                    let (mut a, mut d) = (T::zero(), T::zero());
                    for t in 0..12 {
                        let v = input[(2 * m + t) % len];
                        a = a + low[t] * v;
                        d = d + high[t] * v;
                    }
                    lo[m] = a;
                    hi[m] = d;
                }
            }
            Stage::Spectral {
                forward,
                inverse_half,
                low,
                high,
                ..
            } => {
                let (buf, cl, ch) = scratch.buffers(len);
                for (b, &v) in buf.iter_mut().zip(input) {
                    *b = Complex::new(v, T::zero());
                }
                forward.process(buf);
                let one_half = T::lit(0.5);
                for k in 0..half {
                    let (a0, a1) = (buf[k], buf[k + half]);
                    cl[k] = (a0 * low[k].conj() + a1 * low[k + half].conj()).scale(one_half);
                    ch[k] = (a0 * high[k].conj() + a1 * high[k + half].conj()).scale(one_half);
                }
                inverse_half.process(cl);
                inverse_half.process(ch);
                let norm = T::one() / T::from_usize_lossy(half);
                for k in 0..half {
                    lo[k] = cl[k].re * norm;
                    hi[k] = ch[k].re * norm;
                }
            }
        }
    }

    /// Inverse of [`Stage::split`].
    fn merge(&self, lo: &[T], hi: &[T], out: &mut [T], scratch: &mut Scratch<T>) {
        let half = lo.len();
        let len = 2 * half;
        match self {
            Stage::Filter { low, high } => {
                out.iter_mut().for_each(|v| *v = T::zero());
                for m in 0..half {
                    for t in 0..12 {
                        let idx = (2 * m + t) % len;
                        out[idx] = out[idx] + low[t] * lo[m] + high[t] * hi[m];
                    }
                }
            }
            Stage::Spectral {
                forward_half,
                inverse,
                low,
                high,
                ..
            } => {
                let (buf, cl, ch) = scratch.buffers(len);
                for k in 0..half {
                    cl[k] = Complex::new(lo[k], T::zero());
                    ch[k] = Complex::new(hi[k], T::zero());
                }
                forward_half.process(cl);
                forward_half.process(ch);
                for k in 0..len {
                    buf[k] = cl[k % half] * low[k] + ch[k % half] * high[k];
                }
                inverse.process(buf);
                let norm = T::one() / T::from_usize_lossy(len);
                for (o, b) in out.iter_mut().zip(buf.iter()) {
                    *o = b.re * norm;
                }
            }
        }
    }
}

#[derive(Default)]
struct Scratch<T: Real> {
    full: Vec<Complex<T>>,
    lo: Vec<Complex<T>>,
    hi: Vec<Complex<T>>,
}

impl<T: Real> Scratch<T> {
    /// Full-length buffer plus two half-length buffers.
    #[allow(clippy::type_complexity)]
    fn buffers(&mut self, len: usize) -> (&mut [Complex<T>], &mut [Complex<T>], &mut [Complex<T>]) {
        let zero = Complex::new(T::zero(), T::zero());
        let half = len / 2;
        self.full.resize(len, zero);
        self.lo.resize(half, zero);
        self.hi.resize(half, zero);
        (&mut self.full[..len], &mut self.lo[..half], &mut self.hi[..half])
    }
}

/// Precomputed periodized wavelet transform for one family and grid.
#[derive(Clone)]
pub struct WaveletTransform<T: Real> {
    family: WaveletFamily,
    grid: Grid<T>,
    /// `stages[l - 1]` splits arrays of length `2^l`.
    stages: Vec<Stage<T>>,
}

impl<T: Real> std::fmt::Debug for WaveletTransform<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WaveletTransform")
            .field("family", &self.family)
            .field("grid", &self.grid)
            .finish()
    }
}

impl<T: Real> WaveletTransform<T> {
    pub fn new(family: WaveletFamily, grid: &Grid<T>) -> Result<Self> {
        let n = grid.n();
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::Config(format!("wavelet transform needs a power-of-two grid, got {n}")));
        }
        let mut planner = FftPlanner::new();
        let stages = (1..=n.trailing_zeros())
            .map(|l| Stage::new(family, 1usize << l, &mut planner))
            .collect();
        Ok(Self {
            family,
            grid: grid.clone(),
            stages,
        })
    }

    pub fn family(&self) -> WaveletFamily {
        self.family
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    /// Forward transform of samples on this transform's grid.
    pub fn forward(&self, p: &PhysicalField<T>) -> Result<WaveletCoeffs<T>> {
        if p.grid().dim() != self.grid.dim() || p.grid().n() != self.grid.n() {
            return Err(Error::Config(format!(
                "field on {:?} n={} does not match a wavelet transform for {:?} n={}",
                p.grid().dim(),
                p.grid().n(),
                self.grid.dim(),
                self.grid.n()
            )));
        }
        match self.grid.dim() {
            Dim::One => Ok(self.forward_1d(p.values())),
            Dim::Two => Ok(self.forward_2d(p.values())),
        }
    }

    /// Inverse transform, returning samples on this transform's grid.
    pub fn inverse(&self, w: &WaveletCoeffs<T>) -> Result<PhysicalField<T>> {
        if !w.same_layout(self.grid.dim(), self.grid.n()) {
            return Err(Error::Integrity(format!(
                "coefficients for {:?} n={} do not match a wavelet transform for {:?} n={}",
                w.grid().dim(),
                w.grid().n(),
                self.grid.dim(),
                self.grid.n()
            )));
        }
        if w.family() != self.family {
            return Err(Error::Integrity(format!(
                "{} coefficients passed to a {} transform",
                w.family(),
                self.family
            )));
        }
        let values = match self.grid.dim() {
            Dim::One => self.inverse_1d(w),
            Dim::Two => self.inverse_2d(w),
        };
        PhysicalField::new(self.grid.clone(), values)
    }

    fn forward_1d(&self, samples: &[T]) -> WaveletCoeffs<T> {
        let n = samples.len();
        let levels = n.trailing_zeros() as usize;
        let scale = T::one() / T::from_usize_lossy(n).sqrt();
        let mut approx: Vec<T> = samples.iter().map(|&v| v * scale).collect();
        let mut details = vec![Vec::new(); levels];
        let mut scratch = Scratch::default();
        for l in (1..=levels).rev() {
            let half = 1usize << (l - 1);
            let mut lo = vec![T::zero(); half];
            let mut hi = vec![T::zero(); half];
            self.stages[l - 1].split(&approx, &mut lo, &mut hi, &mut scratch);
            details[l - 1] = hi;
            approx = lo;
        }
        WaveletCoeffs {
            grid: self.grid.clone(),
            family: self.family,
            mean: approx[0],
            levels: details,
        }
    }

    fn inverse_1d(&self, w: &WaveletCoeffs<T>) -> Vec<T> {
        let n = self.grid.n();
        let mut approx = vec![w.mean];
        let mut scratch = Scratch::default();
        for (l, detail) in w.levels.iter().enumerate() {
            let mut out = vec![T::zero(); 2 << l];
            self.stages[l].merge(&approx, detail, &mut out, &mut scratch);
            approx = out;
        }
        let scale = T::from_usize_lossy(n).sqrt();
        approx.into_iter().map(|v| v * scale).collect()
    }

    fn forward_2d(&self, samples: &[T]) -> WaveletCoeffs<T> {
        let n = self.grid.n();
        let levels = n.trailing_zeros() as usize;
        let scale = T::one() / T::from_usize_lossy(n);
        let mut approx: Vec<T> = samples.iter().map(|&v| v * scale).collect();
        let mut details = vec![Vec::new(); levels];
        let mut scratch = Scratch::default();
        let mut line = Vec::new();
        for l in (1..=levels).rev() {
            let len = 1usize << l;
            let half = len / 2;
            let stage = &self.stages[l - 1];
            // Rows: each row becomes [low_x | high_x].
            let mut rows = vec![T::zero(); len * len];
            for r in 0..len {
                let (lo, hi) = rows[r * len..(r + 1) * len].split_at_mut(half);
                stage.split(&approx[r * len..(r + 1) * len], lo, hi, &mut scratch);
            }
            // Columns: the top half of each column is low_y, the bottom half high_y.
            let mut cols = vec![T::zero(); len * len];
            let mut lo = vec![T::zero(); half];
            let mut hi = vec![T::zero(); half];
            for c in 0..len {
                line.clear();
                line.extend((0..len).map(|r| rows[r * len + c]));
                stage.split(&line, &mut lo, &mut hi, &mut scratch);
                for r in 0..half {
                    cols[r * len + c] = lo[r];
                    cols[(r + half) * len + c] = hi[r];
                }
            }
            let mut next = vec![T::zero(); half * half];
            let mut level = vec![T::zero(); 3 * half * half];
            let band = half * half;
            for r in 0..half {
                for c in 0..half {
                    next[r * half + c] = cols[r * len + c];
                    level[r * half + c] = cols[r * len + c + half];
                    level[band + r * half + c] = cols[(r + half) * len + c];
                    level[2 * band + r * half + c] = cols[(r + half) * len + c + half];
                }
            }
            details[l - 1] = level;
            approx = next;
        }
        WaveletCoeffs {
            grid: self.grid.clone(),
            family: self.family,
            mean: approx[0],
            levels: details,
        }
    }

    fn inverse_2d(&self, w: &WaveletCoeffs<T>) -> Vec<T> {
        let n = self.grid.n();
        let mut approx = vec![w.mean];
        let mut scratch = Scratch::default();
        let mut line = vec![T::zero(); 2];
        for (l, level) in w.levels.iter().enumerate() {
            let half = 1usize << l;
            let len = 2 * half;
            let band = half * half;
            let stage = &self.stages[l];
            let mut cols = vec![T::zero(); len * len];
            for r in 0..half {
                for c in 0..half {
                    cols[r * len + c] = approx[r * half + c];
                    cols[r * len + c + half] = level[r * half + c];
                    cols[(r + half) * len + c] = level[band + r * half + c];
                    cols[(r + half) * len + c + half] = level[2 * band + r * half + c];
                }
            }
            let mut rows = vec![T::zero(); len * len];
            line.resize(len, T::zero());
            let mut lo = vec![T::zero(); half];
            let mut hi = vec![T::zero(); half];
            for c in 0..len {
                for r in 0..half {
                    lo[r] = cols[r * len + c];
                    hi[r] = cols[(r + half) * len + c];
                }
                stage.merge(&lo, &hi, &mut line, &mut scratch);
                for r in 0..len {
                    rows[r * len + c] = line[r];
                }
            }
            let mut next = vec![T::zero(); len * len];
            for r in 0..len {
                let (lo, hi) = rows[r * len..(r + 1) * len].split_at(half);
                stage.merge(lo, hi, &mut next[r * len..(r + 1) * len], &mut scratch);
            }
            approx = next;
        }
        let scale = T::from_usize_lossy(n);
        approx.into_iter().map(|v| v * scale).collect()
    }
}

/// One-shot forward transform.
pub fn fwt<T: Real>(p: &PhysicalField<T>, family: WaveletFamily) -> Result<WaveletCoeffs<T>> {
    WaveletTransform::new(family, p.grid())?.forward(p)
}

/// One-shot inverse transform.
pub fn iwt<T: Real>(w: &WaveletCoeffs<T>) -> Result<PhysicalField<T>> {
    WaveletTransform::new(w.family(), w.grid())?.inverse(w)
}
