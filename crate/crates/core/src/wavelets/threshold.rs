//! Hard thresholding and iterative threshold estimation.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::coeffs::{CoeffMask, WaveletCoeffs};

/// Spread estimator used by the iterative threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SigmaConvention {
    /// Standard deviation about the sample mean of the sub-threshold set.
    #[default]
    Centered,
    /// Root mean square about zero.
    Rms,
}

/// Starting value of the threshold iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum InitialThreshold {
    /// `q * sqrt(||u||_2 / 2 / N)`.
    #[default]
    NormOverTwoN,
    /// `q * sqrt(||u||_2^2 / (2 N))`.
    EnergyOverTwoN,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdOptions {
    pub sigma: SigmaConvention,
    pub initial: InitialThreshold,
    pub max_iterations: usize,
    pub rel_tol: f64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            sigma: SigmaConvention::Centered,
            initial: InitialThreshold::NormOverTwoN,
            max_iterations: 100,
            rel_tol: 1e-12,
        }
    }
}

/// Keeps detail coefficients with `|c| > eps`, zeroes those with `|c| <= eps`. The mean
/// is always kept. Returns the thresholded coefficients and the retained mask.
pub fn hard_threshold<T: Real>(w: &WaveletCoeffs<T>, eps: T) -> Result<(WaveletCoeffs<T>, CoeffMask)> {
    if eps.is_nan() || eps < T::zero() {
        return Err(Error::Argument(format!("threshold must be non-negative, got {eps}")));
    }
    let mut out = w.clone();
    let mut mask = CoeffMask::empty_like(w);
    for j in 0..out.num_levels() {
        let keep = mask.level_mut(j);
        for (c, k) in out.level_mut(j).iter_mut().zip(keep.iter_mut()) {
            if c.abs() > eps {
                *k = true;
            } else {
                *c = T::zero();
            }
        }
    }
    Ok((out, mask))
}

/// Starting threshold `eps_0` for compression parameter `q`.
pub fn initial_threshold<T: Real>(w: &WaveletCoeffs<T>, q: T, initial: InitialThreshold) -> T {
    let count = T::from_usize_lossy(w.len());
    let two = T::lit(2.0);
    let energy = w.energy();
    match initial {
        InitialThreshold::NormOverTwoN => q * (energy.sqrt() / two / count).sqrt(),
        InitialThreshold::EnergyOverTwoN => q * (energy / (two * count)).sqrt(),
    }
}

/// Fixed-point iteration `eps_{s+1} = q * sigma[{c : |c| <= eps_s}]` starting from
/// [`initial_threshold`]. Stops when successive values agree to `rel_tol`, when the
/// sub-threshold set is empty (returning the current value), or after
/// `max_iterations`.
pub fn iterative_threshold<T: Real>(w: &WaveletCoeffs<T>, q: T, opts: &ThresholdOptions) -> Result<T> {
    if q.is_nan() || q <= T::zero() {
        return Err(Error::Argument(format!("compression parameter q must be positive, got {q}")));
    }
    let start = initial_threshold(w, q, opts.initial);
    iterate_from(w, q, start, opts)
}

/// The iteration body of [`iterative_threshold`] started from an arbitrary `eps`.
pub fn iterate_from<T: Real>(w: &WaveletCoeffs<T>, q: T, start: T, opts: &ThresholdOptions) -> Result<T> {
    let rel_tol = T::lit(opts.rel_tol);
    let mut eps = start;
    for _ in 0..opts.max_iterations {
        let Some(sigma) = sub_threshold_sigma(w, eps, opts.sigma) else {
            return Ok(eps);
        };
        let next = q * sigma;
        let scale = eps.abs().max(next.abs());
        if (next - eps).abs() <= rel_tol * scale {
            return Ok(next);
        }
        eps = next;
    }
    Ok(eps)
}

fn sub_threshold_sigma<T: Real>(w: &WaveletCoeffs<T>, eps: T, convention: SigmaConvention) -> Option<T> {
    let (mut count, mut sum, mut sum_sq) = (0usize, T::zero(), T::zero());
    for c in w.details().filter(|c| c.abs() <= eps) {
        count += 1;
        sum = sum + c;
        sum_sq = sum_sq + c * c;
    }
    if count == 0 {
        return None;
    }
    let m = T::from_usize_lossy(count);
    let var = match convention {
        SigmaConvention::Rms => sum_sq / m,
        SigmaConvention::Centered => {
            let mean = sum / m;
            // Two-pass for accuracy on nearly constant sets.
            w.details()
                .filter(|c| c.abs() <= eps)
                .map(|c| (c - mean) * (c - mean))
                .sum::<T>()
                / m
        }
    };
    Some(var.max(T::zero()).sqrt())
}
