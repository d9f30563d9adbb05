use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::SpectralField;
use crate::wavelets::{
    hard_threshold, iterative_threshold, safety_zone, CoeffMask, ThresholdOptions, WaveletCoeffs, WaveletFamily,
    WaveletTransform,
};

/// Parameters of coherent-vorticity-simulation filtering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CvsParams {
    pub family: WaveletFamily,
    /// Compression parameter `q`.
    pub q: f64,
    pub safety: bool,
    pub threshold: ThresholdOptions,
}

impl CvsParams {
    pub fn new(family: WaveletFamily, q: f64, safety: bool) -> Self {
        Self {
            family,
            q,
            safety,
            threshold: ThresholdOptions::default(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::Config(format!("CVS compression parameter q must be positive, got {}", self.q)));
        }
        if self.threshold.max_iterations == 0 || !(self.threshold.rel_tol >= 0.0) {
            return Err(Error::Config("CVS threshold iteration needs max_iterations >= 1 and rel_tol >= 0".into()));
        }
        Ok(())
    }
}

/// Outcome of one thresholding pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CvsStats {
    pub epsilon: f64,
    /// Retained coefficients, the mean included.
    pub retained: usize,
    pub total: usize,
}

impl CvsStats {
    pub fn retained_fraction(&self) -> f64 {
        self.retained as f64 / self.total as f64
    }
}

/// Threshold estimation, hard thresholding and optional safety zone on precomputed
/// coefficients.
pub(crate) fn cvs_mask<T: Real>(w: &WaveletCoeffs<T>, params: &CvsParams) -> Result<(CoeffMask, CvsStats)> {
    let eps = iterative_threshold(w, T::lit(params.q), &params.threshold)?;
    let (_, mut mask) = hard_threshold(w, eps)?;
    if params.safety {
        mask = safety_zone(&mask);
    }
    let stats = CvsStats {
        epsilon: eps.to_f64_lossy(),
        retained: mask.count(),
        total: mask.capacity(),
    };
    Ok((mask, stats))
}

/// One CVS pass on a Fourier state: inverse FFT, forward wavelet transform, iterative
/// threshold, hard thresholding, optional safety zone, inverse wavelet transform, FFT and
/// truncation to the dealiased band.
pub fn cvs_filter<T: Real>(s: &SpectralField<T>, params: &CvsParams) -> Result<(SpectralField<T>, CvsStats)> {
    params.validate()?;
    let transform = WaveletTransform::new(params.family, s.grid())?;
    let w = transform.forward(&s.to_physical()?)?;
    let (mask, stats) = cvs_mask(&w, params)?;
    let (out, _) = super::project_coefficients(&transform, &w, &mask)?;
    Ok((out, stats))
}
