//! Periodized orthogonal wavelets: transforms, thresholding and coefficient masks.

mod coeffs;
mod family;
mod safety;
mod threshold;
mod transform;

pub use coeffs::{apply_mask, level_len, CoeffMask, WaveletCoeffs};
pub use family::{band_power, daubechies12_highpass, lowpass_symbol, meyer_nu, WaveletFamily, DAUBECHIES12_LOWPASS};
pub use safety::safety_zone;
pub use threshold::{
    hard_threshold, initial_threshold, iterate_from, iterative_threshold, InitialThreshold, SigmaConvention,
    ThresholdOptions,
};
pub use transform::{fwt, iwt, WaveletTransform};
