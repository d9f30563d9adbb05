use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Orthogonal periodic wavelet families.
///
/// Shannon and Meyer are realized in the Fourier domain from their two-scale low-pass
/// symbols; Daubechies12 by its 12-tap filter pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WaveletFamily {
    Shannon,
    Meyer,
    Daubechies12,
}

impl WaveletFamily {
    pub const ALL: [WaveletFamily; 3] = [Self::Shannon, Self::Meyer, Self::Daubechies12];

    /// True when every basis function is a trigonometric polynomial whose band is fixed
    /// by its level.
    pub fn is_band_limited(self) -> bool {
        matches!(self, Self::Shannon | Self::Meyer)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Shannon => "shannon",
            Self::Meyer => "meyer",
            Self::Daubechies12 => "daubechies12",
        }
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WaveletFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "shannon" => Ok(Self::Shannon),
            "meyer" => Ok(Self::Meyer),
            "daubechies12" | "db12" | "db6" => Ok(Self::Daubechies12),
            other => Err(Error::Config(format!("unknown wavelet family '{other}'"))),
        }
    }
}

/// Extremal-phase Daubechies scaling filter with 12 taps (6 vanishing moments),
/// normalized to `sum h = sqrt(2)`.
pub const DAUBECHIES12_LOWPASS: [f64; 12] = [
    0.111_540_743_350_109_46,
    0.494_623_890_398_453_3,
    0.751_133_908_021_095_4,
    0.315_250_351_709_198_1,
    -0.226_264_693_965_440_4,
    -0.129_766_867_567_262_46,
    0.097_501_605_587_322_46,
    0.027_522_865_530_305_33,
    -0.031_582_039_317_486_226,
    0.000_553_842_201_161_495_8,
    0.004_777_257_510_945_511,
    -0.001_077_301_085_308_479_6,
];

/// Quadrature-mirror high-pass partner `g[t] = (-1)^t h[11 - t]`.
pub fn daubechies12_highpass() -> [f64; 12] {
    let h = DAUBECHIES12_LOWPASS;
    std::array::from_fn(|t| if t % 2 == 0 { h[11 - t] } else { -h[11 - t] })
}

/// Meyer auxiliary function `nu(t) = t^4 (35 - 84 t + 70 t^2 - 20 t^3)`, clamped to [0, 1].
pub fn meyer_nu(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t.powi(4) * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t)
    }
}

/// Real, non-negative two-scale low-pass symbol of a band-limited family at frequency
/// `xi` (cycles per sample, 1-periodic). Satisfies `|m(xi)|^2 + |m(xi + 1/2)|^2 = 2`.
///
/// Returns `None` for filter-bank families.
pub fn lowpass_symbol(family: WaveletFamily, xi: f64) -> Option<f64> {
    let a = (xi - xi.round()).abs();
    let sqrt2 = std::f64::consts::SQRT_2;
    match family {
        // The band edge is shared evenly between the two channels.
        WaveletFamily::Shannon => Some(if a < 0.25 {
            sqrt2
        } else if a == 0.25 {
            1.0
        } else {
            0.0
        }),
        WaveletFamily::Meyer => Some(if a <= 1.0 / 6.0 {
            sqrt2
        } else if a < 1.0 / 3.0 {
            sqrt2 * (std::f64::consts::FRAC_PI_2 * meyer_nu(6.0 * a - 1.0)).cos()
        } else {
            0.0
        }),
        WaveletFamily::Daubechies12 => None,
    }
}

/// Fraction of the energy of Fourier mode `k` carried by detail level `j` of an
/// `n`-point periodic decomposition (`j = None` selects the mean/scaling part).
///
/// For every `k`, the fractions over all levels plus the scaling part sum to one.
/// Returns `None` for filter-bank families.
pub fn band_power(family: WaveletFamily, n: usize, j: Option<usize>, k: i64) -> Option<f64> {
    let levels = n.trailing_zeros() as usize;
    let low = |len: usize| -> Option<f64> {
        let m = lowpass_symbol(family, k as f64 / len as f64)?;
        Some(m * m / 2.0)
    };
    let stop = j.unwrap_or(0);
    let mut p = 1.0;
    // Low-pass stages from the finest length down to the stage that emits level `j`.
    for lvl in ((stop + 1)..=levels).rev() {
        let len = 1usize << lvl;
        if j.is_some() && lvl == stop + 1 {
            // This stage produces detail level `stop`: apply the high-pass instead.
            let m = lowpass_symbol(family, k as f64 / len as f64 + 0.5)?;
            p *= m * m / 2.0;
        } else {
            p *= low(len)?;
        }
    }
    Some(p)
}
