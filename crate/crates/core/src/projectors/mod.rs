//! Dynamical Galerkin projectors: time- and state-dependent orthogonal projections
//! applied to the Fourier state, with their energy losses booked in a ledger.

mod cvs;
mod ledger;

use num_complex::Complex;

pub use cvs::{cvs_filter, CvsParams, CvsStats};
pub use ledger::{DissipationLedger, LedgerEntry, LedgerTag, LEDGER_CSV_HEADER};

use crate::error::{Error, Result};
use crate::grid::{Dim, Grid};
use crate::scalar::Real;
use crate::spectral::SpectralField;
use crate::wavelets::{apply_mask, level_len, CoeffMask, WaveletCoeffs, WaveletFamily, WaveletTransform};

/// Rule mapping `(t, state)` to the projector in force.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjectorRule {
    Identity,
    /// Removes the Fourier modes `+k_f` and `-k_f` while `t_b <= t < t_e`.
    FourierPunctual { k_f: usize, t_b: f64, t_e: f64 },
    /// Removes the wavelet coefficient `(j_f, i_f)` while `t_b <= t < t_e`.
    WaveletPunctual {
        family: WaveletFamily,
        j_f: usize,
        i_f: usize,
        t_b: f64,
        t_e: f64,
    },
    /// Thresholds the wavelet coefficients of the current state.
    Cvs(CvsParams),
}

impl ProjectorRule {
    pub fn window(&self) -> Option<(f64, f64)> {
        match *self {
            Self::FourierPunctual { t_b, t_e, .. } | Self::WaveletPunctual { t_b, t_e, .. } => Some((t_b, t_e)),
            _ => None,
        }
    }

    pub fn family(&self) -> Option<WaveletFamily> {
        match self {
            Self::WaveletPunctual { family, .. } => Some(*family),
            Self::Cvs(p) => Some(p.family),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Identity => "identity".into(),
            Self::FourierPunctual { k_f, .. } => format!("fourier k_f={k_f}"),
            Self::WaveletPunctual { family, j_f, i_f, .. } => format!("{family} j_f={j_f} i_f={i_f}"),
            Self::Cvs(p) => format!("cvs {} q={} safety={}", p.family, p.q, p.safety),
        }
    }
}

/// A concrete projector, fixed for the duration of one time step.
#[derive(Clone, Debug, PartialEq)]
pub enum Projection {
    Identity,
    /// Zero the Fourier modes `+k` and `-k`.
    FourierModes { k: usize },
    /// Keep the masked wavelet coefficients, then truncate to the dealiased band.
    WaveletMask(CoeffMask),
}

/// Energy removed by one projection.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Losses {
    /// `||(1 - P) u||^2` in the active representation.
    pub filtered: f64,
    /// Energy of the modes beyond `k_cut` created by a wavelet projection and truncated.
    pub dealias: f64,
}

impl Losses {
    pub fn total(&self) -> f64 {
        self.filtered + self.dealias
    }
}

/// Result of [`DynamicalProjector::apply_detailed`].
#[derive(Clone, Debug)]
pub struct Applied<T: Real> {
    pub field: SpectralField<T>,
    pub projection: Projection,
    pub losses: Losses,
    pub cvs: Option<CvsStats>,
}

/// A projector rule bound to a grid, with its wavelet transform precomputed.
#[derive(Clone, Debug)]
pub struct DynamicalProjector<T: Real> {
    rule: ProjectorRule,
    grid: Grid<T>,
    transform: Option<WaveletTransform<T>>,
    was_active: bool,
    applications: usize,
}

fn check_window(t_b: f64, t_e: f64) -> Result<()> {
    if !(t_b.is_finite() && t_e.is_finite() && t_b <= t_e) {
        return Err(Error::Config(format!("filter window needs finite t_b <= t_e, got [{t_b}, {t_e}]")));
    }
    Ok(())
}

impl<T: Real> DynamicalProjector<T> {
    pub fn new(rule: ProjectorRule, grid: &Grid<T>) -> Result<Self> {
        let one_d_only = |what: &str| {
            if grid.dim() != Dim::One {
                Err(Error::Config(format!("{what} filtering is only defined for 1D grids")))
            } else {
                Ok(())
            }
        };
        let transform = match &rule {
            ProjectorRule::Identity => None,
            ProjectorRule::FourierPunctual { k_f, t_b, t_e } => {
                one_d_only("punctual Fourier")?;
                check_window(*t_b, *t_e)?;
                if *k_f >= grid.n() / 2 {
                    return Err(Error::Config(format!("k_f={k_f} outside the grid's wavenumber range")));
                }
                None
            }
            ProjectorRule::WaveletPunctual {
                family,
                j_f,
                i_f,
                t_b,
                t_e,
            } => {
                one_d_only("punctual wavelet")?;
                check_window(*t_b, *t_e)?;
                let levels = grid.n().trailing_zeros() as usize;
                if *j_f >= levels || *i_f >= level_len(Dim::One, *j_f) {
                    return Err(Error::Config(format!(
                        "wavelet coefficient ({j_f}, {i_f}) outside a {levels}-level layout"
                    )));
                }
                Some(WaveletTransform::new(*family, grid)?)
            }
            ProjectorRule::Cvs(params) => {
                params.validate()?;
                Some(WaveletTransform::new(params.family, grid)?)
            }
        };
        Ok(Self {
            rule,
            grid: grid.clone(),
            transform,
            was_active: false,
            applications: 0,
        })
    }

    pub fn rule(&self) -> &ProjectorRule {
        &self.rule
    }

    /// Whether the rule acts at time `t` (always for CVS, never for the identity).
    pub fn is_active(&self, t: f64) -> bool {
        match self.rule {
            ProjectorRule::Identity => false,
            ProjectorRule::Cvs(_) => true,
            ProjectorRule::FourierPunctual { t_b, t_e, .. } | ProjectorRule::WaveletPunctual { t_b, t_e, .. } => {
                t_b <= t && t < t_e
            }
        }
    }

    fn check_grid(&self, s: &SpectralField<T>) -> Result<()> {
        if s.grid() != &self.grid {
            return Err(Error::Config(format!(
                "state on {:?} passed to a projector built for {:?}",
                s.grid(),
                self.grid
            )));
        }
        Ok(())
    }

    fn transform(&self) -> &WaveletTransform<T> {
        self.transform.as_ref().expect("wavelet rule carries a transform")
    }

    /// The projector in force at `t+` for state `s`. Pure: does not touch the
    /// activation history.
    pub fn resolve(&self, t: f64, s: &SpectralField<T>) -> Result<(Projection, Option<CvsStats>)> {
        self.check_grid(s)?;
        if !self.is_active(t) {
            return Ok((Projection::Identity, None));
        }
        Ok(match &self.rule {
            ProjectorRule::Identity => (Projection::Identity, None),
            ProjectorRule::FourierPunctual { k_f, .. } => (Projection::FourierModes { k: *k_f }, None),
            ProjectorRule::WaveletPunctual { j_f, i_f, .. } => {
                let mut mask = CoeffMask::full(Dim::One, self.grid.n());
                mask.set(*j_f, *i_f, false);
                (Projection::WaveletMask(mask), None)
            }
            ProjectorRule::Cvs(params) => {
                let w = self.transform().forward(&s.to_physical()?)?;
                let (mask, stats) = cvs::cvs_mask(&w, params)?;
                (Projection::WaveletMask(mask), Some(stats))
            }
        })
    }

    /// Applies a resolved projection to `s`.
    pub fn project(&self, p: &Projection, s: SpectralField<T>) -> Result<(SpectralField<T>, Losses)> {
        self.check_grid(&s)?;
        match p {
            Projection::Identity => Ok((s, Losses::default())),
            Projection::FourierModes { k } => {
                let mut s = s;
                let filtered = zero_mode_pair(&mut s, *k);
                Ok((
                    s,
                    Losses {
                        filtered,
                        dealias: 0.0,
                    },
                ))
            }
            Projection::WaveletMask(mask) => {
                let w = self.transform().forward(&s.to_physical()?)?;
                project_coefficients(self.transform(), &w, mask)
            }
        }
    }

    /// Returns `P(t+) s`. With `record`, appends the removed energy to the ledger: a
    /// punctual filter's first zeroing is tagged `jump` and later ones `rezero`, CVS
    /// removals `cvs`, the very first application at `t = 0` `initial`, and energy lost to
    /// dealias truncation `dealias`.
    pub fn apply(
        &mut self,
        t: f64,
        s: &SpectralField<T>,
        ledger: &mut DissipationLedger,
        record: bool,
    ) -> Result<SpectralField<T>> {
        Ok(self.apply_detailed(t, s.clone(), ledger, record)?.field)
    }

    /// [`apply`](Self::apply) returning the resolved projection and its losses as well.
    pub fn apply_detailed(
        &mut self,
        t: f64,
        s: SpectralField<T>,
        ledger: &mut DissipationLedger,
        record: bool,
    ) -> Result<Applied<T>> {
        self.check_grid(&s)?;
        let active = self.is_active(t);
        let (field, projection, losses, cvs) = match (&self.rule, active) {
            (ProjectorRule::Cvs(params), true) => {
                // Reuse the coefficients used for thresholding.
                let w = self.transform().forward(&s.to_physical()?)?;
                let (mask, stats) = cvs::cvs_mask(&w, params)?;
                let (field, losses) = project_coefficients(self.transform(), &w, &mask)?;
                (field, Projection::WaveletMask(mask), losses, Some(stats))
            }
            _ => {
                let (projection, _) = self.resolve(t, &s)?;
                let (field, losses) = self.project(&projection, s)?;
                (field, projection, losses, None)
            }
        };
        if record && active {
            let tag = if self.applications == 0 && t == 0.0 {
                LedgerTag::Initial
            } else {
                match self.rule {
                    ProjectorRule::Cvs(_) => LedgerTag::Cvs,
                    _ if self.was_active => LedgerTag::Rezero,
                    _ => LedgerTag::Jump,
                }
            };
            let what = self.rule.describe();
            ledger.record(t, losses.filtered, tag, what.clone());
            ledger.record(t, losses.dealias, LedgerTag::Dealias, what);
        }
        if record {
            self.was_active = active;
            self.applications += 1;
        }
        Ok(Applied {
            field,
            projection,
            losses,
            cvs,
        })
    }
}

/// Zeroes modes `+k` and `-k` of a 1D field, returning the removed energy.
fn zero_mode_pair<T: Real>(s: &mut SpectralField<T>, k: usize) -> f64 {
    let n = s.grid().n();
    let zero = Complex::new(T::zero(), T::zero());
    let k = k as i64;
    let mut removed = 0.0;
    let idx: Vec<usize> = if k == 0 {
        vec![0]
    } else {
        vec![s.grid().index_of(k), s.grid().index_of(-k)]
    };
    let coeffs = s.coeffs_mut();
    for i in idx {
        debug_assert!(i < n);
        removed += coeffs[i].norm_sqr().to_f64_lossy();
        coeffs[i] = zero;
    }
    removed
}

/// `T W^T M W u` from precomputed coefficients `w = W u`, with the wavelet-space and
/// dealias losses measured separately.
pub(crate) fn project_coefficients<T: Real>(
    transform: &WaveletTransform<T>,
    w: &WaveletCoeffs<T>,
    mask: &CoeffMask,
) -> Result<(SpectralField<T>, Losses)> {
    let kept = apply_mask(w, mask)?;
    let filtered = removed_energy(w, mask);
    let mut field = transform.inverse(&kept)?.to_spectral();
    let k_cut = field.grid().k_cut();
    let dealias = field.energy_outside(k_cut).to_f64_lossy();
    field.truncate_in_place();
    Ok((field, Losses { filtered, dealias }))
}

fn removed_energy<T: Real>(w: &WaveletCoeffs<T>, mask: &CoeffMask) -> f64 {
    let mut sum = 0.0;
    for j in 0..w.num_levels() {
        for (c, &keep) in w.level(j).iter().zip(mask.level(j)) {
            if !keep {
                let c = c.to_f64_lossy();
                sum += c * c;
            }
        }
    }
    sum
}
