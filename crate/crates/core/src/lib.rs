//! Pseudo-spectral solvers for 1D Burgers and 2D Euler with dynamical Galerkin
//! projectors: punctual Fourier and wavelet filters and coherent-vorticity-simulation
//! thresholding, with every removal of energy booked in a dissipation ledger.

pub mod diagnostics;
pub mod equations;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod projectors;
pub mod scalar;
pub mod spectral;
pub mod timestepping;
pub mod wavelets;

pub use diagnostics::{delta, error_functional, loglog_slope, relative_l2_error, DiagnosticsRecord, ErrorIntegral};
pub use equations::{burgers_rhs, euler2d_rhs, BurgersParams};
pub use error::{Error, Result};
pub use grid::{Axis, Dim, Grid};
pub use oracle::{analytic_energy, entropy_eval, entropy_sample, shock_time};
pub use projectors::{
    cvs_filter, CvsParams, CvsStats, DissipationLedger, DynamicalProjector, LedgerEntry, LedgerTag, Projection,
    ProjectorRule,
};
pub use scalar::Real;
pub use spectral::{dealiased_product, PhysicalField, SpectralField};
pub use timestepping::{advance, Scheme, Snapshot, StepperConfig, SubstagePolicy};
pub use wavelets::{WaveletCoeffs, WaveletFamily, WaveletTransform};

pub type Grid64 = Grid<f64>;
pub type PhysicalField64 = PhysicalField<f64>;
pub type SpectralField64 = SpectralField<f64>;
pub type DynamicalProjector64 = DynamicalProjector<f64>;
pub type Grid32 = Grid<f32>;
pub type PhysicalField32 = PhysicalField<f32>;
pub type SpectralField32 = SpectralField<f32>;
