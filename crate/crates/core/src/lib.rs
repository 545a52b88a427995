//! Empirical Fourier decomposition (EFD) of real, uniformly sampled signals.
//!
//! The half spectrum of a signal is segmented at the lowest minima between its
//! dominant peaks, and each segment is turned back into a time-domain mode by an
//! ideal (brick-wall) band-pass over the DFT coefficients. Two reference methods
//! share the same result type: the empirical wavelet transform ([`ewt`]) with a
//! Meyer-type filter bank, and the Fourier decomposition method ([`fdm`]) with its
//! greedy phase-monotone band scan. [`tfr`] turns modes into Hilbert
//! amplitude/frequency tracks, and [`testbed`] carries signal generators, error
//! metrics and a wall-clock benchmark harness.
//!
//! All transforms use the analysis convention `X[k] = (1/K) Σ x[n] e^{-j2πkn/K}`
//! with an unnormalized synthesis sum.

pub mod decomposition;
pub mod efd;
pub mod error;
pub mod ewt;
pub mod fdm;
pub mod segmentation;
pub mod spectral;
pub mod testbed;
pub mod tfr;

pub use decomposition::{DecompositionResult, Method, Mode};
pub use efd::{band_mode, efd_decompose};
pub use error::{Error, Result};
pub use ewt::{build_filter_bank, ewt_decompose, meyer_beta, EwtFilterBank, EwtSegmentation};
pub use fdm::{fdm_decompose, phase_monotone_span};
pub use segmentation::{
    bands_from_boundaries, boundaries_local_minima, boundaries_lowest_minima,
    boundaries_midpoint_maxima, detect_control_points, Band, BoundarySet, ControlPoint,
};
pub use spectral::{
    analytic_signal, forward_transform, half_magnitudes, inverse_transform, AnalyticSeries,
    Signal, Spectrum,
};
pub use tfr::{instantaneous_attributes, tf_grid, TFGrid, TFTrack};

pub use num_complex::Complex64;
