//! The periodic profile the scaled moments approach, its Fourier series in
//! `log_b m`, and period averages of moment sequences.

mod average;
mod fourier;
mod profile;

pub use average::{
    average_estimate, average_with_extrapolation, extrapolate, extrapolate_float, AverageEstimate,
    PeriodWindow, Weighting,
};
pub use fourier::{
    fourier_coefficient, profile_from_fourier, profile_from_fourier_complex, FourierCoefficient,
    FourierOptions, FourierSpectrum,
};
pub use profile::{profile_value, ProfileEvaluator};
