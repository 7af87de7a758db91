//! Moments of digit-restricted discrete measures on the unit interval,
//! the 1-periodic profile they approach in `log_b(m)`, and the
//! missing-digit Dirichlet sums that determine its Fourier coefficients.

pub mod asymptotics;
pub mod digits;
pub mod dirichlet;
pub mod error;
pub mod extrapolation;
pub mod moments;
pub mod numerics;

pub use digits::{enumerate_admissible, parse_digit_list, AdmissibleStream, DigitSet};
pub use error::{Error, Result};
pub use numerics::{Complex, Precision};
