//! Moments `u_m(s) = int x^m d mu_s` of the digit-restricted measure.
//!
//! Four independent routes are provided:
//!
//! * [`moments_recurrence`]: the stable positive recurrence, in scaled form;
//! * [`moments_direct`]: the defining series over digit words (test oracle);
//! * [`egf_scaled`]: the product form of `e^{-m} E(kappa m)`;
//! * [`bernoulli_moments`]: the closed form for the full digit set, with
//!   cancellation diagnostics.

mod closed_form;
mod direct;
mod egf;
mod recurrence;

pub use closed_form::{bernoulli_moments, BernoulliMoments, BernoulliOptions, CancellationDiagnostics};
pub use direct::{moments_direct, DirectOptions, DirectValue, TailMode};
pub use egf::{egf_scaled, prop1_residual, prop1_residuals};
pub use recurrence::moments_recurrence;

use std::fmt;
use std::str::FromStr;

use rug::Float;

use crate::digits::DigitSet;
use crate::error::Error;
use crate::numerics::Precision;

/// Normalization applied to `u_m(s)` before it is stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scaling {
    /// `u_m`
    None,
    /// `kappa^m u_m`
    Kappa,
    /// `kappa^m (m + 1) u_m`
    KappaLinear,
    /// `kappa^m (s + 1)_m / m! u_m`
    KappaPochhammer,
    /// `kappa^m m^s u_m`
    KappaPower,
}

impl Scaling {
    pub fn uses_kappa(self) -> bool {
        !matches!(self, Scaling::None)
    }

    /// The non-`kappa` factor relative to `m^s`: the scaled moment is
    /// close to `F_s(m) * correction(m)` where `F_s` is the periodic profile.
    pub fn profile_correction(self, m: u64, s: f64, prec: Precision) -> Float {
        let p = prec.bits();
        let m_s = Float::with_val(p, m).pow_ref_f64(s);
        match self {
            Scaling::None | Scaling::Kappa => Float::with_val(p, 1) / m_s,
            Scaling::KappaLinear => Float::with_val(p, m + 1) / m_s,
            Scaling::KappaPochhammer => pochhammer_ratio(m, s, prec) / m_s,
            Scaling::KappaPower => Float::with_val(p, 1),
        }
    }

    /// Multiplies the average target `c_0` (which refers to `m^s` scaling)
    /// into the target for this scaling.
    pub fn average_factor(self, s: f64, prec: Precision) -> Option<Float> {
        let p = prec.bits();
        match self {
            Scaling::KappaPower => Some(Float::with_val(p, 1)),
            Scaling::KappaLinear if s == 1.0 => Some(Float::with_val(p, 1)),
            // (s+1)_m / m! ~ m^s / Gamma(s+1)
            Scaling::KappaPochhammer => {
                Some(Float::with_val(p, 1) / Float::with_val(p, s + 1.0).gamma())
            }
            _ => None,
        }
    }
}

trait PowF64 {
    fn pow_ref_f64(&self, s: f64) -> Float;
}

impl PowF64 for Float {
    fn pow_ref_f64(&self, s: f64) -> Float {
        use rug::ops::Pow;
        self.clone().pow(Float::with_val(self.prec(), s))
    }
}

/// `(s + 1)_m / m! = prod_{k=1}^m (s + k) / k`.
pub fn pochhammer_ratio(m: u64, s: f64, prec: Precision) -> Float {
    let p = prec.bits();
    let sf = Float::with_val(p, s);
    let mut r = Float::with_val(p, 1);
    for k in 1..=m {
        r *= Float::with_val(p, &sf + k);
        r /= k;
    }
    r
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scaling::None => "none",
            Scaling::Kappa => "kappa",
            Scaling::KappaLinear => "linear",
            Scaling::KappaPochhammer => "pochhammer",
            Scaling::KappaPower => "power",
        })
    }
}

impl FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "none" => Scaling::None,
            "kappa" => Scaling::Kappa,
            "linear" => Scaling::KappaLinear,
            "pochhammer" => Scaling::KappaPochhammer,
            "power" => Scaling::KappaPower,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown scaling '{other}' (none|kappa|linear|pochhammer|power)"
                )))
            }
        })
    }
}

/// Scaled moments `v_0..=v_M` for one `(b, A, s)`.
#[derive(Debug, Clone)]
pub struct MomentSequence {
    pub digit_set: DigitSet,
    pub s: f64,
    pub scaling: Scaling,
    pub values: Vec<Float>,
    pub precision: Precision,
}

impl MomentSequence {
    pub fn m_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, m: usize) -> Option<&Float> {
        self.values.get(m)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Float::to_f64).collect()
    }
}
