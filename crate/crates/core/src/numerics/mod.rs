//! Working-precision arithmetic and the special functions the asymptotic
//! formulas need.
//!
//! All real arithmetic is done with MPFR floats (`rug::Float`), whose
//! exponent range is wide enough that `b^m`, `m!` and `kappa^m` for
//! `m` up to `10^5` neither overflow nor underflow.

pub(crate) mod bernoulli;
mod complex;
mod gamma;
mod zeta;

pub use bernoulli::{bernoulli_numbers, binomial_row, BinomialRow};
pub use complex::Complex;
pub use gamma::{gamma_complex, ln_gamma_complex};
pub use zeta::zeta_real;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Significand width of the working floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(u32);

impl Precision {
    /// Default for moment tables and diagnostics.
    pub const DEFAULT: Precision = Precision(192);
    /// Enough for figures and period averages.
    pub const FIGURE: Precision = Precision(128);

    pub const MIN_BITS: u32 = 64;
    pub const MAX_BITS: u32 = 1 << 20;

    pub fn new(bits: u32) -> Result<Self> {
        if !(Self::MIN_BITS..=Self::MAX_BITS).contains(&bits) {
            return Err(Error::InvalidArgument(format!(
                "precision {bits} bits outside [{}, {}]",
                Self::MIN_BITS,
                Self::MAX_BITS
            )));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The same precision widened by `extra` guard bits.
    pub fn guarded(self, extra: u32) -> Precision {
        Precision(self.0.saturating_add(extra).min(Self::MAX_BITS))
    }

    /// Documented relative error of module outputs, `2^(8 - bits)`.
    pub fn tolerance(self) -> f64 {
        2f64.powi(8 - self.0.min(1000) as i32)
    }

    /// Approximate decimal digits carried.
    pub fn decimal_digits(self) -> f64 {
        self.0 as f64 * std::f64::consts::LOG10_2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

pub fn pi(prec: Precision) -> Float {
    Float::with_val(prec.bits(), Constant::Pi)
}

pub fn ln_base(base: u32, prec: Precision) -> Float {
    Float::with_val(prec.bits(), base).ln()
}

/// `log_b(x)` for a positive float.
pub fn log_base(x: &Float, base: u32) -> Float {
    let p = x.prec();
    Float::with_val(p, x.ln_ref()) / Float::with_val(p, base).ln()
}

/// `b^x` for real `x`.
pub fn base_pow(base: u32, x: &Float) -> Float {
    Float::with_val(x.prec(), base).pow(x)
}

/// Converts an exact rational to a float, rounding once.
pub fn rational_to_float(q: &rug::Rational, prec: Precision) -> Float {
    Float::with_val(prec.bits(), q)
}

/// `log10 |x|`, finite for nonzero `x`; `-inf` for zero.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mant, exp) = x.to_f64_exp();
    mant.abs().log10() + exp as f64 * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bounds() {
        assert!(Precision::new(63).is_err());
        assert_eq!(Precision::new(64).unwrap().bits(), 64);
        assert_eq!(Precision::default().bits(), 192);
        assert_eq!(Precision::FIGURE.guarded(32).bits(), 160);
    }

    #[test]
    fn log10_of_huge_values() {
        let p = Precision::DEFAULT;
        let x = Float::with_val(p.bits(), 10).pow(100_000);
        assert!((log10_abs(&x) - 100_000.0).abs() < 1e-9);
        let y = Float::with_val(p.bits(), 10).pow(-100_000);
        assert!((log10_abs(&y) + 100_000.0).abs() < 1e-9);
        // e^{-10^5} is representable
        let e = Float::with_val(p.bits(), -100_000).exp();
        assert!(!e.is_zero());
    }
}
