use rug::ops::Pow;
use rug::Float;

use super::{MomentSequence, Scaling};
use crate::digits::DigitSet;
use crate::error::Result;
use crate::numerics::bernoulli::bernoulli_even;
use crate::numerics::{binomial_row, log10_abs, Precision};

#[derive(Debug, Clone, Copy)]
pub struct BernoulliOptions {
    /// Precision of the returned values.
    pub precision: Precision,
    /// Raise the working precision per `m` until the cancellation is
    /// covered. When false, every `m` is evaluated at `precision` as is.
    pub adaptive: bool,
    /// Upper limit for the adaptive working precision.
    pub max_bits: u32,
}

impl Default for BernoulliOptions {
    fn default() -> Self {
        BernoulliOptions {
            precision: Precision::DEFAULT,
            adaptive: true,
            max_bits: 1 << 16,
        }
    }
}

/// How badly the closed form cancels at one `m`.
#[derive(Debug, Clone)]
pub struct CancellationDiagnostics {
    pub m: usize,
    /// Largest `|term|` of the sum.
    pub max_term_magnitude: Float,
    pub result_magnitude: Float,
    /// `log10(max_term / |result|)`, clamped at `0`.
    pub lost_digits: f64,
    pub working_bits: u32,
    /// Fewer than 12 correct digits can remain at `working_bits`.
    pub precision_exhausted: bool,
}

#[derive(Debug, Clone)]
pub struct BernoulliMoments {
    pub sequence: MomentSequence,
    pub diagnostics: Vec<CancellationDiagnostics>,
}

impl BernoulliMoments {
    pub fn precision_exhausted(&self) -> bool {
        self.diagnostics.iter().any(|d| d.precision_exhausted)
    }
}

const KEPT_DIGITS: f64 = 12.0;

/// `u_m(s)` for the full digit set `{0, ..., b-1}` from the closed form
///
/// `u_m = b^s / ((m+1)(b^s - b)) - b^{s+1} / (2 (b^{s+1} - b))
///        + sum_{1<=k<=m/2} C(m, 2k-1) / (2k) * B_2k * b^{s+2k} / (b^{s+2k} - b)`
///
/// whose terms grow like `m!/(2 pi)^m` while the result stays `O(1/m)`.
pub fn bernoulli_moments(
    base: u32,
    s: f64,
    m_max: usize,
    opts: BernoulliOptions,
) -> Result<BernoulliMoments> {
    let all: Vec<u32> = (0..base).collect();
    let digits = DigitSet::new(base, &all)?;
    digits.check_abscissa(s)?;
    let bern = bernoulli_even(m_max / 2);
    let target = opts.precision;

    let mut values = Vec::with_capacity(m_max + 1);
    let mut diagnostics = Vec::with_capacity(m_max + 1);
    {
        let p = target.bits();
        let bs = Float::with_val(p, base).pow(Float::with_val(p, s));
        let u0 = Float::with_val(p, &bs / Float::with_val(p, &bs - base));
        diagnostics.push(CancellationDiagnostics {
            m: 0,
            max_term_magnitude: u0.clone(),
            result_magnitude: u0.clone(),
            lost_digits: 0.0,
            working_bits: p,
            precision_exhausted: false,
        });
        values.push(u0);
    }

    let mut bits = target.guarded(32).bits();
    for m in 1..=m_max {
        let (value, diag) = loop {
            let work = if opts.adaptive { bits } else { target.bits() };
            let (value, max_term) = closed_form_at(base, s, m, &bern, work);
            let lost = (log10_abs(&max_term) - log10_abs(&value)).max(0.0);
            let digits_at = |b: u32| b as f64 * std::f64::consts::LOG10_2;
            let exhausted = lost + KEPT_DIGITS > digits_at(work);
            let needed = lost + target.decimal_digits() + 5.0;
            if !opts.adaptive || needed <= digits_at(work) || work >= opts.max_bits {
                let diag = CancellationDiagnostics {
                    m,
                    result_magnitude: Float::with_val(target.bits(), value.abs_ref()),
                    max_term_magnitude: Float::with_val(target.bits(), max_term),
                    lost_digits: lost,
                    working_bits: work,
                    precision_exhausted: exhausted,
                };
                break (Float::with_val(target.bits(), value), diag);
            }
            bits = ((needed / std::f64::consts::LOG10_2).ceil() as u32 + 32).min(opts.max_bits);
        };
        values.push(value);
        diagnostics.push(diag);
    }

    Ok(BernoulliMoments {
        sequence: MomentSequence {
            digit_set: digits,
            s,
            scaling: Scaling::None,
            values,
            precision: target,
        },
        diagnostics,
    })
}

/// Evaluates the closed form at `bits` of precision; returns the value and
/// the largest term magnitude.
fn closed_form_at(
    base: u32,
    s: f64,
    m: usize,
    bern: &[rug::Rational],
    bits: u32,
) -> (Float, Float) {
    let p = bits;
    let bf = Float::with_val(p, base);
    let sf = Float::with_val(p, s);
    // b^{s+j} / (b^{s+j} - b)
    let ratio = |j: u32| {
        let x = Float::with_val(p, (&bf).pow(Float::with_val(p, &sf + j)));
        Float::with_val(p, &x / Float::with_val(p, &x - base))
    };

    let mut max_term = Float::new(p);
    let mut sum = Float::new(p);
    let mut add = |t: Float| {
        let a = Float::with_val(p, t.abs_ref());
        if a > max_term {
            max_term = a;
        }
        sum += t;
    };
    add(ratio(0) / (m as u64 + 1));
    add(-(ratio(1) / 2u32));
    let row: Vec<rug::Integer> = binomial_row(m as u64).collect();
    for k in 1..=m / 2 {
        let c = Float::with_val(p, &row[2 * k - 1]) / (2 * k) as u64;
        add(c * Float::with_val(p, &bern[k]) * ratio(2 * k as u32));
    }
    (sum, max_term)
}
