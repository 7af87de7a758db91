use std::fmt;
use std::ops::RangeInclusive;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::moments::MomentSequence;

/// Riemann-sum weights for averaging over one multiplicative period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// `log_b(m / (m - 1))` over `lo < m <= hi`.
    Left,
    /// `log_b(1 + 1/m)` over `lo <= m < hi`.
    #[default]
    Right,
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Left => "left",
            Weighting::Right => "right",
        })
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Weighting::Left),
            "right" => Ok(Weighting::Right),
            _ => Err(Error::InvalidArgument(format!("unknown weighting {s:?}"))),
        }
    }
}

/// The integers between `lo = floor(anchor b^p)` and
/// `hi = floor(anchor b^{p+1})`, a single period of `log_b m`.
///
/// `anchor = 1` gives the plain periods `b^p .. b^{p+1}`; other anchors
/// allow windows such as `(1250, 10000]` in base 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodWindow {
    pub base: u32,
    pub period: i32,
    pub lo: u64,
    pub hi: u64,
}

impl PeriodWindow {
    pub fn standard(base: u32, p: u32) -> Result<Self> {
        Self::anchored(base, &Rational::from(1), p as i32)
    }

    pub fn anchored(base: u32, anchor: &Rational, p: i32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base {base} < 2")));
        }
        if *anchor <= 0 {
            return Err(Error::InvalidArgument("anchor must be positive".into()));
        }
        let at = |e: i32| -> Result<u64> {
            let scale = Rational::from(Integer::from(base).pow(e.unsigned_abs()));
            let x = if e >= 0 {
                Rational::from(anchor * &scale)
            } else {
                Rational::from(anchor / &scale)
            };
            let floor = x.floor().into_numer_denom().0;
            floor
                .to_u64()
                .ok_or_else(|| Error::InvalidArgument("period window out of range".into()))
        };
        let lo = at(p)?;
        let hi = at(p + 1)?;
        if lo < 1 || hi <= lo + 1 {
            return Err(Error::InvalidArgument(format!(
                "period {p} gives the degenerate window ({lo}, {hi}]"
            )));
        }
        Ok(PeriodWindow {
            base,
            period: p,
            lo,
            hi,
        })
    }

    /// The period ending exactly at `hi`, or `back` periods before it.
    pub fn ending_at(base: u32, hi: u64, back: u32) -> Result<Self> {
        if hi < base as u64 {
            return Err(Error::InvalidArgument(format!("{hi} is below one period")));
        }
        // anchor = hi / b^P in [1, b)
        let mut top = 0u32;
        let mut power = Integer::from(1);
        while Integer::from(&power * base) <= hi {
            power *= base;
            top += 1;
        }
        let anchor = Rational::from((Integer::from(hi), power));
        Self::anchored(base, &anchor, top as i32 - 1 - back as i32)
    }

    pub fn members(&self, weighting: Weighting) -> RangeInclusive<u64> {
        match weighting {
            Weighting::Left => self.lo + 1..=self.hi,
            Weighting::Right => self.lo..=self.hi - 1,
        }
    }

    /// The window one period earlier, with the same anchor:
    /// `floor(x / b) = floor(floor(x) / b)`.
    pub fn previous(&self) -> Result<Self> {
        let lo = self.lo / self.base as u64;
        if lo < 1 || self.lo <= lo + 1 {
            return Err(Error::InvalidArgument("no earlier period".into()));
        }
        Ok(PeriodWindow {
            base: self.base,
            period: self.period - 1,
            lo,
            hi: self.lo,
        })
    }
}

impl fmt::Display for PeriodWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone)]
pub struct AverageEstimate {
    pub window: PeriodWindow,
    pub weighting: Weighting,
    /// `sum w_m v_m / sum w_m`.
    pub value: Float,
    /// `sum w_m` in units of `log_b`; `1` for exact periods.
    pub weight_sum: Float,
    pub extrapolated: Option<Float>,
}

/// Weighted average of a scaled moment sequence over one period.
pub fn average_estimate(
    seq: &MomentSequence,
    window: PeriodWindow,
    weighting: Weighting,
) -> Result<AverageEstimate> {
    if window.base != seq.digit_set.base() {
        return Err(Error::InvalidArgument(format!(
            "window base {} differs from sequence base {}",
            window.base,
            seq.digit_set.base()
        )));
    }
    let range = window.members(weighting);
    if *range.end() as usize > seq.m_max() {
        return Err(Error::PeriodNotCovered {
            lo: window.lo,
            hi: window.hi,
            m_max: seq.m_max(),
        });
    }
    let p = seq.precision.guarded(32).bits();
    let mut total = Float::new(p);
    let mut weights = Float::new(p);
    for m in range {
        let denom = match weighting {
            Weighting::Left => m - 1,
            Weighting::Right => m,
        };
        let w = Float::with_val(p, Float::with_val(p, denom).recip()).ln_1p();
        total += Float::with_val(p, &w * &seq.values[m as usize]);
        weights += w;
    }
    let value = Float::with_val(seq.precision.bits(), &total / &weights);
    let ln_b = Float::with_val(p, window.base).ln();
    Ok(AverageEstimate {
        window,
        weighting,
        value,
        weight_sum: Float::with_val(seq.precision.bits(), weights / ln_b),
        extrapolated: None,
    })
}

/// Averages over `window` and the period before it, and extrapolates.
pub fn average_with_extrapolation(
    seq: &MomentSequence,
    window: PeriodWindow,
    weighting: Weighting,
) -> Result<(AverageEstimate, AverageEstimate)> {
    let prev = average_estimate(seq, window.previous()?, weighting)?;
    let mut last = average_estimate(seq, window, weighting)?;
    last.extrapolated = Some(extrapolate_float(&prev.value, &last.value, window.base));
    Ok((prev, last))
}

/// Limit of `a_p` if the error shrinks by `1/b` per period:
/// `a_{p+1} + (a_{p+1} - a_p) / (b - 1)`.
pub fn extrapolate(a_p: f64, a_p1: f64, b: u32) -> f64 {
    a_p1 + (a_p1 - a_p) / (b as f64 - 1.0)
}

pub fn extrapolate_float(a_p: &Float, a_p1: &Float, b: u32) -> Float {
    let diff = Float::with_val(a_p1.prec(), a_p1 - a_p) / (b - 1);
    diff + a_p1
}
