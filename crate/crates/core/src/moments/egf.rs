use rug::ops::Pow;
use rug::Float;

use super::{moments_recurrence, MomentSequence, Scaling};
use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::numerics::Precision;

/// `e^{-m} E(kappa m)` where `E(t) = int e^{tx} d mu_s` is the exponential
/// generating function of the moments, via the product form
///
/// `sum_{l>=0} (prod_{k=1}^l alpha_B(-kappa m b^-k)) e^{-m b^-l} b^{-ls}`
///
/// with `alpha_B(t) = sum_{d in B} e^{dt}`. Since `0 < alpha_B <= N` on
/// `t <= 0`, the terms past level `l` are bounded by the running product
/// times `N^j b^{-(l+j)s}`; summation stops when that bound is below
/// `tol` relative to the sum.
pub fn egf_scaled(digits: &DigitSet, s: f64, m: f64, tol: f64, prec: Precision) -> Result<Float> {
    digits.check_abscissa(s)?;
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::InvalidArgument(format!("m = {m} must be finite and >= 0")));
    }
    let work = prec.guarded(16);
    let p = work.bits();
    let n = digits.cardinality() as f64;
    let base = digits.base();
    let rho = n / (base as f64).powf(s);
    let bf = Float::with_val(p, base);
    let mf = Float::with_val(p, m);
    let kappa_m = Float::with_val(p, digits.kappa()) * &mf;
    let b_neg_s = Float::with_val(p, bf.clone().pow(Float::with_val(p, -s)));

    let mut sum = Float::with_val(p, -&mf).exp();
    let mut prod = Float::with_val(p, 1);
    let mut weight = Float::with_val(p, 1); // b^{-ls}
    let mut shrink = Float::with_val(p, 1); // b^{-l}
    for _level in 1..100_000u32 {
        shrink /= base;
        weight *= &b_neg_s;
        prod *= alpha(digits.complement(), &Float::with_val(p, &kappa_m * &shrink));
        let decay = Float::with_val(p, -Float::with_val(p, &mf * &shrink)).exp();
        sum += Float::with_val(p, &prod * &weight) * decay;
        let tail = Float::with_val(p, &prod * &weight).to_f64() * rho / (1.0 - rho);
        if tail < tol * sum.to_f64() {
            return Ok(Float::with_val(prec.bits(), sum));
        }
    }
    Err(Error::PrecisionExhausted("generating-function series did not converge".into()))
}

/// `alpha_B(-t) = sum_{d in B} e^{-dt}`.
fn alpha(b_digits: &[u32], t: &Float) -> Float {
    let p = t.prec();
    let e = Float::with_val(p, -t).exp();
    let mut total = Float::new(p);
    for &d in b_digits {
        total += Float::with_val(p, (&e).pow(d));
    }
    total
}

/// `m^{1+s} |kappa^m u_m - e^{-m} E(kappa m)|` for each requested `m`,
/// from a sequence computed with [`Scaling::Kappa`].
pub fn prop1_residuals(seq: &MomentSequence, ms: &[usize]) -> Result<Vec<Float>> {
    if seq.scaling != Scaling::Kappa {
        return Err(Error::InvalidArgument(
            "residuals need a kappa-scaled moment sequence".into(),
        ));
    }
    let prec = seq.precision;
    let p = prec.bits();
    let tol = prec.tolerance();
    ms.iter()
        .map(|&m| {
            let v = seq.get(m).ok_or(Error::PeriodNotCovered {
                lo: m as u64,
                hi: m as u64,
                m_max: seq.m_max(),
            })?;
            let e = egf_scaled(&seq.digit_set, seq.s, m as f64, tol, prec)?;
            let diff = Float::with_val(p, v - &e).abs();
            let scale = Float::with_val(p, m).pow(Float::with_val(p, 1.0 + seq.s));
            Ok(diff * scale)
        })
        .collect()
}

/// Single-`m` form of [`prop1_residuals`], running the recurrence up to `m`.
pub fn prop1_residual(digits: &DigitSet, s: f64, m: usize, prec: Precision) -> Result<Float> {
    if m == 0 {
        return Err(Error::InvalidArgument("residual needs m >= 1".into()));
    }
    let seq = moments_recurrence(digits, s, m, prec, Scaling::Kappa)?;
    Ok(prop1_residuals(&seq, &[m])?.pop().unwrap())
}
