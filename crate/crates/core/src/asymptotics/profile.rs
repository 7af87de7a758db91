use rug::ops::Pow;
use rug::Float;

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::numerics::Precision;

/// Evaluates the periodic profile
///
/// `F_s(m) = m^s sum_j b^{js} sum_{n in B*} e^{-(kappa n + 1) b^j m}`
///
/// with the inner sum taken in product form,
/// `sum_{n in B*} e^{-n t} = gamma_B(t) = prod_{i>=0} alpha_B(-b^i t)`,
/// so that running down in `j` each level costs one `alpha_B`.
#[derive(Debug, Clone)]
pub struct ProfileEvaluator {
    pub digit_set: DigitSet,
    pub s: f64,
    /// Relative truncation tolerance.
    pub tol: f64,
    pub precision: Precision,
}

impl ProfileEvaluator {
    pub fn new(digit_set: DigitSet, s: f64, tol: f64) -> Result<Self> {
        digit_set.check_abscissa(s)?;
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(ProfileEvaluator {
            digit_set,
            s,
            tol,
            precision: Precision::DEFAULT,
        })
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn value(&self, m: f64) -> Result<Float> {
        Ok(self.evaluate(m, 0)?.0)
    }

    /// The `j` range used at `m`, inclusive.
    pub fn j_range(&self, m: f64) -> Result<(i64, i64)> {
        Ok(self.evaluate(m, 0)?.1)
    }

    /// Same as [`value`](Self::value) with the `j` range widened by
    /// `extra` on both sides.
    pub fn value_widened(&self, m: f64, extra: u32) -> Result<Float> {
        Ok(self.evaluate(m, extra as i64)?.0)
    }

    fn evaluate(&self, m: f64, extra: i64) -> Result<(Float, (i64, i64))> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidArgument(format!("profile needs m > 0, got {m}")));
        }
        let d = &self.digit_set;
        let work = self.precision.guarded(32);
        let p = work.bits();
        let b = d.base() as f64;
        let s = self.s;
        let s0 = d.s0();
        let n = d.cardinality() as f64;
        let kappa = d.kappa().to_f64();

        // top: (b^j m)^s e^{-b^j m} below 2^{-p-20}
        let cut = (p as f64 + 20.0) * std::f64::consts::LN_2;
        let mut j_hi = ((cut / m).ln() / b.ln()).ceil() as i64;
        while {
            let x = b.powi(j_hi as i32) * m;
            x - s * x.ln().max(0.0) < cut
        } {
            j_hi += 1;
        }
        j_hi += extra;

        // gamma_B(1) <= prod (1 + (N-1) e^{-b^i})
        let mut c = 1.0;
        let mut u = 1.0f64;
        while (-u).exp() > 1e-18 {
            c *= 1.0 + (n - 1.0) * (-u).exp();
            u *= b;
        }
        let lower_factor = c * n * kappa.powf(-s0) / (1.0 - b.powf(-(s - s0)));

        let bf = Float::with_val(p, d.base());
        let kf = Float::with_val(p, d.kappa());
        let sf = Float::with_val(p, s);
        let mut x = Float::with_val(p, m) * Float::with_val(p, (&bf).pow(j_hi as i32));
        let mut gamma = Float::with_val(p, 1);
        let mut sum = Float::new(p);
        let mut j = j_hi;
        let mut stop_after: Option<i64> = None;
        loop {
            let t = Float::with_val(p, &x * &kf);
            gamma *= alpha(d.complement(), &t);
            let decay = Float::with_val(p, -&x).exp();
            sum += Float::with_val(p, (&x).pow(&sf)) * decay * &gamma;
            if let Some(last) = stop_after {
                if j <= last {
                    break;
                }
            } else if t < 1 {
                // bound on sum_{j' < j} of the remaining terms
                let x_next = x.to_f64() / b;
                let bound = lower_factor * x_next.powf(s - s0);
                if bound < self.tol * sum.to_f64() / 4.0 {
                    if extra == 0 {
                        break;
                    }
                    stop_after = Some(j - extra);
                }
            }
            if j < j_hi - 100_000 {
                return Err(Error::PrecisionExhausted("profile sum did not converge".into()));
            }
            x /= &bf;
            j -= 1;
        }
        Ok((Float::with_val(self.precision.bits(), sum), (j, j_hi)))
    }
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

pub fn profile_value(ev: &ProfileEvaluator, m: f64) -> Result<Float> {
    ev.value(m)
}
