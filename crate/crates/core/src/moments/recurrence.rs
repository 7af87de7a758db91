use rug::ops::Pow;
use rug::{Float, Integer};

use super::{MomentSequence, Scaling};
use crate::digits::DigitSet;
use crate::error::Result;
use crate::numerics::Precision;

/// Moments by the recurrence
/// `u_m = (b^{m+s} - N)^{-1} sum_{j=1}^m C(m, j) (sum_a a^j) u_{m-j}`.
///
/// The recurrence is run on `y_m = kappa^m u_m / m!` (or `u_m / m!`
/// without `kappa`), which turns the binomial convolution into a plain
/// one with weights `q_j = sum_a (kappa a)^j / j!`. Every term is positive,
/// so only rounding of the individual products enters the result.
pub fn moments_recurrence(
    digits: &DigitSet,
    s: f64,
    m_max: usize,
    prec: Precision,
    scaling: Scaling,
) -> Result<MomentSequence> {
    digits.check_abscissa(s)?;
    let guard = 16 + usize::BITS - m_max.leading_zeros();
    let work = prec.guarded(guard);
    let p = work.bits();
    let n = digits.cardinality() as u32;
    let base = digits.base();

    let q = convolution_weights(digits, m_max, work, scaling.uses_kappa());
    let q_exp: Vec<i64> = q.iter().map(exp_of).collect();

    let bs = Float::with_val(p, base).pow(Float::with_val(p, s));
    let mut y: Vec<Float> = Vec::with_capacity(m_max + 1);
    let mut y_exp: Vec<i64> = Vec::with_capacity(m_max + 1);
    y.push(Float::with_val(p, &bs / Float::with_val(p, &bs - n)));
    y_exp.push(exp_of(&y[0]));

    // Terms more than `cutoff` binary orders below the largest one cannot
    // affect the working-precision sum.
    let cutoff = p as i64 + 8 + (usize::BITS - m_max.leading_zeros()) as i64;
    let mut acc = Float::new(p);
    for m in 1..=m_max {
        let top = (1..=m)
            .map(|j| q_exp[j] + y_exp[m - j])
            .max()
            .unwrap();
        acc.assign_zero();
        for j in 1..=m {
            if q_exp[j] + y_exp[m - j] >= top - cutoff {
                acc += &q[j] * &y[m - j];
            }
        }
        let denom = Float::with_val(p, base).pow(m as u32) * &bs - n;
        let next = Float::with_val(p, &acc / &denom);
        y_exp.push(exp_of(&next));
        y.push(next);
    }

    let sf = Float::with_val(p, s);
    let mut fact = Float::with_val(p, 1);
    let mut poch = Float::with_val(p, 1);
    let mut values = Vec::with_capacity(m_max + 1);
    for (m, ym) in y.into_iter().enumerate() {
        if m > 0 {
            fact *= m as u64;
            if scaling == Scaling::KappaPochhammer {
                poch *= Float::with_val(p, &sf + m as u64);
                poch /= m as u64;
            }
        }
        let mut v = ym * &fact;
        match scaling {
            Scaling::None | Scaling::Kappa => {}
            Scaling::KappaLinear => v *= (m + 1) as u64,
            Scaling::KappaPochhammer => v *= &poch,
            Scaling::KappaPower => {
                if m == 0 {
                    v.assign_zero();
                } else {
                    v *= Float::with_val(p, m as u64).pow(&sf);
                }
            }
        }
        values.push(Float::with_val(prec.bits(), v));
    }
    Ok(MomentSequence {
        digit_set: digits.clone(),
        s,
        scaling,
        values,
        precision: prec,
    })
}

/// `q_j = sum_a (kappa a)^j / j!`, `j = 0..=m_max`, each from exact integers.
fn convolution_weights(
    digits: &DigitSet,
    m_max: usize,
    prec: Precision,
    with_kappa: bool,
) -> Vec<Float> {
    let p = prec.bits();
    let (mult, den_step) = if with_kappa {
        // kappa a = a (b - 1) / f
        (digits.base() - 1, digits.top())
    } else {
        (1, 1)
    };
    let mut powers: Vec<Integer> = digits.allowed().iter().map(|_| Integer::from(1)).collect();
    let mut den = Integer::from(1);
    let mut fact = Float::with_val(p, 1);
    let mut q = Vec::with_capacity(m_max + 1);
    q.push(Float::with_val(p, digits.cardinality()));
    for j in 1..=m_max {
        let mut num = Integer::new();
        for (pw, &a) in powers.iter_mut().zip(digits.allowed()) {
            *pw *= a * mult;
            num += &*pw;
        }
        den *= den_step;
        fact *= j as u64;
        let mut w = Float::with_val(p, &num);
        if den_step != 1 {
            w /= Float::with_val(p, &den);
        }
        q.push(w / &fact);
    }
    q
}

fn exp_of(x: &Float) -> i64 {
    x.get_exp().map(i64::from).unwrap_or(i64::MIN / 4)
}

trait AssignZero {
    fn assign_zero(&mut self);
}

impl AssignZero for Float {
    fn assign_zero(&mut self) {
        use rug::Assign;
        self.assign(0);
    }
}
