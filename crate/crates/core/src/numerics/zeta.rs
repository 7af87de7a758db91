use rug::ops::Pow;
use rug::Float;

use super::bernoulli::bernoulli_even;
use super::Precision;
use crate::error::{Error, Result};

/// Riemann `zeta(s)` for real `s > 1` by Euler-Maclaurin summation.
pub fn zeta_real(s: f64, prec: Precision) -> Result<Float> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta needs s > 1, got {s}")));
    }
    let work = prec.guarded(24);
    let p = work.bits();
    let sf = Float::with_val(p, s);
    let n_head = (p / 3 + 10) as u64;

    let mut sum = Float::with_val(p, 0);
    for n in 1..n_head {
        sum += Float::with_val(p, n).pow(-sf.clone());
    }
    let n = Float::with_val(p, n_head);
    let n_pow = Float::with_val(p, (&n).pow(-sf.clone()));
    // integral tail and half endpoint term
    sum += Float::with_val(p, &n_pow * &n) / Float::with_val(p, &sf - 1u32);
    sum += Float::with_val(p, &n_pow / 2u32);

    // sum_k B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^{-s-2k+1}
    let eps = Float::with_val(p, Float::i_exp(1, -(p as i32)));
    let inv_n_sq = Float::with_val(p, 1) / Float::with_val(p, n.square_ref());
    let mut rising = sf.clone(); // s (s+1) ... (s+2k-2)
    let mut fact = Float::with_val(p, 2); // (2k)!
    let mut power = Float::with_val(p, &n_pow / &n); // N^{-s-2k+1}
    let k_max = n_head as usize;
    let bern = bernoulli_even(k_max);
    for k in 1..=k_max {
        let term = Float::with_val(p, &bern[k]) * &rising / &fact * &power;
        let small = Float::with_val(p, term.abs_ref()) < Float::with_val(p, &eps * &sum);
        sum += &term;
        if small {
            break;
        }
        let kk = 2 * k as u64;
        rising *= Float::with_val(p, &sf + (kk - 1));
        rising *= Float::with_val(p, &sf + kk);
        fact *= (kk + 1) * (kk + 2);
        power *= &inv_n_sq;
    }
    Ok(Float::with_val(prec.bits(), sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::pi;

    #[test]
    fn even_values() {
        let p = Precision::DEFAULT;
        let z2 = zeta_real(2.0, p).unwrap();
        let want = Float::with_val(p.bits(), pi(p).square_ref()) / 6u32;
        assert!(((z2 - &want) / want).to_f64().abs() < 1e-55);
        let z4 = zeta_real(4.0, p).unwrap();
        let want = Float::with_val(p.bits(), pi(p).pow(4u32)) / 90u32;
        assert!(((z4 - &want) / want).to_f64().abs() < 1e-55);
    }

    #[test]
    fn apery() {
        let z3 = zeta_real(3.0, Precision::DEFAULT).unwrap();
        // 1.2020569031595942853997381615114499907649862923405...
        let want = Float::with_val(
            192,
            Float::parse("1.2020569031595942853997381615114499907649862923405").unwrap(),
        );
        assert!(((z3 - &want) / want).to_f64().abs() < 1e-48);
    }

    #[test]
    fn rejects_pole_side() {
        assert!(zeta_real(1.0, Precision::DEFAULT).is_err());
        assert!(zeta_real(0.5, Precision::DEFAULT).is_err());
        assert!(zeta_real(f64::NAN, Precision::DEFAULT).is_err());
    }
}
