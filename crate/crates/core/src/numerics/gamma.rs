use rug::Float;

use super::bernoulli::bernoulli_even;
use super::{pi, Complex, Precision};
use crate::error::{Error, Result};

/// `Gamma(z)` for `Re z > 0`.
///
/// The argument is shifted right until `|z + n|` is large enough for the
/// Stirling series to reach the working precision, then
/// `Gamma(z) = exp(ln Gamma(z + n)) / (z (z+1) ... (z+n-1))`.
pub fn gamma_complex(z: &Complex, prec: Precision) -> Result<Complex> {
    let work = working_precision(z, prec);
    let zw = Complex::new(
        Float::with_val(work.bits(), &z.re),
        Float::with_val(work.bits(), &z.im),
    );
    let (shifted, n) = shift(&zw, work)?;
    let mut value = stirling_ln_gamma(&shifted, work).exp();
    if n > 0 {
        let mut prod = zw.clone();
        let mut term = zw.clone();
        for _ in 1..n {
            term.re += 1;
            prod = prod.mul(&term);
        }
        value = value.div(&prod);
    }
    Ok(round_to(value, prec))
}

/// Principal-branch-free `ln Gamma(z)` on `Re z > 0`: the imaginary part is
/// the continuous logarithm obtained from the Stirling series, not reduced
/// modulo `2 pi`.
pub fn ln_gamma_complex(z: &Complex, prec: Precision) -> Result<Complex> {
    let work = working_precision(z, prec);
    let zw = Complex::new(
        Float::with_val(work.bits(), &z.re),
        Float::with_val(work.bits(), &z.im),
    );
    let (shifted, n) = shift(&zw, work)?;
    let mut value = stirling_ln_gamma(&shifted, work);
    let mut term = zw;
    for _ in 0..n {
        value = value.sub(&term.ln());
        term.re += 1;
    }
    Ok(round_to(value, prec))
}

fn working_precision(z: &Complex, prec: Precision) -> Precision {
    // exp() of a logarithm of size |z| log |z| loses about log2 of that
    let size = z.abs().to_f64().max(2.0);
    let lost = (size * size.ln()).log2().ceil().max(0.0) as u32;
    prec.guarded(32 + lost)
}

/// Radius beyond which Stirling's series reaches `2^-bits`.
fn stirling_radius(prec: Precision) -> f64 {
    // error of the optimally truncated series ~ exp(-2 pi |z|)
    prec.bits() as f64 * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI) + 4.0
}

fn shift(z: &Complex, prec: Precision) -> Result<(Complex, u64)> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Pole("non-finite argument".into()));
    }
    if z.re <= 0 {
        return Err(Error::Pole(format!(
            "Re z = {} <= 0 is outside the supported half-plane",
            z.re.to_f64()
        )));
    }
    let radius = stirling_radius(prec);
    let re = z.re.to_f64();
    let im = z.im.to_f64();
    let n = if re * re + im * im >= radius * radius {
        0
    } else {
        let need = (radius * radius - im * im).max(0.0).sqrt();
        (need - re).ceil().max(0.0) as u64
    };
    let mut shifted = z.clone();
    shifted.re += n;
    Ok((shifted, n))
}

fn stirling_ln_gamma(z: &Complex, prec: Precision) -> Complex {
    let p = prec.bits();
    let half = Float::with_val(p, 0.5);
    let ln_z = z.ln();
    let mut z_minus_half = z.clone();
    z_minus_half.re -= &half;
    let mut value = z_minus_half.mul(&ln_z).sub(z);
    let ln_two_pi = Float::with_val(p, pi(prec) * 2u32).ln() * &half;
    value.re += &ln_two_pi;

    let inv = z.recip();
    let inv_sq = inv.mul(&inv);
    let mut power = inv; // z^{-(2k-1)}
    let eps = Float::with_val(p, Float::i_exp(1, -(p as i32) - 8));
    let mut k_max = 16;
    loop {
        let bern = bernoulli_even(k_max);
        let mut converged = false;
        for k in 1..=k_max {
            let denom = (2 * k * (2 * k - 1)) as u64;
            let coeff = Float::with_val(p, &bern[k]) / denom;
            let term = power.scale(&coeff);
            let small = term.abs() < eps;
            value.add_assign(&term);
            if small {
                converged = true;
                break;
            }
            power = power.mul(&inv_sq);
        }
        if converged || k_max > 4 * p as usize {
            return value;
        }
        // not converged yet: restart with more coefficients
        value = z_minus_half.mul(&ln_z).sub(z);
        value.re += &ln_two_pi;
        power = z.recip();
        k_max *= 2;
    }
}

fn round_to(z: Complex, prec: Precision) -> Complex {
    Complex::new(
        Float::with_val(prec.bits(), z.re),
        Float::with_val(prec.bits(), z.im),
    )
}
