use std::fmt;

use rug::Float;

use super::Precision;

/// A complex number with MPFR real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Self {
        Complex {
            re: Float::with_val(prec.bits(), re),
            im: Float::with_val(prec.bits(), im),
        }
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn zero(prec: Precision) -> Self {
        Complex::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: Precision) -> Self {
        Complex::from_f64(prec, 1.0, 0.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }

    pub fn add_assign(&mut self, o: &Complex) {
        self.re += &o.re;
        self.im += &o.im;
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Complex::new(re, im)
    }

    pub fn scale(&self, k: &Float) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re * k), Float::with_val(p, &self.im * k))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn recip(&self) -> Complex {
        let n = self.norm_sqr();
        Complex::new(
            Float::with_val(self.prec(), &self.re / &n),
            -Float::with_val(self.prec(), &self.im / &n),
        )
    }

    pub fn div(&self, o: &Complex) -> Complex {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Complex {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (sin, cos) = self.im.clone().sin_cos(Float::new(p));
        Complex::new(Float::with_val(p, &r * &cos), r * sin)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Complex {
        let p = self.prec();
        let modulus = self.abs();
        Complex::new(modulus.ln(), Float::with_val(p, self.im.atan2_ref(&self.re)))
    }

    /// `x^(-w)` for real `x > 0`, as `exp(-w ln x)`.
    pub fn real_pow_neg(x: &Float, w: &Complex) -> Complex {
        let lx = Float::with_val(w.prec(), x.ln_ref());
        Complex::new(-Float::with_val(w.prec(), &w.re * &lx), -(lx * &w.im)).exp()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im < 0.0 {
            write!(f, "{re:.16e} - {:.16e}i", -im)
        } else {
            write!(f, "{re:.16e} + {im:.16e}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_ln_roundtrip() {
        let p = Precision::DEFAULT;
        let z = Complex::from_f64(p, 0.75, -2.5);
        let back = z.ln().exp();
        let err = back.sub(&z).abs().to_f64();
        assert!(err < 1e-50, "{err}");
    }

    #[test]
    fn division() {
        let p = Precision::DEFAULT;
        let a = Complex::from_f64(p, 1.0, 2.0);
        let b = Complex::from_f64(p, 3.0, -4.0);
        let q = a.div(&b);
        // (1+2i)/(3-4i) = (-5+10i)/25
        assert!((q.re.to_f64() + 0.2).abs() < 1e-15);
        assert!((q.im.to_f64() - 0.4).abs() < 1e-15);
    }
}
