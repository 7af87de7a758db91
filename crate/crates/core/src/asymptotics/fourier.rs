use rug::Float;

use crate::digits::DigitSet;
use crate::dirichlet::{zsum, DirichletRequest, KempnerConstantsStore, Method};
use crate::error::{Error, Result};
use crate::numerics::{gamma_complex, ln_base, pi, Complex, Precision};

#[derive(Debug, Clone, Copy)]
pub struct FourierOptions {
    /// Absolute tolerance on each coefficient.
    pub tol: f64,
    pub method: Method,
    pub precision: Precision,
    pub budget: u64,
}

impl Default for FourierOptions {
    fn default() -> Self {
        FourierOptions {
            tol: 1e-12,
            method: Method::Auto,
            precision: Precision::DEFAULT,
            budget: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FourierCoefficient {
    pub k: i64,
    pub value: Complex,
    pub error: f64,
    pub certified: bool,
    pub method: Method,
}

/// `c_k = Gamma(w) Z(w) / ln b` with `w = s - 2 pi i k / ln b`.
pub fn fourier_coefficient(
    digits: &DigitSet,
    s: f64,
    k: i64,
    opts: &FourierOptions,
    store: Option<&KempnerConstantsStore>,
) -> Result<FourierCoefficient> {
    digits.check_abscissa(s)?;
    if k < 0 {
        let mut c = fourier_coefficient(digits, s, -k, opts, store)?;
        c.k = k;
        c.value = c.value.conj();
        return Ok(c);
    }
    let prec = opts.precision;
    let p = prec.bits();
    let ln_b = ln_base(digits.base(), prec);
    let t = Float::with_val(p, pi(prec) * 2u32) * k / &ln_b;
    let w = Complex::new(Float::with_val(p, s), -t);
    let g = gamma_complex(&w, prec)?;
    let g_scale = Float::with_val(p, g.abs() / &ln_b).to_f64();
    // Z only needs to be good to tol relative to the gamma factor
    let z_tol = if g_scale > 0.0 {
        (opts.tol / g_scale).min(1e300)
    } else {
        1e300
    };
    let mut req = DirichletRequest::new(digits.clone(), w, z_tol).with_method(opts.method);
    req.precision = prec;
    req.budget = opts.budget;
    let z = zsum(&req, store)?;
    let value = g.mul(&z.value).scale(&Float::with_val(p, ln_b.recip_ref()));
    Ok(FourierCoefficient {
        k,
        value,
        error: z.tail_bound * g_scale,
        certified: z.certified,
        method: z.method,
    })
}

/// `c_{-K}, ..., c_K` of the profile as a Fourier series in `log_b m`.
#[derive(Debug, Clone)]
pub struct FourierSpectrum {
    pub base: u32,
    pub s: f64,
    pub k_max: usize,
    /// `coefficients[k_max + k] = c_k`.
    pub coefficients: Vec<Complex>,
    /// Error bound (or estimate, for extrapolated `Z`) per coefficient.
    pub errors: Vec<f64>,
}

impl FourierSpectrum {
    /// Computes `c_0..c_K` and fills in `c_{-k} = conj(c_k)`. The total
    /// tolerance `opts.tol` is split evenly over the `2K + 1` coefficients.
    pub fn compute(
        digits: &DigitSet,
        s: f64,
        k_max: usize,
        opts: &FourierOptions,
        store: Option<&KempnerConstantsStore>,
    ) -> Result<Self> {
        let per = FourierOptions {
            tol: opts.tol / (2 * k_max + 1) as f64,
            ..*opts
        };
        let mut upper = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            upper.push(fourier_coefficient(digits, s, k as i64, &per, store)?);
        }
        let mut coefficients = Vec::with_capacity(2 * k_max + 1);
        let mut errors = Vec::with_capacity(2 * k_max + 1);
        for c in upper.iter().skip(1).rev() {
            coefficients.push(c.value.conj());
            errors.push(c.error);
        }
        for c in &upper {
            coefficients.push(c.value.clone());
            errors.push(c.error);
        }
        Ok(FourierSpectrum {
            base: digits.base(),
            s,
            k_max,
            coefficients,
            errors,
        })
    }

    pub fn coefficient(&self, k: i64) -> Option<&Complex> {
        let idx = k + self.k_max as i64;
        if idx < 0 {
            return None;
        }
        self.coefficients.get(idx as usize)
    }

    pub fn c0(&self) -> &Complex {
        &self.coefficients[self.k_max]
    }

    /// Rough size of the dropped terms `|k| > K`, from the decay
    /// `|c_{k+1} / c_k| ~ e^{-pi^2 / ln b}` of the gamma factor.
    pub fn truncation_estimate(&self) -> f64 {
        let last = self.coefficients.last().unwrap().abs().to_f64();
        let r = (-std::f64::consts::PI.powi(2) / (self.base as f64).ln()).exp();
        2.0 * last * r / (1.0 - r)
    }

    /// Total coefficient error, the bound for the partial Fourier sum.
    pub fn coefficient_error(&self) -> f64 {
        self.errors.iter().sum()
    }
}

/// `sum_{|k|<=K} c_k e^{2 pi i k log_b m}` including its imaginary
/// residue, which is zero up to rounding.
pub fn profile_from_fourier_complex(spec: &FourierSpectrum, m: f64) -> Result<Complex> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidArgument(format!("profile needs m > 0, got {m}")));
    }
    let p = spec.c0().prec();
    let prec = Precision::new(p)?;
    let theta = Float::with_val(p, m).ln() / ln_base(spec.base, prec) * pi(prec) * 2u32;
    let mut total = Complex::zero(prec);
    for (i, c) in spec.coefficients.iter().enumerate() {
        let k = i as i64 - spec.k_max as i64;
        let phase = Complex::new(Float::new(p), Float::with_val(p, &theta * k)).exp();
        total.add_assign(&c.mul(&phase));
    }
    Ok(total)
}

pub fn profile_from_fourier(spec: &FourierSpectrum, m: f64) -> Result<Float> {
    Ok(profile_from_fourier_complex(spec, m)?.re)
}
