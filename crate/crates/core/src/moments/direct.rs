use rug::ops::Pow;
use rug::Float;

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::extrapolation::known_ratio_table;
use crate::numerics::{Complex, Precision};

/// How the part of the defining series beyond the last enumerated level is
/// handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// Stop at a depth whose rigorous tail bound is below tolerance.
    Certified,
    /// Eliminate the known geometric ratios `N b^{-s} b^{-i}` of the level
    /// contributions from the partial sums.
    Extrapolated,
}

#[derive(Debug, Clone, Copy)]
pub struct DirectOptions {
    /// Relative tolerance.
    pub tol: f64,
    /// Maximum number of digit words to enumerate, summed over levels.
    pub budget: u64,
    pub tail: TailMode,
    pub precision: Precision,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions {
            tol: 1e-15,
            budget: 10_000_000,
            tail: TailMode::Certified,
            precision: Precision::DEFAULT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirectValue {
    pub value: Float,
    /// Relative error: a rigorous bound when `certified`, else the
    /// difference between the last two extrapolation orders.
    pub error: f64,
    pub certified: bool,
    /// Deepest digit-word length enumerated.
    pub levels: u32,
    pub words: u64,
    /// Levels whose contribution exceeded `tol` times the total.
    pub significant_levels: u32,
}

/// `u_m(s) = 0^m + sum_{l>=1} sum_{A^l} (a_1 b^-1 + ... + a_l b^-l)^m b^{-ls}`
/// by enumeration of digit words.
pub fn moments_direct(digits: &DigitSet, s: f64, m: u32, opts: DirectOptions) -> Result<DirectValue> {
    digits.check_abscissa(s)?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let work = opts.precision.guarded(32);
    let p = work.bits();
    let n = digits.cardinality() as u64;
    let base = digits.base();
    let bf = Float::with_val(p, base);
    let rho = Float::with_val(p, n) / bf.clone().pow(Float::with_val(p, s));
    let rho_f = rho.to_f64();
    // x <= f / (b - 1) for every atom
    let sup_m = (digits.top() as f64 / (base - 1) as f64).powi(m as i32);

    let mut contributions: Vec<Float> = vec![if m == 0 {
        Float::with_val(p, 1)
    } else {
        Float::new(p)
    }];
    let mut partial = contributions[0].clone();
    let mut words_total: u64 = 0;
    let mut level_words: u64 = 1;
    let mut level: u32 = 0;

    loop {
        if matches!(opts.tail, TailMode::Certified) && level > 0 && !partial.is_zero() {
            let bound = sup_m * rho_f.powi(level as i32 + 1) / (1.0 - rho_f);
            let rel = bound / partial.to_f64();
            if rel < opts.tol {
                return Ok(finish(partial, rel, true, level, words_total, &contributions, opts.tol));
            }
        }
        let next_words = level_words.saturating_mul(n);
        if words_total.saturating_add(next_words) > opts.budget || level >= 4096 {
            break;
        }
        level += 1;
        level_words = next_words;
        words_total += level_words;
        let c = level_contribution(digits, level, m, s, work);
        partial += &c;
        contributions.push(c);
    }

    match opts.tail {
        TailMode::Certified => {
            let bound = sup_m * rho_f.powi(level as i32 + 1) / (1.0 - rho_f);
            let best = if partial.is_zero() { f64::INFINITY } else { bound / partial.to_f64() };
            Err(Error::BudgetExceeded { budget: opts.budget, best })
        }
        TailMode::Extrapolated => {
            let sums: Vec<Complex> = contributions
                .iter()
                .scan(Float::new(p), |acc, c| {
                    *acc += c;
                    Some(Complex::real(acc.clone()))
                })
                .collect();
            // the level contributions are rho^l times a polynomial of degree
            // m in b^-l, so m + 1 eliminations are exact
            let ratios: Vec<Complex> = (0..=m.min(level))
                .map(|i| Complex::real(Float::with_val(p, &rho / bf.clone().pow(i))))
                .collect();
            let est = known_ratio_table(&sums, &ratios);
            let rel = est.error / est.value.re.to_f64().abs();
            if rel < opts.tol {
                Ok(finish(est.value.re, rel, false, level, words_total, &contributions, opts.tol))
            } else {
                Err(Error::BudgetExceeded { budget: opts.budget, best: rel })
            }
        }
    }
}

fn finish(
    value: Float,
    error: f64,
    certified: bool,
    levels: u32,
    words: u64,
    contributions: &[Float],
    tol: f64,
) -> DirectValue {
    let total = value.to_f64();
    let significant_levels = contributions
        .iter()
        .filter(|c| c.to_f64() > tol * total)
        .count() as u32;
    DirectValue {
        value,
        error,
        certified,
        levels,
        words,
        significant_levels,
    }
}

/// `b^{-ls} sum_{w in A^l} x_w^m`, enumerating words depth first with the
/// running numerator `X = a_1 b^{l-1} + ... + a_l` (Horner).
fn level_contribution(digits: &DigitSet, level: u32, m: u32, s: f64, prec: Precision) -> Float {
    let p = prec.bits();
    let base = digits.base() as u64;
    let allowed: Vec<u64> = digits.allowed().iter().map(|&a| a as u64).collect();
    let mut sum = Float::new(p);

    // u64 numerators are exact while b^l fits; beyond that use floats
    let exact = (level as f64) * (base as f64).log2() < 63.0;
    let scale = Float::with_val(p, base).pow(-(level as i32));
    if exact {
        let mut stack: Vec<(u64, u32)> = vec![(0, 0)];
        while let Some((x, depth)) = stack.pop() {
            if depth == level {
                if m == 0 {
                    sum += 1u32;
                } else if x != 0 {
                    let xf = Float::with_val(p, x) * &scale;
                    sum += xf.pow(m);
                }
                continue;
            }
            for &a in &allowed {
                stack.push((x * base + a, depth + 1));
            }
        }
    } else {
        let mut stack: Vec<(Float, u32)> = vec![(Float::new(p), 0)];
        let inv_b = Float::with_val(p, 1) / base;
        while let Some((x, depth)) = stack.pop() {
            if depth == level {
                if m == 0 {
                    sum += 1u32;
                } else {
                    sum += x.pow(m);
                }
                continue;
            }
            let place = Float::with_val(p, inv_b.clone().pow(depth + 1));
            for &a in &allowed {
                stack.push((Float::with_val(p, &x + Float::with_val(p, &place * a)), depth + 1));
            }
        }
    }
    let weight = Float::with_val(p, base).pow(Float::with_val(p, -(level as f64) * s));
    sum * weight
}
