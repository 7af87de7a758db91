//! Richardson-type elimination of error terms with known geometric ratios.
//!
//! If partial sums behave like `T_L = T + sum_i c_i r_i^L` with the `r_i`
//! known, each step `T'_L = (T_{L+1} - r_i T_L) / (1 - r_i)` removes one
//! term exactly. Sums over digit-length levels of the missing-digit series
//! have this shape with `r_i = N b^{-w} b^{-i}`.

use rug::Float;

use crate::numerics::Complex;

#[derive(Debug, Clone)]
pub struct Estimate {
    pub value: Complex,
    /// `|T^(k) - T^(k-1)|` at the last index, for the selected order `k`.
    pub error: f64,
    /// Number of ratios eliminated.
    pub order: usize,
}

/// Runs the elimination over `sums` (consecutive partial sums, oldest
/// first) with `ratios` applied in order, and returns the order whose last
/// two entries agree best. If `T_L = T + c r^L` the last difference
/// understates `|T_L - T|` by `|r / (1 - r)|`, so the difference is scaled
/// by that factor for the next ratio not yet eliminated.
pub fn known_ratio_table(sums: &[Complex], ratios: &[Complex]) -> Estimate {
    assert!(!sums.is_empty());
    let one_minus = |r: &Complex| {
        let mut x = r.clone();
        x.re = -x.re;
        x.im = -x.im;
        x.re += 1u32;
        x
    };
    let column_error = |t: &[Complex], k: usize| -> f64 {
        if t.len() < 2 {
            return f64::INFINITY;
        }
        let diff = t[t.len() - 1].sub(&t[t.len() - 2]).abs().to_f64();
        let factor = ratios
            .get(k)
            .map(|r| (r.abs().to_f64() / one_minus(r).abs().to_f64()).max(1.0))
            .unwrap_or(1.0);
        diff * factor
    };
    let mut table: Vec<Complex> = sums.to_vec();
    let mut best = Estimate {
        value: table.last().unwrap().clone(),
        error: column_error(&table, 0),
        order: 0,
    };
    for (k, r) in ratios.iter().enumerate() {
        if table.len() < 2 {
            break;
        }
        let inv = one_minus(r).recip();
        table = table
            .windows(2)
            .map(|w| w[1].sub(&r.mul(&w[0])).mul(&inv))
            .collect();
        let err = column_error(&table, k + 1);
        if err <= best.error {
            best = Estimate {
                value: table.last().unwrap().clone(),
                error: err,
                order: k + 1,
            };
        }
    }
    best
}

/// Real convenience wrapper.
pub fn known_ratio_limit(sums: &[Float], ratios: &[Float]) -> (Float, f64) {
    let s: Vec<Complex> = sums.iter().cloned().map(Complex::real).collect();
    let r: Vec<Complex> = ratios.iter().cloned().map(Complex::real).collect();
    let est = known_ratio_table(&s, &r);
    (est.value.re, est.error)
}
