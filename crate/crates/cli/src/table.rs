use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use digit_moments::asymptotics::{profile_from_fourier, FourierOptions, FourierSpectrum, ProfileEvaluator};
use digit_moments::dirichlet::KempnerConstantsStore;
use digit_moments::moments::{moments_recurrence, Scaling};
use digit_moments::numerics::log_base;
use digit_moments::{DigitSet, Precision, Result};

pub const CSV_HEADER: &str = "m,logb_m,scaled_moment,profile,fourier_profile,residual";

#[derive(Debug, Clone)]
pub struct TableSpec {
    pub digit_set: DigitSet,
    pub s: f64,
    pub scaling: Scaling,
    pub m_lo: u64,
    pub m_hi: u64,
    pub precision: Precision,
    pub with_profile: bool,
    /// Fourier terms `|k| <= fourier_terms`; ignored without profile.
    pub fourier_terms: usize,
    /// Keep every `stride`-th `m` counted from `m_lo`.
    pub stride: u64,
    /// If set, about this many log-spaced `m` per period instead.
    pub per_period: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub m: u64,
    pub scaled: Float,
    pub profile: Option<Float>,
    pub fourier: Option<Float>,
}

impl TableSpec {
    pub fn sample(&self) -> Vec<u64> {
        match self.per_period {
            None => (self.m_lo..=self.m_hi).step_by(self.stride.max(1) as usize).collect(),
            Some(n) => {
                let b = self.digit_set.base() as f64;
                let start = (self.m_lo.max(1) as f64).log(b);
                let end = (self.m_hi as f64).log(b);
                let steps = ((end - start) * n as f64).ceil().max(0.0) as u64;
                let mut out = vec![self.m_lo];
                for i in 1..=steps {
                    let x = start + (end - start) * i as f64 / steps as f64;
                    let m = (b.powf(x).round() as u64).clamp(self.m_lo, self.m_hi);
                    if m > *out.last().unwrap() {
                        out.push(m);
                    }
                }
                out
            }
        }
    }
}

pub fn compute_rows(spec: &TableSpec, store: &KempnerConstantsStore) -> Result<Vec<Row>> {
    let d = &spec.digit_set;
    let seq = moments_recurrence(d, spec.s, spec.m_hi as usize, spec.precision, spec.scaling)?;
    let ms = spec.sample();
    if !spec.with_profile {
        return Ok(ms
            .into_iter()
            .map(|m| Row {
                m,
                scaled: seq.values[m as usize].clone(),
                profile: None,
                fourier: None,
            })
            .collect());
    }

    let tol = spec.precision.tolerance().max(1e-30);
    let ev = ProfileEvaluator::new(d.clone(), spec.s, tol)?.with_precision(spec.precision);
    let spectrum = if spec.fourier_terms > 0 {
        let opts = FourierOptions {
            tol: 1e-10,
            precision: spec.precision,
            ..Default::default()
        };
        Some(FourierSpectrum::compute(d, spec.s, spec.fourier_terms, &opts, Some(store))?)
    } else {
        None
    };
    let p = spec.precision.bits();
    let kappa = Float::with_val(p, d.kappa());

    ms.par_iter()
        .map(|&m| {
            let scaled = seq.values[m as usize].clone();
            if m == 0 {
                return Ok(Row {
                    m,
                    scaled,
                    profile: None,
                    fourier: None,
                });
            }
            let mut factor = spec.scaling.profile_correction(m, spec.s, spec.precision);
            if spec.scaling == Scaling::None {
                factor /= kappa.clone().pow(m);
            }
            let profile = Float::with_val(p, ev.value(m as f64)? * &factor);
            let fourier = match &spectrum {
                Some(sp) => Some(Float::with_val(p, profile_from_fourier(sp, m as f64)? * &factor)),
                None => None,
            };
            Ok(Row {
                m,
                scaled,
                profile: Some(profile),
                fourier,
            })
        })
        .collect()
}

/// 17 significant decimal digits; MPFR picks fixed or exponent form.
pub fn fmt17(x: &Float) -> String {
    x.to_string_radix(10, Some(17))
}

pub fn write_csv<W: Write>(out: &mut W, base: u32, rows: &[Row]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let x = if r.m == 0 {
            String::new()
        } else {
            fmt17(&log_base(&Float::with_val(r.scaled.prec(), r.m), base))
        };
        let opt = |v: &Option<Float>| v.as_ref().map(fmt17).unwrap_or_default();
        let residual = r
            .profile
            .as_ref()
            .map(|f| fmt17(&Float::with_val(r.scaled.prec(), &r.scaled - f)))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.m,
            x,
            fmt17(&r.scaled),
            opt(&r.profile),
            opt(&r.fourier),
            residual
        )?;
    }
    Ok(())
}

/// A gnuplot script plotting `csv` (by file name, so the pair can be
/// moved together) to a PNG of the same stem.
pub fn gnuplot_script(csv: &Path, base: u32, ylabel: &str, with_profile: bool) -> String {
    let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = csv.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set terminal pngcairo size 1200,700\n");
    s.push_str(&format!("set output '{stem}.png'\n"));
    s.push_str(&format!("set xlabel 'log_{{{base}}}(m)'\n"));
    s.push_str(&format!("set ylabel '{ylabel}'\n"));
    s.push_str("set key top right\n");
    s.push_str(&format!("plot '{name}' every ::1 using 2:3 with dots title 'scaled moment'"));
    if with_profile {
        s.push_str(", \\\n     '' every ::1 using 2:4 with lines title 'profile'");
    }
    s.push('\n');
    s
}
