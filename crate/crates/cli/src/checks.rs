use std::fmt;
use std::str::FromStr;

use rug::Float;

use digit_moments::asymptotics::{profile_from_fourier, FourierOptions, FourierSpectrum, ProfileEvaluator};
use digit_moments::dirichlet::KempnerConstantsStore;
use digit_moments::moments::{
    moments_direct, moments_recurrence, prop1_residuals, DirectOptions, Scaling, TailMode,
};
use digit_moments::{DigitSet, Error, Precision, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Periodicity,
    Prop1,
    Fourier,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "oracle" => Suite::Oracle,
            "periodicity" => Suite::Periodicity,
            "prop1" => Suite::Prop1,
            "fourier" => Suite::Fourier,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite '{other}' (oracle|periodicity|prop1|fourier)"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Oracle => "oracle",
            Suite::Periodicity => "periodicity",
            Suite::Prop1 => "prop1",
            Suite::Fourier => "fourier",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn line(name: String, pass: bool, detail: String) -> CheckLine {
    CheckLine { name, pass, detail }
}

pub fn run(suite: Suite, store: &KempnerConstantsStore) -> Result<Vec<CheckLine>> {
    match suite {
        Suite::Oracle => oracle(),
        Suite::Periodicity => periodicity(),
        Suite::Prop1 => prop1(),
        Suite::Fourier => fourier(store),
    }
}

/// Recurrence against the direct series, `b in {2, 3}`, `N <= 3`.
fn oracle() -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for b in [2u32, 3] {
        for mask in 1u32..(1 << b) {
            let a: Vec<u32> = (0..b).filter(|d| mask & (1 << d) != 0).collect();
            let Ok(d) = DigitSet::new(b, &a) else { continue };
            for s in [1.0, 2.0, 2.5] {
                if d.check_abscissa(s).is_err() {
                    continue;
                }
                let rec = moments_recurrence(&d, s, 12, Precision::DEFAULT, Scaling::None)?;
                let mut worst = 0.0f64;
                for m in 0..=12u32 {
                    let opts = DirectOptions {
                        tol: 1e-14,
                        budget: 1 << 16,
                        tail: if a.len() == 1 {
                            TailMode::Certified
                        } else {
                            TailMode::Extrapolated
                        },
                        ..Default::default()
                    };
                    let v = moments_direct(&d, s, m, opts)?;
                    let r = &rec.values[m as usize];
                    worst = worst.max((Float::with_val(192, &v.value - r) / r).to_f64().abs());
                }
                out.push(line(
                    format!("oracle b={b} A={a:?} s={s}"),
                    worst <= 1e-12,
                    format!("worst relative difference {worst:.2e} over m <= 12"),
                ));
            }
        }
    }
    Ok(out)
}

fn profile_sets() -> Vec<(DigitSet, f64)> {
    let ds = |b, a: &[u32]| DigitSet::new(b, a).unwrap();
    vec![
        (ds(3, &[0, 2]), 1.0),
        (ds(3, &[1, 2]), 1.0),
        (ds(8, &[0, 1, 3, 5]), 3.0),
        (ds(2, &[0, 1]), 2.0),
        (ds(10, &[9]), 1.0),
    ]
}

/// `F_s(b m) = F_s(m)` at 20 fixed irregular points per set.
fn periodicity() -> Result<Vec<CheckLine>> {
    let tol = 1e-12;
    let mut out = Vec::new();
    for (d, s) in profile_sets() {
        let b = d.base() as f64;
        let name = format!("periodicity b={} A={:?} s={s}", d.base(), d.allowed());
        let ev = ProfileEvaluator::new(d, s, tol)?;
        let mut worst = 0.0f64;
        for i in 0..20 {
            // golden-ratio points spread over 10..1e4
            let frac = (i as f64 * 0.618_033_988_749_895).fract();
            let m = 10.0 * 1000f64.powf(frac);
            let x = ev.value(m)?;
            let y = ev.value(b * m)?;
            worst = worst.max((Float::with_val(192, &x - &y) / &x).to_f64().abs());
        }
        out.push(line(name, worst <= 4.0 * tol, format!("worst relative change {worst:.2e}")));
    }
    Ok(out)
}

/// Residual bounds frozen from calibration runs up to `m = 10^4`.
pub const PROP1_BOUNDS: [(u32, &[u32], f64, f64); 3] = [
    (3, &[0, 2], 1.0, 4.0),
    (8, &[0, 1, 3, 5], 1.0, 2.6),
    (2, &[0, 1], 2.0, 14.5),
];

fn prop1() -> Result<Vec<CheckLine>> {
    let ms = [100usize, 200, 500, 1000, 2000];
    let mut out = Vec::new();
    for (b, a, s, bound) in PROP1_BOUNDS {
        let d = DigitSet::new(b, a)?;
        let seq = moments_recurrence(&d, s, 2000, Precision::DEFAULT, Scaling::Kappa)?;
        let r = prop1_residuals(&seq, &ms)?;
        let worst = r.iter().map(|x| x.to_f64()).fold(0.0, f64::max);
        out.push(line(
            format!("prop1 b={b} A={a:?} s={s}"),
            worst <= bound,
            format!("max m^(1+s) residual {worst:.3e}, bound {bound}"),
        ));
    }
    Ok(out)
}

/// Partial Fourier series against the direct profile, and the period
/// mean of the profile against `c_0`.
fn fourier(store: &KempnerConstantsStore) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for a in [&[0u32, 2][..], &[1, 2]] {
        let d = DigitSet::new(3, a)?;
        let opts = FourierOptions {
            tol: 1e-11,
            ..Default::default()
        };
        let spec = FourierSpectrum::compute(&d, 1.0, 12, &opts, Some(store))?;
        let ev = ProfileEvaluator::new(d, 1.0, 1e-14)?;
        let mut worst = 0.0f64;
        let mut mean = 0.0;
        let n = 256;
        for i in 0..n {
            let m = 50.0 * 3f64.powf(i as f64 / n as f64);
            let f = ev.value(m)?.to_f64();
            let g = profile_from_fourier(&spec, m)?.to_f64();
            worst = worst.max(((f - g) / f).abs());
            mean += f;
        }
        mean /= n as f64;
        let c0 = spec.c0().re.to_f64();
        let mean_rel = ((mean - c0) / c0).abs();
        out.push(line(
            format!("fourier b=3 A={a:?} s=1"),
            worst <= 1e-8 && mean_rel <= 1e-6,
            format!("series vs profile {worst:.1e}, period mean vs c_0 {mean_rel:.1e}"),
        ));
    }
    Ok(out)
}
