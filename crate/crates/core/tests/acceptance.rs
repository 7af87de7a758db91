//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rug::ops::Pow;
use rug::Float;

use digit_moments::asymptotics::{
    average_estimate, average_with_extrapolation, extrapolate, fourier_coefficient,
    profile_from_fourier, FourierOptions, FourierSpectrum, PeriodWindow, ProfileEvaluator,
    Weighting,
};
use digit_moments::dirichlet::{
    zsum_enumerate, zsum_telescope, DirichletRequest, KempnerConstantsStore,
};
use digit_moments::moments::{
    bernoulli_moments, moments_direct, moments_recurrence, prop1_residuals, BernoulliOptions,
    DirectOptions, Scaling, TailMode,
};
use digit_moments::numerics::zeta_real;
use digit_moments::{DigitSet, Precision};

type Outcome = Result<String, String>;

fn ds(b: u32, a: &[u32]) -> DigitSet {
    DigitSet::new(b, a).unwrap()
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn mass_identity() -> Outcome {
    let mut count = 0;
    for b in 2u32..=10 {
        let sets: Vec<Vec<u32>> = vec![vec![b - 1], vec![0, b - 1], (0..b).collect(), (1..b).collect()];
        for a in sets {
            let d = match DigitSet::new(b, &a) {
                Ok(d) => d,
                Err(_) => continue,
            };
            for s in [1.0, 1.5, 2.0, 3.0] {
                if d.check_abscissa(s).is_err() {
                    continue;
                }
                let prec = Precision::DEFAULT;
                let seq = moments_recurrence(&d, s, 0, prec, Scaling::None).map_err(e)?;
                let p = prec.bits();
                let bs = Float::with_val(p, b).pow(Float::with_val(p, s));
                let want = Float::with_val(p, &bs / Float::with_val(p, &bs - a.len() as u32));
                // exact up to the final rounding
                let rel = Float::with_val(p, &seq.values[0] - &want) / &want;
                if rel.to_f64().abs() > 2f64.powi(1 - p as i32) {
                    return Err(format!("b={b} A={a:?} s={s}: {} != {}", seq.values[0], want));
                }
                count += 1;
            }
        }
    }
    let no9 = moments_recurrence(&ds(10, &[0, 1, 2, 3, 4, 5, 6, 7, 8]), 1.0, 0, Precision::DEFAULT, Scaling::None)
        .map_err(e)?;
    check(no9.values[0] == 10, format!("{count} (b, A, s) cases exact, no-9 u_0 = {}", no9.values[0].to_f64()))
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for b in [2u32, 3] {
        for mask in 1u32..(1 << b) {
            let a: Vec<u32> = (0..b).filter(|d| mask & (1 << d) != 0).collect();
            if a.len() > 3 {
                continue;
            }
            let Ok(d) = DigitSet::new(b, &a) else { continue };
            for s in [1.0, 2.0, 2.5] {
                if d.check_abscissa(s).is_err() {
                    continue;
                }
                let rec = moments_recurrence(&d, s, 25, Precision::DEFAULT, Scaling::None).map_err(e)?;
                for m in 0..=25u32 {
                    // a certified tail is only affordable with one word per level
                    let tail = if a.len() == 1 {
                        TailMode::Certified
                    } else {
                        TailMode::Extrapolated
                    };
                    let opts = DirectOptions {
                        tol: 1e-14,
                        budget: 1 << 16,
                        tail,
                        ..Default::default()
                    };
                    let v = moments_direct(&d, s, m, opts)
                        .map_err(|err| format!("b={b} A={a:?} s={s} m={m}: {err}"))?;
                    let r = &rec.values[m as usize];
                    let rel = Float::with_val(192, &v.value - r) / r;
                    worst = worst.max(rel.to_f64().abs());
                    cases += 1;
                }
            }
        }
    }
    check(worst <= 1e-12, format!("{cases} moments, worst relative difference {worst:.2e}"))
}

fn cantor_set_average(store: &KempnerConstantsStore) -> Outcome {
    let d = ds(3, &[0, 2]);
    let opts = FourierOptions {
        tol: 1e-12,
        ..Default::default()
    };
    let c0 = fourier_coefficient(&d, 1.0, 0, &opts, Some(store)).map_err(e)?;
    let c0 = c0.value.re.to_f64();
    let seq = moments_recurrence(&d, 1.0, 27000, Precision::FIGURE, Scaling::KappaLinear).map_err(e)?;
    let w = PeriodWindow::ending_at(3, 27000, 0).map_err(e)?;
    let avg = average_estimate(&seq, w, Weighting::Left).map_err(e)?.value.to_f64();
    let ok = (c0 - 1.93541061).abs() < 5e-8 && (avg - c0).abs() < 2e-5;
    check(ok, format!("c_0 = {c0:.10}, average over {w} = {avg:.8}"))
}

fn one_two_set_average(store: &KempnerConstantsStore) -> Outcome {
    let d = ds(3, &[1, 2]);
    let z = zsum_telescope(&d, store, 1e-10, Precision::DEFAULT).map_err(e)?;
    let z = z.value.re.to_f64();
    let seq = moments_recurrence(&d, 1.0, 9000, Precision::FIGURE, Scaling::KappaLinear).map_err(e)?;
    let w = PeriodWindow::ending_at(3, 9000, 0).map_err(e)?;
    let (_, last) = average_with_extrapolation(&seq, w, Weighting::Left).map_err(e)?;
    let raw = last.value.to_f64();
    let ext = last.extrapolated.unwrap().to_f64();
    let ok = (z - 3.00793899989).abs() <= 1e-9 && (ext - 2.73794407).abs() <= 1e-6;
    check(ok, format!("Z(1) = {z:.12}, average over {w} = {raw:.9}, extrapolated {ext:.9}"))
}

fn full_digit_averages() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (b, s, tol, printed) in [(2u32, 2.0, 2e-6, 1.1865691104156), (10, 3.0, 2e-4, 0.17401555999)] {
        let d = ds(b, &(0..b).collect::<Vec<_>>());
        let target = zeta_real(s, Precision::DEFAULT).map_err(e)?.to_f64() / (s * (b as f64).ln());
        let seq = moments_recurrence(&d, s, 10000, Precision::FIGURE, Scaling::KappaPochhammer).map_err(e)?;
        let w = PeriodWindow::ending_at(b, 10000, 0).map_err(e)?;
        let avg = average_estimate(&seq, w, Weighting::Left).map_err(e)?.value.to_f64();
        // the published constants carry 11 and 13 decimals
        ok &= (target - printed).abs() < 1e-11 && (avg - target).abs() < tol;
        parts.push(format!("b={b} s={s}: average over {w} = {avg:.10} vs {target:.13}"));
    }
    check(ok, parts.join("; "))
}

fn base_eight_set(store: &KempnerConstantsStore) -> Outcome {
    let d = ds(8, &[0, 1, 3, 5]);
    let h1 = zsum_telescope(&d, store, 1e-10, Precision::DEFAULT).map_err(e)?.value.re.to_f64();
    let h3 = zsum_enumerate(&DirichletRequest::real(d.clone(), 3.0, 1e-11)).map_err(e)?.value.re.to_f64();
    let ex = extrapolate(1.0255340, 1.0257836, 8);
    let seq = moments_recurrence(&d, 3.0, 10000, Precision::FIGURE, Scaling::KappaPochhammer).map_err(e)?;
    let w = PeriodWindow::ending_at(8, 10000, 0).map_err(e)?;
    let (prev, last) = average_with_extrapolation(&seq, w, Weighting::Left).map_err(e)?;
    let s3 = last.extrapolated.unwrap().to_f64();
    let ok = (h1 - 2.133130167741).abs() <= 1e-9
        && (h3 - 1.0239193028).abs() <= 1e-8
        && (ex - 1.025819).abs() <= 1e-6
        && (s3 - 0.16413370005).abs() <= 1e-5;
    check(
        ok,
        format!(
            "H(1) = {h1:.12}, H(3) = {h3:.10}, extrapolate = {ex:.7}, s=3 averages {:.9} / {:.9} -> {s3:.9}",
            prev.value.to_f64(),
            last.value.to_f64()
        ),
    )
}

fn profile_sets() -> Vec<(DigitSet, f64)> {
    vec![
        (ds(3, &[0, 2]), 1.0),
        (ds(3, &[1, 2]), 1.0),
        (ds(8, &[0, 1, 3, 5]), 3.0),
        (ds(2, &[0, 1]), 2.0),
        (ds(10, &[9]), 1.0),
    ]
}

fn periodicity() -> Outcome {
    let tol = 1e-12;
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for (d, s) in profile_sets() {
        let b = d.base() as f64;
        let ev = ProfileEvaluator::new(d, s, tol).map_err(e)?;
        for _ in 0..20 {
            let m: f64 = rng.random_range(10.0..1e4);
            let a = ev.value(m).map_err(e)?;
            let c = ev.value(b * m).map_err(e)?;
            let rel = (Float::with_val(192, &a - &c) / &a).to_f64().abs();
            worst = worst.max(rel);
        }
    }
    check(worst <= 4.0 * tol, format!("worst |F(bm) - F(m)| / F(m) = {worst:.2e}"))
}

fn spectrum_consistency(store: &KempnerConstantsStore) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for a in [&[0u32, 2][..], &[1, 2]] {
        let d = ds(3, a);
        let opts = FourierOptions {
            tol: 1e-11,
            ..Default::default()
        };
        let spec = FourierSpectrum::compute(&d, 1.0, 12, &opts, Some(store)).map_err(e)?;
        let ev = ProfileEvaluator::new(d, 1.0, 1e-14).map_err(e)?;
        let mut worst = 0.0f64;
        for i in 0..100 {
            let m = 50.0 * 3f64.powf(i as f64 / 100.0);
            let f = ev.value(m).map_err(e)?.to_f64();
            let g = profile_from_fourier(&spec, m).map_err(e)?.to_f64();
            worst = worst.max(((f - g) / f).abs());
        }
        // trapezoid in x = log_3 m over one period
        let n = 512;
        let mut mean = 0.0;
        for i in 0..n {
            let m = 50.0 * 3f64.powf(i as f64 / n as f64);
            mean += ev.value(m).map_err(e)?.to_f64();
        }
        mean /= n as f64;
        let c0 = spec.c0().re.to_f64();
        let mean_rel = ((mean - c0) / c0).abs();
        ok &= worst <= 1e-8 && mean_rel <= 1e-6;
        parts.push(format!("A={a:?}: fourier vs profile {worst:.1e}, mean vs c_0 {mean_rel:.1e}"));
    }
    check(ok, parts.join("; "))
}

/// Calibrated once from the measured maxima of the residual over
/// `m in {100, ..., 10^4}` (1.975, 1.279 and 7.121) and frozen with a
/// factor 2 margin.
const PROP1_BOUNDS: [(u32, &[u32], f64, f64); 3] = [
    (3, &[0, 2], 1.0, 4.0),
    (8, &[0, 1, 3, 5], 1.0, 2.6),
    (2, &[0, 1], 2.0, 14.5),
];

fn prop1_bounded() -> Outcome {
    let ms: Vec<usize> = [100usize, 200, 500, 1000, 2000, 3000, 5000, 7000, 10000].to_vec();
    let mut parts = Vec::new();
    let mut ok = true;
    for (b, a, s, bound) in PROP1_BOUNDS {
        let d = ds(b, a);
        let seq = moments_recurrence(&d, s, 10000, Precision::DEFAULT, Scaling::Kappa).map_err(e)?;
        let r = prop1_residuals(&seq, &ms).map_err(e)?;
        let worst = r.iter().map(|x| x.to_f64()).fold(0.0, f64::max);
        if std::env::var_os("ACCEPTANCE_CALIBRATE").is_some() {
            eprintln!("b={b} A={a:?}: {:?}", r.iter().map(|x| x.to_f64()).collect::<Vec<_>>());
        }
        ok &= worst <= bound;
        parts.push(format!("b={b} A={a:?}: max {worst:.3e} <= {bound:.3e}"));
    }
    check(ok, parts.join("; "))
}

fn bernoulli_instability() -> Outcome {
    let d = ds(2, &[0, 1]);
    let opts = BernoulliOptions::default();
    let closed = bernoulli_moments(2, 2.0, 200, opts).map_err(e)?;
    let rec = moments_recurrence(&d, 2.0, 200, Precision::DEFAULT, Scaling::None).map_err(e)?;
    let mut worst = 0.0f64;
    for m in 0..=200 {
        let r = &rec.values[m];
        let rel = Float::with_val(192, &closed.sequence.values[m] - r) / r;
        worst = worst.max(rel.to_f64().abs());
    }
    let mut first = closed.diagnostics.iter().find(|x| x.lost_digits >= 15.0).map(|x| x.m);
    if first.is_none() {
        let more = bernoulli_moments(2, 2.0, 1999, opts).map_err(e)?;
        first = more.diagnostics.iter().find(|x| x.lost_digits >= 15.0).map(|x| x.m);
    }
    let lost200 = closed.diagnostics[200].lost_digits;
    let ok = worst <= 1e-12 && first.is_some_and(|m| m < 2000);
    check(
        ok,
        format!("worst relative difference {worst:.1e} for m <= 200; 15 digits lost first at m = {first:?}; {lost200:.0} lost at m = 200"),
    )
}

fn main() -> ExitCode {
    let store = KempnerConstantsStore::bundled();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 mass identity", Box::new(mass_identity)),
        ("2 recurrence vs direct series", Box::new(oracle_equivalence)),
        ("3 c_0 and period average (b=3, A={0,2})", Box::new(|| cantor_set_average(&store))),
        ("4 Z(1) and extrapolated average (b=3, A={1,2})", Box::new(|| one_two_set_average(&store))),
        ("5 averages for full digit sets", Box::new(full_digit_averages)),
        ("6 H(1), H(3) and s=3 average (b=8, A={0,1,3,5})", Box::new(|| base_eight_set(&store))),
        ("7 periodicity", Box::new(periodicity)),
        ("8 spectrum consistency", Box::new(|| spectrum_consistency(&store))),
        ("9 generating-function residual bounded", Box::new(prop1_bounded)),
        ("10 Bernoulli closed-form instability", Box::new(bernoulli_instability)),
    ];
    let filter = std::env::args().nth(1).filter(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, run) in &criteria {
        if let Some(f) = &filter {
            if !name.starts_with(f.as_str()) {
                continue;
            }
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
