use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};

use digit_moments::asymptotics::{average_estimate, PeriodWindow, ProfileEvaluator, Weighting};
use digit_moments::dirichlet::{
    zsum_enumerate, zsum_extrapolate, zsum_telescope, DirichletRequest, KempnerConstantsStore,
};
use digit_moments::moments::{moments_direct, moments_recurrence, DirectOptions, MomentSequence, Scaling, TailMode};
use digit_moments::numerics::{bernoulli_numbers, binomial_row, gamma_complex};
use digit_moments::{enumerate_admissible, Complex, DigitSet, Precision};

/// A base and a non-empty digit subset with a positive largest digit.
fn digit_set(bases: std::ops::RangeInclusive<u32>, max_n: usize) -> impl Strategy<Value = (u32, Vec<u32>)> {
    bases.prop_flat_map(move |b| {
        proptest::sample::subsequence((0..b).collect::<Vec<_>>(), 1..=max_n.min(b as usize))
            .prop_filter("largest digit must be positive", |a| *a.last().unwrap() > 0)
            .prop_map(move |a| (b, a))
    })
}

fn per_integer_filter(digits: &[u32], base: u32, limit: u64) -> Vec<u64> {
    (0..limit)
        .filter(|&n| {
            let mut x = n;
            while x > 0 {
                if !digits.contains(&((x % base as u64) as u32)) {
                    return false;
                }
                x /= base as u64;
            }
            true
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complement_twice_shifts_to_zero((b, a) in digit_set(2..=10, 10)) {
        let d = DigitSet::new(b, &a).unwrap();
        prop_assume!(a.len() >= 2);
        let back = d.complement_set().unwrap().complement_set().unwrap();
        let lo = a[0];
        let shifted: Vec<u32> = a.iter().map(|x| x - lo).collect();
        prop_assert_eq!(back.allowed(), &shifted[..]);
        if lo == 0 {
            prop_assert_eq!(back.allowed(), d.allowed());
        }
    }

    #[test]
    fn enumeration_matches_filter((b, a) in digit_set(2..=10, 10), limit in 0u64..100_000) {
        prop_assert_eq!(enumerate_admissible(&a, b, limit), per_integer_filter(&a, b, limit));
    }

    #[test]
    fn tail_mass_by_words(b in 2u32..=6, extra in proptest::option::of(0u32..5), k in 0u32..=6) {
        let mut a = vec![b - 1];
        if let Some(x) = extra {
            if x < b - 1 {
                a.insert(0, x);
            }
        }
        let d = DigitSet::new(b, &a).unwrap();
        let n = a.len() as f64;
        // rho = N b^-sigma = 1/50 keeps the word count small
        let sigma = (50.0 * n).ln() / (b as f64).ln();
        let want = d.tail_mass(sigma, k, Precision::DEFAULT).unwrap().to_f64();
        // words longer than k + 10 carry a relative 1e-17 of the mass
        let depth = k + 10;
        let w = (b as f64).powf(-sigma);
        let mut total = 0.0;
        let mut stack: Vec<(u32, bool)> = vec![(0, true)];
        while let Some((len, prefix_top)) = stack.pop() {
            if len >= k && prefix_top {
                total += w.powi(len as i32);
            }
            if len < depth {
                for &digit in &a {
                    let top = prefix_top && (len >= k || digit == b - 1);
                    if len < k && !top {
                        continue;
                    }
                    stack.push((len + 1, top));
                }
            }
        }
        prop_assert!(((total - want) / want).abs() < 1e-12, "{} vs {}", total, want);
    }

    #[test]
    fn gamma_recurrence(re in 0.5f64..5.0, im in -60.0f64..60.0) {
        let prec = Precision::DEFAULT;
        let z = Complex::from_f64(prec, re, im);
        let mut z1 = z.clone();
        z1.re += 1u32;
        let lhs = gamma_complex(&z1, prec).unwrap();
        let rhs = z.mul(&gamma_complex(&z, prec).unwrap());
        let rel = lhs.sub(&rhs).abs() / rhs.abs();
        prop_assert!(rel.to_f64() < 1e-14);
    }

    #[test]
    fn bernoulli_identity(n in 1usize..80) {
        let b = bernoulli_numbers((n + 1) / 2 + 1);
        let row: Vec<rug::Integer> = binomial_row(n as u64 + 1).collect();
        let mut total = Rational::new();
        for j in 0..=n {
            total += Rational::from(&row[j]) * &b[j];
        }
        prop_assert_eq!(total, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recurrence_matches_direct((b, a) in digit_set(2..=4, 4), s_pick in 0usize..3, m in 0u32..=25) {
        let s = [1.0, 2.0, 2.5][s_pick];
        let d = DigitSet::new(b, &a).unwrap();
        prop_assume!(d.check_abscissa(s).is_ok());
        // stay clear of the convergence boundary, where the level sums
        // converge too slowly for the word budget
        prop_assume!(a.len() as f64 / (b as f64).powf(s) < 0.8);
        let rec = moments_recurrence(&d, s, 25, Precision::DEFAULT, Scaling::None).unwrap();
        let opts = DirectOptions {
            tol: 1e-13,
            budget: 1 << 17,
            tail: if a.len() == 1 { TailMode::Certified } else { TailMode::Extrapolated },
            ..Default::default()
        };
        let v = moments_direct(&d, s, m, opts).unwrap();
        let r = &rec.values[m as usize];
        let rel = Float::with_val(192, &v.value - r) / r;
        prop_assert!(rel.to_f64().abs() <= 1e-12, "{}", rel);
    }

    #[test]
    fn moments_positive_and_bounded((b, a) in digit_set(2..=10, 10), s in 1.0f64..4.0) {
        let d = DigitSet::new(b, &a).unwrap();
        prop_assume!(d.check_abscissa(s).is_ok());
        let seq = moments_recurrence(&d, s, 300, Precision::FIGURE, Scaling::None).unwrap();
        for m in 1..=300 {
            prop_assert!(seq.values[m] > 0);
            prop_assert!(seq.values[m] <= seq.values[0]);
        }
    }

    #[test]
    fn kappa_one_scaling_is_identity((b, a) in digit_set(2..=10, 10), s in 1.0f64..3.0) {
        let mut a = a;
        if *a.last().unwrap() != b - 1 {
            a.push(b - 1);
        }
        let d = DigitSet::new(b, &a).unwrap();
        prop_assume!(d.check_abscissa(s).is_ok());
        let x = moments_recurrence(&d, s, 120, Precision::DEFAULT, Scaling::None).unwrap();
        let y = moments_recurrence(&d, s, 120, Precision::DEFAULT, Scaling::Kappa).unwrap();
        prop_assert_eq!(x.values, y.values);
    }

    #[test]
    fn conjugate_symmetry((b, a) in digit_set(2..=8, 4), t in -30.0f64..30.0) {
        let d = DigitSet::new(b, &a).unwrap();
        let sigma = d.s0() + 1.5;
        let w = Complex::from_f64(Precision::DEFAULT, sigma, t);
        let z = zsum_enumerate(&DirichletRequest::new(d.clone(), w.clone(), 1e-6)).unwrap();
        let zc = zsum_enumerate(&DirichletRequest::new(d, w.conj(), 1e-6)).unwrap();
        prop_assert_eq!(&z.value.re, &zc.value.re);
        prop_assert_eq!(&z.value.im, &(-zc.value.im.clone()));
    }

    #[test]
    fn domination((b, a) in digit_set(2..=8, 4), t in -30.0f64..30.0) {
        let d = DigitSet::new(b, &a).unwrap();
        let sigma = d.s0() + 1.5;
        let on_line = zsum_enumerate(&DirichletRequest::new(
            d.clone(),
            Complex::from_f64(Precision::DEFAULT, sigma, t),
            1e-6,
        ))
        .unwrap();
        let real = zsum_enumerate(&DirichletRequest::real(d, sigma, 1e-6)).unwrap();
        // same depth: the tail bound only depends on the real part
        prop_assert_eq!(on_line.terms_used, real.terms_used);
        prop_assert!(on_line.value.abs() <= real.value.re);
    }

    #[test]
    fn bracketing((b, a) in digit_set(2..=8, 4), e1 in 2i32..6, e2 in 6i32..10) {
        let d = DigitSet::new(b, &a).unwrap();
        // rho = N b^-sigma <= 1/4 keeps the fine depth within budget
        let sigma = d.s0() + 2.0;
        let coarse = zsum_enumerate(&DirichletRequest::real(d.clone(), sigma, 10f64.powi(-e1))).unwrap();
        let fine = zsum_enumerate(&DirichletRequest::real(d, sigma, 10f64.powi(-e2))).unwrap();
        prop_assert!(fine.value.re >= coarse.value.re);
        prop_assert!(fine.value.re.to_f64() <= coarse.value.re.to_f64() + coarse.tail_bound * (1.0 + 1e-12));
    }

    #[test]
    fn profile_periodicity((b, a) in digit_set(2..=8, 4), m in 10.0f64..1e4) {
        let d = DigitSet::new(b, &a).unwrap();
        let s = d.s0() + 0.7;
        let tol = 1e-12;
        let ev = ProfileEvaluator::new(d, s, tol).unwrap();
        let x = ev.value(m).unwrap();
        let y = ev.value(m * b as f64).unwrap();
        let rel = (Float::with_val(192, &x - &y) / &x).to_f64().abs();
        prop_assert!(rel <= 4.0 * tol, "{}", rel);
    }

    #[test]
    fn period_weights_sum_to_one(b in 2u32..=10, p in 1u32..4, c in 0.1f64..10.0, left in any::<bool>()) {
        let w = PeriodWindow::standard(b, p).unwrap();
        let d = DigitSet::new(b, &[b - 1]).unwrap();
        let seq = MomentSequence {
            digit_set: d,
            s: 1.0,
            scaling: Scaling::KappaPower,
            values: vec![Float::with_val(128, c); w.hi as usize + 1],
            precision: Precision::FIGURE,
        };
        let wt = if left { Weighting::Left } else { Weighting::Right };
        let avg = average_estimate(&seq, w, wt).unwrap();
        prop_assert!((avg.weight_sum.to_f64() - 1.0).abs() < 1e-30);
        prop_assert!((avg.value.to_f64() - c).abs() <= 1e-15 * c);
    }
}

#[test]
fn telescope_and_enumeration_agree() {
    let store = KempnerConstantsStore::bundled();
    for a in [&[0u32, 2][..], &[1, 2], &[0, 1]] {
        let d = DigitSet::new(3, a).unwrap();
        let t = zsum_telescope(&d, &store, 1e-10, Precision::DEFAULT).unwrap();
        let e = zsum_enumerate(&DirichletRequest::real(d.clone(), 1.0, 1e-2)).unwrap();
        let diff = (t.value.re.to_f64() - e.value.re.to_f64()).abs();
        assert!(diff <= t.tail_bound + e.tail_bound, "{a:?}: {diff:e}");
        // the partial sum is a lower bound
        assert!(e.value.re <= t.value.re);
        let x = zsum_extrapolate(&DirichletRequest::real(d, 1.0, 1e-9)).unwrap();
        assert!((t.value.re.to_f64() - x.value.re.to_f64()).abs() <= t.tail_bound + x.tail_bound);
    }
}

#[test]
fn moments_approach_the_profile() {
    // max over each period of |kappa^m m^s u_m - F_s(m)| shrinks with p
    for (b, a, s) in [(3u32, &[0u32, 2][..], 1.0), (8, &[0, 1, 3, 5], 3.0)] {
        let d = DigitSet::new(b, a).unwrap();
        let top = if b == 3 { 6 } else { 3 };
        let hi = (b as usize).pow(top + 1);
        let seq = moments_recurrence(&d, s, hi, Precision::FIGURE, Scaling::KappaPower).unwrap();
        let ev = ProfileEvaluator::new(d, s, 1e-14).unwrap();
        let mut last = f64::INFINITY;
        for p in 1..=top {
            let w = PeriodWindow::standard(b, p).unwrap();
            let mut worst = 0.0f64;
            for m in w.lo + 1..=w.hi {
                let f = ev.value(m as f64).unwrap().to_f64();
                worst = worst.max((seq.values[m as usize].to_f64() - f).abs());
            }
            assert!(worst < last, "b={b} p={p}: {worst:e} after {last:e}");
            last = worst;
        }
    }
}

#[test]
fn toy_model_profile() {
    // A = {9}: F_1(m) = m sum_j 10^j e^{-10^j m}, the no-carry toy sum
    let d = DigitSet::new(10, &[9]).unwrap();
    let ev = ProfileEvaluator::new(d, 1.0, 1e-20).unwrap();
    for m in [1.0, 2.5, 7.0] {
        let mut f = Float::with_val(192, 0);
        for j in -60..3i32 {
            let x = Float::with_val(192, 10).pow(j) * m;
            f += Float::with_val(192, -&x).exp() * x;
        }
        let got = ev.value(m).unwrap();
        assert!(((got - &f) / &f).abs() < 1e-18);
    }
}
