//! The shifted missing-digit Dirichlet series
//! `Z(w) = sum_{n in B*} (kappa n + 1)^{-w}`, where `B*` is the set of
//! integers whose digits lie in the complement set `B = f - A`.
//!
//! All routes take the digit set `A` of the measure and derive `B` and
//! `kappa` from it.

mod constants;

use std::fmt;

use rug::ops::Pow;
use rug::Float;

pub use constants::{load_constants, KempnerConstant, KempnerConstantsStore};

use crate::digits::{AdmissibleStream, DigitSet};
use crate::error::{Error, Result};
use crate::extrapolation::known_ratio_table;
use crate::numerics::{Complex, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Partial sum with a certified tail bound.
    Enumerate,
    /// `w = 1` from a stored `S_0` and an enumerated quadratic remainder.
    Telescope,
    /// Richardson elimination of the level-sum ratios. Not certified.
    Extrapolate,
    /// Telescope at `w = 1` when a constant is stored, else enumerate,
    /// falling back to extrapolation when enumeration is infeasible.
    Auto,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumerate => "enumerate",
            Method::Telescope => "telescope",
            Method::Extrapolate => "extrapolate",
            Method::Auto => "auto",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(Method::Enumerate),
            "telescope" => Ok(Method::Telescope),
            "extrapolate" => Ok(Method::Extrapolate),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirichletRequest {
    pub digit_set: DigitSet,
    pub w: Complex,
    /// Absolute tolerance.
    pub tol: f64,
    pub method: Method,
    pub precision: Precision,
    /// Maximum number of enumerated integers.
    pub budget: u64,
}

impl DirichletRequest {
    pub fn new(digit_set: DigitSet, w: Complex, tol: f64) -> Self {
        DirichletRequest {
            digit_set,
            w,
            tol,
            method: Method::Auto,
            precision: Precision::DEFAULT,
            budget: 10_000_000,
        }
    }

    pub fn real(digit_set: DigitSet, w: f64, tol: f64) -> Self {
        let w = Complex::from_f64(Precision::DEFAULT, w, 0.0);
        Self::new(digit_set, w, tol)
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone)]
pub struct CertifiedValue {
    pub value: Complex,
    /// Truncation error: a rigorous bound when `certified`, otherwise the
    /// extrapolation error estimate.
    pub tail_bound: f64,
    pub terms_used: u64,
    pub certified: bool,
    /// The route actually taken (never `Auto`).
    pub method: Method,
}

/// Dispatches on `req.method`.
pub fn zsum(req: &DirichletRequest, store: Option<&KempnerConstantsStore>) -> Result<CertifiedValue> {
    match req.method {
        Method::Enumerate => zsum_enumerate(req),
        Method::Extrapolate => zsum_extrapolate(req),
        Method::Telescope => {
            require_w_one(&req.w)?;
            let store = store.ok_or_else(|| Error::MissingConstant {
                base: req.digit_set.base(),
                digits: req.digit_set.complement().to_vec(),
            })?;
            zsum_telescope(&req.digit_set, store, req.tol, req.precision)
        }
        Method::Auto => {
            let d = &req.digit_set;
            if let Some(store) = store {
                if is_one(&req.w) && store.get(d.base(), d.complement()).is_some() {
                    return zsum_telescope(d, store, req.tol, req.precision);
                }
            }
            match zsum_enumerate(req) {
                Err(Error::InfeasibleTolerance { .. }) => zsum_extrapolate(req),
                r => r,
            }
        }
    }
}

fn is_one(w: &Complex) -> bool {
    w.re == 1 && w.im.is_zero()
}

fn require_w_one(w: &Complex) -> Result<()> {
    if is_one(w) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("telescoping only applies at w = 1".into()))
    }
}

/// `B` has no nonzero digit, so `B* = {0}` and `Z = 1`.
fn trivial(d: &DigitSet) -> bool {
    d.complement().iter().all(|&x| x == 0)
}

struct Geometry {
    n: f64,
    b: f64,
    kappa: f64,
}

impl Geometry {
    fn of(d: &DigitSet) -> Self {
        Geometry {
            n: d.cardinality() as f64,
            b: d.base() as f64,
            kappa: d.kappa().to_f64(),
        }
    }

    /// `sum_{l>L} N^l (kappa b^{l-1})^{-sigma}`: every `l`-digit integer is
    /// at least `b^{l-1}`.
    fn tail(&self, sigma: f64, depth: u32) -> f64 {
        let rho = self.n * self.b.powf(-sigma);
        self.kappa.powf(-sigma) * self.b.powf(sigma) * rho.powi(depth as i32 + 1) / (1.0 - rho)
    }

    /// `sum_{l<=L} N^l`.
    fn words(&self, depth: u32) -> f64 {
        (0..=depth).map(|l| self.n.powi(l as i32)).sum()
    }

    /// Smallest depth with `tail <= tol`, or the best tail inside the
    /// budget.
    fn depth_for(&self, sigma: f64, tol: f64, budget: u64) -> std::result::Result<u32, f64> {
        let mut depth = 0u32;
        loop {
            if self.tail(sigma, depth) <= tol {
                return Ok(depth);
            }
            if self.words(depth + 1) > budget as f64 || depth >= 64 {
                return Err(self.tail(sigma, depth));
            }
            depth += 1;
        }
    }
}

/// `kappa n + 1` at precision `p`.
fn shifted(d: &DigitSet, n: u64, p: u32) -> Float {
    Float::with_val(p, d.kappa() * rug::Rational::from(n)) + 1u32
}

/// Sums over `B*` grouped by digit length `0..=depth`.
fn level_sums(d: &DigitSet, depth: u32, mut term: impl FnMut(u64) -> Complex, zero: Complex) -> (Vec<Complex>, u64) {
    let mut sums = vec![zero; depth as usize + 1];
    let mut stream = AdmissibleStream::new(d.complement(), d.base());
    let mut count = 0u64;
    while let Some(n) = stream.next() {
        let len = stream.length();
        if len > depth as usize {
            break;
        }
        sums[len].add_assign(&term(n));
        count += 1;
    }
    (sums, count)
}

fn real_or_complex_term<'a>(d: &'a DigitSet, w: &Complex, p: u32) -> impl Fn(u64) -> Complex + 'a {
    let real = w.im.is_zero();
    let w = w.clone();
    let wr = Float::with_val(p, &w.re);
    move |n| {
        let x = shifted(d, n, p);
        if real {
            Complex::real(x.pow(-wr.clone()))
        } else {
            Complex::real_pow_neg(&x, &w)
        }
    }
}

/// Partial sum over all `n in B*` below `b^L`, with `L` the smallest depth
/// whose certified tail is below `tol`.
pub fn zsum_enumerate(req: &DirichletRequest) -> Result<CertifiedValue> {
    let d = &req.digit_set;
    let sigma = req.w.re.to_f64();
    d.check_abscissa(sigma)?;
    let work = req.precision.guarded(32);
    let p = work.bits();
    if trivial(d) {
        return Ok(CertifiedValue {
            value: Complex::one(req.precision),
            tail_bound: 0.0,
            terms_used: 1,
            certified: true,
            method: Method::Enumerate,
        });
    }
    let geo = Geometry::of(d);
    let depth = geo
        .depth_for(sigma, req.tol, req.budget)
        .map_err(|best| Error::InfeasibleTolerance { tol: req.tol, best })?;
    let w = Complex::new(Float::with_val(p, &req.w.re), Float::with_val(p, &req.w.im));
    let (sums, count) = level_sums(d, depth, real_or_complex_term(d, &w, p), Complex::zero(work));
    let mut total = Complex::zero(work);
    for s in &sums {
        total.add_assign(s);
    }
    Ok(CertifiedValue {
        value: round(total, req.precision),
        tail_bound: geo.tail(sigma, depth),
        terms_used: count,
        certified: true,
        method: Method::Enumerate,
    })
}

/// `Z(1) = 1 + S_0 / kappa - sum_{n in B*, n > 0} 1 / (kappa n (kappa n + 1))`.
///
/// Only the subtracted series is enumerated; its terms decay like `n^-2`.
/// The stated precision of `S_0` enters the reported bound.
pub fn zsum_telescope(
    digits: &DigitSet,
    store: &KempnerConstantsStore,
    tol: f64,
    prec: Precision,
) -> Result<CertifiedValue> {
    let work = prec.guarded(32);
    let p = work.bits();
    if trivial(digits) {
        return Ok(CertifiedValue {
            value: Complex::one(prec),
            tail_bound: 0.0,
            terms_used: 1,
            certified: true,
            method: Method::Telescope,
        });
    }
    let constant = store
        .get(digits.base(), digits.complement())
        .ok_or_else(|| Error::MissingConstant {
            base: digits.base(),
            digits: digits.complement().to_vec(),
        })?;
    let kappa = digits.kappa().to_f64();
    let const_err = constant.error / kappa;
    let remaining = tol - const_err;
    if !(remaining > 0.0) {
        return Err(Error::InfeasibleTolerance { tol, best: const_err });
    }
    let geo = Geometry::of(digits);
    // (kappa n (kappa n + 1))^-1 <= (kappa b^{l-1})^-2
    let depth = geo
        .depth_for(2.0, remaining, 10_000_000)
        .map_err(|best| Error::InfeasibleTolerance { tol, best: best + const_err })?;

    let kf = Float::with_val(p, digits.kappa());
    let (sums, count) = level_sums(
        digits,
        depth,
        |n| {
            if n == 0 {
                return Complex::zero(work);
            }
            let kn = Float::with_val(p, &kf * n);
            let den = Float::with_val(p, &kn + 1u32) * kn;
            Complex::real(den.recip())
        },
        Complex::zero(work),
    );
    let mut remainder = Float::new(p);
    for s in &sums {
        remainder += &s.re;
    }
    let value = Float::with_val(p, &constant.value / &kf) + 1u32 - remainder;
    Ok(CertifiedValue {
        value: round(Complex::real(value), prec),
        tail_bound: geo.tail(2.0, depth) + const_err,
        terms_used: count,
        certified: true,
        method: Method::Telescope,
    })
}

/// Level sums `Z_l` of integers with `l` digits behave like
/// `rho^l sum_i A_i b^{-il}` with `rho = N b^{-w}`, so the partial sums are
/// a limit plus geometric terms of known ratios `rho b^{-i}`. Those are
/// eliminated one by one; levels are added until two successive estimates
/// and the elimination table agree to `tol`, or the budget runs out.
pub fn zsum_extrapolate(req: &DirichletRequest) -> Result<CertifiedValue> {
    let d = &req.digit_set;
    let sigma = req.w.re.to_f64();
    d.check_abscissa(sigma)?;
    let work = req.precision.guarded(48);
    let p = work.bits();
    if trivial(d) {
        return Ok(CertifiedValue {
            value: Complex::one(req.precision),
            tail_bound: 0.0,
            terms_used: 1,
            certified: false,
            method: Method::Extrapolate,
        });
    }
    let geo = Geometry::of(d);
    let w = Complex::new(Float::with_val(p, &req.w.re), Float::with_val(p, &req.w.im));
    let rho = Complex::real_pow_neg(&Float::with_val(p, d.base()), &w).scale(&Float::with_val(p, d.cardinality()));
    let inv_b = Float::with_val(p, d.base()).recip();

    // The first two levels are too far from the asymptotic regime to help.
    const SKIP: usize = 2;
    let term = real_or_complex_term(d, &w, p);
    let mut stream = AdmissibleStream::new(d.complement(), d.base());
    let mut partial = Complex::zero(work);
    let mut sums: Vec<Complex> = Vec::new();
    let mut pending: Option<u64> = stream.next();
    let mut count = 0u64;
    let mut previous: Option<Complex> = None;
    let mut best: Option<(Complex, f64)> = None;

    for level in 0u32.. {
        if level > 0 && geo.words(level) > req.budget as f64 {
            break;
        }
        while let Some(n) = pending {
            if stream.length() > level as usize {
                break;
            }
            partial.add_assign(&term(n));
            count += 1;
            pending = stream.next();
        }
        if pending.is_none() && stream.length() <= level as usize {
            // u64 exhausted; cannot go deeper
            break;
        }
        sums.push(partial.clone());
        if sums.len() < SKIP + 3 {
            continue;
        }
        let tail = &sums[SKIP..];
        let mut ratio = rho.clone();
        let ratios: Vec<Complex> = (0..tail.len())
            .map(|_| {
                let r = ratio.clone();
                ratio = ratio.scale(&inv_b);
                r
            })
            .collect();
        let est = known_ratio_table(tail, &ratios);
        let drift = previous
            .as_ref()
            .map(|prev| est.value.sub(prev).abs().to_f64())
            .unwrap_or(f64::INFINITY);
        let err = est.error.max(drift);
        previous = Some(est.value.clone());
        if best.as_ref().is_none_or(|(_, e)| err <= *e) {
            best = Some((est.value, err));
        }
        if err < req.tol / 4.0 {
            break;
        }
    }

    match best {
        Some((value, err)) if err <= req.tol => Ok(CertifiedValue {
            value: round(value, req.precision),
            tail_bound: err,
            terms_used: count,
            certified: false,
            method: Method::Extrapolate,
        }),
        Some((_, err)) => Err(Error::InfeasibleTolerance { tol: req.tol, best: err }),
        None => Err(Error::InfeasibleTolerance { tol: req.tol, best: f64::INFINITY }),
    }
}

fn round(z: Complex, prec: Precision) -> Complex {
    Complex::new(
        Float::with_val(prec.bits(), z.re),
        Float::with_val(prec.bits(), z.im),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(b: u32, a: &[u32]) -> DigitSet {
        DigitSet::new(b, a).unwrap()
    }

    /// Per-integer digit filter, independent of the stream.
    fn filter_sum(b: u64, bset: &[u64], kappa: f64, w: f64, limit: u64) -> f64 {
        let ok = |mut n: u64| {
            while n > 0 {
                if !bset.contains(&(n % b)) {
                    return false;
                }
                n /= b;
            }
            true
        };
        // sum small terms first
        (0..limit)
            .rev()
            .filter(|&n| ok(n))
            .map(|n| (kappa * n as f64 + 1.0).powf(-w))
            .sum()
    }

    #[test]
    fn single_digit_measure_gives_one() {
        for w in [0.5, 1.0, 3.0] {
            let r = zsum_enumerate(&DirichletRequest::real(ds(10, &[9]), w, 1e-30)).unwrap();
            assert_eq!(r.value.re, 1);
            assert_eq!(r.tail_bound, 0.0);
        }
    }

    #[test]
    fn h3_by_enumeration() {
        let r = zsum_enumerate(&DirichletRequest::real(ds(8, &[0, 1, 3, 5]), 3.0, 1e-11)).unwrap();
        assert!((r.value.re.to_f64() - 1.0239193028).abs() < 1e-10);
        assert!(r.tail_bound <= 1e-11);
    }

    #[test]
    fn matches_digit_filter() {
        // A = {0,2}: B = {2,0}
        let r = zsum_enumerate(&DirichletRequest::real(ds(3, &[0, 2]), 2.0, 1e-11)).unwrap();
        let oracle = filter_sum(3, &[0, 2], 1.0, 2.0, 3u64.pow(13));
        // filter tail beyond 3^13 is below 2e-6; compare against the
        // enumerated partial sum at the same cut and the full value
        let cut = zsum_enumerate(&DirichletRequest {
            tol: 1.0,
            ..DirichletRequest::real(ds(3, &[0, 2]), 2.0, 1e-11)
        })
        .unwrap();
        assert!(cut.terms_used < 1 << 13);
        let full = r.value.re.to_f64();
        assert!(full >= oracle && full - oracle < 2e-6);
        let shallow = Geometry::of(&ds(3, &[0, 2])).tail(2.0, 13);
        assert!(full - oracle <= shallow + 1e-10);
    }

    #[test]
    fn partial_sums_increase() {
        let d = ds(3, &[0, 2]);
        let mut last = 0.0;
        for tol in [1e-1, 1e-3, 1e-5, 1e-7] {
            let r = zsum_enumerate(&DirichletRequest::real(d.clone(), 2.0, tol)).unwrap();
            let v = r.value.re.to_f64();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn enumeration_infeasible_at_one() {
        let req = DirichletRequest::real(ds(3, &[0, 2]), 1.0, 1e-9);
        match zsum_enumerate(&req) {
            Err(Error::InfeasibleTolerance { best, .. }) => assert!(best > 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn telescope_values() {
        let store = KempnerConstantsStore::bundled();
        let cases: [(u32, &[u32], f64); 3] = [
            (3, &[0, 2], 2.12626588),
            (3, &[1, 2], 3.00793899989),
            (8, &[0, 1, 3, 5], 2.133130167741),
        ];
        for (b, a, want) in cases {
            let r = zsum_telescope(&ds(b, a), &store, 1e-10, Precision::DEFAULT).unwrap();
            let tol = if want == 2.12626588 { 1e-8 } else { 1e-10 };
            assert!((r.value.re.to_f64() - want).abs() < tol, "{b} {a:?}: {}", r.value);
            assert!(r.tail_bound <= 1e-10);
        }
    }

    #[test]
    fn telescope_needs_constant() {
        let store = KempnerConstantsStore::new();
        assert!(matches!(
            zsum_telescope(&ds(3, &[0, 2]), &store, 1e-9, Precision::DEFAULT),
            Err(Error::MissingConstant { base: 3, .. })
        ));
    }

    #[test]
    fn extrapolation_reproduces_telescope() {
        let store = KempnerConstantsStore::bundled();
        for (b, a) in [(3u32, &[0u32, 2][..]), (3, &[1, 2]), (8, &[0, 1, 3, 5])] {
            let d = ds(b, a);
            let t = zsum_telescope(&d, &store, 1e-10, Precision::DEFAULT).unwrap();
            let req = DirichletRequest::real(d, 1.0, 1e-11).with_method(Method::Extrapolate);
            let e = zsum(&req, None).unwrap();
            assert!(!e.certified);
            let diff = (e.value.re.to_f64() - t.value.re.to_f64()).abs();
            assert!(diff < t.tail_bound + 1e-11, "{b} {a:?}: {diff:e}");
        }
    }

    #[test]
    fn extrapolation_agrees_with_enumeration_off_the_axis() {
        let d = ds(3, &[0, 2]);
        let w = Complex::from_f64(Precision::DEFAULT, 2.0, 5.7);
        let en = zsum_enumerate(&DirichletRequest::new(d.clone(), w.clone(), 1e-12)).unwrap();
        let ex = zsum_extrapolate(&DirichletRequest::new(d, w, 1e-12)).unwrap();
        assert!(ex.value.sub(&en.value).abs().to_f64() < 2e-12);
    }

    #[test]
    fn auto_routes() {
        let store = KempnerConstantsStore::bundled();
        let d = ds(3, &[0, 2]);
        let at_one = zsum(&DirichletRequest::real(d.clone(), 1.0, 1e-9), Some(&store)).unwrap();
        assert_eq!(at_one.method, Method::Telescope);
        let at_two = zsum(&DirichletRequest::real(d.clone(), 2.0, 1e-9), Some(&store)).unwrap();
        assert_eq!(at_two.method, Method::Enumerate);
        let w = Complex::from_f64(Precision::DEFAULT, 1.0, 5.0);
        let off = zsum(&DirichletRequest::new(d, w, 1e-9), Some(&store)).unwrap();
        assert_eq!(off.method, Method::Extrapolate);
    }

    #[test]
    fn no_nine_constant_is_consistent() {
        // A = {0..8} has B = {0..8}: the classical no-9 sum, with kappa = 9/8
        let d = ds(10, &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        let store = KempnerConstantsStore::bundled();
        let t = zsum_telescope(&d, &store, 1e-6, Precision::DEFAULT).unwrap();
        let req = DirichletRequest {
            budget: 2_000_000,
            ..DirichletRequest::real(d, 1.0, 1e-4)
        };
        let e = zsum_extrapolate(&req).unwrap();
        let diff = (e.value.re.to_f64() - t.value.re.to_f64()).abs();
        eprintln!("no-9: {diff:e} est {:e}", e.tail_bound);
        assert!(diff < 1e-4);
    }

    #[test]
    fn rejects_divergent() {
        let req = DirichletRequest::real(ds(3, &[0, 2]), 0.6, 1e-3);
        assert!(matches!(zsum_enumerate(&req), Err(Error::Divergent { .. })));
    }
}
