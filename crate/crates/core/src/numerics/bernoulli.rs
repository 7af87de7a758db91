use std::sync::Mutex;

use rug::{Integer, Rational};

/// Exact Bernoulli numbers `B_0..=B_{2 k_max}` with `B_1 = -1/2`.
///
/// Even indices come from the convolution recurrence restricted to even
/// terms, `sum_{k<=n} C(2n+1, 2k) B_{2k} = (2n+1)/2`.
pub fn bernoulli_numbers(k_max: usize) -> Vec<Rational> {
    let even = bernoulli_even(k_max);
    let mut out = Vec::with_capacity(2 * k_max + 1);
    for (k, b) in even.into_iter().enumerate() {
        if k > 0 {
            out.push(if k == 1 {
                Rational::from((-1, 2))
            } else {
                Rational::new()
            });
        }
        out.push(b);
    }
    out
}

static EVEN_CACHE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// `[B_0, B_2, ..., B_{2 k_max}]`, memoized across calls.
pub(crate) fn bernoulli_even(k_max: usize) -> Vec<Rational> {
    let mut cache = EVEN_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(Rational::from(1));
    }
    while cache.len() <= k_max {
        let n = cache.len();
        let top = 2 * n + 1;
        let mut acc = Rational::from((top, 2));
        let mut c = Integer::from(1); // C(top, 0)
        for (k, b) in cache.iter().enumerate() {
            acc -= Rational::from(&c * b.numer()) / b.denom();
            // C(top, 2k) -> C(top, 2k + 2)
            let j = 2 * k;
            c *= (top - j) as u64;
            c *= (top - j - 1) as u64;
            c /= ((j + 1) * (j + 2)) as u64;
        }
        cache.push(acc / top as u64);
    }
    cache[..=k_max].to_vec()
}

/// Streams the exact row `C(m, 0), ..., C(m, m)`.
#[derive(Debug, Clone)]
pub struct BinomialRow {
    m: u64,
    j: u64,
    current: Integer,
}

pub fn binomial_row(m: u64) -> BinomialRow {
    BinomialRow {
        m,
        j: 0,
        current: Integer::from(1),
    }
}

impl Iterator for BinomialRow {
    type Item = Integer;

    fn next(&mut self) -> Option<Integer> {
        if self.j > self.m {
            return None;
        }
        let out = self.current.clone();
        self.current *= self.m - self.j;
        self.j += 1;
        self.current /= self.j;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.m + 1).saturating_sub(self.j) as usize;
        (left, Some(left))
    }
}
