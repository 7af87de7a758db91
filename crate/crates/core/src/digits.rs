//! Digit sets, admissible integers and the exact identities of the
//! digit-restricted measures.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numerics::Precision;

/// A radix `b` together with a set `A` of allowed digits.
///
/// The complement `B = f - A`, where `f = max A`, governs the asymptotic
/// profile of the moments; `kappa = (b - 1) / f` rescales the support of
/// the measure so that its supremum is `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSet {
    base: u32,
    allowed: Vec<u32>,
    complement: Vec<u32>,
    kappa: Rational,
}

impl DigitSet {
    pub fn new(base: u32, digits: &[u32]) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDigitSet(format!("base {base} < 2")));
        }
        if digits.is_empty() {
            return Err(Error::InvalidDigitSet("empty digit list".into()));
        }
        let mut allowed = digits.to_vec();
        allowed.sort_unstable();
        if let Some(w) = allowed.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidDigitSet(format!("digit {} repeated", w[0])));
        }
        if let Some(&d) = allowed.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigitSet(format!(
                "digit {d} out of range for base {base}"
            )));
        }
        let top = *allowed.last().unwrap();
        if top == 0 {
            return Err(Error::InvalidDigitSet(
                "largest allowed digit must be positive".into(),
            ));
        }
        let mut complement: Vec<u32> = allowed.iter().map(|&a| top - a).collect();
        complement.sort_unstable();
        let kappa = Rational::from((base - 1, top));
        Ok(DigitSet {
            base,
            allowed,
            complement,
            kappa,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Allowed digits `A`, ascending.
    pub fn allowed(&self) -> &[u32] {
        &self.allowed
    }

    /// `N = |A|`.
    pub fn cardinality(&self) -> usize {
        self.allowed.len()
    }

    /// `f = max A`.
    pub fn top(&self) -> u32 {
        *self.allowed.last().unwrap()
    }

    /// `B = {f - a : a in A}`, ascending; always starts with `0`.
    pub fn complement(&self) -> &[u32] {
        &self.complement
    }

    /// The digit set `(b, B)`. Fails when `N = 1`, since `B = {0}` has no
    /// positive digit.
    pub fn complement_set(&self) -> Result<DigitSet> {
        DigitSet::new(self.base, &self.complement)
    }

    /// `kappa = (b - 1) / f`, exact.
    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn is_full_top(&self) -> bool {
        self.top() == self.base - 1
    }

    /// `s0 = log_b N`.
    pub fn s0(&self) -> f64 {
        (self.cardinality() as f64).ln() / (self.base as f64).ln()
    }

    pub fn s0_float(&self, prec: Precision) -> Float {
        let n = Float::with_val(prec.bits(), self.cardinality()).ln();
        n / Float::with_val(prec.bits(), self.base).ln()
    }

    /// Rejects `s <= s0`, where the measure has infinite mass.
    pub fn check_abscissa(&self, s: f64) -> Result<()> {
        // b^s > N, compared exactly so that s = s0 is rejected.
        let ok = s.is_finite()
            && Float::with_val(64, self.base).pow(&Float::with_val(64, s)) > self.cardinality();
        if ok {
            Ok(())
        } else {
            Err(Error::Divergent { s, s0: self.s0() })
        }
    }

    /// `[sum_{a in A} a^j]` for `j = 0..=j_max`, with `0^0 = 1`.
    pub fn power_sums(&self, j_max: usize) -> Vec<Integer> {
        digit_power_sums(&self.allowed, j_max)
    }

    /// Upper bound `N^l` on the number of `B`-admissible integers with
    /// exactly `l` digits.
    pub fn words_of_length_bound(&self, l: u32) -> Integer {
        Integer::from(self.cardinality()).pow(l)
    }

    /// `mu_sigma([1 - b^-k, 1)) = b^{-k sigma} b^sigma / (b^sigma - N)`.
    ///
    /// Only holds when `b - 1` is an allowed digit.
    pub fn tail_mass(&self, sigma: f64, k: u32, prec: Precision) -> Result<Float> {
        if !self.is_full_top() {
            return Err(Error::InvalidArgument(format!(
                "tail mass identity needs b - 1 = {} in A",
                self.base - 1
            )));
        }
        self.check_abscissa(sigma)?;
        let p = prec.bits();
        let b = Float::with_val(p, self.base);
        let bs = b.clone().pow(&Float::with_val(p, sigma));
        let mass = Float::with_val(p, &bs / Float::with_val(p, &bs - self.cardinality()));
        let shrink = b.pow(-(Float::with_val(p, sigma) * k));
        Ok(mass * shrink)
    }
}

pub(crate) fn digit_power_sums(digits: &[u32], j_max: usize) -> Vec<Integer> {
    let mut powers: Vec<Integer> = digits.iter().map(|_| Integer::from(1)).collect();
    let mut out = Vec::with_capacity(j_max + 1);
    out.push(Integer::from(digits.len()));
    for _ in 1..=j_max {
        let mut total = Integer::new();
        for (p, &d) in powers.iter_mut().zip(digits) {
            *p *= d;
            total += &*p;
        }
        out.push(total);
    }
    out
}

/// The non-negative integers whose radix-`b` digits all lie in a given set,
/// in increasing order. `0` (the empty word) comes first.
///
/// Words are produced length by length with an odometer over the digit
/// list, so the cost is proportional to the output.
#[derive(Debug, Clone)]
pub struct AdmissibleStream {
    base: u64,
    digits: Vec<u64>,
    /// Odometer state, most significant position first.
    cursor: Vec<usize>,
    value: u64,
    started: bool,
    done: bool,
}

impl AdmissibleStream {
    pub fn new(digits: &[u32], base: u32) -> Self {
        let mut d: Vec<u64> = digits.iter().map(|&x| x as u64).collect();
        d.sort_unstable();
        d.dedup();
        AdmissibleStream {
            base: base as u64,
            digits: d,
            cursor: Vec::new(),
            value: 0,
            started: false,
            done: false,
        }
    }

    /// Number of digits of the most recently emitted value (0 for `0`).
    pub fn length(&self) -> usize {
        self.cursor.len()
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0)
    }

    fn start_length(&mut self, len: usize) -> bool {
        let Some(lead) = self.first_nonzero() else {
            return false;
        };
        let mut v: u64 = 0;
        let mut cursor = Vec::with_capacity(len);
        for pos in 0..len {
            let idx = if pos == 0 { lead } else { 0 };
            cursor.push(idx);
            v = match v
                .checked_mul(self.base)
                .and_then(|x| x.checked_add(self.digits[idx]))
            {
                Some(x) => x,
                None => return false,
            };
        }
        self.cursor = cursor;
        self.value = v;
        true
    }

    fn advance(&mut self) -> bool {
        let len = self.cursor.len();
        let lead = self.first_nonzero().unwrap();
        let mut place: u64 = 1;
        for pos in (0..len).rev() {
            let idx = self.cursor[pos];
            if idx + 1 < self.digits.len() {
                self.cursor[pos] = idx + 1;
                return match (self.digits[idx + 1] - self.digits[idx])
                    .checked_mul(place)
                    .and_then(|step| self.value.checked_add(step))
                {
                    Some(v) => {
                        self.value = v;
                        true
                    }
                    None => false,
                };
            }
            let reset = if pos == 0 { lead } else { 0 };
            self.value -= (self.digits[idx] - self.digits[reset]) * place;
            self.cursor[pos] = reset;
            if pos > 0 {
                place = match place.checked_mul(self.base) {
                    Some(p) => p,
                    None => return false,
                };
            }
        }
        self.start_length(len + 1)
    }
}

impl Iterator for AdmissibleStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.value = 0;
            true
        } else if self.cursor.is_empty() {
            self.start_length(1)
        } else {
            self.advance()
        };
        if ok {
            Some(self.value)
        } else {
            self.done = true;
            None
        }
    }
}

/// Parses a comma-separated digit list such as `0,1,3,5`.
///
/// Only the syntax is checked here; range and duplicate checks belong to
/// whoever knows the base.
pub fn parse_digit_list(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::InvalidDigitSet("empty digit list".into()));
    }
    text.split(',')
        .map(|t| {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidDigitSet(format!("bad digit {t:?}")));
            }
            t.parse::<u32>()
                .map_err(|_| Error::InvalidDigitSet(format!("digit {t} too large")))
        })
        .collect()
}

/// Admissible integers below `limit`, ascending.
pub fn enumerate_admissible(digits: &[u32], base: u32, limit: u64) -> Vec<u64> {
    AdmissibleStream::new(digits, base)
        .take_while(|&n| n < limit)
        .collect()
}
