use std::collections::BTreeMap;
use std::path::Path;

use rug::Float;

use crate::digits::parse_digit_list;
use crate::error::{Error, Result};

/// `S_0 = sum 1/n` over the positive integers whose digits lie in a set.
#[derive(Debug, Clone)]
pub struct KempnerConstant {
    pub base: u32,
    pub digits: Vec<u32>,
    /// The decimal string as given.
    pub text: String,
    pub value: Float,
    /// Half a unit in the last stated decimal place.
    pub error: f64,
}

/// Externally computed Kempner constants keyed by base and digit set.
///
/// The text format is one entry per line,
///
/// ```text
/// # comment
/// base=3 digits=0,2 value=1.341426555483088
/// ```
#[derive(Debug, Clone, Default)]
pub struct KempnerConstantsStore {
    entries: BTreeMap<(u32, Vec<u32>), KempnerConstant>,
}

const BUNDLED: &str = include_str!("../../data/kempner_constants.txt");

impl KempnerConstantsStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// The constants shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled constants file is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut store = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let entry = parse_line(content).map_err(|msg| Error::Parse { line, msg })?;
            let key = (entry.base, entry.digits.clone());
            if store.entries.contains_key(&key) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate entry for base {} digits {:?}", key.0, key.1),
                });
            }
            store.entries.insert(key, entry);
        }
        Ok(store)
    }

    /// Looks up `S_0` for a digit set given in any order.
    pub fn get(&self, base: u32, digits: &[u32]) -> Option<&KempnerConstant> {
        let mut d = digits.to_vec();
        d.sort_unstable();
        self.entries.get(&(base, d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &KempnerConstant> {
        self.entries.values()
    }

    /// Merges `other` into `self`; entries of `other` win.
    pub fn extend(&mut self, other: KempnerConstantsStore) {
        self.entries.extend(other.entries);
    }
}

pub fn load_constants(path: impl AsRef<Path>) -> Result<KempnerConstantsStore> {
    let text = std::fs::read_to_string(path)?;
    KempnerConstantsStore::parse(&text)
}

fn parse_line(content: &str) -> std::result::Result<KempnerConstant, String> {
    let mut base = None;
    let mut digits = None;
    let mut value = None;
    for token in content.split_whitespace() {
        let (key, val) = token
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, found {token:?}"))?;
        let slot = match key {
            "base" => &mut base,
            "digits" => &mut digits,
            "value" => &mut value,
            _ => return Err(format!("unknown key {key:?}")),
        };
        if slot.replace(val).is_some() {
            return Err(format!("key {key:?} given twice"));
        }
    }
    let base: u32 = base
        .ok_or("missing base")?
        .parse()
        .map_err(|_| "base is not an integer".to_string())?;
    if base < 2 {
        return Err(format!("base {base} < 2"));
    }
    let mut digits = parse_digit_list(digits.ok_or("missing digits")?).map_err(|e| e.to_string())?;
    digits.sort_unstable();
    if let Some(w) = digits.windows(2).find(|w| w[0] == w[1]) {
        return Err(format!("digit {} repeated", w[0]));
    }
    if let Some(&d) = digits.iter().find(|&&d| d >= base) {
        return Err(format!("digit {d} out of range for base {base}"));
    }
    let text = value.ok_or("missing value")?;
    let (value, error) = parse_decimal(text)?;
    Ok(KempnerConstant {
        base,
        digits,
        text: text.to_string(),
        value,
        error,
    })
}

/// Plain non-negative decimal `ddd[.ddd]`, read at a precision covering
/// every stated digit.
fn parse_decimal(text: &str) -> std::result::Result<(Float, f64), String> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let ok = !int.is_empty()
        && int.bytes().all(|c| c.is_ascii_digit())
        && frac.bytes().all(|c| c.is_ascii_digit())
        && !(text.contains('.') && frac.is_empty());
    if !ok {
        return Err(format!("value {text:?} is not a plain decimal"));
    }
    if int.len() + frac.len() > 10_000 {
        return Err("value has too many digits".into());
    }
    let bits = (((int.len() + frac.len()) as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 64;
    let parsed = Float::parse(text).map_err(|e| e.to_string())?;
    let value = Float::with_val(bits.max(128), parsed);
    let error = 0.5 * 10f64.powi(-(frac.len() as i32));
    Ok((value, error))
}
