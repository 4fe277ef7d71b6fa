//! Exact rational confidence values.
//!
//! Confidences are counts over counts. Keeping them as integer pairs means
//! thresholds like 0.8 are honored exactly: comparisons go through 128-bit
//! cross multiplication, never floating point.

use std::cmp::Ordering;
use std::fmt;

/// A non-negative rational, stored unreduced so `17/20` keeps its original
/// numerator and denominator. Equality and ordering are by value: `17/20`
/// equals `34/40`.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    /// Panics if `den` is zero.
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den > 0, "ratio denominator must be positive");
        Ratio { num, den }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Parses a plain decimal such as `"0.8"`, `"0.825"` or `"1"` into the
    /// exact ratio it spells (`8/10`, `825/1000`, `1/1`). Scientific
    /// notation, signs and empty strings are rejected.
    pub fn parse_decimal(text: &str) -> Result<Ratio, String> {
        let text = text.trim();
        let bad = || format!("`{text}` is not a plain decimal number");
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac_part.len() > 18 {
            return Err(format!("`{text}` has more than 18 decimal places"));
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let int: u64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let frac: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Ok(Ratio { num, den })
    }

    /// Integer percentage, rounded half-up: `17/20` is 85, `19/24` is 79.
    pub fn percent(&self) -> u32 {
        let num = self.num as u128;
        let den = self.den as u128;
        ((200 * num + den) / (2 * den)) as u32
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Reduced form, for canonical comparison keys.
    pub fn reduced(&self) -> (u64, u64) {
        let g = gcd(self.num, self.den);
        (self.num / g, self.den / g)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Ratio) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Ratio) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Ratio) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
