//! Packed truth tables and their text format.
//!
//! Entry `i` of a table holds `f(x)` for the point with `sum x_j * 2^j = i`
//! (argument 0 is the least-significant bit). The text format is
//!
//! ```text
//! n=<arity>
//! <hex>
//! ```
//!
//! where `<hex>` has `max(1, 2^n / 4)` lowercase digits, most significant
//! first, and entry `i` is bit `i mod 4` of the digit `i / 4` places from the
//! right end of the string.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_arity, Error, Result};
use crate::oracle::BooleanFunction;
use crate::point::Point;

/// Largest arity a [`TruthTable`] can hold (2^28 bits = 32 MiB).
pub const MAX_TABLE_ARITY: usize = 28;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    words: Vec<u64>,
}

impl TruthTable {
    /// The all-zero table of the given arity.
    pub fn new(arity: usize) -> Result<Self> {
        if arity > MAX_TABLE_ARITY {
            return Err(Error::Capacity {
                what: "truth tables",
                arity,
                limit: MAX_TABLE_ARITY,
            });
        }
        let entries = 1usize << arity;
        Ok(Self {
            arity,
            words: vec![0; entries.div_ceil(64)],
        })
    }

    pub fn from_index_fn(arity: usize, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut t = Self::new(arity)?;
        for i in 0..t.len() {
            if f(i) {
                t.set(i, true);
            }
        }
        Ok(t)
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(&Point) -> bool) -> Result<Self> {
        Self::from_index_fn(arity, |i| f(&Point::from_index(arity, i)))
    }

    /// Tabulates any function of at most [`MAX_TABLE_ARITY`] arguments.
    pub fn from_function<F: BooleanFunction + ?Sized>(func: &F) -> Result<Self> {
        let n = func.arity();
        Self::from_fn(n, |x| func.eval(x))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> u64 {
        1u64 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, index: u64) -> bool {
        debug_assert!(index < self.len());
        self.words[(index >> 6) as usize] >> (index & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: u64, value: bool) {
        assert!(index < self.len(), "table index {index} out of range");
        let mask = 1u64 << (index & 63);
        let w = &mut self.words[(index >> 6) as usize];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn flip(&mut self, index: u64) {
        assert!(index < self.len(), "table index {index} out of range");
        self.words[(index >> 6) as usize] ^= 1u64 << (index & 63);
    }

    /// Number of entries equal to 1.
    pub fn ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Packed entries, 64 per word, entry 0 in the low bit of word 0.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Indices of the entries equal to 1, increasing.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    Some(((w as u64) << 6) | b)
                }
            })
        })
    }

    /// Entrywise XOR. Tables must have equal arity.
    pub fn xor(&self, other: &TruthTable) -> Result<TruthTable> {
        check_arity(self.arity, other.arity)?;
        Ok(TruthTable {
            arity: self.arity,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    fn hex_digits(&self) -> usize {
        (1usize << self.arity).div_ceil(4)
    }

    fn nibble(&self, j: usize) -> u8 {
        let bit = 4 * j;
        (self.words[bit / 64] >> (bit % 64) & 0xf) as u8
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        text.parse()
    }
}

impl BooleanFunction for TruthTable {
    fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    fn eval(&self, x: &Point) -> bool {
        self.get(x.index().expect("table arity is at most 28"))
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.arity)?;
        const HEX: &[u8; 16] = b"0123456789abcdef";
        let digits = self.hex_digits();
        let mut line = String::with_capacity(digits + 1);
        for j in (0..digits).rev() {
            line.push(HEX[self.nibble(j) as usize] as char);
        }
        writeln!(f, "{line}")
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 8 {
            write!(
                f,
                "TruthTable({})",
                self.to_string().trim_end().replace('\n', ", ")
            )
        } else {
            write!(f, "TruthTable(n={}, ones={})", self.arity, self.ones())
        }
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty input".into()))?;
        let arity: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| {
                Error::Format(format!("expected header `n=<arity>`, found {header:?}"))
            })?;
        if arity > MAX_TABLE_ARITY {
            return Err(Error::Format(format!(
                "arity {arity} exceeds the limit of {MAX_TABLE_ARITY}"
            )));
        }
        let hex = lines
            .next()
            .ok_or_else(|| Error::Format("missing hex line".into()))?;
        if let Some(extra) = lines.next() {
            return Err(Error::Format(format!("unexpected trailing line {extra:?}")));
        }

        let mut table = TruthTable::new(arity)?;
        let digits = table.hex_digits();
        if hex.len() != digits {
            return Err(Error::Format(format!(
                "arity {arity} needs {digits} hex digits, found {}",
                hex.len()
            )));
        }
        let valid = if arity >= 2 {
            0xf
        } else {
            (1u8 << (1 << arity)) - 1
        };
        for (pos, c) in hex.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Format(format!("invalid hex digit {c:?}")))?
                as u8;
            if nib & !valid != 0 {
                return Err(Error::Format(format!(
                    "hex digit {c:?} sets bits beyond the 2^{arity} table entries"
                )));
            }
            let j = digits - 1 - pos;
            let bit = 4 * j;
            table.words[bit / 64] |= (nib as u64) << (bit % 64);
        }
        Ok(table)
    }
}
