//! Points of the Boolean cube and partial assignments to their coordinates.
//!
//! Arguments are numbered from 0 inside the library. Argument `i` of a point
//! is bit `i` of its table index, so `(x_0, ..., x_{n-1})` sits at index
//! `sum x_i * 2^i`. The text form of a point lists argument 0 first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{check_arity, Error, Result};

const WORD: usize = 64;

/// An assignment of Boolean values to `n` arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl Point {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: SmallVec::from_elem(0, len.div_ceil(WORD)),
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut p = Self {
            len,
            words: SmallVec::from_elem(u64::MAX, len.div_ceil(WORD)),
        };
        p.clear_tail();
        p
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut p = Self::zeros(0);
        for b in bits {
            if p.len % WORD == 0 {
                p.words.push(0);
            }
            p.len += 1;
            p.set(p.len - 1, b);
        }
        p
    }

    /// The point whose table index is `index`. Requires `len <= 64`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= WORD, "from_index needs an arity of at most 64");
        let mut p = Self::zeros(len);
        if len > 0 {
            p.words[0] = index;
            p.clear_tail();
        }
        p
    }

    /// Table index `sum x_i * 2^i`, or `None` when the arity exceeds 64.
    pub fn index(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "argument {i} out of range for arity {}",
            self.len
        );
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "argument {i} out of range for arity {}",
            self.len
        );
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "argument {i} out of range for arity {}",
            self.len
        );
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight: the number of arguments set to 1.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn bits(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Number of coordinates where `self` and `other` differ, with those
    /// coordinates in increasing order.
    pub fn xor_delta(&self, other: &Point) -> Result<(usize, Vec<usize>)> {
        check_arity(self.len, other.len)?;
        let mut diff = Vec::new();
        for (w, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut x = a ^ b;
            while x != 0 {
                diff.push(w * WORD + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        Ok((diff.len(), diff))
    }

    /// Weight of the coordinates selected by `args`.
    pub fn weight_on(&self, args: &[usize]) -> usize {
        args.iter().filter(|&&i| self.get(i)).count()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self})")
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Parses a bitstring with argument 0 leftmost.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Usage(format!(
                    "invalid character {other:?} in point {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Point::from_bits)
    }
}

/// Values fixed for a subset of argument indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<usize, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, arg: usize, value: bool) -> Option<bool> {
        self.0.insert(arg, value)
    }

    pub fn get(&self, arg: usize) -> Option<bool> {
        self.0.get(&arg).copied()
    }

    pub fn contains(&self, arg: usize) -> bool {
        self.0.contains_key(&arg)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fixed arguments in increasing order.
    pub fn args(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn max_arg(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

impl FromIterator<(usize, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (usize, bool)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Lifts a reduced point to full arity `q.len() + fixed.len()`.
///
/// The result agrees with `fixed` on its arguments and takes the coordinates
/// of `q`, in order, on the remaining ones.
pub fn embed_point(q: &Point, fixed: &Assignment) -> Result<Point> {
    let arity = q.len() + fixed.len();
    if let Some(max) = fixed.max_arg() {
        if max >= arity {
            return Err(Error::IndexOutOfRange { index: max, arity });
        }
    }
    let mut out = Point::zeros(arity);
    let mut reduced = 0;
    for i in 0..arity {
        let v = match fixed.get(i) {
            Some(v) => v,
            None => {
                reduced += 1;
                q.get(reduced - 1)
            }
        };
        if v {
            out.set(i, true);
        }
    }
    Ok(out)
}
