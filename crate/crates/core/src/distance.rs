//! Exact brute-force distances to the classes the testers target.
//!
//! All of these are exponential in the arity and gated by caps. Results are
//! exact rationals `k / 2^n`; nothing here touches floating point.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::table::TruthTable;

pub const SYM_ARITY_CAP: usize = 16;
pub const JUNTA_ARITY_CAP: usize = 16;
pub const QUASISYM_ARITY_CAP: usize = 14;
pub const DEPENDENCY_ARITY_CAP: usize = 24;

/// The exact rational `flips / 2^arity`.
///
/// Serialized as `{numerator, denominator, value}`; `value` is informative
/// and ignored when reading.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(into = "DistanceFraction", try_from = "DistanceFraction")]
pub struct DistanceValue {
    flips: u64,
    arity: u32,
}

impl DistanceValue {
    pub fn new(flips: u64, arity: usize) -> Self {
        assert!(arity < 64, "arity {arity} too large for an exact distance");
        assert!(flips <= 1u64 << arity, "{flips} flips exceed 2^{arity}");
        Self {
            flips,
            arity: arity as u32,
        }
    }

    pub fn zero(arity: usize) -> Self {
        Self::new(0, arity)
    }

    pub fn numerator(&self) -> u64 {
        self.flips
    }

    pub fn denominator(&self) -> u64 {
        1u64 << self.arity
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn is_zero(&self) -> bool {
        self.flips == 0
    }

    /// Exact whenever the numerator is below 2^53, which holds for every
    /// table this crate can build.
    pub fn to_f64(&self) -> f64 {
        self.flips as f64 / self.denominator() as f64
    }

    /// `self >= eps`, decided exactly.
    pub fn at_least(&self, eps: f64) -> bool {
        // the quotient of two exactly representable values by a power of two
        // is itself exact, so this comparison carries no rounding
        self.to_f64() >= eps
    }
}

#[derive(Serialize, Deserialize)]
struct DistanceFraction {
    numerator: u64,
    denominator: u64,
    #[serde(default)]
    value: f64,
}

impl From<DistanceValue> for DistanceFraction {
    fn from(d: DistanceValue) -> Self {
        Self {
            numerator: d.numerator(),
            denominator: d.denominator(),
            value: d.to_f64(),
        }
    }
}

impl TryFrom<DistanceFraction> for DistanceValue {
    type Error = String;

    fn try_from(f: DistanceFraction) -> std::result::Result<Self, String> {
        if !f.denominator.is_power_of_two() || f.numerator > f.denominator {
            return Err(format!(
                "{}/{} is not a distance with a power-of-two denominator",
                f.numerator, f.denominator
            ));
        }
        Ok(DistanceValue::new(
            f.numerator,
            f.denominator.trailing_zeros() as usize,
        ))
    }
}

impl Ord for DistanceValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = (self.flips as u128) << other.arity;
        let rhs = (other.flips as u128) << self.arity;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for DistanceValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for DistanceValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DistanceValue {}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.flips, self.denominator())
    }
}

/// Distance between two functions. Functions of different arities are at
/// infinite distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Finite(DistanceValue),
    Infinite,
}

/// A set of argument indices (0-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DependencySet(BTreeSet<usize>);

impl DependencySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn insert(&mut self, arg: usize) -> bool {
        self.0.insert(arg)
    }

    pub fn contains(&self, arg: usize) -> bool {
        self.0.contains(&arg)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &DependencySet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Arguments in `{0, .., n-1}` not in the set.
    pub fn complement(&self, n: usize) -> DependencySet {
        (0..n).filter(|i| !self.contains(*i)).collect()
    }

    /// Bit mask of the set. Requires every member below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1u64 << i)
    }

    pub fn from_mask(mask: u64) -> Self {
        (0..64).filter(|i| mask >> i & 1 == 1).collect()
    }

    fn check_within(&self, arity: usize) -> Result<()> {
        match self.max() {
            Some(m) if m >= arity => Err(Error::IndexOutOfRange { index: m, arity }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for DependencySet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for DependencySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// `#{x : f(x) != g(x)} / 2^n`.
pub fn distance(f: &TruthTable, g: &TruthTable) -> Distance {
    match f.xor(g) {
        Ok(d) => Distance::Finite(DistanceValue::new(d.ones(), f.arity())),
        Err(_) => Distance::Infinite,
    }
}

/// Distance to the nearer of the two constant functions.
pub fn dist_const(f: &TruthTable) -> DistanceValue {
    let ones = f.ones();
    DistanceValue::new(ones.min(f.len() - ones), f.arity())
}

fn binomials(n: usize) -> Vec<u64> {
    let mut row = vec![1u64; n + 1];
    for w in 1..n {
        row[w] = row[w - 1] * (n - w + 1) as u64 / w as u64;
    }
    row
}

/// Distance to the symmetric functions: on each weight level, flip the
/// minority value.
pub fn dist_sym(f: &TruthTable) -> Result<DistanceValue> {
    let n = f.arity();
    check_cap("dist_sym", n, SYM_ARITY_CAP)?;
    let mut ones = vec![0u64; n + 1];
    for i in f.support() {
        ones[i.count_ones() as usize] += 1;
    }
    let flips = binomials(n)
        .iter()
        .zip(&ones)
        .map(|(&total, &o)| o.min(total - o))
        .sum();
    Ok(DistanceValue::new(flips, n))
}

/// Gathers the bits of `x` selected by `mask` into the low bits.
#[inline]
fn compress(x: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let b = m.trailing_zeros();
        out |= (x >> b & 1) << k;
        k += 1;
        m &= m - 1;
    }
    out
}

/// Distance to the functions depending only on arguments in `args`: each
/// fiber `{x : x_J = a}` takes its majority value.
pub fn dist_junta(f: &TruthTable, args: &DependencySet) -> Result<DistanceValue> {
    let n = f.arity();
    check_cap("dist_junta", n, JUNTA_ARITY_CAP)?;
    args.check_within(n)?;
    let mask = args.mask();
    let fiber = f.len() >> args.len();
    let mut ones = vec![0u64; 1 << args.len()];
    for i in f.support() {
        ones[compress(i, mask) as usize] += 1;
    }
    let flips = ones.iter().map(|&o| o.min(fiber - o)).sum();
    Ok(DistanceValue::new(flips, n))
}

/// Flips needed to make `f` a function of `|x_J|` alone.
fn flips_to_sym_on(f_support: &[u64], n: usize, mask: u64, binom: &[Vec<u64>]) -> u64 {
    let j = mask.count_ones() as usize;
    let mut ones = [0u64; 65];
    for &i in f_support {
        ones[(i & mask).count_ones() as usize] += 1;
    }
    let scale = 1u64 << (n - j);
    (0..=j)
        .map(|w| {
            let total = binom[j][w] * scale;
            ones[w].min(total - ones[w])
        })
        .sum()
}

/// Distance to the quasi-symmetric functions together with a set `J` whose
/// class `Sym_J` (functions of `|x_J|`) attains it.
///
/// A nonconstant function of `|x_J|` depends on every argument of `J`, so
/// the union of `Sym_J` over all `J` is exactly the quasi-symmetric
/// functions (constants sit in `Sym_∅`). Ties go to the numerically smallest
/// mask of `J`.
pub fn nearest_quasisym(f: &TruthTable) -> Result<(DistanceValue, DependencySet)> {
    let n = f.arity();
    check_cap("dist_quasisym", n, QUASISYM_ARITY_CAP)?;
    let support: Vec<u64> = f.support().collect();
    let binom: Vec<Vec<u64>> = (0..=n).map(binomials).collect();
    let masks = 0..(1u64 << n);
    let cost = |mask: u64| (flips_to_sym_on(&support, n, mask, &binom), mask);

    #[cfg(feature = "parallel")]
    let best = {
        use rayon::prelude::*;
        masks.into_par_iter().map(cost).min()
    };
    #[cfg(not(feature = "parallel"))]
    let best = masks.map(cost).min();

    let (flips, mask) = best.expect("at least the empty set is scanned");
    Ok((DistanceValue::new(flips, n), DependencySet::from_mask(mask)))
}

pub fn dist_quasisym(f: &TruthTable) -> Result<DistanceValue> {
    nearest_quasisym(f).map(|(d, _)| d)
}

/// Arguments `i` for which some `x` has `f(x) != f(x ^ e_i)`.
pub fn dependent_set(f: &TruthTable) -> Result<DependencySet> {
    const LOW: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    let n = f.arity();
    check_cap("dependent_set", n, DEPENDENCY_ARITY_CAP)?;
    let words = f.words();
    let valid = if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    };
    let mut deps = DependencySet::new();
    for i in 0..n {
        let depends = if let Some(&low) = LOW.get(i) {
            let shift = 1 << i;
            words.iter().any(|&w| (w ^ (w >> shift)) & low & valid != 0)
        } else {
            let stride = 1usize << (i - 6);
            (0..words.len())
                .filter(|a| a & stride == 0)
                .any(|a| words[a] != words[a + stride])
        };
        if depends {
            deps.insert(i);
        }
    }
    Ok(deps)
}
