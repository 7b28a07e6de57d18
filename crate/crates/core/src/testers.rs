//! The randomized testers and the dependency-set estimator.
//!
//! Every procedure takes its randomness from a caller-owned
//! [`RandomSource`] and reports the queries it charged to the oracle.
//! Each `no` answer carries a [`Witness`] that [`verify_witness`] accepts.
//!
//! [`verify_witness`]: crate::witness::verify_witness

use crate::distance::DependencySet;
use crate::error::{check_arity, check_unit, Error, Result};
use crate::oracle::{restrict, Oracle, Restriction};
use crate::point::Point;
use crate::sampling::{
    sample_any, sample_assignment, sample_excluding, sample_excluding_poles,
    sample_same_weight_excluding, RandomSource,
};
use crate::witness::{DependencyWitness, PointPair, RestrictedPair, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Witness>,
    pub queries: u64,
}

impl Verdict {
    fn yes(queries: u64) -> Self {
        Self {
            answer: Answer::Yes,
            witness: None,
            queries,
        }
    }

    fn no(witness: Witness, queries: u64) -> Self {
        Self {
            answer: Answer::No,
            witness: Some(witness),
            queries,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// Output of [`dependency_estimate`]: a set `J` of arguments `f` provably
/// depends on, with one witness per member (points at full arity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateResult {
    pub set: DependencySet,
    pub evidence: Vec<DependencyWitness>,
    pub queries: u64,
}

/// `k = ceil(ln(1/delta) / eps)`, the number of basic steps that drives the
/// acceptance probability of an `eps`-far function below `delta`.
pub fn repetitions(eps: f64, delta: f64) -> Result<u64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    Ok(((-delta.ln()) / eps).ceil().max(1.0) as u64)
}

/// `k = ceil(log_{4/3}(1/delta'))` basic steps of the quasi-symmetry test,
/// where `delta' = delta / 2`.
pub fn quasisym_repetitions(delta: f64) -> Result<u64> {
    check_unit("delta", delta)?;
    let half = delta / 2.0;
    Ok(((-half.ln()) / (4.0f64 / 3.0).ln()).ceil().max(1.0) as u64)
}

/// Smallest `c` with `(3/2)^c >= n`: the query bound of [`dependency_search`]
/// on `n` arguments.
pub fn search_query_cap(n: usize) -> u64 {
    let mut c = 0u32;
    // compare 3^c against n * 2^c exactly
    let (mut three, mut two) = (1u128, 1u128);
    while three < n as u128 * two {
        c += 1;
        three *= 3;
        two *= 2;
    }
    c as u64
}

/// Worst-case queries of [`symmetry_test`] or [`constancy_test`].
pub fn symmetry_query_cap(eps: f64, delta: f64) -> Result<u64> {
    Ok(2 * repetitions(eps, delta)?)
}

/// Worst-case queries of [`dependency_estimate`] on `n` arguments:
/// `n * (2 * repetitions(eps, delta / n) + search_query_cap(n))`.
pub fn estimate_query_cap(n: usize, eps: f64, delta: f64) -> Result<u64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    if n == 0 {
        return Ok(0);
    }
    let per_round = symmetry_query_cap(eps, delta / n as f64)? + search_query_cap(n);
    Ok(n as u64 * per_round)
}

/// Worst-case queries of [`quasisymmetry_test`]: the estimate with
/// `(eps/4, delta/2)` plus `k` basic steps, each a symmetry test with
/// `(eps/4, 1/2)`.
pub fn quasisym_query_cap(n: usize, eps: f64, delta: f64) -> Result<u64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    let (eps4, delta2) = (eps / 4.0, delta / 2.0);
    Ok(estimate_query_cap(n, eps4, delta2)?
        + quasisym_repetitions(delta)? * symmetry_query_cap(eps4, 0.5)?)
}

/// One probe for symmetry: two random distinct points of equal weight.
pub fn symmetry_basic_step<O: Oracle + ?Sized>(f: &O, rng: &mut RandomSource) -> Result<Verdict> {
    let n = f.arity();
    if n <= 1 {
        return Ok(Verdict::yes(0));
    }
    let x = sample_excluding_poles(n, rng)?;
    let y = sample_same_weight_excluding(&x, rng)?;
    probe(f, x, y, Witness::NonSymmetry)
}

/// One probe for constancy: two random distinct points.
pub fn constancy_basic_step<O: Oracle + ?Sized>(f: &O, rng: &mut RandomSource) -> Result<Verdict> {
    let n = f.arity();
    if n == 0 {
        return Ok(Verdict::yes(0));
    }
    let x = sample_any(n, rng);
    let y = sample_excluding(&x, rng)?;
    probe(f, x, y, Witness::NonConstancy)
}

fn probe<O: Oracle + ?Sized>(
    f: &O,
    x: Point,
    y: Point,
    wrap: fn(PointPair) -> Witness,
) -> Result<Verdict> {
    let before = f.queries();
    let fx = f.query(&x)?;
    let fy = f.query(&y)?;
    let used = f.queries() - before;
    if fx == fy {
        Ok(Verdict::yes(used))
    } else {
        Ok(Verdict::no(wrap(PointPair { x, y, fx, fy }), used))
    }
}

fn repeat_step<O: Oracle + ?Sized>(
    f: &O,
    k: u64,
    rng: &mut RandomSource,
    mut step: impl FnMut(&O, &mut RandomSource) -> Result<Verdict>,
) -> Result<Verdict> {
    let before = f.queries();
    for _ in 0..k {
        let v = step(f, rng)?;
        if let Some(w) = v.witness {
            return Ok(Verdict::no(w, f.queries() - before));
        }
    }
    Ok(Verdict::yes(f.queries() - before))
}

/// Accepts every symmetric function; rejects functions `eps`-far from
/// symmetric except with probability at most `delta`.
pub fn symmetry_test<O: Oracle + ?Sized>(
    f: &O,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
) -> Result<Verdict> {
    let k = repetitions(eps, delta)?;
    if f.arity() <= 1 {
        return Ok(Verdict::yes(0));
    }
    repeat_step(f, k, rng, |f, rng| symmetry_basic_step(f, rng))
}

/// Accepts every constant function; rejects functions `eps`-far from
/// constant except with probability at most `delta`.
pub fn constancy_test<O: Oracle + ?Sized>(
    f: &O,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
) -> Result<Verdict> {
    let k = repetitions(eps, delta)?;
    if f.arity() == 0 {
        return Ok(Verdict::yes(0));
    }
    repeat_step(f, k, rng, |f, rng| constancy_basic_step(f, rng))
}

/// Narrows a pair with `f(x) != f(y)` down to adjacent points by repeated
/// halving, returning the argument they differ in.
///
/// `fx` and `fy` are the already known values at `x` and `y`; only the
/// midpoints are queried, at most [`search_query_cap`]`(n)` of them.
pub fn dependency_search<O: Oracle + ?Sized>(
    f: &O,
    x: &Point,
    y: &Point,
    fx: bool,
    fy: bool,
) -> Result<DependencyWitness> {
    check_arity(f.arity(), x.len())?;
    check_arity(f.arity(), y.len())?;
    if fx == fy {
        return Err(Error::Usage(
            "dependency search needs endpoints with different values".into(),
        ));
    }
    if x == y {
        return Err(Error::Usage(
            "dependency search needs two distinct endpoints".into(),
        ));
    }
    let (mut lo, mut hi) = (x.clone(), y.clone());
    let (mut f_lo, mut f_hi) = (fx, fy);
    loop {
        let (d, diff) = lo.xor_delta(&hi)?;
        if d == 1 {
            return Ok(DependencyWitness {
                index: diff[0],
                pair: PointPair {
                    x: lo,
                    y: hi,
                    fx: f_lo,
                    fy: f_hi,
                },
            });
        }
        // take hi's values on the first floor(d/2) differing positions
        let mut z = lo.clone();
        for &i in &diff[..d / 2] {
            z.set(i, hi.get(i));
        }
        let fz = f.query(&z)?;
        if fz != f_lo {
            hi = z;
            f_hi = fz;
        } else {
            lo = z;
            f_lo = fz;
        }
    }
}

/// How the dependency estimate draws the values of already-found arguments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Fixing {
    /// One random assignment per round, shared by every basic step of that
    /// round's constancy test.
    #[default]
    PerTest,
    /// A fresh random assignment for every constancy basic step.
    ///
    /// With [`Fixing::PerTest`] a round can hit a restriction that happens
    /// to be constant and stop early even though `f` is far from every
    /// function of the arguments found so far; for example `x0 AND NOT x1`
    /// is accepted by the quasi-symmetry test about half the time although
    /// it is 1/4-far from quasi-symmetric. Redrawing per step makes each
    /// step reject with probability at least the distance to the junta
    /// class, which restores the `delta` bound. Query bounds are unchanged.
    PerStep,
}

/// Runs the dependency search on a restriction's non-constancy pair and
/// lifts the result to `f`'s numbering.
fn search_lifted<O: Oracle + ?Sized>(
    reduced: &Restriction<'_, O>,
    pair: &PointPair,
) -> Result<DependencyWitness> {
    let local = dependency_search(reduced, &pair.x, &pair.y, pair.fx, pair.fy)?;
    Ok(DependencyWitness {
        index: reduced.original_index(local.index)?,
        pair: PointPair {
            x: reduced.lift(&local.pair.x)?,
            y: reduced.lift(&local.pair.y)?,
            fx: local.pair.fx,
            fy: local.pair.fy,
        },
    })
}

fn non_constancy_pair(w: Witness) -> PointPair {
    match w {
        Witness::NonConstancy(p) => p,
        other => unreachable!("constancy test produced a {} witness", other.kind()),
    }
}

/// One round of the estimate: look for a further argument outside `found`.
fn next_dependency<O: Oracle + ?Sized>(
    f: &O,
    found: &DependencySet,
    eps: f64,
    delta: f64,
    fixing: Fixing,
    rng: &mut RandomSource,
) -> Result<Option<DependencyWitness>> {
    match fixing {
        Fixing::PerTest => {
            let reduced = restrict(f, sample_assignment(found, rng))?;
            match constancy_test(&reduced, eps, delta, rng)?.witness {
                None => Ok(None),
                Some(w) => search_lifted(&reduced, &non_constancy_pair(w)).map(Some),
            }
        }
        Fixing::PerStep => {
            let k = repetitions(eps, delta)?;
            if found.len() == f.arity() {
                return Ok(None);
            }
            for _ in 0..k {
                let reduced = restrict(f, sample_assignment(found, rng))?;
                if let Some(w) = constancy_basic_step(&reduced, rng)?.witness {
                    return search_lifted(&reduced, &non_constancy_pair(w)).map(Some);
                }
            }
            Ok(None)
        }
    }
}

/// Estimates the set of arguments `f` depends on.
///
/// The result is always a subset of the true dependency set, backed by one
/// verified witness per member. Each round fixes the arguments found so far
/// at random, runs a constancy test with `delta / n` on the rest, and on
/// rejection adds the argument located by [`dependency_search`].
pub fn dependency_estimate<O: Oracle + ?Sized>(
    f: &O,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
) -> Result<EstimateResult> {
    dependency_estimate_with(f, eps, delta, Fixing::PerTest, rng)
}

pub fn dependency_estimate_with<O: Oracle + ?Sized>(
    f: &O,
    eps: f64,
    delta: f64,
    fixing: Fixing,
    rng: &mut RandomSource,
) -> Result<EstimateResult> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    let before = f.queries();
    let n = f.arity();
    let mut found = DependencySet::new();
    let mut evidence = Vec::new();
    if n > 0 {
        let per_test_delta = delta / n as f64;
        while let Some(w) = next_dependency(f, &found, eps, per_test_delta, fixing, rng)? {
            debug_assert!(!found.contains(w.index));
            found.insert(w.index);
            evidence.push(w);
        }
    }
    Ok(EstimateResult {
        set: found,
        evidence,
        queries: f.queries() - before,
    })
}

/// Fixes the arguments outside `args` at random and runs a symmetry test
/// with `(eps, 1/2)` on what remains.
pub fn quasisym_basic_step<O: Oracle + ?Sized>(
    f: &O,
    eps: f64,
    args: &DependencySet,
    rng: &mut RandomSource,
) -> Result<Verdict> {
    let n = f.arity();
    if let Some(m) = args.max() {
        if m >= n {
            return Err(Error::IndexOutOfRange { index: m, arity: n });
        }
    }
    let fixing = sample_assignment(&args.complement(n), rng);
    let reduced = restrict(f, fixing)?;
    let v = symmetry_test(&reduced, eps, 0.5, rng)?;
    Ok(match v.witness {
        None => v,
        Some(Witness::NonSymmetry(pair)) => Verdict::no(
            Witness::RestrictedNonSymmetry(RestrictedPair {
                assignment: reduced.fixed().clone(),
                pair,
            }),
            v.queries,
        ),
        Some(other) => unreachable!("symmetry test produced a {} witness", other.kind()),
    })
}

/// Accepts every quasi-symmetric function; rejects functions `eps`-far
/// from quasi-symmetric except with probability at most `delta` (see
/// [`Fixing`] for a caveat on that bound).
pub fn quasisymmetry_test<O: Oracle + ?Sized>(
    f: &O,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
) -> Result<Verdict> {
    quasisymmetry_test_with(f, eps, delta, Fixing::PerTest, rng)
}

pub fn quasisymmetry_test_with<O: Oracle + ?Sized>(
    f: &O,
    eps: f64,
    delta: f64,
    fixing: Fixing,
    rng: &mut RandomSource,
) -> Result<Verdict> {
    check_unit("eps", eps)?;
    let k = quasisym_repetitions(delta)?;
    let (eps4, delta2) = (eps / 4.0, delta / 2.0);
    let before = f.queries();
    let estimate = dependency_estimate_with(f, eps4, delta2, fixing, rng)?;
    for _ in 0..k {
        let v = quasisym_basic_step(f, eps4, &estimate.set, rng)?;
        if let Some(Witness::RestrictedNonSymmetry(restricted)) = v.witness {
            let witness = Witness::QuasiAsymmetry {
                dependencies: estimate.evidence,
                restricted,
            };
            return Ok(Verdict::no(witness, f.queries() - before));
        }
    }
    Ok(Verdict::yes(f.queries() - before))
}
