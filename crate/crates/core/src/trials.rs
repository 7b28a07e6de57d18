//! Monte-Carlo runs of a tester over many independent random streams.
//!
//! Trial `i` (1-based) draws from child stream `i` of the root seed, and
//! aggregation uses only counts, sums and maxima, so a report is identical
//! whether trials run sequentially or in parallel.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::distance::{
    dependent_set, dist_const, dist_quasisym, dist_sym, DistanceValue, DEPENDENCY_ARITY_CAP,
    QUASISYM_ARITY_CAP, SYM_ARITY_CAP,
};
use crate::error::{Error, Result};
use crate::families::{build_function, FunctionSpec};
use crate::oracle::{BooleanFunction, CountingOracle, Oracle};
use crate::record::Params;
use crate::sampling::RandomSource;
use crate::table::{TruthTable, MAX_TABLE_ARITY};
use crate::testers::{
    constancy_basic_step, constancy_test, dependency_estimate_with, estimate_query_cap,
    quasisym_query_cap, quasisymmetry_test_with, repetitions, symmetry_basic_step,
    symmetry_query_cap, symmetry_test, Fixing, Verdict,
};
use crate::witness::{verify_witness, Witness};

/// Two-sided 99% normal quantile.
const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TesterKind {
    SymmetryStep,
    Symmetry,
    ConstancyStep,
    Constancy,
    QuasiSymmetry,
    /// Quasi-symmetry with [`Fixing::PerStep`] in the dependency estimate.
    QuasiSymmetryResampled,
}

impl TesterKind {
    pub const ALL: [TesterKind; 6] = [
        TesterKind::SymmetryStep,
        TesterKind::Symmetry,
        TesterKind::ConstancyStep,
        TesterKind::Constancy,
        TesterKind::QuasiSymmetry,
        TesterKind::QuasiSymmetryResampled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TesterKind::SymmetryStep => "symmetry-step",
            TesterKind::Symmetry => "symmetry",
            TesterKind::ConstancyStep => "constancy-step",
            TesterKind::Constancy => "constancy",
            TesterKind::QuasiSymmetry => "quasi-symmetry",
            TesterKind::QuasiSymmetryResampled => "quasi-symmetry-resampled",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the tester takes `(eps, delta)`. Basic steps take neither.
    pub fn takes_params(self) -> bool {
        !matches!(self, TesterKind::SymmetryStep | TesterKind::ConstancyStep)
    }

    /// Hard query bound for one run on an `n`-argument function.
    pub fn query_cap(self, n: usize, params: Option<Params>) -> Result<u64> {
        let need =
            || params.ok_or_else(|| Error::Usage(format!("{} needs eps and delta", self.name())));
        Ok(match self {
            TesterKind::SymmetryStep => u64::from(n >= 2) * 2,
            TesterKind::ConstancyStep => u64::from(n >= 1) * 2,
            TesterKind::Symmetry if n <= 1 => 0,
            TesterKind::Constancy if n == 0 => 0,
            TesterKind::Symmetry | TesterKind::Constancy => {
                let p = need()?;
                symmetry_query_cap(p.eps, p.delta)?
            }
            TesterKind::QuasiSymmetry | TesterKind::QuasiSymmetryResampled => {
                let p = need()?;
                quasisym_query_cap(n, p.eps, p.delta)?
            }
        })
    }

    pub fn run<O: Oracle + ?Sized>(
        self,
        f: &O,
        params: Option<Params>,
        rng: &mut RandomSource,
    ) -> Result<Verdict> {
        let p =
            || params.ok_or_else(|| Error::Usage(format!("{} needs eps and delta", self.name())));
        match self {
            TesterKind::SymmetryStep => symmetry_basic_step(f, rng),
            TesterKind::ConstancyStep => constancy_basic_step(f, rng),
            TesterKind::Symmetry => {
                let p = p()?;
                symmetry_test(f, p.eps, p.delta, rng)
            }
            TesterKind::Constancy => {
                let p = p()?;
                constancy_test(f, p.eps, p.delta, rng)
            }
            TesterKind::QuasiSymmetry => {
                let p = p()?;
                quasisymmetry_test_with(f, p.eps, p.delta, Fixing::PerTest, rng)
            }
            TesterKind::QuasiSymmetryResampled => {
                let p = p()?;
                quasisymmetry_test_with(f, p.eps, p.delta, Fixing::PerStep, rng)
            }
        }
    }

    /// Exact distance from `table` to the class this tester targets, when
    /// the arity is within the oracle's cap.
    pub fn exact_distance(self, table: &TruthTable) -> Option<DistanceValue> {
        match self {
            TesterKind::SymmetryStep | TesterKind::Symmetry => dist_sym(table).ok(),
            TesterKind::ConstancyStep | TesterKind::Constancy => Some(dist_const(table)),
            TesterKind::QuasiSymmetry | TesterKind::QuasiSymmetryResampled => {
                dist_quasisym(table).ok()
            }
        }
    }

    fn distance_cap(self) -> usize {
        match self {
            TesterKind::SymmetryStep | TesterKind::Symmetry => SYM_ARITY_CAP,
            TesterKind::ConstancyStep | TesterKind::Constancy => MAX_TABLE_ARITY,
            TesterKind::QuasiSymmetry | TesterKind::QuasiSymmetryResampled => QUASISYM_ARITY_CAP,
        }
    }
}

/// Two-sided Wilson score interval at 99% confidence for `hits / trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z_99 * Z_99;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_99 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub spec: FunctionSpec,
    pub test: TesterKind,
    pub params: Option<Params>,
    pub seed: u64,
    pub trials: u64,
    pub yes_count: u64,
    pub no_count: u64,
    pub total_queries: u64,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub query_cap: u64,
    /// `no_count / trials`.
    pub rejection_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// `no` answers whose witness failed re-verification; always 0 unless
    /// something is broken.
    pub witness_failures: u64,
    pub exact_distance: Option<DistanceValue>,
    /// Set when the arity is above the exact oracle's cap.
    pub exact_distance_omitted: bool,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    yes: u64,
    no: u64,
    total_queries: u64,
    max_queries: u64,
    witness_failures: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            yes: self.yes + o.yes,
            no: self.no + o.no,
            total_queries: self.total_queries + o.total_queries,
            max_queries: self.max_queries.max(o.max_queries),
            witness_failures: self.witness_failures + o.witness_failures,
        }
    }
}

fn run_indexed<T, F>(trials: u64, fold: F) -> Result<T>
where
    T: Default + Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
    T: MergeTally,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (1..=trials)
            .into_par_iter()
            .map(&fold)
            .try_reduce(T::default, |a, b| Ok(a.merge_with(b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (1..=trials).try_fold(T::default(), |acc, i| Ok(acc.merge_with(fold(i)?)))
    }
}

trait MergeTally {
    fn merge_with(self, other: Self) -> Self;
}

impl MergeTally for Tally {
    fn merge_with(self, other: Self) -> Self {
        self.merge(other)
    }
}

fn check_params(tester_name: &str, takes: bool, params: Option<Params>) -> Result<()> {
    match (takes, params) {
        (true, None) => Err(Error::Usage(format!("{tester_name} needs eps and delta"))),
        (false, Some(_)) => Err(Error::Usage(format!(
            "{tester_name} is a single basic step and takes no eps/delta"
        ))),
        _ => Ok(()),
    }
}

/// Runs `tester` on the function described by `spec` for `trials`
/// independent seeded trials.
pub fn run_trials(
    spec: &FunctionSpec,
    tester: TesterKind,
    params: Option<Params>,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    let func = build_function(spec)?;
    run_trials_on(spec, func, tester, params, trials, seed)
}

/// As [`run_trials`], with an already-built evaluator for `spec`.
pub fn run_trials_on(
    spec: &FunctionSpec,
    func: Arc<dyn BooleanFunction>,
    tester: TesterKind,
    params: Option<Params>,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::Usage("at least one trial is required".into()));
    }
    check_params(tester.name(), tester.takes_params(), params)?;
    let n = func.arity();
    let query_cap = tester.query_cap(n, params)?;

    let tally = run_indexed(trials, |i| {
        let mut rng = RandomSource::with_stream(seed, i);
        let oracle = CountingOracle::new(&*func);
        let v = tester.run(&oracle, params, &mut rng)?;
        let mut t = Tally {
            total_queries: v.queries,
            max_queries: v.queries,
            ..Tally::default()
        };
        match &v.witness {
            None => t.yes = 1,
            Some(w) => {
                t.no = 1;
                let fresh = CountingOracle::new(&*func);
                if !verify_witness(&fresh, w) {
                    t.witness_failures = 1;
                }
            }
        }
        Ok(t)
    })?;

    let (exact_distance, exact_distance_omitted) = if n <= tester.distance_cap() {
        let table = match spec {
            FunctionSpec::Table { table } => table.clone(),
            _ => TruthTable::from_function(&*func)?,
        };
        (tester.exact_distance(&table), false)
    } else {
        (None, true)
    };

    let (wilson_low, wilson_high) = wilson_interval(tally.no, trials);
    Ok(TrialReport {
        spec: spec.clone(),
        test: tester,
        params,
        seed,
        trials,
        yes_count: tally.yes,
        no_count: tally.no,
        total_queries: tally.total_queries,
        mean_queries: tally.total_queries as f64 / trials as f64,
        max_queries: tally.max_queries,
        query_cap,
        rejection_rate: tally.no as f64 / trials as f64,
        wilson_low,
        wilson_high,
        witness_failures: tally.witness_failures,
        exact_distance,
        exact_distance_omitted,
    })
}

/// How often each set was returned by the dependency estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCount {
    /// Arguments numbered from 1.
    pub set: Vec<usize>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub spec: FunctionSpec,
    pub params: Params,
    pub seed: u64,
    pub trials: u64,
    /// Distinct returned sets, ordered by set.
    pub sets: Vec<SetCount>,
    pub total_queries: u64,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub query_cap: u64,
    pub witness_failures: u64,
    /// Exact dependency set (numbered from 1), when within the oracle cap.
    pub exact_dependencies: Option<Vec<usize>>,
    /// Runs whose set was not contained in `exact_dependencies`.
    pub not_contained: Option<u64>,
}

#[derive(Default)]
struct EstimateTally {
    tally: Tally,
    sets: BTreeMap<Vec<usize>, u64>,
}

impl MergeTally for EstimateTally {
    fn merge_with(mut self, other: Self) -> Self {
        self.tally = self.tally.merge(other.tally);
        for (k, v) in other.sets {
            *self.sets.entry(k).or_default() += v;
        }
        self
    }
}

/// Runs the dependency estimate `trials` times.
pub fn run_estimates(
    spec: &FunctionSpec,
    params: Params,
    fixing: Fixing,
    trials: u64,
    seed: u64,
) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::Usage("at least one trial is required".into()));
    }
    let func = build_function(spec)?;
    let n = func.arity();
    let query_cap = estimate_query_cap(n, params.eps, params.delta)?;
    // validates the parameters before any trial runs
    repetitions(params.eps, params.delta)?;

    let tally = run_indexed(trials, |i| {
        let mut rng = RandomSource::with_stream(seed, i);
        let oracle = CountingOracle::new(&*func);
        let r = dependency_estimate_with(&oracle, params.eps, params.delta, fixing, &mut rng)?;
        let fresh = CountingOracle::new(&*func);
        let failures = r
            .evidence
            .iter()
            .filter(|w| !verify_witness(&fresh, &Witness::ArgDependency((*w).clone())))
            .count() as u64;
        let mut sets = BTreeMap::new();
        sets.insert(r.set.iter().map(|a| a + 1).collect(), 1);
        Ok(EstimateTally {
            tally: Tally {
                yes: 0,
                no: 0,
                total_queries: r.queries,
                max_queries: r.queries,
                witness_failures: failures,
            },
            sets,
        })
    })?;

    let exact: Option<Vec<usize>> = if n <= DEPENDENCY_ARITY_CAP {
        let table = spec.table()?;
        Some(dependent_set(&table)?.iter().map(|a| a + 1).collect())
    } else {
        None
    };
    let not_contained = exact.as_ref().map(|dep| {
        tally
            .sets
            .iter()
            .filter(|(set, _)| !set.iter().all(|a| dep.contains(a)))
            .map(|(_, c)| c)
            .sum()
    });

    Ok(EstimateReport {
        spec: spec.clone(),
        params,
        seed,
        trials,
        sets: tally
            .sets
            .into_iter()
            .map(|(set, count)| SetCount { set, count })
            .collect(),
        total_queries: tally.tally.total_queries,
        mean_queries: tally.tally.total_queries as f64 / trials as f64,
        max_queries: tally.tally.max_queries,
        query_cap,
        witness_failures: tally.tally.witness_failures,
        exact_dependencies: exact,
        not_contained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_values() {
        // p = 0.5, n = 100: center 0.5, half-width
        // z / (1 + z^2/n) * sqrt(1/400 + z^2/40000) = 0.124720...
        let (lo, hi) = wilson_interval(50, 100);
        assert!(
            (lo - 0.375280).abs() < 1e-5 && (hi - 0.624720).abs() < 1e-5,
            "{lo} {hi}"
        );
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.3 && hi < 0.5);
        let (lo, hi) = wilson_interval(10, 10);
        assert!(lo > 0.5 && hi == 1.0);
    }

    #[test]
    fn parity_always_symmetric() {
        let p = Params {
            eps: 0.1,
            delta: 0.05,
        };
        let r = run_trials(
            &FunctionSpec::Parity { n: 6 },
            TesterKind::Symmetry,
            Some(p),
            1000,
            3,
        )
        .unwrap();
        assert_eq!(r.yes_count, 1000);
        assert!(r.max_queries <= r.query_cap);
        assert_eq!(r.exact_distance, Some(DistanceValue::zero(6)));
    }

    #[test]
    fn dictator_step_rejects_surely() {
        let spec = FunctionSpec::Dictator { n: 2, index: 1 };
        let r = run_trials(&spec, TesterKind::SymmetryStep, None, 10_000, 8).unwrap();
        assert_eq!(r.rejection_rate, 1.0);
        assert_eq!(r.witness_failures, 0);
    }

    #[test]
    fn reports_are_reproducible() {
        let spec = FunctionSpec::RandomTable { n: 6, seed: 4 };
        let p = Some(Params {
            eps: 0.2,
            delta: 0.1,
        });
        let a = run_trials(&spec, TesterKind::QuasiSymmetry, p, 300, 77).unwrap();
        let b = run_trials(&spec, TesterKind::QuasiSymmetry, p, 300, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn param_mismatch_is_usage_error() {
        let spec = FunctionSpec::Parity { n: 3 };
        assert!(matches!(
            run_trials(&spec, TesterKind::Symmetry, None, 10, 0),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            run_trials(
                &spec,
                TesterKind::SymmetryStep,
                Some(Params {
                    eps: 0.1,
                    delta: 0.1
                }),
                10,
                0
            ),
            Err(Error::Usage(_))
        ));
        assert!(run_trials(&spec, TesterKind::SymmetryStep, None, 0, 0).is_err());
    }

    #[test]
    fn large_arity_omits_distance() {
        let spec = FunctionSpec::Majority { n: 40 };
        let p = Some(Params {
            eps: 0.3,
            delta: 0.3,
        });
        let r = run_trials(&spec, TesterKind::Symmetry, p, 20, 1).unwrap();
        assert!(r.exact_distance_omitted && r.exact_distance.is_none());
        assert_eq!(r.yes_count, 20);
    }

    #[test]
    fn estimates_on_parity() {
        let p = Params {
            eps: 0.1,
            delta: 0.1,
        };
        let r = run_estimates(&FunctionSpec::Parity { n: 4 }, p, Fixing::PerTest, 500, 5).unwrap();
        assert_eq!(r.not_contained, Some(0));
        assert_eq!(r.witness_failures, 0);
        assert!(r.max_queries <= r.query_cap);
        assert_eq!(r.exact_dependencies, Some(vec![1, 2, 3, 4]));
        let full = r
            .sets
            .iter()
            .find(|s| s.set == vec![1, 2, 3, 4])
            .map_or(0, |s| s.count);
        assert!(full >= 400);
    }
}
