//! Randomized property testers for Boolean functions.
//!
//! The crate provides one-sided-error testers for symmetry, constancy and
//! quasi-symmetry (symmetry in the arguments a function actually depends
//! on), an estimator for the set of arguments a function depends on, exact
//! brute-force distances to each of those classes, and a seeded Monte-Carlo
//! harness for checking the testers' guarantees empirically.
//!
//! ```
//! use qsym::{quasisymmetry_test, CountingOracle, Oracle, RandomSource, TruthTable};
//!
//! // majority of arguments 0, 2 and 3 out of 5
//! let table = TruthTable::from_fn(5, |x| x.weight_on(&[0, 2, 3]) >= 2).unwrap();
//! let f = CountingOracle::new(&table);
//! let v = quasisymmetry_test(&f, 0.1, 0.05, &mut RandomSource::new(7)).unwrap();
//! assert!(v.is_yes());
//! assert_eq!(v.queries, f.queries());
//! ```

mod error;

pub mod distance;
pub mod families;
pub mod oracle;
pub mod point;
pub mod record;
pub mod sampling;
pub mod table;
pub mod testers;
pub mod trials;
pub mod witness;

pub use distance::{
    dependent_set, dist_const, dist_junta, dist_quasisym, dist_sym, distance, nearest_quasisym,
    DependencySet, Distance, DistanceValue,
};
pub use error::{Error, Result};
pub use families::{build_function, FunctionSpec};
pub use oracle::{restrict, BooleanFunction, CountingOracle, FnFunction, Oracle, Restriction};
pub use point::{embed_point, Assignment, Point};
pub use sampling::RandomSource;
pub use table::{TruthTable, MAX_TABLE_ARITY};
pub use testers::{
    constancy_basic_step, constancy_test, dependency_estimate, dependency_estimate_with,
    dependency_search, quasisym_basic_step, quasisymmetry_test, quasisymmetry_test_with,
    repetitions, symmetry_basic_step, symmetry_test, Answer, EstimateResult, Fixing, Verdict,
};
pub use trials::{run_estimates, run_trials, TesterKind, TrialReport};
pub use witness::{verify_witness, Witness};
