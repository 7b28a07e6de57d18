//! Named function families used as test inputs.
//!
//! A [`FunctionSpec`] is a serializable description; [`build_function`]
//! turns it into an evaluator. Specs number arguments from 1, like the
//! command line. Formula families (everything except `random-table`,
//! `perturbed` and `table`) evaluate without a table and have no arity cap.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::oracle::BooleanFunction;
use crate::point::Point;
use crate::sampling::RandomSource;
use crate::table::{TruthTable, MAX_TABLE_ARITY};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FunctionSpec {
    Const {
        n: usize,
        value: bool,
    },
    /// `f(x) = x_index`.
    Dictator {
        n: usize,
        index: usize,
    },
    Parity {
        n: usize,
    },
    /// 1 iff more than half the arguments are 1.
    Majority {
        n: usize,
    },
    /// 1 iff at least `t` arguments are 1.
    Threshold {
        n: usize,
        t: usize,
    },
    /// Uniformly random table derived from `seed`.
    RandomTable {
        n: usize,
        seed: u64,
    },
    /// `f(x) = levels[|x_args|]`: symmetric in `args`, ignores the rest.
    SymJunta {
        n: usize,
        args: Vec<usize>,
        levels: Vec<bool>,
    },
    /// `base` with exactly `flips` distinct table entries complemented.
    Perturbed {
        base: Box<FunctionSpec>,
        flips: u64,
        seed: u64,
    },
    /// An explicit truth table.
    Table {
        #[serde(serialize_with = "table_to_text", deserialize_with = "table_from_text")]
        table: TruthTable,
    },
}

fn table_to_text<S: Serializer>(t: &TruthTable, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(t.to_text().trim_end())
}

fn table_from_text<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<TruthTable, D::Error> {
    let text = String::deserialize(d)?;
    text.parse().map_err(serde::de::Error::custom)
}

impl FunctionSpec {
    pub fn arity(&self) -> usize {
        match self {
            FunctionSpec::Const { n, .. }
            | FunctionSpec::Dictator { n, .. }
            | FunctionSpec::Parity { n }
            | FunctionSpec::Majority { n }
            | FunctionSpec::Threshold { n, .. }
            | FunctionSpec::RandomTable { n, .. }
            | FunctionSpec::SymJunta { n, .. } => *n,
            FunctionSpec::Perturbed { base, .. } => base.arity(),
            FunctionSpec::Table { table } => table.arity(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            FunctionSpec::Const { .. } => "const",
            FunctionSpec::Dictator { .. } => "dictator",
            FunctionSpec::Parity { .. } => "parity",
            FunctionSpec::Majority { .. } => "majority",
            FunctionSpec::Threshold { .. } => "threshold",
            FunctionSpec::RandomTable { .. } => "random-table",
            FunctionSpec::SymJunta { .. } => "sym-junta",
            FunctionSpec::Perturbed { .. } => "perturbed",
            FunctionSpec::Table { .. } => "table",
        }
    }

    /// Short human-readable description, e.g. `dictator(n=5,i=3)`.
    pub fn label(&self) -> String {
        match self {
            FunctionSpec::Const { n, value } => format!("const(n={n},v={})", u8::from(*value)),
            FunctionSpec::Dictator { n, index } => format!("dictator(n={n},i={index})"),
            FunctionSpec::Parity { n } => format!("parity(n={n})"),
            FunctionSpec::Majority { n } => format!("majority(n={n})"),
            FunctionSpec::Threshold { n, t } => format!("threshold(n={n},t={t})"),
            FunctionSpec::RandomTable { n, seed } => format!("random-table(n={n},seed={seed})"),
            FunctionSpec::SymJunta { n, args, levels } => {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                let levels: String = levels.iter().map(|&b| if b { '1' } else { '0' }).collect();
                format!("sym-junta(n={n},J={{{}}},levels={levels})", args.join(","))
            }
            FunctionSpec::Perturbed { base, flips, seed } => {
                format!("perturbed({},m={flips},seed={seed})", base.label())
            }
            FunctionSpec::Table { table } => format!("table(n={})", table.arity()),
        }
    }

    /// Tabulates the function. Fails above [`MAX_TABLE_ARITY`].
    pub fn table(&self) -> Result<TruthTable> {
        if let FunctionSpec::Table { table } = self {
            return Ok(table.clone());
        }
        let f = build_function(self)?;
        TruthTable::from_function(&*f)
    }
}

#[derive(Clone, Debug)]
enum Formula {
    Const(bool),
    Dictator(usize),
    Parity,
    Majority,
    Threshold(usize),
    SymJunta { args: Vec<usize>, levels: Vec<bool> },
}

#[derive(Clone, Debug)]
struct FormulaFunction {
    n: usize,
    formula: Formula,
}

impl BooleanFunction for FormulaFunction {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Point) -> bool {
        match &self.formula {
            Formula::Const(v) => *v,
            Formula::Dictator(i) => x.get(*i),
            Formula::Parity => x.weight() % 2 == 1,
            Formula::Majority => 2 * x.weight() > self.n,
            Formula::Threshold(t) => x.weight() >= *t,
            Formula::SymJunta { args, levels } => levels[x.weight_on(args)],
        }
    }
}

fn check_arg(arg: usize, n: usize) -> Result<usize> {
    if (1..=n).contains(&arg) {
        Ok(arg - 1)
    } else {
        Err(Error::Usage(format!("argument {arg} is outside 1..={n}")))
    }
}

fn formula(n: usize, formula: Formula) -> Arc<dyn BooleanFunction> {
    Arc::new(FormulaFunction { n, formula })
}

fn random_table(n: usize, seed: u64) -> Result<TruthTable> {
    let mut rng = RandomSource::new(seed);
    let mut t = TruthTable::new(n)?;
    let len = t.len();
    let mut base = 0u64;
    while base < len {
        let word = rng.next_u64();
        for b in 0..64.min(len - base) {
            if word >> b & 1 == 1 {
                t.set(base + b, true);
            }
        }
        base += 64;
    }
    Ok(t)
}

/// `m` distinct uniform indices below `len` (Floyd's algorithm).
fn distinct_indices(len: u64, m: u64, rng: &mut RandomSource) -> BTreeSet<u64> {
    let mut chosen = BTreeSet::new();
    for j in (len - m)..len {
        let t = rng.below(j + 1);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    chosen
}

/// Builds the evaluator described by `spec`.
pub fn build_function(spec: &FunctionSpec) -> Result<Arc<dyn BooleanFunction>> {
    Ok(match spec {
        FunctionSpec::Const { n, value } => formula(*n, Formula::Const(*value)),
        FunctionSpec::Dictator { n, index } => {
            formula(*n, Formula::Dictator(check_arg(*index, *n)?))
        }
        FunctionSpec::Parity { n } => formula(*n, Formula::Parity),
        FunctionSpec::Majority { n } => formula(*n, Formula::Majority),
        FunctionSpec::Threshold { n, t } => formula(*n, Formula::Threshold(*t)),
        FunctionSpec::SymJunta { n, args, levels } => {
            let mut seen = BTreeSet::new();
            let mut zero_based = Vec::with_capacity(args.len());
            for &a in args {
                let a0 = check_arg(a, *n)?;
                if !seen.insert(a0) {
                    return Err(Error::Usage(format!("argument {a} repeated in sym-junta")));
                }
                zero_based.push(a0);
            }
            if levels.len() != args.len() + 1 {
                return Err(Error::Usage(format!(
                    "sym-junta over {} arguments needs {} level values, got {}",
                    args.len(),
                    args.len() + 1,
                    levels.len()
                )));
            }
            formula(
                *n,
                Formula::SymJunta {
                    args: zero_based,
                    levels: levels.clone(),
                },
            )
        }
        FunctionSpec::RandomTable { n, seed } => Arc::new(random_table(*n, *seed)?),
        FunctionSpec::Perturbed { base, flips, seed } => {
            let n = base.arity();
            if n > MAX_TABLE_ARITY {
                return Err(Error::Capacity {
                    what: "perturbed functions",
                    arity: n,
                    limit: MAX_TABLE_ARITY,
                });
            }
            let mut t = base.table()?;
            if *flips > t.len() {
                return Err(Error::Usage(format!(
                    "cannot flip {flips} entries of a table with {} entries",
                    t.len()
                )));
            }
            let mut rng = RandomSource::new(*seed);
            for i in distinct_indices(t.len(), *flips, &mut rng) {
                t.flip(i);
            }
            Arc::new(t)
        }
        FunctionSpec::Table { table } => Arc::new(table.clone()),
    })
}
