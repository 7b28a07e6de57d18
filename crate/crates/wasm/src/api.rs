//! The demo operations, with string errors for the JavaScript side.

use serde::Serialize;

use qsym::distance::nearest_quasisym;
use qsym::record::{Params, VerdictRecord};
use qsym::testers::quasisym_repetitions;
use qsym::trials::run_trials;
use qsym::{
    build_function, dependent_set, dist_const, dist_sym, repetitions, CountingOracle,
    DistanceValue, FunctionSpec, RandomSource, TesterKind,
};

/// Largest arity the page accepts; keeps every call well under a second.
pub const MAX_DEMO_ARITY: usize = 12;
/// Tables up to this arity are included in [`describe`] output.
const MAX_SHOWN_TABLE: usize = 8;
const MAX_TRIALS: u32 = 20_000;
const MAX_POINTS: u32 = 64;

fn parse_spec(spec_json: &str) -> Result<FunctionSpec, String> {
    let spec: FunctionSpec =
        serde_json::from_str(spec_json).map_err(|e| format!("invalid function spec: {e}"))?;
    if spec.arity() > MAX_DEMO_ARITY {
        return Err(format!(
            "the demo handles at most {MAX_DEMO_ARITY} arguments, got {}",
            spec.arity()
        ));
    }
    // surfaces invalid family parameters before any work is done
    build_function(&spec).map_err(|e| e.to_string())?;
    Ok(spec)
}

fn tester_kind(name: &str) -> Result<TesterKind, String> {
    TesterKind::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = TesterKind::ALL.iter().map(|k| k.name()).collect();
        format!(
            "unknown tester {name:?}; expected one of {}",
            known.join(", ")
        )
    })
}

fn params_for(kind: TesterKind, eps: f64, delta: f64) -> Option<Params> {
    kind.takes_params().then_some(Params { eps, delta })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn one_based(set: &qsym::DependencySet) -> Vec<usize> {
    set.iter().map(|a| a + 1).collect()
}

#[derive(Serialize)]
struct Description {
    label: String,
    arity: usize,
    /// Truth-table text, for small arities.
    table: Option<String>,
    ones: u64,
    dist_const: DistanceValue,
    dist_sym: DistanceValue,
    dist_qsym: DistanceValue,
    /// Arguments of a nearest quasi-symmetric function, from 1.
    nearest_qsym_args: Vec<usize>,
    dependencies: Vec<usize>,
}

pub fn describe(spec_json: &str) -> Result<String, String> {
    let spec = parse_spec(spec_json)?;
    let table = spec.table().map_err(|e| e.to_string())?;
    let err = |e: qsym::Error| e.to_string();
    let (dist_qsym, set) = nearest_quasisym(&table).map_err(err)?;
    to_json(&Description {
        label: spec.label(),
        arity: table.arity(),
        table: (table.arity() <= MAX_SHOWN_TABLE).then(|| table.to_text().trim_end().to_string()),
        ones: table.ones(),
        dist_const: dist_const(&table),
        dist_sym: dist_sym(&table).map_err(err)?,
        dist_qsym,
        nearest_qsym_args: one_based(&set),
        dependencies: one_based(&dependent_set(&table).map_err(err)?),
    })
}

pub fn run_tester(
    spec_json: &str,
    tester: &str,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<String, String> {
    let spec = parse_spec(spec_json)?;
    let kind = tester_kind(tester)?;
    let params = params_for(kind, eps, delta);
    let err = |e: qsym::Error| e.to_string();
    let func = build_function(&spec).map_err(err)?;
    let cap = kind.query_cap(spec.arity(), params).map_err(err)?;
    let k = match (kind, params) {
        (TesterKind::QuasiSymmetry | TesterKind::QuasiSymmetryResampled, Some(p)) => {
            quasisym_repetitions(p.delta).map_err(err)?
        }
        (_, Some(p)) => repetitions(p.eps, p.delta).map_err(err)?,
        (_, None) => 1,
    };
    let oracle = CountingOracle::new(&*func);
    let v = kind
        .run(&oracle, params, &mut RandomSource::new(seed))
        .map_err(err)?;
    to_json(&VerdictRecord::new(kind.name(), &v, k, cap, seed, params))
}

#[derive(Serialize)]
struct CurvePoint {
    flips: u64,
    /// Exact distance from the perturbed function to the tester's class.
    distance: Option<DistanceValue>,
    rejection_rate: f64,
    wilson_low: f64,
    wilson_high: f64,
    mean_queries: f64,
    max_queries: u64,
    query_cap: u64,
}

/// Perturbs `spec` by `0, m, 2m, ...` flips (up to half the table) and
/// runs `trials` seeded trials at each point.
pub fn rejection_curve(
    spec_json: &str,
    tester: &str,
    eps: f64,
    delta: f64,
    points: u32,
    trials: u32,
    seed: u64,
) -> Result<String, String> {
    let base = parse_spec(spec_json)?;
    let kind = tester_kind(tester)?;
    let params = params_for(kind, eps, delta);
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must be in 2..={MAX_POINTS}"));
    }
    if !(1..=MAX_TRIALS).contains(&trials) {
        return Err(format!("trials must be in 1..={MAX_TRIALS}"));
    }
    let half = (1u64 << base.arity()) / 2;
    let mut curve = Vec::with_capacity(points as usize);
    for i in 0..points as u64 {
        let flips = half * i / (points as u64 - 1);
        let spec = FunctionSpec::Perturbed {
            base: Box::new(base.clone()),
            flips,
            seed: seed.wrapping_add(i),
        };
        let r = run_trials(&spec, kind, params, trials as u64, seed).map_err(|e| e.to_string())?;
        curve.push(CurvePoint {
            flips,
            distance: r.exact_distance,
            rejection_rate: r.rejection_rate,
            wilson_low: r.wilson_low,
            wilson_high: r.wilson_high,
            mean_queries: r.mean_queries,
            max_queries: r.max_queries,
            query_cap: r.query_cap,
        });
    }
    to_json(&curve)
}
