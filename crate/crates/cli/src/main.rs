mod args;
mod output;
mod source;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::Value;

use qsym::distance::{dist_junta, nearest_quasisym};
use qsym::record::{EstimateRecord, Params, VerdictRecord, WitnessRecord};
use qsym::testers::{estimate_query_cap, quasisym_repetitions};
use qsym::trials::{run_estimates, run_trials_on};
use qsym::{
    build_function, dependency_estimate_with, dist_const, dist_sym, repetitions, verify_witness,
    BooleanFunction, CountingOracle, DependencySet, DistanceValue, Fixing, FunctionSpec,
    RandomSource, TesterKind, Witness,
};

use args::{ClassName, Cli, Command, Format, RunArgs, TestName};
use source::{parse_list, read_input, spec_from_args};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qsym::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

/// What a successful command reports through the exit status.
enum Outcome {
    Success,
    /// A `no` verdict, or a witness that failed to verify.
    Negative,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qsym: error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Test {
            tester,
            source,
            run,
            resample_per_step,
        } => {
            let spec = spec_from_args(&source)?;
            let kind = tester_kind(tester, resample_per_step)?;
            test(&spec, kind, &run, format)
        }
        Command::Estimate {
            what: _,
            source,
            run,
            resample_per_step,
        } => {
            let spec = spec_from_args(&source)?;
            let fixing = if resample_per_step {
                Fixing::PerStep
            } else {
                Fixing::PerTest
            };
            estimate(&spec, fixing, &run, format)
        }
        Command::Distance {
            class,
            source,
            junta_args,
        } => {
            let spec = spec_from_args(&source)?;
            distance(&spec, class, junta_args.as_deref(), format)
        }
        Command::Verify { source, witness } => {
            let spec = spec_from_args(&source)?;
            let text = read_input(&witness)?;
            verify(&spec, &text, format)
        }
        Command::Bench {
            tester,
            source,
            run,
            resample_per_step,
        } => {
            let spec = spec_from_args(&source)?;
            let kind = tester_kind(tester, resample_per_step)?;
            bench(&spec, kind, &run, format)
        }
    }
}

fn tester_kind(name: TestName, resample: bool) -> Result<TesterKind, CliError> {
    Ok(match (name, resample) {
        (TestName::Qsym, true) => TesterKind::QuasiSymmetryResampled,
        (_, true) => {
            return Err(CliError::Usage(
                "--resample-per-step applies to qsym only".into(),
            ))
        }
        (TestName::Sym, _) => TesterKind::Symmetry,
        (TestName::Const, _) => TesterKind::Constancy,
        (TestName::Qsym, _) => TesterKind::QuasiSymmetry,
        (TestName::SymStep, _) => TesterKind::SymmetryStep,
        (TestName::ConstStep, _) => TesterKind::ConstancyStep,
    })
}

/// eps/delta as the tester expects them: required for the full testers,
/// refused for single basic steps.
fn tester_params(kind: TesterKind, run: &RunArgs) -> Result<Option<Params>, CliError> {
    match (kind.takes_params(), run.eps, run.delta) {
        (true, Some(eps), Some(delta)) => Ok(Some(Params { eps, delta })),
        (true, _, _) => Err(CliError::Usage(format!(
            "{} needs --eps and --delta",
            kind.name()
        ))),
        (false, None, None) => Ok(None),
        (false, _, _) => Err(CliError::Usage(format!(
            "{} is a single basic step and takes no --eps/--delta",
            kind.name()
        ))),
    }
}

fn both_params(run: &RunArgs) -> Result<Params, CliError> {
    match (run.eps, run.delta) {
        (Some(eps), Some(delta)) => Ok(Params { eps, delta }),
        _ => Err(CliError::Usage("--eps and --delta are required".into())),
    }
}

fn trials(run: &RunArgs) -> Result<Option<u64>, CliError> {
    match run.trials {
        Some(0) => Err(CliError::Usage("--trials must be at least 1".into())),
        t => Ok(t),
    }
}

fn repetition_count(kind: TesterKind, params: Option<Params>) -> Result<u64, CliError> {
    Ok(match (kind, params) {
        (TesterKind::QuasiSymmetry | TesterKind::QuasiSymmetryResampled, Some(p)) => {
            quasisym_repetitions(p.delta)?
        }
        (_, Some(p)) => repetitions(p.eps, p.delta)?,
        (_, None) => 1,
    })
}

fn test(
    spec: &FunctionSpec,
    kind: TesterKind,
    run: &RunArgs,
    format: Format,
) -> Result<Outcome, CliError> {
    let params = tester_params(kind, run)?;
    let func = build_function(spec)?;
    if let Some(trials) = trials(run)? {
        let report = run_trials_on(spec, func, kind, params, trials, run.seed)?;
        output::emit(&report, format)?;
        return Ok(Outcome::Success);
    }
    let n = func.arity();
    let cap = kind.query_cap(n, params)?;
    let k = repetition_count(kind, params)?;
    let oracle = CountingOracle::new(&*func);
    let verdict = kind.run(&oracle, params, &mut RandomSource::new(run.seed))?;
    let record = VerdictRecord::new(kind.name(), &verdict, k, cap, run.seed, params);
    output::emit(&record, format)?;
    Ok(if verdict.is_yes() {
        Outcome::Success
    } else {
        Outcome::Negative
    })
}

fn estimate(
    spec: &FunctionSpec,
    fixing: Fixing,
    run: &RunArgs,
    format: Format,
) -> Result<Outcome, CliError> {
    let params = both_params(run)?;
    if let Some(trials) = trials(run)? {
        let report = run_estimates(spec, params, fixing, trials, run.seed)?;
        output::emit(&report, format)?;
        return Ok(Outcome::Success);
    }
    let func = build_function(spec)?;
    let cap = estimate_query_cap(func.arity(), params.eps, params.delta)?;
    let oracle = CountingOracle::new(&*func);
    let r = dependency_estimate_with(
        &oracle,
        params.eps,
        params.delta,
        fixing,
        &mut RandomSource::new(run.seed),
    )?;
    output::emit(&EstimateRecord::new(&r, cap, run.seed, params), format)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct DistanceRecord {
    class: &'static str,
    arity: usize,
    numerator: u64,
    denominator: u64,
    value: f64,
    /// `junta`: the allowed arguments; `qsym`: the argument set of a
    /// nearest quasi-symmetric function. Numbered from 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    args: Option<Vec<usize>>,
}

fn distance(
    spec: &FunctionSpec,
    class: ClassName,
    junta_args: Option<&str>,
    format: Format,
) -> Result<Outcome, CliError> {
    if junta_args.is_some() != (class == ClassName::Junta) {
        return Err(CliError::Usage(
            "--junta-args is required with `junta` and only allowed there".into(),
        ));
    }
    let table = spec.table()?;
    let one_based = |s: &DependencySet| s.iter().map(|a| a + 1).collect::<Vec<_>>();
    let (name, d, args): (_, DistanceValue, _) = match class {
        ClassName::Sym => ("sym", dist_sym(&table)?, None),
        ClassName::Const => ("const", dist_const(&table), None),
        ClassName::Junta => {
            let list = parse_list("junta-args", junta_args.unwrap_or_default())?;
            let mut set = DependencySet::new();
            for a in &list {
                if *a == 0 || *a > table.arity() {
                    return Err(CliError::Usage(format!(
                        "--junta-args: {a} is outside 1..={}",
                        table.arity()
                    )));
                }
                set.insert(a - 1);
            }
            ("junta", dist_junta(&table, &set)?, Some(one_based(&set)))
        }
        ClassName::Qsym => {
            let (d, set) = nearest_quasisym(&table)?;
            ("qsym", d, Some(one_based(&set)))
        }
    };
    output::emit(
        &DistanceRecord {
            class: name,
            arity: table.arity(),
            numerator: d.numerator(),
            denominator: d.denominator(),
            value: d.to_f64(),
            args,
        },
        format,
    )?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct VerifyRecord {
    valid: bool,
    /// Witnesses checked: one, or every entry of an estimate's evidence.
    checked: usize,
    kinds: Vec<String>,
    queries: u64,
}

/// Accepts a bare witness, a verdict record, or an estimate record.
fn witnesses_in(text: &str) -> Result<Vec<Witness>, CliError> {
    let bad = |e: serde_json::Error| CliError::Usage(format!("witness file: {e}"));
    let value: Value = serde_json::from_str(text).map_err(bad)?;
    let records: Vec<WitnessRecord> = if value.get("kind").is_some() {
        vec![serde_json::from_value(value).map_err(bad)?]
    } else if let Some(w) = value.get("witness") {
        if w.is_null() {
            return Err(CliError::Usage(
                "the verdict carries no witness (it was `yes`)".into(),
            ));
        }
        vec![serde_json::from_value(w.clone()).map_err(bad)?]
    } else if let Some(ev) = value.get("evidence") {
        serde_json::from_value(ev.clone()).map_err(bad)?
    } else {
        return Err(CliError::Usage(
            "witness file holds no witness, verdict or estimate".into(),
        ));
    };
    Ok(records
        .iter()
        .map(WitnessRecord::to_witness)
        .collect::<Result<_, _>>()?)
}

fn verify(spec: &FunctionSpec, text: &str, format: Format) -> Result<Outcome, CliError> {
    let witnesses = witnesses_in(text)?;
    let func = build_function(spec)?;
    let oracle = CountingOracle::new(&*func);
    let valid = witnesses.iter().all(|w| verify_witness(&oracle, w));
    let record = VerifyRecord {
        valid,
        checked: witnesses.len(),
        kinds: witnesses.iter().map(|w| w.kind().to_string()).collect(),
        queries: qsym::Oracle::queries(&oracle),
    };
    output::emit(&record, format)?;
    Ok(if valid {
        Outcome::Success
    } else {
        Outcome::Negative
    })
}

#[derive(Serialize)]
struct BenchRecord {
    test: &'static str,
    function: String,
    trials: u64,
    elapsed_ms: f64,
    trials_per_second: f64,
    queries_per_second: f64,
    mean_queries: f64,
    max_queries: u64,
    query_cap: u64,
    rejection_rate: f64,
}

fn bench(
    spec: &FunctionSpec,
    kind: TesterKind,
    run: &RunArgs,
    format: Format,
) -> Result<Outcome, CliError> {
    let params = tester_params(kind, run)?;
    let trials = trials(run)?.unwrap_or(1000);
    let func: Arc<dyn BooleanFunction> = build_function(spec)?;
    let start = Instant::now();
    let report = run_trials_on(spec, func, kind, params, trials, run.seed)?;
    let secs = start.elapsed().as_secs_f64().max(1e-9);
    output::emit(
        &BenchRecord {
            test: kind.name(),
            function: spec.label(),
            trials,
            elapsed_ms: secs * 1e3,
            trials_per_second: trials as f64 / secs,
            queries_per_second: report.total_queries as f64 / secs,
            mean_queries: report.mean_queries,
            max_queries: report.max_queries,
            query_cap: report.query_cap,
            rejection_rate: report.rejection_rate,
        },
        format,
    )?;
    Ok(Outcome::Success)
}
