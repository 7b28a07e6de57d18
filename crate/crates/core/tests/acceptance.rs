//! Statistical acceptance suite.
//!
//! Every criterion runs at its full stated scale and tolerance and prints
//! one `PASS`/`FAIL` line; the single test fails if any criterion does.
//! Run with `cargo test -p qsym-core --test acceptance -- --nocapture` to
//! see the lines.
//!
//! Instances are generated from a fixed root seed, so a failure reproduces
//! exactly. Statistical bounds use a 4-sigma margin.

use std::sync::Arc;
use std::time::Instant;

use qsym::distance::{dist_junta, distance, Distance, QUASISYM_ARITY_CAP};
use qsym::record::Params;
use qsym::testers::{
    constancy_test, dependency_search, quasisymmetry_test, search_query_cap, symmetry_test,
};
use qsym::trials::{run_estimates, run_trials, run_trials_on, EstimateReport, TrialReport};
use qsym::witness::{verify_witness, Witness};
use qsym::{
    dependent_set, dist_const, dist_quasisym, dist_sym, BooleanFunction, CountingOracle,
    DependencySet, DistanceValue, Fixing, FunctionSpec, Oracle, RandomSource, TesterKind,
    TruthTable,
};

const ROOT_SEED: u64 = 0x5eed_2024;

/// Query-cap violations observed while running criteria 1–6.
#[derive(Default)]
struct CapLog {
    runs_checked: u64,
    violations: Vec<String>,
}

impl CapLog {
    fn trial(&mut self, what: &str, r: &TrialReport) {
        self.runs_checked += r.trials;
        if r.max_queries > r.query_cap {
            self.violations
                .push(format!("{what}: {} > cap {}", r.max_queries, r.query_cap));
        }
    }

    fn estimate(&mut self, what: &str, r: &EstimateReport) {
        self.runs_checked += r.trials;
        if r.max_queries > r.query_cap {
            self.violations
                .push(format!("{what}: {} > cap {}", r.max_queries, r.query_cap));
        }
    }

    fn single(&mut self, what: &str, queries: u64, cap: u64) {
        self.runs_checked += 1;
        if queries > cap {
            self.violations
                .push(format!("{what}: {queries} > cap {cap}"));
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    /// Serialized reports, compared byte for byte on replay.
    reports: Vec<String>,
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

fn four_sigma(p: f64, trials: u64) -> f64 {
    4.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

fn eps_delta(eps: f64, delta: f64) -> Option<Params> {
    Some(Params { eps, delta })
}

fn rng_for(criterion: u64) -> RandomSource {
    RandomSource::with_stream(ROOT_SEED, criterion)
}

/// A random subset of `1..=n` (1-based, as in function specs) of size `k`.
fn random_args(n: usize, k: usize, rng: &mut RandomSource) -> Vec<usize> {
    let mut args: Vec<usize> = (1..=n).collect();
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        args.swap(i, j);
    }
    args.truncate(k);
    args.sort_unstable();
    args
}

fn random_sym_junta(n: usize, min_args: usize, rng: &mut RandomSource) -> FunctionSpec {
    let k = min_args + rng.below((n + 1 - min_args) as u64) as usize;
    let args = random_args(n, k, rng);
    let levels = (0..=k).map(|_| rng.bit()).collect();
    FunctionSpec::SymJunta { n, args, levels }
}

fn random_table(n: usize, rng: &mut RandomSource) -> FunctionSpec {
    FunctionSpec::RandomTable {
        n,
        seed: rng.next_u64(),
    }
}

/// Every symmetric function of `n` arguments, indexed by its level mask.
fn all_symmetric(n: usize) -> Vec<FunctionSpec> {
    (0..1u64 << (n + 1))
        .map(|mask| FunctionSpec::SymJunta {
            n,
            args: (1..=n).collect(),
            levels: (0..=n).map(|w| mask >> w & 1 == 1).collect(),
        })
        .collect()
}

fn perturb(base: FunctionSpec, lo_pct: u64, hi_pct: u64, rng: &mut RandomSource) -> FunctionSpec {
    let size = 1u64 << base.arity();
    let pct = lo_pct + rng.below(hi_pct - lo_pct + 1);
    FunctionSpec::Perturbed {
        base: Box::new(base),
        flips: size * pct / 100,
        seed: rng.next_u64(),
    }
}

/// Draws from `make` until `keep` accepts, `count` times.
fn planted(
    count: usize,
    rng: &mut RandomSource,
    mut make: impl FnMut(&mut RandomSource) -> FunctionSpec,
    keep: impl Fn(&TruthTable) -> bool,
) -> Vec<FunctionSpec> {
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < 100_000, "could not plant enough instances");
        let spec = make(rng);
        if keep(&spec.table().unwrap()) {
            out.push(spec);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// 1. one-sided error

const C1_SEEDS: u64 = 100;

fn c1_instances() -> (Vec<FunctionSpec>, Vec<FunctionSpec>, Vec<FunctionSpec>) {
    let sym: Vec<_> = (2..=6).flat_map(all_symmetric).collect();
    let constant: Vec<_> = (0..=6)
        .flat_map(|n| [false, true].map(|value| FunctionSpec::Const { n, value }))
        .collect();
    let mut rng = rng_for(1);
    let juntas: Vec<_> = (0..200)
        .map(|i| random_sym_junta(2 + i % 9, 0, &mut rng))
        .collect();
    (sym, constant, juntas)
}

fn criterion_1(caps: &mut CapLog) -> Outcome {
    let (sym, constant, juntas) = c1_instances();
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    let mut run =
        |spec: &FunctionSpec, tester: TesterKind, p: Option<Params>, caps: &mut CapLog| {
            let r = run_trials(spec, tester, p, C1_SEEDS, ROOT_SEED).unwrap();
            caps.trial(&format!("c1 {} on {}", tester.name(), spec.label()), &r);
            if r.no_count != 0 {
                failures.push(format!("{} rejected {}", tester.name(), spec.label()));
            }
            reports.push(json(&r));
        };
    for spec in &sym {
        run(spec, TesterKind::Symmetry, eps_delta(0.1, 0.05), caps);
    }
    for spec in &constant {
        run(spec, TesterKind::Constancy, eps_delta(0.1, 0.05), caps);
    }
    for spec in &juntas {
        let t = spec.table().unwrap();
        assert!(dist_quasisym(&t).unwrap().is_zero());
        run(spec, TesterKind::QuasiSymmetry, eps_delta(0.2, 0.1), caps);
        run(
            spec,
            TesterKind::QuasiSymmetryResampled,
            eps_delta(0.2, 0.1),
            caps,
        );
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{} symmetric, {} constant, {} sym-junta functions x {C1_SEEDS} seeds; {} false rejections{}",
            sym.len(),
            constant.len(),
            juntas.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
        reports,
    }
}

// ---------------------------------------------------------------------------
// 2. basic-step rejection lower bound

const C2_TRIALS: u64 = 100_000;

fn c2_instances() -> Vec<FunctionSpec> {
    let mut rng = rng_for(2);
    (3..=6)
        .flat_map(|n| (0..50).map(move |_| n).collect::<Vec<_>>())
        .map(|n| random_table(n, &mut rng))
        .collect()
}

fn c2_check(
    spec: &FunctionSpec,
    tester: TesterKind,
    caps: &mut CapLog,
) -> (bool, f64, TrialReport) {
    let table = spec.table().unwrap();
    let exact = match tester {
        TesterKind::SymmetryStep => dist_sym(&table).unwrap(),
        _ => dist_const(&table),
    };
    let func: Arc<dyn BooleanFunction> = Arc::new(table);
    let r = run_trials_on(spec, func, tester, None, C2_TRIALS, ROOT_SEED).unwrap();
    caps.trial(&format!("c2 {} on {}", tester.name(), spec.label()), &r);
    let e = exact.to_f64();
    let bound = e - four_sigma(e, C2_TRIALS);
    let slack = r.rejection_rate - bound;
    // the bound is vacuous at distance zero; leave those out of the summary
    let shown = if exact.is_zero() {
        f64::INFINITY
    } else {
        slack
    };
    (slack >= 0.0 && r.witness_failures == 0, shown, r)
}

fn criterion_2(caps: &mut CapLog) -> Outcome {
    let mut reports = Vec::new();
    let mut bad = 0;
    let mut worst = f64::INFINITY;
    let instances = c2_instances();
    for spec in &instances {
        for tester in [TesterKind::SymmetryStep, TesterKind::ConstancyStep] {
            let (ok, slack, r) = c2_check(spec, tester, caps);
            bad += usize::from(!ok);
            worst = worst.min(slack);
            reports.push(json(&r));
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} tables x 2 steps x {C2_TRIALS} trials; {bad} below bound; min(no-rate - bound) over nonzero distances = {worst:+.5}",
            instances.len()
        ),
        reports,
    }
}

// ---------------------------------------------------------------------------
// 3. full-test soundness

const C3_TRIALS: u64 = 10_000;
const C3_EPS: f64 = 0.1;
const C3_DELTA: f64 = 0.05;

fn c3_instances() -> Vec<(FunctionSpec, TesterKind)> {
    let mut rng = rng_for(3);
    let mut out = Vec::new();
    for n in 4..=8 {
        let far_sym = planted(
            20,
            &mut rng,
            |rng| perturb(random_sym_junta(n, n, rng), 10, 45, rng),
            |t| dist_sym(t).unwrap().at_least(C3_EPS),
        );
        out.extend(far_sym.into_iter().map(|s| (s, TesterKind::Symmetry)));
        let far_const = planted(
            20,
            &mut rng,
            |rng| {
                let c = FunctionSpec::Const {
                    n,
                    value: rng.bit(),
                };
                perturb(c, 10, 50, rng)
            },
            |t| dist_const(t).at_least(C3_EPS),
        );
        out.extend(far_const.into_iter().map(|s| (s, TesterKind::Constancy)));
    }
    out
}

fn c3_run(spec: &FunctionSpec, tester: TesterKind) -> TrialReport {
    run_trials(
        spec,
        tester,
        eps_delta(C3_EPS, C3_DELTA),
        C3_TRIALS,
        ROOT_SEED,
    )
    .unwrap()
}

fn criterion_3(caps: &mut CapLog) -> Outcome {
    let bound = C3_DELTA + four_sigma(C3_DELTA, C3_TRIALS);
    let mut reports = Vec::new();
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    let instances = c3_instances();
    for (spec, tester) in &instances {
        let r = c3_run(spec, *tester);
        caps.trial(&format!("c3 {} on {}", tester.name(), spec.label()), &r);
        let yes_rate = r.yes_count as f64 / r.trials as f64;
        worst = worst.max(yes_rate);
        bad += usize::from(yes_rate > bound || r.witness_failures > 0);
        reports.push(json(&r));
    }
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} far instances x {C3_TRIALS} trials; max yes-rate {worst:.4} (bound {bound:.4}); {bad} violations",
            instances.len()
        ),
        reports,
    }
}

// ---------------------------------------------------------------------------
// 4. dependency-estimate containment (and the search cap)

const C4_RUNS_PER_TABLE: u64 = 100;
const C4_SEARCHES_PER_TABLE: u64 = 100;

/// A function of a random subset of arguments: random values on the
/// subset's sub-cube, extended to ignore everything else.
fn random_junta_table(n: usize, rng: &mut RandomSource) -> FunctionSpec {
    let k = rng.below(n as u64 + 1) as usize;
    let args: Vec<usize> = random_args(n, k, rng).into_iter().map(|a| a - 1).collect();
    let inner: Vec<bool> = (0..1usize << k).map(|_| rng.bit()).collect();
    let table = TruthTable::from_index_fn(n, |i| {
        let j = args
            .iter()
            .enumerate()
            .fold(0usize, |acc, (b, &a)| acc | ((i as usize >> a & 1) << b));
        inner[j]
    })
    .unwrap();
    FunctionSpec::Table { table }
}

fn c4_instances() -> Vec<FunctionSpec> {
    let mut rng = rng_for(4);
    (0..100)
        .map(|i| {
            let n = 1 + i % 10;
            match i % 4 {
                0 => random_table(n, &mut rng),
                1 => random_sym_junta(n, 0, &mut rng),
                2 => random_junta_table(n, &mut rng),
                _ => perturb(random_sym_junta(n, 0, &mut rng), 0, 3, &mut rng),
            }
        })
        .collect()
}

fn c4_search_runs(spec: &FunctionSpec, dep: &DependencySet, caps: &mut CapLog) -> (u64, u64) {
    let table = spec.table().unwrap();
    let n = table.arity();
    let cap = search_query_cap(n);
    let mut rng = RandomSource::with_stream(ROOT_SEED, 4_000);
    let (mut done, mut bad) = (0, 0);
    let mut attempts = 0;
    while done < C4_SEARCHES_PER_TABLE && attempts < 50 * C4_SEARCHES_PER_TABLE && !dep.is_empty() {
        attempts += 1;
        let x = qsym::sampling::sample_any(n, &mut rng);
        let y = qsym::sampling::sample_any(n, &mut rng);
        let (fx, fy) = (table.eval(&x), table.eval(&y));
        if fx == fy {
            continue;
        }
        let f = CountingOracle::new(&table);
        let w = dependency_search(&f, &x, &y, fx, fy).unwrap();
        caps.single(&format!("c4 search on {}", spec.label()), f.queries(), cap);
        let ok = dep.contains(w.index)
            && verify_witness(&CountingOracle::new(&table), &Witness::ArgDependency(w));
        bad += u64::from(!ok);
        done += 1;
    }
    (done, bad)
}

fn criterion_4(caps: &mut CapLog) -> Outcome {
    let params = Params {
        eps: 0.1,
        delta: 0.1,
    };
    let mut reports = Vec::new();
    let (mut runs, mut escaped, mut witness_failures) = (0, 0, 0);
    let (mut searches, mut bad_searches) = (0, 0);
    for spec in c4_instances() {
        let fixing = Fixing::PerTest;
        let r = run_estimates(&spec, params, fixing, C4_RUNS_PER_TABLE, ROOT_SEED).unwrap();
        caps.estimate(&format!("c4 estimate on {}", spec.label()), &r);
        runs += r.trials;
        escaped += r.not_contained.expect("within the oracle cap");
        witness_failures += r.witness_failures;
        let dep = dependent_set(&spec.table().unwrap()).unwrap();
        let (d, b) = c4_search_runs(&spec, &dep, caps);
        searches += d;
        bad_searches += b;
        reports.push(json(&r));
    }
    Outcome {
        pass: escaped == 0 && witness_failures == 0 && bad_searches == 0 && runs >= 10_000,
        detail: format!(
            "{runs} estimates: {escaped} not contained, {witness_failures} bad witnesses; \
             {searches} searches: {bad_searches} bad"
        ),
        reports,
    }
}

// ---------------------------------------------------------------------------
// 5. dependency-estimate completeness on parity

const C5_TRIALS: u64 = 10_000;

fn c5_run(n: usize) -> EstimateReport {
    let params = Params {
        eps: 0.1,
        delta: 0.1,
    };
    run_estimates(
        &FunctionSpec::Parity { n },
        params,
        Fixing::PerTest,
        C5_TRIALS,
        ROOT_SEED,
    )
    .unwrap()
}

fn criterion_5(caps: &mut CapLog) -> Outcome {
    let bound = 0.9 - four_sigma(0.9, C5_TRIALS);
    let mut reports = Vec::new();
    let mut ok = true;
    let mut rates = Vec::new();
    for n in 3..=5 {
        // every proper subset of the arguments leaves parity at distance 1/2
        let table = FunctionSpec::Parity { n }.table().unwrap();
        for mask in 0..(1u64 << n) - 1 {
            let d = dist_junta(&table, &DependencySet::from_mask(mask)).unwrap();
            ok &= d == DistanceValue::new(1 << (n - 1), n);
        }
        let r = c5_run(n);
        caps.estimate(&format!("c5 estimate on parity({n})"), &r);
        let full: Vec<usize> = (1..=n).collect();
        let hits = r.sets.iter().find(|s| s.set == full).map_or(0, |s| s.count);
        let rate = hits as f64 / C5_TRIALS as f64;
        ok &= rate >= bound && r.witness_failures == 0;
        rates.push(format!("n={n}: {rate:.4}"));
        reports.push(json(&r));
    }
    Outcome {
        pass: ok,
        detail: format!("full-set frequency {} (bound {bound:.4})", rates.join(", ")),
        reports,
    }
}

// ---------------------------------------------------------------------------
// 6. quasi-symmetry end-to-end

const C6_TRIALS: u64 = 5_000;
const C6_EPS: f64 = 0.2;
const C6_DELTA: f64 = 0.1;

fn c6_instances() -> Vec<FunctionSpec> {
    let mut rng = rng_for(6);
    (6..=10)
        .flat_map(|n| {
            planted(
                20,
                &mut rng,
                |rng| perturb(random_sym_junta(n, 2, rng), 15, 40, rng),
                |t| dist_quasisym(t).unwrap().at_least(C6_EPS),
            )
        })
        .collect()
}

fn c6_run(spec: &FunctionSpec, tester: TesterKind) -> TrialReport {
    run_trials(
        spec,
        tester,
        eps_delta(C6_EPS, C6_DELTA),
        C6_TRIALS,
        ROOT_SEED,
    )
    .unwrap()
}

fn criterion_6(caps: &mut CapLog) -> Outcome {
    let bound = C6_DELTA + four_sigma(C6_DELTA, C6_TRIALS);
    let mut reports = Vec::new();
    let mut bad = 0;
    let mut worst = [0.0f64; 2];
    let instances = c6_instances();
    for spec in &instances {
        for (slot, tester) in [
            TesterKind::QuasiSymmetry,
            TesterKind::QuasiSymmetryResampled,
        ]
        .into_iter()
        .enumerate()
        {
            let r = c6_run(spec, tester);
            caps.trial(&format!("c6 {} on {}", tester.name(), spec.label()), &r);
            let yes_rate = r.yes_count as f64 / r.trials as f64;
            worst[slot] = worst[slot].max(yes_rate);
            bad += usize::from(yes_rate > bound || r.witness_failures > 0);
            reports.push(json(&r));
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} far instances x {C6_TRIALS} trials; max yes-rate {:.4} (per-step resampling {:.4}), bound {bound:.4}; {bad} violations",
            instances.len(),
            worst[0],
            worst[1]
        ),
        reports,
    }
}

// ---------------------------------------------------------------------------
// 7. hard query caps

fn criterion_7(caps: &CapLog) -> Outcome {
    // the closed forms the composed caps reduce to for the simple testers
    let mut ok = true;
    for (eps, delta) in [(0.1, 0.05), (0.2, 0.1), (0.01, 0.001)] {
        let k = ((1.0f64 / delta).ln() / eps).ceil() as u64;
        let cap = TesterKind::Symmetry
            .query_cap(8, eps_delta(eps, delta))
            .unwrap();
        ok &= cap == 2 * k;
    }
    for n in 1..=64usize {
        let c = search_query_cap(n);
        let log = (n as f64).ln() / 1.5f64.ln();
        ok &= c as f64 >= log - 1e-9 && (c as f64) < log + 1.0;
    }
    Outcome {
        pass: ok && caps.violations.is_empty(),
        detail: format!(
            "{} capped runs in criteria 1-6, {} over cap{}",
            caps.runs_checked,
            caps.violations.len(),
            caps.violations
                .first()
                .map(|v| format!(" (first: {v})"))
                .unwrap_or_default()
        ),
        reports: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// 8. oracle cross-validation

fn brute_dist_sym(t: &TruthTable) -> DistanceValue {
    all_symmetric(t.arity())
        .iter()
        .map(|s| match distance(t, &s.table().unwrap()) {
            Distance::Finite(d) => d,
            Distance::Infinite => unreachable!(),
        })
        .min()
        .unwrap()
}

fn criterion_8() -> Outcome {
    let mut rng = rng_for(8);
    let mut mismatches = Vec::new();
    let mut checked = [0u64; 3];

    // dist_sym: every table at n <= 3, random tables up to 6
    for n in 0..=6usize {
        let tables: Vec<TruthTable> = if n <= 3 {
            (0..1u64 << (1 << n))
                .map(|bits| TruthTable::from_index_fn(n, |i| bits >> i & 1 == 1).unwrap())
                .collect()
        } else {
            (0..200)
                .map(|_| random_table(n, &mut rng).table().unwrap())
                .collect()
        };
        for t in tables {
            checked[0] += 1;
            if dist_sym(&t).unwrap() != brute_dist_sym(&t) {
                mismatches.push(format!("dist_sym on {t}"));
            }
        }
    }

    // dist_const against the junta on no arguments
    for n in 0..=8usize {
        for _ in 0..200 {
            let t = random_table(n, &mut rng).table().unwrap();
            checked[1] += 1;
            if dist_const(&t) != dist_junta(&t, &DependencySet::new()).unwrap() {
                mismatches.push(format!("dist_const on {t}"));
            }
        }
    }

    // quasi-symmetric constructions sit at distance exactly zero
    for i in 0..400 {
        let n = i % (QUASISYM_ARITY_CAP.min(10) + 1);
        let spec = random_sym_junta(n.max(1), 0, &mut rng);
        checked[2] += 1;
        if !dist_quasisym(&spec.table().unwrap()).unwrap().is_zero() {
            mismatches.push(format!("dist_quasisym on {}", spec.label()));
        }
    }

    Outcome {
        pass: mismatches.is_empty(),
        detail: format!(
            "{} dist_sym, {} dist_const, {} dist_quasisym checks; {} mismatches{}",
            checked[0],
            checked[1],
            checked[2],
            mismatches.len(),
            mismatches
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default()
        ),
        reports: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// 9. determinism

/// Replays a slice of every statistical experiment from the same root seed
/// and compares the reports with the first run byte for byte.
fn criterion_9(first: &[Outcome]) -> Outcome {
    let mut scratch = CapLog::default();
    let mut compared = 0;
    let mut diffs = Vec::new();
    let mut cmp = |label: &str, original: &str, replay: String| {
        compared += 1;
        if original != replay {
            diffs.push(label.to_string());
        }
    };

    // instance generation itself is replayable
    let (s1, c1, j1) = c1_instances();
    let (s2, c2, j2) = c1_instances();
    cmp("c1 instances", &json(&(s1, c1, j1)), json(&(s2, c2, j2)));
    cmp(
        "c2 instances",
        &json(&c2_instances()),
        json(&c2_instances()),
    );
    cmp(
        "c3 instances",
        &json(&c3_instances()),
        json(&c3_instances()),
    );
    cmp(
        "c4 instances",
        &json(&c4_instances()),
        json(&c4_instances()),
    );
    cmp(
        "c6 instances",
        &json(&c6_instances()),
        json(&c6_instances()),
    );

    // experiment reruns, compared against the reports of the first run
    let (sym, _, juntas) = c1_instances();
    let r = run_trials(
        &sym[37],
        TesterKind::Symmetry,
        eps_delta(0.1, 0.05),
        C1_SEEDS,
        ROOT_SEED,
    )
    .unwrap();
    cmp("c1 symmetric", &first[0].reports[37], json(&r));
    let junta_slot = sym.len() + 14 + 2 * 5;
    let r = run_trials(
        &juntas[5],
        TesterKind::QuasiSymmetry,
        eps_delta(0.2, 0.1),
        C1_SEEDS,
        ROOT_SEED,
    )
    .unwrap();
    cmp("c1 sym-junta", &first[0].reports[junta_slot], json(&r));

    let c2 = c2_instances();
    for i in [0, 77, 199] {
        let (_, _, r) = c2_check(&c2[i], TesterKind::SymmetryStep, &mut scratch);
        cmp("c2 symmetry step", &first[1].reports[2 * i], json(&r));
        let (_, _, r) = c2_check(&c2[i], TesterKind::ConstancyStep, &mut scratch);
        cmp("c2 constancy step", &first[1].reports[2 * i + 1], json(&r));
    }

    let c3 = c3_instances();
    for i in [0, 65, 199] {
        let (spec, tester) = &c3[i];
        cmp("c3", &first[2].reports[i], json(&c3_run(spec, *tester)));
    }

    let c4 = c4_instances();
    for i in [3, 58, 99] {
        let r = run_estimates(
            &c4[i],
            Params {
                eps: 0.1,
                delta: 0.1,
            },
            Fixing::PerTest,
            C4_RUNS_PER_TABLE,
            ROOT_SEED,
        )
        .unwrap();
        cmp("c4", &first[3].reports[i], json(&r));
    }

    cmp("c5", &first[4].reports[1], json(&c5_run(4)));

    let c6 = c6_instances();
    for i in [0, 99] {
        cmp(
            "c6",
            &first[5].reports[2 * i],
            json(&c6_run(&c6[i], TesterKind::QuasiSymmetry)),
        );
        cmp(
            "c6 resampled",
            &first[5].reports[2 * i + 1],
            json(&c6_run(&c6[i], TesterKind::QuasiSymmetryResampled)),
        );
    }

    // single runs outside the harness replay too
    let t = FunctionSpec::RandomTable { n: 7, seed: 3 }.table().unwrap();
    let once = |s: u64| {
        let f = CountingOracle::new(&t);
        let mut rng = RandomSource::new(s);
        let a = symmetry_test(&f, 0.1, 0.05, &mut rng).unwrap();
        let b = constancy_test(&f, 0.1, 0.05, &mut rng).unwrap();
        let c = quasisymmetry_test(&f, 0.2, 0.1, &mut rng).unwrap();
        format!("{a:?}{b:?}{c:?}")
    };
    cmp("single runs", &once(ROOT_SEED), once(ROOT_SEED));

    Outcome {
        pass: diffs.is_empty(),
        detail: format!(
            "{compared} replays compared; {} differ{}",
            diffs.len(),
            diffs
                .first()
                .map(|d| format!(" (first: {d})"))
                .unwrap_or_default()
        ),
        reports: Vec::new(),
    }
}

// ---------------------------------------------------------------------------

fn report(number: usize, title: &str, start: Instant, outcome: &Outcome) {
    println!(
        "[{}] criterion {number} - {title}: {} ({:.1}s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        start.elapsed().as_secs_f64()
    );
}

type Experiment = fn(&mut CapLog) -> Outcome;

#[test]
fn acceptance_suite() {
    let mut caps = CapLog::default();
    let mut outcomes = Vec::new();
    let experiments: [(&str, Experiment); 6] = [
        ("one-sided error", criterion_1),
        ("basic-step rejection bound", criterion_2),
        ("full-test soundness", criterion_3),
        ("estimate containment", criterion_4),
        ("estimate completeness on parity", criterion_5),
        ("quasi-symmetry end-to-end", criterion_6),
    ];
    for (i, (title, run)) in experiments.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut caps);
        report(i + 1, title, start, &outcome);
        outcomes.push(outcome);
    }

    let start = Instant::now();
    let c7 = criterion_7(&caps);
    report(7, "hard query caps", start, &c7);

    let start = Instant::now();
    let c8 = criterion_8();
    report(8, "oracle cross-validation", start, &c8);

    let start = Instant::now();
    let c9 = criterion_9(&outcomes);
    report(9, "determinism", start, &c9);

    outcomes.extend([c7, c8, c9]);
    let failed: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.pass)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
