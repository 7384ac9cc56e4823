//! One line per acceptance criterion, then a single assertion over all of
//! them. Lines go straight to stdout so they show without `--nocapture`.

use invgen::chebotarev::{cheb_report, chebotarev_exact, p_invariable_exact, to_f64};
use invgen::harness::cache::coverage_table_cached;
use invgen::harness::experiments::agl_trend;
use invgen::harness::props::{
    lift_instances, load_corpus, suite_binomial, suite_cohomology, suite_crown_orders,
    suite_crowns, suite_dimen, suite_lift_crossval, SuiteReport,
};
use invgen::harness::{run_survey, shipped_corpus, summarize, to_jsonl};
use invgen::invariable::invariably_generates_exhaustive;
use invgen::{load_group, GroupDescriptor};
use num_rational::BigRational;
use std::io::Write;
use std::time::{Duration, Instant};

const SEED: u64 = 1;
const TRIALS: u64 = 100_000;
/// Largest accepted |MC - exact| in standard errors.
const Z_MAX: f64 = 4.0;
const RATIO_MAX: f64 = 5.0;
const AGL_BAND: (f64, f64) = (0.5, 2.5);
const EXACT_TIME: Duration = Duration::from_secs(1);
const MC_TIME: Duration = Duration::from_secs(600);

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn group(json: &str) -> invgen::Group {
    load_group(&serde_json::from_str::<GroupDescriptor>(json).unwrap()).unwrap()
}

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn report(o: &Outcome) {
    let line = format!(
        "criterion {} {}: {} ({})\n",
        o.id,
        if o.pass { "PASS" } else { "FAIL" },
        o.title,
        o.detail
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn from_suites(id: u32, title: &'static str, suites: &[SuiteReport]) -> Outcome {
    let checks: u64 = suites.iter().map(|s| s.checks).sum();
    let bad: Vec<&String> = suites.iter().flat_map(|s| &s.violations).take(3).collect();
    let count: u64 = suites.iter().map(|s| s.violation_count).sum();
    Outcome {
        id,
        title,
        pass: count == 0 && checks > 0,
        detail: if count == 0 {
            format!("{checks} checks, 0 violations")
        } else {
            format!("{count} violations of {checks}: {bad:?}")
        },
    }
}

fn criterion_1() -> Outcome {
    let mut fails = Vec::new();
    let mut slowest = Duration::ZERO;
    for p in [2i64, 3, 5, 7, 11] {
        let t = Instant::now();
        let g = group(&format!("{{\"family\":\"cyclic\",\"n\":{p}}}"));
        let c = chebotarev_exact(&coverage_table_cached(&g).unwrap()).unwrap();
        slowest = slowest.max(t.elapsed());
        if c != rat(p, p - 1) {
            fails.push(format!("C(C_{p}) = {c}"));
        }
    }
    let t = Instant::now();
    let s3 = group(r#"{"family":"sym","n":3}"#);
    let table = coverage_table_cached(&s3).unwrap();
    let c = chebotarev_exact(&table).unwrap();
    let p2 = p_invariable_exact(&table, 2).unwrap();
    slowest = slowest.max(t.elapsed());
    if c != rat(19, 5) {
        fails.push(format!("C(Sym(3)) = {c}"));
    }
    // every ordered pair, straight from the definition
    let n = s3.order();
    let good = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| invariably_generates_exhaustive(&s3, &[a, b], 1000).unwrap())
        .count();
    if p2 != rat(1, 3) || rat(good as i64, (n * n) as i64) != p2 {
        fails.push(format!("P_I(Sym(3),2) = {p2}, pair count {good}/{}", n * n));
    }
    if slowest > EXACT_TIME {
        fails.push(format!("slowest exact value took {slowest:?}"));
    }
    Outcome {
        id: 1,
        title: "exact small values",
        pass: fails.is_empty(),
        detail: if fails.is_empty() {
            format!("all equal, slowest {slowest:?}")
        } else {
            fails.join("; ")
        },
    }
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();

    let o = criterion_1();
    report(&o);
    outcomes.push(o);

    // the survey feeds criteria 2, 8 and 9
    let corpus = shipped_corpus();
    let t = Instant::now();
    let rows = run_survey(&corpus, TRIALS, SEED, Some(4)).unwrap();
    let survey_time = t.elapsed();
    let (groups, load_errors) = load_corpus(&corpus);

    let mut misses = Vec::new();
    let mut retried = 0;
    let mut exact_rows = 0;
    for row in &rows {
        let Some(exact) = &row.exact else { continue };
        exact_rows += 1;
        let z = |mc: f64, se: f64| {
            let gap = (mc - to_f64(exact)).abs();
            if se == 0.0 {
                if gap == 0.0 { 0.0 } else { f64::INFINITY }
            } else {
                gap / se
            }
        };
        if z(row.c_mc.unwrap(), row.stderr.unwrap()) < Z_MAX {
            continue;
        }
        retried += 1;
        let cg = groups.iter().find(|g| g.loaded.name == row.name).unwrap();
        let again = cheb_report(&cg.loaded.group, &cg.table, TRIALS, SEED + 1).unwrap();
        let z2 = z(again.c_mc, again.mc_stderr);
        if z2 >= Z_MAX {
            misses.push(format!("{} z={z2:.2}", row.name));
        }
    }
    let o = Outcome {
        id: 2,
        title: "Monte Carlo within 4 standard errors of the exact value",
        pass: misses.is_empty() && exact_rows > 0 && survey_time < MC_TIME,
        detail: format!(
            "{exact_rows} exact rows, {retried} reseeded, misses {misses:?}, survey took {survey_time:.1?}"
        ),
    };
    report(&o);
    outcomes.push(o);

    let instances = lift_instances(SEED).unwrap();
    let o = from_suites(3, "lift criteria agree with the ambient group", &[suite_lift_crossval(&instances, SEED)]);
    report(&o);
    outcomes.push(o);

    let o = from_suites(4, "dimension bound on 1000 random instances", &[suite_dimen(SEED, 1000)]);
    report(&o);
    outcomes.push(o);

    let o = from_suites(5, "cohomology invariants on the module battery", &[suite_cohomology()]);
    report(&o);
    outcomes.push(o);

    let o = from_suites(
        6,
        "crown power orders, corona decompositions and the supplement lemma",
        &[suite_crown_orders(&groups), suite_crowns(&groups, SEED, 1000, 200)],
    );
    report(&o);
    outcomes.push(o);

    let o = from_suites(7, "binomial tails at least epsilon", &[suite_binomial()]);
    report(&o);
    outcomes.push(o);

    let sum = summarize(&rows);
    let agl = agl_trend(&[5, 7, 11, 13]).unwrap();
    let agl_ok = agl
        .iter()
        .all(|r| r.c_over_q >= AGL_BAND.0 && r.c_over_q <= AGL_BAND.1);
    let bound_rows = rows.iter().filter(|r| r.k_over_p_bound.is_some()).count();
    let max = sum.max_ratio_sqrt.unwrap_or(f64::INFINITY);
    let o = Outcome {
        id: 8,
        title: "survey bands",
        pass: max <= RATIO_MAX
            && agl_ok
            && sum.bound_violations.is_empty()
            && bound_rows == exact_rows
            && sum.errors == 0
            && load_errors.is_empty(),
        detail: format!(
            "max C/sqrt|G| = {max:.4} ({}), AGL C/q = {:?}, k/P_I bound on {bound_rows} rows with violations {:?}, {} row errors",
            sum.argmax.clone().unwrap_or_default(),
            agl.iter().map(|r| (r.q, (r.c_over_q * 1000.0).round() / 1000.0)).collect::<Vec<_>>(),
            sum.bound_violations,
            sum.errors
        ),
    };
    report(&o);
    outcomes.push(o);

    let first = to_jsonl(&rows).unwrap();
    let single = to_jsonl(&run_survey(&corpus, TRIALS, SEED, Some(1)).unwrap()).unwrap();
    let o = Outcome {
        id: 9,
        title: "survey output identical across thread counts",
        pass: first == single,
        detail: format!("{} bytes at 4 threads vs 1 thread", first.len()),
    };
    report(&o);
    outcomes.push(o);

    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
