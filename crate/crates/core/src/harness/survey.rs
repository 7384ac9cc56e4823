//! The corpus survey: one row per entry, in corpus order.

use super::cache::coverage_table_cached;
use super::corpus::{CorpusEntry, Loaded};
use crate::chebotarev::{cheb_report, to_f64, ChebReport};
use crate::error::{Error, Result};
use crate::modlin::{derivation_space, end_algebra, fixed_space, ModuleAction};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::value::RawValue;

/// Cohomology diagnostics for a module `V` of `H`: `m`, the number of
/// elements of `H` fixing a nonzero vector (`fix_prob * |H|`) and `m^2`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Diagnostics {
    pub p: u32,
    pub dim_p: usize,
    pub e: usize,
    pub n: usize,
    pub m: usize,
    pub h_order: usize,
    pub fix_prob_h: usize,
    pub m_squared: usize,
    pub v_le_h: bool,
}

pub fn diagnostics(act: &ModuleAction) -> Result<Diagnostics> {
    let f = end_algebra(act)?;
    let der = derivation_space(act, &f)?;
    let h = act.group.order();
    let mut fixing = 0;
    for x in 0..h {
        if fixed_space(act, &f, x)?.dim_p > 0 {
            fixing += 1;
        }
    }
    Ok(Diagnostics {
        p: act.p,
        dim_p: act.dim,
        e: f.e,
        n: f.n,
        m: der.m,
        h_order: h,
        fix_prob_h: fixing,
        m_squared: der.m * der.m,
        v_le_h: act.size() <= h,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveyRow {
    pub name: String,
    pub family: String,
    pub order: Option<usize>,
    pub r: Option<usize>,
    pub c_exact_num: Option<Box<RawValue>>,
    pub c_exact_den: Option<Box<RawValue>>,
    pub c_exact: Option<f64>,
    pub c_mc: Option<f64>,
    pub stderr: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub sqrt_order: Option<f64>,
    pub ratio_sqrt: Option<f64>,
    pub klz_ratio: Option<f64>,
    pub min_k_29: Option<u32>,
    /// `C(G) <= k / P_I(G, k)` at `k = min_k_29`.
    pub k_over_p_bound: Option<bool>,
    pub diagnostics: Option<Diagnostics>,
    pub error: Option<String>,
    #[serde(skip)]
    pub exact: Option<BigRational>,
    #[serde(skip)]
    pub error_exit_code: Option<i32>,
}

fn raw_int(x: &BigInt) -> Box<RawValue> {
    RawValue::from_string(x.to_string()).expect("integers are valid JSON")
}

impl SurveyRow {
    fn failed(name: String, family: String, trials: u64, seed: u64, e: &Error) -> Self {
        SurveyRow {
            name,
            family,
            order: None,
            r: None,
            c_exact_num: None,
            c_exact_den: None,
            c_exact: None,
            c_mc: None,
            stderr: None,
            trials,
            seed,
            sqrt_order: None,
            ratio_sqrt: None,
            klz_ratio: None,
            min_k_29: None,
            k_over_p_bound: None,
            diagnostics: None,
            error: Some(e.to_string()),
            exact: None,
            error_exit_code: Some(e.exit_code()),
        }
    }

    fn from_report(l: &Loaded, rep: ChebReport, diagnostics: Option<Diagnostics>) -> Self {
        let order = rep.order as f64;
        let c = rep.c_exact.as_ref().map(to_f64).unwrap_or(rep.c_mc);
        let klz = (rep.order > 1).then(|| c / (order * order.ln()).sqrt());
        let bound = rep
            .c_exact
            .as_ref()
            .zip(rep.min_k_29.zip(rep.p_at_min_k.as_ref()))
            .map(|(c, (k, p))| p == &BigRational::from_integer(0.into()) || c * p <= BigRational::from_integer(k.into()));
        SurveyRow {
            name: l.name.clone(),
            family: l.family.clone(),
            order: Some(rep.order),
            r: Some(rep.r),
            c_exact_num: rep.c_exact.as_ref().map(|c| raw_int(c.numer())),
            c_exact_den: rep.c_exact.as_ref().map(|c| raw_int(c.denom())),
            c_exact: rep.c_exact.as_ref().map(to_f64),
            c_mc: Some(rep.c_mc),
            stderr: Some(rep.mc_stderr),
            trials: rep.trials,
            seed: rep.seed,
            sqrt_order: Some(order.sqrt()),
            ratio_sqrt: Some(rep.ratio_sqrt),
            klz_ratio: klz,
            min_k_29: rep.min_k_29,
            k_over_p_bound: bound,
            diagnostics,
            error: None,
            exact: rep.c_exact,
            error_exit_code: None,
        }
    }
}

/// Computes one row; errors are recorded in the row.
pub fn survey_row(entry: &CorpusEntry, trials: u64, seed: u64) -> SurveyRow {
    let name = entry.name();
    let loaded = match entry.load() {
        Ok(l) => l,
        Err(e) => return SurveyRow::failed(name, String::new(), trials, seed, &e),
    };
    let run = || -> Result<SurveyRow> {
        let table = coverage_table_cached(&loaded.group)?;
        let rep = cheb_report(&loaded.group, &table, trials, seed)?;
        let diag = loaded.module.as_ref().map(diagnostics).transpose()?;
        Ok(SurveyRow::from_report(&loaded, rep, diag))
    };
    run().unwrap_or_else(|e| SurveyRow::failed(name, loaded.family.clone(), trials, seed, &e))
}

/// Rows in corpus order. Groups are dispatched to a pool of `threads`
/// workers (all cores when `None`); the output never depends on it.
pub fn run_survey(
    entries: &[CorpusEntry],
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<SurveyRow>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            b = b.num_threads(t);
        }
        let pool = b
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
        // indexed collect keeps corpus order whatever the completion order
        Ok(pool.install(|| {
            entries
                .par_iter()
                .map(|e| survey_row(e, trials, seed))
                .collect()
        }))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(entries.iter().map(|e| survey_row(e, trials, seed)).collect())
    }
}

pub fn to_jsonl(rows: &[SurveyRow]) -> Result<String> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

/// Lossy CSV export with the fixed column set.
pub fn to_csv(rows: &[SurveyRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "name", "order", "r", "c_exact_num", "c_exact_den", "c_mc", "stderr", "trials", "seed",
        "ratio_sqrt", "min_k_29",
    ];
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in rows {
        w.write_record([
            r.name.clone(),
            opt(r.order.map(|x| x.to_string())),
            opt(r.r.map(|x| x.to_string())),
            opt(r.exact.as_ref().map(|c| c.numer().to_string())),
            opt(r.exact.as_ref().map(|c| c.denom().to_string())),
            opt(r.c_mc.map(|x| x.to_string())),
            opt(r.stderr.map(|x| x.to_string())),
            r.trials.to_string(),
            r.seed.to_string(),
            opt(r.ratio_sqrt.map(|x| x.to_string())),
            opt(r.min_k_29.map(|x| x.to_string())),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SurveySummary {
    pub rows: usize,
    pub errors: usize,
    pub max_ratio_sqrt: Option<f64>,
    pub argmax: Option<String>,
    pub bound_violations: Vec<String>,
}

pub fn summarize(rows: &[SurveyRow]) -> SurveySummary {
    let mut best: Option<(f64, &str)> = None;
    for r in rows {
        if let Some(x) = r.ratio_sqrt {
            if best.is_none_or(|(b, _)| x > b) {
                best = Some((x, &r.name));
            }
        }
    }
    SurveySummary {
        rows: rows.len(),
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        max_ratio_sqrt: best.map(|b| b.0),
        argmax: best.map(|b| b.1.to_string()),
        bound_violations: rows
            .iter()
            .filter(|r| r.k_over_p_bound == Some(false))
            .map(|r| r.name.clone())
            .collect(),
    }
}
