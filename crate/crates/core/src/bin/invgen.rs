use clap::{Parser, Subcommand, ValueEnum};
use invgen::chebotarev::{chebotarev_montecarlo, min_k_for_probability, to_f64, IeTerms};
use invgen::crowns::{corona_decomposition, Structure};
use invgen::error::{Error, Result};
use invgen::genlift::{LiftDescriptor, LiftMode, LiftSetup, OwnedLift};
use invgen::harness::cache::coverage_table_cached;
use invgen::harness::experiments::{
    agl_trend, binomial_check, default_binomial_grid, parse_rational, AGL_QS,
};
use invgen::harness::{parse_corpus, run_survey, shipped_corpus, summarize, to_csv, to_jsonl};
use invgen::harness::props::verify_props;
use invgen::modlin::{derivation_space, end_algebra, ModuleAction, ModuleDescriptor};
use invgen::{load_group, Group, GroupDescriptor};
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "invgen", version, about = "Invariable generation and the Chebotarev invariant")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo trials per group.
    #[arg(long, global = true, default_value_t = 10_000)]
    trials: u64,
    /// Worker threads (all cores when omitted).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// The Chebotarev invariant of a group.
    Cheb {
        #[arg(value_enum)]
        method: ChebMethod,
        /// Group descriptor: inline JSON or a file.
        group: String,
    },
    /// P_I(G, k).
    Pinv {
        group: String,
        #[arg(long)]
        k: u32,
    },
    /// Least k with P_I(G, k) at least the threshold.
    Mink {
        group: String,
        #[arg(long, default_value = "2/9")]
        threshold: String,
    },
    /// First cohomology of a module.
    H1 { module: String },
    /// Chief series, crowns and a corona decomposition.
    Crowns { group: String },
    /// Generation criteria for lifted generators of V^u ⋊ H.
    Lift { problem: String },
    /// Survey a corpus (the shipped one when omitted).
    Survey { corpus: Option<PathBuf> },
    /// C(AGL(1,q)) and C/q.
    AglTrend {
        #[arg(long, value_delimiter = ',')]
        q: Vec<usize>,
    },
    /// Binomial tails at m = ceil(gamma_eps l / p).
    BinomCheck {
        #[arg(long, value_delimiter = ',')]
        eps: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        p: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        l: Vec<u64>,
    },
    /// Run every property suite.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChebMethod {
    Exact,
    Mc,
}

fn read_json<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    serde_json::from_str(&text).map_err(|e| Error::Descriptor(e.to_string()))
}

fn group_arg(arg: &str) -> Result<Group> {
    load_group(&read_json::<GroupDescriptor>(arg)?)
}

fn rational_json(q: &BigRational) -> Value {
    // num/den as JSON integers of any size
    let raw = format!(
        "{{\"num\":{},\"den\":{},\"value\":{}}}",
        q.numer(),
        q.denom(),
        serde_json::to_string(&to_f64(q)).unwrap_or_else(|_| "null".into())
    );
    serde_json::from_str(&raw).expect("valid JSON")
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(cli: &Cli, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(cli, &s)
}

fn emit_rows<T: Serialize>(cli: &Cli, rows: &[T]) -> Result<()> {
    match cli.format {
        Format::Json => {
            let mut s = String::new();
            for r in rows {
                s.push_str(&serde_json::to_string(r)?);
                s.push('\n');
            }
            emit(cli, &s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
            emit(cli, &String::from_utf8_lossy(&bytes))
        }
    }
}

fn terms_of(g: &Group) -> Result<IeTerms> {
    IeTerms::new(&coverage_table_cached(g)?)
}

fn cheb(cli: &Cli, method: ChebMethod, group: &str) -> Result<()> {
    let g = group_arg(group)?;
    let out = match method {
        ChebMethod::Exact => {
            let terms = terms_of(&g)?;
            json!({
                "group": g.name(),
                "order": g.order(),
                "r": coverage_table_cached(&g)?.r(),
                "c": rational_json(&terms.chebotarev()),
            })
        }
        ChebMethod::Mc => {
            let mc = chebotarev_montecarlo(&g, &coverage_table_cached(&g)?, cli.trials, cli.seed)?;
            json!({
                "group": g.name(),
                "order": g.order(),
                "estimate": mc.estimate,
                "stderr": mc.stderr,
                "trials": mc.trials,
                "seed": mc.seed,
            })
        }
    };
    emit_json(cli, &out)
}

fn h1(cli: &Cli, module: &str) -> Result<()> {
    let act = ModuleAction::from_descriptor(&read_json::<ModuleDescriptor>(module)?)?;
    let f = end_algebra(&act)?;
    let der = derivation_space(&act, &f)?;
    emit_json(
        cli,
        &json!({
            "group": act.group.name(),
            "order": act.group.order(),
            "p": act.p,
            "dim_p": act.dim,
            "e": f.e,
            "n": f.n,
            "dim_f_der": der.dim_p_der / f.e,
            "dim_f_ider": der.dim_p_ider / f.e,
            "m": der.m,
            "faithful": act.faithful,
            "certificate": act.certificate,
        }),
    )
}

fn crowns(cli: &Cli, group: &str) -> Result<()> {
    let g = Arc::new(group_arg(group)?);
    let st = Structure::new(g.clone())?;
    let series = st.chief_series(false)?;
    let factors: Vec<Value> = series
        .iter()
        .map(|f| {
            json!({
                "order": f.order,
                "upper": f.upper.order,
                "lower": f.lower.order,
                "abelian": f.is_abelian,
                "frattini": f.is_frattini,
                "module": f.module.as_ref().map(|m| json!({"p": m.p, "dim": m.dim})),
            })
        })
        .collect();
    let corona = match corona_decomposition(&st) {
        Ok(c) => json!({
            "factor": c.factor,
            "factor_order": c.factor_order,
            "abelian": c.abelian,
            "delta": c.delta,
            "r": c.r.order,
            "i": c.i.order,
            "u": c.u.as_ref().map(|u| u.order),
        }),
        Err(e @ Error::Precondition(_)) => json!({ "error": e.to_string() }),
        Err(e) => return Err(e),
    };
    emit_json(
        cli,
        &json!({
            "group": g.name(),
            "order": g.order(),
            "frattini_trivial": st.frattini_is_trivial(),
            "chief_series": factors,
            "corona": corona,
        }),
    )
}

fn lift(cli: &Cli, problem: &str) -> Result<()> {
    let lp = OwnedLift::from_descriptor(&read_json::<LiftDescriptor>(problem)?)?;
    let gen = LiftSetup::new(&lp.act, &lp.hs, LiftMode::Generate)?;
    let (gen_rank, _) = gen.max_lift_rank(LiftMode::Generate)?;
    let generates = if lp.u == 0 { true } else { gen.generates(lp.u, &lp.ws)? };
    let (lhs, rhs, holds) = gen.dimen_bound()?;
    // the invariable criterion is only defined when hs invariably generate H
    let inv = match LiftSetup::new(&lp.act, &lp.hs, LiftMode::InvariablyGenerate) {
        Ok(s) => {
            let (rank, _) = s.max_lift_rank(LiftMode::InvariablyGenerate)?;
            json!({
                "invariably_generates": s.invariably_generates(lp.u, &lp.ws)?,
                "max_rank": rank,
                "dim_f_w": s.spaces.dim_f_w,
                "dim_f_sum": s.spaces.dim_f_sum,
            })
        }
        Err(e @ Error::Precondition(_)) => json!({ "error": e.to_string() }),
        Err(e) => return Err(e),
    };
    emit_json(
        cli,
        &json!({
            "u": lp.u,
            "d": lp.hs.len(),
            "e": gen.field.e,
            "n": gen.field.n,
            "m": gen.der.m,
            "dim_f_d": gen.spaces.dim_f_d,
            "generate": { "generates": generates, "max_rank": gen_rank },
            "invariable": inv,
            "dimension_bound": { "lhs": lhs, "rhs": rhs, "holds": holds },
        }),
    )
}

fn survey(cli: &Cli, corpus: Option<&Path>) -> Result<()> {
    let entries = match corpus {
        Some(p) => parse_corpus(&std::fs::read_to_string(p)?)?,
        None => shipped_corpus(),
    };
    let rows = run_survey(&entries, cli.trials, cli.seed, cli.threads)?;
    let jsonl = to_jsonl(&rows)?;
    let csv = to_csv(&rows)?;
    match (&cli.out, cli.format) {
        (Some(p), _) => {
            std::fs::write(p, &jsonl)?;
            std::fs::write(p.with_extension("csv"), &csv)?;
        }
        (None, Format::Json) => print!("{jsonl}"),
        (None, Format::Csv) => print!("{csv}"),
    }
    let sum = summarize(&rows);
    match (sum.max_ratio_sqrt, &sum.argmax) {
        (Some(x), Some(name)) => eprintln!("max C(G)/sqrt|G| = {x:.4} ({name})"),
        _ => eprintln!("max C(G)/sqrt|G|: no rows"),
    }
    if sum.errors > 0 {
        eprintln!("{} rows carry errors", sum.errors);
    }
    if !sum.bound_violations.is_empty() {
        eprintln!("C <= k/P_I fails on {:?}", sum.bound_violations);
        return Err(Error::Defect("bound violated".into()));
    }
    Ok(())
}

fn binom(cli: &Cli, eps: &[String], p: &[String], l: &[u64]) -> Result<()> {
    let (de, dp, dl) = default_binomial_grid();
    let parse = |xs: &[String], d: Vec<BigRational>| -> Result<Vec<BigRational>> {
        if xs.is_empty() {
            Ok(d)
        } else {
            xs.iter().map(|x| parse_rational(x)).collect()
        }
    };
    let eps = parse(eps, de)?;
    let ps = parse(p, dp)?;
    let ls = if l.is_empty() { dl } else { l.to_vec() };
    let rows = binomial_check(&eps, &ps, &ls)?;
    emit_rows(cli, &rows)?;
    if rows.iter().any(|r| !r.holds) {
        return Err(Error::Defect("a binomial tail is below epsilon".into()));
    }
    Ok(())
}

/// CSV cannot carry raw JSON integers, so the exact value goes as text.
#[derive(Serialize)]
struct AglCsv {
    q: usize,
    order: usize,
    c_num: String,
    c_den: String,
    c: f64,
    c_over_q: f64,
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Cheb { method, group } => cheb(cli, *method, group),
        Command::Pinv { group, k } => {
            let g = group_arg(group)?;
            let p = terms_of(&g)?.p_invariable(*k);
            emit_json(cli, &json!({"group": g.name(), "k": k, "p": rational_json(&p)}))
        }
        Command::Mink { group, threshold } => {
            let g = group_arg(group)?;
            let t = parse_rational(threshold)?;
            let terms = terms_of(&g)?;
            let k = min_k_for_probability(&terms, &t)?;
            emit_json(
                cli,
                &json!({
                    "group": g.name(),
                    "threshold": t.to_string(),
                    "k": k,
                    "p": rational_json(&terms.p_invariable(k)),
                    "k_over_sqrt_order": k as f64 / (g.order() as f64).sqrt(),
                }),
            )
        }
        Command::H1 { module } => h1(cli, module),
        Command::Crowns { group } => crowns(cli, group),
        Command::Lift { problem } => lift(cli, problem),
        Command::Survey { corpus } => survey(cli, corpus.as_deref()),
        Command::AglTrend { q } => {
            let qs = if q.is_empty() { AGL_QS.to_vec() } else { q.clone() };
            let rows = agl_trend(&qs)?;
            match cli.format {
                Format::Json => emit_rows(cli, &rows),
                Format::Csv => {
                    let flat: Vec<AglCsv> = rows
                        .iter()
                        .map(|r| AglCsv {
                            q: r.q,
                            order: r.order,
                            c_num: r.exact.numer().to_string(),
                            c_den: r.exact.denom().to_string(),
                            c: r.c,
                            c_over_q: r.c_over_q,
                        })
                        .collect();
                    emit_rows(cli, &flat)
                }
            }
        }
        Command::BinomCheck { eps, p, l } => binom(cli, eps, p, l),
        Command::Verify => {
            let rep = verify_props(cli.seed);
            emit_json(cli, &rep)?;
            if rep.passed {
                Ok(())
            } else {
                Err(Error::Defect("property violations".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
