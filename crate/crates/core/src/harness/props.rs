//! Property suites driven by one seed. Every suite returns a report with
//! its check count and violations; the combined report is deterministic
//! JSON for a given seed.

use super::cache::coverage_table_cached;
use super::corpus::{shipped_corpus, CorpusEntry, Loaded};
use super::experiments::{binomial_check, default_binomial_grid};
use crate::chebotarev::IeTerms;
use crate::crowns::{
    build_crown_power_abelian, build_crown_power_general, check_relativo, corona_decomposition,
    unique_minimal_normal, verify_sotto, CrownPower, Structure,
};
use crate::error::{Error, Result};
use crate::genlift::{LiftMode, LiftSetup};
use crate::group::Group;
use crate::invariable::{
    fpf_from_table, fpf_proportion, invariably_generates, invariably_generates_exhaustive,
    ClassCoverageTable,
};
use crate::modlin::{derivation_space, end_algebra, index_to_vector, module_battery, ModuleAction};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// At most this many violations are listed per suite; all are counted.
const MAX_LISTED: usize = 20;
/// Largest ambient order for the lift cross-validation.
pub const LIFT_AMBIENT_CAP: usize = 2000;
/// Up to this many `ws` tuples the generation check runs exhaustively.
pub const GEN_EXHAUSTIVE: usize = 1 << 16;
/// Up to this many `ws` tuples the invariable check runs exhaustively.
pub const INVGEN_EXHAUSTIVE: usize = 4096;
/// Random `ws` tuples per instance beyond the exhaustive range.
pub const RANDOM_WS: usize = 500;
const DEFINITION_BUDGET: usize = 1_000_000;
/// Instances with one extra element only up to this ambient order, where
/// the definition-level check over conjugate pairs stays cheap.
const EXTRA_D_CAP: usize = 500;

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub skipped: u64,
    pub violation_count: u64,
    pub violations: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violate(msg());
        }
    }

    fn violate(&mut self, msg: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED {
            self.violations.push(msg);
        }
    }

    /// Records an error as a violation and returns `None`.
    fn ok<T>(&mut self, r: Result<T>, ctx: &str) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.checks += 1;
                self.violate(format!("{ctx}: {e}"));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PropsReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn rat(a: usize, b: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// A corpus group with its coverage table and, within the cap, its
/// inclusion-exclusion terms.
pub struct CorpusGroup {
    pub loaded: Loaded,
    pub table: ClassCoverageTable,
    pub terms: Option<IeTerms>,
}

impl CorpusGroup {
    fn group(&self) -> &Group {
        &self.loaded.group
    }
}

/// Loads every entry; failures are returned as messages.
pub fn load_corpus(entries: &[CorpusEntry]) -> (Vec<CorpusGroup>, Vec<String>) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for e in entries {
        let r = e.load().and_then(|loaded| {
            let table = coverage_table_cached(&loaded.group)?;
            let terms = match IeTerms::new(&table) {
                Ok(t) => Some(t),
                Err(Error::InclusionExclusionCap { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(CorpusGroup {
                loaded,
                table,
                terms,
            })
        });
        match r {
            Ok(g) => out.push(g),
            Err(err) => errors.push(format!("{}: {err}", e.name())),
        }
    }
    (out, errors)
}

/// Structural breaches of a coverage table, including the fixed-point-free
/// proportion read off the table against a direct count.
pub fn check_table(g: &Group, table: &ClassCoverageTable) -> Vec<String> {
    let mut out = table.check_invariants(g).err().unwrap_or_default();
    for (m, sub) in table.max_classes.iter().enumerate() {
        match fpf_proportion(g, sub) {
            Ok(direct) if direct == fpf_from_table(table, m) => {}
            Ok(direct) => out.push(format!(
                "maximal class {m}: fpf {direct} differs from the table value {}",
                fpf_from_table(table, m)
            )),
            Err(e) => out.push(format!("maximal class {m}: {e}")),
        }
    }
    out
}

pub fn suite_coverage(groups: &[CorpusGroup]) -> SuiteReport {
    let mut s = SuiteReport::new("coverage_table");
    for cg in groups {
        let breaches = check_table(cg.group(), &cg.table);
        s.check(breaches.is_empty(), || {
            format!("{}: {}", cg.loaded.name, breaches.join("; "))
        });
    }
    s
}

fn random_tuple(g: &Group, r: &mut ChaCha8Rng, max_len: usize) -> Vec<usize> {
    let len = r.gen_range(1..=max_len);
    (0..len).map(|_| r.gen_range(0..g.order())).collect()
}

/// Class-based invariable generation against the definition (|G| <= 120),
/// under conjugation of each entry, and monotone under adding elements.
pub fn suite_invgen(groups: &[CorpusGroup], seed: u64) -> SuiteReport {
    let mut s = SuiteReport::new("invariable_generation");
    let mut r = rng(seed, 1);
    for cg in groups {
        let g = cg.group();
        if g.is_trivial() {
            continue;
        }
        for _ in 0..30 {
            let t = random_tuple(g, &mut r, 3);
            let Some(v) = s.ok(invariably_generates(g, &cg.table, &t), &cg.loaded.name) else {
                continue;
            };
            let conj: Vec<usize> = t.iter().map(|&x| g.conj(x, r.gen_range(0..g.order()))).collect();
            if g.order() <= 120 {
                match invariably_generates_exhaustive(g, &conj, DEFINITION_BUDGET) {
                    Ok(d) => s.check(d == v, || {
                        format!("{}: tuple {t:?} class-based {v}, definition {d}", cg.loaded.name)
                    }),
                    Err(Error::CapExceeded { .. }) => s.skipped += 1,
                    Err(e) => s.violate(format!("{}: {e}", cg.loaded.name)),
                }
            }
            if v {
                let mut more = t.clone();
                more.push(r.gen_range(0..g.order()));
                let w = invariably_generates(g, &cg.table, &more).unwrap_or(false);
                s.check(w, || format!("{}: adding an element to {t:?} broke it", cg.loaded.name));
            }
        }
    }
    s
}

/// `P_I(G, k)` for `k <= 50`: in `[0, 1]`, nondecreasing, `C <= k / P_I`;
/// `P_I(G, 1)` and `P_I(G, 2)` against direct counts.
pub fn suite_probabilities(groups: &[CorpusGroup]) -> SuiteReport {
    let mut s = SuiteReport::new("probabilities");
    for cg in groups {
        let Some(terms) = &cg.terms else {
            s.skipped += 1;
            continue;
        };
        let g = cg.group();
        let name = &cg.loaded.name;
        let c = terms.chebotarev();
        let mut prev = BigRational::zero();
        for k in 0..=50u32 {
            let p = terms.p_invariable(k);
            s.check(p >= BigRational::zero() && p <= BigRational::one(), || {
                format!("{name}: P_I(k={k}) = {p} out of range")
            });
            s.check(p >= prev, || format!("{name}: P_I decreases at k={k}"));
            if k > 0 && p > BigRational::zero() {
                let bound = BigRational::from_integer(BigInt::from(k)) / &p;
                s.check(c <= bound, || format!("{name}: C = {c} > k/P_I at k={k}"));
            }
            prev = p;
        }
        // one element invariably generates iff it generates
        let cyclic_gens = (0..g.order()).filter(|&x| g.generates(&[x])).count();
        let p1 = if g.is_trivial() { BigRational::one() } else { rat(cyclic_gens, g.order()) };
        s.check(terms.p_invariable(1) == p1, || format!("{name}: P_I(1) differs from the count"));
        // pairs, weighted by class sizes
        if !g.is_trivial() {
            let classes = g.conjugacy_classes();
            let mut good = 0usize;
            for a in classes {
                for b in classes {
                    if invariably_generates(g, &cg.table, &[a.representative, b.representative])
                        .unwrap_or(false)
                    {
                        good += a.size * b.size;
                    }
                }
            }
            let p2 = rat(good, g.order() * g.order());
            s.check(terms.p_invariable(2) == p2, || {
                format!("{name}: P_I(2) = {} but pair count gives {p2}", terms.p_invariable(2))
            });
        }
    }
    s
}

/// `C = sum_{n < 400} P(N > n) + tail` with `|tail|` within the bound
/// (|G| <= 500), the terms summed one `n` at a time.
pub fn suite_waiting_time(groups: &[CorpusGroup]) -> SuiteReport {
    const N: u32 = 400;
    let mut s = SuiteReport::new("waiting_time_identity");
    for cg in groups {
        let Some(terms) = &cg.terms else {
            s.skipped += 1;
            continue;
        };
        if cg.group().order() > 500 || cg.group().is_trivial() {
            s.skipped += 1;
            continue;
        }
        let qs: Vec<BigRational> = terms.terms.iter().map(|&(q, _)| terms.q(q)).collect();
        let mut pow: Vec<BigRational> = vec![BigRational::one(); qs.len()];
        let mut partial = BigRational::zero();
        for _ in 0..N {
            // P(N > n) = sum_T sign q_T^n
            for (i, &(_, c)) in terms.terms.iter().enumerate() {
                partial += &pow[i] * BigInt::from(c);
                pow[i] *= &qs[i];
            }
        }
        let gap = terms.chebotarev() - &partial;
        let gap = if gap < BigRational::zero() { -gap } else { gap };
        s.check(gap <= terms.tail_bound(N), || {
            format!("{}: partial sum misses C by more than the tail bound", cg.loaded.name)
        });
    }
    s
}

/// `C(G/N) <= C(G)` and `P_I(G/N, k) >= P_I(G, k)` for normal `N`
/// (|G| <= 200).
pub fn suite_quotients(groups: &[CorpusGroup]) -> SuiteReport {
    let mut s = SuiteReport::new("quotient_monotonicity");
    for cg in groups {
        let g = cg.group();
        let (Some(terms), true) = (&cg.terms, g.order() <= 200) else {
            s.skipped += 1;
            continue;
        };
        let name = &cg.loaded.name;
        let Some(normals) = s.ok(g.normal_subgroups(), name) else {
            continue;
        };
        for n in normals.iter().filter(|n| !n.is_trivial() && !n.is_whole()) {
            let Some(q) = s.ok(g.quotient(n), name) else {
                continue;
            };
            let Some(qt) = s.ok(ClassCoverageTable::new(&q.group), name) else {
                continue;
            };
            let Some(qterms) = s.ok(IeTerms::new(&qt), name) else {
                continue;
            };
            s.check(qterms.chebotarev() <= terms.chebotarev(), || {
                format!("{name}: C(G/N) > C(G) for |N| = {}", n.order)
            });
            for k in [1u32, 2, 3, 5] {
                s.check(qterms.p_invariable(k) >= terms.p_invariable(k), || {
                    format!("{name}: P_I(G/N, {k}) < P_I(G, {k}) for |N| = {}", n.order)
                });
            }
        }
    }
    s
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Cocycle identities, `2m <= n`, `m = 0` in coprime characteristic and
/// `dim_F Der = n + m` on the module battery.
pub fn suite_cohomology() -> SuiteReport {
    let mut s = SuiteReport::new("cohomology");
    for (name, act) in module_battery() {
        let Some(f) = s.ok(end_algebra(&act), &name) else {
            continue;
        };
        let Some(der) = s.ok(derivation_space(&act, &f), &name) else {
            continue;
        };
        s.check(der.verify_cocycles(&act).is_ok(), || format!("{name}: basis is not a cocycle"));
        s.check(2 * der.m <= f.n, || format!("{name}: 2m = {} > n = {}", 2 * der.m, f.n));
        if gcd(act.group.order(), act.p as usize) == 1 {
            s.check(der.m == 0, || format!("{name}: coprime but m = {}", der.m));
        }
        // faithful irreducible and nontrivial, so C_V(H) = 0 and Ider = V
        let nontrivial = act.gen_images.iter().any(|m| !m.is_identity());
        if nontrivial {
            s.check(der.dim_p_der == f.e * (f.n + der.m), || {
                format!("{name}: dim_F Der = {} but n + m = {}", der.dim_p_der / f.e, f.n + der.m)
            });
            s.check(der.dim_p_ider == act.dim, || format!("{name}: inner derivations are not V"));
        } else {
            s.skipped += 1;
        }
    }
    s
}

/// A lift instance from the battery: `V^u ⋊ H` with fixed `hs`.
pub struct LiftInstance {
    pub module: String,
    pub act: Arc<ModuleAction>,
    pub u: usize,
    pub hs: Vec<usize>,
}

/// `hs` of length `d` that invariably generate `H` (hence generate it),
/// found by a seeded search.
fn find_hs(act: &ModuleAction, table: &ClassCoverageTable, d: usize, r: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let h = &act.group;
    for _ in 0..2000 {
        let t: Vec<usize> = (0..d).map(|_| r.gen_range(0..h.order())).collect();
        if invariably_generates(h, table, &t).ok()? {
            return Some(t);
        }
    }
    None
}

/// For each battery module and each `u >= 1` with `|V|^u |H| <= 2000`:
/// one instance with the least workable `d` and, for small ambient groups
/// with an exhaustive tuple count, one with `d + 1`.
pub fn lift_instances(seed: u64) -> Result<Vec<LiftInstance>> {
    let mut r = rng(seed, 7);
    let mut out = Vec::new();
    for (name, act) in module_battery() {
        let act = Arc::new(act);
        let table = ClassCoverageTable::new(&act.group)?;
        let dmin = (1..=3)
            .find(|&d| find_hs(&act, &table, d, &mut r.clone()).is_some())
            .ok_or_else(|| Error::Defect(format!("{name}: no invariably generating tuple")))?;
        let mut u = 1;
        while act.size().pow(u as u32) * act.group.order() <= LIFT_AMBIENT_CAP {
            for d in [dmin, dmin + 1] {
                let count = (act.size() as f64).powi((u * d) as i32);
                let order = act.size().pow(u as u32) * act.group.order();
                if d > dmin && (count > INVGEN_EXHAUSTIVE as f64 || order > EXTRA_D_CAP) {
                    continue;
                }
                let hs = find_hs(&act, &table, d, &mut r).expect("d >= dmin has tuples");
                out.push(LiftInstance {
                    module: name.clone(),
                    act: act.clone(),
                    u,
                    hs,
                });
            }
            u += 1;
        }
    }
    Ok(out)
}

/// The `t`-th tuple `ws` in lexicographic order.
fn ws_from_index(mut t: usize, act: &ModuleAction, d: usize, u: usize) -> Vec<Vec<Vec<u32>>> {
    let size = act.size();
    (0..d)
        .map(|_| {
            (0..u)
                .map(|_| {
                    let v = index_to_vector(t % size, act.p, act.dim);
                    t /= size;
                    v
                })
                .collect()
        })
        .collect()
}

fn random_ws(act: &ModuleAction, d: usize, u: usize, r: &mut ChaCha8Rng) -> Vec<Vec<Vec<u32>>> {
    (0..d)
        .map(|_| {
            (0..u)
                .map(|_| (0..act.dim).map(|_| r.gen_range(0..act.p)).collect())
                .collect()
        })
        .collect()
}

fn lifted(cp: &CrownPower, hs: &[usize], ws: &[Vec<Vec<u32>>]) -> Result<Vec<usize>> {
    hs.iter().zip(ws).map(|(&h, w)| cp.lift(h, w)).collect()
}

/// Both criteria against the ambient group: generation by closure,
/// invariable generation by the definition.
pub fn suite_lift_crossval(instances: &[LiftInstance], seed: u64) -> SuiteReport {
    let mut s = SuiteReport::new("lift_crossval");
    let mut r = rng(seed, 2);
    for inst in instances {
        let tag = format!("{} u={} d={}", inst.module, inst.u, inst.hs.len());
        let act = &*inst.act;
        let d = inst.hs.len();
        let Some(cp) = s.ok(build_crown_power_abelian(act, inst.u), &tag) else {
            continue;
        };
        let Some(gen) = s.ok(LiftSetup::new(act, &inst.hs, LiftMode::Generate), &tag) else {
            continue;
        };
        let Some(inv) = s.ok(LiftSetup::new(act, &inst.hs, LiftMode::InvariablyGenerate), &tag) else {
            continue;
        };
        let count = (act.size() as f64).powi((inst.u * d) as i32);
        let gen_all = count <= GEN_EXHAUSTIVE as f64;
        let inv_all = count <= INVGEN_EXHAUSTIVE as f64;
        let samples: Vec<Vec<Vec<Vec<u32>>>> = if gen_all {
            (0..count as usize).map(|t| ws_from_index(t, act, d, inst.u)).collect()
        } else {
            (0..RANDOM_WS).map(|_| random_ws(act, d, inst.u, &mut r)).collect()
        };
        // the invariable check on a fixed-size sample of the exhaustive set
        let inv_pick: Vec<bool> = if inv_all || !gen_all {
            vec![true; samples.len()]
        } else {
            let mut idx: Vec<usize> = (0..samples.len()).collect();
            idx.shuffle(&mut r);
            let mut pick = vec![false; samples.len()];
            for &i in idx.iter().take(RANDOM_WS) {
                pick[i] = true;
            }
            pick
        };
        for (ws, check_inv) in samples.iter().zip(inv_pick) {
            let Some(elts) = s.ok(lifted(&cp, &inst.hs, ws), &tag) else {
                break;
            };
            let Some(g_verdict) = s.ok(gen.generates(inst.u, ws), &tag) else {
                break;
            };
            let closure = cp.group.generates(&elts);
            s.check(g_verdict == closure, || {
                format!("{tag}: generation criterion {g_verdict}, closure {closure}, ws {ws:?}")
            });
            if !check_inv {
                continue;
            }
            let Some(i_verdict) = s.ok(inv.invariably_generates(inst.u, ws), &tag) else {
                break;
            };
            match invariably_generates_exhaustive(&cp.group, &elts, DEFINITION_BUDGET) {
                Ok(def) => s.check(i_verdict == def, || {
                    format!("{tag}: invariable criterion {i_verdict}, definition {def}, ws {ws:?}")
                }),
                Err(e) => s.violate(format!("{tag}: {e}")),
            }
            s.check(!i_verdict || g_verdict, || format!("{tag}: invariable without generation"));
        }
    }
    s
}

/// Witnesses of the maximal lift rank pass; rank + 1 has no witness.
pub fn suite_lift_rank(instances: &[LiftInstance], seed: u64) -> SuiteReport {
    let mut s = SuiteReport::new("lift_rank");
    let mut r = rng(seed, 3);
    let mut seen: Vec<(String, Vec<usize>)> = Vec::new();
    for inst in instances {
        if seen.iter().any(|(m, h)| m == &inst.module && h == &inst.hs) {
            continue;
        }
        seen.push((inst.module.clone(), inst.hs.clone()));
        let act = &*inst.act;
        let d = inst.hs.len();
        for mode in [LiftMode::Generate, LiftMode::InvariablyGenerate] {
            let tag = format!("{} d={} {:?}", inst.module, d, mode);
            let Some(setup) = s.ok(LiftSetup::new(act, &inst.hs, mode), &tag) else {
                continue;
            };
            let Some((umax, ws)) = s.ok(setup.max_lift_rank(mode), &tag) else {
                continue;
            };
            let verdict = |u: usize, ws: &[Vec<Vec<u32>>]| match mode {
                LiftMode::Generate => setup.generates(u, ws),
                LiftMode::InvariablyGenerate => setup.invariably_generates(u, ws),
            };
            if umax > 0 {
                let ok = verdict(umax, &ws).unwrap_or(false);
                s.check(ok, || format!("{tag}: witness at u = {umax} fails"));
            }
            if mode == LiftMode::Generate {
                // n(d-1) - m, clipped at zero
                let expected = (setup.field.n * (d - 1)) as i64 - setup.der.m as i64;
                s.check(umax as i64 == expected.max(0), || {
                    format!("{tag}: rank {umax}, formula {expected}")
                });
            }
            let u = umax + 1;
            let count = (act.size() as f64).powi((u * d) as i32);
            let found = if count <= GEN_EXHAUSTIVE as f64 {
                (0..count as usize).find(|&t| verdict(u, &ws_from_index(t, act, d, u)).unwrap_or(true))
            } else {
                (0..1000).find(|_| verdict(u, &random_ws(act, d, u, &mut r)).unwrap_or(true))
            };
            s.check(found.is_none(), || format!("{tag}: a witness exists at u = {u}"));
        }
    }
    s
}

/// The invariable criterion is unchanged when each `h_i w_i` is replaced
/// by a random conjugate in the ambient group (50 per instance).
pub fn suite_lift_conjugation(instances: &[LiftInstance], seed: u64) -> SuiteReport {
    let mut s = SuiteReport::new("lift_conjugation");
    let mut r = rng(seed, 4);
    for inst in instances {
        let act = &*inst.act;
        let tag = format!("{} u={} d={}", inst.module, inst.u, inst.hs.len());
        let Some(cp) = s.ok(build_crown_power_abelian(act, inst.u), &tag) else {
            continue;
        };
        let Some(setup) = s.ok(LiftSetup::new(act, &inst.hs, LiftMode::InvariablyGenerate), &tag) else {
            continue;
        };
        // alternate a witness (when one exists at this u) with random tuples
        let witness = setup
            .max_lift_rank(LiftMode::InvariablyGenerate)
            .ok()
            .filter(|(umax, _)| *umax >= inst.u)
            .map(|(_, ws)| ws.into_iter().map(|w| w[..inst.u].to_vec()).collect::<Vec<_>>());
        for trial in 0..50 {
            let ws = match (&witness, trial % 2) {
                (Some(w), 0) => w.clone(),
                _ => random_ws(act, inst.hs.len(), inst.u, &mut r),
            };
            let Some(before) = s.ok(setup.invariably_generates(inst.u, &ws), &tag) else {
                break;
            };
            let Some(elts) = s.ok(lifted(&cp, &inst.hs, &ws), &tag) else {
                break;
            };
            let mut hs2 = Vec::new();
            let mut ws2 = Vec::new();
            for &x in &elts {
                let y = cp.group.conj(x, r.gen_range(0..cp.group.order()));
                let Some((h, w)) = s.ok(cp.decompose(y), &tag) else {
                    return s;
                };
                hs2.push(h);
                ws2.push(w);
            }
            let after = LiftSetup::new(act, &hs2, LiftMode::InvariablyGenerate)
                .and_then(|st| st.invariably_generates(inst.u, &ws2));
            let Some(after) = s.ok(after, &tag) else {
                continue;
            };
            s.check(before == after, || format!("{tag}: verdict changed under conjugation"));
        }
    }
    s
}

/// `nd - dim_F(D+W) >= sum_i dim_F C_V(h_i) - m` on random instances.
pub fn suite_dimen(seed: u64, instances: usize) -> SuiteReport {
    let mut s = SuiteReport::new("dimension_bound");
    let mut r = rng(seed, 5);
    let battery = module_battery();
    for _ in 0..instances {
        let (name, act) = &battery[r.gen_range(0..battery.len())];
        let h = &act.group;
        let d = r.gen_range(1..=3);
        let hs = (0..200)
            .map(|_| (0..d).map(|_| r.gen_range(0..h.order())).collect::<Vec<_>>())
            .find(|t| h.generates(t))
            .unwrap_or_else(|| {
                let mut t = h.generator_indices().to_vec();
                t.resize(t.len().max(d), h.identity());
                t
            });
        let tag = format!("{name} hs={hs:?}");
        let Some(setup) = s.ok(LiftSetup::new(act, &hs, LiftMode::Generate), &tag) else {
            continue;
        };
        let Some((lhs, rhs, holds)) = s.ok(setup.dimen_bound(), &tag) else {
            continue;
        };
        s.check(holds, || format!("{tag}: {lhs} < {rhs}"));
    }
    s
}

/// Order law of crown-based powers, both constructions.
pub fn suite_crown_orders(groups: &[CorpusGroup]) -> SuiteReport {
    let mut s = SuiteReport::new("crown_power_orders");
    for (name, act) in module_battery() {
        let mut u = 0;
        while act.size().pow(u as u32) * act.group.order() <= LIFT_AMBIENT_CAP {
            let expected = act.size().pow(u as u32) * act.group.order();
            if let Some(cp) = s.ok(build_crown_power_abelian(&act, u), &name) {
                s.check(cp.group.order() == expected, || {
                    format!("{name} u={u}: order {} != {expected}", cp.group.order())
                });
            }
            u += 1;
        }
    }
    // L_k for every corpus group with a unique minimal normal subgroup and
    // small enough powers
    for cg in groups {
        let l = cg.group();
        if l.is_trivial() || l.order() > 120 {
            continue;
        }
        let Ok(Some(a)) = unique_minimal_normal(l) else {
            continue;
        };
        for k in 1..=3usize {
            let expected = a.order.pow(k as u32 - 1) * l.order();
            if expected > LIFT_AMBIENT_CAP {
                break;
            }
            match build_crown_power_general(l, &a, k) {
                Ok(g) => s.check(g.order() == expected, || {
                    format!("{}_{k}: order {} != {expected}", cg.loaded.name, g.order())
                }),
                // not primitive: outside the construction
                Err(Error::Precondition(_)) => s.skipped += 1,
                Err(e) => s.violate(format!("{}_{k}: {e}", cg.loaded.name)),
            }
        }
    }
    s
}

/// Corona decomposition on every Frattini-trivial corpus group, then
/// `KU = KR = G => K = G` on random subgroups and the crown lemma on random
/// tuples.
pub fn suite_crowns(groups: &[CorpusGroup], seed: u64, subgroups: usize, tuples: usize) -> SuiteReport {
    let mut s = SuiteReport::new("crowns");
    let mut r = rng(seed, 6);
    for cg in groups {
        let g = &cg.loaded.group;
        let name = &cg.loaded.name;
        if g.is_trivial() {
            continue;
        }
        let Some(st) = s.ok(Structure::new(g.clone()), name) else {
            continue;
        };
        if !st.frattini_is_trivial() {
            s.skipped += 1;
            continue;
        }
        let Some(crown) = s.ok(corona_decomposition(&st), name) else {
            continue;
        };
        let u = crown.u.clone().expect("corona sets U");
        let normal = st.normals.iter().any(|n| n.members == u.members);
        s.check(
            normal
                && u.members.is_subset(&crown.i.members)
                && u.order * crown.r.order == crown.i.order
                && u.members.and(&crown.r.members).count() == 1,
            || format!("{name}: I is not R x U"),
        );
        if g.order() > 500 {
            continue;
        }
        for _ in 0..subgroups {
            let t = random_tuple(g, &mut r, 2);
            let Some(k) = s.ok(g.generated_subgroup(&t), name) else {
                break;
            };
            s.check(verify_sotto(g, &crown, &k), || {
                format!("{name}: subgroup of order {} supplements U and R", k.order)
            });
        }
        if let Some(rep) = s.ok(check_relativo(g, &crown, tuples, r.gen()), name) {
            s.checks += rep.hypotheses_met as u64;
            for t in rep.counterexamples {
                s.violate(format!("{name}: tuple {t:?} generates G/U and G/R invariably but not G"));
            }
        }
    }
    s
}

pub fn suite_binomial() -> SuiteReport {
    let mut s = SuiteReport::new("binomial_tail");
    let (e, p, l) = default_binomial_grid();
    if let Some(rows) = s.ok(binomial_check(&e, &p, &l), "grid") {
        for row in rows {
            s.check(row.holds, || {
                format!("eps={} p={} l={}: tail {} < eps", row.epsilon, row.p, row.l, row.tail)
            });
        }
    }
    s
}

/// Runs every suite on the shipped corpus and the module battery.
pub fn verify_props(seed: u64) -> PropsReport {
    let (groups, errors) = load_corpus(&shipped_corpus());
    let mut corpus = SuiteReport::new("corpus");
    for e in errors {
        corpus.violate(e);
    }
    corpus.checks = groups.len() as u64;
    let mut suites = vec![
        corpus,
        suite_coverage(&groups),
        suite_invgen(&groups, seed),
        suite_probabilities(&groups),
        suite_waiting_time(&groups),
        suite_quotients(&groups),
        suite_cohomology(),
    ];
    match lift_instances(seed) {
        Ok(inst) => {
            suites.push(suite_lift_crossval(&inst, seed));
            suites.push(suite_lift_rank(&inst, seed));
            suites.push(suite_lift_conjugation(&inst, seed));
        }
        Err(e) => {
            let mut s = SuiteReport::new("lift_instances");
            s.violate(e.to_string());
            suites.push(s);
        }
    }
    suites.push(suite_dimen(seed, 1000));
    suites.push(suite_crown_orders(&groups));
    suites.push(suite_crowns(&groups, seed, 1000, 200));
    suites.push(suite_binomial());
    PropsReport {
        seed,
        passed: suites.iter().all(|s| s.passed()),
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{load_group, Family, GroupDescriptor};

    #[test]
    fn corrupted_table_is_reported() {
        let g = load_group(&GroupDescriptor::family(Family::Sym, 4)).unwrap();
        let mut t = ClassCoverageTable::new(&g).unwrap();
        assert!(check_table(&g, &t).is_empty());
        // claim that a class of 3-cycles lies in the conjugates of every
        // maximal class
        let c = (0..t.num_classes())
            .find(|&c| t.covers[c].iter().any(|&x| !x))
            .unwrap();
        for x in t.covers[c].iter_mut() {
            *x = true;
        }
        assert!(!check_table(&g, &t).is_empty());
    }

    #[test]
    fn ws_indexing_is_exhaustive() {
        let (_, act) = module_battery().into_iter().nth(1).unwrap();
        let mut all: Vec<_> = (0..16).map(|t| ws_from_index(t, &act, 2, 1)).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 16);
    }
}
