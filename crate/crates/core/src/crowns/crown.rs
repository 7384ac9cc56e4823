use super::{ChiefFactor, FactorModule, Structure};
use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::group::{Group, SubgroupRecord};
use crate::invariable::{coverage_table, invariably_generates};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct CrownData {
    /// Position of the defining factor in the chief series (bottom first).
    pub factor: usize,
    pub factor_order: usize,
    pub abelian: bool,
    pub delta: usize,
    pub r: SubgroupRecord,
    pub i: SubgroupRecord,
    pub u: Option<SubgroupRecord>,
}

fn join(g: &Group, subs: &[&SubgroupRecord]) -> Bitset {
    let mut acc = Bitset::from_indices(g.order(), [0]);
    let mut gens: Vec<usize> = Vec::new();
    for s in subs {
        acc = g.extend_closure(&acc, &gens, &s.generators);
        gens.extend(&s.generators);
    }
    acc
}

fn log_exact(n: usize, base: usize) -> Option<usize> {
    let (mut k, mut x) = (0, 1usize);
    while x < n {
        x *= base;
        k += 1;
    }
    (x == n).then_some(k)
}

/// Counts the non-Frattini factors of `series` that are `G`-isomorphic to `a`.
fn count_equivalent(series: &[ChiefFactor], a: &FactorModule) -> Result<usize> {
    let mut k = 0;
    for f in series.iter().filter(|f| f.is_abelian && !f.is_frattini) {
        if a.isomorphic(f.module.as_ref().unwrap())? {
            k += 1;
        }
    }
    Ok(k)
}

/// The crown of a non-Frattini abelian chief factor `A`.
///
/// `N` contributes to `R_G(A)` when `G/N` is monolithic, its socle `M/N` is
/// abelian, complemented (some maximal subgroup contains `N` but not `M`) and
/// `G`-isomorphic to `A`; for abelian socles these conditions say exactly
/// that `G/N` is the monolithic primitive group attached to `A`.
pub fn abelian_crown(st: &Structure, series: &[ChiefFactor], factor: usize) -> Result<CrownData> {
    let g = &st.group;
    let fa = series
        .get(factor)
        .ok_or_else(|| Error::Precondition("no such chief factor".into()))?;
    let a = match &fa.module {
        Some(m) if !fa.is_frattini => m,
        Some(_) => return Err(Error::Precondition("chief factor is Frattini".into())),
        None => return Err(Error::Precondition("chief factor is nonabelian".into())),
    };
    let mut r = Bitset::full(g.order());
    let mut found = 0;
    for n in 0..st.normals.len() {
        let nrec = &st.normals[n];
        if nrec.order * fa.order > g.order() {
            continue;
        }
        let mins = st.minimal_over(n);
        if mins.len() != 1 {
            continue;
        }
        let mrec = &st.normals[mins[0]];
        if mrec.order != nrec.order * fa.order {
            continue;
        }
        let complemented = st.maximals.iter().any(|k| {
            nrec.members.is_subset(&k.members) && !mrec.members.is_subset(&k.members)
        });
        if !complemented {
            continue;
        }
        let Some(m) = FactorModule::new(g, mrec, nrec)? else {
            continue;
        };
        if a.isomorphic(&m)? {
            r.intersect_with(&nrec.members);
            found += 1;
        }
    }
    if found == 0 {
        return Err(Error::Defect("no monolithic primitive quotient for the factor".into()));
    }
    let ri = st
        .index_of(&r)
        .ok_or_else(|| Error::Defect("intersection of normal subgroups not normal".into()))?;
    let mins = st.minimal_over(ri);
    let i = join(g, &mins.iter().map(|&m| &st.normals[m]).collect::<Vec<_>>());
    let (r, i) = (
        st.normals[ri].clone(),
        st.normals[st.index_of(&i).ok_or_else(|| Error::Defect("socle not normal".into()))?].clone(),
    );
    let delta = log_exact(i.order / r.order, fa.order)
        .ok_or_else(|| Error::Defect("crown order is not a power of |A|".into()))?;
    for reverse in [false, true] {
        let s = if reverse { st.chief_series(true)? } else { series.to_vec() };
        let k = count_equivalent(&s, a)?;
        if k != delta {
            return Err(Error::Defect(format!(
                "delta = {delta} but the chief series has {k} equivalent factors"
            )));
        }
    }
    Ok(CrownData {
        factor,
        factor_order: fa.order,
        abelian: true,
        delta,
        r,
        i,
        u: None,
    })
}

/// Crown of a nonabelian factor `X/Y`, supported only when no other chief
/// factor has the same order (so `delta = 1`); then `R = C_G(X/Y)`.
fn nonabelian_crown(st: &Structure, series: &[ChiefFactor], factor: usize) -> Result<CrownData> {
    let g = &st.group;
    let fa = &series[factor];
    let same = series
        .iter()
        .filter(|f| !f.is_abelian && f.order == fa.order)
        .count();
    if same != 1 {
        return Err(Error::Unsupported(
            "nonabelian crown with several factors of the same order".into(),
        ));
    }
    let cent = Bitset::from_indices(
        g.order(),
        (0..g.order()).filter(|&x| {
            fa.upper.generators.iter().all(|&a| {
                let comm = g.mul(g.mul(g.inv(a), g.inv(x)), g.mul(a, x));
                fa.lower.contains(comm)
            })
        }),
    );
    let ri = st
        .index_of(&cent)
        .ok_or_else(|| Error::Defect("centralizer of a chief factor not normal".into()))?;
    let r = st.normals[ri].clone();
    let i = join(g, &[&r, &fa.upper]);
    let i = st.normals[st.index_of(&i).ok_or_else(|| Error::Defect("crown not normal".into()))?].clone();
    if i.order != r.order * fa.order {
        return Err(Error::Defect("I/R differs from the factor".into()));
    }
    Ok(CrownData {
        factor,
        factor_order: fa.order,
        abelian: false,
        delta: 1,
        r,
        i,
        u: None,
    })
}

/// Crown for any non-Frattini factor of the series.
pub fn crown_for_factor(st: &Structure, series: &[ChiefFactor], factor: usize) -> Result<CrownData> {
    if series[factor].is_abelian {
        abelian_crown(st, series, factor)
    } else {
        nonabelian_crown(st, series, factor)
    }
}

/// A crown with a normal subgroup `U` such that `I = R x U`.
pub fn corona_decomposition(st: &Structure) -> Result<CrownData> {
    if !st.frattini_is_trivial() {
        return Err(Error::Precondition("Frattini subgroup is nontrivial".into()));
    }
    let g = &st.group;
    let series = st.chief_series(false)?;
    if g.is_trivial() {
        return Err(Error::Precondition("trivial group has no crowns".into()));
    }
    for k in 0..series.len() {
        if series[k].is_frattini {
            continue;
        }
        let mut crown = match crown_for_factor(st, &series, k) {
            Ok(c) => c,
            Err(Error::Unsupported(_)) => continue,
            Err(e) => return Err(e),
        };
        let u = st.normals.iter().find(|u| {
            !u.is_trivial()
                && u.members.is_subset(&crown.i.members)
                && u.order * crown.r.order == crown.i.order
                && u.members.and(&crown.r.members).count() == 1
        });
        if let Some(u) = u {
            crown.u = Some(u.clone());
            return Ok(crown);
        }
    }
    Err(Error::Defect("no complement found for any crown".into()))
}

/// `KU = G` and `KR = G` imply `K = G`, evaluated literally.
pub fn verify_sotto(g: &Group, crown: &CrownData, k: &SubgroupRecord) -> bool {
    let Some(u) = &crown.u else {
        return true;
    };
    let n = g.order();
    let ku = g.product_set(&k.members, &u.members).count() == n;
    let kr = g.product_set(&k.members, &crown.r.members).count() == n;
    !(ku && kr) || k.order == n
}

#[derive(Clone, Debug, Default)]
pub struct RelativoReport {
    pub tuples: usize,
    /// Tuples that invariably generate both `G/U` and `G/R`.
    pub hypotheses_met: usize,
    pub counterexamples: Vec<Vec<usize>>,
}

/// Samples tuples of 1 to 3 elements; whenever a tuple invariably generates
/// both `G/U` and `G/R`, checks that it invariably generates `G`.
pub fn check_relativo(
    g: &Arc<Group>,
    crown: &CrownData,
    samples: usize,
    seed: u64,
) -> Result<RelativoReport> {
    let u = crown
        .u
        .as_ref()
        .ok_or_else(|| Error::Precondition("crown has no complement U".into()))?;
    let qu = g.quotient(u)?;
    let qr = g.quotient(&crown.r)?;
    let tu = coverage_table(&qu.group)?;
    let tr = coverage_table(&qr.group)?;
    let tg = coverage_table(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = RelativoReport::default();
    for _ in 0..samples {
        let t = rng.gen_range(1..=3);
        let tuple: Vec<usize> = (0..t).map(|_| rng.gen_range(0..g.order())).collect();
        rep.tuples += 1;
        let pu: Vec<usize> = tuple.iter().map(|&x| qu.project(x)).collect();
        let pr: Vec<usize> = tuple.iter().map(|&x| qr.project(x)).collect();
        if invariably_generates(&qu.group, &tu, &pu)? && invariably_generates(&qr.group, &tr, &pr)? {
            rep.hypotheses_met += 1;
            if !invariably_generates(g, &tg, &tuple)? {
                rep.counterexamples.push(tuple);
            }
        }
    }
    Ok(rep)
}
