//! The Chebotarev invariant `C(G)` and the probabilities `P_I(G, k)`.
//!
//! With `q_T` the proportion of elements lying in the conjugates of every
//! maximal class in `T`, inclusion-exclusion over nonempty `T` gives
//!
//! ```text
//! P_I(G, k) = 1 - sum_T (-1)^(|T|+1) q_T^k
//! C(G)      =     sum_T (-1)^(|T|+1) / (1 - q_T)
//! ```
//!
//! the second from `E[N] = sum_{n >= 0} P(N > n)`. `q_T` only depends on the
//! number of covered elements, so the signed terms are aggregated by that
//! count before any rational arithmetic happens.

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::invariable::ClassCoverageTable;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Largest number of maximal classes handled by inclusion-exclusion.
pub const IE_CAP: usize = 25;

/// A trial aborts after this many draws.
pub const MAX_DRAWS: u64 = 1_000_000;

/// Aggregated inclusion-exclusion terms: covered element count `s` (so
/// `q = s/|G|`) with its summed sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IeTerms {
    pub order: usize,
    pub terms: Vec<(usize, i64)>,
}

impl IeTerms {
    pub fn new(table: &ClassCoverageTable) -> Result<Self> {
        let r = table.r();
        if r > IE_CAP {
            return Err(Error::InclusionExclusionCap { r, cap: IE_CAP });
        }
        let nc = table.num_classes();
        // classes covered by each maximal class
        let covered: Vec<Bitset> = (0..r)
            .map(|m| Bitset::from_indices(nc, (0..nc).filter(|&c| table.covers[c][m])))
            .collect();
        let floor = Bitset::from_indices(nc, [0]);
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        let mut walk = Walk {
            covered: &covered,
            sizes: &table.class_sizes,
            floor: &floor,
            acc: &mut acc,
        };
        walk.descend(0, &Bitset::full(nc), 1);
        Ok(IeTerms {
            order: table.order,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    pub fn q(&self, s: usize) -> BigRational {
        BigRational::new(BigInt::from(s), BigInt::from(self.order))
    }

    /// `P_I(G, k)`, with `P_I(1, k) = 1` and `P_I(G, 0) = 0` for `G != 1`.
    pub fn p_invariable(&self, k: u32) -> BigRational {
        if self.order == 1 {
            return BigRational::one();
        }
        let mut union = BigRational::zero();
        for &(s, c) in &self.terms {
            union += self.q(s).pow(k as i32) * BigInt::from(c);
        }
        BigRational::one() - union
    }

    pub fn chebotarev(&self) -> BigRational {
        if self.order == 1 {
            return BigRational::zero();
        }
        let mut total = BigRational::zero();
        for &(s, c) in &self.terms {
            let denom = BigRational::one() - self.q(s);
            total += BigRational::from_integer(BigInt::from(c)) / denom;
        }
        total
    }

    /// Bound on `sum_{n >= from} P(N > n)`:
    /// `sum |coef| q^from / (1 - q)`.
    pub fn tail_bound(&self, from: u32) -> BigRational {
        let mut total = BigRational::zero();
        for &(s, c) in &self.terms {
            let q = self.q(s);
            total += q.pow(from as i32) * BigInt::from(c.abs()) / (BigRational::one() - q);
        }
        total
    }
}

struct Walk<'a> {
    covered: &'a [Bitset],
    sizes: &'a [usize],
    floor: &'a Bitset,
    acc: &'a mut BTreeMap<usize, i64>,
}

impl Walk<'_> {
    /// Adds the terms of every `T` extending the current subset by indices
    /// `>= start`; `sign` is the sign carried by a subset one larger than
    /// the current one.
    fn descend(&mut self, start: usize, current: &Bitset, sign: i64) {
        let r = self.covered.len();
        for j in start..r {
            let next = current.and(&self.covered[j]);
            if &next == self.floor && j + 1 < r {
                // every extension keeps only the identity class; the node
                // and its descendants cancel exactly
                continue;
            }
            let s: usize = next.iter().map(|c| self.sizes[c]).sum();
            *self.acc.entry(s).or_insert(0) += sign;
            self.descend(j + 1, &next, -sign);
        }
    }
}

pub fn p_invariable_exact(table: &ClassCoverageTable, k: u32) -> Result<BigRational> {
    Ok(IeTerms::new(table)?.p_invariable(k))
}

pub fn chebotarev_exact(table: &ClassCoverageTable) -> Result<BigRational> {
    Ok(IeTerms::new(table)?.chebotarev())
}

/// Least `k` with `P_I(G, k) >= threshold`.
pub fn min_k_for_probability(terms: &IeTerms, threshold: &BigRational) -> Result<u32> {
    if terms.order == 1 || !threshold.is_positive() {
        return Ok(0);
    }
    if threshold >= &BigRational::one() {
        return Err(Error::Precondition(
            "threshold must be below 1 for a nontrivial group".into(),
        ));
    }
    // P_I(G,k) -> 1, so the search ends; bound it anyway
    for k in 1..=100_000u32 {
        if &terms.p_invariable(k) >= threshold {
            return Ok(k);
        }
    }
    Err(Error::Defect("minimal k search did not terminate".into()))
}

/// Per-trial random stream: ChaCha8 keyed by `seed` (expanded with
/// `seed_from_u64`), with the trial index as the stream number. Trials are
/// therefore independent of execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Waiting time of one trial: uniform draws until no maximal class covers
/// every drawn class.
pub fn waiting_time(g: &Group, table: &ClassCoverageTable, seed: u64, trial: u64) -> Result<u64> {
    if g.is_trivial() {
        return Ok(0);
    }
    let mut rng = trial_rng(seed, trial);
    let n = g.order();
    let r = table.r();
    if r <= 64 {
        let masks: Vec<u64> = table
            .class_masks
            .iter()
            .map(|b| b.iter().fold(0u64, |m, i| m | 1 << i))
            .collect();
        let mut alive = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        let mut draws = 0;
        while alive != 0 {
            if draws >= MAX_DRAWS {
                return Err(Error::RunawayTrial(MAX_DRAWS));
            }
            let x = rng.gen_range(0..n);
            alive &= masks[g.class_of(x)];
            draws += 1;
        }
        Ok(draws)
    } else {
        let mut alive = Bitset::full(r);
        let mut draws = 0;
        while !alive.is_empty() {
            if draws >= MAX_DRAWS {
                return Err(Error::RunawayTrial(MAX_DRAWS));
            }
            let x = rng.gen_range(0..n);
            alive.intersect_with(&table.class_masks[g.class_of(x)]);
            draws += 1;
        }
        Ok(draws)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Monte Carlo estimate of `C(G)`; identical for any thread count.
pub fn chebotarev_montecarlo(
    g: &Group,
    table: &ClassCoverageTable,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let (sum, sumsq) = sum_trials(g, table, trials, seed)?;
    let t = trials as f64;
    let mean = sum as f64 / t;
    let var = if trials > 1 {
        ((sumsq as f64) - (sum as f64) * mean) / (t - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        estimate: mean,
        stderr: (var.max(0.0) / t).sqrt(),
        trials,
        seed,
    })
}

#[cfg(feature = "parallel")]
fn sum_trials(g: &Group, table: &ClassCoverageTable, trials: u64, seed: u64) -> Result<(u64, u128)> {
    use rayon::prelude::*;
    (0..trials)
        .into_par_iter()
        .map(|i| waiting_time(g, table, seed, i).map(|n| (n, (n as u128) * (n as u128))))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

#[cfg(not(feature = "parallel"))]
fn sum_trials(g: &Group, table: &ClassCoverageTable, trials: u64, seed: u64) -> Result<(u64, u128)> {
    let mut acc = (0u64, 0u128);
    for i in 0..trials {
        let n = waiting_time(g, table, seed, i)?;
        acc.0 += n;
        acc.1 += (n as u128) * (n as u128);
    }
    Ok(acc)
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact and simulated `C(G)` for one group.
#[derive(Clone, Debug)]
pub struct ChebReport {
    pub group: String,
    pub order: usize,
    pub r: usize,
    /// Absent when `r` exceeds the inclusion-exclusion cap.
    pub c_exact: Option<BigRational>,
    pub c_mc: f64,
    pub mc_stderr: f64,
    pub trials: u64,
    pub seed: u64,
    /// `C / sqrt|G|`, from the exact value when known.
    pub ratio_sqrt: f64,
    /// Least `k` with `P_I(G, k) >= 2/9` (needs the exact terms).
    pub min_k_29: Option<u32>,
    /// `P_I(G, min_k_29)`.
    pub p_at_min_k: Option<BigRational>,
}

pub fn cheb_report(
    g: &Group,
    table: &ClassCoverageTable,
    trials: u64,
    seed: u64,
) -> Result<ChebReport> {
    let terms = match IeTerms::new(table) {
        Ok(t) => Some(t),
        Err(Error::InclusionExclusionCap { .. }) => None,
        Err(e) => return Err(e),
    };
    let c_exact = terms.as_ref().map(|t| t.chebotarev());
    let two_ninths = BigRational::new(BigInt::from(2), BigInt::from(9));
    let min_k_29 = terms
        .as_ref()
        .map(|t| min_k_for_probability(t, &two_ninths))
        .transpose()?;
    let p_at_min_k = terms.as_ref().zip(min_k_29).map(|(t, k)| t.p_invariable(k));
    let mc = chebotarev_montecarlo(g, table, trials, seed)?;
    let c = c_exact.as_ref().map(to_f64).unwrap_or(mc.estimate);
    Ok(ChebReport {
        group: g.name().to_string(),
        order: g.order(),
        r: table.r(),
        c_exact,
        c_mc: mc.estimate,
        mc_stderr: mc.stderr,
        trials,
        seed,
        ratio_sqrt: c / (g.order() as f64).sqrt(),
        min_k_29,
        p_at_min_k,
    })
}
