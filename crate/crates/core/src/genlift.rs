//! Generation and invariable generation of `V^u ⋊ H` from lifted generators
//! `h_1 w_1, .., h_d w_d`, decided by linear algebra over `F = End_H(V)`.
//!
//! With `r_j = (w_{1,j}, .., w_{d,j})` in `V^d`, the lifts generate iff the
//! `r_j` are F-independent modulo `D`, and invariably generate iff they are
//! F-independent modulo `D + W`.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::invariable::{coverage_table, invariably_generates};
use crate::modlin::{
    commutator_space, derivation_space, end_algebra, f_independent_mod, f_span, fixed_space,
    DerivationSpace, EndField, ModuleAction, ModuleDescriptor, RowSpace,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMode {
    Generate,
    InvariablyGenerate,
}

/// `ws[i][j]` is the `j`-th coordinate of `w_i` in `V^u`.
#[derive(Clone, Debug)]
pub struct LiftProblem<'a> {
    pub act: &'a ModuleAction,
    pub u: usize,
    pub hs: Vec<usize>,
    pub ws: Vec<Vec<Vec<u32>>>,
}

/// JSON form: `hs` are words in the generators of `H` (1-based, negative
/// entries for inverses, empty word for the identity).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftDescriptor {
    pub module: ModuleDescriptor,
    pub u: usize,
    pub hs: Vec<Vec<i64>>,
    #[serde(default)]
    pub ws: Vec<Vec<Vec<u32>>>,
}

/// Evaluates a word in the generators of `g`.
pub fn eval_word(g: &Group, word: &[i64]) -> Result<usize> {
    let gens = g.generator_indices();
    word.iter().try_fold(g.identity(), |acc, &x| {
        let k = x.unsigned_abs() as usize;
        if k == 0 || k > gens.len() {
            return Err(Error::Descriptor(format!(
                "generator {x} out of range 1..={}",
                gens.len()
            )));
        }
        let s = gens[k - 1];
        Ok(g.mul(acc, if x > 0 { s } else { g.inv(s) }))
    })
}

#[derive(Clone, Debug)]
pub struct DwSpaces {
    pub d: RowSpace,
    pub w: RowSpace,
    pub sum: RowSpace,
    pub dim_f_d: usize,
    pub dim_f_w: usize,
    pub dim_f_sum: usize,
}

/// Everything the criteria need for a fixed `(act, hs)`; reusable across
/// many choices of `ws`.
#[derive(Clone, Debug)]
pub struct LiftSetup<'a> {
    pub act: &'a ModuleAction,
    pub field: EndField,
    pub der: DerivationSpace,
    pub hs: Vec<usize>,
    pub spaces: DwSpaces,
}

impl<'a> LiftSetup<'a> {
    /// Checks the hypothesis of `mode` on `hs` and builds `D` and `W`.
    pub fn new(act: &'a ModuleAction, hs: &[usize], mode: LiftMode) -> Result<Self> {
        let g = &act.group;
        if hs.is_empty() {
            return Err(Error::Precondition("need at least one element".into()));
        }
        if hs.iter().any(|&h| h >= g.order()) {
            return Err(Error::NotInGroup);
        }
        match mode {
            LiftMode::Generate => {
                if !g.generates(hs) {
                    return Err(Error::Precondition("hs do not generate H".into()));
                }
            }
            LiftMode::InvariablyGenerate => {
                let table = coverage_table(g)?;
                if !invariably_generates(g, &table, hs)? {
                    return Err(Error::Precondition(
                        "hs do not invariably generate H".into(),
                    ));
                }
            }
        }
        let field = end_algebra(act)?;
        let der = derivation_space(act, &field)?;
        let spaces = build_dw_unchecked(act, &field, &der, hs)?;
        Ok(LiftSetup {
            act,
            field,
            der,
            hs: hs.to_vec(),
            spaces,
        })
    }

    pub fn d(&self) -> usize {
        self.hs.len()
    }

    /// `n d`, the F-dimension of `V^d`.
    pub fn ambient_dim_f(&self) -> usize {
        self.field.n * self.d()
    }

    fn rows(&self, u: usize, ws: &[Vec<Vec<u32>>]) -> Result<Vec<Vec<u32>>> {
        let dim = self.act.dim;
        if ws.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: ws.len(),
            });
        }
        for w in ws {
            if w.len() != u {
                return Err(Error::DimensionMismatch {
                    expected: u,
                    got: w.len(),
                });
            }
            if let Some(bad) = w.iter().find(|x| x.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: bad.len(),
                });
            }
            if w.iter().flatten().any(|&x| x >= self.act.p) {
                return Err(Error::Action("vector entry out of range".into()));
            }
        }
        Ok((0..u)
            .map(|j| ws.iter().flat_map(|w| w[j].iter().copied()).collect())
            .collect())
    }

    /// Verdict of the generation criterion for the lifts `h_i w_i`.
    pub fn generates(&self, u: usize, ws: &[Vec<Vec<u32>>]) -> Result<bool> {
        let r = self.rows(u, ws)?;
        f_independent_mod(&r, &self.spaces.d, &self.field)
    }

    /// Verdict of the invariable generation criterion.
    pub fn invariably_generates(&self, u: usize, ws: &[Vec<Vec<u32>>]) -> Result<bool> {
        let r = self.rows(u, ws)?;
        f_independent_mod(&r, &self.spaces.sum, &self.field)
    }

    /// Largest `u` admitting suitable `ws`, with a witness.
    pub fn max_lift_rank(&self, mode: LiftMode) -> Result<(usize, Vec<Vec<Vec<u32>>>)> {
        let base = match mode {
            LiftMode::Generate => &self.spaces.d,
            LiftMode::InvariablyGenerate => &self.spaces.sum,
        };
        let total = self.ambient_dim_f() * self.field.e;
        let mut acc = base.clone();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for k in 0..total {
            if acc.dim() == total {
                break;
            }
            let e: Vec<u32> = (0..total).map(|j| (j == k) as u32).collect();
            if f_independent_mod(std::slice::from_ref(&e), &acc, &self.field)? {
                acc.extend_from(&f_span(std::slice::from_ref(&e), total, &self.field)?);
                rows.push(e);
            }
        }
        let u = rows.len();
        let expected = self.ambient_dim_f()
            - match mode {
                LiftMode::Generate => self.spaces.dim_f_d,
                LiftMode::InvariablyGenerate => self.spaces.dim_f_sum,
            };
        if u != expected {
            return Err(Error::Defect(format!(
                "basis completion found {u} vectors, expected {expected}"
            )));
        }
        let dim = self.act.dim;
        let ws = (0..self.d())
            .map(|i| rows.iter().map(|r| r[i * dim..(i + 1) * dim].to_vec()).collect())
            .collect();
        Ok((u, ws))
    }

    /// Both sides of `nd - dim_F(D+W) >= sum_i dim_F C_V(h_i) - m`.
    pub fn dimen_bound(&self) -> Result<(i64, i64, bool)> {
        let lhs = self.ambient_dim_f() as i64 - self.spaces.dim_f_sum as i64;
        let mut rhs = -(self.der.m as i64);
        for &h in &self.hs {
            rhs += fixed_space(self.act, &self.field, h)?.dim_f as i64;
        }
        Ok((lhs, rhs, lhs >= rhs))
    }
}

fn build_dw_unchecked(
    act: &ModuleAction,
    f: &EndField,
    der: &DerivationSpace,
    hs: &[usize],
) -> Result<DwSpaces> {
    let dim = act.dim;
    let total = dim * hs.len();
    let dvecs: Vec<Vec<u32>> = (0..der.basis.len())
        .map(|b| {
            hs.iter()
                .flat_map(|&h| der.evaluate_basis(b, h).iter().copied())
                .collect()
        })
        .collect();
    let d = f_span(&dvecs, total, f)?;
    let mut wvecs = Vec::new();
    for (i, &h) in hs.iter().enumerate() {
        for v in commutator_space(act, h).basis() {
            let mut x = vec![0u32; total];
            x[i * dim..(i + 1) * dim].copy_from_slice(v);
            wvecs.push(x);
        }
    }
    let w = f_span(&wvecs, total, f)?;
    let mut sum = d.clone();
    sum.extend_from(&w);
    for s in [&d, &w, &sum] {
        if s.dim() % f.e != 0 {
            return Err(Error::Defect("subspace is not F-invariant".into()));
        }
    }
    Ok(DwSpaces {
        dim_f_d: d.dim() / f.e,
        dim_f_w: w.dim() / f.e,
        dim_f_sum: sum.dim() / f.e,
        d,
        w,
        sum,
    })
}

/// `D`, `W` and `D + W` for `hs`, which must generate `H`.
pub fn build_dw(act: &ModuleAction, hs: &[usize]) -> Result<DwSpaces> {
    Ok(LiftSetup::new(act, hs, LiftMode::Generate)?.spaces)
}

pub fn gen_criterion(problem: &LiftProblem) -> Result<bool> {
    if problem.u == 0 {
        LiftSetup::new(problem.act, &problem.hs, LiftMode::Generate)?;
        return Ok(true);
    }
    LiftSetup::new(problem.act, &problem.hs, LiftMode::Generate)?
        .generates(problem.u, &problem.ws)
}

pub fn invgen_criterion(problem: &LiftProblem) -> Result<bool> {
    LiftSetup::new(problem.act, &problem.hs, LiftMode::InvariablyGenerate)?
        .invariably_generates(problem.u, &problem.ws)
}

/// `n(d-1) - m` (generation) or `nd - dim_F(D+W)` (invariable generation),
/// clipped at zero, together with a witness `ws`.
pub fn max_lift_rank(
    act: &ModuleAction,
    hs: &[usize],
    mode: LiftMode,
) -> Result<(usize, Vec<Vec<Vec<u32>>>)> {
    LiftSetup::new(act, hs, mode)?.max_lift_rank(mode)
}

pub fn dimen_bound_check(act: &ModuleAction, hs: &[usize]) -> Result<(i64, i64, bool)> {
    LiftSetup::new(act, hs, LiftMode::Generate)?.dimen_bound()
}

/// A problem with its own module, as read from JSON.
pub struct OwnedLift {
    pub act: ModuleAction,
    pub u: usize,
    pub hs: Vec<usize>,
    pub ws: Vec<Vec<Vec<u32>>>,
}

impl OwnedLift {
    pub fn from_descriptor(d: &LiftDescriptor) -> Result<Self> {
        let act = ModuleAction::from_descriptor(&d.module)?;
        let hs = d
            .hs
            .iter()
            .map(|w| eval_word(&act.group, w))
            .collect::<Result<Vec<_>>>()?;
        let ws = if d.ws.is_empty() && d.u == 0 {
            vec![Vec::new(); hs.len()]
        } else {
            d.ws.clone()
        };
        Ok(OwnedLift {
            act,
            u: d.u,
            hs,
            ws,
        })
    }

    pub fn problem(&self) -> LiftProblem<'_> {
        LiftProblem {
            act: &self.act,
            u: self.u,
            hs: self.hs.clone(),
            ws: self.ws.clone(),
        }
    }
}
