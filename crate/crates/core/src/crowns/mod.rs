//! Chief series, crowns and crown-based powers.

mod crown;
mod power;

pub use crown::{
    abelian_crown, check_relativo, corona_decomposition, crown_for_factor, verify_sotto,
    CrownData, RelativoReport,
};
pub use power::{
    build_crown_power_abelian, build_crown_power_general, unique_minimal_normal, CrownPower,
};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::group::{Group, SubgroupRecord};
use crate::modlin::{hom_space, GfMatrix, ModuleAction};
use std::sync::Arc;

/// Conjugation action of `G` on an elementary abelian factor `X/Y`.
#[derive(Clone, Debug)]
pub struct FactorModule {
    pub p: u32,
    pub dim: usize,
    /// Elements of `X` whose images form the chosen basis of `X/Y`.
    pub basis: Vec<usize>,
    /// One matrix per generator of `G`.
    pub matrices: Vec<GfMatrix>,
}

impl FactorModule {
    /// Returns `None` unless `X/Y` is elementary abelian.
    pub fn new(g: &Group, upper: &SubgroupRecord, lower: &SubgroupRecord) -> Result<Option<Self>> {
        let idx = upper.order / lower.order;
        let Some((p, dim)) = crate::group::prime_power(idx) else {
            return Ok(None);
        };
        let xs: Vec<usize> = upper.generators.clone();
        for (i, &a) in xs.iter().enumerate() {
            for &b in &xs[i + 1..] {
                let comm = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
                if !lower.contains(comm) {
                    return Ok(None);
                }
            }
            if !lower.contains(g.power(a, p)) {
                return Ok(None);
            }
        }
        // greedy basis of X/Y and coordinates of every element of X
        let mut span = lower.members.clone();
        let mut span_gens = lower.generators.clone();
        let mut basis = Vec::new();
        for x in upper.elements() {
            if !span.contains(x) {
                span = g.extend_closure(&span, &span_gens, &[x]);
                span_gens.push(x);
                basis.push(x);
            }
        }
        if basis.len() != dim {
            return Err(Error::Defect("factor basis has the wrong size".into()));
        }
        let mut coords = std::collections::HashMap::new();
        for code in 0..idx {
            let c = crate::modlin::index_to_vector(code, p as u32, dim);
            let e = basis
                .iter()
                .zip(&c)
                .fold(g.identity(), |acc, (&b, &k)| g.mul(acc, g.power(b, k as usize)));
            for y in lower.elements() {
                coords.insert(g.mul(y, e), c.clone());
            }
        }
        let matrices = g
            .generator_indices()
            .iter()
            .map(|&s| {
                let rows: Vec<Vec<u32>> = basis.iter().map(|&b| coords[&g.conj(b, s)].clone()).collect();
                GfMatrix::from_rows(p as u32, &rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(FactorModule {
            p: p as u32,
            dim,
            basis,
            matrices,
        }))
    }

    /// Whether the two factors are isomorphic as `G`-modules (both
    /// irreducible, so any nonzero homomorphism will do).
    pub fn isomorphic(&self, other: &FactorModule) -> Result<bool> {
        if self.p != other.p || self.dim != other.dim {
            return Ok(false);
        }
        Ok(!hom_space(self.p, &self.matrices, &other.matrices)?.is_empty())
    }

    pub fn module_action(&self, g: &Arc<Group>) -> Result<ModuleAction> {
        ModuleAction::new(g.clone(), self.p, self.dim, self.matrices.clone())
    }
}

#[derive(Clone, Debug)]
pub struct ChiefFactor {
    pub upper: SubgroupRecord,
    pub lower: SubgroupRecord,
    pub order: usize,
    pub is_abelian: bool,
    /// Abelian and contained in the Frattini subgroup of `G/lower`.
    pub is_frattini: bool,
    pub module: Option<FactorModule>,
}

/// Normal subgroups and maximal subgroups of a group, computed once.
pub struct Structure {
    pub group: Arc<Group>,
    pub normals: Vec<SubgroupRecord>,
    pub maximals: Vec<SubgroupRecord>,
}

impl Structure {
    pub fn new(group: Arc<Group>) -> Result<Self> {
        let normals = group.normal_subgroups()?;
        let lattice = group.subgroup_lattice()?;
        let maximals = Group::maximal_subgroups(&lattice);
        Ok(Structure {
            group,
            normals,
            maximals,
        })
    }

    /// Indices of the normal subgroups minimal over `normals[n]`.
    pub fn minimal_over(&self, n: usize) -> Vec<usize> {
        let base = &self.normals[n].members;
        let above: Vec<usize> = (0..self.normals.len())
            .filter(|&m| m != n && base.is_subset(&self.normals[m].members))
            .collect();
        above
            .iter()
            .copied()
            .filter(|&m| {
                !above.iter().any(|&k| {
                    k != m
                        && self.normals[k].order < self.normals[m].order
                        && self.normals[k].members.is_subset(&self.normals[m].members)
                })
            })
            .collect()
    }

    /// Indices of the normal subgroups maximal below `normals[x]`.
    pub fn maximal_below(&self, x: usize) -> Vec<usize> {
        let top = &self.normals[x].members;
        let below: Vec<usize> = (0..self.normals.len())
            .filter(|&y| y != x && self.normals[y].members.is_subset(top))
            .collect();
        below
            .iter()
            .copied()
            .filter(|&y| {
                !below.iter().any(|&k| {
                    k != y
                        && self.normals[k].order > self.normals[y].order
                        && self.normals[y].members.is_subset(&self.normals[k].members)
                })
            })
            .collect()
    }

    pub fn index_of(&self, members: &Bitset) -> Option<usize> {
        self.normals.iter().position(|n| &n.members == members)
    }

    /// Frattini factor test: `X/Y` lies in every maximal subgroup containing `Y`.
    pub fn is_frattini_factor(&self, upper: &SubgroupRecord, lower: &SubgroupRecord) -> bool {
        self.maximals
            .iter()
            .filter(|m| lower.members.is_subset(&m.members))
            .all(|m| upper.members.is_subset(&m.members))
    }

    pub fn frattini_is_trivial(&self) -> bool {
        let mut acc = Bitset::full(self.group.order());
        for m in &self.maximals {
            acc.intersect_with(&m.members);
        }
        acc.count() == 1
    }

    /// A chief series, listed from the bottom. At each step downwards the
    /// largest normal subgroup maximal below the current one is taken; ties
    /// go to the first (or, with `reverse_ties`, the last) in bitset order.
    pub fn chief_series(&self, reverse_ties: bool) -> Result<Vec<ChiefFactor>> {
        let g = &self.group;
        let mut x = self.normals.len() - 1;
        let mut out = Vec::new();
        while self.normals[x].order > 1 {
            let cands = self.maximal_below(x);
            let best = cands.iter().map(|&y| self.normals[y].order).max().unwrap();
            let ties: Vec<usize> = cands
                .into_iter()
                .filter(|&y| self.normals[y].order == best)
                .collect();
            let y = if reverse_ties {
                *ties.last().unwrap()
            } else {
                ties[0]
            };
            let (upper, lower) = (&self.normals[x], &self.normals[y]);
            let module = FactorModule::new(g, upper, lower)?;
            let is_abelian = module.is_some();
            out.push(ChiefFactor {
                upper: upper.clone(),
                lower: lower.clone(),
                order: upper.order / lower.order,
                is_abelian,
                is_frattini: is_abelian && self.is_frattini_factor(upper, lower),
                module,
            });
            x = y;
        }
        out.reverse();
        Ok(out)
    }
}

/// A chief series of `g` (bottom first) with deterministic tie-breaking.
pub fn chief_series(g: &Arc<Group>) -> Result<Vec<ChiefFactor>> {
    Structure::new(g.clone())?.chief_series(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{load_group, Family, GroupDescriptor};

    pub(crate) fn fam(f: Family, n: usize) -> Arc<Group> {
        Arc::new(load_group(&GroupDescriptor::family(f, n)).unwrap())
    }

    fn orders(s: &[ChiefFactor]) -> Vec<usize> {
        s.iter().map(|f| f.order).collect()
    }

    #[test]
    fn series_examples() {
        let s = chief_series(&fam(Family::Sym, 3)).unwrap();
        assert_eq!(orders(&s), vec![3, 2]);
        assert!(s.iter().all(|f| f.is_abelian && !f.is_frattini));
        let s = chief_series(&fam(Family::Cyclic, 4)).unwrap();
        assert_eq!(orders(&s), vec![2, 2]);
        assert!(s[0].is_frattini && !s[1].is_frattini);
        let s = chief_series(&fam(Family::Sym, 4)).unwrap();
        assert_eq!(orders(&s), vec![4, 3, 2]);
        let s = chief_series(&fam(Family::Alt, 5)).unwrap();
        assert_eq!(orders(&s), vec![60]);
        assert!(!s[0].is_abelian && !s[0].is_frattini);
    }

    #[test]
    fn factor_modules() {
        let g = fam(Family::Sym, 4);
        let s = chief_series(&g).unwrap();
        let v4 = s[0].module.as_ref().unwrap();
        assert_eq!((v4.p, v4.dim), (2, 2));
        let act = v4.module_action(&g).unwrap();
        assert!(act.irreducible && !act.faithful);
        // the C_3 and C_2 factors are not G-isomorphic to each other or to V_4
        let c3 = s[1].module.as_ref().unwrap();
        let c2 = s[2].module.as_ref().unwrap();
        assert!(!v4.isomorphic(c3).unwrap());
        assert!(!c3.isomorphic(c2).unwrap());
        assert!(c2.isomorphic(c2).unwrap());
    }

    #[test]
    fn klein_factors_equivalent() {
        let g = fam(Family::Dihedral, 2);
        let st = Structure::new(g).unwrap();
        let s = st.chief_series(false).unwrap();
        let r = st.chief_series(true).unwrap();
        assert_eq!(orders(&s), vec![2, 2]);
        let (a, b) = (s[0].module.as_ref().unwrap(), s[1].module.as_ref().unwrap());
        assert!(a.isomorphic(b).unwrap());
        assert_ne!(s[0].upper.members, r[0].upper.members);
    }
}
