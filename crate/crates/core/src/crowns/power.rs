use crate::error::{Error, Result};
use crate::group::{Caps, Group, SubgroupRecord};
use crate::modlin::{index_to_vector, vector_to_index, ModuleAction};
use crate::perm::Permutation;

/// `V^u ⋊ H` with `H` acting diagonally, realised on `u` copies of `V`
/// (affinely) followed by the original domain of `H`.
#[derive(Debug)]
pub struct CrownPower {
    pub group: Group,
    pub u: usize,
    pub p: u32,
    pub dim: usize,
    h_degree: usize,
    h_perms: Vec<Permutation>,
    mats: Vec<Vec<Vec<u32>>>,
}

impl CrownPower {
    /// The permutation of `h w`: `x -> x^h + w_j` on copy `j`, and `h` on
    /// the domain of `H`.
    pub fn lift_perm(&self, h: usize, ws: &[Vec<u32>]) -> Result<Permutation> {
        if ws.len() != self.u || ws.iter().any(|w| w.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.u,
                got: ws.len(),
            });
        }
        let size = (self.p as usize).pow(self.dim as u32);
        let mut images = Vec::with_capacity(self.u * size + self.h_degree);
        for (j, w) in ws.iter().enumerate() {
            for x in 0..size {
                let v = index_to_vector(x, self.p, self.dim);
                let img: Vec<u32> = (0..self.dim)
                    .map(|c| {
                        let s: u64 = v
                            .iter()
                            .enumerate()
                            .map(|(r, &a)| a as u64 * self.mats[h][r][c] as u64)
                            .sum();
                        ((s + w[c] as u64) % self.p as u64) as u32
                    })
                    .collect();
                images.push(j * size + vector_to_index(&img, self.p));
            }
        }
        let off = self.u * size;
        images.extend(self.h_perms[h].images().map(|x| x + off));
        Permutation::from_images(images)
    }

    /// Element index of `h w`.
    pub fn lift(&self, h: usize, ws: &[Vec<u32>]) -> Result<usize> {
        self.group.try_index(&self.lift_perm(h, ws)?)
    }

    /// Inverse of `lift`: `h` from the action on the domain of `H`, and
    /// `w_j` as the image of the zero vector on copy `j`.
    pub fn decompose(&self, x: usize) -> Result<(usize, Vec<Vec<u32>>)> {
        let perm = self.group.element(x);
        let size = (self.p as usize).pow(self.dim as u32);
        let off = self.u * size;
        let hp = Permutation::from_images(
            (0..self.h_degree).map(|i| perm.apply(off + i) - off).collect(),
        )?;
        let h = self
            .h_perms
            .iter()
            .position(|q| q == &hp)
            .ok_or(Error::NotInGroup)?;
        let ws = (0..self.u)
            .map(|j| index_to_vector(perm.apply(j * size) - j * size, self.p, self.dim))
            .collect();
        Ok((h, ws))
    }
}

pub fn build_crown_power_abelian(act: &ModuleAction, u: usize) -> Result<CrownPower> {
    let h = &act.group;
    let size = act.size();
    let order = size
        .checked_pow(u as u32)
        .and_then(|x| x.checked_mul(h.order()))
        .unwrap_or(usize::MAX);
    let caps = Caps::internal();
    if order > caps.max_order {
        return Err(Error::CapExceeded {
            what: "group order",
            cap: caps.max_order,
        });
    }
    let mut cp = CrownPower {
        group: Group::generate("trivial", 1, vec![], caps)?,
        u,
        p: act.p,
        dim: act.dim,
        h_degree: h.degree(),
        h_perms: h.elements().to_vec(),
        mats: (0..h.order()).map(|x| act.matrix(x).to_rows()).collect(),
    };
    let zero = vec![vec![0u32; act.dim]; u];
    let mut gens = Vec::new();
    for &s in h.generator_indices() {
        gens.push(cp.lift_perm(s, &zero)?);
    }
    for j in 0..u {
        for k in 0..act.dim {
            let mut ws = zero.clone();
            ws[j][k] = 1;
            gens.push(cp.lift_perm(0, &ws)?);
        }
    }
    let degree = u * size + h.degree();
    let name = format!("{}^{} : {}", size, u, h.name());
    cp.group = Group::generate(name, degree, gens, caps)?;
    if cp.group.order() != order {
        return Err(Error::Defect(format!(
            "crown power has order {}, expected {order}",
            cp.group.order()
        )));
    }
    Ok(cp)
}

/// The unique minimal normal subgroup of `l`, if there is exactly one.
pub fn unique_minimal_normal(l: &Group) -> Result<Option<SubgroupRecord>> {
    let normals = l.normal_subgroups()?;
    let minimal: Vec<&SubgroupRecord> = normals
        .iter()
        .filter(|n| !n.is_trivial())
        .filter(|n| {
            !normals
                .iter()
                .any(|k| !k.is_trivial() && k.order < n.order && k.members.is_subset(&n.members))
        })
        .collect();
    Ok(match minimal.as_slice() {
        [one] => Some((*one).clone()),
        _ => None,
    })
}

/// `L_k`: tuples in `L^k` congruent modulo `A`, on `k` copies of the domain
/// of `L`.
pub fn build_crown_power_general(l: &Group, a: &SubgroupRecord, k: usize) -> Result<Group> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    match unique_minimal_normal(l)? {
        Some(m) if m.members == a.members => {}
        _ => {
            return Err(Error::Precondition(
                "A is not the unique minimal normal subgroup".into(),
            ))
        }
    }
    // primitive: the socle is nonabelian or has a complement
    let abelian = a
        .generators
        .iter()
        .all(|&x| a.generators.iter().all(|&y| l.commutes(x, y)));
    if abelian {
        let lattice = l.subgroup_lattice()?;
        if Group::maximal_subgroups(&lattice)
            .iter()
            .all(|m| a.members.is_subset(&m.members))
        {
            return Err(Error::Precondition("L is not primitive".into()));
        }
    }
    let order = a
        .order
        .checked_pow(k as u32 - 1)
        .and_then(|x| x.checked_mul(l.order()))
        .unwrap_or(usize::MAX);
    let caps = Caps::internal();
    if order > caps.max_order {
        return Err(Error::CapExceeded {
            what: "group order",
            cap: caps.max_order,
        });
    }
    let n = l.degree();
    let id = Permutation::identity(n);
    let place = |parts: Vec<&Permutation>| -> Result<Permutation> {
        Permutation::from_images(
            parts
                .iter()
                .enumerate()
                .flat_map(|(j, p)| p.images().map(move |x| x + j * n))
                .collect(),
        )
    };
    let mut gens = Vec::new();
    for s in l.generators() {
        gens.push(place(vec![s; k])?);
    }
    if k > 1 {
        for j in 0..k {
            for &x in &a.generators {
                let mut parts = vec![&id; k];
                parts[j] = l.element(x);
                gens.push(place(parts)?);
            }
        }
    }
    let g = Group::generate(format!("{}_{}", l.name(), k), n * k, gens, caps)?;
    if g.order() != order {
        return Err(Error::Defect(format!(
            "crown power has order {}, expected {order}",
            g.order()
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crowns::{FactorModule, Structure};
    use crate::group::{load_group, Family, GroupDescriptor};
    use crate::modlin::module_battery;
    use std::sync::Arc;

    fn battery(name: &str) -> ModuleAction {
        module_battery()
            .into_iter()
            .find(|(n, _)| n == name)
            .unwrap()
            .1
    }

    #[test]
    fn abelian_orders() {
        let cp = build_crown_power_abelian(&battery("GL(2,2) natural"), 1).unwrap();
        assert_eq!(cp.group.order(), 24);
        let s4 = load_group(&GroupDescriptor::family(Family::Sym, 4)).unwrap();
        let profile = |g: &Group| {
            let mut v: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.size).collect();
            v.sort();
            v
        };
        assert_eq!(profile(&cp.group), profile(&s4));
        let cp = build_crown_power_abelian(&battery("C2 on GF(3)"), 0).unwrap();
        assert_eq!(cp.group.order(), 2);
        let cp = build_crown_power_abelian(&battery("C2 on GF(3)"), 2).unwrap();
        assert_eq!(cp.group.order(), 18);
    }

    #[test]
    fn lift_is_semidirect() {
        let act = battery("C3 on GF(2)^2");
        let cp = build_crown_power_abelian(&act, 2).unwrap();
        let h = &act.group;
        let s = h.generator_indices()[0];
        let w = vec![vec![1, 0], vec![0, 1]];
        let v = vec![vec![1, 1], vec![0, 1]];
        // (s w)(s v) = s^2 (w^s + v)
        let lhs = cp.group.mul(cp.lift(s, &w).unwrap(), cp.lift(s, &v).unwrap());
        let ws: Vec<Vec<u32>> = w
            .iter()
            .zip(&v)
            .map(|(a, b)| crate::modlin::gf::vec_add(&act.act(a, s), b, 2))
            .collect();
        assert_eq!(lhs, cp.lift(h.mul(s, s), &ws).unwrap());
    }

    #[test]
    fn general_orders() {
        let l = load_group(&GroupDescriptor::family(Family::Sym, 3)).unwrap();
        let a = unique_minimal_normal(&l).unwrap().unwrap();
        assert_eq!(a.order, 3);
        assert_eq!(build_crown_power_general(&l, &a, 1).unwrap().order(), 6);
        assert_eq!(build_crown_power_general(&l, &a, 2).unwrap().order(), 18);
        let g = build_crown_power_general(&l, &a, 3).unwrap();
        assert_eq!(g.order(), 54);
        let st = Structure::new(Arc::new(g)).unwrap();
        let mins: Vec<usize> = st.minimal_over(0);
        let socle = st.normals.iter().filter(|n| n.order == 27).count();
        assert_eq!(socle, 1);
        // all minimal normal subgroups are G-isomorphic to each other
        let first = FactorModule::new(&st.group, &st.normals[mins[0]], &st.normals[0])
            .unwrap()
            .unwrap();
        for &m in &mins {
            let f = FactorModule::new(&st.group, &st.normals[m], &st.normals[0])
                .unwrap()
                .unwrap();
            assert!(first.isomorphic(&f).unwrap());
        }
    }

    #[test]
    fn general_nonabelian_minimal_normals() {
        let l = load_group(&GroupDescriptor::family(Family::Alt, 5)).unwrap();
        let a = l.whole();
        let g = build_crown_power_general(&l, &a, 2).unwrap();
        assert_eq!(g.order(), 3600);
    }

    #[test]
    fn general_rejects() {
        let l = load_group(&GroupDescriptor::family(Family::Cyclic, 4)).unwrap();
        let a = unique_minimal_normal(&l).unwrap().unwrap();
        assert!(build_crown_power_general(&l, &a, 2).is_err());
        let l = load_group(&GroupDescriptor::family(Family::Sym, 3)).unwrap();
        assert!(build_crown_power_general(&l, &l.whole(), 2).is_err());
    }
}
