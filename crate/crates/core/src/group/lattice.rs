use super::Group;
use crate::bitset::Bitset;
use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub members: Bitset,
    /// Element indices generating the subgroup (not necessarily minimal).
    pub generators: Vec<usize>,
    pub order: usize,
    pub index: usize,
    pub is_maximal: bool,
    pub is_normal: bool,
}

impl SubgroupRecord {
    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_whole(&self) -> bool {
        self.index == 1
    }
}

impl Group {
    fn record(&self, members: Bitset, generators: Vec<usize>, is_maximal: bool) -> SubgroupRecord {
        let order = members.count();
        SubgroupRecord {
            is_normal: self.is_normal_set(&members),
            index: self.order() / order,
            order,
            members,
            generators,
            is_maximal,
        }
    }

    /// Whether a subgroup given as a bitset is normalised by every generator.
    pub fn is_normal_set(&self, members: &Bitset) -> bool {
        self.generator_indices()
            .iter()
            .all(|&s| members.iter().all(|x| members.contains(self.conj(x, s))))
    }

    /// `{ x^g : x in members }`.
    pub fn conjugate_set(&self, members: &Bitset, g: usize) -> Bitset {
        Bitset::from_indices(self.order(), members.iter().map(|x| self.conj(x, g)))
    }

    /// All conjugates of a subgroup, as bitsets, in discovery order.
    pub fn conjugates_of(&self, members: &Bitset) -> Vec<Bitset> {
        let mut seen: HashSet<Bitset> = HashSet::new();
        seen.insert(members.clone());
        let mut orbit = vec![members.clone()];
        let mut head = 0;
        while head < orbit.len() {
            for &s in self.generator_indices() {
                let c = self.conjugate_set(&orbit[head], s);
                if seen.insert(c.clone()) {
                    orbit.push(c);
                }
            }
            head += 1;
        }
        orbit
    }

    /// Largest normal subgroup contained in `members`.
    pub fn core(&self, members: &Bitset) -> Bitset {
        let mut acc = members.clone();
        for c in self.conjugates_of(members) {
            acc.intersect_with(&c);
        }
        acc
    }

    /// The subgroup generated by the given elements.
    pub fn generated_subgroup(&self, elems: &[usize]) -> Result<SubgroupRecord> {
        if elems.iter().any(|&e| e >= self.order()) {
            return Err(Error::NotInGroup);
        }
        let members = self.closure(elems);
        let is_max = self.is_maximal_set(&members, elems);
        Ok(self.record(members, elems.to_vec(), is_max))
    }

    /// Proper, and every element outside it generates the whole group
    /// together with it.
    fn is_maximal_set(&self, members: &Bitset, gens: &[usize]) -> bool {
        let n = self.order();
        if members.count() == n {
            return false;
        }
        let mut covered = members.clone();
        for g in 0..n {
            if covered.contains(g) {
                continue;
            }
            let t = self.extend_closure(members, gens, &[g]);
            if t.count() != n {
                return false;
            }
            // the whole right coset Kg gives the same join
            for k in members.iter() {
                covered.insert(self.mul(k, g));
            }
        }
        true
    }

    pub fn whole(&self) -> SubgroupRecord {
        self.record(
            Bitset::full(self.order()),
            self.generator_indices().to_vec(),
            false,
        )
    }

    pub fn trivial_subgroup(&self) -> SubgroupRecord {
        let is_max = self.is_maximal_set(&Bitset::from_indices(self.order(), [0]), &[]);
        self.record(Bitset::from_indices(self.order(), [0]), vec![], is_max)
    }

    fn check_lattice_cap(&self) -> Result<()> {
        if self.order() > self.caps().lattice_order {
            return Err(Error::CapExceeded {
                what: "subgroup lattice order",
                cap: self.caps().lattice_order,
            });
        }
        Ok(())
    }

    /// Every subgroup exactly once, sorted by (order, membership bitset).
    ///
    /// Built bottom-up by cyclic extension: each subgroup found so far is
    /// joined with every cyclic subgroup of prime-power order it does not
    /// contain. Every subgroup is generated by its prime-power-order elements,
    /// so this reaches all of them.
    pub fn subgroup_lattice(&self) -> Result<Vec<SubgroupRecord>> {
        self.check_lattice_cap()?;
        let n = self.order();
        let mut cyclic: Vec<(usize, Bitset)> = Vec::new();
        let mut cyc_seen: HashSet<Bitset> = HashSet::new();
        for g in 1..n {
            let o = self.element_order(g);
            if super::field::prime_power(o).is_none() {
                continue;
            }
            let c = self.closure(&[g]);
            if cyc_seen.insert(c.clone()) {
                cyclic.push((g, c));
            }
        }
        let trivial = Bitset::from_indices(n, [0]);
        let mut found: HashMap<Bitset, usize> = HashMap::new();
        let mut subs: Vec<(Bitset, Vec<usize>)> = vec![(trivial.clone(), vec![])];
        found.insert(trivial, 0);
        let mut i = 0;
        while i < subs.len() {
            let (s, gens) = subs[i].clone();
            i += 1;
            for (c, cbits) in &cyclic {
                if cbits.is_subset(&s) {
                    continue;
                }
                let t = self.extend_closure(&s, &gens, &[*c]);
                if !found.contains_key(&t) {
                    found.insert(t.clone(), subs.len());
                    let mut tg = gens.clone();
                    tg.push(*c);
                    subs.push((t, tg));
                }
            }
        }
        subs.sort_by(|a, b| (a.0.count(), &a.0).cmp(&(b.0.count(), &b.0)));
        let mut out: Vec<SubgroupRecord> = subs
            .into_iter()
            .map(|(m, g)| self.record(m, g, false))
            .collect();
        // maximal: proper and not strictly inside another proper subgroup
        let proper: Vec<usize> = (0..out.len()).filter(|&k| out[k].order < n).collect();
        for &a in &proper {
            let is_max = !proper.iter().any(|&b| {
                out[b].order > out[a].order && out[a].members.is_subset(&out[b].members)
            });
            out[a].is_maximal = is_max;
        }
        Ok(out)
    }

    /// Maximal subgroups, all of them, from a computed lattice.
    pub fn maximal_subgroups(lattice: &[SubgroupRecord]) -> Vec<SubgroupRecord> {
        lattice.iter().filter(|s| s.is_maximal).cloned().collect()
    }

    /// One representative per conjugacy class of maximal subgroups; the
    /// representative is the first class member in lattice order.
    pub fn maximal_subgroups_up_to_conjugacy(
        &self,
        lattice: &[SubgroupRecord],
    ) -> Vec<SubgroupRecord> {
        let mut done: HashSet<Bitset> = HashSet::new();
        let mut reps = Vec::new();
        for s in lattice.iter().filter(|s| s.is_maximal) {
            if done.contains(&s.members) {
                continue;
            }
            for c in self.conjugates_of(&s.members) {
                done.insert(c);
            }
            reps.push(s.clone());
        }
        reps
    }

    /// Intersection of all maximal subgroups (the whole group if trivial).
    pub fn frattini(&self, lattice: &[SubgroupRecord]) -> SubgroupRecord {
        let mut acc = Bitset::full(self.order());
        for m in lattice.iter().filter(|s| s.is_maximal) {
            acc.intersect_with(&m.members);
        }
        let gens: Vec<usize> = acc.iter().collect();
        let gens = self.small_generating_set(&acc, &gens);
        self.record(acc, gens, false)
    }

    /// Greedy generating set for a subgroup, drawn from `candidates` in order.
    pub fn small_generating_set(&self, members: &Bitset, candidates: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = Bitset::from_indices(self.order(), [0]);
        let target = members.count();
        for &c in candidates {
            if cur.count() == target {
                break;
            }
            if !cur.contains(c) {
                cur = self.extend_closure(&cur, &gens, &[c]);
                gens.push(c);
            }
        }
        gens
    }

    /// Record for an arbitrary subgroup given by its member bitset.
    pub fn subgroup_from_members(&self, members: Bitset) -> SubgroupRecord {
        let cand: Vec<usize> = members.iter().collect();
        let gens = self.small_generating_set(&members, &cand);
        let is_max = self.is_maximal_set(&members, &gens);
        self.record(members, gens, is_max)
    }

    /// All normal subgroups, sorted by (order, bitset).
    ///
    /// Computed as the join-closure of the normal closures of conjugacy
    /// classes, which does not need the full subgroup lattice.
    pub fn normal_subgroups(&self) -> Result<Vec<SubgroupRecord>> {
        self.check_lattice_cap()?;
        let n = self.order();
        let mut found: HashSet<Bitset> = HashSet::new();
        let mut list: Vec<(Bitset, Vec<usize>)> = Vec::new();
        let trivial = Bitset::from_indices(n, [0]);
        found.insert(trivial.clone());
        list.push((trivial, vec![]));
        let mut closures: Vec<(Bitset, Vec<usize>)> = Vec::new();
        for c in self.conjugacy_classes().iter().skip(1) {
            let elems: Vec<usize> = c.members.iter().collect();
            let m = self.closure(&elems);
            let gens = self.small_generating_set(&m, &elems);
            if found.insert(m.clone()) {
                list.push((m.clone(), gens.clone()));
            }
            closures.push((m, gens));
        }
        let mut i = 0;
        while i < list.len() {
            let (a, ag) = list[i].clone();
            i += 1;
            for (b, bg) in &closures {
                if b.is_subset(&a) {
                    continue;
                }
                let j = self.extend_closure(&a, &ag, bg);
                if found.insert(j.clone()) {
                    let mut jg = ag.clone();
                    jg.extend(bg);
                    list.push((j, jg));
                }
            }
        }
        list.sort_by(|a, b| (a.0.count(), &a.0).cmp(&(b.0.count(), &b.0)));
        Ok(list
            .into_iter()
            .map(|(m, g)| {
                let is_max = m.count() < n && self.is_maximal_set(&m, &g);
                self.record(m, g, is_max)
            })
            .collect())
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer(&self, set: &[usize]) -> Result<SubgroupRecord> {
        if set.iter().any(|&e| e >= self.order()) {
            return Err(Error::NotInGroup);
        }
        let members = Bitset::from_indices(
            self.order(),
            (0..self.order()).filter(|&g| set.iter().all(|&s| self.commutes(g, s))),
        );
        Ok(self.subgroup_from_members(members))
    }

    /// Membership bitset of the product `AB` of two subgroups (a subgroup
    /// whenever one of them is normal or they permute).
    pub fn product_set(&self, a: &Bitset, b: &Bitset) -> Bitset {
        let mut out = Bitset::new(self.order());
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }
}
