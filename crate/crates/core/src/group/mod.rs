//! Permutation groups enumerated in full.
//!
//! A [`Group`] stores every element, sorted lexicographically by image
//! sequence, so that element indices are stable across runs and subgroups can
//! be represented as bitsets over those indices.

mod classes;
mod descriptor;
mod field;
mod lattice;
mod quotient;

pub use classes::ConjClass;
pub use descriptor::{canonical_json, load_group, load_group_with_caps, Family, GroupDescriptor};
pub use field::{is_prime, prime_power, SmallField};
pub use lattice::SubgroupRecord;
pub use quotient::Quotient;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use std::collections::HashMap;

/// Size limits for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_order: usize,
    pub max_degree: usize,
    pub lattice_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order: 100_000,
            max_degree: 64,
            lattice_order: 2_000,
        }
    }
}

impl Caps {
    /// Caps for groups built internally (quotients, semidirect products),
    /// whose natural permutation domains exceed the descriptor degree cap.
    pub fn internal() -> Self {
        Caps {
            max_degree: 4_096,
            ..Caps::default()
        }
    }
}

/// Groups of at most this order keep a full multiplication table.
const TABLE_ORDER: usize = 2_048;

pub struct Group {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    gen_idx: Vec<usize>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    inverse: Vec<u32>,
    table: Option<Vec<u32>>,
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
    caps: Caps,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl Group {
    /// Enumerates the group generated by `generators` on `degree` points.
    pub fn generate(
        name: impl Into<String>,
        degree: usize,
        generators: Vec<Permutation>,
        caps: Caps,
    ) -> Result<Group> {
        if degree == 0 {
            return Err(Error::Descriptor("degree must be positive".into()));
        }
        if degree > caps.max_degree {
            return Err(Error::CapExceeded {
                what: "degree",
                cap: caps.max_degree,
            });
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::MalformedPermutation(format!(
                "generator {g:?} has degree {} but the group has degree {degree}",
                g.degree()
            )));
        }
        let id = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in &generators {
                let y = x.compose(g);
                if !seen.contains_key(&y) {
                    if queue.len() >= caps.max_order {
                        return Err(Error::CapExceeded {
                            what: "group order",
                            cap: caps.max_order,
                        });
                    }
                    seen.insert(y.clone(), ());
                    queue.push(y);
                }
            }
        }
        drop(seen);
        let mut elements = queue;
        elements.sort();
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let inverse = elements.iter().map(|p| index[&p.inverse()]).collect();
        let gen_idx = generators.iter().map(|g| index[g] as usize).collect();
        let n = elements.len();
        let table = (n <= TABLE_ORDER).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose(b)]);
                }
            }
            t
        });
        let mut g = Group {
            name: name.into(),
            degree,
            generators,
            gen_idx,
            elements,
            index,
            inverse,
            table,
            classes: Vec::new(),
            class_of: Vec::new(),
            caps,
        };
        let (classes, class_of) = classes::compute(&g);
        g.classes = classes;
        g.class_of = class_of;
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Element indices of the generators, in generator order.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_idx
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn try_index(&self, p: &Permutation) -> Result<usize> {
        self.index_of(p).ok_or(Error::NotInGroup)
    }

    /// The identity is lexicographically least, so it always has index 0.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `a^x = x^-1 a x`.
    #[inline]
    pub fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), a), x)
    }

    /// `a^k`.
    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gen_idx;
        g.iter()
            .all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a] as usize
    }

    /// Closure of the given elements as a bitset of element indices.
    pub fn closure(&self, gens: &[usize]) -> Bitset {
        self.extend_closure(&Bitset::from_indices(self.order(), [0]), &[], gens)
    }

    /// Smallest subgroup containing the subgroup `base` (generated by
    /// `base_gens`) and the elements `extra`.
    ///
    /// The result is built as a union of right cosets of `base`; only coset
    /// representatives are multiplied by generators.
    pub fn extend_closure(&self, base: &Bitset, base_gens: &[usize], extra: &[usize]) -> Bitset {
        let mut members = base.clone();
        if extra.iter().all(|&e| members.contains(e)) {
            return members;
        }
        let base_list: Vec<usize> = base.iter().collect();
        let gens: Vec<usize> = base_gens.iter().chain(extra).copied().collect();
        let mut reps = vec![0usize];
        let mut head = 0;
        while head < reps.len() {
            let t = reps[head];
            head += 1;
            for &g in &gens {
                let y = self.mul(t, g);
                if members.contains(y) {
                    continue;
                }
                for &b in &base_list {
                    members.insert(self.mul(b, y));
                }
                reps.push(y);
            }
        }
        members
    }

    /// Order of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[usize]) -> usize {
        self.closure(gens).count()
    }

    pub fn generates(&self, gens: &[usize]) -> bool {
        self.generated_order(gens) == self.order()
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Canonical description: sorted 1-based generator image lists.
    pub fn canonical_generators(&self) -> Vec<Vec<usize>> {
        let mut g: Vec<Vec<usize>> = self.generators.iter().map(|p| p.one_based()).collect();
        g.sort();
        g.dedup();
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn perm(deg: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(deg, cycles).unwrap()
    }

    #[test]
    fn sym3_order() {
        let g = Group::generate(
            "S3",
            3,
            vec![perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])],
            Caps::default(),
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.element(0).is_identity());
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn cap_exceeded_names_cap() {
        let caps = Caps {
            max_order: 10,
            ..Caps::default()
        };
        let err = Group::generate(
            "S4",
            4,
            vec![perm(4, &[&[1, 2]]), perm(4, &[&[1, 2, 3, 4]])],
            caps,
        )
        .unwrap_err();
        assert!(err.to_string().contains("cap 10"), "{err}");
    }

    #[test]
    fn extend_closure_matches_plain_closure() {
        let g = Group::generate(
            "S4",
            4,
            vec![perm(4, &[&[1, 2]]), perm(4, &[&[1, 2, 3, 4]])],
            Caps::default(),
        )
        .unwrap();
        let a = g.index_of(&perm(4, &[&[1, 2, 3]])).unwrap();
        let b = g.index_of(&perm(4, &[&[1, 2], &[3, 4]])).unwrap();
        let base = g.closure(&[a]);
        assert_eq!(g.extend_closure(&base, &[a], &[b]), g.closure(&[a, b]));
        assert_eq!(g.closure(&[a, b]).count(), 12);
    }
}
