use super::{Caps, Group, SubgroupRecord};
use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A quotient `G/N` realised as a permutation group, with the projection.
#[derive(Debug)]
pub struct Quotient {
    pub group: Group,
    /// Element index of `G` to element index of the quotient.
    pub projection: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, a: usize) -> usize {
        self.projection[a]
    }
}

impl Group {
    /// `G/N` acting on the right cosets of `N` (the regular action of `G/N`).
    pub fn quotient(&self, n: &SubgroupRecord) -> Result<Quotient> {
        self.quotient_by(&n.members, None)
    }

    /// `G/N` acting on the cosets of the largest subgroup `K >= N` from
    /// `lattice` whose core is exactly `N`; falls back to `K = N`.
    pub fn quotient_with_lattice(
        &self,
        n: &SubgroupRecord,
        lattice: &[SubgroupRecord],
    ) -> Result<Quotient> {
        self.quotient_by(&n.members, Some(lattice))
    }

    pub(crate) fn quotient_by(
        &self,
        n: &Bitset,
        lattice: Option<&[SubgroupRecord]>,
    ) -> Result<Quotient> {
        if !n.contains(0) || !self.is_normal_set(n) {
            return Err(Error::NotNormal);
        }
        let mut stab = n.clone();
        if let Some(lat) = lattice {
            if let Some(k) = lat
                .iter()
                .rev()
                .filter(|k| n.is_subset(&k.members))
                .find(|k| &self.core(&k.members) == n)
            {
                stab = k.members.clone();
            }
        }
        let order = self.order();
        let mut coset_of = vec![usize::MAX; order];
        let mut reps = Vec::new();
        for g in 0..order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            for k in stab.iter() {
                coset_of[self.mul(k, g)] = id;
            }
            reps.push(g);
        }
        let act = |x: usize| -> Result<Permutation> {
            Permutation::from_images(reps.iter().map(|&r| coset_of[self.mul(r, x)]).collect())
        };
        let degree = reps.len();
        let gens = self
            .generator_indices()
            .iter()
            .map(|&s| act(s))
            .collect::<Result<Vec<_>>>()?;
        let name = format!("{}/N{}", self.name(), n.count());
        let group = Group::generate(name, degree, gens, Caps::internal().max_order_at_least(order))?;
        let projection = (0..order)
            .map(|a| group.try_index(&act(a)?))
            .collect::<Result<Vec<_>>>()?;
        if group.order() * n.count() != order {
            return Err(Error::Defect(format!(
                "quotient order {} times |N| = {} differs from |G| = {order}",
                group.order(),
                n.count()
            )));
        }
        Ok(Quotient { group, projection })
    }
}

impl Caps {
    pub(crate) fn max_order_at_least(mut self, order: usize) -> Caps {
        self.max_order = self.max_order.max(order);
        self
    }
}

#[cfg(test)]
mod tests {
    use crate::group::{load_group, Group, GroupDescriptor};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn family(json: &str) -> Group {
        let d: GroupDescriptor = serde_json::from_str(json).unwrap();
        load_group(&d).unwrap()
    }

    #[test]
    fn small_quotients() {
        let s3 = family(r#"{"family":"sym","n":3}"#);
        let normals = s3.normal_subgroups().unwrap();
        let a3 = normals.iter().find(|s| s.order == 3).unwrap();
        assert_eq!(s3.quotient(a3).unwrap().group.order(), 2);
        assert_eq!(s3.quotient(&s3.whole()).unwrap().group.order(), 1);
        let lat = s3.subgroup_lattice().unwrap();
        let two = lat.iter().find(|s| s.order == 2).unwrap();
        assert!(s3.quotient(two).is_err());
    }

    #[test]
    fn d4_mod_center_is_klein() {
        let d4 = family(r#"{"family":"dihedral","n":4}"#);
        let z = d4
            .normal_subgroups()
            .unwrap()
            .into_iter()
            .find(|s| s.order == 2)
            .unwrap();
        let q = d4.quotient(&z).unwrap();
        assert_eq!(q.group.order(), 4);
        assert!((0..4).all(|a| q.group.mul(a, a) == 0));
    }

    #[test]
    fn projection_is_homomorphism() {
        let g = family(r#"{"family":"sym","n":4}"#);
        let lat = g.subgroup_lattice().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in g.normal_subgroups().unwrap() {
            for q in [g.quotient(&n).unwrap(), g.quotient_with_lattice(&n, &lat).unwrap()] {
                assert_eq!(q.group.order() * n.order, g.order());
                for _ in 0..1000 {
                    let (a, b) = (rng.gen_range(0..24), rng.gen_range(0..24));
                    assert_eq!(q.project(g.mul(a, b)), q.group.mul(q.project(a), q.project(b)));
                }
            }
        }
        // faithful small-degree realisation of S4/V4 = S3 on 3 points
        let v4 = g.normal_subgroups().unwrap().into_iter().find(|s| s.order == 4).unwrap();
        assert_eq!(g.quotient_with_lattice(&v4, &lat).unwrap().group.degree(), 3);
    }
}
