//! Invariable generation and the class-coverage table.
//!
//! Elements `g_1, .., g_d` invariably generate `G` exactly when no maximal
//! subgroup `M` has a conjugate meeting every class `g_i^G`. Since the union
//! of the conjugates of `M` is closed under conjugation, this only depends on
//! which conjugacy classes meet that union.

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::group::{Group, SubgroupRecord};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct ClassCoverageTable {
    pub group: String,
    pub order: usize,
    pub class_sizes: Vec<usize>,
    pub class_reps: Vec<usize>,
    /// One representative per conjugacy class of maximal subgroups.
    pub max_classes: Vec<SubgroupRecord>,
    /// `covers[c][m]`: class `c` meets the union of the conjugates of
    /// `max_classes[m]`.
    pub covers: Vec<Vec<bool>>,
    /// Per class, the set of maximal classes covering it.
    pub class_masks: Vec<Bitset>,
}

impl ClassCoverageTable {
    /// Builds the table from the subgroup lattice of `g`.
    pub fn new(g: &Group) -> Result<Self> {
        let lattice = g.subgroup_lattice()?;
        Ok(Self::from_maximal(g, g.maximal_subgroups_up_to_conjugacy(&lattice)))
    }

    /// Builds the table from known maximal-class representatives.
    pub fn from_maximal(g: &Group, max_classes: Vec<SubgroupRecord>) -> Self {
        let classes = g.conjugacy_classes();
        let r = max_classes.len();
        let covers: Vec<Vec<bool>> = classes
            .iter()
            .map(|c| {
                max_classes
                    .iter()
                    .map(|m| c.members.intersects(&m.members))
                    .collect()
            })
            .collect();
        let class_masks = covers
            .iter()
            .map(|row| Bitset::from_indices(r, (0..r).filter(|&m| row[m])))
            .collect();
        ClassCoverageTable {
            group: g.name().to_string(),
            order: g.order(),
            class_sizes: classes.iter().map(|c| c.size).collect(),
            class_reps: classes.iter().map(|c| c.representative).collect(),
            max_classes,
            covers,
            class_masks,
        }
    }

    /// Number of conjugacy classes of maximal subgroups.
    pub fn r(&self) -> usize {
        self.max_classes.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_weight(&self, c: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.class_sizes[c]),
            BigInt::from(self.order),
        )
    }

    /// Size of the union of the conjugates of maximal class `m`.
    pub fn covered_size(&self, m: usize) -> usize {
        (0..self.num_classes())
            .filter(|&c| self.covers[c][m])
            .map(|c| self.class_sizes[c])
            .sum()
    }

    /// Checks the structural invariants; returns every breach found.
    pub fn check_invariants(&self, g: &Group) -> std::result::Result<(), Vec<String>> {
        let mut breaches = Vec::new();
        if self.class_sizes.iter().sum::<usize>() != self.order {
            breaches.push("class sizes do not sum to |G|".to_string());
        }
        for m in 0..self.r() {
            if !self.covers.first().is_some_and(|row| row[m]) {
                breaches.push(format!("identity class does not cover maximal class {m}"));
            }
            let union = union_of_conjugates(g, &self.max_classes[m].members).count();
            let covered = self.covered_size(m);
            if covered != union {
                breaches.push(format!(
                    "maximal class {m}: covered class sizes sum to {covered}, union of conjugates has {union}"
                ));
            }
            if covered >= self.order {
                breaches.push(format!("maximal class {m}: conjugates cover the whole group"));
            }
        }
        if breaches.is_empty() {
            Ok(())
        } else {
            Err(breaches)
        }
    }

    /// CSV: one row per class, one 0/1 column per maximal class.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("class,representative,size");
        for m in 0..self.r() {
            s.push_str(&format!(",M{m}"));
        }
        s.push('\n');
        for c in 0..self.num_classes() {
            s.push_str(&format!(
                "{c},{},{}",
                self.class_reps[c], self.class_sizes[c]
            ));
            for m in 0..self.r() {
                s.push_str(if self.covers[c][m] { ",1" } else { ",0" });
            }
            s.push('\n');
        }
        s
    }

    /// Serializable form: generators of each maximal class representative.
    pub fn to_cached(&self, g: &Group) -> CachedTable {
        CachedTable {
            order: self.order,
            max_class_generators: self
                .max_classes
                .iter()
                .map(|m| m.generators.iter().map(|&e| g.element(e).one_based()).collect())
                .collect(),
        }
    }

    pub fn from_cached(g: &Group, cached: &CachedTable) -> Result<Self> {
        if cached.order != g.order() {
            return Err(Error::Descriptor("cached table belongs to another group".into()));
        }
        let maxes = cached
            .max_class_generators
            .iter()
            .map(|gens| {
                let idx = gens
                    .iter()
                    .map(|img| g.try_index(&crate::perm::Permutation::from_one_based(img)?))
                    .collect::<Result<Vec<_>>>()?;
                g.generated_subgroup(&idx)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_maximal(g, maxes))
    }

    /// Surviving maximal classes after drawing the given elements: those
    /// whose conjugates meet every drawn class.
    pub fn surviving(&self, g: &Group, gs: &[usize]) -> Result<Bitset> {
        let mut alive = Bitset::full(self.r());
        for &x in gs {
            if x >= g.order() {
                return Err(Error::NotInGroup);
            }
            alive.intersect_with(&self.class_masks[g.class_of(x)]);
        }
        Ok(alive)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CachedTable {
    pub order: usize,
    pub max_class_generators: Vec<Vec<Vec<usize>>>,
}

/// Coverage table of `g` (computes the subgroup lattice).
pub fn coverage_table(g: &Group) -> Result<ClassCoverageTable> {
    ClassCoverageTable::new(g)
}

/// Union of all conjugates of a subgroup.
pub fn union_of_conjugates(g: &Group, members: &Bitset) -> Bitset {
    let mut acc = Bitset::new(g.order());
    for c in g.conjugates_of(members) {
        acc.union_with(&c);
    }
    acc
}

/// Class-based invariable generation test.
pub fn invariably_generates(
    g: &Group,
    table: &ClassCoverageTable,
    gs: &[usize],
) -> Result<bool> {
    Ok(table.surviving(g, gs)?.is_empty())
}

/// Invariable generation straight from the definition: every choice of
/// conjugates generates `G`. The first element may be kept fixed, so this
/// runs through `prod_{i>=2} |g_i^G|` closures; refuses more than `budget`.
pub fn invariably_generates_exhaustive(g: &Group, gs: &[usize], budget: usize) -> Result<bool> {
    if gs.iter().any(|&x| x >= g.order()) {
        return Err(Error::NotInGroup);
    }
    if g.is_trivial() {
        return Ok(true);
    }
    let Some((&first, rest)) = gs.split_first() else {
        return Ok(false);
    };
    let choices: Vec<Vec<usize>> = rest
        .iter()
        .map(|&x| g.conjugacy_classes()[g.class_of(x)].members.iter().collect())
        .collect();
    let total = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    if total > budget {
        return Err(Error::CapExceeded {
            what: "exhaustive conjugate combinations",
            cap: budget,
        });
    }
    let mut pick = vec![0usize; choices.len()];
    let mut tuple = Vec::with_capacity(gs.len());
    loop {
        tuple.clear();
        tuple.push(first);
        tuple.extend(pick.iter().zip(&choices).map(|(&i, c)| c[i]));
        if !g.generates(&tuple) {
            return Ok(false);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == pick.len() {
                return Ok(true);
            }
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Proportion of elements with no fixed point on the cosets of `m`, i.e.
/// lying in no conjugate of `m`.
pub fn fpf_proportion(g: &Group, m: &SubgroupRecord) -> Result<BigRational> {
    if m.order == g.order() {
        return Err(Error::Precondition("subgroup must be proper".into()));
    }
    let covered = union_of_conjugates(g, &m.members).count();
    Ok(BigRational::one()
        - BigRational::new(BigInt::from(covered), BigInt::from(g.order())))
}

/// `1 - sum of class weights covered by m`, the same proportion read off
/// the coverage table.
pub fn fpf_from_table(table: &ClassCoverageTable, m: usize) -> BigRational {
    let mut s = BigRational::zero();
    for c in 0..table.num_classes() {
        if table.covers[c][m] {
            s += table.class_weight(c);
        }
    }
    BigRational::one() - s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{load_group, GroupDescriptor};
    use crate::perm::Permutation;

    fn family(json: &str) -> Group {
        let d: GroupDescriptor = serde_json::from_str(json).unwrap();
        load_group(&d).unwrap()
    }

    fn idx(g: &Group, cycles: &[&[usize]]) -> usize {
        g.index_of(&Permutation::from_cycles(g.degree(), cycles).unwrap())
            .unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn sym3_table() {
        let g = family(r#"{"family":"sym","n":3}"#);
        let t = coverage_table(&g).unwrap();
        t.check_invariants(&g).unwrap();
        let a3 = t.max_classes.iter().position(|m| m.order == 3).unwrap();
        let c2 = t.max_classes.iter().position(|m| m.order == 2).unwrap();
        let three = g.class_of(idx(&g, &[&[1, 2, 3]]));
        let two = g.class_of(idx(&g, &[&[1, 2]]));
        assert!(t.covers[three][a3]);
        assert!(!t.covers[two][a3]);
        assert!(t.covers[two][c2]);
        assert!(!t.covers[three][c2]);
    }

    #[test]
    fn cyclic_prime_only_identity_covered() {
        let g = family(r#"{"family":"cyclic","n":7}"#);
        let t = coverage_table(&g).unwrap();
        assert_eq!(t.r(), 1);
        assert!(t.covers[0][0]);
        assert!((1..t.num_classes()).all(|c| !t.covers[c][0]));
    }

    #[test]
    fn sym3_invariable_examples() {
        let g = family(r#"{"family":"sym","n":3}"#);
        let t = coverage_table(&g).unwrap();
        let (c, tr) = (idx(&g, &[&[1, 2, 3]]), idx(&g, &[&[1, 2]]));
        assert!(invariably_generates(&g, &t, &[c, tr]).unwrap());
        assert!(invariably_generates_exhaustive(&g, &[c, tr], 1000).unwrap());
        assert!(!invariably_generates(&g, &t, &[c]).unwrap());
        assert!(!invariably_generates(&g, &t, &[]).unwrap());
        assert!(!invariably_generates_exhaustive(&g, &[], 10).unwrap());
        assert!(matches!(
            invariably_generates(&g, &t, &[42]),
            Err(Error::NotInGroup)
        ));
    }

    #[test]
    fn fpf_examples() {
        let g = family(r#"{"family":"sym","n":3}"#);
        let t = coverage_table(&g).unwrap();
        for (m, rec) in t.max_classes.iter().enumerate() {
            let expected = if rec.order == 3 { rat(1, 2) } else { rat(1, 3) };
            assert_eq!(fpf_proportion(&g, rec).unwrap(), expected);
            assert_eq!(fpf_from_table(&t, m), expected);
        }
        assert!(fpf_proportion(&g, &g.whole()).is_err());
        let c5 = family(r#"{"family":"cyclic","n":5}"#);
        assert_eq!(fpf_proportion(&c5, &c5.trivial_subgroup()).unwrap(), rat(4, 5));
    }

    #[test]
    fn corrupted_table_is_reported() {
        let g = family(r#"{"family":"sym","n":4}"#);
        let mut t = coverage_table(&g).unwrap();
        t.check_invariants(&g).unwrap();
        t.covers[0][0] = false;
        t.covers[2][1] = !t.covers[2][1];
        let breaches = t.check_invariants(&g).unwrap_err();
        assert!(breaches.len() >= 2, "{breaches:?}");
    }

    #[test]
    fn csv_shape() {
        let g = family(r#"{"family":"sym","n":3}"#);
        let csv = coverage_table(&g).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "class,representative,size,M0,M1");
        assert!(lines[1].ends_with(",1,1"));
    }
}
