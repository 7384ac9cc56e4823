use super::field::{is_prime, SmallField};
use super::{Caps, Group};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sym,
    Alt,
    Cyclic,
    Dihedral,
    Elemab,
    Agl1,
}

/// JSON group descriptor. Permutation images are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDescriptor {
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Family {
        family: Family,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
    },
}

impl GroupDescriptor {
    pub fn family(family: Family, param: usize) -> Self {
        let (mut n, mut q) = (None, None);
        match family {
            Family::Agl1 => q = Some(param),
            _ => n = Some(param),
        }
        GroupDescriptor::Family {
            family,
            n,
            q,
            p: None,
            k: None,
        }
    }

    pub fn elemab(p: usize, k: usize) -> Self {
        GroupDescriptor::Family {
            family: Family::Elemab,
            n: None,
            q: None,
            p: Some(p),
            k: Some(k),
        }
    }

    pub fn display_name(&self) -> String {
        match self {
            GroupDescriptor::Explicit { name, degree, .. } => {
                name.clone().unwrap_or_else(|| format!("perm{degree}"))
            }
            GroupDescriptor::Family { family, n, q, p, k } => match family {
                Family::Sym => format!("Sym({})", n.unwrap_or(0)),
                Family::Alt => format!("Alt({})", n.unwrap_or(0)),
                Family::Cyclic => format!("C_{}", n.unwrap_or(0)),
                Family::Dihedral => format!("D_{}", n.unwrap_or(0)),
                Family::Elemab => format!("C_{}^{}", p.unwrap_or(0), k.unwrap_or(0)),
                Family::Agl1 => format!("AGL(1,{})", q.unwrap_or(0)),
            },
        }
    }
}

fn need(v: Option<usize>, key: &str) -> Result<usize> {
    v.ok_or_else(|| Error::Descriptor(format!("missing parameter \"{key}\"")))
}

fn cycle(deg: usize, pts: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let pts: Vec<usize> = pts.into_iter().collect();
    let mut img: Vec<usize> = (0..deg).collect();
    for (i, &a) in pts.iter().enumerate() {
        img[a] = pts[(i + 1) % pts.len()];
    }
    img
}

fn family_generators(
    family: Family,
    n: Option<usize>,
    q: Option<usize>,
    p: Option<usize>,
    k: Option<usize>,
) -> Result<(usize, Vec<Vec<usize>>)> {
    Ok(match family {
        Family::Sym => {
            let n = need(n, "n")?.max(1);
            if n == 1 {
                (1, vec![])
            } else {
                (n, vec![cycle(n, [0, 1]), cycle(n, 0..n)])
            }
        }
        Family::Alt => {
            let n = need(n, "n")?.max(1);
            (n, (2..n).map(|i| cycle(n, [0, 1, i])).collect())
        }
        Family::Cyclic => {
            let n = need(n, "n")?;
            if n == 0 {
                return Err(Error::Descriptor("cyclic group needs n >= 1".into()));
            }
            (n, if n == 1 { vec![] } else { vec![cycle(n, 0..n)] })
        }
        Family::Dihedral => match need(n, "n")? {
            0 => return Err(Error::Descriptor("dihedral group needs n >= 1".into())),
            1 => (2, vec![cycle(2, [0, 1])]),
            2 => (4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
            n => {
                let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
                (n, vec![cycle(n, 0..n), refl])
            }
        },
        Family::Elemab => {
            let (p, k) = (need(p, "p")?, need(k, "k")?);
            if !is_prime(p) {
                return Err(Error::Descriptor(format!("elemab needs a prime p, got {p}")));
            }
            let deg = (p * k).max(1);
            (
                deg,
                (0..k).map(|i| cycle(deg, i * p..(i + 1) * p)).collect(),
            )
        }
        Family::Agl1 => {
            let q = need(q, "q")?;
            let f = SmallField::new(q)?;
            let mut gens: Vec<Vec<usize>> = (0..f.k)
                .map(|i| (0..q).map(|x| f.add(x, f.basis_element(i))).collect())
                .collect();
            if q > 2 {
                let w = f.primitive_element();
                gens.push((0..q).map(|x| f.mul(w, x)).collect());
            }
            (q, gens)
        }
    })
}

/// Enumerates the group named by a descriptor under the default caps.
pub fn load_group(desc: &GroupDescriptor) -> Result<Group> {
    load_group_with_caps(desc, Caps::default())
}

pub fn load_group_with_caps(desc: &GroupDescriptor, caps: Caps) -> Result<Group> {
    let name = desc.display_name();
    let (degree, gens) = match desc {
        GroupDescriptor::Explicit {
            degree, generators, ..
        } => {
            let gens = generators
                .iter()
                .map(|g| {
                    if g.len() != *degree {
                        return Err(Error::MalformedPermutation(format!(
                            "generator has {} images, expected {degree}",
                            g.len()
                        )));
                    }
                    Permutation::from_one_based(g)
                })
                .collect::<Result<Vec<_>>>()?;
            return Group::generate(name, *degree, gens, caps);
        }
        GroupDescriptor::Family { family, n, q, p, k } => {
            family_generators(*family, *n, *q, *p, *k)?
        }
    };
    if degree > caps.max_degree {
        return Err(Error::CapExceeded {
            what: "degree",
            cap: caps.max_degree,
        });
    }
    let gens = gens
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    Group::generate(name, degree, gens, caps)
}

/// Canonical serialization of a group: name, degree and the sorted list of
/// 1-based generator images.
pub fn canonical_json(g: &Group) -> String {
    serde_json::json!({
        "name": g.name(),
        "degree": g.degree(),
        "generators": g.canonical_generators(),
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(json: &str) -> usize {
        let d: GroupDescriptor = serde_json::from_str(json).unwrap();
        load_group(&d).unwrap().order()
    }

    #[test]
    fn descriptor_orders() {
        assert_eq!(
            order(r#"{"name":"S3","degree":3,"generators":[[2,1,3],[2,3,1]]}"#),
            6
        );
        assert_eq!(order(r#"{"degree":5,"generators":[[2,3,4,5,1]]}"#), 5);
        assert_eq!(order(r#"{"family":"agl1","q":5}"#), 20);
        assert_eq!(order(r#"{"family":"agl1","q":8}"#), 56);
        assert_eq!(order(r#"{"family":"agl1","q":9}"#), 72);
        assert_eq!(order(r#"{"family":"agl1","q":2}"#), 2);
        assert_eq!(order(r#"{"family":"sym","n":5}"#), 120);
        assert_eq!(order(r#"{"family":"alt","n":6}"#), 360);
        assert_eq!(order(r#"{"family":"alt","n":2}"#), 1);
        assert_eq!(order(r#"{"family":"dihedral","n":4}"#), 8);
        assert_eq!(order(r#"{"family":"dihedral","n":2}"#), 4);
        assert_eq!(order(r#"{"family":"elemab","p":3,"k":2}"#), 9);
        assert_eq!(order(r#"{"family":"cyclic","n":1}"#), 1);
    }

    #[test]
    fn malformed_and_capped() {
        let d: GroupDescriptor =
            serde_json::from_str(r#"{"degree":3,"generators":[[1,1,2]]}"#).unwrap();
        assert!(matches!(load_group(&d), Err(Error::MalformedPermutation(_))));
        let d = GroupDescriptor::family(Family::Sym, 9);
        match load_group(&d) {
            Err(Error::CapExceeded { cap, .. }) => assert_eq!(cap, 100_000),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_indexing() {
        let d = GroupDescriptor::family(Family::Sym, 4);
        let (a, b) = (load_group(&d).unwrap(), load_group(&d).unwrap());
        assert_eq!(a.elements(), b.elements());
        let ca: Vec<_> = a.conjugacy_classes().iter().map(|c| c.representative).collect();
        let cb: Vec<_> = b.conjugacy_classes().iter().map(|c| c.representative).collect();
        assert_eq!(ca, cb);
        assert_eq!(canonical_json(&a), canonical_json(&b));
    }
}
