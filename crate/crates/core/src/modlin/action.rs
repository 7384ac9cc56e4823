use super::gf::{is_zero, GfMatrix, RowSpace};
use crate::error::{Error, Result};
use crate::group::{is_prime, load_group_with_caps, Caps, Group, GroupDescriptor};
use crate::perm::Permutation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// JSON descriptor: matrices in generator order, row-major, acting on row
/// vectors from the right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    pub group: GroupDescriptor,
    pub p: u32,
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<u32>>>,
}

/// How irreducibility was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// Every nonzero vector was spun up to the whole space.
    Exhaustive,
    /// Only random vectors were spun.
    Randomized,
}

/// A representation of a permutation group `H` on `V = GF(p)^dim`.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    pub group: Arc<Group>,
    pub p: u32,
    pub dim: usize,
    pub gen_images: Vec<GfMatrix>,
    element_images: Vec<GfMatrix>,
    pub faithful: bool,
    pub irreducible: bool,
    pub certificate: Certificate,
}

/// Vector spaces up to this many vectors get an exhaustive irreducibility check.
const EXHAUSTIVE_VECTORS: usize = 1 << 16;

impl ModuleAction {
    pub fn new(group: Arc<Group>, p: u32, dim: usize, gen_images: Vec<GfMatrix>) -> Result<Self> {
        if !is_prime(p as usize) {
            return Err(Error::Action(format!("{p} is not prime")));
        }
        if gen_images.len() != group.generators().len() {
            return Err(Error::Action(format!(
                "{} matrices for {} generators",
                gen_images.len(),
                group.generators().len()
            )));
        }
        if dim == 0 {
            return Err(Error::Action("dimension must be positive".into()));
        }
        for m in &gen_images {
            if m.p != p || m.rows != dim || m.cols != dim {
                return Err(Error::Action("matrix shape or field mismatch".into()));
            }
            if !m.is_invertible() {
                return Err(Error::Action("generator matrix is singular".into()));
            }
        }
        let element_images = extend_to_elements(&group, p, dim, &gen_images)?;
        let faithful = element_images
            .iter()
            .enumerate()
            .all(|(i, m)| i == 0 || !m.is_identity());
        let mut act = ModuleAction {
            group,
            p,
            dim,
            gen_images,
            element_images,
            faithful,
            irreducible: false,
            certificate: Certificate::Exhaustive,
        };
        let (irr, cert) = act.check_irreducible();
        act.irreducible = irr;
        act.certificate = cert;
        Ok(act)
    }

    pub fn from_descriptor(d: &ModuleDescriptor) -> Result<Self> {
        let g = load_group_with_caps(&d.group, Caps::internal())?;
        let mats = d
            .matrices
            .iter()
            .map(|rows| {
                let m = GfMatrix::from_rows(d.p, rows)?;
                if m.rows != d.dim || m.cols != d.dim {
                    return Err(Error::DimensionMismatch {
                        expected: d.dim,
                        got: m.rows,
                    });
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(Arc::new(g), d.p, d.dim, mats)
    }

    /// The matrix group generated by `mats`, realised as a permutation group
    /// on the vectors of `GF(p)^dim`, with its natural action.
    pub fn from_matrices(name: &str, p: u32, mats: Vec<GfMatrix>) -> Result<Self> {
        let dim = mats
            .first()
            .map(|m| m.rows)
            .ok_or_else(|| Error::Action("no matrices".into()))?;
        let size = (p as usize).checked_pow(dim as u32).unwrap_or(usize::MAX);
        let caps = Caps::internal();
        if size > caps.max_degree {
            return Err(Error::CapExceeded {
                what: "vector space size",
                cap: caps.max_degree,
            });
        }
        let vectors: Vec<Vec<u32>> = (0..size).map(|i| index_to_vector(i, p, dim)).collect();
        let gens = mats
            .iter()
            .map(|m| {
                Permutation::from_images(
                    vectors
                        .iter()
                        .map(|v| vector_to_index(&m.apply(v), p))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let g = Group::generate(name, size, gens, caps)?;
        Self::new(Arc::new(g), p, dim, mats)
    }

    pub fn to_descriptor(&self, group: GroupDescriptor) -> ModuleDescriptor {
        ModuleDescriptor {
            group,
            p: self.p,
            dim: self.dim,
            matrices: self.gen_images.iter().map(|m| m.to_rows()).collect(),
        }
    }

    /// Matrix of an arbitrary element of `H`.
    pub fn matrix(&self, h: usize) -> &GfMatrix {
        &self.element_images[h]
    }

    pub fn size(&self) -> usize {
        (self.p as usize).pow(self.dim as u32)
    }

    pub fn act(&self, v: &[u32], h: usize) -> Vec<u32> {
        self.element_images[h].apply(v)
    }

    /// Submodule generated by `v` (spinning under the generators).
    pub fn spin(&self, v: &[u32]) -> RowSpace {
        let mut space = RowSpace::new(self.p, self.dim);
        if !space.insert(v) {
            return space;
        }
        let mut queue = vec![v.to_vec()];
        while let Some(w) = queue.pop() {
            for m in &self.gen_images {
                let img = m.apply(&w);
                if space.insert(&img) {
                    queue.push(img);
                }
            }
        }
        space
    }

    fn check_irreducible(&self) -> (bool, Certificate) {
        let size = (self.p as usize).checked_pow(self.dim as u32);
        match size {
            Some(size) if size <= EXHAUSTIVE_VECTORS => {
                // every proper submodule contains a cyclic one
                let irr = (1..size).all(|i| {
                    let v = index_to_vector(i, self.p, self.dim);
                    // one vector per line suffices: skip non-normalised vectors
                    let lead = v.iter().rev().find(|&&x| x != 0).copied().unwrap_or(0);
                    lead != 1 || self.spin(&v).dim() == self.dim
                });
                (irr, Certificate::Exhaustive)
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let irr = (0..64).all(|_| {
                    let v: Vec<u32> = (0..self.dim).map(|_| rng.gen_range(0..self.p)).collect();
                    is_zero(&v) || self.spin(&v).dim() == self.dim
                });
                (irr, Certificate::Randomized)
            }
        }
    }
}

/// Base-p digits, least significant first.
pub fn index_to_vector(mut i: usize, p: u32, dim: usize) -> Vec<u32> {
    (0..dim)
        .map(|_| {
            let d = (i % p as usize) as u32;
            i /= p as usize;
            d
        })
        .collect()
}

pub fn vector_to_index(v: &[u32], p: u32) -> usize {
    v.iter().rev().fold(0, |acc, &d| acc * p as usize + d as usize)
}

/// Extends generator matrices to every element by walking the Cayley graph
/// and checks that every (element, generator) product is respected, which
/// makes the extension a homomorphism.
fn extend_to_elements(
    g: &Group,
    p: u32,
    dim: usize,
    gens: &[GfMatrix],
) -> Result<Vec<GfMatrix>> {
    let n = g.order();
    let mut imgs: Vec<Option<GfMatrix>> = vec![None; n];
    imgs[0] = Some(GfMatrix::identity(p, dim));
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (s, m) in g.generator_indices().iter().zip(gens) {
            let y = g.mul(x, *s);
            let cand = imgs[x].as_ref().unwrap().mul(m);
            match &imgs[y] {
                Some(existing) if *existing != cand => {
                    return Err(Error::Action(
                        "generator matrices do not define a homomorphism".into(),
                    ))
                }
                Some(_) => {}
                None => {
                    imgs[y] = Some(cand);
                    queue.push(y);
                }
            }
        }
    }
    Ok(imgs.into_iter().map(|m| m.unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_neg_gf3() -> ModuleDescriptor {
        serde_json::from_value(serde_json::json!({
            "group": {"family": "cyclic", "n": 2},
            "p": 3, "dim": 1, "matrices": [[[2]]]
        }))
        .unwrap()
    }

    #[test]
    fn descriptor_round() {
        let act = ModuleAction::from_descriptor(&c2_neg_gf3()).unwrap();
        assert!(act.faithful && act.irreducible);
        assert_eq!(act.certificate, Certificate::Exhaustive);
    }

    #[test]
    fn rejects_non_homomorphism() {
        // C_3 generator sent to an involution
        let d: ModuleDescriptor = serde_json::from_value(serde_json::json!({
            "group": {"family": "cyclic", "n": 3},
            "p": 2, "dim": 2, "matrices": [[[0,1],[1,0]]]
        }))
        .unwrap();
        assert!(matches!(ModuleAction::from_descriptor(&d), Err(Error::Action(_))));
    }

    #[test]
    fn reducible_detected() {
        // C_2 swapping coordinates of GF(2)^2 fixes (1,1)
        let d: ModuleDescriptor = serde_json::from_value(serde_json::json!({
            "group": {"family": "cyclic", "n": 2},
            "p": 2, "dim": 2, "matrices": [[[0,1],[1,0]]]
        }))
        .unwrap();
        let act = ModuleAction::from_descriptor(&d).unwrap();
        assert!(!act.irreducible);
    }

    #[test]
    fn matrix_group_realisation() {
        let a = GfMatrix::from_rows(2, &[vec![0, 1], vec![1, 1]]).unwrap();
        let b = GfMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let act = ModuleAction::from_matrices("GL(2,2)", 2, vec![a, b]).unwrap();
        assert_eq!(act.group.order(), 6);
        assert!(act.faithful && act.irreducible);
    }
}
