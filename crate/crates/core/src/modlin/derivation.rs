use super::action::ModuleAction;
use super::endo::EndField;
use super::gf::{vec_sub, GfMatrix, RowSpace};
use crate::error::{Error, Result};

/// `Der(H, V)` and `Ider(H, V)` for `V` a right `H`-module.
///
/// A derivation is stored by its values on the generators of `H`
/// (concatenated, one `dim`-block per generator); values on every element
/// are kept as well.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub p: u32,
    pub dim: usize,
    pub ngens: usize,
    /// Basis of `Der(H, V)` as generator-value vectors.
    pub basis: Vec<Vec<u32>>,
    /// `values[b][h]` = value of basis derivation `b` on element `h`.
    pub values: Vec<Vec<Vec<u32>>>,
    pub inner: RowSpace,
    pub dim_p_der: usize,
    pub dim_p_ider: usize,
    pub e: usize,
    /// `dim_F H^1(H, V)`.
    pub m: usize,
}

/// `[h, v] = v h - v`.
pub fn commutator(act: &ModuleAction, h: usize, v: &[u32]) -> Vec<u32> {
    vec_sub(&act.act(v, h), v, act.p)
}

/// Solves for all derivations `d(h1 h2) = d(h1)^h2 + d(h2)`.
///
/// The unknowns are the values on the generators. Walking the Cayley graph
/// from the identity expresses `d(x)` as a linear function of them; every
/// edge `x -> x s` that closes a cycle yields the equations
/// `d(x s) = d(x) M_s + d(s)`. These edge conditions for all `x` and all
/// generators `s` imply the identity on every pair of elements.
pub fn derivation_space(act: &ModuleAction, f: &EndField) -> Result<DerivationSpace> {
    let g = &act.group;
    let (p, dim) = (act.p, act.dim);
    let ngens = g.generators().len();
    let unknowns = ngens * dim;
    let n = g.order();
    // lin[x] is a dim x unknowns matrix L with d(x) = L u (u a column)
    let mut lin: Vec<Option<GfMatrix>> = vec![None; n];
    lin[0] = Some(GfMatrix::zeros(p, dim, unknowns));
    let mut eqs: Vec<Vec<u32>> = Vec::new();
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (si, (&s, m)) in g.generator_indices().iter().zip(&act.gen_images).enumerate() {
            let y = g.mul(x, s);
            let mut cand = m.transpose().mul(lin[x].as_ref().unwrap());
            for k in 0..dim {
                let c = si * dim + k;
                cand.set(k, c, cand.get(k, c) + 1);
            }
            match &lin[y] {
                Some(existing) => {
                    let diff = cand.sub(existing);
                    for r in 0..dim {
                        let row = diff.row(r);
                        if row.iter().any(|&x| x != 0) {
                            eqs.push(row.to_vec());
                        }
                    }
                }
                None => {
                    lin[y] = Some(cand);
                    queue.push(y);
                }
            }
        }
    }
    let basis = if eqs.is_empty() {
        (0..unknowns)
            .map(|k| (0..unknowns).map(|j| (j == k) as u32).collect())
            .collect()
    } else {
        GfMatrix::from_rows(p, &eqs)?.nullspace()
    };
    let lin: Vec<GfMatrix> = lin.into_iter().map(|l| l.unwrap()).collect();
    let values: Vec<Vec<Vec<u32>>> = basis
        .iter()
        .map(|u| lin.iter().map(|l| l.transpose().apply(u)).collect())
        .collect();
    let mut inner = RowSpace::new(p, unknowns);
    for i in 0..dim {
        let v: Vec<u32> = (0..dim).map(|j| (i == j) as u32).collect();
        let img: Vec<u32> = g
            .generator_indices()
            .iter()
            .flat_map(|&s| commutator(act, s, &v))
            .collect();
        inner.insert(&img);
    }
    let der = RowSpace::from_vectors(p, unknowns, basis.iter());
    if inner.basis().iter().any(|v| !der.contains(v)) {
        return Err(Error::Defect("inner derivation outside Der(H,V)".into()));
    }
    let (dim_p_der, dim_p_ider) = (basis.len(), inner.dim());
    let diff = dim_p_der - dim_p_ider;
    if diff % f.e != 0 {
        return Err(Error::Defect(format!(
            "dim H^1 over GF(p) = {diff} not divisible by e = {}",
            f.e
        )));
    }
    Ok(DerivationSpace {
        p,
        dim,
        ngens,
        basis,
        values,
        inner,
        dim_p_der,
        dim_p_ider,
        e: f.e,
        m: diff / f.e,
    })
}

impl DerivationSpace {
    /// Value at element `h` of the derivation with generator values `u`.
    pub fn evaluate_basis(&self, b: usize, h: usize) -> &[u32] {
        &self.values[b][h]
    }

    /// Checks `d(h1 h2) = d(h1)^h2 + d(h2)` on every pair for every basis
    /// derivation; returns the first failing triple.
    pub fn verify_cocycles(&self, act: &ModuleAction) -> std::result::Result<(), (usize, usize, usize)> {
        let g = &act.group;
        for (b, vals) in self.values.iter().enumerate() {
            for h1 in 0..g.order() {
                for h2 in 0..g.order() {
                    let lhs = &vals[g.mul(h1, h2)];
                    let rhs = super::gf::vec_add(&act.act(&vals[h1], h2), &vals[h2], act.p);
                    if *lhs != rhs {
                        return Err((b, h1, h2));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A subspace of `V` together with its dimension over `F`.
#[derive(Clone, Debug)]
pub struct FixedSpace {
    pub space: RowSpace,
    pub dim_p: usize,
    pub dim_f: usize,
}

/// `C_V(h)`: kernel of `v -> v M_h - v`.
pub fn fixed_space(act: &ModuleAction, f: &EndField, h: usize) -> Result<FixedSpace> {
    if h >= act.group.order() {
        return Err(Error::NotInGroup);
    }
    let m = act.matrix(h).sub(&GfMatrix::identity(act.p, act.dim));
    // v (M - I) = 0  <=>  (M - I)^T v^T = 0
    let ker = m.transpose().nullspace();
    let space = RowSpace::from_vectors(act.p, act.dim, ker.iter());
    let dim_p = space.dim();
    if !dim_p.is_multiple_of(f.e) {
        return Err(Error::Defect("fixed space is not F-invariant".into()));
    }
    Ok(FixedSpace {
        space,
        dim_p,
        dim_f: dim_p / f.e,
    })
}

/// `[h, V]`: image of `v -> v M_h - v`.
pub fn commutator_space(act: &ModuleAction, h: usize) -> RowSpace {
    let m = act.matrix(h).sub(&GfMatrix::identity(act.p, act.dim));
    RowSpace::from_vectors(act.p, act.dim, m.to_rows().iter())
}
