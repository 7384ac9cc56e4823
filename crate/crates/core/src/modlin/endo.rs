use super::action::ModuleAction;
use super::gf::{GfMatrix, RowSpace};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The centralizer algebra `F = End_H(V)` of an irreducible action; a finite
/// field of order `q = p^e` acting on `V` from the right.
#[derive(Clone, Debug)]
pub struct EndField {
    pub p: u32,
    pub basis: Vec<GfMatrix>,
    pub e: usize,
    pub q: usize,
    /// `dim_F V`.
    pub n: usize,
}

/// Algebras up to this size are checked element by element.
const EXHAUSTIVE_FIELD: usize = 1 << 12;

impl EndField {
    /// Scalars only: GF(p) acting on an ambient space of dimension `dim`.
    pub fn prime(p: u32, dim: usize) -> Self {
        EndField {
            p,
            basis: vec![GfMatrix::identity(p, dim)],
            e: 1,
            q: p as usize,
            n: dim,
        }
    }

    /// `lambda(c) = sum c_i basis_i`.
    pub fn element(&self, coeffs: &[u32]) -> GfMatrix {
        let dim = self.basis[0].rows;
        let mut m = GfMatrix::zeros(self.p, dim, dim);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                m = m.add(&b.scale(c));
            }
        }
        m
    }

    fn coords(&self, m: &GfMatrix) -> Option<Vec<u32>> {
        // solve m = sum c_i basis_i by flattening
        let flat = |x: &GfMatrix| x.to_rows().concat();
        let len = m.rows * m.cols;
        let mut sys: Vec<Vec<u32>> = (0..len)
            .map(|k| {
                let mut row: Vec<u32> = self.basis.iter().map(|b| flat(b)[k]).collect();
                row.push((self.p - flat(m)[k]) % self.p);
                row
            })
            .collect();
        sys.retain(|r| r.iter().any(|&x| x != 0));
        let ns = GfMatrix::from_rows(self.p, &sys)
            .map(|s| s.nullspace())
            .unwrap_or_else(|_| vec![]);
        let e = self.e;
        ns.into_iter().find(|x| x[e] == 1).map(|x| x[..e].to_vec())
    }
}

/// Computes `End_H(V)` by solving `X M_g = M_g X` for all generators, then
/// verifies that the solution algebra is a field.
pub fn end_algebra(act: &ModuleAction) -> Result<EndField> {
    if !act.irreducible {
        return Err(Error::Reducible);
    }
    let (p, d) = (act.p, act.dim);
    let unknowns = d * d;
    let mut eqs: Vec<Vec<u32>> = Vec::new();
    for m in &act.gen_images {
        // (X M - M X)[i][j] = sum_k X[i][k] M[k][j] - M[i][k] X[k][j]
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![0u32; unknowns];
                for k in 0..d {
                    let xik = i * d + k;
                    row[xik] = (row[xik] + m.get(k, j)) % p;
                    let xkj = k * d + j;
                    row[xkj] = (row[xkj] + p - m.get(i, k)) % p;
                }
                if row.iter().any(|&x| x != 0) {
                    eqs.push(row);
                }
            }
        }
    }
    let solutions = if eqs.is_empty() {
        (0..unknowns)
            .map(|k| (0..unknowns).map(|j| (j == k) as u32).collect())
            .collect()
    } else {
        GfMatrix::from_rows(p, &eqs)?.nullspace()
    };
    let basis: Vec<GfMatrix> = solutions
        .iter()
        .map(|x| GfMatrix::from_rows(p, &x.chunks(d).map(|c| c.to_vec()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let e = basis.len();
    let q = (p as usize).pow(e as u32);
    if d % e != 0 {
        return Err(Error::Defect(format!(
            "dim {d} not divisible by centralizer dimension {e}"
        )));
    }
    let field = EndField {
        p,
        basis,
        e,
        q,
        n: d / e,
    };
    verify_field(&field, act)?;
    Ok(field)
}

fn verify_field(f: &EndField, act: &ModuleAction) -> Result<()> {
    for b in &f.basis {
        for m in &act.gen_images {
            if b.mul(m) != m.mul(b) {
                return Err(Error::Defect("centralizer element fails to commute".into()));
            }
        }
    }
    for a in &f.basis {
        for b in &f.basis {
            if f.coords(&a.mul(b)).is_none() {
                return Err(Error::Reducible);
            }
            if a.mul(b) != b.mul(a) {
                return Err(Error::Reducible);
            }
        }
    }
    let check = |c: &[u32]| {
        c.iter().all(|&x| x == 0) || f.element(c).is_invertible()
    };
    if f.q <= EXHAUSTIVE_FIELD {
        for i in 1..f.q {
            let c = super::action::index_to_vector(i, f.p, f.e);
            if !check(&c) {
                return Err(Error::Reducible);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d);
        for _ in 0..256 {
            let c: Vec<u32> = (0..f.e).map(|_| rng.gen_range(0..f.p)).collect();
            if !check(&c) {
                return Err(Error::Reducible);
            }
        }
    }
    Ok(())
}

/// GF(p)-span of `{ v * lambda : lambda in F-basis, v in vectors }`, where
/// `F` acts blockwise on an ambient space made of `ambient / dim` copies of
/// `V`.
pub fn f_span(vectors: &[Vec<u32>], ambient: usize, f: &EndField) -> Result<RowSpace> {
    let dim = f.basis[0].rows;
    if !ambient.is_multiple_of(dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: ambient,
        });
    }
    let mut space = RowSpace::new(f.p, ambient);
    for v in vectors {
        if v.len() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: v.len(),
            });
        }
        for lam in &f.basis {
            space.insert(&apply_blockwise(v, lam));
        }
    }
    Ok(space)
}

pub fn apply_blockwise(v: &[u32], m: &GfMatrix) -> Vec<u32> {
    v.chunks(m.rows).flat_map(|blk| m.apply(blk)).collect()
}

/// `dim_F` of the F-span of `vectors`.
pub fn f_span_dim(vectors: &[Vec<u32>], ambient: usize, f: &EndField) -> Result<usize> {
    let s = f_span(vectors, ambient, f)?;
    Ok(s.dim() / f.e)
}

/// Whether `vectors` are F-linearly independent modulo the F-invariant
/// subspace `sub`.
pub fn f_independent_mod(vectors: &[Vec<u32>], sub: &RowSpace, f: &EndField) -> Result<bool> {
    let mut s = sub.clone();
    let before = s.dim();
    s.extend_from(&f_span(vectors, sub.ambient, f)?);
    Ok(s.dim() - before == vectors.len() * f.e)
}

/// Basis of `Hom_H(V_1, V_2)`: matrices `T` with `M_1 T = T M_2` for each
/// pair of generator matrices.
pub fn hom_space(p: u32, first: &[GfMatrix], second: &[GfMatrix]) -> Result<Vec<GfMatrix>> {
    let (Some(a0), Some(b0)) = (first.first(), second.first()) else {
        return Err(Error::Action("no generator matrices".into()));
    };
    let (r, c) = (a0.rows, b0.rows);
    if first.len() != second.len() {
        return Err(Error::DimensionMismatch {
            expected: first.len(),
            got: second.len(),
        });
    }
    let unknowns = r * c;
    let mut eqs: Vec<Vec<u32>> = Vec::new();
    for (a, b) in first.iter().zip(second) {
        // (A T - T B)[i][j] = sum_k A[i][k] T[k][j] - T[i][k] B[k][j]
        for i in 0..r {
            for j in 0..c {
                let mut row = vec![0u32; unknowns];
                for k in 0..r {
                    let t = k * c + j;
                    row[t] = (row[t] + a.get(i, k)) % p;
                }
                for k in 0..c {
                    let t = i * c + k;
                    row[t] = (row[t] + p - b.get(k, j)) % p;
                }
                if row.iter().any(|&x| x != 0) {
                    eqs.push(row);
                }
            }
        }
    }
    let sols = if eqs.is_empty() {
        (0..unknowns)
            .map(|k| (0..unknowns).map(|j| (j == k) as u32).collect())
            .collect()
    } else {
        GfMatrix::from_rows(p, &eqs)?.nullspace()
    };
    sols.iter()
        .map(|x| GfMatrix::from_rows(p, &x.chunks(c).map(|r| r.to_vec()).collect::<Vec<_>>()))
        .collect()
}
