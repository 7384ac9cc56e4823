//! Modules over prime fields: actions, endomorphism fields, fixed spaces and
//! first cohomology.

pub mod action;
pub mod derivation;
pub mod endo;
pub mod gf;

pub use action::{index_to_vector, vector_to_index, Certificate, ModuleAction, ModuleDescriptor};
pub use derivation::{
    commutator, commutator_space, derivation_space, fixed_space, DerivationSpace, FixedSpace,
};
pub use endo::{
    apply_blockwise, end_algebra, f_independent_mod, f_span, f_span_dim, hom_space, EndField,
};
pub use gf::{GfMatrix, RowSpace};

use crate::group::SmallField;

/// Rewrites an `n x n` matrix over GF(p^k) as an `nk x nk` matrix over GF(p),
/// using the digit basis of the field encoding.
pub fn blow_up(field: &SmallField, m: &[Vec<usize>]) -> GfMatrix {
    let (p, k) = (field.p, field.k);
    let n = m.len();
    let mut out = GfMatrix::zeros(p as u32, n * k, n * k);
    for (i, row) in m.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            for r in 0..k {
                let img = field.mul(field.basis_element(r), c);
                for (s, d) in index_to_vector(img, p as u32, k).into_iter().enumerate() {
                    out.set(i * k + r, j * k + s, d);
                }
            }
        }
    }
    out
}

/// A small battery of faithful irreducible modules used by tests and the
/// property checker.
pub fn module_battery() -> Vec<(String, ModuleAction)> {
    let mat = |p: u32, rows: &[&[u32]]| {
        GfMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    };
    let mut out = Vec::new();
    let mut push = |name: &str, p: u32, mats: Vec<GfMatrix>| {
        let act = ModuleAction::from_matrices(name, p, mats).expect("battery module");
        out.push((name.to_string(), act));
    };
    push("C2 on GF(3)", 3, vec![mat(3, &[&[2]])]);
    push("C3 on GF(2)^2", 2, vec![mat(2, &[&[0, 1], &[1, 1]])]);
    push(
        "GL(2,2) natural",
        2,
        vec![mat(2, &[&[0, 1], &[1, 1]]), mat(2, &[&[0, 1], &[1, 0]])],
    );
    push("C7 on GF(2)^3", 2, vec![mat(2, &[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]])]);
    push(
        "Sym(3) on GF(5)^2",
        5,
        vec![mat(5, &[&[0, 1], &[4, 4]]), mat(5, &[&[0, 1], &[1, 0]])],
    );
    push(
        "GL(3,2) natural",
        2,
        vec![
            mat(2, &[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]),
            mat(2, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        ],
    );
    push("SL(2,4) natural", 2, sl24_natural());
    push("C3 on GF(7)", 7, vec![mat(7, &[&[2]])]);
    out
}

/// Generators of SL(2,4) acting on GF(4)^2, as 4 x 4 matrices over GF(2).
pub fn sl24_natural() -> Vec<GfMatrix> {
    let f = SmallField::new(4).expect("GF(4)");
    let w = f.primitive_element();
    let w2 = f.mul(w, w);
    [
        vec![vec![w, 0], vec![0, w2]],
        vec![vec![1, 1], vec![0, 1]],
        vec![vec![0, 1], vec![1, 0]],
    ]
    .iter()
    .map(|m| blow_up(&f, m))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn battery(name: &str) -> ModuleAction {
        module_battery()
            .into_iter()
            .find(|(n, _)| n == name)
            .unwrap()
            .1
    }

    /// Counts derivations as complements: the assignments of generator
    /// values whose affine lifts generate a group of order |H|.
    fn oracle_der_count(act: &ModuleAction) -> usize {
        let (p, d) = (act.p, act.dim);
        let ng = act.gen_images.len();
        let size = act.size();
        let mut count = 0;
        for code in 0..size.pow(ng as u32) {
            let mut c = code;
            let lifts: Vec<GfMatrix> = act
                .gen_images
                .iter()
                .map(|m| {
                    let w = index_to_vector(c % size, p, d);
                    c /= size;
                    let mut a = GfMatrix::zeros(p, d + 1, d + 1);
                    for i in 0..d {
                        for j in 0..d {
                            a.set(i, j, m.get(i, j));
                        }
                    }
                    for (j, &x) in w.iter().enumerate() {
                        a.set(d, j, x);
                    }
                    a.set(d, d, 1);
                    a
                })
                .collect();
            let mut seen = std::collections::HashSet::new();
            let id = GfMatrix::identity(p, d + 1);
            seen.insert(id.clone());
            let mut stack = vec![id];
            while let Some(x) = stack.pop() {
                for l in &lifts {
                    let y = x.mul(l);
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
                if seen.len() > act.group.order() {
                    break;
                }
            }
            if seen.len() == act.group.order() {
                count += 1;
            }
        }
        count
    }

    fn oracle_m(act: &ModuleAction, f: &EndField) -> usize {
        let count = oracle_der_count(act);
        let mut dim_der = 0;
        let mut c = 1;
        while c < count {
            c *= act.p as usize;
            dim_der += 1;
        }
        assert_eq!(c, count);
        let g = &act.group;
        let fixed = (0..g.order())
            .map(|h| fixed_space(act, f, h).unwrap().space)
            .fold(None::<RowSpace>, |acc, s| {
                Some(match acc {
                    None => s,
                    Some(a) => intersect(&a, &s),
                })
            })
            .unwrap();
        let dim_ider = act.dim - fixed.dim();
        (dim_der - dim_ider) / f.e
    }

    fn intersect(a: &RowSpace, b: &RowSpace) -> RowSpace {
        let all: Vec<Vec<u32>> = (0..(a.p as usize).pow(a.ambient as u32))
            .map(|i| index_to_vector(i, a.p, a.ambient))
            .filter(|v| a.contains(v) && b.contains(v))
            .collect();
        RowSpace::from_vectors(a.p, a.ambient, all.iter())
    }

    #[test]
    fn end_algebra_examples() {
        let f = end_algebra(&battery("C3 on GF(2)^2")).unwrap();
        assert_eq!((f.e, f.q, f.n), (2, 4, 1));
        let f = end_algebra(&battery("C2 on GF(3)")).unwrap();
        assert_eq!((f.e, f.q, f.n), (1, 3, 1));
        let f = end_algebra(&battery("GL(2,2) natural")).unwrap();
        assert_eq!((f.e, f.q, f.n), (1, 2, 2));
        let f = end_algebra(&battery("SL(2,4) natural")).unwrap();
        assert_eq!((f.e, f.q, f.n), (2, 4, 2));
    }

    #[test]
    fn end_algebra_rejects_reducible() {
        let g = Group::generate(
            "C2",
            2,
            vec![crate::Permutation::from_images(vec![1, 0]).unwrap()],
            crate::Caps::default(),
        )
        .unwrap();
        let swap = GfMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let act = ModuleAction::new(std::sync::Arc::new(g), 2, 2, vec![swap]).unwrap();
        assert!(matches!(end_algebra(&act), Err(crate::Error::Reducible)));
    }

    #[test]
    fn derivations_c2_gf3() {
        let act = battery("C2 on GF(3)");
        let f = end_algebra(&act).unwrap();
        let ds = derivation_space(&act, &f).unwrap();
        assert_eq!((ds.dim_p_der, ds.dim_p_ider, ds.m), (1, 1, 0));
    }

    #[test]
    fn derivations_match_oracle() {
        for (name, act) in module_battery() {
            let f = end_algebra(&act).unwrap();
            let ds = derivation_space(&act, &f).unwrap();
            assert_eq!(
                (act.p as usize).pow(ds.dim_p_der as u32),
                oracle_der_count(&act),
                "{name}"
            );
            assert_eq!(ds.m, oracle_m(&act, &f), "{name}");
        }
    }

    #[test]
    fn golden_cohomology() {
        let m = |name: &str| {
            let act = battery(name);
            let f = end_algebra(&act).unwrap();
            derivation_space(&act, &f).unwrap().m
        };
        assert_eq!(m("GL(2,2) natural"), 0);
        assert_eq!(m("SL(2,4) natural"), 1);
    }

    #[test]
    fn battery_invariants() {
        for (name, act) in module_battery() {
            assert!(act.faithful && act.irreducible, "{name}");
            let f = end_algebra(&act).unwrap();
            let ds = derivation_space(&act, &f).unwrap();
            assert!(2 * ds.m <= f.n, "{name}");
            if act.group.order() % act.p as usize != 0 {
                assert_eq!(ds.m, 0, "{name}");
            }
            assert_eq!(ds.dim_p_der, f.e * (f.n + ds.m), "{name}");
            assert_eq!(ds.dim_p_ider, f.e * f.n, "{name}");
            ds.verify_cocycles(&act).unwrap();
        }
    }

    #[test]
    fn inner_derivation_identity() {
        // [h1 h2, v] = [h1, v] h2 + [h2, v]
        for (_, act) in module_battery() {
            let g = &act.group;
            let v: Vec<u32> = (0..act.dim).map(|i| (i as u32 + 1) % act.p).collect();
            for h1 in 0..g.order().min(30) {
                for h2 in 0..g.order().min(30) {
                    let lhs = commutator(&act, g.mul(h1, h2), &v);
                    let rhs = gf::vec_add(
                        &act.act(&commutator(&act, h1, &v), h2),
                        &commutator(&act, h2, &v),
                        act.p,
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn fixed_space_examples() {
        let act = battery("C2 on GF(3)");
        let f = end_algebra(&act).unwrap();
        assert_eq!(fixed_space(&act, &f, 0).unwrap().dim_p, 1);
        assert_eq!(fixed_space(&act, &f, 1).unwrap().dim_p, 0);
        assert!(fixed_space(&act, &f, 2).is_err());
        let act = battery("GL(2,2) natural");
        let f = end_algebra(&act).unwrap();
        let g = &act.group;
        for h in 1..g.order() {
            let dim = fixed_space(&act, &f, h).unwrap().dim_f;
            let expected = if g.element_order(h) == 2 { 1 } else { 0 };
            assert_eq!(dim, expected);
        }
        for (name, act) in module_battery() {
            let f = end_algebra(&act).unwrap();
            for h in 0..act.group.order() {
                assert_eq!(fixed_space(&act, &f, h).unwrap().dim_p % f.e, 0, "{name}");
            }
        }
    }

    #[test]
    fn f_span_examples() {
        let act = battery("C3 on GF(2)^2");
        let f = end_algebra(&act).unwrap();
        assert_eq!(f_span_dim(&[], 2, &f).unwrap(), 0);
        let v = vec![vec![1, 0]];
        assert_eq!(f_span_dim(&v, 2, &f).unwrap(), 1);
        assert_eq!(f_span(&v, 2, &f).unwrap().dim(), 2);
        assert!(f_span_dim(&[vec![1, 0, 1]], 3, &f).is_err());
        // spanning vectors are independent iff their number fits
        let sub = RowSpace::new(2, 4);
        let vs = vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]];
        assert!(f_independent_mod(&vs, &sub, &f).unwrap());
        let vs = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]];
        assert!(!f_independent_mod(&vs, &sub, &f).unwrap());
    }
}
