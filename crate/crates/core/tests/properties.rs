use invgen::chebotarev::{chebotarev_montecarlo, waiting_time, IeTerms};
use invgen::crowns::build_crown_power_abelian;
use invgen::genlift::{LiftMode, LiftSetup};
use invgen::harness::experiments::binomial_tail;
use invgen::invariable::{invariably_generates, invariably_generates_exhaustive, ClassCoverageTable};
use invgen::modlin::{module_battery, ModuleAction};
use invgen::{Caps, Group, Permutation};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

/// Groups generated by two random permutations of degree at most 5.
fn small_group() -> impl Strategy<Value = Group> {
    (2usize..=5).prop_flat_map(|n| (perm(n), perm(n))).prop_map(|(a, b)| {
        let n = a.len();
        let gens = vec![
            Permutation::from_images(a).unwrap(),
            Permutation::from_images(b).unwrap(),
        ];
        Group::generate("random", n, gens, Caps::default()).unwrap()
    })
}

fn battery(names: &[&str], pick: usize) -> ModuleAction {
    let mut all: Vec<ModuleAction> = module_battery()
        .into_iter()
        .filter(|(n, _)| names.contains(&n.as_str()))
        .map(|(_, a)| a)
        .collect();
    all.swap_remove(pick % all.len())
}

const SMALL_MODULES: [&str; 4] = ["C2 on GF(3)", "C3 on GF(2)^2", "GL(2,2) natural", "C3 on GF(7)"];

fn random_ws(rng: &mut ChaCha8Rng, d: usize, u: usize, dim: usize, p: u32) -> Vec<Vec<Vec<u32>>> {
    (0..d)
        .map(|_| (0..u).map(|_| (0..dim).map(|_| rng.gen_range(0..p)).collect()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn probabilities_are_monotone_and_bound_c(g in small_group()) {
        let table = ClassCoverageTable::new(&g).unwrap();
        let terms = IeTerms::new(&table).unwrap();
        let c = terms.chebotarev();
        let mut prev = BigRational::zero();
        for k in 1..=8u32 {
            let p = terms.p_invariable(k);
            prop_assert!(p >= prev && p <= BigRational::one());
            if !p.is_zero() {
                prop_assert!(c <= BigRational::from_integer(k.into()) / &p);
            }
            prev = p;
        }
        // P_I(1) is the fraction of elements generating G on their own
        let cyclic = (0..g.order()).filter(|&x| g.generates(&[x])).count();
        let expected = BigRational::new(cyclic.into(), g.order().into());
        prop_assert_eq!(terms.p_invariable(1), expected);
    }

    #[test]
    fn class_test_matches_definition(g in small_group(), seed in any::<u64>()) {
        let table = ClassCoverageTable::new(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for len in 1..=3 {
            let gs: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.order())).collect();
            prop_assert_eq!(
                invariably_generates(&g, &table, &gs).unwrap(),
                invariably_generates_exhaustive(&g, &gs, 1_000_000).unwrap()
            );
        }
    }

    #[test]
    fn monte_carlo_is_reproducible(g in small_group(), seed in any::<u64>()) {
        let table = ClassCoverageTable::new(&g).unwrap();
        let a = chebotarev_montecarlo(&g, &table, 200, seed).unwrap();
        let b = chebotarev_montecarlo(&g, &table, 200, seed).unwrap();
        prop_assert_eq!(a, b);
        // the empty tuple already generates the trivial group
        let least = if g.is_trivial() { 0.0 } else { 1.0 };
        prop_assert!(a.estimate >= least);
        let n = waiting_time(&g, &table, seed, 7).unwrap();
        prop_assert_eq!(n, waiting_time(&g, &table, seed, 7).unwrap());
        prop_assert!(n as f64 >= least);
    }

    #[test]
    fn binomial_tail_is_monotone(m in 1u64..60, l in 1u64..12, num in 1i64..99) {
        let p = BigRational::new(num.into(), 100.into());
        let t = binomial_tail(m, &p, l);
        prop_assert!(t >= BigRational::zero() && t <= BigRational::one());
        prop_assert!(binomial_tail(m + 1, &p, l) >= t);
        prop_assert!(binomial_tail(m, &p, l + 1) <= t);
        let q = BigRational::new((num + 1).into(), 100.into());
        prop_assert!(binomial_tail(m, &q, l) >= t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lift_criteria_match_the_semidirect_product(
        pick in 0usize..4,
        u in 1usize..=2,
        d in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let act = battery(&SMALL_MODULES, pick);
        let cp = build_crown_power_abelian(&act, u).unwrap();
        let h = &act.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hs: Vec<usize> = (0..d).map(|_| rng.gen_range(0..h.order())).collect();
        prop_assume!(h.generates(&hs));
        let setup = LiftSetup::new(&act, &hs, LiftMode::Generate).unwrap();
        for _ in 0..8 {
            let ws = random_ws(&mut rng, d, u, act.dim, act.p);
            let lifts: Vec<usize> = hs.iter().zip(&ws).map(|(&x, w)| cp.lift(x, w).unwrap()).collect();
            prop_assert_eq!(setup.generates(u, &ws).unwrap(), cp.group.generates(&lifts));
        }
        let table = ClassCoverageTable::new(h).unwrap();
        if invariably_generates(h, &table, &hs).unwrap() {
            let setup = LiftSetup::new(&act, &hs, LiftMode::InvariablyGenerate).unwrap();
            for _ in 0..4 {
                let ws = random_ws(&mut rng, d, u, act.dim, act.p);
                let lifts: Vec<usize> = hs.iter().zip(&ws).map(|(&x, w)| cp.lift(x, w).unwrap()).collect();
                prop_assert_eq!(
                    setup.invariably_generates(u, &ws).unwrap(),
                    invariably_generates_exhaustive(&cp.group, &lifts, 1_000_000).unwrap()
                );
            }
        }
    }

    #[test]
    fn decompose_inverts_lift(pick in 0usize..4, u in 0usize..=2, seed in any::<u64>()) {
        let act = battery(&SMALL_MODULES, pick);
        let cp = build_crown_power_abelian(&act, u).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let h = rng.gen_range(0..act.group.order());
            let ws = random_ws(&mut rng, 1, u, act.dim, act.p).remove(0);
            let x = cp.lift(h, &ws).unwrap();
            prop_assert_eq!(cp.decompose(x).unwrap(), (h, ws));
        }
    }
}
