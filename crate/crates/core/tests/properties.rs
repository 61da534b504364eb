use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use clonelab::certificate::{self, Certificate};
use clonelab::finite::{named, preserves, rho3};
use clonelab::perms::{in_inj_b, FinSuppInjection, FinSuppPermutation};
use clonelab::structure::{decompose_product, product_operation, Decomposition, ProductUniverse};
use clonelab::ultralocal::{equalizer_family, search_dagger, Strategy as Search};
use clonelab::{CloneFragment, Elem, Limits, Operation, Universe};

fn op_strategy(m: usize, arity: usize) -> impl Strategy<Value = Operation> {
    proptest::collection::vec(0..m, m.pow(arity as u32))
        .prop_map(move |t| Operation::from_values(&Universe::new(m).unwrap(), arity, &t).unwrap())
}

fn sized_op(max_m: usize, max_arity: usize) -> impl Strategy<Value = Operation> {
    (1..=max_m, 1..=max_arity).prop_flat_map(|(m, n)| op_strategy(m, n))
}

fn perm_strategy() -> impl Strategy<Value = FinSuppPermutation> {
    (2usize..9)
        .prop_flat_map(|n| Just((0..n as u64).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|img| {
            let moved: BTreeMap<u64, u64> =
                img.iter().enumerate().map(|(i, &y)| (i as u64, y)).filter(|(x, y)| x != y).collect();
            FinSuppPermutation::new(moved).unwrap()
        })
}

/// Inversion count parity of the permutation restricted to `0..8`.
fn parity_oracle(p: &FinSuppPermutation) -> bool {
    let v: Vec<u64> = (0..8).map(|x| p.apply(x)).collect();
    let inv = (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))).filter(|&(i, j)| v[i] > v[j]).count();
    inv % 2 == 0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn superposing_projections_is_identity(f in sized_op(3, 3)) {
        let u = f.universe().clone();
        let projs: Vec<Operation> = (0..f.arity()).map(|i| Operation::projection(&u, f.arity(), i).unwrap()).collect();
        prop_assert_eq!(f.superpose(&projs).unwrap(), f.clone());
        // and the other unit law for unary identity
        let id = Operation::projection(&u, 1, 0).unwrap();
        prop_assert_eq!(id.superpose(std::slice::from_ref(&f)).unwrap(), f);
    }

    #[test]
    fn near_unanimity_absorbs(m in 2usize..5, a in 0u8..4, b in 0u8..4, pos in 0usize..3) {
        let u = Universe::new(m).unwrap();
        let (a, b) = (a % m as u8, b % m as u8);
        for h in [named::majority(&u), named::dual_discriminator(&u)] {
            prop_assert!(h.is_near_unanimity().unwrap());
            let mut args = vec![a; 3];
            args[pos] = b;
            prop_assert_eq!(h.apply(&args).unwrap(), a);
        }
    }

    #[test]
    fn nu_test_matches_definition(h in op_strategy(2, 3)) {
        let def = (0..2u8).all(|a| (0..2u8).all(|b| (0..3).all(|i| {
            let mut x = [a; 3];
            x[i] = b;
            h.apply(&x).unwrap() == a
        })));
        prop_assert_eq!(h.is_near_unanimity().unwrap(), def);
    }

    #[test]
    fn parity_is_a_homomorphism(p in perm_strategy(), q in perm_strategy()) {
        let pq = p.compose(&q);
        prop_assert_eq!(pq.in_alt(), p.in_alt() == q.in_alt());
        prop_assert_eq!(p.in_alt(), parity_oracle(&p));
        prop_assert_eq!(p.inverse().in_alt(), p.in_alt());
    }

    #[test]
    fn injections_compose_inside_b(
        bset in proptest::collection::btree_set(0u64..12, 1..6),
        seed in proptest::collection::vec(any::<prop::sample::Index>(), 12),
    ) {
        let pts: Vec<u64> = bset.iter().copied().collect();
        // two random permutations of B, as injections
        let mk = |off: usize| {
            let mut img = pts.clone();
            for i in (1..img.len()).rev() {
                let j = seed[(i + off) % seed.len()].index(i + 1);
                img.swap(i, j);
            }
            FinSuppInjection::new(bset.clone(), pts.iter().copied().zip(img).collect()).unwrap()
        };
        let (f, g) = (mk(0), mk(5));
        let fg = f.compose(&g);
        prop_assert!(in_inj_b(&fg, &bset));
        prop_assert!(fg.moved().keys().all(|x| bset.contains(x)));
        for x in 0..14u64 {
            prop_assert_eq!(fg.apply(x), f.apply(g.apply(x)));
        }
    }

    #[test]
    fn product_decomposition_round_trips(
        l in 1usize..4, r in 1usize..4, n in 1usize..3, seed in any::<u64>()
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (lu, ru) = (Universe::new(l).unwrap(), Universe::new(r).unwrap());
        let pu = ProductUniverse::new(&lu, &ru).unwrap();
        let g: Vec<usize> = (0..l.pow(n as u32)).map(|_| rng.gen_range(0..l)).collect();
        let h: Vec<usize> = (0..r.pow(n as u32)).map(|_| rng.gen_range(0..r)).collect();
        let g = Operation::from_values(&lu, n, &g).unwrap();
        let h = Operation::from_values(&ru, n, &h).unwrap();
        let f = product_operation(&pu, &g, &h).unwrap();
        match decompose_product(&pu, &f).unwrap() {
            Decomposition::Product { left, right } => {
                prop_assert_eq!(left, g);
                prop_assert_eq!(right, h);
            }
            other => prop_assert!(false, "not recognized: {:?}", other),
        }
    }

    #[test]
    fn rho3_detects_essential_unarity(f in op_strategy(3, 3)) {
        let rel = rho3(f.universe());
        // depends on coordinate i: changing only x_i changes the value
        let dep = |i: usize| (0..27usize).any(|p| {
            let x: Vec<Elem> = vec![(p / 9) as Elem, (p / 3 % 3) as Elem, (p % 3) as Elem];
            (0..3u8).any(|v| {
                let mut y = x.clone();
                y[i] = v;
                f.apply(&x).unwrap() != f.apply(&y).unwrap()
            })
        });
        let unary = (0..3).filter(|&i| dep(i)).count() <= 1;
        prop_assert_eq!(preserves(&f, &rel).unwrap().is_none(), unary);
        prop_assert_eq!(f.is_essentially_unary_direct(), unary);
    }

    #[test]
    fn fip_three_way(f in op_strategy(3, 1), g in op_strategy(3, 1), lambda in 1usize..4) {
        let limits = Limits::default();
        let u = f.universe().clone();
        let frag = CloneFragment::generate(&u, &[g], 1, &limits).unwrap();
        let found = search_dagger(&f, &frag, lambda, Search::ExhaustivePartitions { max_blocks: None }, &limits)
            .unwrap()
            .found();
        let fam = equalizer_family(&f, &frag, lambda, &limits).unwrap();
        prop_assert_eq!(found, fam.covering_subfamily().is_some());
        prop_assert_eq!(found, !fam.fip_holds());
    }

    #[test]
    fn certificates_survive_a_json_round_trip(f in sized_op(3, 2)) {
        let input = certificate::operation_input(&f);
        if let Some(w) = preserves(&f, &rho3(f.universe())).unwrap() {
            let c = certificate::preservation(&w, &rho3(f.universe()), &input);
            let back = Certificate::parse(&c.to_json_string()).unwrap();
            prop_assert_eq!(back.to_json_string(), c.to_json_string());
            prop_assert!(certificate::verify(&back, &[input], &limits()).unwrap().valid);
        }
    }
}

fn limits() -> Limits {
    Limits::default()
}

#[test]
fn support_bound_rejects_outside_points() {
    let b: BTreeSet<u64> = [1, 2].into();
    assert!(FinSuppInjection::new(b, [(3, 1)].into()).is_err());
}
