use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use gridmagic_core::counting::{count, count_generic, count_grid, enumerate, Mode};
use gridmagic_core::decompose::decompose;
use gridmagic_core::ehrhart::{expand_h, h_vector, Polynomial};
use gridmagic_core::graph::{Graph, Topology};
use gridmagic_core::labelling::MagicLabelling;
use gridmagic_core::recurrence::{berlekamp_massey, Recurrence};

/// Walks all of `[lo, t]^E` and counts labellings with every vertex sum `t`.
fn brute_force(g: &Graph, t: u32, mode: Mode) -> u64 {
    let lo = match mode {
        Mode::All => 0,
        Mode::Interior => 1,
    };
    let e = g.num_edges();
    if lo > t && e > 0 {
        return 0;
    }
    let mut labels = vec![lo; e];
    let mut found = 0;
    loop {
        let magic = (0..g.num_vertices()).all(|v| g.incident(v).iter().map(|&x| labels[x]).sum::<u32>() == t);
        found += u64::from(magic);
        let mut i = 0;
        loop {
            if i == e {
                return found;
            }
            if labels[i] < t {
                labels[i] += 1;
                break;
            }
            labels[i] = lo;
            i += 1;
        }
    }
}

fn tiny_board() -> impl Strategy<Value = (usize, usize, Topology)> {
    prop_oneof![
        (1usize..=2, 1usize..=4).prop_map(|(m, n)| (m, n, Topology::Grid)),
        (3usize..=3, 1usize..=3).prop_map(|(m, n)| (m, n, Topology::Grid)),
        Just((2, 2, Topology::Torus)),
        Just((2, 4, Topology::Torus)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_match_brute_force((m, n, topo) in tiny_board(), t in 0u32..=2, interior in any::<bool>()) {
        let g = Graph::build(m, n, topo).unwrap();
        prop_assume!(g.num_edges() <= 10 || t <= 1);
        let mode = if interior { Mode::Interior } else { Mode::All };
        let want = brute_force(&g, t, mode);
        prop_assert_eq!(count(&g, t, mode).unwrap(), BigUint::from(want));
    }

    #[test]
    fn transpose_symmetry(m in 1usize..=4, n in 1usize..=5, t in 0u32..=3) {
        let a = count_grid(m, n, t, Mode::All).unwrap().value;
        let b = count_grid(n, m, t, Mode::All).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sweep_agrees_with_search(m in 1usize..=3, n in 1usize..=4, t in 0u32..=3, interior in any::<bool>()) {
        let mode = if interior { Mode::Interior } else { Mode::All };
        let g = Graph::grid(m, n).unwrap();
        prop_assert_eq!(count_grid(m, n, t, mode).unwrap().value, count_generic(&g, t, mode).unwrap().value);
    }

    #[test]
    fn odd_boards_have_only_zero(m in 1usize..=5, n in 1usize..=5, t in 0u32..=4) {
        prop_assume!(m * n % 2 == 1);
        let expected = if t == 0 { 1u32 } else { 0 };
        prop_assert_eq!(count_grid(m, n, t, Mode::All).unwrap().value, BigUint::from(expected));
    }

    #[test]
    fn interior_at_most_all(m in 1usize..=4, n in 1usize..=5, t in 0u32..=4) {
        let all = count_grid(m, n, t, Mode::All).unwrap().value;
        let interior = count_grid(m, n, t, Mode::Interior).unwrap().value;
        prop_assert!(interior <= all);
    }

    #[test]
    fn h_vector_inverts(h in prop::collection::vec(0i64..50, 1..6), extra in 0usize..4) {
        let mut h: Vec<BigInt> = h.into_iter().map(BigInt::from).collect();
        h[0] = BigInt::from(1);
        while h.len() > 1 && h.last().unwrap() == &BigInt::from(0) {
            h.pop();
        }
        let d = h.len() - 1 + extra;
        let series: Vec<BigUint> = expand_h(&h, d, d + 3)
            .into_iter()
            .map(|x| x.to_biguint().unwrap())
            .collect();
        prop_assert_eq!(h_vector(&series, d).unwrap(), h);
    }

    #[test]
    fn interpolation_reproduces(coeffs in prop::collection::vec(-20i64..20, 1..6)) {
        let p = |t: i64| coeffs.iter().rev().fold(0i64, |acc, c| acc * t + c);
        let values: Vec<BigInt> = (0..coeffs.len() as i64).map(|t| BigInt::from(p(t))).collect();
        let poly = Polynomial::interpolate(&values);
        for t in -3..10 {
            prop_assert_eq!(poly.eval_int(t), BigRational::from_integer(BigInt::from(p(t))));
        }
    }

    #[test]
    fn berlekamp_massey_recovers(
        coeffs in prop::collection::vec(-3i64..=3, 1..4),
        seed in prop::collection::vec(-5i64..=5, 3),
    ) {
        let r = coeffs.len();
        let truth = Recurrence::from_integers(&coeffs, &seed[..r], 0).unwrap();
        let seq = truth.values(0, 4 * r as i64 + 8).unwrap();
        let found = berlekamp_massey(&seq, 0).unwrap();
        prop_assert!(found.order() <= r);
        prop_assert_eq!(found.first_mismatch(&seq, 0).unwrap(), None);
    }

    #[test]
    fn recurrence_json_round_trip(
        coeffs in prop::collection::vec(-9i64..=9, 1..5),
        start in -10i64..10,
    ) {
        let seed: Vec<i64> = (0..coeffs.len() as i64).collect();
        let r = Recurrence::from_integers(&coeffs, &seed, start).unwrap();
        prop_assert_eq!(Recurrence::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn labellings_round_trip_and_decompose(m in 2usize..=3, n in 2usize..=4, t in 1u32..=3, pick in any::<prop::sample::Index>()) {
        prop_assume!(m * n % 2 == 0);
        let g = Arc::new(Graph::grid(m, n).unwrap());
        let all = enumerate(&g, t, Mode::All, 100_000).unwrap();
        let l = &all[pick.index(all.len())];
        let back = MagicLabelling::from_json(&l.to_json()).unwrap();
        prop_assert_eq!(&back, l);
        let d = decompose(l).unwrap();
        prop_assert_eq!(d.layers().len(), t as usize);
        prop_assert_eq!(d.resum(), l.labels().to_vec());
    }
}
