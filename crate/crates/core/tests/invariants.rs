mod common;

use common::*;
use fraccut::codecio::{parse_alist, parse_dense, write_alist, write_dense};
use fraccut::cutplane::{cutting_condition, exhaustive_cut_search, search_redundant_row, stack, support_index_set_q};
use fraccut::fracdist::{fractional_distance_with, FracDistError};
use fraccut::lp::{solve_min, solve_min_lazy, solve_min_screened};
use fraccut::polytope::{fundamental_cone, in_fundamental_polytope};
use fraccut::{fractional_distance, BitVector, LpOutcome, Method, Rational, SweepOptions};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn value(o: &LpOutcome) -> Option<Rational> {
    o.optimal().map(|s| s.value.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solvers_match_vertex_enumeration(seed in any::<u64>()) {
        let p = random_lp(&mut StdRng::seed_from_u64(seed), 5, 4);
        let best = brute_force_min(&p);
        for out in [solve_min(&p), solve_min_screened(&p), solve_min_lazy(&p)] {
            let out = out.unwrap();
            prop_assert_eq!(value(&out), best.clone());
            if let Some(sol) = out.optimal() {
                prop_assert!(feasible(&p, &sol.point));
            }
        }
    }

    #[test]
    fn alist_and_dense_round_trip(seed in any::<u64>(), m in 1usize..7, n in 1usize..12) {
        let h = random_matrix(&mut StdRng::seed_from_u64(seed), m, n, 5);
        prop_assert_eq!(parse_alist(&write_alist(&h)).unwrap(), h.clone());
        prop_assert_eq!(parse_dense(&write_dense(&h)).unwrap(), h);
    }

    #[test]
    fn codewords_are_exactly_the_binary_points(seed in any::<u64>()) {
        let h = random_matrix(&mut StdRng::seed_from_u64(seed), 3, 7, 4);
        let codewords = codewords_by_scan(&h);
        for x in 0u32..1 << 7 {
            let bits: Vec<bool> = (0..7).map(|j| x >> j & 1 == 1).collect();
            let v = BitVector::from_bools(&bits);
            let point: Vec<Rational> = bits.iter().map(|&b| rat(b as i64)).collect();
            prop_assert_eq!(in_fundamental_polytope(&h, &point).unwrap(), codewords.contains(&v));
        }
    }

    #[test]
    fn echelon_replay_reproduces_the_form(seed in any::<u64>(), shift in 0usize..8) {
        let h = random_matrix(&mut StdRng::seed_from_u64(seed), 5, 8, 5);
        let order: Vec<usize> = (0..8).map(|j| (j + shift) % 8).collect();
        let e = h.row_echelon(&order).unwrap();
        prop_assert_eq!(e.replay(&h), e.matrix.clone());
        prop_assert_eq!(e.rank, h.rank());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn minimum_vertices_lie_in_the_cone(seed in any::<u64>()) {
        let h = random_matrix(&mut StdRng::seed_from_u64(seed), 4, 8, 5);
        let cone = fundamental_cone(&h).unwrap();
        match fractional_distance(&h, Method::Full) {
            Ok(r) => {
                for p in &r.gamma {
                    prop_assert!(in_fundamental_polytope(&h, p).unwrap());
                    prop_assert!(cone.contains(p).unwrap());
                }
            }
            Err(FracDistError::NoFractionalVertex) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn cone_and_full_sweeps_agree(seed in any::<u64>()) {
        let h = random_matrix(&mut StdRng::seed_from_u64(seed), 4, 8, 5);
        let full = fractional_distance(&h, Method::Full).map(|r| r.d_frac);
        let cone = fractional_distance(&h, Method::Relaxed).map(|r| r.d_frac);
        let exact = fractional_distance_with(&h, Method::Relaxed, SweepOptions::exact()).map(|r| r.d_frac);
        prop_assert_eq!(&full, &cone);
        prop_assert_eq!(&cone, &exact);
    }

    #[test]
    fn found_rows_cut_and_echelon_success_implies_exhaustive(seed in any::<u64>()) {
        let h = random_matrix(&mut StdRng::seed_from_u64(seed), 4, 8, 5);
        let Ok(r) = fractional_distance(&h, Method::Relaxed) else { return Ok(()) };
        for p in &r.gamma {
            let q = support_index_set_q(&h, p).unwrap();
            let echelon = search_redundant_row(&h, p).unwrap();
            let exhaustive = exhaustive_cut_search(&h, p, 20).unwrap();
            if q.len() <= 20 && exhaustive.is_none() {
                prop_assert!(echelon.is_none());
            }
            for row in echelon.iter().chain(&exhaustive) {
                prop_assert!(h.in_row_space(row).unwrap());
                prop_assert!(cutting_condition(p, row).unwrap());
                prop_assert!(!in_fundamental_polytope(&stack(&h, row).unwrap(), p).unwrap());
            }
            // every row-space combination meeting the condition cuts p
            for mask in 1u64..1 << h.m() {
                let row = combine(&h, mask);
                if !row.is_zero() && cutting_condition(p, &row).unwrap() {
                    prop_assert!(!in_fundamental_polytope(&stack(&h, &row).unwrap(), p).unwrap());
                }
            }
        }
    }
}
