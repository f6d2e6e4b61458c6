mod common;

use binary_cs::analysis::{analyze, degree_profile, girth, Girth};
use binary_cs::bounds::{c_prime, q_selection};
use binary_cs::experiments::{crossing, generate_sparse_signal, isotonic_nonincreasing, SignalModel};
use binary_cs::matrices::mtx::{parse_matrix_market, to_matrix_market};
use binary_cs::matrices::{construct_array_matrix, construct_devore_matrix, is_prime, BinaryMatrix, Matrix};
use binary_cs::solver::{lp_oracle_op, Decoder, SolverConfig, Status};
use proptest::prelude::*;

const PRIMES: [usize; 6] = [3, 5, 7, 11, 13, 17];

fn array_params() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|q| (Just(q), 1..q))
}

fn small_binary() -> impl Strategy<Value = BinaryMatrix> {
    (2usize..7, 2usize..8).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), rows), cols).prop_map(move |bits| {
            let supports = bits
                .into_iter()
                .map(|c| c.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
                .collect();
            BinaryMatrix::from_columns(rows, supports).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn array_codes_are_regular_with_known_girth((q, l) in array_params()) {
        let h = construct_array_matrix(q, l).unwrap();
        let p = degree_profile(&h);
        prop_assert_eq!((h.rows(), h.cols()), (l * q, q * q));
        prop_assert!(p.left.iter().all(|&d| d == l));
        prop_assert!(p.right.iter().all(|&d| d == q));
        // With two row blocks every cycle alternates between them, so the
        // shortest one has length eight.
        let expected = match l {
            1 => Girth::Infinite,
            2 => Girth::Finite(8),
            _ => Girth::Finite(6),
        };
        prop_assert_eq!(girth(&h), expected);
    }

    #[test]
    fn girth_agrees_with_exhaustive_search(m in small_binary()) {
        prop_assert_eq!(girth(&m), common::brute_force_girth(&m, 14));
    }

    #[test]
    fn devore_columns_have_weight_q(q in prop::sample::select(vec![3usize, 5, 7]), r in 1usize..3) {
        let d = construct_devore_matrix(q, r).unwrap();
        prop_assert_eq!(d.cols(), q.pow(r as u32 + 1));
        prop_assert!(d.columns().iter().all(|c| c.len() == q));
        // Two polynomials of degree r agree in at most r points.
        prop_assert!(analyze(&d).unwrap().lambda <= r);
    }

    #[test]
    fn matrix_market_round_trips(m in small_binary()) {
        let m: Matrix = m.into();
        let back = parse_matrix_market(&to_matrix_market(&m), std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn sparse_signals_have_exact_support(n in 1usize..200, frac in 0.0f64..1.0, seed in any::<u64>(), bounded in any::<bool>()) {
        let k = ((n as f64 * frac) as usize).max(1);
        let model = if bounded { SignalModel::BoundedUniform } else { SignalModel::Signed };
        let x = generate_sparse_signal(n, k, model, seed).unwrap();
        prop_assert_eq!(x.iter().filter(|v| **v != 0.0).count(), k);
        prop_assert!(x.iter().all(|v| v.abs() <= 1.0));
        prop_assert_eq!(&x, &generate_sparse_signal(n, k, model, seed).unwrap());
    }

    #[test]
    fn isotonic_fit_is_nonincreasing_and_mass_preserving(
        values in prop::collection::vec(0.0f64..1.0, 1..30),
        w in 1.0f64..10.0,
    ) {
        let weights = vec![w; values.len()];
        let fit = isotonic_nonincreasing(&values, &weights);
        prop_assert!(fit.windows(2).all(|p| p[0] >= p[1] - 1e-12));
        let (a, b): (f64, f64) = (values.iter().sum(), fit.iter().sum());
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn crossing_lies_between_bracketing_points(rates in prop::collection::vec(0.0f64..1.0, 2..20)) {
        let mut sorted = rates.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let ks: Vec<f64> = (1..=sorted.len()).map(|k| k as f64).collect();
        if let Some(c) = crossing(&ks, &sorted, 0.5) {
            prop_assert!(c >= ks[0] && c <= *ks.last().unwrap());
        }
    }

    #[test]
    fn c_prime_grows_with_girth(d in 3u64..20, g in prop::sample::select(vec![6usize, 8, 10, 12, 14])) {
        prop_assert!(c_prime(g + 2, d).unwrap() >= c_prime(g, d).unwrap());
        prop_assert_eq!(c_prime(6, d).unwrap(), 2 * d);
    }

    #[test]
    fn selected_primes_are_primes(n in 4usize..200_000, k in 1usize..400) {
        let s = q_selection(n, k).unwrap();
        prop_assert!(is_prime(s.q_array) && is_prime(s.q_devore));
        prop_assert!(s.q_array * s.q_array >= n as u64);
        prop_assert!(s.q_devore > 2 * k as u64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn splitting_and_simplex_agree_on_objective(seed in any::<u64>(), k in 1usize..8) {
        let h = construct_array_matrix(7, 3).unwrap();
        let x = generate_sparse_signal(h.cols(), k, SignalModel::BoundedUniform, seed).unwrap();
        let y = h.matvec(&x);
        let cfg = SolverConfig::default();
        let r = Decoder::new(&h, &cfg).unwrap().solve(&y, 0.0, &cfg).unwrap();
        let lp = lp_oracle_op(&h, &y).unwrap();
        prop_assert!(lp.l1_objective <= r.l1_objective + 1e-9 * r.l1_objective.max(1.0));
        if r.status == Status::Converged {
            prop_assert!((r.l1_objective - lp.l1_objective).abs() <= 1e-6 * lp.l1_objective.max(1.0),
                "splitting {} simplex {}", r.l1_objective, lp.l1_objective);
        }
        prop_assert!(lp.residual_norm <= 1e-8 * y.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0));
    }
}
