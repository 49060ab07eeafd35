use nbqi::nearbest::{self, NearBestProblem};
use nbqi::partition::PartitionSpec;
use nbqi::{io, quadrature, quasiinterp, KnotSequence};
use proptest::prelude::*;

/// Strictly increasing breakpoints on `[0, 1]` from positive span weights.
fn breakpoints(min_spans: usize, max_spans: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..20.0, min_spans..=max_spans).prop_map(|spans| {
        let total: f64 = spans.iter().sum();
        let mut t = vec![0.0];
        let mut acc = 0.0;
        for h in &spans {
            acc += h;
            t.push(acc / total);
        }
        *t.last_mut().unwrap() = 1.0;
        t
    })
}

fn knots(max_degree: usize) -> impl Strategy<Value = KnotSequence> {
    (1..=max_degree, breakpoints(4, 14))
        .prop_map(|(m, b)| KnotSequence::clamped(m, &b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn basis_is_partition_of_unity(ks in knots(5), x in 0.0f64..=1.0) {
        let (_, vals) = ks.basis_functions(x).unwrap();
        prop_assert!((vals.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        prop_assert!(vals.iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn schoenberg_reproduces_lines(ks in knots(5), x in 0.0f64..=1.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let q = quasiinterp::schoenberg(&ks).unwrap();
        let v = q.eval(|t| a * t + b, x).unwrap();
        prop_assert!((v - (a * x + b)).abs() < 1e-12);
    }

    #[test]
    fn s2_reproduces_quadratics(m in 2usize..=5, bp in breakpoints(5, 14), x in 0.0f64..=1.0) {
        let ks = KnotSequence::clamped(m, &bp).unwrap();
        let q = quasiinterp::s2(&ks).unwrap();
        let p = |t: f64| 1.0 - 2.0 * t + 3.0 * t * t;
        prop_assert!((q.eval(p, x).unwrap() - p(x)).abs() < 1e-10);
    }

    #[test]
    fn l1_solution_is_feasible_and_optimal(ks in knots(4), p in 1usize..=3, pick in 0.0f64..1.0) {
        let q = ks.degree().min(2 * p);
        let i = ((ks.len() - 1) as f64 * pick) as usize;
        let sol = quasiinterp::near_best_anchor(&ks, i, p, q).unwrap().solution;
        prop_assert!(sol.residual < 1e-10);
        prop_assert!(sol.duality_gap() <= 1e-8 * sol.nu.max(1.0));
        prop_assert!(sol.nu >= 1.0 - 1e-12);
    }

    #[test]
    fn symmetric_lp_never_worse_than_full_lp(n in 1usize..=4) {
        for kind in [nearbest::UniformKind::Discrete, nearbest::UniformKind::Integral] {
            let sym = nearbest::solve_symmetric_uniform(4, n, 3, kind).unwrap();
            let full = nearbest::solve_l1(&NearBestProblem::uniform(4, n, 3, kind).unwrap()).unwrap();
            prop_assert!((sym.nu - full.nu).abs() < 1e-10);
        }
    }

    #[test]
    fn quadrature_weights_sum_to_length(ks in knots(4)) {
        let rule = quadrature::qi_to_quadrature(&quasiinterp::schoenberg(&ks).unwrap()).unwrap();
        prop_assert!((rule.weight_sum() - 1.0).abs() < 1e-13);
        prop_assert!(quadrature::exactness_degree(&rule, 4).unwrap() >= 1);
    }

    #[test]
    fn knot_files_round_trip(ks in knots(5)) {
        let again = io::parse_knots(&io::format_knots(&ks)).unwrap();
        prop_assert_eq!(again.knots(), ks.knots());
    }

    #[test]
    fn partition_specs_round_trip(n in 1usize..500, r in 0.01f64..100.0, seed in any::<u64>()) {
        for spec in [PartitionSpec::Uniform(n), PartitionSpec::Geometric(n, r), PartitionSpec::Random(n, seed)] {
            let again: PartitionSpec = spec.to_string().parse().unwrap();
            prop_assert_eq!(&again, &spec);
            prop_assert_eq!(spec.breakpoints().len(), n + 1);
        }
    }
}
