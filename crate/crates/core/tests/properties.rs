use lll_core::graph::make_cycle_bigraph;
use lll_core::*;
use proptest::prelude::*;

fn pv(v: &[f64]) -> ProbVec {
    ProbVec::new(v.to_vec()).unwrap()
}

fn fast() -> SearchConfig {
    SearchConfig { starts: 4, ..SearchConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn exterior_is_monotone(base in prop::collection::vec(0.36f64..0.6, 3), bump in prop::collection::vec(0.0f64..0.3, 3)) {
        let h = make_cycle_bigraph(3).unwrap();
        let q = pv(&base);
        let cert = exterior_membership(&h, &q, &fast()).unwrap();
        prop_assume!(cert.is_some());
        let bigger: Vec<f64> = base.iter().zip(&bump).map(|(a, b)| (a + b).min(1.0)).collect();
        prop_assert!(exterior_membership(&h, &pv(&bigger), &fast()).unwrap().is_some());
    }

    #[test]
    fn discrete_boundary_is_homogeneous(d in prop::collection::vec(0.3f64..1.0, 3), s in 1.5f64..3.0) {
        let h = make_cycle_bigraph(3).unwrap();
        let cfg = fast();
        let a = vlll_boundary_lambda_bruteforce(&h, &pv(&d), &cfg).unwrap();
        let scaled: Vec<f64> = d.iter().map(|x| x / s).collect();
        let b = vlll_boundary_lambda_bruteforce(&h, &pv(&scaled), &cfg).unwrap();
        // The bracket width bounds the error in lambda; rescale it to boundary vectors.
        let slack = 2.0 * cfg.lambda_tol * d.iter().cloned().fold(0.0, f64::max);
        for (x, y) in a.boundary_vector.as_slice().iter().zip(b.boundary_vector.as_slice()) {
            prop_assert!((x - y).abs() <= slack, "{x} vs {y}");
        }
    }

    #[test]
    fn dropping_an_event_shrinks_the_union(n in 3usize..=6, drop in 0usize..6) {
        let h = make_cycle_bigraph(n).unwrap();
        let w = cycle_gapful_witness(n).unwrap();
        let full = w.evaluate(&h).unwrap();
        let mut sub = w.clone();
        let k = drop % n;
        sub.indicators[k].cells.iter_mut().for_each(|c| *c = false);
        let fewer = sub.evaluate(&h).unwrap();
        prop_assert!(fewer.union < full.union - 1e-12);
    }
}
