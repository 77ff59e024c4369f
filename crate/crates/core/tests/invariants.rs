use boolcv::black_box::{Family, TargetFunction};
use boolcv::error_theory::enumerate_expected_errors;
use boolcv::knn::{VotingConfig, VotingModel};
use boolcv::scalar::exact;
use boolcv::stability::{flip_probability, instability_from_profiles, vote_one_prob, NeighborhoodProfile};
use boolcv::BitMatrix;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn float_and_exact_vote_probabilities_agree(k in 1usize..30, s_frac in 0.0f64..=1.0, pn in 0i64..=40, tq in 1i64..4) {
        let s = (s_frac * k as f64).round() as usize;
        let exact_v = vote_one_prob(k, s, &exact(pn, 40), &exact(tq, 4)).unwrap();
        let float_v = vote_one_prob(k, s, &(pn as f64 / 40.0), &(tq as f64 / 4.0)).unwrap();
        prop_assert!((exact_v.to_f64().unwrap() - float_v).abs() < 1e-12);
    }

    #[test]
    fn vote_probability_is_monotone_in_signal(k in 1usize..40, pn in 0i64..20) {
        let p = exact(pn, 40);
        let t = exact(1, 2);
        let probs: Vec<BigRational> = (0..=k).map(|s| vote_one_prob(k, s, &p, &t).unwrap()).collect();
        prop_assert!(probs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn flip_probability_peaks_at_one_half(pn in 0i64..=100) {
        let f = flip_probability(&exact(pn, 100));
        prop_assert!(f <= exact(1, 2));
        prop_assert_eq!(f == exact(1, 2), pn == 50);
    }

}

proptest! {
    // Exact enumeration over 2^16 noise pairs; keep the case count small.
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn enumerated_errors_respect_the_bound(seed in 0u64..1000, k in prop::sample::select(vec![1usize, 3]), pn in 1i64..10) {
        let x = BitMatrix::all_inputs(3).unwrap();
        let truth = TargetFunction::from_family(&Family::Random(seed), 3).unwrap().evaluate_all(&x).unwrap();
        let model = VotingModel::new(&x, VotingConfig::<f64>::majority(k).unwrap()).unwrap();
        let e = enumerate_expected_errors(&model, &truth, &exact(pn, 20)).unwrap();
        prop_assert!(e.e_c <= e.e_t.clone() + e.e_s.clone());
        // The instability of m_k is fixed by the neighborhood profiles alone.
        let hoods = boolcv::knn::Neighborhoods::build(&x, k).unwrap();
        let profiles: Vec<NeighborhoodProfile> = (0..8)
            .map(|i| {
                let s = hoods.one_counts(&truth).unwrap()[i];
                NeighborhoodProfile::new(k, s).unwrap()
            })
            .collect();
        let report = instability_from_profiles(&profiles, &exact(pn, 20), &exact(1, 2)).unwrap();
        prop_assert_eq!(report.expected_instability, e.e_s);
    }
}
