use proptest::prelude::*;

use entbound::bounds::{
    dual_upper, entropic_check, mb_lower, mb_pair_lower, multipartite_lower, multipartite_upper,
    positive_map_bound, ppt_check,
};
use entbound::concurrence::{c_k_pure, concurrence_multipartite_pure, concurrence_pure, schmidt};
use entbound::linalg::{hermitian_eig, partial_trace, Dims};
use entbound::maps::{random_channel, reduction_map};
use entbound::observables::{o_lambda, AlphaStrategy};
use entbound::random::{derived, ginibre, haar_unitary};
use entbound::states::{ginibre_mixed, haar_pure, random_separable, wootters_concurrence};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), n in 1usize..10) {
        let g = ginibre(n, n, &mut derived(seed, 0));
        let h = (&g + &g.adjoint()).scale_real(0.5);
        let s = hermitian_eig(&h).unwrap();
        prop_assert!(s.reconstruct().max_abs_diff(&h) <= 1e-10 * h.max_abs().max(1.0));
        let tr: f64 = s.values.iter().sum();
        prop_assert!((tr - h.trace().re).abs() < 1e-10);
    }

    #[test]
    fn ginibre_states_are_valid(seed in any::<u64>(), d in 2usize..4, rank in 1usize..9) {
        let rho = ginibre_mixed(&Dims::bipartite(d), rank, seed).unwrap();
        prop_assert!((rho.mat().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(hermitian_eig(rho.mat()).unwrap().min() > -1e-10);
    }

    #[test]
    fn pure_bounds_saturate(seed in any::<u64>(), d in 2usize..5) {
        let psi = haar_pure(&Dims::bipartite(d), seed);
        let c = concurrence_pure(&psi).unwrap();
        let rho = psi.density();
        prop_assert!((mb_lower(&rho).unwrap().raw - c * c).abs() < 1e-10);
        prop_assert!((dual_upper(&rho).unwrap().raw - c * c).abs() < 1e-10);
    }

    #[test]
    fn schmidt_spectrum_matches_both_marginals(seed in any::<u64>(), a in 2usize..4, b in 2usize..5) {
        let dims = Dims::new(vec![a, b]).unwrap();
        let psi = haar_pure(&dims, seed);
        let mu = schmidt(&psi).unwrap().squared;
        prop_assert!((mu.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(mu.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(seed in any::<u64>()) {
        let psi = haar_pure(&Dims::bipartite(3), seed);
        let mut rng = derived(seed, 1);
        let u = haar_unitary(3, &mut rng).kron(&haar_unitary(3, &mut rng));
        let rotated = entbound::PureState::new(u.mul_vec(psi.vec()), Dims::bipartite(3)).unwrap();
        prop_assert!((concurrence_pure(&psi).unwrap() - concurrence_pure(&rotated).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn k_concurrence_chain(seed in any::<u64>(), d in 4usize..6) {
        let psi = haar_pure(&Dims::bipartite(d), seed);
        let powered: Vec<f64> = (2..=d).map(|k| c_k_pure(&psi, k).unwrap().powi(k as i32)).collect();
        prop_assert!(powered.windows(2).all(|w| w[0] - w[1] >= -1e-10));
    }

    #[test]
    fn two_qubit_sandwich(seed in any::<u64>(), rank in 1usize..5) {
        let rho = ginibre_mixed(&Dims::bipartite(2), rank, seed).unwrap();
        let c = wootters_concurrence(&rho).unwrap();
        prop_assert!(mb_lower(&rho).unwrap().on_c_scale() <= c + 1e-9);
        prop_assert!(c <= dual_upper(&rho).unwrap().raw.sqrt() + 1e-9);
    }

    #[test]
    fn pair_bound_below_product_of_uppers(seed in any::<u64>()) {
        let dims = Dims::bipartite(3);
        let a = ginibre_mixed(&dims, 3, seed).unwrap();
        let b = ginibre_mixed(&dims, 4, seed ^ 0x5555).unwrap();
        let lo = mb_pair_lower(&a, &b).unwrap().raw;
        let up = (dual_upper(&a).unwrap().raw * dual_upper(&b).unwrap().raw).sqrt();
        prop_assert!(lo <= up + 1e-9);
    }

    #[test]
    fn separable_states_are_undetected(seed in any::<u64>(), terms in 1usize..6) {
        let rho = random_separable(&Dims::bipartite(3), terms, &mut derived(seed, 2));
        prop_assert!(mb_lower(&rho).unwrap().raw <= 1e-10);
        prop_assert!(!entropic_check(&rho, 2).unwrap().violated);
        prop_assert!(ppt_check(&rho).unwrap().is_ppt);
        let r = positive_map_bound(&rho, &reduction_map(3).unwrap(), AlphaStrategy::Tight).unwrap();
        prop_assert!(r.raw <= 1e-10);
    }

    #[test]
    fn entropic_violation_matches_mb_sign(seed in any::<u64>(), rank in 1usize..5) {
        let rho = ginibre_mixed(&Dims::bipartite(2), rank, seed).unwrap();
        let mb = mb_lower(&rho).unwrap().raw;
        let violated = entropic_check(&rho, 2).unwrap().violated;
        if mb.abs() > 1e-10 {
            prop_assert_eq!(violated, mb > 0.0);
        }
        if violated {
            prop_assert!(!ppt_check(&rho).unwrap().is_ppt);
        }
    }

    #[test]
    fn channel_dual_identity(seed in any::<u64>()) {
        let map = random_channel(3, 2, seed).unwrap();
        let mut rng = derived(seed, 3);
        let x = ginibre(3, 3, &mut rng);
        let y = ginibre(2, 2, &mut rng);
        let lhs = map.apply(&x).unwrap().adjoint().matmul(&y).trace();
        let rhs = x.adjoint().matmul(&map.dual().apply(&y).unwrap()).trace();
        prop_assert!((lhs - rhs).norm() < 1e-10);
        let rho = ginibre_mixed(&Dims::new(vec![3]).unwrap(), 2, seed).unwrap();
        prop_assert!((map.apply(rho.mat()).unwrap().trace().re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn o_lambda_identity(seed in any::<u64>()) {
        let dims = Dims::bipartite(2);
        let map = random_channel(2, 2, seed).unwrap();
        let o = o_lambda(&map, &dims).unwrap();
        let rho = ginibre_mixed(&dims, 3, seed).unwrap();
        let sigma = ginibre_mixed(&dims, 2, seed ^ 1).unwrap();
        let img = map.apply_one_side(rho.mat(), &dims, 1).unwrap();
        let direct = img.trace_product(sigma.mat()).re;
        prop_assert!((o.expectation_pair(&rho, &sigma).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn multipartite_pure_coincidence(seed in any::<u64>()) {
        let psi = haar_pure(&Dims::uniform(2, 3), seed);
        let c = concurrence_multipartite_pure(&psi).unwrap();
        let rho = psi.density();
        prop_assert!((multipartite_lower(&rho, &rho).unwrap().raw - c * c).abs() < 1e-10);
        prop_assert!((multipartite_upper(&rho).unwrap().raw - c * c).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>()) {
        let dims = Dims::new(vec![2, 3, 2]).unwrap();
        let m = ginibre(12, 12, &mut derived(seed, 4));
        for keep in [&[0usize][..], &[1], &[0, 2], &[1, 2]] {
            let r = partial_trace(&m, &dims, keep).unwrap();
            prop_assert!((r.trace() - m.trace()).norm() < 1e-10);
        }
    }
}
