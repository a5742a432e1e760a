use smoothspec::entropy::h_max_unconditional;
use smoothspec::oracle::{smooth_hmin_conditional_oracle, smooth_hmin_unconditional_oracle, OracleOptions};
use smoothspec::random::{random_bipartite, random_density, random_unitary, rng_from_seed};
use smoothspec::smoothing::*;
use smoothspec::*;

fn assert_witness(r: &SmoothingResult, rho: &HermitianOperator, reproduce: impl Fn(&QuantumState) -> f64) {
    let w = r.witness.as_ref().expect("witness");
    assert!(ball_contains(w.op(), rho, r.epsilon).unwrap(), "witness outside the ball ({})", r.distance);
    assert!((reproduce(w) - r.value.bits()).abs() < 1e-9, "{} vs {}", reproduce(w), r.value.bits());
}

#[test]
fn unconditional_witnesses_and_monotonicity() {
    let mut rng = rng_from_seed(100);
    let grid = [0.0, 0.01, 0.05, 0.1, 0.2, 0.4];
    for trial in 0..100 {
        let rho = random_density(&mut rng, 2 + trial % 5).unwrap();
        let mut prev_min = f64::NEG_INFINITY;
        let mut prev_max = f64::INFINITY;
        for &eps in &grid {
            let lo = smooth_hmin_unconditional(&rho, eps).unwrap();
            let hi = smooth_hmax_unconditional(&rho, eps).unwrap();
            assert_witness(&lo, rho.op(), |w| h_min_unconditional(w).unwrap().bits());
            assert_witness(&hi, rho.op(), |w| h_max_unconditional(w).unwrap().bits());
            assert!(lo.value.bits() >= prev_min - 1e-12 && hi.value.bits() <= prev_max + 1e-12);
            prev_min = lo.value.bits();
            prev_max = hi.value.bits();
        }
    }
}

#[test]
fn rotated_qubit_matches_diagonal() {
    let u = random_unitary(&mut rng_from_seed(4), 2).unwrap();
    let rho =
        QuantumState::new(HermitianOperator::from_real_diagonal(&[0.75, 0.25]).conjugate_by(&u).unwrap()).unwrap();
    let r = smooth_hmin_unconditional(&rho, 0.1).unwrap();
    assert!((r.value.bits() + 0.65f64.log2()).abs() < 1e-9);
}

#[test]
fn diagonal_reduction_matches_oracle() {
    let mut rng = rng_from_seed(31);
    let options = OracleOptions::default();
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let rho = random_density(&mut rng, 2 + trial % 3).unwrap();
        for eps in [0.05, 0.1] {
            let exact = smooth_hmin_unconditional(&rho, eps).unwrap().value.bits();
            let oracle = smooth_hmin_unconditional_oracle(&rho, eps, &options).unwrap();
            assert!(ball_contains(oracle.witness.as_ref().unwrap().op(), rho.op(), eps).unwrap());
            worst = worst.max((exact - oracle.value.bits()).abs());
        }
    }
    assert!(worst < 1e-3, "largest gap {worst}");
}

#[test]
fn additive_lemma_contracts() {
    let mut rng = rng_from_seed(500);
    for trial in 0..500 {
        let rho = random_bipartite(&mut rng, 2, 2).unwrap();
        let sigma = rho.marginal(Subsystem::B).unwrap();
        let h0 = h_min(&rho, &sigma).unwrap().bits();
        let lambda = h0 + (trial as f64 + 0.5) / 500.0;
        let k = HermitianOperator::identity(2).kron(sigma.op()).scale((-lambda).exp2());
        let (delta, _) = rho.op().sub(&k).unwrap().jordan_parts().unwrap();
        let r = additive_lemma_smooth(&rho, &sigma, lambda, &delta).unwrap();
        let w = r.witness.as_ref().unwrap();
        let cert = r.certificate.unwrap();
        assert!(h_min(&BipartiteState::new(w.clone(), 2, 2).unwrap(), &sigma).unwrap().bits() >= lambda - 1e-6);
        assert!(trace_distance(w.op(), rho.op()).unwrap() <= (8.0 * delta.trace()).sqrt() + 1e-8);
        assert!(cert.tbar_max_eigenvalue <= 1.0 + 1e-9);
        assert!(w.trace() <= rho.state().trace() + 1e-9);
    }
}

#[test]
fn projector_lemma_curve_is_monotone() {
    let mut rng = rng_from_seed(12);
    for _ in 0..20 {
        let rho = random_bipartite(&mut rng, 2, 2).unwrap();
        let sigma = rho.marginal(Subsystem::B).unwrap();
        let h0 = h_min(&rho, &sigma).unwrap().bits();
        let r = projector_lemma_smooth(&rho, &sigma, h0 - 0.5).unwrap();
        assert!(r.epsilon < 1e-9 && r.distance < 1e-8);
        let mut prev = 0.0;
        for i in 0..40 {
            let lambda = h0 + 0.05 * i as f64;
            let r = projector_lemma_smooth(&rho, &sigma, lambda).unwrap();
            assert!(r.epsilon >= prev - 1e-12);
            assert!(r.distance <= r.epsilon + 1e-8);
            assert!(r.value.bits() >= lambda - 1e-6);
            prev = r.epsilon;
        }
    }
}

#[test]
fn lower_bound_sandwich_and_limit() {
    let mut rng = rng_from_seed(200);
    let options = OracleOptions { restarts: 5, ..Default::default() };
    for _ in 0..40 {
        let rho = random_bipartite(&mut rng, 2, 2).unwrap();
        let sigma = rho.marginal(Subsystem::B).unwrap();
        let lower = smooth_hmin_conditional_lower(&rho, &sigma, 0.1).unwrap();
        let oracle = smoothspec::oracle::smooth_hmin_conditional_oracle_with(&rho, &sigma, 0.1, &options).unwrap();
        assert!(lower.value.bits() <= oracle.value.bits() + 1e-3);
        assert!(lower.value.bits() >= h_min(&rho, &sigma).unwrap().bits() - 1e-9);
        let tiny = smooth_hmin_conditional_lower(&rho, &sigma, 1e-6).unwrap();
        assert!((tiny.value.bits() - h_min(&rho, &sigma).unwrap().bits()).abs() < 1e-3);
        let witness = BipartiteState::new(lower.witness.clone().unwrap(), 2, 2).unwrap();
        assert!((h_min(&witness, &sigma).unwrap().bits() - lower.value.bits()).abs() < 1e-9);
        assert!(ball_contains(witness.op(), rho.op(), 0.1).unwrap());
    }
}

#[test]
fn oracle_product_sandwich() {
    let ra = QuantumState::from_diagonal(&[0.6, 0.3, 0.1]).unwrap();
    let sb = QuantumState::from_diagonal(&[0.35, 0.65]).unwrap();
    let prod = BipartiteState::new(ra.kron(&sb).unwrap(), 3, 2).unwrap();
    let lower = smooth_hmin_conditional_lower(&prod, &sb, 0.1).unwrap().value.bits();
    let oracle = smooth_hmin_conditional_oracle(&prod, &sb, 0.1).unwrap().value.bits();
    assert!(lower >= h_min_unconditional(&ra).unwrap().bits() - 1e-9);
    assert!(lower <= oracle + 1e-3);
}

#[test]
fn conditional_upper_bound_properties() {
    let mut rng = rng_from_seed(66);
    for _ in 0..30 {
        let rho = random_bipartite(&mut rng, 2, 2).unwrap();
        let sigma = rho.marginal(Subsystem::B).unwrap();
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.05, 0.1, 0.3] {
            let r = smooth_hmax_conditional_upper(&rho, &sigma, eps).unwrap();
            let w = BipartiteState::new(r.witness.clone().unwrap(), 2, 2).unwrap();
            assert!(ball_contains(w.op(), rho.op(), eps).unwrap());
            assert!((h_max(&w, &sigma).unwrap().bits() - r.value.bits()).abs() < 1e-9);
            assert!(r.value.bits() <= prev + 1e-12);
            prev = r.value.bits();
        }
        let r0 = smooth_hmax_conditional_upper(&rho, &sigma, 0.0).unwrap();
        assert!((r0.value.bits() - h_max(&rho, &sigma).unwrap().bits()).abs() < 1e-9);
    }
}

#[test]
fn projection_bounds_on_random_states() {
    let mut rng = rng_from_seed(700);
    for trial in 0..500 {
        let dim = 2 + trial % 7;
        let rho = random_density(&mut rng, dim).unwrap();
        let gamma = -1.0 + 5.0 * ((trial * 37) % 100) as f64 / 100.0;
        let low = projection_smooth_low(&rho, gamma).unwrap();
        let top = low.rho_tilde.op().max_eigenvalue().unwrap();
        assert!(top < (-gamma).exp2() || top.abs() < 1e-12);
        assert!(ball_contains(low.rho_tilde.op(), rho.op(), low.epsilon()).unwrap());
        let high = projection_smooth_high(&rho, gamma).unwrap();
        let rank = h_max_unconditional(&high.rho_tilde).unwrap().bits().exp2();
        assert!(high.rho_tilde.trace() < 1e-12 || rank <= gamma.exp2() + 1e-9);
        assert!(high.projector.rank() as f64 <= gamma.exp2() + 1e-9);
        assert!(ball_contains(high.rho_tilde.op(), rho.op(), high.epsilon()).unwrap());
    }
}
