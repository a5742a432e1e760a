use smoothspec::random::{random_bipartite, random_density, random_unitary, rng_from_seed};
use smoothspec::*;

#[test]
fn order_chain_on_random_states() {
    let mut rng = rng_from_seed(2024);
    for trial in 0..1000 {
        let dim = 1 + trial % 16;
        let rho = random_density(&mut rng, dim).unwrap();
        let hmin = h_min_unconditional(&rho).unwrap().bits();
        let s = von_neumann_entropy(&rho).unwrap().bits();
        let hmax = h_max_unconditional(&rho).unwrap().bits();
        assert!(hmin >= -1e-9 && hmin <= s + 1e-9 && s <= hmax + 1e-9, "trial {trial}: {hmin} {s} {hmax}");
        assert!(s <= (dim as f64).log2() + 1e-9);
    }
}

#[test]
fn unitary_invariance() {
    let mut rng = rng_from_seed(77);
    for _ in 0..50 {
        let rho = random_bipartite(&mut rng, 2, 3).unwrap();
        let sigma = random_density(&mut rng, 3).unwrap();
        let ua = random_unitary(&mut rng, 2).unwrap();
        let ub = random_unitary(&mut rng, 3).unwrap();
        let u = ua.kronecker(&ub);
        let rotated =
            BipartiteState::new(QuantumState::new(rho.op().conjugate_by(&u).unwrap()).unwrap(), 2, 3).unwrap();
        let sigma_rot = QuantumState::new(sigma.op().conjugate_by(&ub).unwrap()).unwrap();
        let d_min = h_min(&rho, &sigma).unwrap().bits() - h_min(&rotated, &sigma_rot).unwrap().bits();
        let d_max = h_max(&rho, &sigma).unwrap().bits() - h_max(&rotated, &sigma_rot).unwrap().bits();
        assert!(d_min.abs() < 1e-8 && d_max.abs() < 1e-8);
        let s0 = von_neumann_entropy(rho.state()).unwrap().bits();
        assert!((s0 - von_neumann_entropy(rotated.state()).unwrap().bits()).abs() < 1e-8);
    }
}

#[test]
fn trivial_b_matches_unconditional() {
    let mut rng = rng_from_seed(3);
    let one = QuantumState::maximally_mixed(1);
    for dim in 1..=8 {
        let rho = random_density(&mut rng, dim).unwrap();
        let trivial = BipartiteState::trivial_b(rho.clone());
        assert!((h_min(&trivial, &one).unwrap().bits() - h_min_unconditional(&rho).unwrap().bits()).abs() < 1e-9);
        assert!((h_max(&trivial, &one).unwrap().bits() - h_max_unconditional(&rho).unwrap().bits()).abs() < 1e-9);
        let top = spectral_decompose(rho.op()).unwrap()[0].value;
        assert!((h_min_unconditional(&rho).unwrap().bits() + top.log2()).abs() < 1e-12);
    }
}

#[test]
fn product_max_entropy_is_log_rank() {
    let ra = QuantumState::from_diagonal(&[0.5, 0.5, 0.0]).unwrap();
    let sb = random_density(&mut rng_from_seed(8), 2).unwrap();
    let prod = BipartiteState::new(ra.kron(&sb).unwrap(), 3, 2).unwrap();
    assert!((h_max(&prod, &sb).unwrap().bits() - 1.0).abs() < 1e-9);
    assert!((h_min(&prod, &sb).unwrap().bits() - 1.0).abs() < 1e-9);
}
