use smoothspec::entropy::shannon_entropy;
use smoothspec::random::{random_bipartite, random_density, random_positive, rng_from_seed};
use smoothspec::rates::*;
use smoothspec::spectrum::rate_scan;
use smoothspec::*;

const S_QUARTER: f64 = 0.811_278_124_459_132_8;

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step).round() as usize;
    (0..=count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect()
}

#[test]
fn binary_entropy_constant() {
    assert!((shannon_entropy(&[0.75, 0.25]) - S_QUARTER).abs() < 1e-12);
}

#[test]
fn monotone_functionals() {
    let mut rng = rng_from_seed(41);
    for _ in 0..50 {
        let rho = random_density(&mut rng, 4).unwrap();
        let omega = random_positive(&mut rng, 4).unwrap();
        let bip = random_bipartite(&mut rng, 2, 2).unwrap();
        let mut prev_alt = f64::INFINITY;
        let mut prev_cond = f64::NEG_INFINITY;
        for i in 0..60 {
            let x = -3.0 + 0.1 * i as f64;
            let alt = div_trace_alt(&rho, &omega, x).unwrap();
            let cond = conditional_trace(&bip, x).unwrap();
            assert!(alt <= prev_alt + 1e-9 && cond >= prev_cond - 1e-9);
            assert!((-1e-9..=1.0 + 1e-9).contains(&alt) && (-1e-9..=1.0 + 1e-9).contains(&cond));
            prev_alt = alt;
            prev_cond = cond;
        }
    }
}

#[test]
fn conditional_threshold_weight() {
    let mut rng = rng_from_seed(43);
    for trial in 0..300 {
        let bip = random_bipartite(&mut rng, 2, 1 + trial % 3).unwrap();
        let gamma = -2.0 + 4.0 * (trial as f64 / 300.0);
        let (_, weight) = conditional_projector_traces(&bip, gamma).unwrap();
        assert!(weight <= gamma.exp2() + 1e-9);
    }
}

#[test]
fn divergence_chains() {
    let mut rng = rng_from_seed(45);
    for trial in 0..500 {
        let dim = 1 + trial % 6;
        let rho = random_density(&mut rng, dim).unwrap();
        let omega = random_positive(&mut rng, dim).unwrap();
        let alpha = -3.0 + 6.0 * ((trial * 7919) % 1000) as f64 / 1000.0;
        let gamma = alpha - 3.0 * ((trial * 104_729) % 1000) as f64 / 1000.0;
        let check = proposition_chain_check(&rho, &omega, alpha, gamma).unwrap();
        assert!(check.holds(1e-9), "{check:?}");
    }
}

#[test]
fn von_neumann_bracketing_at_large_n() {
    let g = grid(0.6, 1.0, 0.01);
    let p = rate_profile(&IidSpectral { base: vec![0.75, 0.25] }, &[10_000], &g, 0.01, 0.99).unwrap();
    assert!(p.lower_bracket - 0.05 <= S_QUARTER && S_QUARTER <= p.upper_bracket + 0.05);
    assert!((p.lower_bracket - S_QUARTER).abs() < 0.05 && (p.upper_bracket - S_QUARTER).abs() < 0.05);
}

#[test]
fn divergence_definitions_agree() {
    let g = grid(0.6, 1.0, 0.01);
    let primary =
        IidDivergence { base: vec![0.75, 0.25], kind: DivergenceKind::Primary, convention: Convention::Entropy };
    let alt = IidDivergence { base: vec![0.75, 0.25], kind: DivergenceKind::Alt, convention: Convention::Entropy };
    let a = rate_profile(&primary, &[1000], &g, 0.01, 0.99).unwrap();
    let b = rate_profile(&alt, &[1000], &g, 0.01, 0.99).unwrap();
    assert!((a.lower_bracket - b.lower_bracket).abs() <= 0.01 + 1e-9);
    assert!((a.upper_bracket - b.upper_bracket).abs() <= 0.01 + 1e-9);

    // the same brackets in the divergence sign convention, mirrored
    let neg: Vec<f64> = g.iter().rev().map(|x| -x).collect();
    let d = IidDivergence { base: vec![0.75, 0.25], kind: DivergenceKind::Alt, convention: Convention::Divergence };
    let c = rate_profile(&d, &[1000], &neg, 0.01, 0.99).unwrap();
    assert!((c.upper_bracket + b.lower_bracket).abs() < 1e-9);
    assert!((c.lower_bracket + b.upper_bracket).abs() < 1e-9);
}

#[test]
fn smooth_rates_converge() {
    let rows = rate_scan(&[0.75, 0.25], &[100, 1000, 10_000], &[0.01]).unwrap();
    let gaps_min: Vec<f64> = rows.iter().map(|r| (r.hmin_rate - S_QUARTER).abs()).collect();
    let gaps_max: Vec<f64> = rows.iter().map(|r| (r.hmax_rate - S_QUARTER).abs()).collect();
    assert!(gaps_min.windows(2).all(|w| w[1] < w[0]) && gaps_min[2] <= 0.05);
    assert!(gaps_max.windows(2).all(|w| w[1] < w[0]) && gaps_max[2] <= 0.05);
    assert!(rows.iter().all(|r| r.hmin_rate <= S_QUARTER && r.hmax_rate >= S_QUARTER));

    let rows = rate_scan(&[0.9, 0.1], &[10_000], &[0.001]).unwrap();
    assert!((rows[0].hmin_rate - 0.468_996).abs() <= 0.05);
}

#[test]
fn compress_bound_trend() {
    let top = |n: u32| {
        let spec = iid_spectrum(&[0.75, 0.25], n).unwrap();
        best_projector_trace_spectrum(&spec, (0.6 * n as f64).exp2().floor()).unwrap()
    };
    let (t10, t20) = (top(10), top(20));
    assert!(t20 <= 0.9 && t20 < t10, "{t10} {t20}");
    let dense =
        BipartiteState::trivial_b(QuantumState::from_diagonal(&[0.75, 0.25]).unwrap()).tensor_power(10).unwrap();
    assert!((best_projector_trace(dense.state(), 64).unwrap() - t10).abs() < 1e-9);
}

#[test]
fn dense_conditional_family_on_bell() {
    let s = 0.5f64.sqrt();
    let v = smoothspec::operator::CVector::from_vec(vec![
        smoothspec::operator::c(s),
        smoothspec::operator::c(0.0),
        smoothspec::operator::c(0.0),
        smoothspec::operator::c(s),
    ]);
    let bell = BipartiteState::new(QuantumState::pure(&v).unwrap(), 2, 2).unwrap();
    let g = grid(-1.5, -0.5, 0.05);
    let p = rate_profile(&DenseConditional { rho_ab: bell }, &[1, 2, 3], &g, 0.01, 0.99).unwrap();
    assert!(p.lower_bracket < -1.0 + 1e-9 && p.upper_bracket >= -1.0 - 1e-9 && p.upper_bracket <= -1.0 + 0.05 + 1e-9);
}
