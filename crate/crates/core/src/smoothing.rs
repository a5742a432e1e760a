//! Smooth entropies over the trace-distance ball
//! `B^eps(rho) = {rho_bar >= 0 : ||rho_bar - rho||_1 <= eps, Tr rho_bar <= Tr rho}`.
//!
//! Exact values are available for commuting (classical) problems. For the
//! conditional min-entropy the crate provides the additive-bound and
//! projector-bound constructions, which certify lower bounds, and a
//! projection smoother that certifies upper bounds on `H_max^eps`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::entropy::{h_max_operator, h_min, h_min_operator, lift_sigma, pinv_sqrt, EntropyValue};
use crate::error::{Error, Result};
use crate::operator::{
    purify, spectral_projector, trace_distance, BipartiteState, CMatrix, HermitianOperator, Projector, QuantumState,
    Relation, TOL,
};
use crate::spectrum::{log2_add, log2_sub, Atom, CompensatedSum, WeightedSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Method {
    ExactClassical,
    Projection,
    AdditiveLemma,
    ProjectorLemma,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactClassical => "exactClassical",
            Method::Projection => "projection",
            Method::AdditiveLemma => "additiveLemma",
            Method::ProjectorLemma => "projectorLemma",
            Method::Oracle => "oracle",
        })
    }
}

/// Internal checks recorded by the additive-bound construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCertificate {
    /// The exponent `lambda` the construction certifies.
    pub lambda_bits: f64,
    /// `sqrt(8 Tr Delta)`.
    pub distance_bound: f64,
    /// Largest eigenvalue of `(T + T^dagger) / 2`.
    pub tbar_max_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct SmoothingResult {
    pub value: EntropyValue,
    pub epsilon: f64,
    /// The smoothed operator, for dense inputs.
    pub witness: Option<QuantumState>,
    /// The smoothed spectrum, for classical inputs.
    pub spectrum_witness: Option<WeightedSpectrum>,
    pub method: Method,
    /// `||witness - rho||_1`.
    pub distance: f64,
    pub certificate: Option<LemmaCertificate>,
}

/// `rho_bar >= 0`, `||rho_bar - rho||_1 <= eps` and `Tr rho_bar <= Tr rho`,
/// with the usual tolerances.
pub fn ball_contains(rho_bar: &HermitianOperator, rho: &HermitianOperator, epsilon: f64) -> Result<bool> {
    let distance = trace_distance(rho_bar, rho)?;
    Ok(rho_bar.min_eigenvalue()? >= -TOL.entry
        && distance <= epsilon + TOL.assertion
        && rho_bar.trace() <= rho.trace() + TOL.assertion)
}

fn check_epsilon(epsilon: f64, mass: f64) -> Result<()> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be non-negative, got {epsilon}")));
    }
    if epsilon >= mass {
        return Err(Error::EpsilonTooLarge { epsilon, mass });
    }
    Ok(())
}

/// Cap found by [`hmin_cap`]: `log2 lambda` and the mass actually removed.
struct Cap {
    log2_lambda: f64,
    /// Number of leading atoms that were capped.
    capped: usize,
    removed: f64,
}

/// Smallest `lambda` with `sum_i m_i max(p_i - lambda, 0) <= eps`.
fn hmin_cap(p: &WeightedSpectrum, epsilon: f64) -> Cap {
    let atoms = p.atoms();
    let mut mass = CompensatedSum::default();
    let mut log2_count = f64::NEG_INFINITY;
    for (k, a) in atoms.iter().enumerate() {
        mass.add(a.mass());
        log2_count = log2_add(log2_count, a.log2_multiplicity);
        let excess = mass.value() - epsilon;
        if excess <= 0.0 {
            continue;
        }
        let log2_lambda = (excess.log2() - log2_count).min(a.log2_value);
        let next = atoms.get(k + 1).map_or(f64::NEG_INFINITY, |b| b.log2_value);
        if log2_lambda >= next {
            let mut removed = CompensatedSum::default();
            for b in &atoms[..=k] {
                removed.add(b.mass() - (b.log2_multiplicity + log2_lambda).exp2());
            }
            return Cap { log2_lambda, capped: k + 1, removed: removed.value().max(0.0) };
        }
    }
    unreachable!("epsilon below total mass always admits a positive cap")
}

/// Exact `H_min^eps` of a diagonal state: cap the largest atoms at `lambda`.
pub fn smooth_hmin_classical(p: &WeightedSpectrum, epsilon: f64) -> Result<SmoothingResult> {
    check_epsilon(epsilon, p.total_mass())?;
    let cap = hmin_cap(p, epsilon);
    let mut atoms: Vec<Atom> = p.atoms()[cap.capped..].to_vec();
    let log2_capped =
        p.atoms()[..cap.capped].iter().fold(f64::NEG_INFINITY, |acc, a| log2_add(acc, a.log2_multiplicity));
    atoms.push(Atom { log2_value: cap.log2_lambda, log2_multiplicity: log2_capped });
    Ok(SmoothingResult {
        value: EntropyValue(-cap.log2_lambda),
        epsilon,
        witness: None,
        spectrum_witness: Some(WeightedSpectrum::from_log_atoms(atoms, p.log_domain())?),
        method: Method::ExactClassical,
        distance: cap.removed,
        certificate: None,
    })
}

struct Truncation {
    /// Atoms kept in full, counted from the largest.
    full: usize,
    /// `log2` of the surviving part of the partially deleted atom.
    log2_partial: f64,
    log2_kept: f64,
    removed: f64,
}

/// Deletes the smallest eigenvalues while the deleted mass stays within `eps`.
fn hmax_truncation(p: &WeightedSpectrum, epsilon: f64) -> Truncation {
    let atoms = p.atoms();
    let slack = epsilon * (1.0 + 1e-12);
    let mut remaining = slack;
    let mut removed = CompensatedSum::default();
    let mut cut = atoms.len();
    let mut log2_partial = f64::NEG_INFINITY;
    for (i, a) in atoms.iter().enumerate().rev() {
        let mass = a.mass();
        if mass <= remaining {
            remaining -= mass;
            removed.add(mass);
            cut = i;
            continue;
        }
        // partial deletion of d < multiplicity copies
        let log2_d = if remaining > 0.0 { remaining.log2() - a.log2_value } else { f64::NEG_INFINITY };
        let log2_d = if log2_d < 53.0 {
            let d = log2_d.exp2().floor();
            if d >= 1.0 {
                d.log2()
            } else {
                f64::NEG_INFINITY
            }
        } else {
            log2_d
        };
        if log2_d > f64::NEG_INFINITY {
            removed.add((log2_d + a.log2_value).exp2());
            log2_partial = log2_sub(a.log2_multiplicity, log2_d);
            cut = i + 1;
        } else {
            cut = i + 1;
            log2_partial = f64::NEG_INFINITY;
        }
        break;
    }
    // atoms before `cut` are kept; when partially deleting, atom cut-1 is the partial one
    let (full, partial) =
        if log2_partial > f64::NEG_INFINITY { (cut - 1, log2_partial) } else { (cut, f64::NEG_INFINITY) };
    let log2_kept = atoms[..full].iter().fold(partial, |acc, a| log2_add(acc, a.log2_multiplicity));
    Truncation { full, log2_partial: partial, log2_kept, removed: removed.value() }
}

/// Exact `H_max^eps` of a diagonal state: delete the smallest eigenvalues.
pub fn smooth_hmax_classical(p: &WeightedSpectrum, epsilon: f64) -> Result<SmoothingResult> {
    check_epsilon(epsilon, p.total_mass())?;
    let t = hmax_truncation(p, epsilon);
    let mut atoms: Vec<Atom> = p.atoms()[..t.full].to_vec();
    if t.log2_partial > f64::NEG_INFINITY {
        atoms.push(Atom { log2_value: p.atoms()[t.full].log2_value, log2_multiplicity: t.log2_partial });
    }
    Ok(SmoothingResult {
        value: EntropyValue(t.log2_kept),
        epsilon,
        witness: None,
        spectrum_witness: Some(WeightedSpectrum::from_log_atoms(atoms, p.log_domain())?),
        method: Method::ExactClassical,
        distance: t.removed,
        certificate: None,
    })
}

fn require_psd(rho: &QuantumState) -> Result<()> {
    let min = rho.op().min_eigenvalue()?;
    if min < -TOL.entry {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

/// `H_min^eps` of a state through its spectrum; the witness caps the
/// eigenvalues in the eigenbasis of `rho`.
pub fn smooth_hmin_unconditional(rho: &QuantumState, epsilon: f64) -> Result<SmoothingResult> {
    require_psd(rho)?;
    let eig = rho.op().eigh()?;
    let spec = WeightedSpectrum::from_values(&eig.values.iter().map(|v| v.max(0.0)).collect::<Vec<_>>())?;
    let mut result = smooth_hmin_classical(&spec, epsilon)?;
    let lambda = (-result.value.bits()).exp2();
    let witness = QuantumState::new(eig.rebuild(|_, v| v.clamp(0.0, lambda)))?;
    result.distance = trace_distance(witness.op(), rho.op())?;
    result.witness = Some(witness);
    Ok(result)
}

/// `H_max^eps` of a state through its spectrum; the witness drops the
/// smallest eigenvectors.
pub fn smooth_hmax_unconditional(rho: &QuantumState, epsilon: f64) -> Result<SmoothingResult> {
    require_psd(rho)?;
    let eig = rho.op().eigh()?;
    let spec = WeightedSpectrum::from_eigenvalues(&eig.values)?;
    let mut result = smooth_hmax_classical(&spec, epsilon)?;
    let kept = result.value.bits().exp2().round() as usize;
    let witness = QuantumState::new(eig.rebuild(|i, v| if i < kept { v.max(0.0) } else { 0.0 }))?;
    result.distance = trace_distance(witness.op(), rho.op())?;
    result.witness = Some(witness);
    Ok(result)
}

/// Output of the projection smoothers.
#[derive(Debug, Clone)]
pub struct ProjectionSmoothing {
    pub rho_tilde: QuantumState,
    /// `1 - Tr[P rho]`.
    pub delta: f64,
    pub projector: Projector,
}

impl ProjectionSmoothing {
    /// The radius `2 sqrt(delta)` of the ball the smoothed state lies in.
    pub fn epsilon(&self) -> f64 {
        2.0 * self.delta.max(0.0).sqrt()
    }
}

fn project(rho: &QuantumState, gamma_bits: f64, rel: Relation) -> Result<ProjectionSmoothing> {
    rho.require_normalized()?;
    let threshold = HermitianOperator::identity(rho.dim()).scale((-gamma_bits).exp2());
    let projector = spectral_projector(rho.op(), &threshold, rel)?;
    let rho_tilde = QuantumState::new(projector.sandwich(rho.op())?)?;
    let delta = (1.0 - projector.op().trace_product(rho.op())?).max(0.0);
    Ok(ProjectionSmoothing { rho_tilde, delta, projector })
}

/// `Q rho Q` with `Q = {rho < 2^{-gamma} I}`.
pub fn projection_smooth_low(rho: &QuantumState, gamma_bits: f64) -> Result<ProjectionSmoothing> {
    project(rho, gamma_bits, Relation::Lt)
}

/// `P rho P` with `P = {rho >= 2^{-gamma} I}`.
pub fn projection_smooth_high(rho: &QuantumState, gamma_bits: f64) -> Result<ProjectionSmoothing> {
    project(rho, gamma_bits, Relation::Ge)
}

fn check_pair(rho_ab: &BipartiteState, sigma_b: &QuantumState) -> Result<()> {
    if sigma_b.dim() != rho_ab.dim_b() {
        return Err(Error::DimensionMismatch { expected: rho_ab.dim_b(), found: sigma_b.dim() });
    }
    sigma_b.require_normalized()
}

/// Builds `rho' = Tr_R[(T (x) I_R) |Psi><Psi| (T (x) I_R)^dagger]` with
/// `T = alpha^{1/2} beta^{-1/2}`, `alpha = 2^{-lambda} I_A (x) sigma_B`,
/// `beta = alpha + Delta`, from a purification `|Psi>` of `rho_AB`.
///
/// Requires `rho_AB <= alpha + Delta`. The result lies within
/// `sqrt(8 Tr Delta)` of `rho_AB` and satisfies `rho' <= alpha`.
pub fn additive_lemma_smooth(
    rho_ab: &BipartiteState,
    sigma_b: &QuantumState,
    lambda_bits: f64,
    delta_ab: &HermitianOperator,
) -> Result<SmoothingResult> {
    check_pair(rho_ab, sigma_b)?;
    let rho = rho_ab.op();
    if delta_ab.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: delta_ab.dim() });
    }
    let delta_min = delta_ab.min_eigenvalue()?;
    if delta_min < -TOL.entry {
        return Err(Error::PreconditionViolated(format!("Delta has eigenvalue {delta_min:e}")));
    }
    let alpha = lift_sigma(rho_ab, sigma_b).scale((-lambda_bits).exp2());
    let beta = alpha.add(delta_ab)?;
    let slack = beta.sub(rho)?.min_eigenvalue()?;
    if slack < -TOL.assertion {
        return Err(Error::PreconditionViolated(format!("rho exceeds 2^-lambda I (x) sigma + Delta by {:e}", -slack)));
    }

    let alpha_sqrt = alpha.apply(|v| v.max(0.0).sqrt())?;
    let beta_inv_sqrt = pinv_sqrt(&beta)?;
    let t = alpha_sqrt.matrix() * beta_inv_sqrt.matrix();
    let tbar = HermitianOperator::from_matrix_unchecked(t.clone());
    let tbar_max = tbar.max_eigenvalue()?;
    if tbar_max > 1.0 + TOL.assertion {
        return Err(Error::ConstructionFailure(format!("(T + T^dagger)/2 has eigenvalue {tbar_max}")));
    }

    let d = rho.dim();
    let psi = purify(rho_ab.state())?;
    // rows: system index, columns: reference index
    let psi_mat = CMatrix::from_fn(d, d, |i, r| psi[i * d + r]);
    let applied: DMatrix<_> = &t * psi_mat;
    let reduced = HermitianOperator::from_matrix_unchecked(&applied * applied.adjoint());
    let witness = QuantumState::new(reduced)?;

    let lifted = lift_sigma(rho_ab, sigma_b);
    let value = h_min_operator(witness.op(), &lifted)?;
    let distance = trace_distance(witness.op(), rho)?;
    let distance_bound = (8.0 * delta_ab.trace().max(0.0)).sqrt();
    Ok(SmoothingResult {
        value,
        epsilon: distance_bound,
        witness: Some(witness),
        spectrum_witness: None,
        method: Method::AdditiveLemma,
        distance,
        certificate: Some(LemmaCertificate { lambda_bits, distance_bound, tbar_max_eigenvalue: tbar_max }),
    })
}

/// `Tr[{rho_AB > 2^{-lambda} I (x) sigma_B} rho_AB]`.
pub fn excess_weight(rho_ab: &BipartiteState, sigma_b: &QuantumState, lambda_bits: f64) -> Result<f64> {
    let k = lift_sigma(rho_ab, sigma_b).scale((-lambda_bits).exp2());
    let p = spectral_projector(rho_ab.op(), &k, Relation::Gt)?;
    p.op().trace_product(rho_ab.op())
}

/// Additive-bound smoothing with `Delta` the positive part of
/// `rho_AB - 2^{-lambda} I (x) sigma_B`; the reported epsilon is
/// `sqrt(8 Tr[{rho_AB > 2^{-lambda} I (x) sigma_B} rho_AB])`.
pub fn projector_lemma_smooth(
    rho_ab: &BipartiteState,
    sigma_b: &QuantumState,
    lambda_bits: f64,
) -> Result<SmoothingResult> {
    check_pair(rho_ab, sigma_b)?;
    let k = lift_sigma(rho_ab, sigma_b).scale((-lambda_bits).exp2());
    let diff = rho_ab.op().sub(&k)?;
    let (positive, _) = diff.jordan_parts()?;
    let weight = excess_weight(rho_ab, sigma_b, lambda_bits)?;
    let mut result = additive_lemma_smooth(rho_ab, sigma_b, lambda_bits, &positive)?;
    result.epsilon = (8.0 * weight.max(0.0)).sqrt();
    result.method = Method::ProjectorLemma;
    Ok(result)
}

/// Bisection resolution of [`smooth_hmin_conditional_lower`], in bits.
pub const LOWER_BOUND_RESOLUTION: f64 = 1e-4;

/// Certified lower bound on `H_min^eps(rho_AB | sigma_B)`: the largest
/// `lambda` (to within `1e-4` bits) whose projector-bound epsilon is at most
/// `eps`. The value is `H_min` of the projector-bound witness, which is at
/// least that `lambda`.
pub fn smooth_hmin_conditional_lower(
    rho_ab: &BipartiteState,
    sigma_b: &QuantumState,
    epsilon: f64,
) -> Result<SmoothingResult> {
    check_pair(rho_ab, sigma_b)?;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let budget = epsilon * epsilon / 8.0;
    let feasible = |lambda: f64| -> Result<bool> { Ok(excess_weight(rho_ab, sigma_b, lambda)? <= budget) };

    let h0 = h_min(rho_ab, sigma_b)?.bits();
    let mut lo = if h0.is_finite() { h0 } else { -64.0 };
    if !feasible(lo)? {
        return Ok(SmoothingResult {
            value: EntropyValue(f64::NEG_INFINITY),
            epsilon,
            witness: None,
            spectrum_witness: None,
            method: Method::ProjectorLemma,
            distance: 0.0,
            certificate: None,
        });
    }
    let start = lo;
    let mut step = 1.0;
    let mut hi = lo + step;
    while feasible(hi)? {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if hi - start > 1000.0 {
            return Err(Error::EpsilonTooLarge { epsilon, mass: rho_ab.state().trace() });
        }
    }
    while hi - lo > LOWER_BOUND_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut result = projector_lemma_smooth(rho_ab, sigma_b, lo)?;
    result.epsilon = epsilon;
    Ok(result)
}

/// Default `gamma` grid step of [`smooth_hmax_conditional_upper`].
pub const UPPER_BOUND_GRID_STEP: f64 = 1e-3;

/// Upper bound on `H_max^eps(rho_AB | sigma_B)` by projection smoothing.
pub fn smooth_hmax_conditional_upper(
    rho_ab: &BipartiteState,
    sigma_b: &QuantumState,
    epsilon: f64,
) -> Result<SmoothingResult> {
    smooth_hmax_conditional_upper_with_step(rho_ab, sigma_b, epsilon, UPPER_BOUND_GRID_STEP)
}

/// Sweeps `gamma` over a grid (plus the points where `P_gamma` changes rank),
/// smooths with `P_gamma = {rho_AB >= 2^{-gamma} I (x) sigma_B}` and keeps the
/// smallest `log2 Tr((I (x) sigma_B) pi)` among candidates with
/// `||P rho P - rho||_1 <= eps`, `pi` the support of `P rho P`.
pub fn smooth_hmax_conditional_upper_with_step(
    rho_ab: &BipartiteState,
    sigma_b: &QuantumState,
    epsilon: f64,
    step: f64,
) -> Result<SmoothingResult> {
    check_pair(rho_ab, sigma_b)?;
    rho_ab.state().require_normalized()?;
    if !(epsilon >= 0.0) || !(step > 0.0) {
        return Err(Error::InvalidArgument("epsilon must be >= 0 and step > 0".into()));
    }
    let rho = rho_ab.op();
    let k = lift_sigma(rho_ab, sigma_b);
    let conj = rho.conjugate_by(pinv_sqrt(&k)?.matrix())?;
    let mu: Vec<f64> = conj.eigenvalues()?.into_iter().filter(|&v| v > 0.0).collect();

    let mut gammas: Vec<f64> = mu.iter().map(|m| -m.log2()).collect();
    if let (Some(&g_lo), Some(&g_hi)) = (gammas.first(), gammas.last()) {
        let g_hi = g_hi.min(g_lo + 60.0);
        let count = ((g_hi - g_lo) / step).ceil() as usize + 1;
        gammas.extend((0..=count).map(|i| g_lo - step + i as f64 * step));
    }
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();

    let mut best: Option<(f64, f64, QuantumState, f64)> = None;
    let mut consider = |gamma: f64, p: &HermitianOperator| -> Result<()> {
        let projected = rho.conjugate_by(p.matrix())?;
        let distance = trace_distance(&projected, rho)?;
        if distance > epsilon + TOL.assertion {
            return Ok(());
        }
        let value = h_max_operator(&projected, &k)?.bits();
        if best.as_ref().is_none_or(|b| value < b.0 - 1e-12) {
            best = Some((value, gamma, QuantumState::new(projected)?, distance));
        }
        Ok(())
    };
    for &gamma in &gammas {
        let threshold = k.scale((-gamma).exp2());
        let p = spectral_projector(rho, &threshold, Relation::Ge)?;
        consider(gamma, p.op())?;
    }
    // gamma -> +inf: P = I
    consider(f64::INFINITY, &HermitianOperator::identity(rho.dim()))?;

    let (value, gamma, witness, distance) = best.ok_or(Error::NoFeasibleGamma)?;
    if value > gamma + TOL.assertion {
        return Err(Error::ConstructionFailure(format!("value {value} exceeds the rank cap {gamma}")));
    }
    Ok(SmoothingResult {
        value: EntropyValue(value),
        epsilon,
        witness: Some(witness),
        spectrum_witness: None,
        method: Method::Projection,
        distance,
        certificate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{h_max, h_min_unconditional};
    use crate::operator::{c, CVector, Subsystem};

    fn spec(v: &[f64]) -> WeightedSpectrum {
        WeightedSpectrum::from_values(v).unwrap()
    }

    fn bell() -> BipartiteState {
        let s = 0.5f64.sqrt();
        let v = CVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]);
        BipartiteState::new(QuantumState::pure(&v).unwrap(), 2, 2).unwrap()
    }

    #[test]
    fn ball_examples() {
        let rho = HermitianOperator::from_real_diagonal(&[0.6, 0.4]);
        assert!(ball_contains(&rho, &rho, 0.0).unwrap());
        assert!(ball_contains(&rho.scale(0.9), &rho, 0.1).unwrap());
        let bumped = HermitianOperator::from_real_diagonal(&[0.6, 0.4, 0.1]);
        let rho3 = HermitianOperator::from_real_diagonal(&[0.6, 0.4, 0.0]);
        assert!(!ball_contains(&bumped, &rho3, 0.2).unwrap());
    }

    #[test]
    fn classical_hmin_examples() {
        let r = smooth_hmin_classical(&spec(&[0.75, 0.25]), 0.0).unwrap();
        assert!((r.value.bits() - 0.415037).abs() < 1e-6);
        let r = smooth_hmin_classical(&spec(&[0.75, 0.25]), 0.1).unwrap();
        assert!((r.value.bits() + 0.65f64.log2()).abs() < 1e-12);
        assert!((r.distance - 0.1).abs() < 1e-12);
        let r = smooth_hmin_classical(&spec(&[0.25; 4]), 0.1).unwrap();
        assert!((r.value.bits() + 0.225f64.log2()).abs() < 1e-12);
        assert!(matches!(smooth_hmin_classical(&spec(&[0.75, 0.25]), 1.0), Err(Error::EpsilonTooLarge { .. })));
    }

    #[test]
    fn classical_hmax_examples() {
        let p = spec(&[0.7, 0.2, 0.1]);
        assert!((smooth_hmax_classical(&p, 0.1).unwrap().value.bits() - 1.0).abs() < 1e-12);
        assert!((smooth_hmax_classical(&p, 0.05).unwrap().value.bits() - 3f64.log2()).abs() < 1e-12);
        assert!((smooth_hmax_classical(&p, 0.0).unwrap().value.bits() - 3f64.log2()).abs() < 1e-12);
        // partial deletion inside a degenerate class
        let flat = WeightedSpectrum::from_atoms(&[(0.125, 8.0)]).unwrap();
        let r = smooth_hmax_classical(&flat, 0.3).unwrap();
        assert!((r.value.bits() - 6f64.log2()).abs() < 1e-12);
        assert!((r.distance - 0.25).abs() < 1e-12);
    }

    #[test]
    fn unconditional_examples() {
        let pure = QuantumState::from_diagonal(&[1.0, 0.0]).unwrap();
        let r = smooth_hmin_unconditional(&pure, 0.2).unwrap();
        assert!((r.value.bits() + 0.8f64.log2()).abs() < 1e-12);
        let m = QuantumState::maximally_mixed(4);
        assert!((smooth_hmin_unconditional(&m, 0.0).unwrap().value.bits() - 2.0).abs() < 1e-12);
        assert!((smooth_hmax_unconditional(&m, 0.0).unwrap().value.bits() - 2.0).abs() < 1e-12);
        let q = QuantumState::from_diagonal(&[0.7, 0.2, 0.1]).unwrap();
        let r = smooth_hmax_unconditional(&q, 0.1).unwrap();
        let w = r.witness.unwrap();
        assert!(ball_contains(w.op(), q.op(), 0.1).unwrap());
        assert!((crate::entropy::h_max_unconditional(&w).unwrap().bits() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let rho = QuantumState::from_diagonal(&[0.75, 0.25]).unwrap();
        let low = projection_smooth_low(&rho, 1.0).unwrap();
        assert!(low.rho_tilde.op().max_abs_diff(&HermitianOperator::from_real_diagonal(&[0.0, 0.25])) < 1e-12);
        assert!((low.delta - 0.75).abs() < 1e-12);
        let high = projection_smooth_high(&rho, 1.0).unwrap();
        assert!(high.rho_tilde.op().max_abs_diff(&HermitianOperator::from_real_diagonal(&[0.75, 0.0])) < 1e-12);
        assert!((high.delta - 0.25).abs() < 1e-12);
        // threshold 2^-0.3 above the largest eigenvalue keeps everything
        let all = projection_smooth_low(&rho, 0.3).unwrap();
        assert!(all.delta < 1e-12);
        assert!(all.rho_tilde.op().max_abs_diff(rho.op()) < 1e-12);
        let none = projection_smooth_low(&rho, 200.0).unwrap();
        assert!((none.delta - 1.0).abs() < 1e-12);
        let flat = QuantumState::maximally_mixed(2);
        assert!((projection_smooth_high(&flat, 0.0).unwrap().delta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn additive_lemma_trivial_cases() {
        let rho = BipartiteState::new(QuantumState::maximally_mixed(4), 2, 2).unwrap();
        let sigma = QuantumState::maximally_mixed(2);
        let r = additive_lemma_smooth(&rho, &sigma, 1.0, &HermitianOperator::zeros(4)).unwrap();
        assert!(r.distance < 1e-12);
        assert!((r.value.bits() - 1.0).abs() < 1e-9);

        let r = additive_lemma_smooth(&bell(), &sigma, -1.0, &HermitianOperator::zeros(4)).unwrap();
        assert!(r.distance < 1e-9);
        assert!(r.value.bits() >= -1.0 - 1e-9);
        assert!(matches!(
            additive_lemma_smooth(&bell(), &sigma, 0.0, &HermitianOperator::zeros(4)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn projector_lemma_examples() {
        let sigma = QuantumState::maximally_mixed(2);
        let r = projector_lemma_smooth(&bell(), &sigma, 0.0).unwrap();
        assert!((r.epsilon - 8f64.sqrt()).abs() < 1e-9);
        assert!(r.value.bits() >= -1e-6);
        let r = projector_lemma_smooth(&bell(), &sigma, -1.0).unwrap();
        assert!(r.epsilon < 1e-12);
        assert!(r.distance < 1e-9);
    }

    #[test]
    fn conditional_lower_examples() {
        let sigma = QuantumState::maximally_mixed(2);
        let r = smooth_hmin_conditional_lower(&bell(), &sigma, 0.01).unwrap();
        assert!((r.value.bits() + 1.0).abs() < 0.05);
        let w = r.witness.unwrap();
        assert!(ball_contains(w.op(), bell().op(), 0.01).unwrap());

        let ra = QuantumState::from_diagonal(&[0.7, 0.3]).unwrap();
        let sb = QuantumState::from_diagonal(&[0.4, 0.6]).unwrap();
        let prod = BipartiteState::new(ra.kron(&sb).unwrap(), 2, 2).unwrap();
        let r = smooth_hmin_conditional_lower(&prod, &sb, 1e-6).unwrap();
        assert!((r.value.bits() - h_min_unconditional(&ra).unwrap().bits()).abs() < 1e-3);
    }

    #[test]
    fn conditional_upper_examples() {
        let sigma = QuantumState::maximally_mixed(2);
        let r = smooth_hmax_conditional_upper(&bell(), &sigma, 0.1).unwrap();
        assert!(r.value.bits() <= -1.0 + 0.05);
        let r = smooth_hmax_conditional_upper(&bell(), &sigma, 0.0).unwrap();
        assert!((r.value.bits() - h_max(&bell(), &sigma).unwrap().bits()).abs() < 1e-9);

        let pa = [0.5, 0.3, 0.15, 0.05];
        let sb = QuantumState::from_diagonal(&[0.25, 0.75]).unwrap();
        let ra = QuantumState::from_diagonal(&pa).unwrap();
        let prod = BipartiteState::new(ra.kron(&sb).unwrap(), 4, 2).unwrap();
        assert!((prod.marginal(Subsystem::B).unwrap().op().max_abs_diff(sb.op())) < 1e-12);
        for eps in [0.01, 0.06, 0.2, 0.25] {
            let dense = smooth_hmax_conditional_upper(&prod, &sb, eps).unwrap().value.bits();
            let classical = smooth_hmax_classical(&spec(&pa), eps).unwrap().value.bits();
            assert!((dense - classical).abs() < 1e-6, "eps={eps}: {dense} vs {classical}");
        }
    }
}
