//! Finite-n information-spectrum functionals and rate brackets.
//!
//! Entropy-type functionals compare `rho_n` against `2^{-n gamma} omega_n`;
//! divergence-type functionals against `2^{+n gamma} omega_n`. The sign is
//! handled in one place, [`Convention`].

use serde::{Deserialize, Serialize};

use crate::entropy::lift_sigma;
use crate::error::{Error, Result};
use crate::operator::{spectral_projector, BipartiteState, HermitianOperator, QuantumState, Relation, Subsystem, TOL};
use crate::spectrum::{iid_spectrum, CompensatedSum, WeightedSpectrum};

/// Sign of the exponent in `2^{+-bits}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// Threshold `2^{-bits}`.
    Entropy,
    /// Threshold `2^{+bits}`.
    Divergence,
}

impl Convention {
    /// `log2` of the threshold factor for exponent `bits`.
    pub fn log2_factor(self, bits: f64) -> f64 {
        match self {
            Convention::Entropy => -bits,
            Convention::Divergence => bits,
        }
    }

    pub fn factor(self, bits: f64) -> f64 {
        self.log2_factor(bits).exp2()
    }
}

fn require_positive(omega: &HermitianOperator) -> Result<()> {
    let min = omega.min_eigenvalue()?;
    if min < -TOL.entry {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

/// `Tr[{A >= B}(A - B)]`, the sum of the non-negative eigenvalues of `A - B`.
fn positive_part_trace(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    let values = a.sub(b)?.eigenvalues()?;
    Ok(values.iter().filter(|&&v| Relation::Ge.keeps(v)).map(|v| v.max(0.0)).sum())
}

/// `Tr[{Pi >= 0} Pi]` with `Pi = rho - 2^{gamma} omega`.
pub fn div_trace_primary(rho: &QuantumState, omega: &HermitianOperator, gamma_bits: f64) -> Result<f64> {
    require_positive(omega)?;
    positive_part_trace(rho.op(), &omega.scale(Convention::Divergence.factor(gamma_bits)))
}

/// `Tr[{rho >= 2^{alpha} omega} rho]`.
pub fn div_trace_alt(rho: &QuantumState, omega: &HermitianOperator, alpha_bits: f64) -> Result<f64> {
    require_positive(omega)?;
    let p = spectral_projector(rho.op(), &omega.scale(Convention::Divergence.factor(alpha_bits)), Relation::Ge)?;
    p.op().trace_product(rho.op())
}

/// `Tr[{omega >= 2^{-alpha} I}(omega - 2^{-alpha} I)]`.
pub fn upsilon_trace(omega: &HermitianOperator, alpha_bits: f64) -> Result<f64> {
    require_positive(omega)?;
    let threshold = HermitianOperator::identity(omega.dim()).scale(Convention::Entropy.factor(alpha_bits));
    positive_part_trace(omega, &threshold)
}

/// `Tr[{sigma_AB >= 2^{-alpha} I (x) rho_B}(sigma_AB - 2^{-alpha} I (x) rho_B)]`.
pub fn upsilon_trace_conditional(sigma_ab: &BipartiteState, rho_b: &QuantumState, alpha_bits: f64) -> Result<f64> {
    if rho_b.dim() != sigma_ab.dim_b() {
        return Err(Error::DimensionMismatch { expected: sigma_ab.dim_b(), found: rho_b.dim() });
    }
    let k = lift_sigma(sigma_ab, rho_b).scale(Convention::Entropy.factor(alpha_bits));
    positive_part_trace(sigma_ab.op(), &k)
}

/// `Tr[{rho >= 2^{-gamma} I} rho]` for a dense state.
pub fn entropy_trace(rho: &QuantumState, gamma_bits: f64) -> Result<f64> {
    let threshold = HermitianOperator::identity(rho.dim()).scale(Convention::Entropy.factor(gamma_bits));
    spectral_projector(rho.op(), &threshold, Relation::Ge)?.op().trace_product(rho.op())
}

/// `Tr[P rho_AB]` with `P = {rho_AB >= 2^{-gamma} I_A (x) rho_B}`.
pub fn conditional_trace(rho_ab: &BipartiteState, gamma_bits: f64) -> Result<f64> {
    conditional_projector_traces(rho_ab, gamma_bits).map(|t| t.0)
}

/// `(Tr[P rho_AB], Tr[P (I_A (x) rho_B)])` for the conditional projector `P`.
pub fn conditional_projector_traces(rho_ab: &BipartiteState, gamma_bits: f64) -> Result<(f64, f64)> {
    rho_ab.state().require_normalized()?;
    let rho_b = rho_ab.marginal(Subsystem::B)?;
    let k = lift_sigma(rho_ab, &rho_b);
    let p = spectral_projector(rho_ab.op(), &k.scale(Convention::Entropy.factor(gamma_bits)), Relation::Ge)?;
    Ok((p.op().trace_product(rho_ab.op())?, p.op().trace_product(&k)?))
}

/// Which divergence functional an i.i.d. family evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivergenceKind {
    /// `Tr[{rho >= c omega}(rho - c omega)]`
    Primary,
    /// `Tr[{rho >= c omega} rho]`
    Alt,
}

/// Direction in which a family's trace moves as `gamma` grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
}

/// A sequence of states together with a trace functional, evaluated at
/// block length `n` and per-copy exponent `gamma` (total exponent `n gamma`).
pub trait TraceFamily {
    fn traces(&self, n: u32, gammas: &[f64]) -> Result<Vec<f64>>;
    fn monotonicity(&self) -> Monotonicity;
}

/// `Tr[{rho^(x)n >= 2^{-n gamma} I} rho^(x)n]` via type classes.
#[derive(Debug, Clone)]
pub struct IidSpectral {
    pub base: Vec<f64>,
}

impl TraceFamily for IidSpectral {
    fn traces(&self, n: u32, gammas: &[f64]) -> Result<Vec<f64>> {
        let spec = iid_spectrum(&self.base, n)?;
        Ok(gammas.iter().map(|&g| crate::spectrum::spectral_trace_gamma(&spec, g, n)).collect())
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::NonDecreasing
    }
}

/// Divergence functionals of `rho^(x)n` against `omega_n = I`, via type classes.
#[derive(Debug, Clone)]
pub struct IidDivergence {
    pub base: Vec<f64>,
    pub kind: DivergenceKind,
    pub convention: Convention,
}

/// Divergence functional of a spectrum against the identity at threshold `2^{log2_c}`.
pub fn spectrum_divergence_trace(spec: &WeightedSpectrum, log2_c: f64, kind: DivergenceKind) -> f64 {
    let mut s = CompensatedSum::default();
    for a in spec.atoms() {
        if a.log2_value < log2_c {
            break;
        }
        match kind {
            DivergenceKind::Alt => s.add(a.mass()),
            DivergenceKind::Primary => s.add(a.mass() - (a.log2_multiplicity + log2_c).exp2()),
        }
    }
    s.value().max(0.0)
}

impl TraceFamily for IidDivergence {
    fn traces(&self, n: u32, gammas: &[f64]) -> Result<Vec<f64>> {
        let spec = iid_spectrum(&self.base, n)?;
        Ok(gammas
            .iter()
            .map(|&g| spectrum_divergence_trace(&spec, self.convention.log2_factor(n as f64 * g), self.kind))
            .collect())
    }

    fn monotonicity(&self) -> Monotonicity {
        match self.convention {
            Convention::Entropy => Monotonicity::NonDecreasing,
            Convention::Divergence => Monotonicity::NonIncreasing,
        }
    }
}

/// `Tr[{rho^(x)n >= 2^{-n gamma} I} rho^(x)n]` with dense tensor powers.
#[derive(Debug, Clone)]
pub struct DenseEntropy {
    pub rho: QuantumState,
}

impl TraceFamily for DenseEntropy {
    fn traces(&self, n: u32, gammas: &[f64]) -> Result<Vec<f64>> {
        let power = BipartiteState::trivial_b(self.rho.clone()).tensor_power(n as usize)?;
        let eig = power.op().eigh()?;
        let weights: Vec<f64> = eig.values.clone();
        Ok(gammas
            .iter()
            .map(|&g| {
                let t = Convention::Entropy.factor(n as f64 * g);
                weights.iter().filter(|&&v| Relation::Ge.keeps(v - t)).sum()
            })
            .collect())
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::NonDecreasing
    }
}

/// Conditional traces of `rho_AB^(x)n` with dense tensor powers.
#[derive(Debug, Clone)]
pub struct DenseConditional {
    pub rho_ab: BipartiteState,
}

impl TraceFamily for DenseConditional {
    fn traces(&self, n: u32, gammas: &[f64]) -> Result<Vec<f64>> {
        let power = self.rho_ab.tensor_power(n as usize)?;
        gammas.iter().map(|&g| conditional_trace(&power, n as f64 * g)).collect()
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::NonDecreasing
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: u32,
    pub gamma: f64,
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateProfile {
    pub rows: Vec<ProfileRow>,
    pub lower_bracket: f64,
    pub upper_bracket: f64,
    pub thresholds: (f64, f64),
}

/// Samples `family` on `n_list x gamma_grid` and brackets the transition at
/// the largest `n`: for a non-decreasing family, `lower` is the largest
/// `gamma` with trace `<= t_low` and `upper` the smallest with trace `>= t_high`.
pub fn rate_profile(
    family: &dyn TraceFamily,
    n_list: &[u32],
    gamma_grid: &[f64],
    t_low: f64,
    t_high: f64,
) -> Result<RateProfile> {
    if n_list.is_empty() || gamma_grid.is_empty() {
        return Err(Error::InvalidArgument("empty n list or gamma grid".into()));
    }
    if gamma_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("gamma grid must be strictly ascending".into()));
    }
    if !(0.0 < t_low && t_low < t_high && t_high < 1.0) {
        return Err(Error::InvalidArgument(format!("thresholds must satisfy 0 < {t_low} < {t_high} < 1")));
    }
    let direction = family.monotonicity();
    let mut rows = Vec::with_capacity(n_list.len() * gamma_grid.len());
    let n_max = *n_list.iter().max().unwrap();
    let mut last = Vec::new();
    for &n in n_list {
        let traces = family.traces(n, gamma_grid)?;
        let broken = traces.windows(2).any(|w| match direction {
            Monotonicity::NonDecreasing => w[1] < w[0] - TOL.assertion,
            Monotonicity::NonIncreasing => w[1] > w[0] + TOL.assertion,
        });
        if broken {
            return Err(Error::ConstructionFailure(format!("trace is not monotone in gamma at n = {n}")));
        }
        rows.extend(gamma_grid.iter().zip(&traces).map(|(&gamma, &trace)| ProfileRow { n, gamma, trace }));
        if n == n_max {
            last = traces;
        }
    }
    let pairs = || gamma_grid.iter().copied().zip(last.iter().copied());
    let (lower, upper) = match direction {
        Monotonicity::NonDecreasing => (
            pairs().filter(|&(_, t)| t <= t_low).map(|(g, _)| g).next_back(),
            pairs().find(|&(_, t)| t >= t_high).map(|(g, _)| g),
        ),
        Monotonicity::NonIncreasing => (
            pairs().filter(|&(_, t)| t >= t_high).map(|(g, _)| g).next_back(),
            pairs().find(|&(_, t)| t <= t_low).map(|(g, _)| g),
        ),
    };
    let lower =
        lower.ok_or_else(|| Error::GridTooCoarse(format!("no grid point below the low threshold at n = {n_max}")))?;
    let upper =
        upper.ok_or_else(|| Error::GridTooCoarse(format!("no grid point above the high threshold at n = {n_max}")))?;
    Ok(RateProfile { rows, lower_bracket: lower, upper_bracket: upper, thresholds: (t_low, t_high) })
}

/// Both sides of `Tr[P_a rho] <= Tr[{rho >= 2^g w}(rho - 2^g w)] + 2^g Tr[P_a w]`,
/// `P_a = {rho >= 2^a w}`, and the cruder `... + 2^{g - a} Tr rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    pub lhs: f64,
    pub bound: f64,
    pub coarse_bound: f64,
}

impl ChainCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.bound + tol && self.bound <= self.coarse_bound + tol
    }
}

pub fn proposition_chain_check(
    rho: &QuantumState,
    omega: &HermitianOperator,
    alpha_bits: f64,
    gamma_bits: f64,
) -> Result<ChainCheck> {
    if gamma_bits > alpha_bits {
        return Err(Error::ParameterOrder { gamma: gamma_bits, alpha: alpha_bits });
    }
    require_positive(omega)?;
    let lhs = div_trace_alt(rho, omega, alpha_bits)?;
    let first = div_trace_primary(rho, omega, gamma_bits)?;
    let p_alpha = spectral_projector(rho.op(), &omega.scale(alpha_bits.exp2()), Relation::Ge)?;
    let omega_weight = p_alpha.op().trace_product(omega)?;
    Ok(ChainCheck {
        lhs,
        bound: first + gamma_bits.exp2() * omega_weight,
        coarse_bound: first + (gamma_bits - alpha_bits).exp2() * rho.trace(),
    })
}

/// Largest `Tr(pi rho)` over rank-`budget` projectors: the top `budget` eigenvalues.
pub fn best_projector_trace(rho: &QuantumState, rank_budget: usize) -> Result<f64> {
    if rank_budget == 0 || rank_budget > rho.dim() {
        return Err(Error::RankOutOfRange { budget: rank_budget, dim: rho.dim() });
    }
    Ok(rho.eigenvalues()?.iter().take(rank_budget).sum())
}

/// [`best_projector_trace`] on a spectrum; `budget` may exceed `2^53`.
pub fn best_projector_trace_spectrum(spec: &WeightedSpectrum, rank_budget: f64) -> Result<f64> {
    let size = spec.log2_support_size().exp2();
    if !(rank_budget >= 1.0) {
        return Err(Error::RankOutOfRange { budget: rank_budget as usize, dim: size as usize });
    }
    Ok(spec.top_mass(rank_budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{c, CVector};

    fn diag(v: &[f64]) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(v)
    }

    fn bell() -> BipartiteState {
        let s = 0.5f64.sqrt();
        let v = CVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]);
        BipartiteState::new(QuantumState::pure(&v).unwrap(), 2, 2).unwrap()
    }

    #[test]
    fn divergence_examples() {
        let rho = QuantumState::from_diagonal(&[0.75, 0.25]).unwrap();
        let half = diag(&[0.5, 0.5]);
        assert!(div_trace_primary(&rho, rho.op(), 0.0).unwrap().abs() < 1e-12);
        assert!((div_trace_primary(&rho, &diag(&[0.0, 0.0]), 3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((div_trace_primary(&rho, &half, -1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((div_trace_alt(&rho, &half, -60.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((div_trace_alt(&rho, rho.op(), 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((div_trace_alt(&rho, &half, 0.0).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn upsilon_examples() {
        let w = diag(&[0.75, 0.25]);
        assert_eq!(upsilon_trace(&w, -(0.8f64.log2())).unwrap(), 0.0);
        assert!((upsilon_trace(&w, 1.0).unwrap() - 0.25).abs() < 1e-12);
        assert!(upsilon_trace(&diag(&[0.25; 4]), 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn conditional_examples() {
        assert!(conditional_trace(&bell(), -2.0).unwrap().abs() < 1e-12);
        assert!((conditional_trace(&bell(), 0.0).unwrap() - 1.0).abs() < 1e-12);
        let ra = QuantumState::from_diagonal(&[0.6, 0.4]).unwrap();
        let rb = QuantumState::from_diagonal(&[0.3, 0.7]).unwrap();
        let prod = BipartiteState::new(ra.kron(&rb).unwrap(), 2, 2).unwrap();
        for g in [0.5, 0.9, 1.5] {
            assert!((conditional_trace(&prod, g).unwrap() - entropy_trace(&ra, g).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_example() {
        let rho = QuantumState::from_diagonal(&[0.75, 0.25]).unwrap();
        let c = proposition_chain_check(&rho, &diag(&[0.5, 0.5]), 0.0, -1.0).unwrap();
        assert!((c.lhs - 0.75).abs() < 1e-12);
        assert!((c.bound - 0.75).abs() < 1e-12);
        assert!((c.coarse_bound - 1.0).abs() < 1e-12);
        assert!(matches!(
            proposition_chain_check(&rho, &diag(&[0.5, 0.5]), -1.0, 0.0),
            Err(Error::ParameterOrder { .. })
        ));
    }

    #[test]
    fn profile_brackets() {
        let grid: Vec<f64> = (0..=40).map(|i| 0.8 + 0.01 * i as f64).collect();
        let p = rate_profile(&IidSpectral { base: vec![0.5, 0.5] }, &[1, 5, 20], &grid, 0.01, 0.99).unwrap();
        assert!(p.lower_bracket >= 0.98 && p.upper_bracket <= 1.01 && p.lower_bracket <= p.upper_bracket);

        let grid: Vec<f64> = (0..=300).map(|i| 0.01 * i as f64).collect();
        let p = rate_profile(&IidSpectral { base: vec![0.75, 0.25] }, &[1], &grid, 0.01, 0.99).unwrap();
        assert!(p.lower_bracket < 0.415038 && p.upper_bracket >= 2.0 - 1e-9);

        let narrow = [0.5, 0.6];
        assert!(matches!(
            rate_profile(&IidSpectral { base: vec![0.5, 0.5] }, &[4], &narrow, 0.01, 0.99),
            Err(Error::GridTooCoarse(_))
        ));
    }

    #[test]
    fn projector_budget() {
        let rho = QuantumState::from_diagonal(&[0.75, 0.25]).unwrap();
        assert!((best_projector_trace(&rho, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!((best_projector_trace(&rho, 1).unwrap() - 0.75).abs() < 1e-12);
        assert!(matches!(best_projector_trace(&rho, 3), Err(Error::RankOutOfRange { .. })));
    }
}
