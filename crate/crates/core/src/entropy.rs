//! Non-smooth entropies: von Neumann, and the conditional min/max entropies
//! relative to a fixed `sigma_B` together with their unconditional forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{support_cutoff, BipartiteState, HermitianOperator, QuantumState, Subsystem, TOL};

/// An entropy in bits. May be `+inf` or `-inf` under the documented
/// support conditions.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntropyValue(pub f64);

impl EntropyValue {
    pub fn bits(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            write!(f, "inf")
        } else if self.0 == f64::NEG_INFINITY {
            write!(f, "-inf")
        } else {
            write!(f, "{:.6}", self.0)
        }
    }
}

/// `-sum lambda log2 lambda` over eigenvalues above `1e-12`.
pub fn von_neumann_entropy(rho: &QuantumState) -> Result<EntropyValue> {
    rho.require_normalized()?;
    let s: f64 = rho.eigenvalues()?.iter().filter(|&&v| v > 1e-12).map(|&v| -v * v.log2()).sum();
    Ok(EntropyValue(s.max(0.0)))
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 1e-12).map(|&v| -v * v.log2()).sum()
}

fn check_sigma(rho_ab: &BipartiteState, sigma_b: &QuantumState) -> Result<()> {
    if sigma_b.dim() != rho_ab.dim_b() {
        return Err(Error::DimensionMismatch { expected: rho_ab.dim_b(), found: sigma_b.dim() });
    }
    sigma_b.require_normalized()
}

/// `I_A (x) sigma_B` on the space of `rho_ab`.
pub fn lift_sigma(rho_ab: &BipartiteState, sigma_b: &QuantumState) -> HermitianOperator {
    HermitianOperator::identity(rho_ab.dim_a()).kron(sigma_b.op())
}

/// Pseudo-inverse square root of `K`, restricted to its numerical support.
pub(crate) fn pinv_sqrt(k: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = k.eigh()?;
    let cutoff = support_cutoff(&eig.values);
    Ok(eig.rebuild(|_, v| if v > cutoff { 1.0 / v.sqrt() } else { 0.0 }))
}

/// Smallest `lambda` with `rho <= lambda K`: the largest eigenvalue of
/// `K^{-1/2} rho K^{-1/2}` on the support of `K`, or `+inf` when `rho` has
/// weight off that support.
pub(crate) fn min_lambda(rho: &HermitianOperator, k: &HermitianOperator) -> Result<f64> {
    let support = k.support_projector()?;
    let off = support.complement();
    let leak = off.op().trace_product(rho)?;
    if leak > TOL.assertion {
        return Ok(f64::INFINITY);
    }
    let inv = pinv_sqrt(k)?;
    let conj = rho.conjugate_by(inv.matrix())?;
    Ok(conj.max_eigenvalue()?.max(0.0))
}

fn neg_log2(lambda: f64) -> EntropyValue {
    if lambda == f64::INFINITY {
        EntropyValue(f64::NEG_INFINITY)
    } else if lambda <= 0.0 {
        EntropyValue(f64::INFINITY)
    } else {
        EntropyValue(-lambda.log2())
    }
}

/// `H_min(rho_AB | sigma_B) = -log2 min{lambda : rho_AB <= lambda I_A (x) sigma_B}`.
pub fn h_min(rho_ab: &BipartiteState, sigma_b: &QuantumState) -> Result<EntropyValue> {
    check_sigma(rho_ab, sigma_b)?;
    h_min_operator(rho_ab.op(), &lift_sigma(rho_ab, sigma_b))
}

/// `h_min` for an arbitrary positive operator against a lifted `K`.
pub(crate) fn h_min_operator(rho: &HermitianOperator, k: &HermitianOperator) -> Result<EntropyValue> {
    Ok(neg_log2(min_lambda(rho, k)?))
}

/// `H_max(rho_AB | sigma_B) = log2 Tr(pi_AB (I_A (x) sigma_B))`, `pi_AB` the
/// support projector of `rho_AB`.
pub fn h_max(rho_ab: &BipartiteState, sigma_b: &QuantumState) -> Result<EntropyValue> {
    check_sigma(rho_ab, sigma_b)?;
    h_max_operator(rho_ab.op(), &lift_sigma(rho_ab, sigma_b))
}

pub(crate) fn h_max_operator(rho: &HermitianOperator, k: &HermitianOperator) -> Result<EntropyValue> {
    let eig = rho.eigh()?;
    if eig.values[0] <= 0.0 {
        return Ok(EntropyValue(f64::NEG_INFINITY));
    }
    let pi = rho.support_projector()?;
    let t = pi.op().trace_product(k)?;
    Ok(if t <= 0.0 { EntropyValue(f64::NEG_INFINITY) } else { EntropyValue(t.log2()) })
}

fn require_positive(rho: &QuantumState) -> Result<Vec<f64>> {
    let values = rho.eigenvalues()?;
    let min = *values.last().unwrap();
    if min < -TOL.entry {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(values)
}

/// `-log2 ||rho||_inf`.
pub fn h_min_unconditional(rho: &QuantumState) -> Result<EntropyValue> {
    let values = require_positive(rho)?;
    Ok(neg_log2(values[0]))
}

/// `log2 rank(rho)` with the relative rank cutoff.
pub fn h_max_unconditional(rho: &QuantumState) -> Result<EntropyValue> {
    let values = require_positive(rho)?;
    let cutoff = support_cutoff(&values);
    let rank = values.iter().filter(|&&v| v > cutoff && v > 0.0).count();
    Ok(if rank == 0 { EntropyValue(f64::NEG_INFINITY) } else { EntropyValue((rank as f64).log2()) })
}

/// Conditional entropies with `sigma_B` set to the `B` marginal of `rho_AB`.
pub fn h_min_self(rho_ab: &BipartiteState) -> Result<EntropyValue> {
    h_min(rho_ab, &rho_ab.marginal(Subsystem::B)?)
}
