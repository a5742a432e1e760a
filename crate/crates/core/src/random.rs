//! Seeded random operators. Density matrices follow the Ginibre construction
//! `G G^dagger / Tr(G G^dagger)` with i.i.d. complex standard normal entries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator::{c, BipartiteState, CMatrix, HermitianOperator, QuantumState};

/// Largest dimension accepted by the generators.
pub const MAX_RANDOM_DIM: usize = 64;

pub type StateRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    if dim > MAX_RANDOM_DIM {
        return Err(Error::DimensionTooLarge { dim, limit: MAX_RANDOM_DIM });
    }
    Ok(())
}

/// `rows x cols` matrix of complex standard normals (real and imaginary parts each `N(0,1)`).
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<QuantumState> {
    check_dim(dim)?;
    let g = ginibre(rng, dim, dim);
    let gg = HermitianOperator::from_matrix_unchecked(&g * g.adjoint());
    let trace = gg.trace();
    QuantumState::new(gg.scale(1.0 / trace))
}

/// A state with trace `trace` in `(0, 1]`.
pub fn random_subnormalized<R: Rng + ?Sized>(rng: &mut R, dim: usize, trace: f64) -> Result<QuantumState> {
    let rho = random_density(rng, dim)?;
    QuantumState::new(rho.op().scale(trace))
}

pub fn random_bipartite<R: Rng + ?Sized>(rng: &mut R, dim_a: usize, dim_b: usize) -> Result<BipartiteState> {
    check_dim(dim_a * dim_b)?;
    BipartiteState::new(random_density(rng, dim_a * dim_b)?, dim_a, dim_b)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<CMatrix> {
    check_dim(dim)?;
    let qr = ginibre(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    Ok(q)
}

/// Hermitian matrix `(G + G^dagger) / 2` scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> Result<HermitianOperator> {
    check_dim(dim)?;
    let g = ginibre(rng, dim, dim);
    Ok(HermitianOperator::from_matrix_unchecked(g * c(scale)))
}

/// Random effect `0 <= P <= I`: uniform eigenvalues in a Haar-random basis.
pub fn random_effect<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<HermitianOperator> {
    let u = random_unitary(rng, dim)?;
    let values: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    HermitianOperator::from_real_diagonal(&values).conjugate_by(&u)
}

/// Random positive semidefinite operator (not normalized), trace of order `dim`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<HermitianOperator> {
    check_dim(dim)?;
    let g = ginibre(rng, dim, dim);
    Ok(HermitianOperator::from_matrix_unchecked(&g * g.adjoint() * c(1.0 / dim as f64)))
}

/// [`random_density`] from a fresh generator seeded with `seed`.
pub fn generate_random_state(seed: u64, dim: usize) -> Result<QuantumState> {
    random_density(&mut rng_from_seed(seed), dim)
}

pub fn generate_random_bipartite(seed: u64, dim_a: usize, dim_b: usize) -> Result<BipartiteState> {
    random_bipartite(&mut rng_from_seed(seed), dim_a, dim_b)
}
