//! Reference maximizer for `H_min^eps(rho_AB | sigma_B)` at desk scale.
//!
//! Solves the convex program
//!
//! ```text
//! minimize lambda  s.t.  0 <= X <= lambda I_A (x) sigma_B,
//!                        X - rho = P - N,  P, N >= 0,
//!                        Tr P + Tr N <= eps,  Tr X <= Tr rho
//! ```
//!
//! with a log-barrier interior-point method over the real coordinates of the
//! Hermitian matrices `X` and `P`. Every iterate is strictly feasible, so any
//! iterate's `X` is a valid member of the ball; the reported value is the
//! exact `H_min` of the best such `X` over several random starting points.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entropy::{h_min, h_min_operator, lift_sigma, pinv_sqrt, EntropyValue};
use crate::error::{Error, Result};
use crate::operator::{c, BipartiteState, CMatrix, HermitianOperator, QuantumState, TOL};
use crate::smoothing::{Method, SmoothingResult};

/// Newton steps allowed per centering round.
const CENTERING_MAX_STEPS: usize = 200;

/// Largest total dimension the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop once the barrier duality gap drops below this fraction of `lambda`.
    pub relative_gap: f64,
    /// Total Newton iterations allowed per restart.
    pub max_iterations: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { restarts: 20, seed: 0x5eed, relative_gap: 1e-9, max_iterations: 4000 }
    }
}

/// Sparse Hermitian basis element: `(row, col, coefficient)` entries.
type Basis = Vec<(usize, usize, Complex64)>;

fn hermitian_basis(d: usize) -> Vec<Basis> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(vec![(i, i, c(1.0))]);
    }
    for i in 0..d {
        for j in i + 1..d {
            out.push(vec![(i, j, c(1.0)), (j, i, c(1.0))]);
            out.push(vec![(i, j, Complex64::new(0.0, 1.0)), (j, i, Complex64::new(0.0, -1.0))]);
        }
    }
    out
}

fn coordinates(m: &CMatrix) -> Vec<f64> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(m[(i, i)].re);
    }
    for i in 0..d {
        for j in i + 1..d {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

/// One affine term `z_var * A` of a matrix constraint.
#[derive(Clone, Copy)]
enum Term {
    Dense { var: usize },
    Sparse { var: usize, basis: usize, sign: f64 },
}

struct Problem {
    d: usize,
    m: usize,
    basis: Vec<Basis>,
    basis_trace: Vec<f64>,
    k: CMatrix,
    rho: CMatrix,
    rho_trace: f64,
    epsilon: f64,
    /// Term lists of X, lambda K - X, P and N = P - X + rho.
    terms: [Vec<Term>; 4],
}

struct Point {
    z: DVector<f64>,
}

impl Problem {
    fn new(rho: &HermitianOperator, k: &HermitianOperator, epsilon: f64) -> Self {
        let d = rho.dim();
        let m = d * d;
        let basis = hermitian_basis(d);
        let basis_trace = (0..m).map(|i| if i < d { 1.0 } else { 0.0 }).collect();
        let x = |b: usize| 1 + b;
        let p = |b: usize| 1 + m + b;
        let terms = [
            (0..m).map(|b| Term::Sparse { var: x(b), basis: b, sign: 1.0 }).collect(),
            std::iter::once(Term::Dense { var: 0 })
                .chain((0..m).map(|b| Term::Sparse { var: x(b), basis: b, sign: -1.0 }))
                .collect(),
            (0..m).map(|b| Term::Sparse { var: p(b), basis: b, sign: 1.0 }).collect(),
            (0..m)
                .map(|b| Term::Sparse { var: p(b), basis: b, sign: 1.0 })
                .chain((0..m).map(|b| Term::Sparse { var: x(b), basis: b, sign: -1.0 }))
                .collect(),
        ];
        Self {
            d,
            m,
            basis,
            basis_trace,
            k: k.matrix().clone(),
            rho: rho.matrix().clone(),
            rho_trace: rho.trace(),
            epsilon,
            terms,
        }
    }

    fn nvars(&self) -> usize {
        1 + 2 * self.m
    }

    fn assemble(&self, coords: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.d, self.d);
        for (b, &v) in coords.iter().enumerate() {
            for &(r, s, a) in &self.basis[b] {
                out[(r, s)] += a * v;
            }
        }
        out
    }

    fn matrices(&self, z: &DVector<f64>) -> [CMatrix; 4] {
        let lambda = z[0];
        let x = self.assemble(&z.as_slice()[1..1 + self.m]);
        let p = self.assemble(&z.as_slice()[1 + self.m..]);
        let slack = &self.k * c(lambda) - &x;
        let n = &p - &x + &self.rho;
        [x, slack, p, n]
    }

    fn scalars(&self, z: &DVector<f64>) -> (f64, f64) {
        let tr_x: f64 = (0..self.d).map(|i| z[1 + i]).sum();
        let tr_p: f64 = (0..self.d).map(|i| z[1 + self.m + i]).sum();
        (self.epsilon - self.rho_trace - 2.0 * tr_p + tr_x, self.rho_trace - tr_x)
    }

    /// Barrier value, or `None` outside the strictly feasible region.
    fn barrier(&self, z: &DVector<f64>) -> Option<f64> {
        let (s1, s2) = self.scalars(z);
        if !(s1 > 0.0 && s2 > 0.0) {
            return None;
        }
        let mut total = -s1.ln() - s2.ln();
        for mat in self.matrices(z) {
            let chol = nalgebra::Cholesky::new(mat)?;
            let logdet: f64 = chol.l_dirty().diagonal().iter().map(|v| 2.0 * v.re.ln()).sum();
            if !logdet.is_finite() {
                return None;
            }
            total -= logdet;
        }
        Some(total)
    }

    fn objective(&self, z: &DVector<f64>, t: f64) -> Option<f64> {
        self.barrier(z).map(|b| t * z[0] + b)
    }

    fn trace_wa(&self, w: &CMatrix, term: Term) -> f64 {
        match term {
            Term::Dense { .. } => (w * &self.k).trace().re,
            Term::Sparse { basis, sign, .. } => {
                sign * self.basis[basis].iter().map(|&(r, s, a)| (w[(s, r)] * a).re).sum::<f64>()
            }
        }
    }

    /// `Re Tr(W A W B)`.
    fn trace_wawb(&self, w: &CMatrix, wkw: &CMatrix, a: Term, b: Term) -> f64 {
        match (a, b) {
            (Term::Dense { .. }, Term::Dense { .. }) => (wkw * &self.k).trace().re,
            (Term::Dense { .. }, Term::Sparse { basis, sign, .. })
            | (Term::Sparse { basis, sign, .. }, Term::Dense { .. }) => {
                sign * self.basis[basis].iter().map(|&(u, v, bb)| (wkw[(v, u)] * bb).re).sum::<f64>()
            }
            (Term::Sparse { basis: ba, sign: sa, .. }, Term::Sparse { basis: bb, sign: sb, .. }) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(r, s, x) in &self.basis[ba] {
                    for &(u, v, y) in &self.basis[bb] {
                        acc += x * y * w[(s, u)] * w[(v, r)];
                    }
                }
                sa * sb * acc.re
            }
        }
    }

    fn var(term: Term) -> usize {
        match term {
            Term::Dense { var } | Term::Sparse { var, .. } => var,
        }
    }

    fn gradient_hessian(&self, z: &DVector<f64>, t: f64) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let nv = self.nvars();
        let mut g = DVector::zeros(nv);
        let mut h = DMatrix::zeros(nv, nv);
        g[0] = t;
        for (mat, terms) in self.matrices(z).into_iter().zip(self.terms.iter()) {
            let w = nalgebra::Cholesky::new(mat)?.inverse();
            let wkw = &w * &self.k * &w;
            for (ia, &a) in terms.iter().enumerate() {
                g[Self::var(a)] -= self.trace_wa(&w, a);
                for &b in &terms[ia..] {
                    let v = self.trace_wawb(&w, &wkw, a, b);
                    let (i, j) = (Self::var(a), Self::var(b));
                    h[(i, j)] += v;
                    if i != j {
                        h[(j, i)] += v;
                    }
                }
            }
        }
        let (s1, s2) = self.scalars(z);
        let mut c1 = DVector::zeros(nv);
        let mut c2 = DVector::zeros(nv);
        for b in 0..self.m {
            c1[1 + b] = self.basis_trace[b];
            c1[1 + self.m + b] = -2.0 * self.basis_trace[b];
            c2[1 + b] = -self.basis_trace[b];
        }
        g -= &c1 / s1 + &c2 / s2;
        h += &c1 * c1.transpose() / (s1 * s1) + &c2 * c2.transpose() / (s2 * s2);
        Some((g, h))
    }

    fn newton_direction(g: &DVector<f64>, h: DMatrix<f64>) -> Option<DVector<f64>> {
        let rhs = -g;
        if let Some(chol) = nalgebra::Cholesky::new(h.clone()) {
            return Some(chol.solve(&rhs));
        }
        h.lu().solve(&rhs)
    }

    /// Barrier method from a strictly feasible point; returns the final point.
    fn solve(&self, mut point: Point, options: &OracleOptions) -> Result<Point> {
        let nu = (4 * self.d + 2) as f64;
        let mut t = nu / point.z[0].max(1e-12);
        let mut iterations = 0;
        let mut rounds = 0;
        loop {
            // centering
            for _ in 0..CENTERING_MAX_STEPS {
                iterations += 1;
                if iterations > options.max_iterations {
                    // every iterate is strictly feasible; near the optimum the
                    // Newton decrement is dominated by rounding, so keep the point
                    if rounds > 0 {
                        return Ok(point);
                    }
                    return Err(Error::NonConvergence { iterations, context: "oracle barrier method".into() });
                }
                let Some((g, h)) = self.gradient_hessian(&point.z, t) else { break };
                let Some(step) = Self::newton_direction(&g, h) else { break };
                let decrement = -g.dot(&step);
                if !(decrement > 1e-10) {
                    break;
                }
                let f0 = self.objective(&point.z, t).unwrap_or(f64::INFINITY);
                let mut s = 1.0;
                let mut moved = false;
                while s > 1e-14 {
                    let trial = &point.z + &step * s;
                    if let Some(f) = self.objective(&trial, t) {
                        if f <= f0 - 0.25 * s * decrement {
                            point.z = trial;
                            moved = true;
                            break;
                        }
                    }
                    s *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            if nu / t < options.relative_gap * point.z[0].abs().max(1e-300) {
                return Ok(point);
            }
            t *= 10.0;
            rounds += 1;
        }
    }

    fn initial_point(&self, k_inv_sqrt: &HermitianOperator, r: f64, s: f64, r2: f64) -> Result<Point> {
        let d = self.d as f64;
        let t0 = self.rho_trace;
        let tau = (r * self.epsilon / (3.0 * t0)).min(0.5);
        let x0 = &self.rho * c(1.0 - tau) + CMatrix::identity(self.d, self.d) * c(tau * t0 / (2.0 * d));
        let diff = HermitianOperator::from_matrix_unchecked(&x0 - &self.rho);
        let (plus, minus) = diff.jordan_parts()?;
        let norm = plus.trace() + minus.trace();
        let eta = s * (self.epsilon - norm) / (2.0 * d);
        if !(eta > 0.0) {
            return Err(Error::ConstructionFailure("no strictly feasible starting point".into()));
        }
        let p0 = plus.matrix() + CMatrix::identity(self.d, self.d) * c(eta);
        let x_op = HermitianOperator::from_matrix_unchecked(x0.clone());
        let top = x_op.conjugate_by(k_inv_sqrt.matrix())?.max_eigenvalue()?;
        let mut z = DVector::zeros(self.nvars());
        z[0] = (1.0 + r2) * top;
        for (i, v) in coordinates(&x0).into_iter().enumerate() {
            z[1 + i] = v;
        }
        for (i, v) in coordinates(&p0).into_iter().enumerate() {
            z[1 + self.m + i] = v;
        }
        if self.barrier(&z).is_none() {
            return Err(Error::ConstructionFailure("starting point is not strictly feasible".into()));
        }
        Ok(Point { z })
    }

    fn witness(&self, point: &Point) -> HermitianOperator {
        HermitianOperator::from_matrix_unchecked(self.assemble(&point.z.as_slice()[1..1 + self.m]))
    }
}

/// Reference value of `H_min^eps(rho_AB | sigma_B)`; requires full-rank
/// `sigma_B` and total dimension at most [`ORACLE_MAX_DIM`].
pub fn smooth_hmin_conditional_oracle(
    rho_ab: &BipartiteState,
    sigma_b: &QuantumState,
    epsilon: f64,
) -> Result<SmoothingResult> {
    smooth_hmin_conditional_oracle_with(rho_ab, sigma_b, epsilon, &OracleOptions::default())
}

pub fn smooth_hmin_conditional_oracle_with(
    rho_ab: &BipartiteState,
    sigma_b: &QuantumState,
    epsilon: f64,
    options: &OracleOptions,
) -> Result<SmoothingResult> {
    if rho_ab.dim() > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge { dim: rho_ab.dim(), limit: ORACLE_MAX_DIM });
    }
    if sigma_b.dim() != rho_ab.dim_b() {
        return Err(Error::DimensionMismatch { expected: rho_ab.dim_b(), found: sigma_b.dim() });
    }
    sigma_b.require_normalized()?;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let rho = rho_ab.op();
    if epsilon >= rho.trace() {
        return Err(Error::EpsilonTooLarge { epsilon, mass: rho.trace() });
    }
    if epsilon == 0.0 {
        return Ok(SmoothingResult {
            value: h_min(rho_ab, sigma_b)?,
            epsilon,
            witness: Some(rho_ab.state().clone()),
            spectrum_witness: None,
            method: Method::Oracle,
            distance: 0.0,
            certificate: None,
        });
    }
    let sigma_min = sigma_b.op().min_eigenvalue()?;
    if sigma_min <= TOL.rank_cutoff * sigma_b.op().max_eigenvalue()? {
        return Err(Error::PreconditionViolated("the oracle needs a full-rank sigma_B".into()));
    }
    let k = lift_sigma(rho_ab, sigma_b);
    let k_inv_sqrt = pinv_sqrt(&k)?;
    let problem = Problem::new(rho, &k, epsilon);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    let mut best: Option<(f64, HermitianOperator)> = None;
    let mut last_error = None;
    for _ in 0..options.restarts.max(1) {
        let r = rng.random_range(0.2..0.9);
        let s = rng.random_range(0.2..0.9);
        let r2 = rng.random_range(0.05..1.0);
        let outcome = problem.initial_point(&k_inv_sqrt, r, s, r2).and_then(|p| problem.solve(p, options));
        match outcome {
            Ok(point) => {
                let x = problem.witness(&point);
                let value = h_min_operator(&x, &k)?.bits();
                if best.as_ref().is_none_or(|b| value > b.0) {
                    best = Some((value, x));
                }
            }
            Err(e) => last_error = Some(e),
        }
    }
    let (value, x) = match best {
        Some(b) => b,
        None => return Err(last_error.unwrap_or(Error::NonConvergence { iterations: 0, context: "oracle".into() })),
    };
    let witness = QuantumState::new(x)?;
    let distance = crate::operator::trace_distance(witness.op(), rho)?;
    Ok(SmoothingResult {
        value: EntropyValue(value),
        epsilon,
        witness: Some(witness),
        spectrum_witness: None,
        method: Method::Oracle,
        distance,
        certificate: None,
    })
}

/// The oracle with a trivial `B` factor: a brute-force `H_min^eps(rho)`.
pub fn smooth_hmin_unconditional_oracle(
    rho: &QuantumState,
    epsilon: f64,
    options: &OracleOptions,
) -> Result<SmoothingResult> {
    let trivial = BipartiteState::trivial_b(rho.clone());
    smooth_hmin_conditional_oracle_with(&trivial, &QuantumState::maximally_mixed(1), epsilon, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::{ball_contains, smooth_hmin_conditional_lower, smooth_hmin_unconditional};

    #[test]
    fn zero_epsilon_is_hmin() {
        let rho = BipartiteState::new(QuantumState::from_diagonal(&[0.4, 0.3, 0.2, 0.1]).unwrap(), 2, 2).unwrap();
        let sigma = QuantumState::maximally_mixed(2);
        let r = smooth_hmin_conditional_oracle(&rho, &sigma, 0.0).unwrap();
        assert!((r.value.bits() - h_min(&rho, &sigma).unwrap().bits()).abs() < 1e-6);
    }

    #[test]
    fn trivial_b_matches_classical() {
        let rho = QuantumState::from_diagonal(&[0.75, 0.25]).unwrap();
        let options = OracleOptions { restarts: 3, ..Default::default() };
        let r = smooth_hmin_unconditional_oracle(&rho, 0.1, &options).unwrap();
        let exact = smooth_hmin_unconditional(&rho, 0.1).unwrap().value.bits();
        assert!((r.value.bits() - exact).abs() < 1e-3, "{} vs {exact}", r.value.bits());
        assert!(ball_contains(r.witness.unwrap().op(), rho.op(), 0.1).unwrap());
    }

    #[test]
    fn bell_sandwich() {
        let s = 0.5f64.sqrt();
        let v = crate::operator::CVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]);
        let bell = BipartiteState::new(QuantumState::pure(&v).unwrap(), 2, 2).unwrap();
        let sigma = QuantumState::maximally_mixed(2);
        let options = OracleOptions { restarts: 3, ..Default::default() };
        let oracle = smooth_hmin_conditional_oracle_with(&bell, &sigma, 0.01, &options).unwrap();
        let lower = smooth_hmin_conditional_lower(&bell, &sigma, 0.01).unwrap();
        assert!(lower.value.bits() <= oracle.value.bits() + 1e-3);
        assert!((oracle.value.bits() + 1.0).abs() < 0.05);
    }

    #[test]
    fn rejects_large_and_singular() {
        let big = BipartiteState::trivial_b(QuantumState::maximally_mixed(10));
        assert!(matches!(
            smooth_hmin_conditional_oracle(&big, &QuantumState::maximally_mixed(1), 0.1),
            Err(Error::DimensionTooLarge { .. })
        ));
        let rho = BipartiteState::new(QuantumState::maximally_mixed(4), 2, 2).unwrap();
        let sigma = QuantumState::from_diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(smooth_hmin_conditional_oracle(&rho, &sigma, 0.1), Err(Error::PreconditionViolated(_))));
    }
}
