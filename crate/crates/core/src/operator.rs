//! Dense Hermitian operators, quantum states and the spectral toolkit built on
//! top of them: spectral projectors `{A >= B}`, the (unhalved) trace distance,
//! fidelity, purification, partial traces and the elementary operator inequalities.
//!
//! Eigendecompositions are delegated to `nalgebra`'s symmetric eigensolver,
//! which handles complex Hermitian input. Everything else is written in terms
//! of [`HermitianOperator::eigh`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entry-level tolerance: Hermiticity, positivity, zero eigenvalues.
    pub entry: f64,
    /// Tolerance used when asserting inequalities.
    pub assertion: f64,
    /// Relative eigenvalue cutoff (times the largest eigenvalue) defining the support.
    pub rank_cutoff: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances { entry: 1e-10, assertion: 1e-9, rank_cutoff: 1e-10 };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;

const EIGEN_MAX_ITERATIONS: usize = 100_000;

#[inline]
/// Real number as a complex scalar.
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A dense complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

/// Eigendecomposition with eigenvalues sorted descending.
///
/// Each eigenvector (column of `vectors`) has its first non-negligible
/// component real and positive.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// One eigenpair returned by [`spectral_decompose`].
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: CVector,
}

impl HermitianOperator {
    /// Validates Hermiticity within `TOL.entry` and stores the exactly
    /// symmetrized matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 {
            return Err(Error::InvalidArgument("operator dimension must be >= 1".into()));
        }
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.ncols() });
        }
        let deviation = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !deviation.is_finite() || deviation > TOL.entry {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    /// Symmetrizes `matrix` without checking how far from Hermitian it was.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let sym = (&matrix + matrix.adjoint()) * c(0.5);
        Self { matrix: sym }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = c(v);
        }
        Self { matrix: m }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let d = rows.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = c(v);
            }
        }
        Self::new(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim) }
    }

    /// The rank-one operator `|v><v|`.
    pub fn outer(v: &CVector) -> Self {
        Self::from_matrix_unchecked(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { matrix: &self.matrix * c(factor) }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { matrix: &self.matrix - &other.matrix })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.kronecker(&other.matrix) }
    }

    /// `X A X^dagger` for an arbitrary square `X`.
    pub fn conjugate_by(&self, x: &CMatrix) -> Result<Self> {
        if x.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.ncols() });
        }
        Ok(Self::from_matrix_unchecked(x * &self.matrix * x.adjoint()))
    }

    /// `Re Tr(A B)`; the imaginary part vanishes for Hermitian pairs.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.matrix[(i, j)] * other.matrix[(j, i)]).re;
            }
        }
        Ok(acc)
    }

    /// Largest absolute entry-wise deviation.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigh(&self) -> Result<Eigh> {
        let dim = self.dim();
        // The solver's deflation test is relative to the diagonal, so it can stall on
        // (near-)zero eigenvalues; retry on A + s I, whose spectrum stays away from zero.
        let solve = |m: CMatrix, iterations: usize| {
            nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, iterations)
                .filter(|e| e.eigenvalues.iter().all(|v| v.is_finite()))
        };
        let eig = match solve(self.matrix.clone(), 30 * dim + 30) {
            Some(eig) => eig,
            None => {
                let shift = 2.0 * self.matrix.norm() + 1.0;
                let shifted = &self.matrix + CMatrix::identity(dim, dim) * c(shift);
                let mut eig = solve(shifted, EIGEN_MAX_ITERATIONS).ok_or(Error::DecompositionFailure { dim })?;
                eig.eigenvalues.iter_mut().for_each(|v| *v -= shift);
                eig
            }
        };
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut vectors = CMatrix::zeros(dim, dim);
        let mut values = Vec::with_capacity(dim);
        for (col, &src) in order.iter().enumerate() {
            values.push(eig.eigenvalues[src]);
            let mut v = eig.eigenvectors.column(src).into_owned();
            fix_phase(&mut v);
            vectors.set_column(col, &v);
        }
        Ok(Eigh { values, vectors })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.values)
    }

    /// Applies `f` to the spectrum: `sum_i f(lambda_i) |i><i|`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let eig = self.eigh()?;
        Ok(eig.rebuild(|_, v| f(v)))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().unwrap())
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// Projector onto the eigenvectors with eigenvalue above
    /// `TOL.rank_cutoff` times the largest eigenvalue.
    pub fn support_projector(&self) -> Result<Projector> {
        let eig = self.eigh()?;
        let cutoff = support_cutoff(&eig.values);
        Ok(Projector { op: eig.rebuild(|_, v| if v > cutoff { 1.0 } else { 0.0 }) })
    }

    /// Positive and negative parts `(D+, D-)` with `self = D+ - D-`,
    /// eigenvalues within `TOL.entry` of zero dropped from both.
    pub fn jordan_parts(&self) -> Result<(Self, Self)> {
        let eig = self.eigh()?;
        let plus = eig.rebuild(|_, v| if v > TOL.entry { v } else { 0.0 });
        let minus = eig.rebuild(|_, v| if v < -TOL.entry { -v } else { 0.0 });
        Ok((plus, minus))
    }
}

pub(crate) fn support_cutoff(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(0.0, f64::max);
    TOL.rank_cutoff * max
}

fn fix_phase(v: &mut CVector) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
        let phase = first.conj() / first.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

impl Eigh {
    /// `sum_i f(i, lambda_i) |i><i|`.
    pub fn rebuild(&self, f: impl Fn(usize, f64) -> f64) -> HermitianOperator {
        let d = self.values.len();
        let mut scaled = self.vectors.clone();
        for (i, &v) in self.values.iter().enumerate() {
            let w = f(i, v);
            scaled.column_mut(i).iter_mut().for_each(|z| *z *= w);
        }
        let _ = d;
        HermitianOperator::from_matrix_unchecked(&scaled * self.vectors.adjoint())
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }
}

/// Eigenpairs of `a`, eigenvalues descending, orthonormal eigenvectors.
pub fn spectral_decompose(a: &HermitianOperator) -> Result<Vec<EigenPair>> {
    let eig = a.eigh()?;
    Ok((0..a.dim()).map(|i| EigenPair { value: eig.values[i], vector: eig.vector(i) }).collect())
}

/// An orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    op: HermitianOperator,
}

impl Projector {
    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Trace of the projector, rounded to the nearest integer.
    pub fn rank(&self) -> usize {
        self.op.trace().round().max(0.0) as usize
    }

    pub fn complement(&self) -> Projector {
        Projector { op: HermitianOperator::identity(self.dim()).sub(&self.op).unwrap() }
    }

    /// `P X P`.
    pub fn sandwich(&self, x: &HermitianOperator) -> Result<HermitianOperator> {
        x.conjugate_by(self.op.matrix())
    }
}

/// Which eigenvalues of `A - B` a spectral projector keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `{A >= B}`
    Ge,
    /// `{A > B}`
    Gt,
    /// `{A <= B}`
    Le,
    /// `{A < B}`
    Lt,
}

impl Relation {
    /// Eigenvalues within `TOL.entry` of zero count as zero: they belong to
    /// `Ge` and `Le` but not to `Gt` and `Lt`.
    pub fn keeps(self, eigenvalue: f64) -> bool {
        match self {
            Relation::Ge => eigenvalue >= -TOL.entry,
            Relation::Gt => eigenvalue > TOL.entry,
            Relation::Le => eigenvalue <= TOL.entry,
            Relation::Lt => eigenvalue < -TOL.entry,
        }
    }
}

/// `{A rel B}`: projector onto the eigenvectors of `A - B` whose eigenvalue
/// satisfies `rel` with zero.
pub fn spectral_projector(a: &HermitianOperator, b: &HermitianOperator, rel: Relation) -> Result<Projector> {
    let diff = a.sub(b)?;
    let eig = diff.eigh()?;
    Ok(Projector { op: eig.rebuild(|_, v| if rel.keeps(v) { 1.0 } else { 0.0 }) })
}

/// `||A - B||_1`, the sum of absolute eigenvalues of `A - B` (no factor 1/2).
pub fn trace_distance(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    let diff = a.sub(b)?;
    Ok(diff.eigenvalues()?.iter().map(|v| v.abs()).sum())
}

/// A positive semidefinite operator with trace at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    op: HermitianOperator,
    normalized: bool,
}

impl QuantumState {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let min = op.min_eigenvalue()?;
        if min < -TOL.entry {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let trace = op.trace();
        if trace > 1.0 + TOL.entry {
            return Err(Error::TraceTooLarge { trace });
        }
        let normalized = (trace - 1.0).abs() <= TOL.entry;
        Ok(Self { op, normalized })
    }

    /// Like [`QuantumState::new`] but additionally requires unit trace.
    pub fn normalized(op: HermitianOperator) -> Result<Self> {
        let s = Self::new(op)?;
        s.require_normalized()?;
        Ok(s)
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(probabilities))
    }

    /// `|v><v| / <v|v>`.
    pub fn pure(v: &CVector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        Self::new(HermitianOperator::outer(&(v / c(norm))))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { op: HermitianOperator::identity(dim).scale(1.0 / dim as f64), normalized: true }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_op(self) -> HermitianOperator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn trace(&self) -> f64 {
        self.op.trace()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized { trace: self.trace() })
        }
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.op.eigenvalues()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Self::new(self.op.kron(&other.op))
    }
}

/// Which factor of a bipartite space to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A state on `H_A (x) H_B`, with `dim_a * dim_b == state.dim()`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    state: QuantumState,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    pub fn new(state: QuantumState, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != state.dim() {
            return Err(Error::DimensionMismatch { expected: state.dim(), found: dim_a * dim_b });
        }
        Ok(Self { state, dim_a, dim_b })
    }

    /// A state with a one-dimensional `B` factor.
    pub fn trivial_b(state: QuantumState) -> Self {
        let d = state.dim();
        Self { state, dim_a: d, dim_b: 1 }
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn op(&self) -> &HermitianOperator {
        self.state.op()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn marginal(&self, keep: Subsystem) -> Result<QuantumState> {
        QuantumState::new(partial_trace(self.op(), self.dim_a, self.dim_b, keep)?)
    }

    /// `rho^{(x) n}` with the factors reordered to `(A_1..A_n)(B_1..B_n)`.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power needs n >= 1".into()));
        }
        let mut op = self.op().clone();
        for _ in 1..n {
            op = op.kron(self.op());
        }
        let (da, db) = (self.dim_a, self.dim_b);
        let total = op.dim();
        // index in the (A1 B1)(A2 B2).. order, from digits of the grouped order
        let map: Vec<usize> = (0..total)
            .map(|grouped| {
                let mut a_digits = vec![0; n];
                let mut b_digits = vec![0; n];
                let mut rem = grouped;
                for k in (0..n).rev() {
                    b_digits[k] = rem % db;
                    rem /= db;
                }
                for k in (0..n).rev() {
                    a_digits[k] = rem % da;
                    rem /= da;
                }
                (0..n).fold(0, |acc, k| (acc * da + a_digits[k]) * db + b_digits[k])
            })
            .collect();
        let src = op.matrix();
        let permuted = CMatrix::from_fn(total, total, |i, j| src[(map[i], map[j])]);
        Self::new(
            QuantumState::new(HermitianOperator::from_matrix_unchecked(permuted))?,
            da.pow(n as u32),
            db.pow(n as u32),
        )
    }
}

/// Partial trace of an operator on `H_A (x) H_B` (row index `a * dim_b + b`).
pub fn partial_trace(x: &HermitianOperator, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<HermitianOperator> {
    if dim_a * dim_b != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: dim_a * dim_b });
    }
    let m = x.matrix();
    let out = match keep {
        Subsystem::A => {
            CMatrix::from_fn(dim_a, dim_a, |i, j| (0..dim_b).map(|b| m[(i * dim_b + b, j * dim_b + b)]).sum())
        }
        Subsystem::B => {
            CMatrix::from_fn(dim_b, dim_b, |i, j| (0..dim_a).map(|a| m[(a * dim_b + i, a * dim_b + j)]).sum())
        }
    };
    Ok(HermitianOperator::from_matrix_unchecked(out))
}

/// `F(rho, rho') = Tr sqrt(rho^{1/2} rho' rho^{1/2})`.
pub fn fidelity(rho: &QuantumState, rho_prime: &QuantumState) -> Result<f64> {
    if rho.dim() != rho_prime.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: rho_prime.dim() });
    }
    let sqrt_rho = rho.op().apply(|v| v.max(0.0).sqrt())?;
    let inner = rho_prime.op().conjugate_by(sqrt_rho.matrix())?;
    Ok(inner.eigenvalues()?.iter().map(|v| v.max(0.0).sqrt()).sum())
}

/// Spectral purification `sum_i sqrt(lambda_i) |i> (x) |i>` on system (x) reference,
/// eigenvalues descending; component index is `system * dim + reference`.
pub fn purify(rho: &QuantumState) -> Result<CVector> {
    let d = rho.dim();
    let eig = rho.op().eigh()?;
    let mut psi = CVector::zeros(d * d);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let w = lambda.max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        for i in 0..d {
            psi[i * d + k] += eig.vectors[(i, k)] * c(w);
        }
    }
    Ok(psi)
}

/// Result of [`gentle_project`].
#[derive(Debug, Clone)]
pub struct GentleProjection {
    pub smoothed: QuantumState,
    pub distance: f64,
}

/// `sqrt(L) rho sqrt(L)` and its trace distance to `rho`.
pub fn gentle_project(rho: &QuantumState, lambda: &HermitianOperator) -> Result<GentleProjection> {
    if rho.dim() != lambda.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: lambda.dim() });
    }
    let eig = lambda.eigh()?;
    for &v in &eig.values {
        if !(-TOL.entry..=1.0 + TOL.entry).contains(&v) {
            return Err(Error::LambdaOutOfRange { eigenvalue: v });
        }
    }
    let sqrt_l = eig.rebuild(|_, v| v.clamp(0.0, 1.0).sqrt());
    let smoothed = QuantumState::new(rho.op().conjugate_by(sqrt_l.matrix())?)?;
    let distance = trace_distance(rho.op(), smoothed.op())?;
    Ok(GentleProjection { smoothed, distance })
}

/// The three sides of `Tr[{A<=B}(A-B)] <= Tr[P(A-B)] <= Tr[{A>=B}(A-B)]`.
#[derive(Debug, Clone, Copy)]
pub struct Lemma1Values {
    pub lhs: f64,
    pub upper: f64,
    pub lower: f64,
}

impl Lemma1Values {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower - tol <= self.lhs && self.lhs <= self.upper + tol
    }
}

pub(crate) fn check_unit_interval(p: &HermitianOperator) -> std::result::Result<(), f64> {
    let values = p.eigenvalues().map_err(|_| f64::NAN)?;
    match values.iter().find(|&&v| !(-TOL.entry..=1.0 + TOL.entry).contains(&v)) {
        Some(&v) => Err(v),
        None => Ok(()),
    }
}

pub fn check_lemma1(a: &HermitianOperator, b: &HermitianOperator, p: &HermitianOperator) -> Result<Lemma1Values> {
    let diff = a.sub(b)?;
    if p.dim() != diff.dim() {
        return Err(Error::DimensionMismatch { expected: diff.dim(), found: p.dim() });
    }
    check_unit_interval(p).map_err(|eigenvalue| Error::POutOfRange { eigenvalue })?;
    let eig = diff.eigh()?;
    let upper = eig.values.iter().filter(|&&v| Relation::Ge.keeps(v)).sum();
    let lower = eig.values.iter().filter(|&&v| Relation::Le.keeps(v)).sum();
    Ok(Lemma1Values { lhs: p.trace_product(&diff)?, upper, lower })
}

/// `Tr[{rho >= 2^{-n gamma} omega} omega]` and its bound `2^{n gamma}`.
#[derive(Debug, Clone, Copy)]
pub struct Lemma2Values {
    pub trace_value: f64,
    pub bound: f64,
}

pub fn check_lemma2(rho: &QuantumState, omega: &HermitianOperator, gamma: f64, n: u32) -> Result<Lemma2Values> {
    rho.require_normalized()?;
    let min = omega.min_eigenvalue()?;
    if min < -TOL.entry {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let exponent = n as f64 * gamma;
    let projector = spectral_projector(rho.op(), &omega.scale((-exponent).exp2()), Relation::Ge)?;
    Ok(Lemma2Values { trace_value: projector.op().trace_product(omega)?, bound: exponent.exp2() })
}

/// Operator serialization: row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(rename = "dimA", default, skip_serializing_if = "Option::is_none")]
    pub dim_a: Option<usize>,
    #[serde(rename = "dimB", default, skip_serializing_if = "Option::is_none")]
    pub dim_b: Option<usize>,
}

impl OperatorJson {
    pub fn from_operator(op: &HermitianOperator) -> Self {
        let d = op.dim();
        let m = op.matrix();
        Self {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect(),
            dim_a: None,
            dim_b: None,
        }
    }

    pub fn from_bipartite(state: &BipartiteState) -> Self {
        Self { dim_a: Some(state.dim_a()), dim_b: Some(state.dim_b()), ..Self::from_operator(state.op()) }
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        let d = self.dim;
        if self.re.len() != d || self.im.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.re.len().min(self.im.len()) });
        }
        for row in self.re.iter().chain(self.im.iter()) {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: row.len() });
            }
        }
        HermitianOperator::new(CMatrix::from_fn(d, d, |i, j| Complex64::new(self.re[i][j], self.im[i][j])))
    }

    /// Declared `(dimA, dimB)`, defaulting to a trivial `B` factor.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match (self.dim_a, self.dim_b) {
            (Some(a), Some(b)) => Ok((a, b)),
            (None, None) => Ok((self.dim, 1)),
            _ => Err(Error::InvalidArgument("dimA and dimB must be given together".into())),
        }
    }
}
