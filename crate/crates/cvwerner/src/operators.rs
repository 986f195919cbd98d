//! Dense operators on truncated Fock spaces.
//!
//! Two-mode operators use the flat index convention `m * dim_b + mu` for the
//! basis ket |m⟩_A ⊗ |mu⟩_B (A-major), which makes the partial transpose on
//! mode A a plain block-index swap. All spectral routines go through LAPACK's
//! dense Hermitian solvers; eigenvalues come back sorted ascending.

use ndarray::{Array1, Array2};
use ndarray_linalg::{EigValsh, Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Max entry deviation from the adjoint tolerated by Hermitian-only routines.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalues in (-EIG_CLAMP_TOL, 0] are clamped to 0 before entropy sums.
pub const EIG_CLAMP_TOL: f64 = 1e-10;

/// Which mode survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// State vector of a single truncated mode; index k is the Fock state |k⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeVector {
    amplitudes: Array1<C64>,
}

impl SingleModeVector {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        assert!(!amplitudes.is_empty(), "vector needs at least one amplitude");
        Self { amplitudes: Array1::from(amplitudes) }
    }

    /// Fock basis vector |k⟩ in a space of the given dimension.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amps = Array1::zeros(dim);
        amps[k] = C64::new(1.0, 0.0);
        Self { amplitudes: amps }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn conj(&self) -> Self {
        Self { amplitudes: self.amplitudes.mapv(|z| z.conj()) }
    }

    /// |v⟩⟨v| as a dense operator.
    pub fn outer(&self) -> SingleModeOperator {
        let d = self.dim();
        let mut m = Array2::zeros((d, d));
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] = self.amplitudes[r] * self.amplitudes[c].conj();
            }
        }
        SingleModeOperator { entries: m }
    }

    /// Zero-pad (or keep) the vector so it lives in a space of dimension `dim`.
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.dim());
        let mut amps = Array1::zeros(dim);
        amps.slice_mut(ndarray::s![..self.dim()]).assign(&self.amplitudes);
        Self { amplitudes: amps }
    }
}

/// Dense operator on a single truncated mode; entry (m, n) = ⟨m|X|n⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeOperator {
    entries: Array2<C64>,
}

impl SingleModeOperator {
    pub fn new(entries: Array2<C64>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "operator must be square");
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: Array2::zeros((dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: Array2::eye(dim) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Array2::zeros((diag.len(), diag.len()));
        for (k, d) in diag.iter().enumerate() {
            m[(k, k)] = C64::new(*d, 0.0);
        }
        Self { entries: m }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.entries[(m, n)]
    }

    pub fn set(&mut self, m: usize, n: usize, value: C64) {
        self.entries[(m, n)] = value;
    }
}

/// Dense operator on two truncated modes with A-major flat indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeOperator {
    dim_a: usize,
    dim_b: usize,
    entries: Array2<C64>,
}

impl TwoModeOperator {
    pub fn zeros(dim_a: usize, dim_b: usize) -> Self {
        let side = dim_a * dim_b;
        Self { dim_a, dim_b, entries: Array2::zeros((side, side)) }
    }

    /// Build from the entry function ((m, mu), (n, nu)) ↦ ⟨m,mu|X|n,nu⟩.
    pub fn from_entries<F>(dim_a: usize, dim_b: usize, f: F) -> Self
    where
        F: Fn(usize, usize, usize, usize) -> C64,
    {
        let mut out = Self::zeros(dim_a, dim_b);
        for m in 0..dim_a {
            for mu in 0..dim_b {
                for n in 0..dim_a {
                    for nu in 0..dim_b {
                        out.entries[(m * dim_b + mu, n * dim_b + nu)] = f(m, mu, n, nu);
                    }
                }
            }
        }
        out
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn side(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn get(&self, m: usize, mu: usize, n: usize, nu: usize) -> C64 {
        self.entries[(m * self.dim_b + mu, n * self.dim_b + nu)]
    }

    pub fn set(&mut self, m: usize, mu: usize, n: usize, nu: usize, value: C64) {
        self.entries[(m * self.dim_b + mu, n * self.dim_b + nu)] = value;
    }

    pub fn add_scaled(&mut self, weight: f64, other: &TwoModeOperator) {
        assert_eq!(self.entries.dim(), other.entries.dim());
        self.entries.scaled_add(C64::new(weight, 0.0), &other.entries);
    }

    /// Accumulate `weight * |t⟩⟨t|` for a flat two-mode amplitude vector `t`.
    pub fn add_outer(&mut self, weight: f64, amps: &Array1<C64>) {
        let side = self.side();
        assert_eq!(amps.len(), side);
        let w = C64::new(weight, 0.0);
        // Fill the upper triangle, then mirror; halves the rank-1 update cost.
        for r in 0..side {
            let wr = w * amps[r];
            for c in r..side {
                self.entries[(r, c)] += wr * amps[c].conj();
            }
        }
    }

    /// Copy lower triangle from the upper one; call once after a run of
    /// `add_outer` accumulations.
    pub fn mirror_upper(&mut self) {
        let side = self.side();
        for r in 0..side {
            for c in (r + 1)..side {
                self.entries[(c, r)] = self.entries[(r, c)].conj();
            }
        }
    }

    /// Accumulate `weight * |a,b⟩⟨a,b|` for unnormalized single-mode kets.
    pub fn add_product_projector(
        &mut self,
        weight: f64,
        ket_a: &SingleModeVector,
        ket_b: &SingleModeVector,
    ) {
        assert_eq!(ket_a.dim(), self.dim_a);
        assert_eq!(ket_b.dim(), self.dim_b);
        let mut t = Array1::zeros(self.side());
        for m in 0..self.dim_a {
            for mu in 0..self.dim_b {
                t[m * self.dim_b + mu] = ket_a.amplitudes()[m] * ket_b.amplitudes()[mu];
            }
        }
        self.add_outer(weight, &t);
    }

    /// Restrict to the first `n` Fock levels of each mode.
    pub fn restrict(&self, n: usize) -> TwoModeOperator {
        assert!(n <= self.dim_a && n <= self.dim_b);
        TwoModeOperator::from_entries(n, n, |m, mu, k, nu| self.get(m, mu, k, nu))
    }

    /// Max entry difference against another operator of the same shape.
    pub fn max_abs_diff(&self, other: &TwoModeOperator) -> f64 {
        assert_eq!(self.entries.dim(), other.entries.dim());
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Real spectrum of a Hermitian operator, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    fn from_ascending(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Shared dense-matrix interface for the spectral operations.
pub trait HermitianOps {
    fn matrix(&self) -> &Array2<C64>;

    fn side_len(&self) -> usize {
        self.matrix().nrows()
    }

    fn trace(&self) -> C64 {
        self.matrix().diag().sum()
    }

    /// Max entry deviation from the adjoint.
    fn hermiticity_deviation(&self) -> f64 {
        let m = self.matrix();
        let n = m.nrows();
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        dev
    }

    fn check_hermitian(&self, tol: f64) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NonHermitianInput { deviation: dev, tol });
        }
        Ok(())
    }

    /// Full real spectrum, ascending.
    fn eigenvalues_hermitian(&self) -> Result<Spectrum> {
        self.check_hermitian(HERMITICITY_TOL)?;
        let vals = self.matrix().eigvalsh(UPLO::Lower)?;
        Ok(Spectrum::from_ascending(vals.to_vec()))
    }

    /// Spectrum together with the unitary of column eigenvectors, i.e.
    /// `M v_i = w_i v_i` for the i-th column.
    fn eigh_full(&self) -> Result<(Spectrum, Array2<C64>)> {
        self.check_hermitian(HERMITICITY_TOL)?;
        let (vals, vecs) = self.matrix().eigh(UPLO::Lower)?;
        // The backend diagonalizes the transpose for row-major complex input;
        // conjugating restores eigenvectors of the matrix itself.
        Ok((Spectrum::from_ascending(vals.to_vec()), vecs.mapv(|z| z.conj())))
    }

    /// Sum of absolute eigenvalues.
    fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigenvalues_hermitian()?.values().iter().map(|e| e.abs()).sum())
    }

    /// Von Neumann entropy −Σ f ln f (natural log, 0·ln 0 = 0) with the
    /// default state tolerances.
    fn von_neumann_entropy(&self) -> Result<f64> {
        self.von_neumann_entropy_with_tol(EIG_CLAMP_TOL, EIG_CLAMP_TOL)
    }

    /// Entropy with explicit trace and positivity tolerances; cutoff-truncated
    /// states carry a small trace deficit that callers may need to allow for.
    fn von_neumann_entropy_with_tol(&self, trace_tol: f64, psd_tol: f64) -> Result<f64> {
        let spectrum = self.eigenvalues_hermitian()?;
        let trace: f64 = spectrum.sum();
        if (trace - 1.0).abs() > trace_tol {
            return Err(Error::NotAState {
                reason: format!("trace {trace} deviates from 1 by more than {trace_tol:.3e}"),
            });
        }
        if spectrum.min() < -psd_tol {
            return Err(Error::NotAState {
                reason: format!("minimum eigenvalue {:.3e} below -{psd_tol:.3e}", spectrum.min()),
            });
        }
        Ok(entropy_from_eigenvalues(spectrum.values(), psd_tol))
    }
}

impl HermitianOps for SingleModeOperator {
    fn matrix(&self) -> &Array2<C64> {
        &self.entries
    }
}

impl HermitianOps for TwoModeOperator {
    fn matrix(&self) -> &Array2<C64> {
        &self.entries
    }
}

/// −Σ f ln f over a clamped eigenvalue list.
pub fn entropy_from_eigenvalues(eigenvalues: &[f64], clamp: f64) -> f64 {
    let mut s = 0.0;
    for &f in eigenvalues {
        let f = if f <= 0.0 {
            if f > -clamp {
                0.0
            } else {
                f
            }
        } else {
            f
        };
        if f > 0.0 {
            s -= f * f.ln();
        }
    }
    s
}

/// Kronecker product realizing |m⟩⟨n| ⊗ |mu⟩⟨nu| structure:
/// entry ((m,mu),(n,nu)) = a(m,n) · b(mu,nu).
pub fn tensor(a: &SingleModeOperator, b: &SingleModeOperator) -> TwoModeOperator {
    let (da, db) = (a.dim(), b.dim());
    TwoModeOperator::from_entries(da, db, |m, mu, n, nu| a.get(m, n) * b.get(mu, nu))
}

/// Partial transpose on mode A: ⟨m,mu|out|n,nu⟩ = ⟨n,mu|x|m,nu⟩.
pub fn partial_transpose_a(x: &TwoModeOperator) -> TwoModeOperator {
    TwoModeOperator::from_entries(x.dim_a(), x.dim_b(), |m, mu, n, nu| x.get(n, mu, m, nu))
}

/// Trace out one mode: keep = A gives out(m,n) = Σ_mu ⟨m,mu|x|n,mu⟩.
pub fn partial_trace(x: &TwoModeOperator, keep: Subsystem) -> SingleModeOperator {
    match keep {
        Subsystem::A => {
            let mut out = SingleModeOperator::zeros(x.dim_a());
            for m in 0..x.dim_a() {
                for n in 0..x.dim_a() {
                    let mut acc = C64::new(0.0, 0.0);
                    for mu in 0..x.dim_b() {
                        acc += x.get(m, mu, n, mu);
                    }
                    out.set(m, n, acc);
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = SingleModeOperator::zeros(x.dim_b());
            for mu in 0..x.dim_b() {
                for nu in 0..x.dim_b() {
                    let mut acc = C64::new(0.0, 0.0);
                    for m in 0..x.dim_a() {
                        acc += x.get(m, mu, m, nu);
                    }
                    out.set(mu, nu, acc);
                }
            }
            out
        }
    }
}
