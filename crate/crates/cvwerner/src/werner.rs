//! Constructors for truncated two-mode Werner states, their partial
//! transposes, and the analytic PPT thresholds.
//!
//! Conventions: `lambda1 = tanh r` parametrizes the two-mode squeezed vacuum,
//! `lambda2 = tanh s` the thermal product. Truncated constructors return the
//! literal finite sums (trace below one); only the full mixture is normalized.
//! Infinite-dimensional states are represented at an explicit Fock cutoff with
//! no renormalization, so every claim about them carries a geometric tail.
//!
//! Dense `TwoModeOperator` storage grows as cutoff⁴; the `*_entry` functions
//! expose the same matrix elements for structured large-cutoff work.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::{partial_transpose_a, HermitianOps, TwoModeOperator};

/// Parameters of a truncated two-mode Werner state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub p: f64,
    pub n_trunc: usize,
}

impl WernerParams {
    pub fn new(lambda1: f64, lambda2: f64, p: f64, n_trunc: usize) -> Result<Self> {
        check_lambda("lambda1", lambda1)?;
        check_lambda("lambda2", lambda2)?;
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::ParamOutOfRange { name: "p", value: p, expected: "[0, 1]" });
        }
        if n_trunc < 2 {
            return Err(Error::ParamOutOfRange {
                name: "n_trunc",
                value: n_trunc as f64,
                expected: "an integer >= 2",
            });
        }
        Ok(Self { lambda1, lambda2, p, n_trunc })
    }
}

/// Parameters of the PPT boundary family: lambda1 = λ, lambda2² = λ,
/// p = q = (1 − λ)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParams {
    pub lambda: f64,
}

impl BoundaryParams {
    pub fn new(lambda: f64) -> Result<Self> {
        check_lambda("lambda", lambda)?;
        Ok(Self { lambda })
    }

    /// Mixing weight q = (1 − λ)/2 ∈ (0, 0.5].
    pub fn q(&self) -> f64 {
        (1.0 - self.lambda) / 2.0
    }

    pub fn werner_params(&self, n_trunc: usize) -> Result<WernerParams> {
        WernerParams::new(self.lambda, self.lambda.sqrt(), self.q(), n_trunc)
    }
}

fn check_lambda(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..1.0).contains(&value) || !value.is_finite() {
        return Err(Error::ParamOutOfRange { name, value, expected: "[0, 1)" });
    }
    Ok(())
}

fn check_positive_dim(name: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::ParamOutOfRange {
            name,
            value: n as f64,
            expected: if min == 1 { "an integer >= 1" } else { "an integer >= 2" },
        });
    }
    Ok(())
}

/// Normalization of the truncated mixture:
/// 1 / [p(1 − λ₁^{2N}) + (1 − p)(1 − λ₂^{2N})²].
pub fn mixture_normalization(params: &WernerParams) -> f64 {
    let n2 = 2 * params.n_trunc as i32;
    let sigma_trace = 1.0 - params.lambda1.powi(n2);
    let tau_trace = (1.0 - params.lambda2.powi(n2)).powi(2);
    1.0 / (params.p * sigma_trace + (1.0 - params.p) * tau_trace)
}

/// 𝒦 = (1 − λ²)(1 − λ)/2, the normalization of the infinite-dimensional
/// boundary partial transpose.
pub fn k_factor(lambda: f64) -> f64 {
    (1.0 - lambda * lambda) * (1.0 - lambda) / 2.0
}

/// 𝒦_N = (1 − λ²)(1 − λ) / [2(1 − λ^N)(1 − λ^{N+1})], its truncated analogue.
pub fn kn_factor(lambda: f64, n_trunc: usize) -> f64 {
    let n = n_trunc as i32;
    (1.0 - lambda * lambda) * (1.0 - lambda)
        / (2.0 * (1.0 - lambda.powi(n)) * (1.0 - lambda.powi(n + 1)))
}

/// 𝒥 = (1 − λ)².
pub fn j_factor(lambda: f64) -> f64 {
    (1.0 - lambda).powi(2)
}

/// 𝒥_N = [(1 − λ)/(1 − λ^N)]².
pub fn jn_factor(lambda: f64, n_trunc: usize) -> f64 {
    ((1.0 - lambda) / (1.0 - lambda.powi(n_trunc as i32))).powi(2)
}

/// Truncated two-mode squeezed vacuum:
/// (1 − λ₁²) Σ_{m,n<N} λ₁^{m+n} |m,m⟩⟨n,n|. Rank one, trace 1 − λ₁^{2N}.
pub fn build_tmsv_truncated(lambda1: f64, n: usize) -> Result<TwoModeOperator> {
    check_lambda("lambda1", lambda1)?;
    check_positive_dim("n", n, 1)?;
    let scale = 1.0 - lambda1 * lambda1;
    let mut out = TwoModeOperator::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            let v = scale * lambda1.powi((m + k) as i32);
            out.set(m, m, k, k, C64::new(v, 0.0));
        }
    }
    Ok(out)
}

/// Truncated thermal product:
/// (1 − λ₂²)² Σ_{m,n<N} λ₂^{2(m+n)} |m,n⟩⟨m,n|. Trace (1 − λ₂^{2N})².
pub fn build_thermal_product_truncated(lambda2: f64, n: usize) -> Result<TwoModeOperator> {
    check_lambda("lambda2", lambda2)?;
    check_positive_dim("n", n, 1)?;
    let scale = (1.0 - lambda2 * lambda2).powi(2);
    let mut out = TwoModeOperator::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            let v = scale * lambda2.powi(2 * (m + k) as i32);
            out.set(m, k, m, k, C64::new(v, 0.0));
        }
    }
    Ok(out)
}

/// Normalized truncated Werner mixture of the squeezed vacuum and the thermal
/// product.
pub fn build_werner_truncated(params: &WernerParams) -> Result<TwoModeOperator> {
    let norm = mixture_normalization(params);
    let sigma = build_tmsv_truncated(params.lambda1, params.n_trunc)?;
    let tau = build_thermal_product_truncated(params.lambda2, params.n_trunc)?;
    let mut out = TwoModeOperator::zeros(params.n_trunc, params.n_trunc);
    out.add_scaled(norm * params.p, &sigma);
    out.add_scaled(norm * (1.0 - params.p), &tau);
    Ok(out)
}

/// Largest mixing weight p for which the truncated Werner state stays PPT.
///
/// For λ₁ > λ₂² the bound is
/// p_N = 1 / [1 + (1 − λ₁²)/(1 − λ₂²)² · (λ₁/λ₂²)^{2N−3}];
/// for λ₁ ≤ λ₂² the N = 2 bound applies at every truncation level.
/// λ₁ = 0 makes the state diagonal, hence PPT for all p (threshold 1); this
/// covers the doubly degenerate λ₁ = λ₂ = 0 corner where both components are
/// the vacuum. λ₂ = 0 with λ₁ > 0 collapses the threshold to exactly 0.
pub fn ppt_threshold(lambda1: f64, lambda2: f64, n: usize) -> Result<f64> {
    check_lambda("lambda1", lambda1)?;
    check_lambda("lambda2", lambda2)?;
    check_positive_dim("n", n, 2)?;
    if lambda1 == 0.0 {
        return Ok(1.0);
    }
    if lambda2 == 0.0 {
        return Ok(0.0);
    }
    let ratio = lambda1 / (lambda2 * lambda2);
    if !ratio.is_finite() {
        return Err(Error::DegenerateRatio { lambda1, lambda2 });
    }
    let exponent = if ratio > 1.0 { (2 * n - 3) as i32 } else { 1 };
    let prefactor = (1.0 - lambda1 * lambda1) / (1.0 - lambda2 * lambda2).powi(2);
    Ok(1.0 / (1.0 + prefactor * ratio.powi(exponent)))
}

/// Locate the PPT boundary in p by bisection on the minimum eigenvalue of the
/// partial transpose. Independent of [`ppt_threshold`]; used to cross-check it.
pub fn numeric_ppt_threshold(lambda1: f64, lambda2: f64, n: usize, tol: f64) -> Result<f64> {
    check_lambda("lambda1", lambda1)?;
    check_lambda("lambda2", lambda2)?;
    check_positive_dim("n", n, 2)?;
    let min_eig = |p: f64| -> Result<f64> {
        let params = WernerParams::new(lambda1, lambda2, p, n)?;
        let pt = partial_transpose_a(&build_werner_truncated(&params)?);
        Ok(pt.eigenvalues_hermitian()?.min())
    };
    let psd_floor = -1e-13;
    if min_eig(1.0)? >= psd_floor {
        return Ok(1.0);
    }
    if min_eig(0.0)? < psd_floor {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if min_eig(mid)? >= psd_floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Matrix element ⟨j,mu| ρ_{q,N}^{T_A} / 𝒦_N |k,nu⟩ of the boundary partial
/// transpose before normalization: λ^{j+mu} (δ_{k,mu} δ_{nu,j} + δ_{jk} δ_{mu,nu})
/// inside the N×N corner.
pub fn boundary_pt_entry_unnormalized(
    lambda: f64,
    n: usize,
    j: usize,
    mu: usize,
    k: usize,
    nu: usize,
) -> f64 {
    if j >= n || mu >= n || k >= n || nu >= n {
        return 0.0;
    }
    let mut v = 0.0;
    if k == mu && nu == j {
        v += lambda.powi((j + mu) as i32);
    }
    if j == k && mu == nu {
        v += lambda.powi((j + mu) as i32);
    }
    v
}

/// Partial transpose of the truncated boundary state,
/// 𝒦_N Σ_{m,n<N} λ^{m+n} (|n,m⟩⟨m,n| + |m,n⟩⟨m,n|). Trace one.
pub fn build_boundary_pt(lambda: f64, n: usize) -> Result<TwoModeOperator> {
    check_lambda("lambda", lambda)?;
    check_positive_dim("n", n, 2)?;
    let kn = kn_factor(lambda, n);
    Ok(TwoModeOperator::from_entries(n, n, |j, mu, k, nu| {
        C64::new(kn * boundary_pt_entry_unnormalized(lambda, n, j, mu, k, nu), 0.0)
    }))
}

/// Matrix element ⟨j,mu| ρ_q^{T_A} |k,nu⟩ of the infinite-dimensional boundary
/// partial transpose, 𝒦 λ^{j+mu} (δ_{k,mu} δ_{nu,j} + δ_{jk} δ_{mu,nu}).
pub fn rho_q_pt_entry(lambda: f64, j: usize, mu: usize, k: usize, nu: usize) -> f64 {
    let mut v = 0.0;
    if k == mu && nu == j {
        v += lambda.powi((j + mu) as i32);
    }
    if j == k && mu == nu {
        v += lambda.powi((j + mu) as i32);
    }
    k_factor(lambda) * v
}

/// Infinite-dimensional ρ_q^{T_A} restricted to Fock indices below `cutoff`.
/// Not renormalized; the trace deficit is the geometric tail.
pub fn build_rho_q_pt_cutoff(lambda: f64, cutoff: usize) -> Result<TwoModeOperator> {
    check_lambda("lambda", lambda)?;
    check_positive_dim("cutoff", cutoff, 2)?;
    Ok(TwoModeOperator::from_entries(cutoff, cutoff, |j, mu, k, nu| {
        C64::new(rho_q_pt_entry(lambda, j, mu, k, nu), 0.0)
    }))
}

/// Analytic trace of [`build_rho_q_pt_cutoff`]:
/// 𝒦 [(1 − λ^{2M})/(1 − λ²) + (1 − λ^M)²/(1 − λ)²].
pub fn rho_q_pt_cutoff_trace(lambda: f64, cutoff: usize) -> f64 {
    let m = cutoff as i32;
    k_factor(lambda)
        * ((1.0 - lambda.powi(2 * m)) / (1.0 - lambda * lambda)
            + (1.0 - lambda.powi(m)).powi(2) / (1.0 - lambda).powi(2))
}

/// Matrix element of ρ̄_q^{T_A} = 𝒥 (ρ_q^{T_A}/𝒦 − Σ_n λ^{2n} |n,n⟩⟨n,n|).
pub fn rho_bar_q_pt_entry(lambda: f64, j: usize, mu: usize, k: usize, nu: usize) -> f64 {
    let mut v = 0.0;
    if k == mu && nu == j {
        v += lambda.powi((j + mu) as i32);
    }
    if j == k && mu == nu {
        v += lambda.powi((j + mu) as i32);
    }
    if j == mu && j == k && j == nu {
        v -= lambda.powi(2 * j as i32);
    }
    j_factor(lambda) * v
}

/// Residual state ρ̄_q^{T_A} of the infinite-dimensional decomposition at an
/// explicit cutoff. A density matrix up to the geometric tail.
pub fn build_rho_bar_q_pt_cutoff(lambda: f64, cutoff: usize) -> Result<TwoModeOperator> {
    check_lambda("lambda", lambda)?;
    check_positive_dim("cutoff", cutoff, 2)?;
    Ok(TwoModeOperator::from_entries(cutoff, cutoff, |j, mu, k, nu| {
        C64::new(rho_bar_q_pt_entry(lambda, j, mu, k, nu), 0.0)
    }))
}

/// Matrix element of the truncated sequence member
/// ρ̄_{q,N}^{T_A} = 𝒥_N (ρ_{q,N}^{T_A}/𝒦_N − Σ_{n<N} λ^{2n} |n,n⟩⟨n,n|).
pub fn rho_bar_q_n_pt_entry(
    lambda: f64,
    n_trunc: usize,
    j: usize,
    mu: usize,
    k: usize,
    nu: usize,
) -> f64 {
    if j >= n_trunc || mu >= n_trunc || k >= n_trunc || nu >= n_trunc {
        return 0.0;
    }
    let mut v = boundary_pt_entry_unnormalized(lambda, n_trunc, j, mu, k, nu);
    if j == mu && j == k && j == nu {
        v -= lambda.powi(2 * j as i32);
    }
    jn_factor(lambda, n_trunc) * v
}

/// The truncated residual state embedded in a cutoff-sized space. Trace one
/// exactly; all support inside the first N Fock levels of each mode.
pub fn build_rho_bar_q_n_pt(lambda: f64, n_trunc: usize, cutoff: usize) -> Result<TwoModeOperator> {
    check_lambda("lambda", lambda)?;
    check_positive_dim("n_trunc", n_trunc, 2)?;
    if cutoff < n_trunc {
        return Err(Error::CutoffTooSmall { cutoff, n_trunc });
    }
    Ok(TwoModeOperator::from_entries(cutoff, cutoff, |j, mu, k, nu| {
        C64::new(rho_bar_q_n_pt_entry(lambda, n_trunc, j, mu, k, nu), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{partial_trace, tensor, SingleModeOperator, Subsystem};

    #[test]
    fn tmsv_vacuum_limit() {
        let rho = build_tmsv_truncated(0.0, 3).unwrap();
        for m in 0..3 {
            for mu in 0..3 {
                for n in 0..3 {
                    for nu in 0..3 {
                        let expect = if (m, mu, n, nu) == (0, 0, 0, 0) { 1.0 } else { 0.0 };
                        assert_eq!(rho.get(m, mu, n, nu).re, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn tmsv_trace_is_geometric_sum() {
        let rho = build_tmsv_truncated(0.5, 4).unwrap();
        assert!((rho.trace().re - 0.99609375).abs() < 1e-15);
    }

    #[test]
    fn tmsv_has_rank_one() {
        let rho = build_tmsv_truncated(0.7, 5).unwrap();
        let eigs = rho.eigenvalues_hermitian().unwrap();
        let nonzero = eigs.values().iter().filter(|e| e.abs() > 1e-12).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn thermal_product_structure() {
        let rho = build_thermal_product_truncated(0.0, 2).unwrap();
        assert_eq!(rho.get(0, 0, 0, 0).re, 1.0);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);

        let lambda2: f64 = 0.6;
        let n = 4;
        let scale = 1.0 - lambda2 * lambda2;
        let single: Vec<f64> = (0..n).map(|m| scale * lambda2.powi(2 * m as i32)).collect();
        let t = SingleModeOperator::from_diagonal(&single);
        let prod = tensor(&t, &t);
        let direct = build_thermal_product_truncated(lambda2, n).unwrap();
        assert!(direct.max_abs_diff(&prod) < 1e-15);
    }

    #[test]
    fn thermal_trace_value() {
        let rho = build_thermal_product_truncated(0.5, 2).unwrap();
        assert!((rho.trace().re - 0.87890625).abs() < 1e-15);
    }

    #[test]
    fn werner_endpoints() {
        let n = 4;
        let p1 = WernerParams::new(0.5, 0.3, 1.0, n).unwrap();
        let rho = build_werner_truncated(&p1).unwrap();
        let mut sigma = build_tmsv_truncated(0.5, n).unwrap();
        let scale = 1.0 / (1.0 - 0.5f64.powi(2 * n as i32));
        let mut expect = TwoModeOperator::zeros(n, n);
        expect.add_scaled(scale, &mut sigma);
        assert!(rho.max_abs_diff(&expect) < 1e-14);

        let p0 = WernerParams::new(0.5, 0.3, 0.0, n).unwrap();
        let rho = build_werner_truncated(&p0).unwrap();
        let tau = build_thermal_product_truncated(0.3, n).unwrap();
        let scale = 1.0 / (1.0 - 0.3f64.powi(2 * n as i32)).powi(2);
        let mut expect = TwoModeOperator::zeros(n, n);
        expect.add_scaled(scale, &tau);
        assert!(rho.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn werner_is_a_state() {
        let params = WernerParams::new(0.6, 0.5, 0.3, 5).unwrap();
        let rho = build_werner_truncated(&params).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.eigenvalues_hermitian().unwrap().min() > -1e-12);
    }

    #[test]
    fn ppt_threshold_boundary_case() {
        // lambda1 = lambda2²: both regions meet at (1 - lambda1)/2.
        let t = ppt_threshold(0.25, 0.5, 4).unwrap();
        assert!((t - 0.375).abs() < 1e-15);
    }

    #[test]
    fn ppt_threshold_degenerate_cases() {
        assert_eq!(ppt_threshold(0.0, 0.5, 3).unwrap(), 1.0);
        assert_eq!(ppt_threshold(0.0, 0.0, 2).unwrap(), 1.0);
        assert_eq!(ppt_threshold(0.5, 0.0, 3).unwrap(), 0.0);
    }

    #[test]
    fn ppt_threshold_strict_region_value() {
        let t = ppt_threshold(0.5, 0.5, 3).unwrap();
        assert!((t - 3.0 / 35.0).abs() < 1e-15);
    }

    #[test]
    fn numeric_threshold_matches_analytic() {
        for &(l1, l2, n) in &[(0.25, 0.5, 2), (0.5, 0.5, 3), (0.0, 0.4, 3), (0.6, 0.3, 2)] {
            let analytic = ppt_threshold(l1, l2, n).unwrap();
            let numeric = numeric_ppt_threshold(l1, l2, n, 1e-9).unwrap();
            assert!(
                (analytic - numeric).abs() < 1e-7,
                "({l1}, {l2}, {n}): analytic {analytic} vs numeric {numeric}"
            );
        }
    }

    #[test]
    fn boundary_pt_vacuum_and_normalization() {
        let rho = build_boundary_pt(0.0, 5).unwrap();
        assert_eq!(rho.get(0, 0, 0, 0).re, 1.0);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);

        assert!((kn_factor(0.5, 2) - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_pt_trace_is_one() {
        for &(l, n) in &[(0.3, 3), (0.7, 6), (0.95, 4)] {
            let rho = build_boundary_pt(l, n).unwrap();
            assert!((rho.trace().re - 1.0).abs() < 1e-12, "({l}, {n})");
        }
    }

    #[test]
    fn boundary_pt_agrees_with_mixture_route() {
        // Two independent construction paths for the same state.
        let (lambda, n) = (0.4, 4);
        let direct = build_boundary_pt(lambda, n).unwrap();
        let params = BoundaryParams::new(lambda).unwrap().werner_params(n).unwrap();
        let via_mixture = partial_transpose_a(&build_werner_truncated(&params).unwrap());
        assert!(direct.max_abs_diff(&via_mixture) < 1e-12);
    }

    #[test]
    fn rho_q_pt_cutoff_basics() {
        let rho = build_rho_q_pt_cutoff(0.0, 3).unwrap();
        assert_eq!(rho.trace().re, 1.0);
        assert_eq!(rho.get(0, 0, 0, 0).re, 1.0);

        let lambda = 0.5;
        let rho = build_rho_q_pt_cutoff(lambda, 4).unwrap();
        assert!((rho.get(0, 1, 1, 0).re - k_factor(lambda) * lambda).abs() < 1e-15);
    }

    #[test]
    fn rho_q_pt_trace_saturates_at_large_cutoff() {
        // Entry-level sum against the analytic trace; cutoff 200 is far past
        // the point where the geometric tail drops below 1e-12.
        let (lambda, cutoff) = (0.5, 200);
        let analytic = rho_q_pt_cutoff_trace(lambda, cutoff);
        assert!((analytic - 1.0).abs() < 1e-12);
        let mut summed = 0.0;
        for j in 0..cutoff {
            for mu in 0..cutoff {
                summed += rho_q_pt_entry(lambda, j, mu, j, mu);
            }
        }
        assert!((summed - analytic).abs() < 1e-13);
    }

    #[test]
    fn rho_bar_q_pt_diagonal_and_vacuum() {
        let rho = build_rho_bar_q_pt_cutoff(0.0, 4).unwrap();
        assert_eq!(rho.get(0, 0, 0, 0).re, 1.0);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);

        let lambda = 0.6;
        let rho = build_rho_bar_q_pt_cutoff(lambda, 8).unwrap();
        for n in 0..8 {
            let expect = j_factor(lambda) * lambda.powi(2 * n as i32);
            assert!((rho.get(n, n, n, n).re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn rho_bar_q_pt_is_psd_at_moderate_cutoff() {
        let rho = build_rho_bar_q_pt_cutoff(0.5, 60).unwrap();
        assert!(rho.eigenvalues_hermitian().unwrap().min() > -1e-12);
    }

    #[test]
    fn rho_bar_q_n_pt_is_a_density_matrix() {
        let rho = build_rho_bar_q_n_pt(0.5, 6, 10).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        // support confined to the first N levels
        for j in 0..10 {
            for mu in 0..10 {
                for k in 0..10 {
                    for nu in 0..10 {
                        if j.max(mu).max(k).max(nu) >= 6 {
                            assert_eq!(rho.get(j, mu, k, nu).re, 0.0);
                        }
                    }
                }
            }
        }

        let vac = build_rho_bar_q_n_pt(0.0, 3, 5).unwrap();
        assert_eq!(vac.get(0, 0, 0, 0).re, 1.0);
        assert!((vac.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn restricted_rho_q_matches_boundary_up_to_normalization() {
        let (lambda, n) = (0.5, 4);
        let big = build_rho_q_pt_cutoff(lambda, 12).unwrap();
        let restricted = big.restrict(n);
        let boundary = build_boundary_pt(lambda, n).unwrap();
        let ratio = kn_factor(lambda, n) / k_factor(lambda);
        let mut scaled = TwoModeOperator::zeros(n, n);
        scaled.add_scaled(ratio, &restricted);
        assert!(scaled.max_abs_diff(&boundary) < 1e-12);
    }

    #[test]
    fn reduced_rho_q_matches_closed_diagonal() {
        // Tr_A of the cutoff state against 𝒦(λ^{2m} + λ^m Σ_{j<M} λ^j) termwise.
        let (lambda, cutoff) = (0.5, 50);
        let rho = build_rho_q_pt_cutoff(lambda, cutoff).unwrap();
        let reduced = partial_trace(&rho, Subsystem::A);
        let partial_geo = (1.0 - lambda.powi(cutoff as i32)) / (1.0 - lambda);
        for m in 0..cutoff {
            let expect =
                k_factor(lambda) * (lambda.powi(2 * m as i32) + lambda.powi(m as i32) * partial_geo);
            assert!((reduced.get(m, m).re - expect).abs() < 1e-14);
            for n in 0..cutoff {
                if m != n {
                    assert!(reduced.get(m, n).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(matches!(
            build_tmsv_truncated(1.0, 3),
            Err(Error::ParamOutOfRange { .. })
        ));
        assert!(matches!(
            build_boundary_pt(-0.1, 3),
            Err(Error::ParamOutOfRange { .. })
        ));
        assert!(matches!(
            build_rho_bar_q_n_pt(0.5, 6, 4),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(WernerParams::new(0.5, 0.5, 1.2, 3).is_err());
    }
}
