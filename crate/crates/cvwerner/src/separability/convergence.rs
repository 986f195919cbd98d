//! Trace-norm convergence of the truncated residual states.
//!
//! The difference ρ̄_q^{T_A} − ρ̄_{q,N}^{T_A} is block diagonal: 1×1 blocks on
//! |l,l⟩ and 2×2 blocks on span{|j,k⟩, |k,j⟩} with j > k (nothing connects
//! different sectors; tests check this against the dense constructors). Each
//! 2×2 block has one zero eigenvalue, so the trace norm is a sum of closed
//! geometric series and collapses to 4λ^N − 2λ^{2N} up to the cutoff tail.
//! The numeric route below assembles every block from the entry functions and
//! diagonalizes it, never materializing the cutoff⁴ dense matrix.

use crate::error::{Error, Result};
use crate::werner::{j_factor, jn_factor, rho_bar_q_n_pt_entry, rho_bar_q_pt_entry};

/// Nonzero eigenvalue of the 2×2 difference block on span{|j,k⟩, |k,j⟩},
/// j > k: 2(𝒥 − 𝒥_N) λ^{j+k} when both indices sit below N, else 2𝒥 λ^{j+k}.
/// The first branch is nonpositive since 𝒥 ≤ 𝒥_N.
pub fn block_eigenvalue_offdiag(lambda: f64, n_trunc: usize, j: usize, k: usize) -> f64 {
    assert!(j > k, "off-diagonal blocks need j > k");
    let power = lambda.powi((j + k) as i32);
    if j < n_trunc && k < n_trunc {
        2.0 * (j_factor(lambda) - jn_factor(lambda, n_trunc)) * power
    } else {
        2.0 * j_factor(lambda) * power
    }
}

/// Eigenvalue of the 1×1 difference block on |l,l⟩:
/// (𝒥 − 𝒥_N) λ^{2l} below N, 𝒥 λ^{2l} from N on.
pub fn block_eigenvalue_diag(lambda: f64, n_trunc: usize, l: usize) -> f64 {
    let power = lambda.powi(2 * l as i32);
    if l < n_trunc {
        (j_factor(lambda) - jn_factor(lambda, n_trunc)) * power
    } else {
        j_factor(lambda) * power
    }
}

/// Outcome of one convergence evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCheck {
    /// Trace norm of the difference at the cutoff, from per-block spectra.
    pub numeric: f64,
    /// The closed form 4λ^N − 2λ^{2N} of the full trace norm.
    pub closed_form: f64,
    /// Mass of the blocks beyond the cutoff (exact geometric remainder);
    /// bounds |numeric − closed_form|.
    pub tail_bound: f64,
}

/// Eigenvalues of a real symmetric 2×2 matrix [[a, b], [b, c]].
fn eig2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let radius = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (mean - radius, mean + radius)
}

/// Compare the numeric trace norm ‖ρ̄_q^{T_A} − ρ̄_{q,N}^{T_A}‖₁ at a finite
/// cutoff with its closed form.
pub fn trace_norm_convergence(lambda: f64, n_trunc: usize, cutoff: usize) -> Result<ConvergenceCheck> {
    if !(0.0..1.0).contains(&lambda) || !lambda.is_finite() {
        return Err(Error::ParamOutOfRange { name: "lambda", value: lambda, expected: "[0, 1)" });
    }
    if n_trunc < 2 {
        return Err(Error::ParamOutOfRange {
            name: "n_trunc",
            value: n_trunc as f64,
            expected: "an integer >= 2",
        });
    }
    if cutoff < n_trunc {
        return Err(Error::CutoffTooSmall { cutoff, n_trunc });
    }

    let entry = |j: usize, mu: usize, k: usize, nu: usize| -> f64 {
        rho_bar_q_pt_entry(lambda, j, mu, k, nu) - rho_bar_q_n_pt_entry(lambda, n_trunc, j, mu, k, nu)
    };

    let mut numeric = 0.0;
    for l in 0..cutoff {
        numeric += entry(l, l, l, l).abs();
    }
    for j in 1..cutoff {
        for k in 0..j {
            let a = entry(j, k, j, k);
            let b = entry(j, k, k, j);
            let c = entry(k, j, k, j);
            let (lo, hi) = eig2(a, b, c);
            numeric += lo.abs() + hi.abs();
        }
    }

    let n = n_trunc as i32;
    let closed_form = 4.0 * lambda.powi(n) - 2.0 * lambda.powi(2 * n);

    // Exact mass of the omitted blocks (max index >= cutoff): the nonzero
    // eigenvalue there is 2J λ^{j+k} (j > k) or J λ^{2l}.
    let m = cutoff as i32;
    let jf = j_factor(lambda);
    let tail_bound = jf
        * (lambda.powi(2 * m) / (1.0 - lambda * lambda)
            + 2.0 / (1.0 - lambda)
                * (lambda.powi(m) / (1.0 - lambda) - lambda.powi(2 * m) / (1.0 - lambda * lambda)));

    Ok(ConvergenceCheck { numeric, closed_form, tail_bound })
}

/// Dense verification that the difference operator really is block diagonal:
/// max |entry| over all matrix elements connecting distinct sectors
/// {|j,k⟩, |k,j⟩}. Builds the cutoff⁴ dense operators, so keep the cutoff
/// small.
pub fn off_block_residual(lambda: f64, n_trunc: usize, cutoff: usize) -> Result<f64> {
    use crate::werner::{build_rho_bar_q_n_pt, build_rho_bar_q_pt_cutoff};
    let full = build_rho_bar_q_pt_cutoff(lambda, cutoff)?;
    let truncated = build_rho_bar_q_n_pt(lambda, n_trunc, cutoff)?;
    let mut max_off = 0.0f64;
    for j in 0..cutoff {
        for mu in 0..cutoff {
            for k in 0..cutoff {
                for nu in 0..cutoff {
                    // same sector iff the unordered pairs {j,mu} and {k,nu} agree
                    let same = (j == k && mu == nu) || (j == nu && mu == k);
                    if !same {
                        let d = (full.get(j, mu, k, nu) - truncated.get(j, mu, k, nu)).norm();
                        max_off = max_off.max(d);
                    }
                }
            }
        }
    }
    Ok(max_off)
}
