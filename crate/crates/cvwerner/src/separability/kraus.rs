//! Product decomposition of the two-level boundary state by the
//! subtract-and-solve method for 2×N systems.
//!
//! Working on the (rank-3) boundary partial transpose ρ = ρ_{q,2}^{T_A}/𝒦₂,
//! the squeezed-vacuum range vector |v⟩ = |0,0⟩ + λ|1,1⟩ is subtracted once,
//! which drops the rank by one and leaves σ = ρ − |v⟩⟨v| positive with a
//! positive partial transpose. Product vectors |e,f⟩ with
//! |e⟩ = α|0⟩ + |1⟩ are then fixed by requiring |e,f⟩ ⊥ ker σ and
//! |e*,f⟩ ⊥ ker σ^{T_A}, encoded in a 2×2 matrix M(α, α*) whose determinant
//! reduces to the polynomial λαα* − 1 = 0. Only the modulus of α is
//! constrained; four equally spaced phases α_n = λ^{-1/2} e^{iπn/2} are taken,
//! matching the four phase vectors of the two-level decomposition operator.
//! Solving M f⃗ = 0 per root and fitting nonnegative weights reassembles σ
//! exactly, so |v⟩⟨v| plus the four product projectors reproduces ρ.

use ndarray::{Array1, Array2};
use ndarray_linalg::Solve;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::{partial_transpose_a, HermitianOps, SingleModeVector, TwoModeOperator};
use crate::separability::ProductTerm;
use crate::werner::{build_boundary_pt, kn_factor};

/// Eigenvalues below `RANK_TOL` times the spectral radius count as kernel.
const RANK_TOL: f64 = 1e-10;

/// Full record of the two-level construction: every intermediate object a
/// check can look at.
#[derive(Debug, Clone)]
pub struct KrausN2Trace {
    /// Flat amplitudes of the subtracted range vector |0,0⟩ + λ|1,1⟩.
    pub subtracted_vector: Array1<C64>,
    /// Kernel vector gained by the subtracted state σ (beyond the kernel the
    /// boundary state already had).
    pub kernel_psi1: Array1<C64>,
    /// Kernel vector of σ^{T_A} supported on the {|0,1⟩, |1,0⟩} sector.
    pub kernel_psi2: Array1<C64>,
    /// The four phase roots of the determinant polynomial.
    pub roots: [C64; 4],
    /// Product vectors (α|0⟩ + |1⟩) ⊗ |f⟩ with their fitted weights.
    pub product_vectors: Vec<ProductTerm>,
    /// Numerical ranks before subtraction: the state and its partial transpose.
    pub rank_state: usize,
    pub rank_state_pt: usize,
    /// Numerical ranks after subtraction.
    pub rank_after: usize,
    pub rank_after_pt: usize,
    /// Coefficients of det M = quad·αα* + const (linear terms vanish).
    pub poly_quadratic: C64,
    pub poly_constant: C64,
    /// Max entry error of |v⟩⟨v| + Σ wᵢ|eᵢ,fᵢ⟩⟨eᵢ,fᵢ| against ρ.
    pub reconstruction_error: f64,
}

fn numerical_rank(op: &TwoModeOperator) -> Result<usize> {
    let eigs = op.eigenvalues_hermitian()?;
    let scale = eigs.values().iter().map(|e| e.abs()).fold(0.0, f64::max).max(1.0);
    Ok(eigs.values().iter().filter(|e| e.abs() > RANK_TOL * scale).count())
}

/// Columns of the eigenbasis whose eigenvalue is numerically zero.
fn kernel_basis(op: &TwoModeOperator) -> Result<Vec<Array1<C64>>> {
    let (eigs, vecs) = op.eigh_full()?;
    let scale = eigs.values().iter().map(|e| e.abs()).fold(0.0, f64::max).max(1.0);
    let mut out = Vec::new();
    for (i, e) in eigs.values().iter().enumerate() {
        if e.abs() <= RANK_TOL * scale {
            out.push(vecs.column(i).to_owned());
        }
    }
    Ok(out)
}

fn inner(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &Array1<C64>) -> f64 {
    inner(a, a).re.sqrt()
}

/// Bra row ⟨ψ|i⟩ over the mode-B basis: component l is conj(ψ_{(i,l)}).
fn bra_row(psi: &Array1<C64>, i: usize) -> [C64; 2] {
    [psi[i * 2].conj(), psi[i * 2 + 1].conj()]
}

fn m_matrix(psi1: &Array1<C64>, psi2: &Array1<C64>, alpha: C64) -> [[C64; 2]; 2] {
    let p1_0 = bra_row(psi1, 0);
    let p1_1 = bra_row(psi1, 1);
    let p2_0 = bra_row(psi2, 0);
    let p2_1 = bra_row(psi2, 1);
    let row1 = [alpha * p1_0[0] + p1_1[0], alpha * p1_0[1] + p1_1[1]];
    let ac = alpha.conj();
    let row2 = [ac * p2_0[0] + p2_1[0], ac * p2_0[1] + p2_1[1]];
    [row1, row2]
}

fn det2(m: &[[C64; 2]; 2]) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Run the construction at a given squeezing parameter, λ ∈ (0, 1).
pub fn kraus_n2_decompose(lambda: f64) -> Result<KrausN2Trace> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::ParamOutOfRange { name: "lambda", value: lambda, expected: "(0, 1)" });
    }

    // The unnormalized boundary partial transpose and its own transpose.
    let mut rho = TwoModeOperator::zeros(2, 2);
    rho.add_scaled(1.0 / kn_factor(lambda, 2), &build_boundary_pt(lambda, 2)?);
    let rho_pt = partial_transpose_a(&rho);

    let rank_state = numerical_rank(&rho)?;
    let rank_state_pt = numerical_rank(&rho_pt)?;

    // Subtract the projector onto |0,0⟩ + λ|1,1⟩.
    let mut v = Array1::<C64>::zeros(4);
    v[0] = C64::new(1.0, 0.0);
    v[3] = C64::new(lambda, 0.0);
    let mut sigma = rho.clone();
    sigma.add_outer(-1.0, &v);
    sigma.mirror_upper();
    let sigma_pt = partial_transpose_a(&sigma);

    let rank_after = numerical_rank(&sigma)?;
    let rank_after_pt = numerical_rank(&sigma_pt)?;

    // ψ₁: the kernel direction σ gained relative to ρ. ρ's own kernel is
    // one-dimensional; project it out of ker σ and a single direction must
    // remain.
    let old_kernel = kernel_basis(&rho)?;
    if old_kernel.len() != 1 {
        return Err(Error::DegenerateKernel { dim: old_kernel.len() });
    }
    let k0 = &old_kernel[0];
    let sigma_kernel = kernel_basis(&sigma)?;
    if sigma_kernel.len() != 2 {
        return Err(Error::DegenerateKernel { dim: sigma_kernel.len() });
    }
    let mut psi1 = None;
    for u in &sigma_kernel {
        let mut w = u.clone();
        let overlap = inner(k0, u);
        w.zip_mut_with(k0, |wi, ki| *wi -= overlap * ki);
        if norm(&w) > 1e-6 {
            let n = norm(&w);
            let candidate = w.mapv(|z| z / n);
            if let Some(prev) = &psi1 {
                // both residuals must point along one direction
                let parallel = inner(prev, &candidate).norm();
                if (parallel - 1.0).abs() > 1e-8 {
                    return Err(Error::DegenerateKernel { dim: 2 });
                }
            } else {
                psi1 = Some(candidate);
            }
        }
    }
    let psi1 = psi1.ok_or(Error::DegenerateKernel { dim: 0 })?;

    // ψ₂: the kernel direction of σ^{T_A} living on the two-coherence sector
    // {|0,1⟩, |1,0⟩} (flat indices 1 and 2).
    let pt_kernel = kernel_basis(&sigma_pt)?;
    if pt_kernel.len() != 2 {
        return Err(Error::DegenerateKernel { dim: pt_kernel.len() });
    }
    let mut psi2 = None;
    for u in &pt_kernel {
        let mut w = Array1::<C64>::zeros(4);
        w[1] = u[1];
        w[2] = u[2];
        if norm(&w) > 1e-6 {
            let n = norm(&w);
            let candidate = w.mapv(|z| z / n);
            if let Some(prev) = &psi2 {
                let parallel = inner(prev, &candidate).norm();
                if (parallel - 1.0).abs() > 1e-8 {
                    return Err(Error::DegenerateKernel { dim: 2 });
                }
            } else {
                psi2 = Some(candidate);
            }
        }
    }
    let psi2 = psi2.ok_or(Error::DegenerateKernel { dim: 0 })?;

    // det M(α, α*) is a polynomial quad·αα* + lin·α + lin'·α* + const;
    // four evaluations pin the coefficients, and the linear ones must vanish.
    let d0 = det2(&m_matrix(&psi1, &psi2, C64::new(0.0, 0.0)));
    let d1 = det2(&m_matrix(&psi1, &psi2, C64::new(1.0, 0.0)));
    let dm1 = det2(&m_matrix(&psi1, &psi2, C64::new(-1.0, 0.0)));
    let di = det2(&m_matrix(&psi1, &psi2, C64::new(0.0, 1.0)));
    let quad = 0.5 * (d1 + dm1) - d0;
    let lin_sum = 0.5 * (d1 - dm1);
    let lin_diff = -C64::new(0.0, 1.0) * (di - quad - d0);
    let lin_scale = quad.norm().max(d0.norm());
    if lin_sum.norm() > 1e-9 * lin_scale || lin_diff.norm() > 1e-9 * lin_scale {
        return Err(Error::Linalg(format!(
            "determinant polynomial has unexpected linear terms: {lin_sum:?}, {lin_diff:?}"
        )));
    }
    let mag_sq = -(d0 / quad);
    if mag_sq.im.abs() > 1e-9 || mag_sq.re <= 0.0 {
        return Err(Error::Linalg(format!("root magnitude squared came out as {mag_sq}")));
    }
    let mag = mag_sq.re.sqrt();

    // Four quarter-turn phases on the circle |α| = mag.
    let roots: [C64; 4] = [
        C64::new(mag, 0.0),
        C64::new(0.0, mag),
        C64::new(-mag, 0.0),
        C64::new(0.0, -mag),
    ];

    // Kernel of M per root gives the B factor.
    let mut terms_raw: Vec<(SingleModeVector, SingleModeVector)> = Vec::with_capacity(4);
    for alpha in roots {
        let m = m_matrix(&psi1, &psi2, alpha);
        let row = if m[0][0].norm() + m[0][1].norm() >= m[1][0].norm() + m[1][1].norm() {
            m[0]
        } else {
            m[1]
        };
        let f = [row[1], -row[0]];
        let fs = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
        let f = [f[0] / fs, f[1] / fs];
        // consistency with the other row
        let other = if row == m[0] { m[1] } else { m[0] };
        let resid = (other[0] * f[0] + other[1] * f[1]).norm();
        if resid > 1e-8 {
            return Err(Error::Linalg(format!("M kernel residual {resid} at root {alpha}")));
        }
        let e = SingleModeVector::new(vec![alpha, C64::new(1.0, 0.0)]);
        let fv = SingleModeVector::new(vec![f[0], f[1]]);
        terms_raw.push((e, fv));
    }

    // Nonnegative weights from the normal equations ⟨Tₙ, Σ w Tₘ⟩ = ⟨Tₙ, σ⟩.
    let projectors: Vec<TwoModeOperator> = terms_raw
        .iter()
        .map(|(e, f)| {
            let mut t = TwoModeOperator::zeros(2, 2);
            t.add_product_projector(1.0, e, f);
            t.mirror_upper();
            t
        })
        .collect();
    let hs = |x: &TwoModeOperator, y: &TwoModeOperator| -> f64 {
        x.matrix().iter().zip(y.matrix().iter()).map(|(a, b)| (a.conj() * b).re).sum()
    };
    let mut gram = Array2::<f64>::zeros((4, 4));
    let mut rhs = Array1::<f64>::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            gram[(i, j)] = hs(&projectors[i], &projectors[j]);
        }
        rhs[i] = hs(&projectors[i], &sigma);
    }
    let weights = gram.solve(&rhs).map_err(|e| Error::Linalg(e.to_string()))?;
    for &w in weights.iter() {
        if w < -1e-9 {
            return Err(Error::Linalg(format!("negative product weight {w}")));
        }
    }

    // Reassemble: subtracted projector plus the weighted products.
    let mut assembled = TwoModeOperator::zeros(2, 2);
    assembled.add_outer(1.0, &v);
    for (w, (e, f)) in weights.iter().zip(&terms_raw) {
        assembled.add_product_projector(*w, e, f);
    }
    assembled.mirror_upper();
    let reconstruction_error = assembled.max_abs_diff(&rho);

    let product_vectors = weights
        .iter()
        .zip(terms_raw)
        .map(|(w, (e, f))| ProductTerm { weight: w.max(0.0), ket_a: e, ket_b: f })
        .collect();

    Ok(KrausN2Trace {
        subtracted_vector: v,
        kernel_psi1: psi1,
        kernel_psi2: psi2,
        roots,
        product_vectors,
        rank_state,
        rank_state_pt,
        rank_after,
        rank_after_pt,
        poly_quadratic: quad,
        poly_constant: d0,
        reconstruction_error,
    })
}
