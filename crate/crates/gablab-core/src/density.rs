//! Density and completeness diagnostics for Gabor systems.
//!
//! The lattice size `d = N / (|Λ| |Γ|)` is computed in exact rational
//! arithmetic. The functional
//!
//! ```text
//! ψ(T) = (1/μ) Σ_i ⟨T χ_{E_i}, χ_{E_i}⟩,   μ = μ_G(𝒮_Λ) = N/|Λ|,
//! ```
//!
//! taken over the covering cells `E_i = (α_i + 𝒮_{Γ^⊥}) ∩ 𝒮_Λ` with
//! `α_i ∈ Γ^⊥`, satisfies the exact identity
//!
//! ```text
//! ψ(Σ_k f_k h_k^*) = (1/d) ⟨f, h⟩
//! ```
//!
//! for any two windows `f, h` analyzed over the same lattice pair, where
//! `f_k, h_k` are their matched time–frequency atoms. Applying ψ to the
//! regularized operators `S (θI + S)^{-1}` and letting `θ ↓ 0` exhibits the
//! density bound: ψ converges to ψ(P) for the range projection `P` of the
//! frame operator, ψ(P) ≤ 1 with equality when the system is complete, and
//! `⟨g, h_θ⟩ ≤ ‖g‖⁴ / ⟨g,g⟩² · 1 ≤ 1` scaling aside forces `ψ ≤ 1/d`. A
//! complete system therefore requires `d ≤ 1`:
//! [`completeness_verdict`] checks exactly that, and [`completeness_sweep`]
//! tabulates the quantities so the inequality can be inspected numerically.

use crate::gabor::{GaborError, GaborSystem};
use crate::group::{annihilator, section, Elem, GroupSpec, Side, Subgroup};
use crate::mat::{vdot, CMat};
use crate::spectral::{hermitian_eig, Eig, SpectralError, DEFAULT_RANK_TOL};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_rational::Ratio;
// Brings sqrt/abs to f64 under no_std; shadowed by inherent methods with std.
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

/// Errors from density and completeness computations.
#[derive(Debug, Error, PartialEq)]
pub enum DensityError {
    /// The translation lattice must live on the primal side and the
    /// modulation lattice on the dual side.
    #[error("translation lattice must be primal-side and modulation lattice dual-side")]
    LatticeSides,
    /// The two subgroups belong to different parent groups.
    #[error("subgroups belong to different parent groups")]
    ParentMismatch,
    /// An operator had the wrong shape for the ambient group.
    #[error("operator is {rows}x{cols}, expected {n}x{n}")]
    OperatorShape { rows: usize, cols: usize, n: usize },
    /// A vector had the wrong length for the ambient group.
    #[error("vector has length {got}, expected {expected}")]
    VectorLength { expected: usize, got: usize },
    /// The regularization parameter must be strictly positive.
    #[error("theta must be positive, got {theta}")]
    NonPositiveTheta { theta: f64 },
    /// A θ-grid must be nonempty, strictly positive, and strictly descending.
    #[error("theta grid must be nonempty, positive, and strictly descending")]
    InvalidGrid,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Gabor(#[from] GaborError),
}

/// Exact lattice size `d = N / (|Λ| |Γ|)` of the time–frequency lattice
/// `Λ × Γ`.
pub fn lattice_size(lambda: &Subgroup, gamma: &Subgroup) -> Result<Ratio<u64>, DensityError> {
    if lambda.side() != Side::Primal || gamma.side() != Side::Dual {
        return Err(DensityError::LatticeSides);
    }
    if lambda.parent() != gamma.parent() {
        return Err(DensityError::ParentMismatch);
    }
    Ok(Ratio::new(
        lambda.parent().order(),
        lambda.order() * gamma.order(),
    ))
}

/// A partition of the transversal `𝒮_Λ` into cells
/// `E_i = (α_i + 𝒮_{Γ^⊥}) ∩ 𝒮_Λ` indexed by shifts `α_i ∈ Γ^⊥`.
///
/// Only nonempty cells are kept. In a finite group the cells always
/// partition `𝒮_Λ` exactly; the constructor asserts this.
#[derive(Clone, Debug)]
pub struct Covering {
    group: GroupSpec,
    alphas: Vec<Elem>,
    cells: Vec<Vec<usize>>,
    mu: u64,
}

impl Covering {
    /// The shift `α_i ∈ Γ^⊥` that produced cell `i`.
    pub fn alphas(&self) -> &[Elem] {
        &self.alphas
    }

    /// Number of (nonempty) cells.
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Flat indices of the elements of cell `i`, sorted ascending.
    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    /// The normalization `μ = μ_G(𝒮_Λ) = N / |Λ|` (an integer, since the
    /// primal Haar measure weights every point by 1).
    pub fn mu(&self) -> u64 {
        self.mu
    }

    /// The indicator vector `χ_{E_i}` of cell `i` as a length-`N` vector.
    pub fn cell_indicator(&self, i: usize) -> Vec<Complex64> {
        let mut chi = vec![Complex64::new(0.0, 0.0); self.group.order() as usize];
        for &j in &self.cells[i] {
            chi[j] = Complex64::new(1.0, 0.0);
        }
        chi
    }
}

/// Builds the covering of `𝒮_Λ` by `Γ^⊥`-shifted copies of `𝒮_{Γ^⊥}`.
pub fn covering(lambda: &Subgroup, gamma: &Subgroup) -> Result<Covering, DensityError> {
    if lambda.side() != Side::Primal || gamma.side() != Side::Dual {
        return Err(DensityError::LatticeSides);
    }
    if lambda.parent() != gamma.parent() {
        return Err(DensityError::ParentMismatch);
    }
    let group = lambda.parent().clone();
    let n = group.order() as usize;

    let s_lambda = section(lambda);
    let mut in_s_lambda = vec![false; n];
    for rep in s_lambda.reps() {
        in_s_lambda[group.index_of(rep)] = true;
    }

    let gamma_perp = annihilator(gamma);
    let s_gamma_perp = section(&gamma_perp);

    let mut alphas = Vec::new();
    let mut cells = Vec::new();
    let mut covered = vec![false; n];
    for alpha in gamma_perp.elements() {
        let mut cell = Vec::new();
        for s in s_gamma_perp.reps() {
            let x = group.add(alpha, s);
            let xi = group.index_of(&x);
            if in_s_lambda[xi] {
                assert!(!covered[xi], "covering cells overlap");
                covered[xi] = true;
                cell.push(xi);
            }
        }
        if !cell.is_empty() {
            cell.sort_unstable();
            alphas.push(alpha.clone());
            cells.push(cell);
        }
    }
    for (i, flag) in covered.iter().enumerate() {
        assert!(
            *flag == in_s_lambda[i],
            "covering cells do not exhaust the transversal"
        );
    }

    let mu = group.order() / lambda.order();
    Ok(Covering {
        group,
        alphas,
        cells,
        mu,
    })
}

/// Evaluates `ψ(T) = (1/μ) Σ_i ⟨T χ_{E_i}, χ_{E_i}⟩`.
///
/// Because the indicators are 0/1 vectors this is the sum of the entries of
/// `T` over index pairs lying in a common cell, divided by μ. In particular
/// `ψ(I) = 1` exactly and ψ is linear in `T`.
pub fn psi(t: &CMat, cov: &Covering) -> Result<Complex64, DensityError> {
    let n = cov.group.order() as usize;
    if t.rows() != n || t.cols() != n {
        return Err(DensityError::OperatorShape {
            rows: t.rows(),
            cols: t.cols(),
            n,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for cell in &cov.cells {
        for &row in cell {
            for &col in cell {
                // ⟨T χ, χ⟩ = Σ_{row ∈ E} (T χ)_row = Σ_{row, col ∈ E} T[row][col].
                acc += t.at(row, col);
            }
        }
    }
    Ok(acc / cov.mu as f64)
}

/// Solves `(θI + S) h = f` for the raw frame operator `S` of `sys`.
///
/// `θ > 0` makes the operator positive definite, so the solution exists for
/// every window; the solve happens in the eigenbasis of `S`.
pub fn regularized_vector(
    sys: &GaborSystem,
    f: &[Complex64],
    theta: f64,
) -> Result<Vec<Complex64>, DensityError> {
    if !(theta > 0.0) {
        return Err(DensityError::NonPositiveTheta { theta });
    }
    let n = sys.group().order() as usize;
    if f.len() != n {
        return Err(DensityError::VectorLength {
            expected: n,
            got: f.len(),
        });
    }
    let s = sys.frame_operator(1.0);
    let eig = hermitian_eig(&s)?;
    Ok(eig.apply(|l| 1.0 / (theta + l), f))
}

/// One row of a regularization sweep.
#[derive(Clone, Copy, Debug)]
pub struct ThetaRow {
    /// Regularization parameter θ.
    pub theta: f64,
    /// `Re ⟨g, h_θ⟩` where `h_θ = (θI + S)^{-1} g`.
    pub inner_product: f64,
    /// `Re ψ(S (θI + S)^{-1})`.
    pub psi: f64,
    /// Relative defect of the identity `ψ = (1/d) ⟨g, h_θ⟩`:
    /// `|ψ - ⟨g,h_θ⟩/d| / max(|ψ|, |⟨g,h_θ⟩/d|)`, or 0 when both vanish.
    pub identity_defect: f64,
}

/// Result of [`completeness_sweep`].
#[derive(Clone, Debug)]
pub struct ThetaSweep {
    /// One row per grid value, in the given (descending) order.
    pub rows: Vec<ThetaRow>,
    /// The exact bound `1/d = |Λ||Γ|/N` that `ψ` can never exceed.
    pub d_inverse: Ratio<u64>,
    /// `ψ(P)` for the orthogonal projection `P` onto the range of `S`;
    /// this is the limit of the ψ column as θ ↓ 0.
    pub psi_projection: f64,
}

/// The default θ-grid `{1, 10^{-1}, …, 10^{-6}}`.
pub fn default_theta_grid() -> Vec<f64> {
    (0..=6).map(|k| 10f64.powi(-k)).collect()
}

fn validate_grid(grid: &[f64]) -> Result<(), DensityError> {
    if grid.is_empty() {
        return Err(DensityError::InvalidGrid);
    }
    for (i, &theta) in grid.iter().enumerate() {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(DensityError::InvalidGrid);
        }
        if i > 0 && theta >= grid[i - 1] {
            return Err(DensityError::InvalidGrid);
        }
    }
    Ok(())
}

/// Sweeps the regularization parameter over `grid` (strictly descending),
/// tabulating `⟨g, h_θ⟩`, `ψ(S(θI+S)^{-1})`, and the defect of the exact
/// identity relating them, with `g` the window of `sys`.
///
/// Taking `f := g` matters: `g` is its own `(0,0)` atom, so
/// `⟨g, h_θ⟩ = θ‖h_θ‖² + ‖T h_θ‖² ≥ |⟨g,h_θ⟩|²` and hence
/// `⟨g, h_θ⟩ ≤ 1` whenever `‖g‖ = 1`; combined with the ψ-identity this is
/// the numerical form of the density bound.
pub fn completeness_sweep(sys: &GaborSystem, grid: &[f64]) -> Result<ThetaSweep, DensityError> {
    validate_grid(grid)?;
    let cov = covering(sys.lambda(), sys.gamma())?;
    let g = sys.window();
    let s = sys.frame_operator(1.0);
    let eig = hermitian_eig(&s)?;

    let d = sys.density();
    let d_inverse = Ratio::new(*d.denom(), *d.numer());
    let d_inv_f = *d_inverse.numer() as f64 / *d_inverse.denom() as f64;

    let mut rows = Vec::with_capacity(grid.len());
    for &theta in grid {
        let h = eig.apply(|l| 1.0 / (theta + l), g);
        let ip = vdot(g, &h);
        let resolvent = eig.matrix_function(|l| l / (theta + l));
        let psi_val = psi(&resolvent, &cov)?;
        let scaled_ip = ip * d_inv_f;
        let denom = psi_val.norm().max(scaled_ip.norm());
        let identity_defect = if denom == 0.0 {
            0.0
        } else {
            (psi_val - scaled_ip).norm() / denom
        };
        rows.push(ThetaRow {
            theta,
            inner_product: ip.re,
            psi: psi_val.re,
            identity_defect,
        });
    }

    let psi_projection = psi(&range_projection(&eig), &cov)?.re;
    Ok(ThetaSweep {
        rows,
        d_inverse,
        psi_projection,
    })
}

/// Spectral projection onto the range of the operator diagonalized by `eig`
/// (eigenvalues above `DEFAULT_RANK_TOL` relative to the largest count).
fn range_projection(eig: &Eig) -> CMat {
    let lmax = eig.values().last().copied().unwrap_or(0.0).max(0.0);
    let cut = DEFAULT_RANK_TOL * lmax;
    eig.matrix_function(|l| if l > cut { 1.0 } else { 0.0 })
}

/// Verdict of the density test for completeness.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletenessVerdict {
    /// Number of atoms `M = |Λ||Γ|`.
    pub num_atoms: usize,
    /// Ambient dimension `N`.
    pub ambient_dim: usize,
    /// Rank of the system (dimension of the span of the atoms).
    pub rank: usize,
    /// Exact lattice size `d = N / (|Λ||Γ|)`.
    pub density: Ratio<u64>,
    /// Whether the atoms span the whole space (`rank == N`).
    pub complete: bool,
    /// Whether the observation is consistent with the density principle:
    /// a complete system must have `d ≤ 1`, i.e. at least `N` atoms.
    pub consistent: bool,
}

/// Checks the density principle on a concrete system: computes the rank of
/// the atom span and verifies that completeness only occurs at `d ≤ 1`.
pub fn completeness_verdict(
    sys: &GaborSystem,
    tolerance: f64,
) -> Result<CompletenessVerdict, DensityError> {
    let report = crate::spectral::excess_deficit(sys, tolerance)?;
    let density = sys.density();
    let complete = report.rank == report.ambient_dim;
    let consistent = !(complete && density > Ratio::new(1, 1));
    Ok(CompletenessVerdict {
        num_atoms: report.num_atoms,
        ambient_dim: report.ambient_dim,
        rank: report.rank,
        density,
        complete,
        consistent,
    })
}
