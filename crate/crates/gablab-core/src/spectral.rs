//! Spectral analysis of Gabor systems: a self-contained complex Hermitian
//! eigensolver (cyclic Jacobi), frame/Riesz bound reports, canonical Parseval
//! windows, and the frame-versus-adjoint-Riesz comparison.
//!
//! Scaling conventions for the frame operator `S`:
//! - `Convention::Raw`: `S = sum_k atom_k atom_k^*` (counting measure on the
//!   coefficient lattice);
//! - `Convention::Paper`: `S` multiplied by the lattice density
//!   `d = N / (|Lambda| |Gamma|)`.
//!
//! With the `Paper` scaling, the optimal frame bounds of a Gabor frame equal
//! the optimal Riesz-sequence bounds of its adjoint system's raw Gram matrix;
//! `verify_duality` checks exactly that. Gram matrices are never rescaled.

use crate::gabor::GaborSystem;
use crate::mat::{vdot, CMat};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
// Brings sqrt/abs to f64 under no_std; shadowed by inherent methods with std.
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

/// Default relative threshold separating "zero" from "nonzero" eigenvalues.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius target for the Jacobi iteration, relative to the
/// Frobenius norm of the input.
const JACOBI_OFF_TOL: f64 = 1e-13;
/// Relative Hermitian-defect tolerance accepted by `hermitian_eig`.
const HERMITIAN_DEFECT_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (relative defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("the system is not a frame; no canonical Parseval window exists")]
    NotAFrame,
}

/// Frame-operator scaling convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Counting measure on the coefficient lattice.
    Raw,
    /// Raw operator multiplied by the lattice density `d`.
    Paper,
}

/// Eigendecomposition `H = V diag(values) V^*` of a Hermitian matrix,
/// eigenvalues ascending, eigenvector `k` in column `k` of `vectors`.
#[derive(Clone, Debug)]
pub struct Eig {
    values: Vec<f64>,
    vectors: CMat,
}

impl Eig {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &CMat {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|t| self.vectors.at(t, k)).collect()
    }

    /// Applies the spectral function `f(H) = V f(D) V^*` to a vector.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "apply: length mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let col = self.column(k);
            let y = vdot(v, &col) * f(self.values[k]);
            for t in 0..n {
                out[t] += y * col[t];
            }
        }
        out
    }

    /// Builds the matrix `f(H) = V f(D) V^*`.
    pub fn matrix_function<F: Fn(f64) -> f64>(&self, f: F) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for k in 0..n {
            m.rank_one_update(&self.column(k), f(self.values[k]));
        }
        m
    }

    /// Rebuilds `V diag(values) V^*` (for testing).
    pub fn reconstruct(&self) -> CMat {
        self.matrix_function(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Errors on non-square or non-Hermitian input and when the
/// off-diagonal mass fails to fall below `1e-13 * ||H||_F` within the sweep
/// budget.
pub fn hermitian_eig(h: &CMat) -> Result<Eig, SpectralError> {
    let n = h.rows();
    if h.cols() != n {
        return Err(SpectralError::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let fro = h.frobenius();
    if fro > 0.0 {
        let defect = h.hermitian_defect() / fro;
        if defect > HERMITIAN_DEFECT_TOL {
            return Err(SpectralError::NotHermitian { defect });
        }
    }
    let mut a = h.clone();
    let mut v = CMat::identity(n);
    if fro > 0.0 && n > 1 {
        let target = JACOBI_OFF_TOL * fro;
        // Elementwise skip threshold: if every off-diagonal entry is below
        // target / n, the off-diagonal Frobenius norm is below target.
        let skip = target / n as f64;
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            if offdiag_frobenius(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let hpq = a.at(p, q);
                    let habs = hpq.norm();
                    if habs <= skip {
                        continue;
                    }
                    // 2x2 block [[ap, h], [conj(h), aq]]; rotation
                    // J = [[c, s], [-conj(s), c]] with s = t*c*e^{i arg h}
                    // zeroes the (p,q) entry of J^* A J.
                    let ap = a.at(p, p).re;
                    let aq = a.at(q, q).re;
                    let tau = (aq - ap) / (2.0 * habs);
                    let t = if tau.abs() > 1e12 {
                        1.0 / (2.0 * tau)
                    } else {
                        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = hpq / habs * (t * c);
                    let sc = s.conj();
                    // A <- A J (columns p, q).
                    for i in 0..n {
                        let aip = a.at(i, p);
                        let aiq = a.at(i, q);
                        a.set(i, p, aip * c - aiq * sc);
                        a.set(i, q, aip * s + aiq * c);
                    }
                    // A <- J^* A (rows p, q).
                    for j in 0..n {
                        let apj = a.at(p, j);
                        let aqj = a.at(q, j);
                        a.set(p, j, apj * c - aqj * s);
                        a.set(q, j, apj * sc + aqj * c);
                    }
                    // V <- V J.
                    for i in 0..n {
                        let vip = v.at(i, p);
                        let viq = v.at(i, q);
                        v.set(i, p, vip * c - viq * sc);
                        v.set(i, q, vip * s + viq * c);
                    }
                }
            }
        }
        if !converged && offdiag_frobenius(&a) > target {
            return Err(SpectralError::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }
    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.at(i, i).re.total_cmp(&a.at(j, j).re));
    let values: Vec<f64> = order.iter().map(|&k| a.at(k, k).re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (new_k, &old_k) in order.iter().enumerate() {
        for t in 0..n {
            vectors.set(t, new_k, v.at(t, old_k));
        }
    }
    Ok(Eig { values, vectors })
}

fn offdiag_frobenius(a: &CMat) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s += a.at(p, q).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Spectral summary of a positive semidefinite operator (frame operator or
/// Gram matrix). `lower`/`upper` are the extreme eigenvalues; `rank` counts
/// eigenvalues above `tolerance * upper`. The frame/Riesz flags both express
/// positive definiteness of the analyzed operator; `is_tight` means the
/// nonzero spectrum collapses to a point (`upper - lower <= tolerance *
/// upper`), which holds vacuously for the zero operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
    pub is_riesz_sequence: bool,
    pub is_tight: bool,
    pub tolerance: f64,
}

impl SpectralReport {
    /// Builds the report from eigenvalues sorted ascending.
    pub fn from_ascending_eigenvalues(eigenvalues: Vec<f64>, tolerance: f64) -> SpectralReport {
        let upper = eigenvalues.last().copied().unwrap_or(0.0);
        let lower = eigenvalues.first().copied().unwrap_or(0.0);
        let thresh = tolerance * upper.max(0.0);
        let rank = eigenvalues.iter().filter(|&&l| l > thresh).count();
        let definite = lower > thresh;
        let is_tight = upper - lower <= tolerance * upper;
        SpectralReport {
            eigenvalues,
            rank,
            lower,
            upper,
            is_frame: definite,
            is_riesz_sequence: definite,
            is_tight,
            tolerance,
        }
    }
}

fn density_f64(sys: &GaborSystem) -> f64 {
    let d = sys.density();
    *d.numer() as f64 / *d.denom() as f64
}

fn convention_weight(sys: &GaborSystem, convention: Convention) -> f64 {
    match convention {
        Convention::Raw => 1.0,
        Convention::Paper => density_f64(sys),
    }
}

/// Spectral report of the frame operator under the chosen scaling. The
/// system is a frame iff the operator is positive definite; for a frame the
/// optimal bounds are `lower` and `upper`.
pub fn frame_bounds(
    sys: &GaborSystem,
    convention: Convention,
    tolerance: f64,
) -> Result<SpectralReport, SpectralError> {
    let s = sys.frame_operator(convention_weight(sys, convention));
    let eig = hermitian_eig(&s)?;
    Ok(SpectralReport::from_ascending_eigenvalues(eig.values().to_vec(), tolerance))
}

/// Spectral report of the (raw, unscaled) Gram matrix of the atoms. The
/// atoms form a Riesz sequence iff the Gram is positive definite; the optimal
/// Riesz bounds are then `lower` and `upper`.
pub fn riesz_bounds(sys: &GaborSystem, tolerance: f64) -> Result<SpectralReport, SpectralError> {
    let eig = hermitian_eig(&sys.gram())?;
    Ok(SpectralReport::from_ascending_eigenvalues(eig.values().to_vec(), tolerance))
}

/// Rank bookkeeping for a finite system of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessReport {
    /// Number of atoms `M`.
    pub num_atoms: usize,
    /// Ambient dimension `N`.
    pub ambient_dim: usize,
    /// Dimension of the span of the atoms.
    pub rank: usize,
    /// `M - rank`: how many atoms could be removed without shrinking the span.
    pub excess: usize,
    /// `N - rank`: codimension of the span.
    pub deficit: usize,
}

/// Computes the rank of the atom system from the spectrum of the Gram matrix
/// (eigenvalues above `tolerance * max`), plus the derived excess/deficit.
pub fn excess_deficit(sys: &GaborSystem, tolerance: f64) -> Result<ExcessReport, SpectralError> {
    let m = sys.num_atoms();
    let n = sys.group().order() as usize;
    // Gram (MxM) and frame operator (NxN) share the nonzero spectrum; use
    // whichever is smaller.
    let rank = if m <= n {
        riesz_bounds(sys, tolerance)?.rank
    } else {
        frame_bounds(sys, Convention::Raw, tolerance)?.rank
    };
    Ok(ExcessReport { num_atoms: m, ambient_dim: n, rank, excess: m - rank, deficit: n - rank })
}

/// `S^{-1/2} g` where `S` is the frame operator under `convention`: the
/// window generating the canonical Parseval (tight, bound 1) frame on the
/// same lattice. Errors with `NotAFrame` when `S` is singular.
pub fn canonical_parseval(
    sys: &GaborSystem,
    convention: Convention,
    tolerance: f64,
) -> Result<Vec<Complex64>, SpectralError> {
    let s = sys.frame_operator(convention_weight(sys, convention));
    let eig = hermitian_eig(&s)?;
    let upper = eig.values().last().copied().unwrap_or(0.0);
    let thresh = tolerance * upper.max(0.0);
    if eig.values().first().copied().unwrap_or(0.0) <= thresh {
        return Err(SpectralError::NotAFrame);
    }
    Ok(eig.apply(|l| 1.0 / l.sqrt(), sys.window()))
}

/// Side-by-side spectral comparison of a system's frame property (density
/// scaling) with the Riesz-sequence property of its adjoint system (raw
/// Gram). The two properties hold together, and when they hold the optimal
/// bounds agree; `pass` records both facts at relative tolerance `bound_tol`.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub frame: SpectralReport,
    pub adjoint_riesz: SpectralReport,
    /// `|A - A_adj|` (0 when the properties fail).
    pub lower_gap: f64,
    /// `|B - B_adj|` (0 when the properties fail).
    pub upper_gap: f64,
    pub pass: bool,
}

pub fn verify_duality(
    sys: &GaborSystem,
    bound_tol: f64,
    rank_tol: f64,
) -> Result<DualityReport, SpectralError> {
    let frame = frame_bounds(sys, Convention::Paper, rank_tol)?;
    let adjoint_riesz = riesz_bounds(&sys.adjoint(), rank_tol)?;
    let both_hold = frame.is_frame && adjoint_riesz.is_riesz_sequence;
    let agree = frame.is_frame == adjoint_riesz.is_riesz_sequence;
    let (lower_gap, upper_gap) = if both_hold {
        ((frame.lower - adjoint_riesz.lower).abs(), (frame.upper - adjoint_riesz.upper).abs())
    } else {
        (0.0, 0.0)
    };
    let bounds_match = !both_hold
        || (lower_gap <= bound_tol * frame.lower.max(adjoint_riesz.lower)
            && upper_gap <= bound_tol * frame.upper.max(adjoint_riesz.upper));
    Ok(DualityReport { frame, adjoint_riesz, lower_gap, upper_gap, pass: agree && bounds_match })
}

/// Comparison of tightness of the (density-scaled) frame operator with
/// orthogonality of the adjoint atoms, plus the tight-bound value check
/// `A = ||g||^2`.
#[derive(Clone, Debug)]
pub struct TightOrthogonalReport {
    pub frame: SpectralReport,
    /// Largest off-diagonal Gram magnitude among adjoint atoms.
    pub max_offdiag: f64,
    /// Whether the adjoint atoms are pairwise orthogonal at tolerance
    /// `orth_tol * ||g||^2`.
    pub adjoint_orthogonal: bool,
    /// When tight: `|A - ||g||^2|`; else 0.
    pub bound_gap: f64,
    pub pass: bool,
}

pub fn verify_tight_orthogonal(
    sys: &GaborSystem,
    tight_tol: f64,
    orth_tol: f64,
) -> Result<TightOrthogonalReport, SpectralError> {
    let frame = frame_bounds(sys, Convention::Paper, tight_tol)?;
    let gram = sys.adjoint().gram();
    let mut max_offdiag = 0.0f64;
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            if i != j {
                max_offdiag = max_offdiag.max(gram.at(i, j).norm());
            }
        }
    }
    let window_energy: f64 = sys.window().iter().map(|z| z.norm_sqr()).sum();
    let adjoint_orthogonal = max_offdiag <= orth_tol * window_energy;
    let bound_gap = if frame.is_tight { (frame.upper - window_energy).abs() } else { 0.0 };
    let pass = frame.is_tight == adjoint_orthogonal
        && (!frame.is_tight || bound_gap <= tight_tol * window_energy);
    Ok(TightOrthogonalReport { frame, max_offdiag, adjoint_orthogonal, bound_gap, pass })
}
