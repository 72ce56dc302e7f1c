//! R-duality: given a family `F = {f_i}`, an orthonormal basis `{e_j}` and an
//! orthonormal family `{h_i}`, the R-dual sequence is `w_j = sum_i <f_i, e_j>
//! h_i`. The family `F` is a frame exactly when `{w_j}` is a Riesz sequence,
//! with the same optimal bounds.
//!
//! For Gabor systems this module provides:
//! - `prop42_onb`: the orthonormal basis `{ mu^{-1/2} E_gamma T_lambda
//!   chi_S }` on `Lambda x Lambda_perp` built from the indicator of a coset
//!   section `S` of `G/Lambda`;
//! - `thm43_verify`: at critical sampling (`Gamma = Lambda_perp`) the adjoint
//!   Gabor system is an R-dual of the system itself, for every window —
//!   checked to numerical precision;
//! - `adjoint_rdual_witness`: for a tight Gabor frame on any lattice, an
//!   explicit unitary transporting an R-dual-type sequence onto the adjoint
//!   system, exhibiting the adjoint system as an R-dual. At density `d < 1`
//!   the lattice has more atoms than the space has dimensions, so no
//!   orthonormal basis can be indexed by the lattice itself; the witness
//!   instead uses the scaled family `eTilde_{lambda,gamma} = d * V_h(conj(
//!   E_gamma T_lambda p))` (with `p` the Parseval-normalized window and `V_h`
//!   the unitary sending the standard basis to the `hTilde` basis), which
//!   plays the role of the auxiliary orthonormal family and makes the R-dual
//!   identity hold exactly.

use crate::gabor::{tf_shift, GaborError, GaborSystem};
use crate::group::{annihilator, section, Elem, GroupSpec, Side, Subgroup};
use crate::mat::{vdot, vnorm, CMat};
use crate::rng::Rng;
use crate::spectral::{
    frame_bounds, hermitian_eig, Convention, SpectralError, SpectralReport, DEFAULT_RANK_TOL,
};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
// Brings sqrt/abs to f64 under no_std; shadowed by inherent methods with std.
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

/// Entrywise Gram defect accepted by `OrthonormalBasis`.
pub const ONB_DEFECT_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum RDualError {
    #[error("basis has {got} vectors, expected {expected}")]
    BasisSize { expected: usize, got: usize },
    #[error("vector has length {got}, expected {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("family is not orthonormal (max entrywise Gram defect {defect:e})")]
    NotOrthonormal { defect: f64 },
    #[error("{got} labels for {expected} vectors")]
    LabelCount { expected: usize, got: usize },
    #[error("h has {h} vectors but F has {f}; the counts must match")]
    FamilySize { f: usize, h: usize },
    #[error("basis belongs to a different group")]
    GroupMismatch,
    #[error("subgroup must live on the primal side")]
    PrimalSideRequired,
    #[error("the system is not a tight frame under the density scaling")]
    NotTight,
    #[error("R-dual identity residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Gabor(#[from] GaborError),
}

/// Label attached to a basis vector: a time-frequency lattice pair or an
/// opaque position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    Pair(Elem, Elem),
    Index(usize),
}

/// A validated orthonormal basis of the window space: exactly `N` vectors,
/// pairwise Gram within `ONB_DEFECT_TOL` of the identity, one label each.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    group: GroupSpec,
    vectors: Vec<Vec<Complex64>>,
    labels: Vec<BasisLabel>,
}

/// Max entrywise `|Gram - I|` of a family of equal-length vectors.
pub fn gram_defect(vectors: &[Vec<Complex64>]) -> f64 {
    let mut defect = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((vdot(a, b) - expect).norm());
        }
    }
    defect
}

impl OrthonormalBasis {
    pub fn new(
        group: &GroupSpec,
        vectors: Vec<Vec<Complex64>>,
        labels: Vec<BasisLabel>,
    ) -> Result<OrthonormalBasis, RDualError> {
        let n = group.order() as usize;
        if vectors.len() != n {
            return Err(RDualError::BasisSize { expected: n, got: vectors.len() });
        }
        for v in &vectors {
            if v.len() != n {
                return Err(RDualError::VectorLength { expected: n, got: v.len() });
            }
        }
        if labels.len() != vectors.len() {
            return Err(RDualError::LabelCount { expected: vectors.len(), got: labels.len() });
        }
        let defect = gram_defect(&vectors);
        if defect > ONB_DEFECT_TOL {
            return Err(RDualError::NotOrthonormal { defect });
        }
        Ok(OrthonormalBasis { group: group.clone(), vectors, labels })
    }

    /// The standard basis `{delta_x}`, labeled by position.
    pub fn standard(group: &GroupSpec) -> OrthonormalBasis {
        let n = group.order() as usize;
        let mut vectors = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[k] = Complex64::new(1.0, 0.0);
            vectors.push(v);
        }
        let labels = (0..n).map(BasisLabel::Index).collect();
        OrthonormalBasis { group: group.clone(), vectors, labels }
    }

    /// A seeded Haar-like random basis: Gram-Schmidt (applied twice) on a
    /// matrix of uniform complex entries.
    pub fn random(group: &GroupSpec, seed: u64) -> OrthonormalBasis {
        let n = group.order() as usize;
        let mut rng = Rng::from_seed(seed);
        let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        while vectors.len() < n {
            let mut v = rng.complex_vector(n);
            for _ in 0..2 {
                for b in &vectors {
                    let coeff = vdot(&v, b);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= coeff * y;
                    }
                }
            }
            let norm = vnorm(&v);
            if norm < 1e-8 {
                continue; // essentially-dependent draw; take a fresh one
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
            vectors.push(v);
        }
        let labels = (0..n).map(BasisLabel::Index).collect();
        OrthonormalBasis { group: group.clone(), vectors, labels }
    }

    /// Same vectors, new labels.
    pub fn with_labels(&self, labels: Vec<BasisLabel>) -> Result<OrthonormalBasis, RDualError> {
        if labels.len() != self.vectors.len() {
            return Err(RDualError::LabelCount { expected: self.vectors.len(), got: labels.len() });
        }
        Ok(OrthonormalBasis { group: self.group.clone(), vectors: self.vectors.clone(), labels })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// The unitary sending the standard basis to this basis, applied to `x`:
    /// `V x = sum_k x[k] * vector_k`.
    pub fn apply_unitary(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.vectors.len();
        assert_eq!(x.len(), n, "apply_unitary: length mismatch");
        let dim = self.vectors[0].len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (coeff, v) in x.iter().zip(&self.vectors) {
            for (o, y) in out.iter_mut().zip(v) {
                *o += coeff * y;
            }
        }
        out
    }
}

/// `w_j = sum_i <f_i, e_j> h_i`, unvalidated core of the R-dual sum.
fn linear_rdual(
    f: &[Vec<Complex64>],
    e_vectors: &[Vec<Complex64>],
    h: &[Vec<Complex64>],
) -> Vec<Vec<Complex64>> {
    let dim = h.first().map_or(0, |v| v.len());
    e_vectors
        .iter()
        .map(|e| {
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            for (fi, hi) in f.iter().zip(h) {
                let coeff = vdot(fi, e);
                for (x, y) in w.iter_mut().zip(hi) {
                    *x += coeff * y;
                }
            }
            w
        })
        .collect()
}

/// The R-dual sequence `w_j = sum_i <f_i, e_j> h_i`, one `w_j` per basis
/// vector of `e`. Requires `|h| = |F|`; the vectors of `h` are expected to be
/// an orthonormal family (not validated here — `e`'s orthonormality is
/// guaranteed by its type).
pub fn rdual_sequence(
    f: &[Vec<Complex64>],
    e: &OrthonormalBasis,
    h: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>, RDualError> {
    if f.len() != h.len() {
        return Err(RDualError::FamilySize { f: f.len(), h: h.len() });
    }
    let n = e.group().order() as usize;
    for v in f.iter().chain(h) {
        if v.len() != n {
            return Err(RDualError::VectorLength { expected: n, got: v.len() });
        }
    }
    Ok(linear_rdual(f, e.vectors(), h))
}

/// Outcome of the abstract duality check: `F` is a frame iff its R-dual is a
/// Riesz sequence, and the optimal bounds coincide.
#[derive(Clone, Debug)]
pub struct CklReport {
    /// `sum_i |<f_i, e_j>|^2` per basis index `j`; for a frame these lie
    /// within the frame bounds.
    pub column_sums: Vec<f64>,
    /// Spectral report of `sum_i f_i f_i^*`.
    pub frame: SpectralReport,
    /// Spectral report of the Gram matrix of the R-dual sequence.
    pub w_riesz: SpectralReport,
    /// Frame and Riesz properties agree, with matching bounds (relative
    /// tolerance) when both hold.
    pub pass: bool,
}

pub fn ckl_duality_check(
    f: &[Vec<Complex64>],
    e: &OrthonormalBasis,
    h: &[Vec<Complex64>],
    tol: f64,
) -> Result<CklReport, RDualError> {
    let w = rdual_sequence(f, e, h)?;
    let n = e.group().order() as usize;
    let column_sums: Vec<f64> = e
        .vectors()
        .iter()
        .map(|ej| f.iter().map(|fi| vdot(fi, ej).norm_sqr()).sum())
        .collect();
    let mut s = CMat::zeros(n, n);
    for fi in f {
        s.rank_one_update(fi, 1.0);
    }
    let frame = SpectralReport::from_ascending_eigenvalues(
        hermitian_eig(&s)?.values().to_vec(),
        DEFAULT_RANK_TOL,
    );
    let mut gram = CMat::zeros(n, n);
    for (i, wi) in w.iter().enumerate() {
        for (j, wj) in w.iter().enumerate() {
            gram.set(i, j, vdot(wi, wj));
        }
    }
    let w_riesz = SpectralReport::from_ascending_eigenvalues(
        hermitian_eig(&gram)?.values().to_vec(),
        DEFAULT_RANK_TOL,
    );
    let agree = frame.is_frame == w_riesz.is_riesz_sequence;
    let both = frame.is_frame && w_riesz.is_riesz_sequence;
    let bounds_match = !both
        || ((frame.lower - w_riesz.lower).abs() <= tol * frame.lower.max(w_riesz.lower)
            && (frame.upper - w_riesz.upper).abs() <= tol * frame.upper.max(w_riesz.upper));
    Ok(CklReport { column_sums, frame, w_riesz, pass: agree && bounds_match })
}

/// The orthonormal basis `{ mu^{-1/2} E_gamma T_lambda chi_S }` indexed by
/// `Lambda x Lambda_perp`, where `S` is the canonical coset section of
/// `G/Lambda` and `mu = N / |Lambda|` its size. Panics if `lambda` is not a
/// primal-side subgroup.
pub fn prop42_onb(lambda: &Subgroup) -> OrthonormalBasis {
    assert_eq!(lambda.side(), Side::Primal, "prop42_onb: primal subgroup required");
    let group = lambda.parent().clone();
    let n = group.order() as usize;
    let sec = section(lambda);
    let mu = (group.order() / lambda.order()) as f64;
    let scale = 1.0 / mu.sqrt();
    let mut chi = vec![Complex64::new(0.0, 0.0); n];
    for rep in sec.reps() {
        chi[group.index_of(rep)] = Complex64::new(scale, 0.0);
    }
    let perp = annihilator(lambda);
    let mut vectors = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for l in lambda.elements() {
        for g in perp.elements() {
            vectors.push(tf_shift(&group, l, g, &chi));
            labels.push(BasisLabel::Pair(l.clone(), g.clone()));
        }
    }
    OrthonormalBasis::new(&group, vectors, labels)
        .expect("orthonormal by restricted character orthogonality")
}

/// Residuals of the critically-sampled R-dual identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Thm43Report {
    /// Max over `(alpha, beta)` of the deviation between `E_beta T_alpha f`
    /// and its R-dual reconstruction.
    pub max_residual: f64,
    pub window_norm: f64,
    /// `max_residual <= tol * max(1, ||f||)`.
    pub pass: bool,
}

/// Checks that on the critically-sampled lattice `Lambda x Lambda_perp` the
/// adjoint Gabor system of `f` (which lives on the same lattice) is an R-dual
/// of the Gabor system of `f`, using the section-indicator bases indexed
/// through negated pairs:
/// `E_beta T_alpha f = sum_{lambda,gamma} <E_gamma T_lambda f,
///   mu^{-1/2} E_{-beta} T_{-alpha} chi> mu^{-1/2} E_{-gamma} T_{-lambda} chi`.
/// This holds for every `f`, with no frame hypothesis.
pub fn thm43_verify(
    f: &[Complex64],
    lambda: &Subgroup,
    tol: f64,
) -> Result<Thm43Report, RDualError> {
    if lambda.side() != Side::Primal {
        return Err(RDualError::PrimalSideRequired);
    }
    let group = lambda.parent().clone();
    let n = group.order() as usize;
    if f.len() != n {
        return Err(RDualError::VectorLength { expected: n, got: f.len() });
    }
    let sec = section(lambda);
    let mu = (group.order() / lambda.order()) as f64;
    let scale = 1.0 / mu.sqrt();
    let mut chi = vec![Complex64::new(0.0, 0.0); n];
    for rep in sec.reps() {
        chi[group.index_of(rep)] = Complex64::new(scale, 0.0);
    }
    let perp = annihilator(lambda);
    // Lattice pairs in lexicographic order.
    let mut pairs: Vec<(Elem, Elem)> = Vec::new();
    for l in lambda.elements() {
        for g in perp.elements() {
            pairs.push((l.clone(), g.clone()));
        }
    }
    // Atoms of f, and the negated-pair basis vectors, in matching order.
    let atoms: Vec<Vec<Complex64>> =
        pairs.iter().map(|(l, g)| tf_shift(&group, l, g, f)).collect();
    let neg_basis: Vec<Vec<Complex64>> = pairs
        .iter()
        .map(|(l, g)| tf_shift(&group, &group.neg(l), &group.neg(g), &chi))
        .collect();
    let mut max_residual = 0.0f64;
    for (j, (a, b)) in pairs.iter().enumerate() {
        let mut rd = vec![Complex64::new(0.0, 0.0); n];
        for (atom, h) in atoms.iter().zip(&neg_basis) {
            let coeff = vdot(atom, &neg_basis[j]);
            for (x, y) in rd.iter_mut().zip(h) {
                *x += coeff * y;
            }
        }
        let target = tf_shift(&group, a, b, f);
        let mut err = 0.0;
        for (x, y) in rd.iter().zip(&target) {
            err += (x - y).norm_sqr();
        }
        max_residual = max_residual.max(err.sqrt());
    }
    let window_norm = vnorm(f);
    let pass = max_residual <= tol * window_norm.max(1.0);
    Ok(Thm43Report { max_residual, window_norm, pass })
}

/// Checks that `e` and `h_tilde` are full bases over the system's group.
fn check_bases(
    sys: &GaborSystem,
    e: &OrthonormalBasis,
    h_tilde: &OrthonormalBasis,
) -> Result<(), RDualError> {
    if e.group() != sys.group() || h_tilde.group() != sys.group() {
        return Err(RDualError::GroupMismatch);
    }
    Ok(())
}

/// The scaled auxiliary family `eTilde_k = d * V_h(conj(p_k))` over the atoms
/// `p_k` of the Parseval window, where `V_h` maps the standard basis onto
/// `h_tilde`.
fn e_tilde_family(
    psys: &GaborSystem,
    h_tilde: &OrthonormalBasis,
    d: f64,
) -> Vec<Vec<Complex64>> {
    let atoms = psys.atoms();
    (0..atoms.len())
        .map(|k| {
            let conj_atom: Vec<Complex64> = atoms.atom(k).iter().map(|z| z.conj()).collect();
            let mut v = h_tilde.apply_unitary(&conj_atom);
            for x in v.iter_mut() {
                *x *= d;
            }
            v
        })
        .collect()
}

/// Adjoint-lattice pairs `(alpha, beta)` of `sys` in lexicographic order.
fn adjoint_pairs(sys: &GaborSystem) -> Vec<(Elem, Elem)> {
    sys.adjoint().pairs()
}

/// Labels an `N`-vector basis by the adjoint lattice pairs followed by
/// opaque filler indices.
fn adjoint_labels(pairs: &[(Elem, Elem)], n: usize) -> Vec<BasisLabel> {
    let mut labels: Vec<BasisLabel> =
        pairs.iter().map(|(a, b)| BasisLabel::Pair(a.clone(), b.clone())).collect();
    for k in pairs.len()..n {
        labels.push(BasisLabel::Index(k));
    }
    labels
}

/// Computes `w_{alpha beta} = sum_{lambda gamma} <E_gamma T_lambda g,
/// e_{alpha beta}> eTilde_{lambda gamma}` for each adjoint-lattice pair
/// (positionally: the first `|adjoint lattice|` vectors of `e`), with
/// `eTilde` built from the canonical Parseval window of the system, and
/// returns the max entrywise defect `|Gram(w) - I|`. When the analyzed window
/// is Parseval the defect is numerically zero for any choice of `e` and
/// `h_tilde`; a tight frame with bound `A` yields `Gram(w) = A*I` instead,
/// and general windows report their actual defect. `tol` is the rank
/// threshold for the internal Parseval-window computation (which requires
/// the system to be a frame).
pub fn parseval_w_orthonormality(
    sys: &GaborSystem,
    e: &OrthonormalBasis,
    h_tilde: &OrthonormalBasis,
    tol: f64,
) -> Result<f64, RDualError> {
    check_bases(sys, e, h_tilde)?;
    let p = crate::spectral::canonical_parseval(sys, Convention::Paper, tol)?;
    let psys = GaborSystem::new(sys.group(), p, sys.lambda().clone(), sys.gamma().clone())?;
    let d = {
        let r = sys.density();
        *r.numer() as f64 / *r.denom() as f64
    };
    let e_tilde = e_tilde_family(&psys, h_tilde, d);
    let g_atoms = sys.atoms();
    let g_list: Vec<Vec<Complex64>> = (0..g_atoms.len()).map(|k| g_atoms.atom(k).to_vec()).collect();
    let m_adj = adjoint_pairs(sys).len();
    let w = linear_rdual(&g_list, &e.vectors()[..m_adj], &e_tilde);
    Ok(gram_defect(&w))
}

/// Orthonormal basis of the orthogonal complement of `span` (assumed
/// orthonormal) in dimension `n`: standard-basis seeds, pivoted by largest
/// residual norm, each projection applied twice.
fn complement_onb(span: &[Vec<Complex64>], n: usize) -> Vec<Vec<Complex64>> {
    let target = n - span.len();
    let mut chosen: Vec<Vec<Complex64>> = Vec::with_capacity(target);
    let mut used = vec![false; n];
    for _ in 0..target {
        let mut best: Option<(usize, f64, Vec<Complex64>)> = None;
        for k in 0..n {
            if used[k] {
                continue;
            }
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[k] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in span.iter().chain(&chosen) {
                    let coeff = vdot(&v, b);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= coeff * y;
                    }
                }
            }
            let norm = vnorm(&v);
            if best.as_ref().is_none_or(|(_, bn, _)| norm > *bn) {
                best = Some((k, norm, v));
            }
        }
        let (k, norm, mut v) = best.expect("complement dimension exhausted early");
        used[k] = true;
        for x in v.iter_mut() {
            *x /= norm;
        }
        chosen.push(v);
    }
    chosen
}

/// A constructive exhibit that the adjoint system of a tight Gabor frame is
/// an R-dual of the system: the R-dual-type sequence `w`, complement bases,
/// and the unitary transporting `w`'s onto the adjoint atoms.
#[derive(Clone, Debug)]
pub struct RDualWitness {
    /// The supplied `e` basis relabeled by adjoint-lattice pairs + filler.
    pub e_basis: OrthonormalBasis,
    /// The transported basis: adjoint atoms of the Parseval window on the
    /// pair labels, complement vectors on filler labels.
    pub h_basis: OrthonormalBasis,
    /// `w_{alpha beta}` per adjoint pair, in label order.
    pub w_sequence: Vec<Vec<Complex64>>,
    /// The unitary `U` with `U w_{alpha beta} = E_beta T_alpha p` and
    /// `U phi_mu = psi_mu` on the complements.
    pub unitary: CMat,
    /// `||U^* U - I||_F`.
    pub unitary_defect: f64,
    /// Max entrywise `|Gram(w) - I|`.
    pub w_gram_defect: f64,
    /// Max over adjoint pairs of `||E_beta T_alpha p - sum_k <p_k, e> U
    /// eTilde_k||`, recomputed from scratch.
    pub max_residual: f64,
}

/// Builds the unitary witness that exhibits the adjoint atoms of a tight
/// Gabor frame (any density `d <= 1`) as an R-dual of an orthonormal basis.
/// The window is rescaled internally by `1/sqrt(A)` to a
/// Parseval window `p`; all reported quantities refer to `p`. Errors if the
/// system is not a tight frame, or if the final identity residual exceeds
/// `tol` (which would signal an implementation bug, not a property of the
/// input).
pub fn adjoint_rdual_witness(
    sys: &GaborSystem,
    e: &OrthonormalBasis,
    h_tilde: &OrthonormalBasis,
    tol: f64,
) -> Result<RDualWitness, RDualError> {
    check_bases(sys, e, h_tilde)?;
    let report = frame_bounds(sys, Convention::Paper, DEFAULT_RANK_TOL)?;
    if !(report.is_frame && report.is_tight) {
        return Err(RDualError::NotTight);
    }
    let group = sys.group().clone();
    let n = group.order() as usize;
    let scale = 1.0 / report.upper.sqrt();
    let p: Vec<Complex64> = sys.window().iter().map(|z| z * scale).collect();
    let psys = GaborSystem::new(&group, p, sys.lambda().clone(), sys.gamma().clone())?;
    let d = {
        let r = sys.density();
        *r.numer() as f64 / *r.denom() as f64
    };

    let p_atoms_set = psys.atoms();
    let p_atoms: Vec<Vec<Complex64>> =
        (0..p_atoms_set.len()).map(|k| p_atoms_set.atom(k).to_vec()).collect();
    let adj = psys.adjoint();
    let adj_atoms_set = adj.atoms();
    let adj_atoms: Vec<Vec<Complex64>> =
        (0..adj_atoms_set.len()).map(|k| adj_atoms_set.atom(k).to_vec()).collect();
    let pairs = adj.pairs();
    let m_adj = pairs.len();

    let e_tilde = e_tilde_family(&psys, h_tilde, d);
    let w = linear_rdual(&p_atoms, &e.vectors()[..m_adj], &e_tilde);
    let w_gram_defect = gram_defect(&w);

    let phi = complement_onb(&w, n);
    let psi = complement_onb(&adj_atoms, n);

    let mut unitary = CMat::zeros(n, n);
    for (a, wv) in adj_atoms.iter().zip(&w) {
        unitary.outer_add(a, wv);
    }
    for (ps, ph) in psi.iter().zip(&phi) {
        unitary.outer_add(ps, ph);
    }
    let unitary_defect = unitary.adjoint().mul(&unitary).identity_defect();

    // Honest restatement of the R-dual identity: transport each eTilde_k
    // through U, then rebuild the sum with freshly computed coefficients.
    let u_e_tilde: Vec<Vec<Complex64>> = e_tilde.iter().map(|v| unitary.matvec(v)).collect();
    let mut max_residual = 0.0f64;
    for (j, target) in adj_atoms.iter().enumerate() {
        let mut recon = vec![Complex64::new(0.0, 0.0); n];
        for (atom, ue) in p_atoms.iter().zip(&u_e_tilde) {
            let coeff = vdot(atom, e.vector(j));
            for (x, y) in recon.iter_mut().zip(ue) {
                *x += coeff * y;
            }
        }
        let mut err = 0.0;
        for (x, y) in recon.iter().zip(target) {
            err += (x - y).norm_sqr();
        }
        max_residual = max_residual.max(err.sqrt());
    }
    if max_residual > tol {
        return Err(RDualError::ResidualTooLarge { residual: max_residual, tol });
    }

    let labels = adjoint_labels(&pairs, n);
    let e_basis = e.with_labels(labels.clone())?;
    let mut h_vectors = adj_atoms.clone();
    h_vectors.extend(psi);
    let h_basis = OrthonormalBasis::new(&group, h_vectors, labels)?;

    Ok(RDualWitness {
        e_basis,
        h_basis,
        w_sequence: w,
        unitary,
        unitary_defect,
        w_gram_defect,
        max_residual,
    })
}
