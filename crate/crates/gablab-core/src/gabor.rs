//! Gabor systems `{ E_gamma T_lambda g : lambda in Lambda, gamma in Gamma }`
//! over a finite abelian group, where `Lambda` is a subgroup of the group and
//! `Gamma` a subgroup of its dual.
//!
//! Conventions:
//! - translation `(T_x f)(t) = f(t - x)`, modulation `(E_xi f)(t) = <xi, t> f(t)`;
//! - an atom is `E_gamma T_lambda g` (modulation after translation);
//! - atoms are ordered lexicographically by (flat index of `lambda`, flat
//!   index of `gamma`);
//! - inner products conjugate the second argument, and coefficient space
//!   carries counting measure, so `analysis(f)[k] = <f, atom_k>`.

use crate::group::{annihilator, Elem, GroupSpec, Side, Subgroup};
use crate::mat::{vdot, CMat};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_rational::Ratio;
// Brings sqrt/abs to f64 under no_std; shadowed by inherent methods with std.
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaborError {
    #[error("window has length {got}, group has order {expected}")]
    WindowLength { expected: usize, got: usize },
    #[error("translation lattice must be a primal-side subgroup")]
    TranslationSide,
    #[error("modulation lattice must be a dual-side subgroup")]
    ModulationSide,
    #[error("lattice subgroup belongs to a different group")]
    ParentMismatch,
    #[error("coefficient array has shape {got_rows}x{got_cols}, expected {rows}x{cols}")]
    CoefficientShape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("shift element is not a member of the corresponding lattice")]
    NotInLattice,
}

/// `(T_x f)(t) = f(t - x)`. Panics if `x` is not a primal element of `group`
/// or `f` has the wrong length.
pub fn translate(group: &GroupSpec, x: &Elem, f: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(x.side(), Side::Primal, "translate: primal shifts only");
    assert_eq!(f.len(), group.order() as usize, "translate: length mismatch");
    let n = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for t in 0..n {
        let te = group.elem_from_index(t, Side::Primal);
        let s = group.index_of(&group.sub(&te, x));
        out[t] = f[s];
    }
    out
}

/// `(E_xi f)(t) = <xi, t> f(t)`. Panics on side/length mismatch.
pub fn modulate(group: &GroupSpec, xi: &Elem, f: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(xi.side(), Side::Dual, "modulate: dual shifts only");
    assert_eq!(f.len(), group.order() as usize, "modulate: length mismatch");
    (0..f.len())
        .map(|t| {
            let te = group.elem_from_index(t, Side::Primal);
            group.pairing(xi, &te).expect("sides checked") * f[t]
        })
        .collect()
}

/// `E_xi T_x f`.
pub fn tf_shift(group: &GroupSpec, x: &Elem, xi: &Elem, f: &[Complex64]) -> Vec<Complex64> {
    modulate(group, xi, &translate(group, x, f))
}

/// `|| E_xi T_x f - <xi, x> T_x E_xi f ||`; zero in exact arithmetic.
pub fn commutation_defect(group: &GroupSpec, x: &Elem, xi: &Elem, f: &[Complex64]) -> f64 {
    let lhs = modulate(group, xi, &translate(group, x, f));
    let phase = group.pairing(xi, x).expect("sides checked");
    let rhs: Vec<Complex64> =
        translate(group, x, &modulate(group, xi, f)).iter().map(|v| phase * v).collect();
    let mut s = 0.0;
    for (a, b) in lhs.iter().zip(&rhs) {
        s += (a - b).norm_sqr();
    }
    s.sqrt()
}

/// Coefficients on `Lambda x Gamma`, row-major with modulation fastest, i.e.
/// laid out in the lexicographic atom order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientArray {
    num_translations: usize,
    num_modulations: usize,
    values: Vec<Complex64>,
}

impl CoefficientArray {
    pub fn zeros(num_translations: usize, num_modulations: usize) -> CoefficientArray {
        CoefficientArray {
            num_translations,
            num_modulations,
            values: vec![Complex64::new(0.0, 0.0); num_translations * num_modulations],
        }
    }

    pub fn from_values(
        num_translations: usize,
        num_modulations: usize,
        values: Vec<Complex64>,
    ) -> Result<CoefficientArray, GaborError> {
        if values.len() != num_translations * num_modulations {
            return Err(GaborError::CoefficientShape {
                rows: num_translations,
                cols: num_modulations,
                got_rows: values.len(),
                got_cols: 1,
            });
        }
        Ok(CoefficientArray { num_translations, num_modulations, values })
    }

    pub fn num_translations(&self) -> usize {
        self.num_translations
    }

    pub fn num_modulations(&self) -> usize {
        self.num_modulations
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.num_modulations + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.values[i * self.num_modulations + j] = v;
    }

    /// Flat view in atom order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// The atoms of a system: index pairs and the stacked atom matrix
/// (row `k` is the `k`-th atom as a vector of length `N`).
#[derive(Clone, Debug)]
pub struct AtomSet {
    pairs: Vec<(Elem, Elem)>,
    matrix: CMat,
}

impl AtomSet {
    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.pairs
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn atom(&self, k: usize) -> &[Complex64] {
        self.matrix.row(k)
    }
}

/// A window together with a time-frequency lattice `Lambda x Gamma`.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    group: GroupSpec,
    window: Vec<Complex64>,
    lambda: Subgroup,
    gamma: Subgroup,
}

impl GaborSystem {
    pub fn new(
        group: &GroupSpec,
        window: Vec<Complex64>,
        lambda: Subgroup,
        gamma: Subgroup,
    ) -> Result<GaborSystem, GaborError> {
        if window.len() != group.order() as usize {
            return Err(GaborError::WindowLength {
                expected: group.order() as usize,
                got: window.len(),
            });
        }
        if lambda.side() != Side::Primal {
            return Err(GaborError::TranslationSide);
        }
        if gamma.side() != Side::Dual {
            return Err(GaborError::ModulationSide);
        }
        if lambda.parent() != group || gamma.parent() != group {
            return Err(GaborError::ParentMismatch);
        }
        Ok(GaborSystem { group: group.clone(), window, lambda, gamma })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn window(&self) -> &[Complex64] {
        &self.window
    }

    pub fn lambda(&self) -> &Subgroup {
        &self.lambda
    }

    pub fn gamma(&self) -> &Subgroup {
        &self.gamma
    }

    pub fn num_atoms(&self) -> usize {
        (self.lambda.order() * self.gamma.order()) as usize
    }

    /// Lattice density `d = N / (|Lambda| |Gamma|)`, exact.
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.group.order(), self.lambda.order() * self.gamma.order())
    }

    /// The adjoint system: same window on `Gamma_perp x Lambda_perp`.
    pub fn adjoint(&self) -> GaborSystem {
        GaborSystem {
            group: self.group.clone(),
            window: self.window.clone(),
            lambda: annihilator(&self.gamma),
            gamma: annihilator(&self.lambda),
        }
    }

    /// Index pairs `(lambda, gamma)` in atom order.
    pub fn pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::with_capacity(self.num_atoms());
        for l in self.lambda.elements() {
            for g in self.gamma.elements() {
                out.push((l.clone(), g.clone()));
            }
        }
        out
    }

    /// `E_gamma T_lambda g` for arbitrary primal `lambda` / dual `gamma`
    /// (membership in the lattice is not required).
    pub fn atom(&self, lambda: &Elem, gamma: &Elem) -> Vec<Complex64> {
        tf_shift(&self.group, lambda, gamma, &self.window)
    }

    pub fn atoms(&self) -> AtomSet {
        let n = self.group.order() as usize;
        let pairs = self.pairs();
        let mut matrix = CMat::zeros(pairs.len(), n);
        for (k, (l, g)) in pairs.iter().enumerate() {
            let a = self.atom(l, g);
            for (t, v) in a.iter().enumerate() {
                matrix.set(k, t, *v);
            }
        }
        AtomSet { pairs, matrix }
    }

    /// `analysis(f)[k] = <f, atom_k>`.
    pub fn analysis(&self, f: &[Complex64]) -> Result<CoefficientArray, GaborError> {
        let n = self.group.order() as usize;
        if f.len() != n {
            return Err(GaborError::WindowLength { expected: n, got: f.len() });
        }
        let atoms = self.atoms();
        let values = (0..atoms.len()).map(|k| vdot(f, atoms.atom(k))).collect();
        Ok(CoefficientArray {
            num_translations: self.lambda.order() as usize,
            num_modulations: self.gamma.order() as usize,
            values,
        })
    }

    /// `synthesis(c) = sum_k c_k atom_k`; adjoint of `analysis`.
    pub fn synthesis(&self, c: &CoefficientArray) -> Result<Vec<Complex64>, GaborError> {
        let rows = self.lambda.order() as usize;
        let cols = self.gamma.order() as usize;
        if c.num_translations != rows || c.num_modulations != cols {
            return Err(GaborError::CoefficientShape {
                rows,
                cols,
                got_rows: c.num_translations,
                got_cols: c.num_modulations,
            });
        }
        let n = self.group.order() as usize;
        let atoms = self.atoms();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, &ck) in c.values.iter().enumerate() {
            let a = atoms.atom(k);
            for t in 0..n {
                out[t] += ck * a[t];
            }
        }
        Ok(out)
    }

    /// Frame-type operator `S = weight * sum_k atom_k atom_k^*`; `weight = 1`
    /// gives the raw (counting-measure) frame operator.
    pub fn frame_operator(&self, weight: f64) -> CMat {
        let n = self.group.order() as usize;
        let atoms = self.atoms();
        let mut s = CMat::zeros(n, n);
        for k in 0..atoms.len() {
            s.rank_one_update(atoms.atom(k), weight);
        }
        s
    }

    /// Gram matrix `G[i][j] = <atom_i, atom_j>` in atom order.
    pub fn gram(&self) -> CMat {
        let a = self.atoms().matrix().clone();
        a.mul(&a.adjoint())
    }
}

/// Coefficient-side image of translation by `shift in Lambda`:
/// `out[lambda][gamma] = conj(<gamma, shift>) c[lambda - shift][gamma]`.
/// Satisfies `analysis(T_shift f) = intertwiner_u(shift, analysis(f))`.
pub fn intertwiner_u(
    sys: &GaborSystem,
    shift: &Elem,
    c: &CoefficientArray,
) -> Result<CoefficientArray, GaborError> {
    let rows = sys.lambda.order() as usize;
    let cols = sys.gamma.order() as usize;
    if c.num_translations != rows || c.num_modulations != cols {
        return Err(GaborError::CoefficientShape {
            rows,
            cols,
            got_rows: c.num_translations,
            got_cols: c.num_modulations,
        });
    }
    if !sys.lambda.contains(shift) {
        return Err(GaborError::NotInLattice);
    }
    let g = &sys.group;
    let mut out = CoefficientArray::zeros(rows, cols);
    for (i, l) in sys.lambda.elements().iter().enumerate() {
        let src = sys
            .lambda
            .position_of(&g.sub(l, shift))
            .expect("subgroup closed under subtraction");
        for (j, ga) in sys.gamma.elements().iter().enumerate() {
            let phase = g.pairing(ga, shift).expect("sides fixed").conj();
            out.set(i, j, phase * c.at(src, j));
        }
    }
    Ok(out)
}

/// Coefficient-side image of modulation by `shift in Gamma`:
/// `out[lambda][gamma] = c[lambda][gamma - shift]`.
/// Satisfies `analysis(E_shift f) = intertwiner_v(shift, analysis(f))`.
pub fn intertwiner_v(
    sys: &GaborSystem,
    shift: &Elem,
    c: &CoefficientArray,
) -> Result<CoefficientArray, GaborError> {
    let rows = sys.lambda.order() as usize;
    let cols = sys.gamma.order() as usize;
    if c.num_translations != rows || c.num_modulations != cols {
        return Err(GaborError::CoefficientShape {
            rows,
            cols,
            got_rows: c.num_translations,
            got_cols: c.num_modulations,
        });
    }
    if !sys.gamma.contains(shift) {
        return Err(GaborError::NotInLattice);
    }
    let g = &sys.group;
    let mut out = CoefficientArray::zeros(rows, cols);
    for i in 0..rows {
        for (j, ga) in sys.gamma.elements().iter().enumerate() {
            let src = sys
                .gamma
                .position_of(&g.sub(ga, shift))
                .expect("subgroup closed under subtraction");
            out.set(i, j, c.at(i, src));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_subgroups, make_group, span_subgroup};
    use crate::mat::vnorm;
    use crate::rng::Rng;

    fn full_system(moduli: &[i64], window: Vec<Complex64>) -> GaborSystem {
        let g = make_group(moduli).unwrap();
        let lambda = span_subgroup(&g, Side::Primal, &g.elements(Side::Primal)).unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &g.elements(Side::Dual)).unwrap();
        GaborSystem::new(&g, window, lambda, gamma).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn translate_and_modulate_basics() {
        let g = make_group(&[4]).unwrap();
        let delta0 = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let one = g.elem(&[1], Side::Primal).unwrap();
        let t = translate(&g, &one, &delta0);
        assert_eq!(t, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let ones = vec![c(1.0, 0.0); 4];
        let xi = g.elem(&[1], Side::Dual).unwrap();
        let m = modulate(&g, &xi, &ones);
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (a, b) in m.iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn delta_window_atoms_on_order_two_group() {
        let sys = full_system(&[2], vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(sys.num_atoms(), 4);
        assert_eq!(sys.density(), Ratio::new(1, 2));
        let atoms = sys.atoms();
        let rows: Vec<Vec<Complex64>> = (0..4).map(|k| atoms.atom(k).to_vec()).collect();
        assert_eq!(rows[0], vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rows[1], vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rows[2], vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((rows[3][1] - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(rows[3][0], c(0.0, 0.0));

        let f = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let coef = sys.analysis(&f).unwrap();
        let expect = [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        for (a, b) in coef.values().iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-14);
        }

        let s = sys.frame_operator(1.0);
        assert!(s.sub(&CMat::identity(2).scale(2.0)).frobenius() < 1e-14);
    }

    #[test]
    fn constructor_validates() {
        let g = make_group(&[4]).unwrap();
        let lambda = span_subgroup(&g, Side::Primal, &[]).unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &[]).unwrap();
        assert_eq!(
            GaborSystem::new(&g, vec![c(1.0, 0.0); 3], lambda.clone(), gamma.clone())
                .map(|_| ()),
            Err(GaborError::WindowLength { expected: 4, got: 3 })
        );
        assert_eq!(
            GaborSystem::new(&g, vec![c(1.0, 0.0); 4], gamma.clone(), gamma.clone())
                .map(|_| ()),
            Err(GaborError::TranslationSide)
        );
        let other = make_group(&[2, 2]).unwrap();
        let foreign = span_subgroup(&other, Side::Primal, &[]).unwrap();
        assert_eq!(
            GaborSystem::new(&g, vec![c(1.0, 0.0); 4], foreign, gamma).map(|_| ()),
            Err(GaborError::ParentMismatch)
        );
    }

    #[test]
    fn commutation_defect_vanishes() {
        let g = make_group(&[6]).unwrap();
        let mut rng = Rng::from_seed(11);
        let f = rng.complex_vector(6);
        for xi_i in 0..6 {
            for x_i in 0..6 {
                let x = g.elem_from_index(x_i, Side::Primal);
                let xi = g.elem_from_index(xi_i, Side::Dual);
                assert!(commutation_defect(&g, &x, &xi, &f) < 1e-13);
            }
        }
    }

    #[test]
    fn synthesis_is_adjoint_of_analysis() {
        let g = make_group(&[2, 3]).unwrap();
        let lambda = span_subgroup(&g, Side::Primal, &[g.elem(&[1, 0], Side::Primal).unwrap()])
            .unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &[g.elem(&[0, 1], Side::Dual).unwrap()])
            .unwrap();
        let mut rng = Rng::from_seed(3);
        let sys = GaborSystem::new(&g, rng.complex_vector(6), lambda, gamma).unwrap();
        let f = rng.complex_vector(6);
        let cvals = rng.complex_vector(sys.num_atoms());
        let carr = CoefficientArray::from_values(
            sys.lambda().order() as usize,
            sys.gamma().order() as usize,
            cvals.clone(),
        )
        .unwrap();
        let lhs = vdot(sys.analysis(&f).unwrap().values(), &cvals);
        let rhs = vdot(&f, &sys.synthesis(&carr).unwrap());
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn frame_operator_matches_synthesis_of_analysis() {
        let g = make_group(&[8]).unwrap();
        let lambda = span_subgroup(&g, Side::Primal, &[g.elem(&[2], Side::Primal).unwrap()])
            .unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &[g.elem(&[4], Side::Dual).unwrap()]).unwrap();
        let mut rng = Rng::from_seed(9);
        let sys = GaborSystem::new(&g, rng.complex_vector(8), lambda, gamma).unwrap();
        let f = rng.complex_vector(8);
        let via_op = sys.frame_operator(1.0).matvec(&f);
        let via_cs = sys.synthesis(&sys.analysis(&f).unwrap()).unwrap();
        let mut diff = 0.0f64;
        for (a, b) in via_op.iter().zip(&via_cs) {
            diff += (a - b).norm_sqr();
        }
        assert!(diff.sqrt() < 1e-11);
        // Weighted operator scales linearly.
        let via_half = sys.frame_operator(0.5).matvec(&f);
        for (a, b) in via_half.iter().zip(&via_op) {
            assert!((*a * 2.0 - b).norm() < 1e-11);
        }
    }

    #[test]
    fn gram_matches_atom_inner_products() {
        let g = make_group(&[4]).unwrap();
        let lambda = span_subgroup(&g, Side::Primal, &[g.elem(&[2], Side::Primal).unwrap()])
            .unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &[g.elem(&[2], Side::Dual).unwrap()]).unwrap();
        let mut rng = Rng::from_seed(5);
        let sys = GaborSystem::new(&g, rng.complex_vector(4), lambda, gamma).unwrap();
        let gram = sys.gram();
        let atoms = sys.atoms();
        for i in 0..atoms.len() {
            for j in 0..atoms.len() {
                let expect = vdot(atoms.atom(i), atoms.atom(j));
                assert!((gram.at(i, j) - expect).norm() < 1e-13);
            }
        }
        assert!(gram.hermitian_defect() < 1e-13);
    }

    #[test]
    fn adjoint_system_lives_on_annihilators() {
        let g = make_group(&[12]).unwrap();
        let lambda = span_subgroup(&g, Side::Primal, &[g.elem(&[3], Side::Primal).unwrap()])
            .unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &[g.elem(&[6], Side::Dual).unwrap()]).unwrap();
        let sys = GaborSystem::new(&g, vec![c(1.0, 0.0); 12], lambda, gamma).unwrap();
        let adj = sys.adjoint();
        assert_eq!(adj.lambda().order(), 6); // Gamma_perp for |Gamma| = 2
        assert_eq!(adj.gamma().order(), 3); // Lambda_perp for |Lambda| = 4
        // |adjoint lattice| = N * d.
        let d = sys.density();
        assert_eq!(
            Ratio::from_integer(adj.num_atoms() as u64),
            d * Ratio::from_integer(g.order())
        );
    }

    #[test]
    fn intertwiners_match_shifted_analysis() {
        let g = make_group(&[2, 4]).unwrap();
        let mut rng = Rng::from_seed(21);
        for lambda in enumerate_subgroups(&g, Side::Primal, 64).unwrap() {
            for gamma in enumerate_subgroups(&g, Side::Dual, 64).unwrap() {
                let sys = GaborSystem::new(
                    &g,
                    rng.complex_vector(8),
                    lambda.clone(),
                    gamma.clone(),
                )
                .unwrap();
                let f = rng.complex_vector(8);
                let base = sys.analysis(&f).unwrap();
                for shift in lambda.elements() {
                    let direct = sys.analysis(&translate(&g, shift, &f)).unwrap();
                    let via = intertwiner_u(&sys, shift, &base).unwrap();
                    let mut defect = 0.0f64;
                    for (a, b) in direct.values().iter().zip(via.values()) {
                        defect += (a - b).norm_sqr();
                    }
                    assert!(defect.sqrt() < 1e-11, "translation intertwiner");
                }
                for shift in gamma.elements() {
                    let direct = sys.analysis(&modulate(&g, shift, &f)).unwrap();
                    let via = intertwiner_v(&sys, shift, &base).unwrap();
                    let mut defect = 0.0f64;
                    for (a, b) in direct.values().iter().zip(via.values()) {
                        defect += (a - b).norm_sqr();
                    }
                    assert!(defect.sqrt() < 1e-11, "modulation intertwiner");
                }
            }
        }
    }

    #[test]
    fn intertwiner_rejects_elements_outside_lattice() {
        let g = make_group(&[4]).unwrap();
        let lambda = span_subgroup(&g, Side::Primal, &[g.elem(&[2], Side::Primal).unwrap()])
            .unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &[g.elem(&[2], Side::Dual).unwrap()]).unwrap();
        let sys =
            GaborSystem::new(&g, vec![c(1.0, 0.0); 4], lambda, gamma).unwrap();
        let c0 = CoefficientArray::zeros(2, 2);
        let outside = g.elem(&[1], Side::Primal).unwrap();
        assert_eq!(intertwiner_u(&sys, &outside, &c0), Err(GaborError::NotInLattice));
        let outside_d = g.elem(&[1], Side::Dual).unwrap();
        assert_eq!(intertwiner_v(&sys, &outside_d, &c0), Err(GaborError::NotInLattice));
    }

    #[test]
    fn atom_norm_is_window_norm() {
        let g = make_group(&[3, 3]).unwrap();
        let mut rng = Rng::from_seed(2);
        let w = rng.complex_vector(9);
        let wn = vnorm(&w);
        let lambda = span_subgroup(&g, Side::Primal, &[g.elem(&[1, 0], Side::Primal).unwrap()])
            .unwrap();
        let gamma = span_subgroup(&g, Side::Dual, &[g.elem(&[0, 1], Side::Dual).unwrap()])
            .unwrap();
        let sys = GaborSystem::new(&g, w, lambda, gamma).unwrap();
        let atoms = sys.atoms();
        for k in 0..atoms.len() {
            assert!((vnorm(atoms.atom(k)) - wn).abs() < 1e-12);
        }
    }
}
