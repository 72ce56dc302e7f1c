//! Finite abelian groups `Z_{n1} x ... x Z_{nk}` and their duals.
//!
//! The dual group is identified with the same moduli list via the pairing
//! `<xi, x> = exp(2*pi*i * sum_j xi_j x_j / n_j)`; a `Side` tag keeps primal
//! and dual elements apart. All subgroup/annihilator/section computations are
//! exact integer arithmetic; only `pairing` produces floats.
//!
//! Measure convention: counting measure on the primal side, counting measure
//! divided by the group order on the dual side. With this choice
//! `mu_dual(S_Gamma) * mu_primal(S_{Gamma_perp}) = 1` for every dual subgroup
//! `Gamma`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;
use num_rational::Ratio;
use thiserror::Error;

/// Default cap on the group order for general operations.
pub const DEFAULT_MAX_ORDER: u64 = 4096;
/// Default cap on the group order for exhaustive subgroup enumeration.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 64;

/// Which of the two mutually dual copies an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Primal,
    Dual,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Primal => Side::Dual,
            Side::Dual => Side::Primal,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("moduli list is empty")]
    EmptyModuli,
    #[error("modulus at position {index} is {value}; moduli must be >= 1")]
    ModulusNotPositive { index: usize, value: i64 },
    #[error("group order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: u128, cap: u64 },
    #[error("element has arity {got}, group has arity {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("expected a {expected:?}-side element, got {got:?}")]
    SideMismatch { expected: Side, got: Side },
    #[error("element does not belong to the subgroup's parent group")]
    ForeignElement,
    #[error("group order {order} exceeds the exhaustive-enumeration cap {cap}")]
    EnumerationCapExceeded { order: u64, cap: u64 },
}

/// A group element: residues componentwise mod the parent moduli.
///
/// Ordering is lexicographic on residues, which coincides with the order of
/// flat indices within one group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem {
    residues: Vec<u64>,
    side: Side,
}

impl Elem {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn side(&self) -> Side {
        self.side
    }
}

/// `Z_{n1} x ... x Z_{nk}` described by its moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    moduli: Vec<u64>,
    order: u64,
}

/// Validates moduli and the order cap (`DEFAULT_MAX_ORDER`).
pub fn make_group(moduli: &[i64]) -> Result<GroupSpec, GroupError> {
    make_group_with_cap(moduli, DEFAULT_MAX_ORDER)
}

pub fn make_group_with_cap(moduli: &[i64], cap: u64) -> Result<GroupSpec, GroupError> {
    if moduli.is_empty() {
        return Err(GroupError::EmptyModuli);
    }
    for (index, &value) in moduli.iter().enumerate() {
        if value <= 0 {
            return Err(GroupError::ModulusNotPositive { index, value });
        }
    }
    let mut order: u128 = 1;
    for &m in moduli {
        order *= m as u128;
        if order > cap as u128 {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
    }
    Ok(GroupSpec { moduli: moduli.iter().map(|&m| m as u64).collect(), order: order as u64 })
}

impl GroupSpec {
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn arity(&self) -> usize {
        self.moduli.len()
    }

    fn check_arity(&self, len: usize) -> Result<(), GroupError> {
        if len != self.moduli.len() {
            return Err(GroupError::ArityMismatch { expected: self.moduli.len(), got: len });
        }
        Ok(())
    }

    /// Builds an element, reducing each residue mod the matching modulus.
    pub fn elem(&self, residues: &[i64], side: Side) -> Result<Elem, GroupError> {
        self.check_arity(residues.len())?;
        let residues = residues
            .iter()
            .zip(&self.moduli)
            .map(|(&r, &m)| r.rem_euclid(m as i64) as u64)
            .collect();
        Ok(Elem { residues, side })
    }

    pub fn zero(&self, side: Side) -> Elem {
        Elem { residues: vec![0; self.moduli.len()], side }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        assert_eq!(a.side, b.side, "add: mixed sides");
        assert_eq!(a.residues.len(), self.moduli.len(), "add: foreign element");
        assert_eq!(b.residues.len(), self.moduli.len(), "add: foreign element");
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect();
        Elem { residues, side: a.side }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        assert_eq!(a.residues.len(), self.moduli.len(), "neg: foreign element");
        let residues =
            a.residues.iter().zip(&self.moduli).map(|(&x, &m)| if x == 0 { 0 } else { m - x }).collect();
        Elem { residues, side: a.side }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    /// Mixed-radix row-major flat index: `sum_j x_j * prod_{l>j} n_l`.
    pub fn index_of(&self, a: &Elem) -> usize {
        assert_eq!(a.residues.len(), self.moduli.len(), "index_of: foreign element");
        let mut idx: u64 = 0;
        for (&r, &m) in a.residues.iter().zip(&self.moduli) {
            idx = idx * m + r;
        }
        idx as usize
    }

    pub fn elem_from_index(&self, mut idx: usize, side: Side) -> Elem {
        let mut residues = vec![0u64; self.moduli.len()];
        for j in (0..self.moduli.len()).rev() {
            let m = self.moduli[j];
            residues[j] = (idx as u64) % m;
            idx /= m as usize;
        }
        Elem { residues, side }
    }

    /// All elements of one side in flat-index order.
    pub fn elements(&self, side: Side) -> Vec<Elem> {
        (0..self.order as usize).map(|i| self.elem_from_index(i, side)).collect()
    }

    /// Integer phase `k` with `pairing(xi, x) = exp(2 pi i k / N)`:
    /// `k = sum_j xi_j x_j (N / n_j) mod N`. Exact.
    pub fn character_phase(&self, xi: &Elem, x: &Elem) -> Result<u64, GroupError> {
        if xi.side != Side::Dual {
            return Err(GroupError::SideMismatch { expected: Side::Dual, got: xi.side });
        }
        if x.side != Side::Primal {
            return Err(GroupError::SideMismatch { expected: Side::Primal, got: x.side });
        }
        self.check_arity(xi.residues.len())?;
        self.check_arity(x.residues.len())?;
        let n = self.order as u128;
        let mut k: u128 = 0;
        for ((&a, &b), &m) in xi.residues.iter().zip(&x.residues).zip(&self.moduli) {
            k = (k + (a as u128) * (b as u128) % n * (n / m as u128)) % n;
        }
        Ok(k as u64)
    }

    /// `<xi, x> = exp(2 pi i sum_j xi_j x_j / n_j)`; exactly `1` when the
    /// integer phase vanishes.
    pub fn pairing(&self, xi: &Elem, x: &Elem) -> Result<Complex64, GroupError> {
        let k = self.character_phase(xi, x)?;
        Ok(self.root_of_unity(k))
    }

    /// `exp(2 pi i k / N)` for an integer phase `k` (mod `N`).
    pub fn root_of_unity(&self, k: u64) -> Complex64 {
        let k = k % self.order;
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::cis(TAU * (k as f64) / (self.order as f64))
        }
    }

    /// Point mass of the chosen measure: `1` on the primal side, `1/N` on the
    /// dual side.
    pub fn point_weight(&self, side: Side) -> f64 {
        match side {
            Side::Primal => 1.0,
            Side::Dual => 1.0 / self.order as f64,
        }
    }
}

/// A subgroup, stored with its full (sorted) element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: GroupSpec,
    side: Side,
    generators: Vec<Elem>,
    elements: Vec<Elem>,
}

impl Subgroup {
    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    /// Elements sorted by flat index; the first is always `0`.
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.position_of(e).is_some()
    }

    /// Position of `e` in the sorted element list, if present.
    pub fn position_of(&self, e: &Elem) -> Option<usize> {
        if e.side != self.side || e.residues.len() != self.parent.moduli.len() {
            return None;
        }
        self.elements.binary_search(e).ok()
    }

    /// Index of the coset `e + self` among cosets ordered by minimal flat
    /// index, together with that minimal representative.
    pub fn coset_min_rep(&self, e: &Elem) -> Elem {
        let g = &self.parent;
        let mut best = g.add(e, &self.elements[0]);
        for l in &self.elements[1..] {
            let cand = g.add(e, l);
            if cand < best {
                best = cand;
            }
        }
        best
    }
}

/// Closure of flat-index set under addition, as a boolean table.
fn close_indices(group: &GroupSpec, seeds: &[usize]) -> Vec<bool> {
    let n = group.order as usize;
    let mut present = vec![false; n];
    present[0] = true;
    let mut stack: Vec<usize> = vec![0];
    for &s in seeds {
        if !present[s] {
            present[s] = true;
            stack.push(s);
        }
    }
    let gens: Vec<Elem> = seeds.iter().map(|&s| group.elem_from_index(s, Side::Primal)).collect();
    while let Some(x) = stack.pop() {
        let ex = group.elem_from_index(x, Side::Primal);
        for g in &gens {
            let y = group.index_of(&group.add(&ex, g));
            if !present[y] {
                present[y] = true;
                stack.push(y);
            }
        }
    }
    present
}

/// Subgroup generated by `generators` (empty list gives the trivial subgroup).
pub fn span_subgroup(
    group: &GroupSpec,
    side: Side,
    generators: &[Elem],
) -> Result<Subgroup, GroupError> {
    let mut gens = Vec::with_capacity(generators.len());
    for g in generators {
        if g.side != side {
            return Err(GroupError::ForeignElement);
        }
        if g.residues.len() != group.moduli.len() {
            return Err(GroupError::ForeignElement);
        }
        gens.push(g.clone());
    }
    let seeds: Vec<usize> = gens.iter().map(|g| group.index_of(g)).collect();
    let present = close_indices(group, &seeds);
    let elements = present
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| group.elem_from_index(i, side))
        .collect();
    Ok(Subgroup { parent: group.clone(), side, generators: gens, elements })
}

/// Greedy minimal generator list for a known element set (deterministic:
/// scans elements in flat order, keeps those enlarging the span).
fn minimal_generators(group: &GroupSpec, side: Side, element_indices: &[usize]) -> Vec<Elem> {
    let mut gens: Vec<usize> = Vec::new();
    let mut present = close_indices(group, &gens);
    for &i in element_indices {
        if !present[i] {
            gens.push(i);
            present = close_indices(group, &gens);
        }
    }
    gens.into_iter().map(|i| group.elem_from_index(i, side)).collect()
}

/// Annihilator `L_perp = { xi : <xi, l> = 1 for all l in L }`, computed by the
/// exact congruence `sum_j xi_j l_j (N / n_j) = 0 (mod N)` against the
/// generators of `L`. Lives on the opposite side.
pub fn annihilator(sub: &Subgroup) -> Subgroup {
    let group = &sub.parent;
    let n = group.order as usize;
    let out_side = sub.side.flipped();
    let mut indices = Vec::new();
    for i in 0..n {
        let cand = group.elem_from_index(i, out_side);
        let annihilates = sub.generators.iter().all(|g| {
            let (xi, x) = match sub.side {
                Side::Primal => (&cand, g),
                Side::Dual => (g, &cand),
            };
            group.character_phase(xi, x).expect("sides fixed by construction") == 0
        });
        if annihilates {
            indices.push(i);
        }
    }
    let generators = minimal_generators(group, out_side, &indices);
    let elements = indices.iter().map(|&i| group.elem_from_index(i, out_side)).collect();
    Subgroup { parent: group.clone(), side: out_side, generators, elements }
}

/// A canonical coset transversal: the minimal-flat-index representative of
/// each coset of the subgroup, listed in increasing flat index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    subgroup: Subgroup,
    reps: Vec<Elem>,
}

impl Section {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }

    /// Measure of the section under the side's measure: `N/|L|` primal,
    /// `1/|L|` dual. Exact.
    pub fn measure(&self) -> Ratio<u64> {
        section_measure(&self.subgroup)
    }
}

/// Measure of a canonical section of `G/L` without building it.
pub fn section_measure(sub: &Subgroup) -> Ratio<u64> {
    let n = sub.parent.order();
    match sub.side {
        Side::Primal => Ratio::from_integer(n / sub.order()),
        Side::Dual => Ratio::new(1, sub.order()),
    }
}

/// Builds the canonical section of `parent/sub`.
pub fn section(sub: &Subgroup) -> Section {
    let group = &sub.parent;
    let n = group.order as usize;
    let mut covered = vec![false; n];
    let mut reps = Vec::with_capacity(n / sub.elements.len());
    for i in 0..n {
        if covered[i] {
            continue;
        }
        let rep = group.elem_from_index(i, sub.side);
        for l in &sub.elements {
            covered[group.index_of(&group.add(&rep, l))] = true;
        }
        reps.push(rep);
    }
    Section { subgroup: sub.clone(), reps }
}

/// Every subgroup of the group, sorted by (order, element list). Exhaustive
/// search; guarded by `cap` (see `DEFAULT_EXHAUSTIVE_CAP`).
pub fn enumerate_subgroups(
    group: &GroupSpec,
    side: Side,
    cap: u64,
) -> Result<Vec<Subgroup>, GroupError> {
    if group.order > cap {
        return Err(GroupError::EnumerationCapExceeded { order: group.order, cap });
    }
    let n = group.order as usize;
    // Precomputed addition on flat indices.
    let elems: Vec<Elem> = (0..n).map(|i| group.elem_from_index(i, Side::Primal)).collect();
    let mut add = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = group.index_of(&group.add(&elems[a], &elems[b])) as u32;
        }
    }
    let close = |seeds: &[usize]| -> Vec<usize> {
        let mut present = vec![false; n];
        present[0] = true;
        let mut stack: Vec<usize> = seeds.to_vec();
        for &s in seeds {
            present[s] = true;
        }
        while let Some(x) = stack.pop() {
            for &s in seeds {
                let y = add[x * n + s] as usize;
                if !present[y] {
                    present[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..n).filter(|&i| present[i]).collect()
    };

    use alloc::collections::BTreeSet;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = vec![0usize];
    seen.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(current) = frontier.pop() {
        for x in 1..n {
            if current.binary_search(&x).is_ok() {
                continue;
            }
            let mut seeds = current.clone();
            seeds.push(x);
            let closed = close(&seeds);
            if seen.insert(closed.clone()) {
                frontier.push(closed);
            }
        }
    }
    let mut all: Vec<Vec<usize>> = seen.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(all
        .into_iter()
        .map(|indices| {
            let generators = minimal_generators(group, side, &indices);
            let elements = indices.iter().map(|&i| group.elem_from_index(i, side)).collect();
            Subgroup { parent: group.clone(), side, generators, elements }
        })
        .collect())
}
