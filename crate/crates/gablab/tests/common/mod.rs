//! Shared fixtures for the acceptance suite: the catalog of finite abelian
//! groups up to a given order, seeded windows, and planted-spectrum
//! Hermitian matrices.

#![allow(dead_code)]

pub mod cyclotomic;

use gablab::core::group::{make_group, GroupSpec};
use gablab::core::mat::CMat;
use gablab::core::rng::Rng;
use gablab::core::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Partitions of `e` as nonincreasing positive parts.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = remaining.min(max_part);
        for part in (1..=top).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

/// Moduli lists of every abelian group of order `n`, one per isomorphism
/// class, each sorted descending.
pub fn abelian_structures(n: u64) -> Vec<Vec<i64>> {
    if n == 1 {
        return vec![vec![1]];
    }
    // Factor n and collect per-prime cyclic factor choices.
    let mut rest = n;
    let mut prime_powers: Vec<(u64, u32)> = Vec::new();
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            prime_powers.push((p, e));
        }
        p += 1;
    }
    if rest > 1 {
        prime_powers.push((rest, 1));
    }
    // Cartesian product over primes of the partition choices.
    let mut structures: Vec<Vec<i64>> = vec![vec![]];
    for (p, e) in prime_powers {
        let choices = partitions(e);
        let mut next = Vec::new();
        for base in &structures {
            for parts in &choices {
                let mut moduli = base.clone();
                for &part in parts {
                    moduli.push(p.pow(part) as i64);
                }
                next.push(moduli);
            }
        }
        structures = next;
    }
    for moduli in &mut structures {
        moduli.sort_unstable_by(|a, b| b.cmp(a));
    }
    structures
}

/// Every abelian group with `2 <= order <= max_order`, plus the trivial
/// group when `max_order >= 1`.
pub fn abelian_groups_up_to(max_order: u64) -> Vec<GroupSpec> {
    let mut groups = Vec::new();
    for n in 1..=max_order {
        for moduli in abelian_structures(n) {
            groups.push(make_group(&moduli).expect("catalog moduli are valid"));
        }
    }
    groups
}

/// A seeded window with integer entries in `{-3, ..., 3}` (never all zero).
pub fn integer_window(n: usize, seed: u64) -> Vec<i64> {
    let mut rng = Rng::from_seed(seed);
    loop {
        let w: Vec<i64> = (0..n).map(|_| (rng.next_u64() % 7) as i64 - 3).collect();
        if w.iter().any(|&x| x != 0) {
            return w;
        }
    }
}

pub fn to_complex_window(w: &[i64]) -> Vec<Complex64> {
    w.iter().map(|&x| c(x as f64, 0.0)).collect()
}

/// `H = Q D Q^*` with planted diagonal `values` and `Q` a product of
/// `reflections` Householder reflections drawn from the seed.
pub fn planted_hermitian(values: &[f64], reflections: usize, seed: u64) -> CMat {
    let n = values.len();
    let mut h = CMat::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        h.set(i, i, c(v, 0.0));
    }
    let mut rng = Rng::from_seed(seed);
    for _ in 0..reflections {
        let v = rng.complex_vector(n);
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let mut q = CMat::identity(n);
        q.rank_one_update(&v, -2.0 / norm_sq);
        h = q.mul(&h).mul(&q);
    }
    h
}
