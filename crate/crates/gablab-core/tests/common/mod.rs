//! Shared helpers for the integration tests: a catalog of all finite
//! abelian group structures up to a given order, plus small constructors.
#![allow(dead_code)]

use gablab_core::group::{make_group, GroupSpec};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Every abelian group of order `<= max_order`, one `GroupSpec` per
/// isomorphism class, deterministic order (by group order, then by the
/// descending moduli list). Classification: a finite abelian group is a
/// product of prime-power cyclic factors, one multiset of exponents
/// (an integer partition) per prime.
pub fn abelian_groups_up_to(max_order: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        let mut structures = abelian_structures(n);
        structures.sort();
        for moduli in structures {
            out.push(make_group(&moduli).expect("catalog group within cap"));
        }
    }
    out
}

/// The moduli lists (descending prime powers) of every abelian group of
/// order exactly `n`.
pub fn abelian_structures(n: u64) -> Vec<Vec<i64>> {
    if n == 1 {
        return vec![vec![1]];
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    let mut result: Vec<Vec<i64>> = vec![Vec::new()];
    for &(p, e) in &factors {
        let mut next = Vec::new();
        for base in &result {
            for part in partitions(e) {
                let mut moduli = base.clone();
                for k in part {
                    moduli.push((p as i64).pow(k));
                }
                next.push(moduli);
            }
        }
        result = next;
    }
    for moduli in &mut result {
        moduli.sort_unstable_by(|a, b| b.cmp(a));
    }
    result
}

/// Integer partitions of `e` with parts in descending order.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = max_part.min(remaining);
        for part in (1..=top).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, e, &mut Vec::new(), &mut out);
    out
}

