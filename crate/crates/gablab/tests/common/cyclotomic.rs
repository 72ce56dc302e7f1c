//! Exact arithmetic in the cyclotomic field `Q[x] / Φ_L(x)` with rational
//! big-integer coefficients, plus a row-reduction rank computation. This is
//! the independent oracle for span ranks of atom families whose entries are
//! roots of unity times integers.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<BigInt>;

pub fn q_int(v: i64) -> Q {
    Ratio::from_integer(BigInt::from(v))
}

fn int_poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    int_poly_trim(&mut out);
    out
}

/// Exact division by a monic divisor; panics on a nonzero remainder.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    int_poly_trim(&mut rem);
    let d = den.len() - 1;
    if rem.len() <= d {
        assert!(rem.iter().all(|c| c.is_zero()), "nonzero remainder");
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - d];
    for k in (0..quot.len()).rev() {
        let coef = rem[k + d].clone();
        if coef.is_zero() {
            continue;
        }
        quot[k] = coef.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &coef * dj;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "nonzero remainder");
    int_poly_trim(&mut quot);
    quot
}

/// Coefficients (ascending) of the `l`-th cyclotomic polynomial:
/// `x^l - 1 = prod over divisors d of l of Φ_d(x)`.
pub fn cyclotomic_polynomial(l: u64) -> Vec<BigInt> {
    assert!(l >= 1);
    let mut memo: Vec<Vec<BigInt>> = Vec::with_capacity(l as usize + 1);
    memo.push(Vec::new()); // index 0 unused
    for n in 1..=l {
        // x^n - 1
        let mut p = vec![BigInt::zero(); n as usize + 1];
        p[0] = BigInt::from(-1);
        p[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                let phi_d = memo[d as usize].clone();
                p = int_poly_div_exact(&p, &phi_d);
            }
        }
        memo.push(p);
    }
    memo.pop().unwrap()
}

/// Elements are coefficient vectors of length `degree` (the residue class
/// representative of degree `< deg Φ_L`).
pub struct CyclotomicField {
    level: u64,
    degree: usize,
    modulus: Vec<Q>,
}

pub type Elem = Vec<Q>;

impl CyclotomicField {
    pub fn new(level: u64) -> CyclotomicField {
        let phi = cyclotomic_polynomial(level);
        let modulus: Vec<Q> = phi.iter().map(|c| Ratio::from_integer(c.clone())).collect();
        CyclotomicField {
            level,
            degree: modulus.len() - 1,
            modulus,
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zero(&self) -> Elem {
        vec![Q::zero(); self.degree]
    }

    pub fn one(&self) -> Elem {
        self.int_elem(1)
    }

    /// The rational integer `v` as a field element.
    pub fn int_elem(&self, v: i64) -> Elem {
        let mut e = self.zero();
        e[0] = q_int(v);
        e
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// Reduces an arbitrary-length polynomial modulo the (monic) modulus.
    fn reduce(&self, mut p: Vec<Q>) -> Elem {
        let d = self.degree;
        for k in (d..p.len()).rev() {
            let coef = std::mem::replace(&mut p[k], Q::zero());
            if coef.is_zero() {
                continue;
            }
            // x^k = x^(k-d) * (x^d - modulus tail)
            for j in 0..d {
                let delta = &coef * &self.modulus[j];
                p[k - d + j] -= delta;
            }
        }
        p.truncate(d);
        p.resize(d, Q::zero());
        p
    }

    /// `ζ^e` as a field element.
    pub fn zeta_pow(&self, e: u64) -> Elem {
        let e = (e % self.level) as usize;
        let mut p = vec![Q::zero(); e + 1];
        p[e] = Q::one();
        self.reduce(p)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut conv = vec![Q::zero(); 2 * self.degree];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    conv[i + j] += ai * bj;
                }
            }
        }
        self.reduce(conv)
    }

    pub fn scale_int(&self, a: &Elem, v: i64) -> Elem {
        let s = q_int(v);
        a.iter().map(|c| c * &s).collect()
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the irreducible modulus.
    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!self.is_zero(a), "zero has no inverse");
        // (old_r, r) polynomial remainders; (old_s, s) Bezout for `a`.
        let mut old_r: Vec<Q> = a.clone();
        trim_q(&mut old_r);
        let mut r = self.modulus.clone();
        let mut old_s = vec![Q::one()];
        let mut s = vec![Q::zero()];
        while !(r.len() == 1 && r[0].is_zero()) {
            let (quot, rem) = poly_divmod_q(&old_r, &r);
            old_r = std::mem::replace(&mut r, rem);
            let qs = poly_mul_q(&quot, &s);
            let new_s = poly_sub_q(&old_s, &qs);
            old_s = std::mem::replace(&mut s, new_s);
        }
        // old_r is a nonzero constant gcd (the modulus is irreducible).
        assert_eq!(old_r.len(), 1, "gcd with the cyclotomic modulus must be a unit");
        let scale = old_r[0].recip();
        let scaled: Vec<Q> = old_s.iter().map(|c| c * &scale).collect();
        self.reduce(scaled)
    }

    /// Rank of a matrix of field elements by Gaussian elimination with
    /// exact divisions.
    pub fn rank(&self, mut rows: Vec<Vec<Elem>>) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let ncols = rows[0].len();
        let nrows = rows.len();
        let mut r = 0;
        for col in 0..ncols {
            let Some(pivot) = (r..nrows).find(|&i| !self.is_zero(&rows[i][col])) else {
                continue;
            };
            rows.swap(r, pivot);
            let inv = self.inv(&rows[r][col]);
            for j in col..ncols {
                rows[r][j] = self.mul(&rows[r][j], &inv);
            }
            for i in (r + 1)..nrows {
                if self.is_zero(&rows[i][col]) {
                    continue;
                }
                let factor = rows[i][col].clone();
                for j in col..ncols {
                    let delta = self.mul(&factor, &rows[r][j]);
                    rows[i][j] = self.sub(&rows[i][j], &delta);
                }
            }
            r += 1;
            if r == nrows {
                break;
            }
        }
        r
    }
}

fn trim_q(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    trim_q(&mut out);
    out
}

fn poly_sub_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = vec![Q::zero(); n];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    trim_q(&mut out);
    out
}

/// Division with remainder in `Q[x]`; the divisor need not be monic.
fn poly_divmod_q(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem: Vec<Q> = num.to_vec();
    trim_q(&mut rem);
    let mut den = den.to_vec();
    trim_q(&mut den);
    assert!(!(den.len() == 1 && den[0].is_zero()), "division by zero polynomial");
    let d = den.len() - 1;
    if rem.len() - 1 < d || (rem.len() == 1 && rem[0].is_zero()) {
        return (vec![Q::zero()], rem);
    }
    let lead = den[d].clone();
    let mut quot = vec![Q::zero(); rem.len() - d];
    for k in (0..quot.len()).rev() {
        let coef = &rem[k + d] / &lead;
        if coef.is_zero() {
            continue;
        }
        quot[k] = coef.clone();
        for (j, dj) in den.iter().enumerate() {
            let delta = &coef * dj;
            rem[k + j] -= delta;
        }
    }
    trim_q(&mut quot);
    trim_q(&mut rem);
    (quot, rem)
}
