//! Minimal dense complex matrices and vector helpers.
//!
//! Row-major storage. The inner product convention throughout the crate is
//! `<a, b> = sum_x a(x) * conj(b(x))` (linear in the first argument).

use alloc::vec::Vec;
use num_complex::Complex64;
// Brings sqrt/abs to f64 under no_std; shadowed by inherent methods with std.
#[allow(unused_imports)]
use num_traits::Float;

/// `<a, b> = sum a_i conj(b_i)`.
pub fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "vdot: length mismatch");
    let mut s = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        s += x * y.conj();
    }
    s
}

/// Squared Euclidean norm.
pub fn vnorm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Euclidean norm.
pub fn vnorm(a: &[Complex64]) -> f64 {
    vnorm_sq(a).sqrt()
}

/// `y += s * x`.
pub fn vaxpy(y: &mut [Complex64], s: Complex64, x: &[Complex64]) {
    assert_eq!(y.len(), x.len(), "vaxpy: length mismatch");
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: alloc::vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "from_rows: ragged rows");
            data.extend(row);
        }
        CMat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.at(r, c) + a * other.at(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len(), "matvec: dimension mismatch");
        (0..self.rows).map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: f64) -> CMat {
        let data = self.data.iter().map(|z| z * s).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    /// `self += a b^*` (general rank-one update).
    pub fn outer_add(&mut self, a: &[Complex64], b: &[Complex64]) {
        assert_eq!(self.rows, a.len(), "outer_add: row mismatch");
        assert_eq!(self.cols, b.len(), "outer_add: column mismatch");
        for r in 0..self.rows {
            for c in 0..self.cols {
                self.data[r * self.cols + c] += a[r] * b[c].conj();
            }
        }
    }

    /// `self += weight * v v^*` (rank-one Hermitian update).
    pub fn rank_one_update(&mut self, v: &[Complex64], weight: f64) {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, v.len());
        for r in 0..self.rows {
            let vr = v[r] * weight;
            for c in 0..self.cols {
                let upd = vr * v[c].conj();
                self.data[r * self.cols + c] += upd;
            }
        }
    }

    pub fn frobenius(&self) -> f64 {
        vnorm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `|| H - H^* ||_F`.
    pub fn hermitian_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut s = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                s += (self.at(r, c) - self.at(c, r).conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `|| self - I ||_F`.
    pub fn identity_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut s = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let target = if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                s += (self.at(r, c) - target).norm_sqr();
            }
        }
        s.sqrt()
    }
}
