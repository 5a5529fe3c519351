//! Double-double arithmetic (value = hi + lo, |lo| ≤ ulp(hi)/2).
//!
//! Each operation below is accurate to a few units of u² = 2^-106 relative;
//! callers budget `REL_SLACK` = 2^-100 per operation.

use std::ops::{Add, Mul, Neg, Sub};

pub const REL_SLACK: f64 = 7.888609052210118e-31; // 2^-100

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };
    pub const TWO_PI: DoubleDouble = DoubleDouble {
        hi: std::f64::consts::TAU,
        lo: 2.4492935982947064e-16,
    };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Exact for |n| < 2^106.
    pub fn from_i128(n: i128) -> Self {
        let hi = n as f64;
        let rest = n - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        DoubleDouble { hi, lo }
    }

    /// n/d for integers exactly representable as f64.
    pub fn ratio(n: i64, d: i64) -> Self {
        let (nf, df) = (n as f64, d as f64);
        let hi = nf / df;
        let r = (-hi).mul_add(df, nf);
        let (hi, lo) = quick_two_sum(hi, r / df);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, f) = two_sum(self.hi, -p);
        let r = s + (f - e + self.lo);
        let q2 = r / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }

    pub fn scale(self, k: f64) -> Self {
        let (p, e) = two_prod(self.hi, k);
        let (hi, lo) = quick_two_sum(p, e + self.lo * k);
        DoubleDouble { hi, lo }
    }

    /// Nearest integer (ties away from zero on the leading part).
    pub fn round(self) -> i128 {
        let h = self.hi.round();
        let rest = (self.hi - h) + self.lo;
        h as i128 + rest.round() as i128
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

/// Returns (cos x, sin x) for |x| ≤ π/4 by Taylor series.
fn cos_sin_small(x: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let x2 = x * x;
    // Horner from the top; 2·14 terms leave a tail below 2^-120 for |x| ≤ π/4.
    const TERMS: usize = 14;
    let mut c = DoubleDouble::ZERO;
    let mut s = DoubleDouble::ZERO;
    for k in (0..TERMS).rev() {
        let kf = k as f64;
        // c_k = (−1)^k / (2k)!, s_k = (−1)^k / (2k+1)!, applied as nested divisions
        c = DoubleDouble::ONE - (x2 * c).div_f64((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
        s = DoubleDouble::ONE - (x2 * s).div_f64((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
    }
    (c, x * s)
}

/// cos(2πk/p) for k = 0..p−1.
///
/// The angle is reduced on the integers: with q = round(4k/p), the residual
/// angle 2π(4k − qp)/(4p) lies in [−π/4, π/4].
pub fn cos_table(p: u32) -> Vec<DoubleDouble> {
    let p = p as i64;
    (0..p)
        .map(|k| {
            let q = (4 * k + p / 2).div_euclid(p);
            let n = 4 * k - q * p;
            let x = DoubleDouble::TWO_PI * DoubleDouble::ratio(n, 4 * p);
            let (c, s) = cos_sin_small(x);
            match q.rem_euclid(4) {
                0 => c,
                1 => -s,
                2 => -c,
                _ => s,
            }
        })
        .collect()
}

/// Absolute error bound for every `cos_table` entry.
pub const COS_TABLE_ERR: f64 = 1.262177448353619e-29; // 2^-96

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = DoubleDouble::ratio(1, 3);
        let b = a.scale(3.0);
        assert!((b.hi - 1.0).abs() + b.lo.abs() < 1e-31);
        let c = a * DoubleDouble::from_f64(3.0) - DoubleDouble::ONE;
        assert!(c.to_f64().abs() < 1e-31);
        assert_eq!(
            DoubleDouble::from_i128(123456789012345678901).round(),
            123456789012345678901
        );
        let d = DoubleDouble::from_f64(10.0).div_f64(7.0).scale(7.0);
        assert!((d - DoubleDouble::from_f64(10.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn symmetry_and_vanishing_sum() {
        for p in [3u32, 5, 7, 13, 101, 997, 4999] {
            let t = cos_table(p);
            assert_eq!(t[0], DoubleDouble::ONE);
            for k in 1..p as usize {
                let d = (t[k] - t[p as usize - k]).to_f64().abs();
                assert!(d < 1e-30, "p={p} k={k}");
            }
            let sum = t.iter().fold(DoubleDouble::ZERO, |a, &b| a + b);
            assert!(sum.to_f64().abs() < p as f64 * COS_TABLE_ERR * 4.0);
        }
    }

    #[test]
    fn against_high_precision() {
        // (p, k, hi, lo) of cos(2πk/p) from a 50-digit evaluation
        let want: [(u32, usize, f64, f64); 8] = [
            (13, 1, 0.8854560256532099, -1.4608303081931364e-17),
            (13, 3, 0.12053668025532305, 5.709929975057958e-18),
            (13, 5, -0.7485107481711011, -1.7351589687461538e-17),
            (13, 6, -0.970941817426052, -1.536012690857366e-17),
            (4999, 1, 0.9999992101158298, -3.27161507606194e-17),
            (4999, 1250, -0.0003142221046101209, -1.465581843659144e-20),
            (4999, 2222, -0.9397881132779997, 1.8155923431935095e-18),
            (4999, 3701, -0.06060770074167287, -1.686530042730571e-18),
        ];
        for (p, k, hi, lo) in want {
            let t = cos_table(p);
            let d = (t[k] - DoubleDouble { hi, lo }).to_f64().abs();
            assert!(d < COS_TABLE_ERR, "p={p} k={k} diff={d:e}");
        }
    }
}
