//! Elements of ℚ_p known to a finite absolute precision.

use super::zmod::Zmod;
use crate::error::{Error, Result};
use num_rational::Ratio;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QpValue {
    pub p: u64,
    /// v_p of the value; for a zero value, the absolute precision reached.
    pub valuation: i32,
    /// Unit part, known mod p^prec.
    pub unit: u64,
    pub prec: u32,
    pub zero: bool,
}

fn pow128(p: u64, e: u32) -> Option<u128> {
    (p as u128).checked_pow(e).filter(|&m| m < 1 << 126)
}

impl QpValue {
    /// p^shift · r, where r is a residue mod p^K.
    pub fn from_residue(z: &Zmod, r: u64, shift: i32) -> Self {
        let r = r % z.m;
        if r == 0 {
            return QpValue {
                p: z.p,
                valuation: shift + z.k as i32,
                unit: 0,
                prec: 0,
                zero: true,
            };
        }
        let v = z.valuation(r);
        QpValue {
            p: z.p,
            valuation: shift + v as i32,
            unit: r / z.p.pow(v),
            prec: z.k - v,
            zero: false,
        }
    }

    pub fn from_int(z: &Zmod, n: i128) -> Self {
        Self::from_residue(z, z.from_i128(n), 0)
    }

    /// Absolute precision: the value is known mod p^abs_prec.
    pub fn abs_prec(&self) -> i32 {
        if self.zero {
            self.valuation
        } else {
            self.valuation + self.prec as i32
        }
    }

    pub fn mul_ppow(mut self, e: i32) -> Self {
        self.valuation += e;
        self
    }

    /// Multiply by a p-adic unit given mod p^K (K ≥ prec).
    pub fn mul_unit(mut self, u: u64) -> Self {
        if !self.zero {
            let m = self.p.pow(self.prec);
            self.unit = ((self.unit as u128 * (u % m) as u128) % m as u128) as u64;
        }
        self
    }

    /// value·p^s mod p^d as a residue, requiring integrality and d ≤ abs_prec + s.
    fn scaled_residue(&self, s: i32, d: u32) -> Option<u128> {
        if self.zero {
            return Some(0);
        }
        let v = self.valuation + s;
        if v < 0 || d as i32 > self.abs_prec() + s {
            return None;
        }
        let m = pow128(self.p, d)?;
        if v as u32 >= d {
            return Some(0);
        }
        Some(self.unit as u128 * pow128(self.p, v as u32)? % m)
    }

    /// Equality up to the smaller of the two absolute precisions.
    pub fn congruent(&self, other: &QpValue) -> bool {
        let lo = self.valuation.min(other.valuation).min(0);
        let s = -lo;
        let d = self.abs_prec().min(other.abs_prec()) + s;
        if d <= 0 {
            return true;
        }
        match (
            self.scaled_residue(s, d as u32),
            other.scaled_residue(s, d as u32),
        ) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// The rational x with x·p^scale ∈ ℤ and |x·p^scale| ≤ bound matching
    /// this value; needs p^{abs_prec+scale} > 2·bound.
    pub fn reconstruct(&self, scale: u32, bound: f64) -> Result<Ratio<i128>> {
        let d = self.abs_prec() + scale as i32;
        let m = if d > 0 {
            pow128(self.p, d as u32)
        } else {
            Some(1)
        };
        let m = match m {
            Some(m) if (m as f64) > 2.0 * bound => m,
            _ => return Err(Error::RaiseK { bound }),
        };
        let r = self
            .scaled_residue(scale as i32, d.max(0) as u32)
            .ok_or_else(|| Error::InvalidArgument("value not integral after scaling".into()))?;
        let n = if r > m / 2 {
            r as i128 - m as i128
        } else {
            r as i128
        };
        Ok(Ratio::new(n, (self.p as i128).pow(scale)))
    }
}

impl std::ops::Neg for QpValue {
    type Output = QpValue;
    fn neg(mut self) -> Self {
        if !self.zero {
            let m = self.p.pow(self.prec);
            self.unit = (m - self.unit % m) % m;
        }
        self
    }
}

impl fmt::Display for QpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "O({}^{})", self.p, self.valuation)
        } else {
            write!(
                f,
                "{}^{}*{} + O({}^{})",
                self.p,
                self.valuation,
                self.unit,
                self.p,
                self.abs_prec()
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_and_reconstruct() {
        let z = Zmod::new(5, 4).unwrap();
        let x = QpValue::from_residue(&z, 50, -1);
        assert_eq!((x.valuation, x.unit, x.prec), (1, 2, 2));
        assert_eq!(x.reconstruct(0, 10.0).unwrap(), Ratio::from_integer(10));
        let y = QpValue::from_residue(&z, z.from_i64(-2), -1);
        assert_eq!(y.reconstruct(1, 100.0).unwrap(), Ratio::new(-2, 5));
        assert!(y.reconstruct(1, 1e6).is_err());
        assert!(x.congruent(&QpValue::from_int(&z, 10)));
        assert!(!x.congruent(&QpValue::from_int(&z, 15)));
        assert!(QpValue::from_residue(&z, 0, 0).zero);
        assert_eq!(
            (-x).mul_ppow(-1).reconstruct(0, 10.0).unwrap(),
            Ratio::from_integer(-2)
        );
    }
}
