//! Arithmetic in ℤ/p^K with a 63-bit modulus.

use crate::error::{Error, Result};
use num_integer::Integer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zmod {
    pub p: u64,
    pub k: u32,
    pub m: u64,
}

impl Zmod {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let m = p
            .checked_pow(k)
            .filter(|&m| m < 1 << 63)
            .ok_or(Error::PrecisionCost {
                p: p as u32,
                digits: k,
            })?;
        Ok(Zmod { p, k, m })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.m as i128) as u64
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        self.from_i128(x as i128)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        let e = (a as i128).extended_gcd(&(self.m as i128));
        if e.gcd != 1 {
            return Err(Error::NonUnit);
        }
        Ok(self.from_i128(e.x))
    }

    /// num/den with den a unit.
    pub fn ratio(&self, num: i64, den: i64) -> Result<u64> {
        if den as i128 % self.p as i128 == 0 {
            return Err(Error::PDivisibleDenominator(self.p as u32));
        }
        Ok(self.mul(self.from_i64(num), self.inv(self.from_i64(den))?))
    }

    /// Symmetric representative in (−m/2, m/2].
    pub fn sym(&self, a: u64) -> i128 {
        let a = a % self.m;
        if a > self.m / 2 {
            a as i128 - self.m as i128
        } else {
            a as i128
        }
    }

    /// p-adic valuation of a residue, capped at K (zero has valuation K).
    pub fn valuation(&self, mut a: u64) -> u32 {
        a %= self.m;
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let z = Zmod::new(7, 3).unwrap();
        assert_eq!(z.m, 343);
        assert_eq!(z.mul(z.inv(10).unwrap(), 10), 1);
        assert_eq!(z.inv(14), Err(Error::NonUnit));
        assert_eq!(z.sym(342), -1);
        assert_eq!(z.valuation(98), 2);
        assert_eq!(z.ratio(1, 2).unwrap(), 172);
        assert!(Zmod::new(200, 9).is_err());
        assert!(Zmod::new(199, 8).is_ok());
    }
}
