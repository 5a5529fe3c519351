use super::dd::{DoubleDouble, REL_SLACK};
use crate::error::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// Inflation applied to every error bound so that f64 rounding of the
/// bound itself can never make it optimistic.
const BOUND_INFLATE: f64 = 1.0 + 1.0 / (1u64 << 40) as f64;

/// A real number `value` with |true − value| ≤ `err`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedReal {
    pub value: DoubleDouble,
    pub err: f64,
}

impl CertifiedReal {
    pub fn exact(value: DoubleDouble) -> Self {
        CertifiedReal { value, err: 0.0 }
    }

    pub fn from_int(n: i128) -> Self {
        CertifiedReal::exact(DoubleDouble::from_i128(n))
    }

    pub fn new(value: DoubleDouble, err: f64) -> Self {
        CertifiedReal { value, err }
    }

    pub fn to_f64(self) -> f64 {
        self.value.to_f64()
    }

    fn mag(self) -> f64 {
        self.value.hi.abs() * (1.0 + 1e-15)
    }

    pub fn powi(self, n: u32) -> Self {
        let mut r = CertifiedReal::from_int(1);
        for _ in 0..n {
            r = r * self;
        }
        r
    }

    pub fn scale_int(self, k: i64) -> Self {
        self * CertifiedReal::from_int(k as i128)
    }

    /// The unique integer within the error ball; requires err < 1/2.
    pub fn round_to_integer(self) -> Result<i128> {
        // Also rejects a NaN error bound.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.err < 0.5) {
            let extra = (self.err / 0.5).log2().ceil().max(0.0) as u32 + 1;
            return Err(Error::InsufficientPrecision {
                err: self.err,
                extra_bits: extra,
            });
        }
        let n = self.value.round();
        let dist = (self.value - DoubleDouble::from_i128(n)).to_f64().abs();
        if dist > self.err * BOUND_INFLATE + REL_SLACK * self.mag() {
            return Err(Error::InvalidArgument(format!(
                "no integer within {:e} of {}",
                self.err,
                self.value.to_f64()
            )));
        }
        Ok(n)
    }
}

impl Add for CertifiedReal {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let value = self.value + b.value;
        let slack = REL_SLACK * (self.mag() + b.mag());
        CertifiedReal {
            value,
            err: (self.err + b.err + slack) * BOUND_INFLATE,
        }
    }
}

impl Neg for CertifiedReal {
    type Output = Self;
    fn neg(self) -> Self {
        CertifiedReal {
            value: -self.value,
            err: self.err,
        }
    }
}

impl Sub for CertifiedReal {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for CertifiedReal {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let value = self.value * b.value;
        let (ma, mb) = (self.mag(), b.mag());
        let prop = ma * b.err + mb * self.err + self.err * b.err;
        CertifiedReal {
            value,
            err: (prop + REL_SLACK * ma * mb * 2.0) * BOUND_INFLATE,
        }
    }
}
