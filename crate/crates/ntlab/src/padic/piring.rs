//! ℤ[π]/(π^{p−1}+p) truncated mod p^K, and Gauss sums realized in it via
//! Gross–Koblitz.

use super::zmod::Zmod;
use super::PadicCtx;
use crate::error::{Error, Result};
use crate::ffield::CharIdx;
use std::fmt;

/// Σ c_i π^i, 0 ≤ i < p−1, coefficients mod p^K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiRingElem {
    z: Zmod,
    coeffs: Vec<u64>,
}

impl PiRingElem {
    pub fn zero(ctx: &PadicCtx) -> Self {
        PiRingElem {
            z: ctx.z,
            coeffs: vec![0; ctx.p() as usize - 1],
        }
    }

    pub fn from_zp(ctx: &PadicCtx, c: u64) -> Self {
        Self::monomial(ctx, c, 0)
    }

    /// c·π^e for any e ≥ 0, folding π^{p−1} = −p.
    pub fn monomial(ctx: &PadicCtx, c: u64, e: u64) -> Self {
        let mut out = Self::zero(ctx);
        out.add_term(c, e);
        out
    }

    fn degree_bound(&self) -> u64 {
        self.coeffs.len() as u64
    }

    fn add_term(&mut self, c: u64, e: u64) {
        let n = self.degree_bound();
        let (q, r) = (e / n, (e % n) as usize);
        let mut c = c % self.z.m;
        for _ in 0..q {
            c = self.z.neg(self.z.mul(c, self.z.p % self.z.m));
            if c == 0 {
                return;
            }
        }
        self.coeffs[r] = self.z.add(self.coeffs[r], c);
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| self.coeffs[i] != 0)
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.z.add(a, b))
            .collect();
        PiRingElem { z: self.z, coeffs }
    }

    pub fn scale(&self, u: u64) -> Self {
        PiRingElem {
            z: self.z,
            coeffs: self.coeffs.iter().map(|&c| self.z.mul(c, u)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = PiRingElem {
            z: self.z,
            coeffs: vec![0; self.coeffs.len()],
        };
        for i in self.support() {
            for j in other.support() {
                out.add_term(self.z.mul(self.coeffs[i], other.coeffs[j]), (i + j) as u64);
            }
        }
        out
    }

    /// Projection to ℤ/p^K; fails unless every π^i (i > 0) coefficient is 0.
    pub fn to_zp(&self) -> Result<u64> {
        if self.coeffs[1..].iter().any(|&c| c != 0) {
            return Err(Error::NotDegreeZero);
        }
        Ok(self.coeffs[0])
    }
}

impl fmt::Display for PiRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.support();
        if s.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = s
            .iter()
            .map(|&i| format!("{}*pi^{i}", self.z.sym(self.coeffs[i])))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// (coefficient, π-exponent) of g(χ) for χ = ω^j: by Gross–Koblitz,
/// g(ω̄^e) = −π^e·Γ_p(e/(p−1)) with e = −j mod (p−1). At j = 0 this gives
/// −Γ_p(0) = −1, which is also the direct value Σ_{x≠0} ζ^x.
pub fn gk_monomial(ctx: &PadicCtx, j: i64) -> (u64, u64) {
    let e = (-j).rem_euclid(ctx.p() as i64 - 1);
    (ctx.z.neg(ctx.gamma_frac(e)), e as u64)
}

/// g(ω^j) in the π-ring.
pub fn gauss_sum_gk(ctx: &PadicCtx, j: CharIdx) -> PiRingElem {
    let (c, e) = gk_monomial(ctx, j.0 as i64);
    PiRingElem::monomial(ctx, c, e)
}

/// J(ω^a, ω^b) = Σ_y ω^a(y)ω^b(1−y), every character vanishing at 0.
pub fn jacobi_sum(ctx: &PadicCtx, a: CharIdx, b: CharIdx) -> u64 {
    jacobi_raw(ctx, a.0 as i64, b.0 as i64)
}

pub(crate) fn jacobi_raw(ctx: &PadicCtx, a: i64, b: i64) -> u64 {
    let z = ctx.z;
    (2..ctx.p() as i64).fold(0, |acc, y| {
        z.add(acc, z.mul(ctx.omega_pow(a, y), ctx.omega_pow(b, 1 - y)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_rule() {
        let c = PadicCtx::new(5, 3).unwrap();
        let pi = PiRingElem::monomial(&c, 1, 1);
        let pi4 = pi.mul(&pi).mul(&pi).mul(&pi);
        assert_eq!(pi4.to_zp().unwrap(), c.z.m - 5);
        assert_eq!(PiRingElem::monomial(&c, 1, 12).to_zp().unwrap(), 0);
        assert!(pi.to_zp().is_err());
    }

    #[test]
    fn gauss_sum_examples() {
        let c = PadicCtx::new(5, 2).unwrap();
        assert_eq!(gauss_sum_gk(&c, CharIdx(0)).to_zp().unwrap(), c.z.m - 1);
        let g1 = gauss_sum_gk(&c, CharIdx(1));
        assert_eq!(g1.support(), vec![3]);
        let want = c.z.neg(c.gamma_p(num_rational::Ratio::new(3, 4)).unwrap());
        assert_eq!(g1.coeffs()[3], want);
        for p in crate::ffield::primes_in(5, 60) {
            let c = PadicCtx::new(p as u64, 4).unwrap();
            let phi = CharIdx::quadratic(&c.field);
            let g = gauss_sum_gk(&c, phi);
            let sq = g.mul(&g).to_zp().unwrap();
            let want = c.z.from_i64(c.field.legendre(-1) as i64 * p as i64);
            assert_eq!(sq, want, "p={p}");
        }
    }

    #[test]
    fn jacobi_examples() {
        let c = PadicCtx::new(5, 3).unwrap();
        assert_eq!(jacobi_sum(&c, CharIdx(2), CharIdx(2)), c.z.m - 1);
        assert_eq!(jacobi_sum(&c, CharIdx(0), CharIdx(1)), c.z.m - 1);
        for p in [7u64, 13, 31] {
            let c = PadicCtx::new(p, 3).unwrap();
            let n = p as i64 - 1;
            for a in 1..n {
                for b in 1..n {
                    if (a + b) % n == 0 {
                        continue;
                    }
                    let j1 = jacobi_raw(&c, a, b);
                    let j2 = jacobi_raw(&c, n - a, n - b);
                    assert_eq!(c.z.mul(j1, j2), p);
                }
            }
        }
    }
}
