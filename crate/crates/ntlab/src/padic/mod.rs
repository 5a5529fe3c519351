//! Fixed-precision p-adic engine: Teichmüller lifts, Morita's Γ_p,
//! Gross–Koblitz Gauss sums in ℤ[π]/(π^{p−1}+p), Greene and McCarthy
//! hypergeometric functions, and the §6 identity checks.

mod gamma;
pub mod hypergeom;
pub mod piring;
pub mod props;
pub mod qp;
pub mod zmod;

pub use gamma::GammaEngine;
pub use hypergeom::{greene_2f1, greene_3f2_at_1, ngn_evaluate, ngn_weighted, GSpec};
pub use piring::{gauss_sum_gk, jacobi_sum, PiRingElem};
pub use props::*;
pub use qp::QpValue;
pub use zmod::Zmod;

use crate::error::{Error, Result};
use crate::ffield::{CharIdx, FieldCtx};
use num_rational::Ratio;

pub const DEFAULT_K: u32 = 6;

#[derive(Debug, Clone)]
pub struct PadicCtx {
    pub field: FieldCtx,
    pub z: Zmod,
    teich: Vec<u64>,
    /// ω(g)^k for 0 ≤ k < p−1.
    wpow: Vec<u64>,
    gamma: GammaEngine,
}

impl PadicCtx {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let field = FieldCtx::new(p)?;
        let gamma = GammaEngine::new(p, k)?;
        let z = *gamma.modulus();
        let mut teich = vec![0u64; p as usize];
        for (x, t) in teich.iter_mut().enumerate().skip(1) {
            let mut v = x as u64;
            for _ in 0..k {
                v = z.pow(v, p);
            }
            *t = v;
        }
        let w = teich[field.generator() as usize];
        let mut wpow = Vec::with_capacity(p as usize - 1);
        let mut acc = 1 % z.m;
        for _ in 0..p - 1 {
            wpow.push(acc);
            acc = z.mul(acc, w);
        }
        Ok(PadicCtx {
            field,
            z,
            teich,
            wpow,
            gamma,
        })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn k(&self) -> u32 {
        self.z.k
    }

    fn pm1(&self) -> i64 {
        self.p() as i64 - 1
    }

    /// ω(x): the (p−1)-th root of unity ≡ x mod p, by iterating t ↦ t^p.
    pub fn teichmuller(&self, x: u32) -> Result<u64> {
        let x = x % self.p();
        if x == 0 {
            return Err(Error::InvalidArgument("teichmuller(0)".into()));
        }
        Ok(self.teich[x as usize])
    }

    /// ω^a(x), with ω^a(0) = 0 for every a (including a ≡ 0).
    pub fn omega_pow(&self, a: i64, x: i64) -> u64 {
        let x = self.field.reduce(x);
        match self.field.dlog(x) {
            None => 0,
            Some(l) => self.wpow[(a * l as i64).rem_euclid(self.pm1()) as usize],
        }
    }

    /// χ(x) for χ = ω^idx.
    pub fn char_value(&self, idx: CharIdx, x: i64) -> u64 {
        self.omega_pow(idx.0 as i64, x)
    }

    pub fn gamma_p_int(&self, n: u64) -> u64 {
        self.gamma.gamma_int(n)
    }

    pub fn gamma_p(&self, x: Ratio<i64>) -> Result<u64> {
        self.gamma.gamma_ratio(*x.numer(), *x.denom())
    }

    /// Γ_p(⟨j/(p−1)⟩).
    pub fn gamma_frac(&self, j: i64) -> u64 {
        let r = j.rem_euclid(self.pm1());
        self.gamma
            .gamma_ratio(r, self.pm1())
            .expect("p−1 is a unit")
    }
}

/// ⟨x⟩ = x − ⌊x⌋.
pub fn frac(x: Ratio<i64>) -> Ratio<i64> {
    x - x.floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn teichmuller_examples() {
        let c = PadicCtx::new(5, 2).unwrap();
        assert_eq!(c.teichmuller(2).unwrap(), 7);
        assert_eq!(c.teichmuller(1).unwrap(), 1);
        assert_eq!(c.teichmuller(4).unwrap(), 24);
        assert!(c.teichmuller(0).is_err());
        for p in crate::ffield::primes_in(3, 50) {
            let c = PadicCtx::new(p as u64, 4).unwrap();
            let z = c.z;
            for x in 1..p {
                let t = c.teichmuller(x).unwrap();
                assert_eq!(t % p as u64, x as u64);
                assert_eq!(z.pow(t, p as u64 - 1), 1);
                for y in 1..p {
                    let xy = c.field.mul(x, y);
                    assert_eq!(
                        z.mul(t, c.teichmuller(y).unwrap()),
                        c.teichmuller(xy).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        for p in crate::ffield::primes_in(3, 50) {
            let c = PadicCtx::new(p as u64, 3).unwrap();
            let z = c.z;
            for a in 1..p as i64 - 1 {
                let s = (0..p as i64).fold(0, |acc, x| z.add(acc, c.omega_pow(a, x)));
                assert_eq!(s, 0, "p={p} a={a}");
            }
            for x in 2..p as i64 {
                let s = (0..p as i64 - 1).fold(0, |acc, a| z.add(acc, c.omega_pow(a, x)));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let c = PadicCtx::new(7, 3).unwrap();
        assert_eq!(c.gamma_p(r(0, 1)).unwrap(), 1);
        assert_eq!(c.gamma_p(r(1, 1)).unwrap(), c.z.m - 1);
        assert_eq!(c.gamma_p(r(1, 7)), Err(Error::PDivisibleDenominator(7)));
        let c = PadicCtx::new(5, 1).unwrap();
        assert_eq!(c.gamma_p_int(5), 1);
    }

    #[test]
    fn gamma_reflection() {
        for p in crate::ffield::primes_in(5, 100) {
            let c = PadicCtx::new(p as u64, 3).unwrap();
            let z = c.z;
            let pm1 = p as i64 - 1;
            for j in 0..=pm1 {
                let x = r(j, pm1);
                let g = z.mul(
                    c.gamma_p(x).unwrap(),
                    c.gamma_p(Ratio::from_integer(1) - x).unwrap(),
                );
                // Γ_p(x)Γ_p(1−x) = (−1)^{x₀}, x₀ ∈ {1..p} the least residue of x mod p
                let x0 = {
                    let v = z.ratio(j, pm1).unwrap() % p as u64;
                    if v == 0 {
                        p as u64
                    } else {
                        v
                    }
                };
                let want = if x0 % 2 == 1 { z.m - 1 } else { 1 };
                assert_eq!(g, want, "p={p} j={j}");
            }
        }
    }
}
