//! Morita's Γ_p at integers N < p^{K+1}, mod p^K, without walking all N
//! factors.
//!
//! Write N in base p. The product of the p-free integers in a block
//! [t, t + d·p^i) with p^{i+1} | t is a polynomial Q[i][d](t); since t ≡ 0
//! mod p, terms of degree ≥ K vanish mod p^K and every polynomial is kept
//! truncated. Q[i][d] = Q[i][d−1]·B_i(t + (d−1)p^i) with B_i = Q[i−1][p], so
//! the whole table costs O(K'·p·K²) and an evaluation O(K'·K).

use super::zmod::Zmod;
use crate::error::Result;

type Poly = Vec<u64>;

#[derive(Debug, Clone)]
pub struct GammaEngine {
    z: Zmod,
    zp: Zmod,
    digits: u32,
    /// q[i][d] for 0 ≤ i < digits, 0 ≤ d ≤ p.
    q: Vec<Vec<Poly>>,
}

impl GammaEngine {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let z = Zmod::new(p, k)?;
        let zp = Zmod::new(p, k + 1)?;
        let digits = k + 1;
        let kk = k as usize;
        let binom = pascal(&z, kk);
        let mut q: Vec<Vec<Poly>> = Vec::with_capacity(digits as usize);
        let mut level0 = vec![one(kk)];
        level0.push(one(kk));
        for d in 2..=p {
            let mut lin = vec![0; kk];
            lin[0] = (d - 1) % z.m;
            if kk > 1 {
                lin[1] = 1;
            }
            let next = mul(&z, &level0[d as usize - 1], &lin);
            level0.push(next);
        }
        q.push(level0);
        let mut pi = 1u64;
        for _ in 1..digits {
            pi = pi.wrapping_mul(p);
            let block = q.last().unwrap()[p as usize].clone();
            let mut lev = vec![one(kk)];
            for d in 1..=p {
                let c = z.mul((d - 1) % z.m, pi % z.m);
                let shifted = shift(&z, &binom, &block, c);
                let next = mul(&z, &lev[d as usize - 1], &shifted);
                lev.push(next);
            }
            q.push(lev);
        }
        Ok(GammaEngine { z, zp, digits, q })
    }

    pub fn modulus(&self) -> &Zmod {
        &self.z
    }

    /// Modulus p^{K+1} used to pick integer representatives.
    pub fn guard_modulus(&self) -> &Zmod {
        &self.zp
    }

    /// ∏_{0<j<N, p∤j} j mod p^K.
    fn p_free_factorial(&self, n: u64) -> u64 {
        let p = self.z.p;
        let mut ds = vec![0u64; self.digits as usize];
        let mut r = n;
        for d in ds.iter_mut() {
            *d = r % p;
            r /= p;
        }
        let mut pw = vec![1u64; self.digits as usize];
        for i in 1..pw.len() {
            pw[i] = pw[i - 1] * p;
        }
        let mut t = 0u64;
        let mut acc = 1 % self.z.m;
        for i in (0..self.digits as usize).rev() {
            let d = ds[i] as usize;
            acc = self.z.mul(acc, eval(&self.z, &self.q[i][d], t));
            t = self.z.add(t, self.z.mul(ds[i], pw[i] % self.z.m));
        }
        acc
    }

    /// Γ_p(n) mod p^K for any integer n ≥ 0 (reduced mod p^{K+1} first).
    pub fn gamma_int(&self, n: u64) -> u64 {
        let n = n % self.zp.m;
        let v = self.p_free_factorial(n);
        if n % 2 == 1 {
            self.z.neg(v)
        } else {
            v
        }
    }

    /// Γ_p(num/den), den prime to p.
    pub fn gamma_ratio(&self, num: i64, den: i64) -> Result<u64> {
        let n = self.zp.ratio(num, den)?;
        Ok(self.gamma_int(n))
    }
}

fn one(k: usize) -> Poly {
    let mut v = vec![0; k];
    v[0] = 1;
    v
}

fn mul(z: &Zmod, a: &Poly, b: &Poly) -> Poly {
    let k = a.len();
    let mut out = vec![0u128; k];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(k - i) {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % z.m as u128;
        }
    }
    out.into_iter().map(|x| x as u64).collect()
}

fn pascal(z: &Zmod, k: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; k.max(1)]; k.max(1)];
    for n in 0..k {
        c[n][0] = 1 % z.m;
        for r in 1..=n {
            c[n][r] = z.add(c[n - 1][r - 1], if r < n { c[n - 1][r] } else { 0 });
        }
    }
    c
}

/// b(t + c), truncated.
fn shift(z: &Zmod, binom: &[Vec<u64>], b: &Poly, c: u64) -> Poly {
    let k = b.len();
    let mut cp = vec![1 % z.m; k];
    for i in 1..k {
        cp[i] = z.mul(cp[i - 1], c);
    }
    let mut out = vec![0u64; k];
    for (j, &bj) in b.iter().enumerate() {
        if bj == 0 {
            continue;
        }
        for (m, o) in out.iter_mut().enumerate().take(j + 1) {
            let term = z.mul(bj, z.mul(binom[j][m], cp[j - m]));
            *o = z.add(*o, term);
        }
    }
    out
}

fn eval(z: &Zmod, a: &Poly, t: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| z.add(z.mul(acc, t), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(p: u64, k: u32, n: u64) -> u64 {
        let z = Zmod::new(p, k).unwrap();
        let mut acc = 1;
        for j in 1..n {
            if j % p != 0 {
                acc = z.mul(acc, j % z.m);
            }
        }
        if n % 2 == 1 {
            z.neg(acc)
        } else {
            acc
        }
    }

    #[test]
    fn matches_direct_product() {
        for (p, k) in [
            (5u64, 1u32),
            (5, 2),
            (5, 3),
            (7, 2),
            (11, 2),
            (3, 3),
            (13, 1),
        ] {
            let g = GammaEngine::new(p, k).unwrap();
            for n in 0..p.pow(k + 1) {
                assert_eq!(g.gamma_int(n), direct(p, k, n), "p={p} k={k} n={n}");
            }
        }
    }

    #[test]
    fn examples() {
        let g = GammaEngine::new(5, 1).unwrap();
        assert_eq!(g.gamma_int(0), 1);
        assert_eq!(g.gamma_int(1), 4);
        assert_eq!(g.gamma_int(5), 1);
        let g = GammaEngine::new(199, 7).unwrap();
        assert_eq!(g.gamma_int(1), g.modulus().m - 1);
        assert!(GammaEngine::new(199, 8).is_err());
    }

    #[test]
    fn functional_equation_at_rationals() {
        let g = GammaEngine::new(13, 4).unwrap();
        let z = *g.modulus();
        for (a, b) in [(1i64, 2i64), (1, 3), (5, 12), (7, 6), (-1, 4), (2, 3)] {
            let x = g.gamma_ratio(a, b).unwrap();
            let x1 = g.gamma_ratio(a + b, b).unwrap();
            let rhs = z.neg(z.mul(z.ratio(a, b).unwrap(), x));
            assert_eq!(x1, rhs, "{a}/{b}");
        }
    }
}
