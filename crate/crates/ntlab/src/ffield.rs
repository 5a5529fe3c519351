//! Prime fields, discrete logs and multiplicative characters.
//!
//! Characters are exponents: `CharIdx(a)` is ω^a, where ω is the
//! Teichmüller character, so ω^a(g^k) = ζ^{ak} for the fixed generator g.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u32> {
    (lo.max(2)..=hi)
        .filter(|&n| is_prime(n))
        .map(|n| n as u32)
        .collect()
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A multiplicative character ω^a, a taken mod p−1. χ(0) = 0 always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharIdx(pub u32);

impl CharIdx {
    pub fn trivial() -> Self {
        CharIdx(0)
    }

    pub fn quadratic(ctx: &FieldCtx) -> Self {
        CharIdx((ctx.p - 1) / 2)
    }

    /// ψ₃ = ω^{(p−1)/3}; needs p ≡ 1 mod 3.
    pub fn cubic(ctx: &FieldCtx) -> Option<Self> {
        (ctx.p - 1)
            .is_multiple_of(3)
            .then(|| CharIdx((ctx.p - 1) / 3))
    }

    /// ψ₆ = ω^{(p−1)/6}; needs p ≡ 1 mod 6.
    pub fn sextic(ctx: &FieldCtx) -> Option<Self> {
        (ctx.p - 1)
            .is_multiple_of(6)
            .then(|| CharIdx((ctx.p - 1) / 6))
    }

    pub fn new(ctx: &FieldCtx, a: i64) -> Self {
        CharIdx(a.rem_euclid(ctx.p as i64 - 1) as u32)
    }
}

#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    g: u32,
    dlog: Vec<u32>,
    exp: Vec<u32>,
    qr: Vec<i8>,
    inv: Vec<u32>,
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p > u32::MAX as u64 / 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let factors = prime_factors(p - 1);
        let g = (2..p)
            .find(|&g| factors.iter().all(|&l| pow_mod(g, (p - 1) / l, p) != 1))
            .expect("primitive root exists");
        let pu = p as usize;
        let mut dlog = vec![u32::MAX; pu];
        let mut exp = vec![0u32; pu - 1];
        let mut x = 1u64;
        for (a, e) in exp.iter_mut().enumerate() {
            *e = x as u32;
            dlog[x as usize] = a as u32;
            x = x * g % p;
        }
        let mut qr = vec![0i8; pu];
        let mut inv = vec![0u32; pu];
        for x in 1..pu {
            qr[x] = if dlog[x] % 2 == 0 { 1 } else { -1 };
            inv[x] = exp[(pu - 1 - dlog[x] as usize) % (pu - 1)];
        }
        Ok(FieldCtx {
            p: p as u32,
            g: g as u32,
            dlog,
            exp,
            qr,
            inv,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn generator(&self) -> u32 {
        self.g
    }

    /// Index a with g^a = x; `None` for x = 0.
    pub fn dlog(&self, x: u32) -> Option<u32> {
        let x = x % self.p;
        (x != 0).then(|| self.dlog[x as usize])
    }

    /// g^a.
    pub fn exp(&self, a: i64) -> u32 {
        self.exp[a.rem_euclid(self.p as i64 - 1) as usize]
    }

    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        ((x as u64 + y as u64) % self.p as u64) as u32
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        ((x as u64 + self.p as u64 - (y % self.p) as u64) % self.p as u64) as u32
    }

    pub fn neg(&self, x: u32) -> u32 {
        self.sub(0, x)
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        (x as u64 * y as u64 % self.p as u64) as u32
    }

    pub fn pow(&self, x: u32, e: u64) -> u32 {
        pow_mod(x as u64, e, self.p as u64) as u32
    }

    /// Multiplicative inverse; 0 maps to 0.
    pub fn inv(&self, x: u32) -> u32 {
        self.inv[(x % self.p) as usize]
    }

    /// Exponent k with χ(x) = ζ_{p−1}^k, or `None` for x = 0.
    pub fn char_eval(&self, idx: CharIdx, x: u32) -> Option<u32> {
        self.dlog(x)
            .map(|d| ((idx.0 as u64 * d as u64) % (self.p as u64 - 1)) as u32)
    }

    pub fn legendre(&self, x: i64) -> i8 {
        self.qr[self.reduce(x) as usize]
    }

    pub fn is_square(&self, x: u32) -> bool {
        self.qr[(x % self.p) as usize] == 1
    }

    /// The x with x³ = λ; only defined when p ≡ 2 mod 3.
    pub fn unique_cube_root(&self, lambda: u32) -> Result<u32> {
        if self.p % 3 != 2 {
            return Err(Error::CubeMapNotBijective(self.p));
        }
        let e = (2 * self.p as u64 - 1) / 3;
        Ok(self.pow(lambda % self.p, e))
    }

    /// A square root of a square, via the discrete log.
    pub fn sqrt(&self, x: u32) -> Option<u32> {
        match self.dlog(x) {
            None => Some(0),
            Some(d) if d % 2 == 0 => Some(self.exp[(d / 2) as usize]),
            _ => None,
        }
    }
}
