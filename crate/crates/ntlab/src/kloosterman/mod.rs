//! Kloosterman sums K(a,p) = Σ_{x≠0} cos(2π(x + a/x)/p) and their moments,
//! all with certified rounding to integers.

mod certified;
pub mod dd;

pub use certified::CertifiedReal;
pub use dd::DoubleDouble;

use crate::error::{Error, Result};
use crate::ffield::{CharIdx, FieldCtx};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentResult {
    pub p: u32,
    pub n: u32,
    pub twist: Option<u32>,
    pub value: i128,
    pub backend: &'static str,
}

/// Certified K(a,p) for every a ∈ F_p, indexed by a.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    p: u32,
    sums: Vec<CertifiedReal>,
}

fn sum_with_table(ctx: &FieldCtx, cos: &[DoubleDouble], a: u32) -> CertifiedReal {
    let p = ctx.p();
    if a == 0 {
        return CertifiedReal::from_int(-1);
    }
    let (pp, aa) = (p as u64, a as u64);
    let mut acc = DoubleDouble::ZERO;
    for x in 1..p {
        let k = (x as u64 + aa * ctx.inv(x) as u64) % pp;
        acc = acc + cos[k as usize];
    }
    // table error per term, plus one rounding per accumulation (|partial| < p)
    let n = (p - 1) as f64;
    let err = n * dd::COS_TABLE_ERR + n * n * dd::REL_SLACK;
    CertifiedReal::new(acc, err * (1.0 + 1e-12))
}

pub fn kloosterman_sum(ctx: &FieldCtx, a: u32) -> CertifiedReal {
    let cos = dd::cos_table(ctx.p());
    sum_with_table(ctx, &cos, a % ctx.p())
}

fn check_twist(ctx: &FieldCtx, twist: CharIdx) -> Result<i8> {
    if twist == CharIdx::trivial() {
        Ok(0)
    } else if twist == CharIdx::quadratic(ctx) {
        Ok(1)
    } else {
        Err(Error::UnsupportedTwist(twist.0))
    }
}

impl KloostermanTable {
    pub fn new(ctx: &FieldCtx) -> Self {
        let cos = dd::cos_table(ctx.p());
        let sums = (0..ctx.p())
            .into_par_iter()
            .map(|a| sum_with_table(ctx, &cos, a))
            .collect();
        KloostermanTable { p: ctx.p(), sums }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, a: u32) -> CertifiedReal {
        self.sums[(a % self.p) as usize]
    }

    pub fn values(&self) -> &[CertifiedReal] {
        &self.sums
    }

    fn weighted_sum<F: Fn(u32, CertifiedReal) -> CertifiedReal>(&self, f: F) -> CertifiedReal {
        (1..self.p).fold(CertifiedReal::from_int(0), |acc, a| {
            acc + f(a, self.sums[a as usize])
        })
    }

    /// Σ_{a≠0} K(a,p)^n.
    pub fn untwisted(&self, n: u32) -> Result<i128> {
        self.weighted_sum(|_, k| k.powi(n)).round_to_integer()
    }

    /// Σ_a χ(a) K(a,p)^n for χ trivial or quadratic (χ(0) = 0).
    pub fn twisted(&self, ctx: &FieldCtx, n: u32, twist: CharIdx) -> Result<i128> {
        let quad = check_twist(ctx, twist)? == 1;
        self.weighted_sum(|a, k| {
            let t = k.powi(n);
            if quad && ctx.legendre(a as i64) < 0 {
                -t
            } else {
                t
            }
        })
        .round_to_integer()
    }

    /// M(n,φ) = Σ_{a≠0} φ(a) h_n(a) with h_n = −K h_{n−1} − p h_{n−2}.
    pub fn sheaf(&self, ctx: &FieldCtx, n: u32) -> Result<i128> {
        let p = CertifiedReal::from_int(self.p as i128);
        self.weighted_sum(|a, k| {
            let h = sheaf_h(k, p, n);
            if ctx.legendre(a as i64) < 0 {
                -h
            } else {
                h
            }
        })
        .round_to_integer()
    }

    /// Σ_{a≠0} φ(a)(K⁴ − 3pK² + p²), the expanded n = 4 sheaf sum.
    pub fn sheaf4_expanded(&self, ctx: &FieldCtx) -> Result<i128> {
        let p = self.p as i64;
        self.weighted_sum(|a, k| {
            let k2 = k * k;
            let t = k2 * k2 - k2.scale_int(3 * p) + CertifiedReal::from_int((p * p) as i128);
            if ctx.legendre(a as i64) < 0 {
                -t
            } else {
                t
            }
        })
        .round_to_integer()
    }

    /// Histogram of θ = arccos(K/(2√p)) ∈ [0,π] for a = 1..p−1.
    pub fn angle_histogram(&self, bins: usize) -> Vec<u64> {
        let bins = bins.max(1);
        let mut h = vec![0u64; bins];
        let two_sqrt_p = 2.0 * (self.p as f64).sqrt();
        for a in 1..self.p as usize {
            let c = (self.sums[a].to_f64() / two_sqrt_p).clamp(-1.0, 1.0);
            let t = c.acos() / std::f64::consts::PI;
            let i = ((t * bins as f64) as usize).min(bins - 1);
            h[i] += 1;
        }
        h
    }
}

fn sheaf_h(k: CertifiedReal, p: CertifiedReal, n: u32) -> CertifiedReal {
    let mut h0 = CertifiedReal::from_int(1);
    let mut h1 = -k;
    if n == 0 {
        return h0;
    }
    for _ in 1..n {
        let h2 = -(k * h1) - p * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

pub fn untwisted_moment(ctx: &FieldCtx, n: u32) -> Result<MomentResult> {
    let value = KloostermanTable::new(ctx).untwisted(n)?;
    Ok(MomentResult {
        p: ctx.p(),
        n,
        twist: None,
        value,
        backend: "dd-cos-table",
    })
}

pub fn twisted_moment(ctx: &FieldCtx, n: u32, twist: CharIdx) -> Result<MomentResult> {
    check_twist(ctx, twist)?;
    let value = KloostermanTable::new(ctx).twisted(ctx, n, twist)?;
    Ok(MomentResult {
        p: ctx.p(),
        n,
        twist: Some(twist.0),
        value,
        backend: "dd-cos-table",
    })
}

pub fn sheaf_moment(ctx: &FieldCtx, n: u32) -> Result<i128> {
    KloostermanTable::new(ctx).sheaf(ctx, n)
}

pub fn angle_histogram(ctx: &FieldCtx, bins: usize) -> Vec<u64> {
    KloostermanTable::new(ctx).angle_histogram(bins)
}

/// Chi-square distance of a histogram over [0,π] to the density (2/π)sin²θ.
pub fn semicircle_chi2(hist: &[u64]) -> f64 {
    let total: u64 = hist.iter().sum();
    let bins = hist.len() as f64;
    let cdf = |t: f64| (t - t.sin() * t.cos()) / std::f64::consts::PI;
    hist.iter()
        .enumerate()
        .map(|(i, &o)| {
            let lo = std::f64::consts::PI * i as f64 / bins;
            let hi = std::f64::consts::PI * (i + 1) as f64 / bins;
            let e = total as f64 * (cdf(hi) - cdf(lo));
            (o as f64 - e).powi(2) / e
        })
        .sum::<f64>()
        / total.max(1) as f64
}

/// p·φ(−1)·Σ_{x_1..x_m ≠ 0} φ(Σx_i + 1)·φ(Σx̄_i + 1), by enumeration.
pub fn symmetric_moment_rhs(ctx: &FieldCtx, m: u32, cap: u32) -> Result<i128> {
    let p = ctx.p();
    if p > cap {
        return Err(Error::BruteForceCap { p, cap });
    }
    if !(1..=3).contains(&m) {
        return Err(Error::InvalidArgument(format!("m = {m} not in 1..=3")));
    }
    let phi = |x: u32| ctx.legendre(x as i64) as i64;
    // pairs (Σx_i, Σx̄_i) over the first m−1 coordinates, as a count matrix
    let pu = p as usize;
    let mut cnt = vec![0i64; pu * pu];
    cnt[0] = 1;
    for _ in 1..m {
        let mut next = vec![0i64; pu * pu];
        for s in 0..pu {
            for t in 0..pu {
                let c = cnt[s * pu + t];
                if c == 0 {
                    continue;
                }
                for x in 1..p {
                    let s2 = (s + x as usize) % pu;
                    let t2 = (t + ctx.inv(x) as usize) % pu;
                    next[s2 * pu + t2] += c;
                }
            }
        }
        cnt = next;
    }
    let mut total = 0i64;
    for s in 0..pu {
        for t in 0..pu {
            let c = cnt[s * pu + t];
            if c == 0 {
                continue;
            }
            let mut inner = 0i64;
            for x in 1..p {
                inner += phi(ctx.add(s as u32 + x, 1)) * phi(ctx.add(t as u32 + ctx.inv(x), 1));
            }
            total += c * inner;
        }
    }
    Ok(p as i128 * ctx.legendre(-1) as i128 * total as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::primes_in;
    use proptest::prelude::*;

    fn ctx(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    #[test]
    fn sum_examples() {
        let c = ctx(11);
        let k0 = kloosterman_sum(&c, 0);
        assert_eq!(k0.err, 0.0);
        assert_eq!(k0.round_to_integer().unwrap(), -1);
        let k = kloosterman_sum(&ctx(5), 1);
        assert!(k.to_f64().abs() <= 2.0 * 5f64.sqrt());
        let k73 = kloosterman_sum(&ctx(7), 3).to_f64();
        assert!((k73 - K_7_3).abs() < 1e-10, "{k73}");
    }

    // K(3,7) = −1.60387547160967650494440927802978..., 50-digit direct summation
    const K_7_3: f64 = -1.6038754716096766;

    #[test]
    fn weil_bound() {
        for p in primes_in(3, 400) {
            let c = ctx(p as u64);
            let t = KloostermanTable::new(&c);
            let b = 2.0 * (p as f64).sqrt();
            for a in 1..p {
                let k = t.get(a);
                assert!(k.to_f64().abs() <= b + k.err, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(untwisted_moment(&ctx(5), 2).unwrap().value, 19);
        assert_eq!(untwisted_moment(&ctx(7), 1).unwrap().value, 1);
        let c7 = ctx(7);
        let q = CharIdx::quadratic(&c7);
        assert_eq!(twisted_moment(&c7, 2, q).unwrap().value, -7);
        assert_eq!(twisted_moment(&c7, 4, q).unwrap().value, -315);
        assert_eq!(
            twisted_moment(&ctx(13), 4, CharIdx::quadratic(&ctx(13)))
                .unwrap()
                .value,
            -793
        );
        assert!(matches!(
            twisted_moment(&ctx(13), 4, CharIdx(4)),
            Err(Error::UnsupportedTwist(4))
        ));
    }

    #[test]
    fn closed_forms_small() {
        for p in primes_in(7, 300) {
            let c = ctx(p as u64);
            let t = KloostermanTable::new(&c);
            let pi = p as i128;
            let q = CharIdx::quadratic(&c);
            assert_eq!(t.untwisted(1).unwrap(), 1);
            assert_eq!(t.untwisted(2).unwrap(), pi * pi - pi - 1);
            let l3 = if p % 3 == 1 { 1 } else { -1 };
            assert_eq!(t.untwisted(3).unwrap(), l3 * pi * pi + 2 * pi + 1, "p={p}");
            assert_eq!(
                t.untwisted(4).unwrap(),
                2 * pi.pow(3) - 3 * pi * pi - 3 * pi - 1
            );
            assert_eq!(t.twisted(&c, 2, q).unwrap(), -pi);
            let s4 = t.twisted(&c, 4, q).unwrap();
            assert_eq!(t.sheaf(&c, 4).unwrap(), s4 + 3 * pi * pi);
            assert_eq!(t.sheaf4_expanded(&c).unwrap(), s4 + 3 * pi * pi);
            assert_eq!(t.sheaf(&c, 1).unwrap(), -(c.legendre(-1) as i128) * pi);
        }
    }

    #[test]
    fn symmetric_sums_match_moments() {
        for p in [5u64, 7, 11, 13] {
            let c = ctx(p);
            let t = KloostermanTable::new(&c);
            let q = CharIdx::quadratic(&c);
            for m in 1..=3 {
                assert_eq!(
                    symmetric_moment_rhs(&c, m, 200).unwrap(),
                    t.twisted(&c, m + 1, q).unwrap(),
                    "p={p} m={m}"
                );
            }
        }
        assert_eq!(symmetric_moment_rhs(&ctx(7), 1, 200).unwrap(), -7);
        assert_eq!(symmetric_moment_rhs(&ctx(7), 3, 200).unwrap(), -315);
        assert!(matches!(
            symmetric_moment_rhs(&ctx(211), 1, 200),
            Err(Error::BruteForceCap { .. })
        ));
    }

    #[test]
    fn histograms() {
        let c = ctx(101);
        assert_eq!(angle_histogram(&c, 1), vec![100]);
        assert_eq!(angle_histogram(&c, 4).iter().sum::<u64>(), 100);
        let small = semicircle_chi2(&angle_histogram(&ctx(101), 20));
        let large = semicircle_chi2(&angle_histogram(&ctx(1009), 20));
        assert!(large < small, "{large} vs {small}");
    }

    #[test]
    fn headroom_at_5000() {
        let c = ctx(4999);
        let t = KloostermanTable::new(&c);
        assert!(t.twisted(&c, 4, CharIdx::quadratic(&c)).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn galois_stable_under_square_rescaling(pi in 0usize..25, t in 1u32..1000) {
            let ps = primes_in(7, 120);
            let p = ps[pi % ps.len()];
            let c = ctx(p as u64);
            let t = t % p;
            prop_assume!(t != 0);
            let tab = KloostermanTable::new(&c);
            let t2 = c.mul(t, t);
            let permuted = (1..p).fold(CertifiedReal::from_int(0), |acc, a| {
                let k = tab.get(c.mul(a, t2)).powi(4);
                if c.legendre(a as i64) < 0 { acc - k } else { acc + k }
            });
            prop_assert_eq!(
                permuted.round_to_integer().unwrap(),
                tab.twisted(&c, 4, CharIdx::quadratic(&c)).unwrap()
            );
        }
    }
}
