//! Class numbers of positive definite binary quadratic forms and Hurwitz
//! class numbers, in integers scaled by 12.

use crate::error::{Error, Result};
use num_integer::{gcd, Roots};
use num_rational::Ratio;

pub type Q = Ratio<i64>;

fn is_disc(d: u64) -> bool {
    d.is_multiple_of(4) || d % 4 == 3
}

/// 12/|O^×|·2: 4 for disc −3, 6 for disc −4, else 12.
fn weight12(d: u64) -> i64 {
    match d {
        3 => 4,
        4 => 6,
        _ => 12,
    }
}

/// Number of reduced primitive forms of discriminant −D (0 if −D is not a
/// discriminant).
pub fn class_number_h(d: u64) -> u64 {
    if d == 0 || !is_disc(d) {
        return 0;
    }
    let mut count = 0;
    let mut a = 1u64;
    while 3 * a * a <= d {
        for b in -(a as i64) + 1..=a as i64 {
            let num = (b * b) as u64 + d;
            if !num.is_multiple_of(4 * a) {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a, b.unsigned_abs()), c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

fn conductor_sum(d: u64, h: impl Fn(u64) -> u64, weighted: bool) -> i64 {
    let mut total = 0i64;
    let mut f = 1u64;
    while f * f <= d {
        if d.is_multiple_of(f * f) {
            let e = d / (f * f);
            if is_disc(e) {
                let w = if weighted { weight12(e) } else { 1 };
                total += h(e) as i64 * w;
            }
        }
        f += 1;
    }
    total
}

/// 12·H*(D); −1 at D = 0.
pub fn hurwitz_hstar(d: u64) -> i64 {
    if d == 0 {
        return -1;
    }
    conductor_sum(d, class_number_h, true)
}

/// H(D), the unweighted sum over orders.
pub fn hurwitz_hfull(d: u64) -> i64 {
    conductor_sum(d, class_number_h, false)
}

/// h, 12·H* and H for every 0 ≤ D ≤ bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzTable {
    bound: u64,
    h: Vec<u32>,
    hstar12: Vec<i64>,
    hfull: Vec<i64>,
}

impl HurwitzTable {
    /// One pass over all reduced forms with 4ac − b² ≤ bound.
    pub fn build(bound: u64) -> Self {
        let n = bound as usize + 1;
        let mut h = vec![0u32; n];
        let mut a = 1u64;
        while 3 * a * a <= bound {
            for b in -(a as i64) + 1..=a as i64 {
                let b2 = (b * b) as u64;
                let mut c = a;
                loop {
                    let d = 4 * a * c - b2;
                    if d > bound {
                        break;
                    }
                    if !(c == a && b < 0) && gcd(gcd(a, b.unsigned_abs()), c) == 1 {
                        h[d as usize] += 1;
                    }
                    c += 1;
                }
            }
            a += 1;
        }
        let hv = |e: u64| h[e as usize] as u64;
        let mut hstar12 = vec![0i64; n];
        let mut hfull = vec![0i64; n];
        hstar12[0] = -1;
        for d in 1..=bound {
            hstar12[d as usize] = conductor_sum(d, hv, true);
            hfull[d as usize] = conductor_sum(d, hv, false);
        }
        HurwitzTable {
            bound,
            h,
            hstar12,
            hfull,
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    fn check(&self, d: u64) -> Result<usize> {
        if d > self.bound {
            return Err(Error::ExtendCache {
                need: d,
                have: self.bound,
            });
        }
        Ok(d as usize)
    }

    pub fn h(&self, d: u64) -> Result<u64> {
        Ok(self.h[self.check(d)?] as u64)
    }

    /// 12·H*(D); 0 for D < 0.
    pub fn hstar12(&self, d: i64) -> Result<i64> {
        if d < 0 {
            return Ok(0);
        }
        Ok(self.hstar12[self.check(d as u64)?])
    }

    pub fn hfull(&self, d: i64) -> Result<i64> {
        if d < 0 {
            return Ok(0);
        }
        Ok(self.hfull[self.check(d as u64)?])
    }

    pub fn hstar(&self, d: i64) -> Result<Q> {
        Ok(Q::new(self.hstar12(d)?, 12))
    }

    /// 12·H*(num/den), zero unless den | num.
    pub fn hstar12_frac(&self, num: i64, den: i64) -> Result<i64> {
        if num % den != 0 {
            return Ok(0);
        }
        self.hstar12(num / den)
    }

    pub fn hfull_frac(&self, num: i64, den: i64) -> Result<i64> {
        if num % den != 0 {
            return Ok(0);
        }
        self.hfull(num / den)
    }

    pub fn rows(&self) -> impl Iterator<Item = (u64, u32, i64, i64)> + '_ {
        (0..=self.bound).map(|d| {
            let i = d as usize;
            (d, self.h[i], self.hstar12[i], self.hfull[i])
        })
    }

    pub fn from_rows(rows: Vec<(u64, u32, i64, i64)>) -> Result<Self> {
        let mut t = HurwitzTable {
            bound: rows.len().saturating_sub(1) as u64,
            h: Vec::with_capacity(rows.len()),
            hstar12: Vec::with_capacity(rows.len()),
            hfull: Vec::with_capacity(rows.len()),
        };
        for (i, (d, h, s, f)) in rows.into_iter().enumerate() {
            if d != i as u64 {
                return Err(Error::Cache(format!("row {i} has D = {d}")));
            }
            t.h.push(h);
            t.hstar12.push(s);
            t.hfull.push(f);
        }
        if t.h.is_empty() {
            return Err(Error::Cache("empty hurwitz table".into()));
        }
        Ok(t)
    }
}

/// σ₁(n), 2λ₁(n) and 2λ₃(n), where 2λ_k(n) = Σ_{d|n} min(d, n/d)^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisorSums {
    pub n: u64,
    pub sigma1: u64,
    pub lambda1_x2: u64,
    pub lambda3_x2: u64,
}

impl DivisorSums {
    pub fn new(n: u64) -> Self {
        let (mut s, mut l1, mut l3) = (0, 0, 0);
        let mut d = 1;
        while d * d <= n {
            if n.is_multiple_of(d) {
                let e = n / d;
                s += d + if e != d { e } else { 0 };
                let m = d.min(e);
                let mult = if e != d { 2 } else { 1 };
                l1 += mult * m;
                l3 += mult * m * m * m;
            }
            d += 1;
        }
        DivisorSums {
            n,
            sigma1: s,
            lambda1_x2: l1,
            lambda3_x2: l3,
        }
    }
}

fn require_odd(n: u64) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("{n} is not odd")));
    }
    Ok(())
}

/// Σ_{s² ≤ n} H*(n − s²).
pub fn eichler_lhs(table: &HurwitzTable, n: u64) -> Result<Q> {
    require_odd(n)?;
    let r = n.sqrt() as i64;
    let mut tot = 0i64;
    for s in -r..=r {
        tot += table.hstar12(n as i64 - s * s)?;
    }
    Ok(Q::new(tot, 12))
}

/// −λ₁(n) + σ₁(n)/3.
pub fn eichler_rhs(n: u64) -> Q {
    let d = DivisorSums::new(n);
    Q::new(-(d.lambda1_x2 as i64), 2) + Q::new(d.sigma1 as i64, 3)
}

/// 4ΣH*(ℓ−s²)s² − ℓΣH*(ℓ−s²) + λ₃(ℓ).
pub fn cohen_coefficient(table: &HurwitzTable, l: u64) -> Result<Q> {
    require_odd(l)?;
    let r = l.sqrt() as i64;
    let (mut a, mut b) = (0i64, 0i64);
    for s in -r..=r {
        let v = table.hstar12(l as i64 - s * s)?;
        a += v * s * s;
        b += v;
    }
    let lam3 = Q::new(DivisorSums::new(l).lambda3_x2 as i64, 2);
    Ok(Q::new(4 * a - l as i64 * b, 12) + lam3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number_h(3), 1);
        assert_eq!(class_number_h(4), 1);
        assert_eq!(class_number_h(23), 3);
        assert_eq!(class_number_h(20), 2);
        assert_eq!(class_number_h(5), 0);
        assert_eq!(hurwitz_hstar(3), 4);
        assert_eq!(hurwitz_hstar(12), 16);
        assert_eq!(hurwitz_hstar(1), 0);
        assert_eq!(hurwitz_hstar(0), -1);
        assert_eq!(hurwitz_hfull(4), 1);
        assert_eq!(hurwitz_hfull(3), 1);
        assert_eq!(hurwitz_hfull(20), 2);
    }

    #[test]
    fn table_matches_direct_route() {
        let t = HurwitzTable::build(3000);
        assert_eq!(t.hstar12(3).unwrap(), 4);
        assert_eq!(t.hstar12(4).unwrap(), 6);
        assert_eq!(t.hstar12(0).unwrap(), -1);
        for d in 1..=3000u64 {
            assert_eq!(t.h(d).unwrap(), class_number_h(d), "D={d}");
            assert_eq!(t.hstar12(d as i64).unwrap(), hurwitz_hstar(d));
            assert_eq!(t.hfull(d as i64).unwrap(), hurwitz_hfull(d));
            if !is_disc(d) {
                assert_eq!(t.hstar12(d as i64).unwrap(), 0);
                assert_eq!(t.hfull(d as i64).unwrap(), 0);
            }
        }
        assert!(matches!(t.hstar12(3001), Err(Error::ExtendCache { .. })));
    }

    #[test]
    fn weighted_and_unweighted_differ_only_at_extra_units() {
        let t = HurwitzTable::build(4000);
        for d in 1..=4000u64 {
            let special = (1..)
                .take_while(|f| f * f <= d)
                .any(|f| d % (f * f) == 0 && matches!(d / (f * f), 3 | 4));
            let same = t.hstar12(d as i64).unwrap() == 12 * t.hfull(d as i64).unwrap();
            assert_eq!(same, !special, "D={d}");
        }
    }

    #[test]
    fn eichler_examples() {
        let t = HurwitzTable::build(100);
        assert_eq!(eichler_lhs(&t, 5).unwrap(), Q::from_integer(1));
        assert_eq!(eichler_rhs(5), Q::from_integer(1));
        assert_eq!(eichler_lhs(&t, 3).unwrap(), Q::new(1, 3));
        assert_eq!(eichler_rhs(3), Q::new(1, 3));
        assert_eq!(eichler_lhs(&t, 1).unwrap(), Q::new(-1, 6));
        assert_eq!(eichler_rhs(1), Q::new(-1, 6));
        assert!(eichler_lhs(&t, 4).is_err());
        for l in [3u64, 5, 9] {
            assert_eq!(cohen_coefficient(&t, l).unwrap(), Q::from_integer(0));
        }
        let d = DivisorSums::new(9);
        assert_eq!((d.sigma1, d.lambda1_x2, d.lambda3_x2), (13, 5, 29));
    }

    #[test]
    fn eichler_and_cohen_to_1500() {
        let t = HurwitzTable::build(1500);
        for n in (1..=1500u64).step_by(2) {
            assert_eq!(eichler_lhs(&t, n).unwrap(), eichler_rhs(n), "n={n}");
            assert_eq!(cohen_coefficient(&t, n).unwrap(), Q::from_integer(0));
        }
    }

    #[test]
    fn rows_roundtrip() {
        let t = HurwitzTable::build(200);
        let back = HurwitzTable::from_rows(t.rows().collect()).unwrap();
        assert_eq!(back, t);
    }
}
