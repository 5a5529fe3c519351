//! Greene's ₂F₁ and ₃F₂(1) realized p-adically, and McCarthy's ₙ𝔾ₙ.

use super::piring::jacobi_raw;
use super::qp::QpValue;
use super::{frac, PadicCtx};
use crate::error::{Error, Result};
use num_rational::Ratio;

type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq)]
pub struct GSpec {
    pub a: Vec<Q>,
    pub b: Vec<Q>,
    pub t: u32,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

impl GSpec {
    pub fn new(p: u32, a: Vec<Q>, b: Vec<Q>, t: u32) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument(
                "a and b lists differ in length".into(),
            ));
        }
        if a.iter().chain(&b).any(|x| x.denom() % p as i64 == 0) {
            return Err(Error::PDivisibleDenominator(p));
        }
        Ok(GSpec { a, b, t })
    }

    /// ₃𝔾₃[5/6, 1/12, 7/12; 1/3, 1/3, 1/3 | t].
    pub fn g3_params() -> (Vec<Q>, Vec<Q>) {
        (vec![q(5, 6), q(1, 12), q(7, 12)], vec![q(1, 3); 3])
    }

    /// ₉𝔾₉[1/12, 1/6, …, 11/12; 1/3 ×3, 2/3 ×3, 0 ×3 | t].
    pub fn g9_params() -> (Vec<Q>, Vec<Q>) {
        let a = [
            (1, 12),
            (1, 6),
            (1, 4),
            (5, 12),
            (1, 2),
            (7, 12),
            (3, 4),
            (5, 6),
            (11, 12),
        ]
        .iter()
        .map(|&(n, d)| q(n, d))
        .collect();
        let mut b = vec![q(1, 3); 3];
        b.extend(vec![q(2, 3); 3]);
        b.extend(vec![q(0, 1); 3]);
        (a, b)
    }

    /// ₃𝔾₃(λ) is evaluated at t = (λ−1)/λ.
    pub fn g3(ctx: &PadicCtx, lambda: u32) -> Result<Self> {
        let f = &ctx.field;
        if lambda.is_multiple_of(ctx.p()) || lambda % ctx.p() == 1 {
            return Err(Error::InvalidArgument(format!("3G3 at lambda = {lambda}")));
        }
        let t = f.mul(f.sub(lambda, 1), f.inv(lambda));
        let (a, b) = Self::g3_params();
        Self::new(ctx.p(), a, b, t)
    }

    pub fn g9(ctx: &PadicCtx, lambda: u32) -> Result<Self> {
        let (a, b) = Self::g9_params();
        Self::new(ctx.p(), a, b, lambda % ctx.p())
    }
}

/// The t-independent data of one a-term: Γ-quotient, exponent of (−p).
#[derive(Debug, Clone)]
pub struct NgnTerms {
    pub n: usize,
    pub coef: Vec<u64>,
    pub exps: Vec<i32>,
}

impl NgnTerms {
    pub fn new(ctx: &PadicCtx, a: &[Q], b: &[Q]) -> Result<Self> {
        let z = ctx.z;
        let pm1 = ctx.p() as i64 - 1;
        let mut coef = Vec::with_capacity(pm1 as usize);
        let mut exps = Vec::with_capacity(pm1 as usize);
        let ga: Vec<u64> = a
            .iter()
            .map(|&x| ctx.gamma_p(frac(x)))
            .collect::<Result<_>>()?;
        let gb: Vec<u64> = b
            .iter()
            .map(|&x| ctx.gamma_p(frac(-x)))
            .collect::<Result<_>>()?;
        let inv_ga = ga.iter().map(|&g| z.inv(g)).collect::<Result<Vec<_>>>()?;
        let inv_gb = gb.iter().map(|&g| z.inv(g)).collect::<Result<Vec<_>>>()?;
        for s in 0..pm1 {
            let x = q(s, pm1);
            let mut e = 0i64;
            let mut c = 1u64;
            for (k, &ak) in a.iter().enumerate() {
                e -= (frac(ak) - x).floor().to_integer();
                c = z.mul(c, z.mul(ctx.gamma_p(frac(ak - x))?, inv_ga[k]));
            }
            for (k, &bk) in b.iter().enumerate() {
                e -= (frac(-bk) + x).floor().to_integer();
                c = z.mul(c, z.mul(ctx.gamma_p(frac(-bk + x))?, inv_gb[k]));
            }
            coef.push(c);
            exps.push(e as i32);
        }
        Ok(NgnTerms {
            n: a.len(),
            coef,
            exps,
        })
    }

    pub fn min_exp(&self) -> i32 {
        *self.exps.iter().min().unwrap()
    }

    pub fn max_exp(&self) -> i32 {
        *self.exps.iter().max().unwrap()
    }

    /// Σ_i w_i·ₙ𝔾ₙ(t_i) where char_sums[a] = Σ_i w_i·ω̄^a(t_i) mod p^K.
    pub fn combine(&self, ctx: &PadicCtx, char_sums: &[u64]) -> Result<QpValue> {
        let z = ctx.z;
        let emin = self.min_exp();
        let mut s = 0u64;
        for (a, &cs) in char_sums.iter().enumerate() {
            let e = self.exps[a];
            let mut term = z.mul(z.mul(cs, self.coef[a]), z.pow(z.p % z.m, (e - emin) as u64));
            if (a * self.n + e.rem_euclid(2) as usize) % 2 == 1 {
                term = z.neg(term);
            }
            s = z.add(s, term);
        }
        let s = z.neg(z.mul(s, z.inv(ctx.p() as u64 - 1)?));
        Ok(QpValue::from_residue(&z, s, emin))
    }
}

/// ω̄^a-weighted character sums Σ_i w_i ω̄^a(t_i) for all a.
pub fn char_sums(ctx: &PadicCtx, items: &[(u32, u64)]) -> Vec<u64> {
    let z = ctx.z;
    (0..ctx.p() as i64 - 1)
        .map(|a| {
            items.iter().fold(0, |acc, &(t, w)| {
                z.add(acc, z.mul(w, ctx.omega_pow(-a, t as i64)))
            })
        })
        .collect()
}

/// ₙ𝔾ₙ[a; b | t]_p.
pub fn ngn_evaluate(ctx: &PadicCtx, spec: &GSpec) -> Result<QpValue> {
    ngn_weighted(ctx, &spec.a, &spec.b, &[(spec.t, 1)])
}

/// Σ_i w_i·ₙ𝔾ₙ[a; b | t_i]_p, weights given mod p^K.
pub fn ngn_weighted(ctx: &PadicCtx, a: &[Q], b: &[Q], items: &[(u32, u64)]) -> Result<QpValue> {
    if items.iter().any(|&(t, _)| t % ctx.p() == 0) {
        return Err(Error::InvalidArgument("nGn at t = 0".into()));
    }
    let terms = NgnTerms::new(ctx, a, b)?;
    terms.combine(ctx, &char_sums(ctx, items))
}

/// Jacobi sums J(φω^a, ω̄^a) for 0 ≤ a < p−1; binom(φχ, χ) = χ(−1)J(φχ, χ̄)/p.
pub fn binomial_jacobis(ctx: &PadicCtx) -> Vec<u64> {
    let h = (ctx.p() as i64 - 1) / 2;
    (0..ctx.p() as i64 - 1)
        .map(|a| jacobi_raw(ctx, h + a, -a))
        .collect()
}

/// ₂F₁(λ) = (1/(p(p−1)))·Σ_a J(φω^a, ω̄^a)²·ω^a(λ).
pub fn greene_2f1(ctx: &PadicCtx, lambda: u32) -> QpValue {
    greene_2f1_with(ctx, &binomial_jacobis(ctx), lambda)
}

pub fn greene_2f1_with(ctx: &PadicCtx, js: &[u64], lambda: u32) -> QpValue {
    let z = ctx.z;
    let s = js.iter().enumerate().fold(0, |acc, (a, &j)| {
        z.add(
            acc,
            z.mul(z.mul(j, j), ctx.omega_pow(a as i64, lambda as i64)),
        )
    });
    let s = z.mul(s, z.inv(ctx.p() as u64 - 1).expect("unit"));
    QpValue::from_residue(&z, s, -1)
}

/// ₃F₂(1) = (1/(p²(p−1)))·Σ_a ω^a(−1)·J(φω^a, ω̄^a)³.
pub fn greene_3f2_at_1(ctx: &PadicCtx) -> QpValue {
    let z = ctx.z;
    let js = binomial_jacobis(ctx);
    let s = js.iter().enumerate().fold(0, |acc, (a, &j)| {
        z.add(acc, z.mul(z.pow(j, 3), ctx.omega_pow(a as i64, -1)))
    });
    let s = z.mul(s, z.inv(ctx.p() as u64 - 1).expect("unit"));
    QpValue::from_residue(&z, s, -2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecurve::ap_legendre;

    #[test]
    fn greene_trace_relation_small() {
        for p in [5u64, 7, 11, 13, 29] {
            let c = PadicCtx::new(p, 4).unwrap();
            let js = binomial_jacobis(&c);
            let phim1 = c.field.legendre(-1) as i128;
            for l in 2..p as u32 {
                let f = greene_2f1_with(&c, &js, l)
                    .reconstruct(1, 2.0 * (p as f64).sqrt())
                    .unwrap();
                let ap = ap_legendre(&c.field, l).unwrap() as i128;
                assert_eq!(f, Ratio::new(-phim1 * ap, p as i128), "p={p} l={l}");
            }
            assert!(greene_2f1(&c, 0).zero);
        }
        let c = PadicCtx::new(5, 4).unwrap();
        assert_eq!(
            greene_2f1(&c, 2).reconstruct(1, 5.0).unwrap(),
            Ratio::new(2, 5)
        );
        let c = PadicCtx::new(7, 4).unwrap();
        assert_eq!(
            greene_2f1(&c, 2).reconstruct(1, 6.0).unwrap(),
            Ratio::from_integer(0)
        );
    }

    #[test]
    fn greene_3f2_double_sum() {
        for p in [5u64, 7, 13, 17] {
            let c = PadicCtx::new(p, 5).unwrap();
            let f = &c.field;
            let mut direct = 0i128;
            for y in 0..p as i64 {
                for zz in 0..p as i64 {
                    direct += f.legendre(y * (1 - y) * zz * (1 - zz) * (1 - y * zz)) as i128;
                }
            }
            let v = greene_3f2_at_1(&c)
                .reconstruct(2, 4.0 * (p * p) as f64)
                .unwrap();
            assert_eq!(v, Ratio::new(direct, (p * p) as i128), "p={p}");
        }
    }

    #[test]
    fn ngn_a0_and_ranges() {
        let c = PadicCtx::new(13, 4).unwrap();
        let (a, b) = GSpec::g3_params();
        let t = NgnTerms::new(&c, &a, &b).unwrap();
        assert_eq!((t.coef[0], t.exps[0]), (1, 0));
        assert_eq!((t.min_exp(), t.max_exp()), (-2, 1));
        let (a, b) = GSpec::g9_params();
        for p in [11u64, 13, 17] {
            let c = PadicCtx::new(p, 3).unwrap();
            let t = NgnTerms::new(&c, &a, &b).unwrap();
            assert!(t.min_exp() >= 0 && t.max_exp() <= 3, "p={p}");
        }
        assert!(GSpec::new(13, vec![q(1, 13)], vec![q(0, 1)], 2).is_err());
        assert!(ngn_evaluate(&c, &GSpec::new(13, a.clone(), b.clone(), 0).unwrap()).is_err());
    }
}
