//! Legendre curves y² = x(x−1)(x−λ): traces, j-invariants, twists,
//! 2-power torsion, and F_p-isomorphism.

use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LegendreCurve {
    pub lambda: u32,
}

impl LegendreCurve {
    pub fn new(ctx: &FieldCtx, lambda: u32) -> Result<Self> {
        let l = lambda % ctx.p();
        if l == 0 || l == 1 {
            return Err(Error::SingularCurve(l));
        }
        Ok(LegendreCurve { lambda: l })
    }
}

pub fn ap_legendre(ctx: &FieldCtx, lambda: u32) -> Result<i64> {
    let l = LegendreCurve::new(ctx, lambda)?.lambda as i64;
    let s: i64 = (0..ctx.p() as i64)
        .map(|x| ctx.legendre(x * (x - 1) % ctx.p() as i64 * (x - l)) as i64)
        .sum();
    Ok(-s)
}

/// a_p(λ) for every λ; entries at λ = 0, 1 are `None`.
#[derive(Debug, Clone)]
pub struct TraceTable {
    p: u32,
    ap: Vec<Option<i32>>,
}

impl TraceTable {
    pub fn new(ctx: &FieldCtx) -> Self {
        let ap = (0..ctx.p())
            .into_par_iter()
            .map(|l| ap_legendre(ctx, l).ok().map(|a| a as i32))
            .collect();
        TraceTable { p: ctx.p(), ap }
    }

    pub fn from_values(p: u32, ap: Vec<Option<i32>>) -> Self {
        TraceTable { p, ap }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, lambda: u32) -> Option<i32> {
        self.ap[(lambda % self.p) as usize]
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.ap
            .iter()
            .enumerate()
            .filter_map(|(l, a)| a.map(|a| (l as u32, a)))
    }
}

pub fn j_invariant(ctx: &FieldCtx, lambda: u32) -> Result<u32> {
    let l = LegendreCurve::new(ctx, lambda)?.lambda;
    let num = ctx.sub(ctx.add(ctx.mul(l, l), 1), l);
    let num = ctx.mul(256 % ctx.p(), ctx.pow(num, 3));
    let lm1 = ctx.sub(l, 1);
    let den = ctx.mul(ctx.mul(l, l), ctx.mul(lm1, lm1));
    Ok(ctx.mul(num, ctx.inv(den)))
}

/// The six-element orbit {λ, 1/λ, 1−λ, 1/(1−λ), λ/(λ−1), (λ−1)/λ}.
pub fn lambda_orbit(ctx: &FieldCtx, lambda: u32) -> [u32; 6] {
    let l = lambda % ctx.p();
    let om = ctx.sub(1, l);
    let lm1 = ctx.sub(l, 1);
    [
        l,
        ctx.inv(l),
        om,
        ctx.inv(om),
        ctx.mul(l, ctx.inv(lm1)),
        ctx.mul(lm1, ctx.inv(l)),
    ]
}

/// a(λ) = φ(λ)a(1/λ), a(λ) = φ(−1)a(1−λ), a(λ) = φ(1−λ)a(λ/(λ−1)).
pub fn twist_relation_check(ctx: &FieldCtx, lambda: u32) -> Result<[bool; 3]> {
    let l = LegendreCurve::new(ctx, lambda)?.lambda;
    let a = ap_legendre(ctx, l)?;
    let phi = |x: u32| ctx.legendre(x as i64) as i64;
    let inv_l = ctx.inv(l);
    let om = ctx.sub(1, l);
    let q = ctx.mul(l, ctx.inv(ctx.sub(l, 1)));
    Ok([
        a == phi(l) * ap_legendre(ctx, inv_l)?,
        a == ctx.legendre(-1) as i64 * ap_legendre(ctx, om)?,
        a == phi(om) * ap_legendre(ctx, q)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TorsionClass {
    Z2xZ2,
    Z2xZ4,
    Z4xZ4,
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorsionClass::Z2xZ2 => "2x2",
            TorsionClass::Z2xZ4 => "2x4",
            TorsionClass::Z4xZ4 => "4x4",
        })
    }
}

/// Number of roots e of y² = (x−e₁)(x−e₂)(x−e₃) with e−e′, e−e″ both squares.
pub fn halvable_roots(ctx: &FieldCtx, roots: [u32; 3]) -> usize {
    (0..3)
        .filter(|&i| {
            let e = roots[i];
            ctx.is_square(ctx.sub(e, roots[(i + 1) % 3]))
                && ctx.is_square(ctx.sub(e, roots[(i + 2) % 3]))
        })
        .count()
}

fn class_from_halvable(n: usize) -> TorsionClass {
    match n {
        0 => TorsionClass::Z2xZ2,
        1 => TorsionClass::Z2xZ4,
        3 => TorsionClass::Z4xZ4,
        _ => unreachable!("two halvable 2-torsion points force the third"),
    }
}

pub fn torsion_class(ctx: &FieldCtx, lambda: u32) -> Result<TorsionClass> {
    let l = LegendreCurve::new(ctx, lambda)?.lambda;
    Ok(class_from_halvable(halvable_roots(ctx, [0, 1, l])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TraceRecord {
    pub lambda: u32,
    pub ap: i64,
    pub group_order: i64,
    pub torsion: TorsionClass,
}

pub fn trace_record(ctx: &FieldCtx, lambda: u32) -> Result<TraceRecord> {
    let ap = ap_legendre(ctx, lambda)?;
    Ok(TraceRecord {
        lambda: lambda % ctx.p(),
        ap,
        group_order: ctx.p() as i64 + 1 - ap,
        torsion: torsion_class(ctx, lambda)?,
    })
}

/// Short Weierstrass model y² = x³ + Ax + B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weierstrass {
    pub a: u32,
    pub b: u32,
}

impl Weierstrass {
    pub fn is_singular(&self, ctx: &FieldCtx) -> bool {
        let a3 = ctx.mul(4, ctx.pow(self.a, 3));
        let b2 = ctx.mul(27 % ctx.p(), ctx.mul(self.b, self.b));
        ctx.add(a3, b2) == 0
    }

    pub fn trace(&self, ctx: &FieldCtx) -> i64 {
        let p = ctx.p() as i64;
        let s: i64 = (0..p)
            .map(|x| ctx.legendre(((x * x % p) * x + self.a as i64 * x + self.b as i64) % p) as i64)
            .sum();
        -s
    }

    pub fn j(&self, ctx: &FieldCtx) -> u32 {
        let a3 = ctx.mul(4, ctx.pow(self.a, 3));
        let den = ctx.add(a3, ctx.mul(27 % ctx.p(), ctx.mul(self.b, self.b)));
        ctx.mul(ctx.mul(1728 % ctx.p(), a3), ctx.inv(den))
    }

    pub fn roots(&self, ctx: &FieldCtx) -> Vec<u32> {
        (0..ctx.p())
            .filter(|&x| {
                let v = ctx.add(ctx.add(ctx.pow(x, 3), ctx.mul(self.a, x)), self.b);
                v == 0
            })
            .collect()
    }

    /// (u⁴A, u⁶B).
    pub fn scaled(&self, ctx: &FieldCtx, u: u32) -> Weierstrass {
        let u2 = ctx.mul(u, u);
        let u4 = ctx.mul(u2, u2);
        Weierstrass {
            a: ctx.mul(u4, self.a),
            b: ctx.mul(ctx.mul(u4, u2), self.b),
        }
    }

    /// |Aut_{F_p}(E)|/2.
    pub fn half_aut(&self, ctx: &FieldCtx) -> u32 {
        let n = (1..ctx.p())
            .filter(|&u| self.scaled(ctx, u) == *self)
            .count();
        n as u32 / 2
    }
}

pub fn legendre_to_weierstrass(ctx: &FieldCtx, lambda: u32) -> Weierstrass {
    let l = lambda % ctx.p();
    let a2 = ctx.neg(ctx.add(1, l));
    let a4 = l;
    let i3 = ctx.inv(3);
    let i27 = ctx.inv(27 % ctx.p());
    let a = ctx.sub(a4, ctx.mul(ctx.mul(a2, a2), i3));
    let b = ctx.sub(
        ctx.mul(2, ctx.mul(ctx.pow(a2, 3), i27)),
        ctx.mul(ctx.mul(a2, a4), i3),
    );
    Weierstrass { a, b }
}

fn is_kth_power(ctx: &FieldCtx, x: u32, k: u64) -> bool {
    match ctx.dlog(x) {
        None => false,
        Some(d) => (d as u64).is_multiple_of(num_integer::gcd(k, ctx.p() as u64 - 1)),
    }
}

/// Exact F_p-isomorphism test: ∃u ≠ 0 with A′ = u⁴A, B′ = u⁶B.
pub fn is_isomorphic(ctx: &FieldCtx, e: &Weierstrass, f: &Weierstrass) -> bool {
    match (e.a == 0, e.b == 0, f.a == 0, f.b == 0) {
        (true, false, true, false) => is_kth_power(ctx, ctx.mul(f.b, ctx.inv(e.b)), 6),
        (false, true, false, true) => is_kth_power(ctx, ctx.mul(f.a, ctx.inv(e.a)), 4),
        (false, false, false, false) => {
            if e.j(ctx) != f.j(ctx) {
                return false;
            }
            let d = ctx.mul(ctx.mul(f.b, e.a), ctx.inv(ctx.mul(f.a, e.b)));
            ctx.is_square(d)
        }
        _ => false,
    }
}

/// (j, a_p); determines the F_p-class unless `is_degenerate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClassKey {
    pub j: u32,
    pub ap: i64,
}

impl IsoClassKey {
    pub fn is_degenerate(&self, ctx: &FieldCtx) -> bool {
        self.ap == 0 || self.j == 0 || self.j == 1728 % ctx.p()
    }
}

fn key_of(ctx: &FieldCtx, traces: &TraceTable, lambda: u32) -> IsoClassKey {
    IsoClassKey {
        j: j_invariant(ctx, lambda).expect("nonsingular"),
        ap: traces.get(lambda).expect("nonsingular") as i64,
    }
}

/// L(λ) = {±μ ∉ {0,±1} : E_{λ²} ≅ E_{μ²}}.
pub fn l_set(ctx: &FieldCtx, traces: &TraceTable, lambda: u32) -> Result<Vec<u32>> {
    let p = ctx.p();
    let l = lambda % p;
    if l == 0 || l == 1 || l == p - 1 {
        return Err(Error::SingularCurve(l));
    }
    let l2 = ctx.mul(l, l);
    let key = key_of(ctx, traces, l2);
    let w = legendre_to_weierstrass(ctx, l2);
    let degenerate = key.is_degenerate(ctx);
    Ok((2..p - 1)
        .filter(|&mu| {
            let m2 = ctx.mul(mu, mu);
            if key_of(ctx, traces, m2) != key {
                return false;
            }
            !degenerate || is_isomorphic(ctx, &w, &legendre_to_weierstrass(ctx, m2))
        })
        .collect())
}

/// |L(λ)| as predicted by the cardinality lemmas; `Some(0)` where no such λ
/// can exist, `None` where no cardinality is claimed (j = 1728, p ≡ 3 mod 4).
pub fn expected_l_size(ctx: &FieldCtx, lambda: u32) -> Option<usize> {
    let p = ctx.p();
    let l2 = ctx.mul(lambda, lambda);
    let j = j_invariant(ctx, l2).ok()?;
    if j == 0 {
        return Some(if p % 12 == 1 { 4 } else { 0 });
    }
    if j == 1728 % p {
        return match p % 8 {
            1 => Some(6),
            5 => Some(2),
            _ => None,
        };
    }
    if p % 4 == 3 {
        Some(4)
    } else if ctx.is_square(ctx.sub(1, l2)) {
        Some(12)
    } else {
        Some(4)
    }
}

/// One F_p-isomorphism class of elliptic curves, with a short-model representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassInfo {
    pub rep: Weierstrass,
    pub trace: i64,
    /// Largest n ∈ {1,2,4} with ℤ/n×ℤ/n ⊆ E(F_p).
    pub full_torsion: u32,
    pub half_aut: u32,
}

/// All F_p-isomorphism classes of elliptic curves over F_p (p ≥ 5).
pub fn isomorphism_classes(ctx: &FieldCtx) -> Vec<ClassInfo> {
    let p = ctx.p();
    let pu = p as usize;
    let mut seen = vec![false; pu * pu];
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            let idx = a as usize * pu + b as usize;
            if seen[idx] {
                continue;
            }
            let e = Weierstrass { a, b };
            if e.is_singular(ctx) {
                seen[idx] = true;
                continue;
            }
            for u in 1..p {
                let f = e.scaled(ctx, u);
                seen[f.a as usize * pu + f.b as usize] = true;
            }
            let roots = e.roots(ctx);
            let full_torsion = if roots.len() == 3 {
                if halvable_roots(ctx, [roots[0], roots[1], roots[2]]) == 3 {
                    4
                } else {
                    2
                }
            } else {
                1
            };
            out.push(ClassInfo {
                rep: e,
                trace: e.trace(ctx),
                full_torsion,
                half_aut: e.half_aut(ctx),
            });
        }
    }
    out
}
