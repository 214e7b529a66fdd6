//! Brute-force oracles written against the field and cyclotomic primitives
//! only. They share no evaluation code with the library's sums.

#![allow(dead_code)]

use ffhyper::{Character, Ctx, CycloNum, FieldElem, SeriesParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Exponent `k` with `χ_j(x) = ζ^k`, or `None` for `x = 0`.
pub fn chi_exp(ctx: &Ctx, j: u32, x: FieldElem) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let d = ctx.field().dlog(x).unwrap() as u64;
    Some(j as u64 * d % ctx.m() as u64)
}

/// `Σ_k counts[k] ζ^k · scale`.
pub fn from_counts(ctx: &Ctx, counts: &[i64], scale: BigRational) -> CycloNum {
    let cy = ctx.cyclo();
    let mut acc = cy.zero();
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 {
            acc = acc + cy.root_of_unity(k as i64).scale_int(c);
        }
    }
    acc.scale(&scale)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_pow(q: u32, n: usize) -> BigInt {
    BigInt::from(q).pow(n as u32)
}

fn sign(c: Character) -> i64 {
    if c.index().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Calls `f` on every tuple of `n` field elements.
pub fn for_each_tuple(q: u32, n: usize, mut f: impl FnMut(&[FieldElem])) {
    let mut t = vec![FieldElem(0); n];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            t[i].0 += 1;
            if t[i].0 < q {
                break;
            }
            t[i].0 = 0;
            i += 1;
        }
    }
}

/// The defining point sum of `F_A^(n)`, term by term.
pub fn lauricella_oracle(ctx: &Ctx, p: &SeriesParams) -> CycloNum {
    let f = ctx.field();
    let m = ctx.m() as u64;
    let n = p.n();
    if p.xs.iter().any(|x| x.is_zero()) {
        return ctx.cyclo().zero();
    }
    let mut counts = vec![0i64; m as usize];
    let abar = p.a.inv().index();
    for_each_tuple(ctx.q(), n, |t| {
        let mut e = 0u64;
        let mut s = f.zero();
        for i in 0..n {
            let b = p.bs[i];
            let bc = b.inv().index() as u64 + p.cs[i].index() as u64;
            let (Some(e1), Some(e2)) = (chi_exp(ctx, b.index(), t[i]), chi_exp(ctx, (bc % m) as u32, f.sub(f.one(), t[i]))) else {
                return;
            };
            e += e1 + e2;
            s = f.add(s, f.mul(p.xs[i], t[i]));
        }
        let Some(e3) = chi_exp(ctx, abar, f.sub(f.one(), s)) else {
            return;
        };
        counts[((e + e3) % m) as usize] += 1;
    });
    let sgn: i64 = p.bs.iter().zip(&p.cs).map(|(b, c)| sign(*b) * sign(*c)).product();
    from_counts(ctx, &counts, BigRational::new(BigInt::from(sgn), q_pow(ctx.q(), n)))
}

/// `B(-1)/q Σ_x A(x) B̄(1-x)`.
pub fn binom_oracle(ctx: &Ctx, a: Character, b: Character) -> CycloNum {
    let f = ctx.field();
    let mut counts = vec![0i64; ctx.m() as usize];
    for x in f.elements() {
        if let (Some(e1), Some(e2)) = (chi_exp(ctx, a.index(), x), chi_exp(ctx, b.inv().index(), f.sub(f.one(), x))) {
            counts[((e1 + e2) % ctx.m() as u64) as usize] += 1;
        }
    }
    from_counts(ctx, &counts, rat(sign(b), ctx.q() as i64))
}

/// Multiple-Jacobi sum from the constrained definition
/// `Σ_{c_1 + .. + c_k = 1} λ_1(c_1)⋯λ_k(c_k)`.
pub fn multi_jacobi_oracle(ctx: &Ctx, chars: &[Character]) -> CycloNum {
    let f = ctx.field();
    let m = ctx.m() as u64;
    let k = chars.len();
    let mut counts = vec![0i64; m as usize];
    for_each_tuple(ctx.q(), k - 1, |c| {
        let mut s = f.zero();
        let mut e = 0u64;
        for (i, &ci) in c.iter().enumerate() {
            let Some(ei) = chi_exp(ctx, chars[i].index(), ci) else {
                return;
            };
            e += ei;
            s = f.add(s, ci);
        }
        let Some(el) = chi_exp(ctx, chars[k - 1].index(), f.sub(f.one(), s)) else {
            return;
        };
        counts[((e + el) % m) as usize] += 1;
    });
    from_counts(ctx, &counts, BigRational::from_integer(1.into()))
}

/// `(B_1⋯B_n)(-1)/q^n · J(A, B̄_1, .., B̄_n)` from the constrained oracle.
pub fn multinom_oracle(ctx: &Ctx, a: Character, bs: &[Character]) -> CycloNum {
    let mut chars = vec![a];
    chars.extend(bs.iter().map(|b| b.inv()));
    let sgn: i64 = bs.iter().map(|b| sign(*b)).product();
    multi_jacobi_oracle(ctx, &chars).scale(&BigRational::new(BigInt::from(sgn), q_pow(ctx.q(), bs.len())))
}

pub fn random_char(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Character {
    ctx.character(rng.gen_range(0..ctx.m() as i64))
}

pub fn random_params(ctx: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> SeriesParams {
    let a = random_char(ctx, rng);
    let bs = (0..n).map(|_| random_char(ctx, rng)).collect();
    let cs = (0..n).map(|_| random_char(ctx, rng)).collect();
    let xs = (0..n).map(|_| FieldElem(rng.gen_range(0..ctx.q()))).collect();
    SeriesParams::new(a, bs, cs, xs).unwrap()
}

/// Every parameter tuple `(A, B, C, x)` with `n` slots, in a fixed order.
pub fn all_params(ctx: &Ctx, n: usize) -> Vec<SeriesParams> {
    let m = ctx.m();
    let q = ctx.q();
    let mut out = Vec::new();
    let radices: Vec<u32> = std::iter::repeat_n(m, 1 + 2 * n).chain(std::iter::repeat_n(q, n)).collect();
    let mut d = vec![0u32; radices.len()];
    loop {
        let ch = |j: u32| ctx.character(j as i64);
        out.push(
            SeriesParams::new(
                ch(d[0]),
                d[1..=n].iter().map(|&j| ch(j)).collect(),
                d[n + 1..=2 * n].iter().map(|&j| ch(j)).collect(),
                d[2 * n + 1..].iter().map(|&v| FieldElem(v)).collect(),
            )
            .unwrap(),
        );
        let mut i = 0;
        loop {
            if i == d.len() {
                return out;
            }
            d[i] += 1;
            if d[i] < radices[i] {
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}

pub fn describe(ctx: &Ctx, p: &SeriesParams) -> String {
    serde_json::to_string(&p.to_json(ctx)).unwrap()
}
