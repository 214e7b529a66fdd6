//! Jacobi sums, multiple-Jacobi sums, Greene binomial coefficients and
//! multinomial coefficients.
//!
//! With `χ(0) = 0` for every character:
//!
//! * `J(A, B) = Σ_x A(x) B(1 - x)`
//! * `J(λ_1, .., λ_k) = Σ_{c_2..c_k} λ_1(1 + c_2 + .. + c_k) λ_2(-c_2) .. λ_k(-c_k)`
//! * `binom(A, B) = B(-1)/q · J(A, B̄)`
//! * `multinom(A; B_1..B_n) = (B_1..B_n)(-1)/q^n · J(A, B̄_1, .., B̄_n)`

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::characters::Character;
use crate::context::Ctx;
use crate::cyclotomic::{CycloCtx, CycloNum, ZetaSum};
use crate::error::{domain, Error, Result};
use crate::field::FieldElem;

/// Upper bound on the number of terms a single free-sum evaluation may visit.
pub const MAX_FREE_SUM_TERMS: u64 = 1 << 32;

/// Upper bound on `(q-1)^2 · φ(q-1)` for a [`BinomialTable`].
pub const MAX_TABLE_COEFFS: u64 = 1 << 22;

fn check_all(ctx: &Ctx, chars: &[Character]) -> Result<()> {
    chars.iter().try_for_each(|&c| ctx.check(c))
}

/// `J(χ_a, χ_b)` as a reduced integer vector.
pub(crate) fn jacobi_int(ctx: &Ctx, a: u32, b: u32) -> Vec<i128> {
    let f = ctx.field();
    let one = f.one();
    let m = ctx.m();
    let mut acc = ZetaSum::new(m);
    for x in f.nonzero() {
        let y = f.sub(one, x);
        if y.is_zero() {
            continue;
        }
        let e = (ctx.chi_exp(a, x).unwrap() + ctx.chi_exp(b, y).unwrap()) % m;
        acc.add_root(e as usize);
    }
    acc.to_int(ctx.cyclo())
}

pub fn jacobi(ctx: &Ctx, a: Character, b: Character) -> Result<CycloNum> {
    check_all(ctx, &[a, b])?;
    Ok(ctx.cyclo().from_int(&jacobi_int(ctx, a.index(), b.index()), &BigRational::one()))
}

/// Multiple-Jacobi sum by the free-sum form, `(q-1)^(k-1)` terms.
pub fn multi_jacobi(ctx: &Ctx, chars: &[Character]) -> Result<CycloNum> {
    if chars.is_empty() {
        return domain("multiple-Jacobi sum of zero characters");
    }
    check_all(ctx, chars)?;
    let terms = (ctx.m() as u64).checked_pow(chars.len() as u32 - 1);
    if terms.is_none_or(|t| t > MAX_FREE_SUM_TERMS) {
        return Err(Error::Capacity(format!(
            "free-sum multiple-Jacobi sum over {} characters at q={}",
            chars.len(),
            ctx.q()
        )));
    }
    let f = ctx.field();
    let m = ctx.m();
    // per free slot: (c, exponent of λ_i(-c)) for c != 0
    let slots: Vec<Vec<(FieldElem, u32)>> = chars[1..]
        .iter()
        .map(|l| {
            f.nonzero()
                .map(|c| (c, ctx.chi_exp(l.index(), f.neg(c)).unwrap()))
                .collect()
        })
        .collect();
    let mut acc = ZetaSum::new(m);
    fn walk(
        ctx: &Ctx,
        lead: u32,
        slots: &[Vec<(FieldElem, u32)>],
        s: FieldElem,
        e: u32,
        acc: &mut ZetaSum,
    ) {
        match slots.split_first() {
            None => {
                if let Some(e1) = ctx.chi_exp(lead, s) {
                    acc.add_root(((e + e1) % ctx.m()) as usize);
                }
            }
            Some((head, rest)) => {
                let f = ctx.field();
                for &(c, ec) in head {
                    walk(ctx, lead, rest, f.add(s, c), (e + ec) % ctx.m(), acc);
                }
            }
        }
    }
    walk(ctx, chars[0].index(), &slots, f.one(), 0, &mut acc);
    Ok(acc.finish(ctx.cyclo(), &BigRational::one()))
}

/// Multiple-Jacobi sum by the pairwise recursion
///
/// ```text
/// J(λ_1..λ_k) = J(λ_1⋯λ_{k-1}, λ_k) · J(λ_1..λ_{k-1})
///             + [k ≥ 3] λ_{k-1}(-1) (q-1) [λ_1⋯λ_{k-1} = ε] · J(λ_1..λ_{k-2})
/// ```
///
/// which costs `k - 1` ordinary Jacobi sums. The correction term comes from
/// the partial sums `c_1 + .. + c_{k-1}` that vanish.
pub fn multi_jacobi_recursive(ctx: &Ctx, chars: &[Character]) -> Result<CycloNum> {
    if chars.is_empty() {
        return domain("multiple-Jacobi sum of zero characters");
    }
    check_all(ctx, chars)?;
    let idx: Vec<u32> = chars.iter().map(|c| c.index()).collect();
    let v = multi_jacobi_int(ctx.cyclo(), ctx.q(), &idx, |a, b| jacobi_int(ctx, a, b));
    Ok(ctx.cyclo().from_int(&v, &BigRational::one()))
}

pub(crate) fn multi_jacobi_int(
    cyclo: &CycloCtx,
    q: u32,
    idx: &[u32],
    mut jac: impl FnMut(u32, u32) -> Vec<i128>,
) -> Vec<i128> {
    let m = q - 1;
    let mut prev: Option<Vec<i128>> = None;
    let mut cur = cyclo.int_one();
    let mut pref = idx[0];
    for k in 1..idx.len() {
        let mut next = cyclo.int_mul(&jac(pref, idx[k]), &cur);
        if pref == 0 {
            if let Some(p) = &prev {
                let sign = if idx[k - 1].is_multiple_of(2) { 1 } else { -1 };
                cyclo.int_add_scaled(&mut next, p, sign * (q as i128 - 1));
            }
        }
        prev = Some(std::mem::replace(&mut cur, next));
        pref = (pref + idx[k]) % m;
    }
    cur
}

pub fn binom(ctx: &Ctx, a: Character, b: Character) -> Result<CycloNum> {
    check_all(ctx, &[a, b])?;
    let scale = ctx.rational(b.at_minus_one(), ctx.q() as i64);
    Ok(ctx.cyclo().from_int(&jacobi_int(ctx, a.index(), b.inv().index()), &scale))
}

fn q_pow(ctx: &Ctx, n: usize) -> BigInt {
    BigInt::from(ctx.q()).pow(n as u32)
}

/// Multinomial coefficient via the free-sum multiple-Jacobi sum.
pub fn multinom(ctx: &Ctx, a: Character, bs: &[Character]) -> Result<CycloNum> {
    if bs.is_empty() {
        return domain("multinomial coefficient needs at least one lower character");
    }
    let mut chars = vec![a];
    chars.extend(bs.iter().map(|b| b.inv()));
    let j = multi_jacobi(ctx, &chars)?;
    let sign: i64 = bs.iter().map(|b| b.at_minus_one()).product();
    Ok(j.scale(&BigRational::new(sign.into(), q_pow(ctx, bs.len()))))
}

/// `binom(A, B_1) binom(AB̄_1, B_2) .. binom(AB̄_1⋯B̄_{n-1}, B_n)`.
pub fn multinom_product(ctx: &Ctx, a: Character, bs: &[Character]) -> Result<CycloNum> {
    check_all(ctx, bs)?;
    let mut acc = ctx.cyclo().one();
    let mut top = a;
    for &b in bs {
        acc = &acc * &binom(ctx, top, b)?;
        top = top.times(b.inv());
    }
    Ok(acc)
}

/// `(B_1⋯B_n)(-1) binom(ĀB_1, B_1) binom(ĀB_1B_2, B_2) .. binom(ĀB_1⋯B_n, B_n)`.
pub fn multinom_signed_product(ctx: &Ctx, a: Character, bs: &[Character]) -> Result<CycloNum> {
    check_all(ctx, bs)?;
    let mut acc = ctx.cyclo().one();
    let mut top = a.inv();
    let mut sign = 1;
    for &b in bs {
        top = top.times(b);
        sign *= b.at_minus_one();
        acc = &acc * &binom(ctx, top, b)?;
    }
    Ok(acc.scale_int(sign))
}

/// Dense table of all `(q-1)^2` Jacobi sums and binomial coefficients.
pub struct BinomialTable {
    m: u32,
    q: u32,
    cyclo: Arc<CycloCtx>,
    /// `J(χ_i, χ_j)` at `i * m + j`.
    jac: Vec<Vec<i128>>,
    /// `binom(χ_i, χ_j)` at `i * m + j`.
    values: Vec<CycloNum>,
}

impl BinomialTable {
    pub fn build(ctx: &Ctx) -> Result<BinomialTable> {
        let m = ctx.m();
        let coeffs = (m as u64).pow(2) * ctx.cyclo().degree() as u64;
        if coeffs > MAX_TABLE_COEFFS {
            return Err(Error::Capacity(format!(
                "binomial table for q={} needs {coeffs} coefficients (limit {MAX_TABLE_COEFFS})",
                ctx.q()
            )));
        }
        let jac: Vec<Vec<i128>> = (0..m)
            .into_par_iter()
            .flat_map_iter(|i| (0..m).map(move |j| (i, j)).collect::<Vec<_>>())
            .map(|(i, j)| jacobi_int(ctx, i, j))
            .collect();
        let q = ctx.q() as i64;
        let values = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let jb = (m - j) % m;
                ctx.cyclo().from_int(&jac[(i * m + jb) as usize], &ctx.rational(sign, q))
            })
            .collect();
        Ok(BinomialTable { m, q: ctx.q(), cyclo: Arc::clone(ctx.cyclo()), jac, values })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn size(&self) -> u32 {
        self.m
    }

    /// `binom(χ_i, χ_j)`.
    pub fn entry(&self, i: u32, j: u32) -> &CycloNum {
        &self.values[((i % self.m) * self.m + j % self.m) as usize]
    }

    pub fn get(&self, a: Character, b: Character) -> &CycloNum {
        self.entry(a.index(), b.index())
    }

    /// `J(χ_i, χ_j)` as a reduced integer vector.
    pub fn jac_int(&self, i: u32, j: u32) -> &[i128] {
        &self.jac[((i % self.m) * self.m + j % self.m) as usize]
    }

    /// `q · binom(χ_i, χ_j)` as a reduced integer vector.
    pub fn q_binom_int(&self, i: u32, j: u32) -> Vec<i128> {
        let jb = (self.m - j % self.m) % self.m;
        let v = self.jac_int(i, jb);
        if j.is_multiple_of(2) {
            v.to_vec()
        } else {
            v.iter().map(|c| -c).collect()
        }
    }

    pub fn cyclo(&self) -> &Arc<CycloCtx> {
        &self.cyclo
    }
}
