//! Both sides of every identity, written once over a [`Backend`] so the
//! exact evaluation and the float mirror run the same formulas on
//! different arithmetic.

use num_traits::Zero;

use super::{Form, IdentityId, Instance};
use crate::char_sums;
use crate::characters::Character;
use crate::context::Ctx;
use crate::cyclotomic::CycloNum;
use crate::error::Result;
use crate::field::{FieldCtx, FieldElem};
use crate::hypergeometric::{lauricella_fa, lauricella_shifted, level_weight, Route, SeriesParams};
use crate::mirror::Mirror;
use num_complex::Complex64;

pub(crate) trait Backend {
    type V: Clone;
    fn field(&self) -> &FieldCtx;
    fn zero(&self) -> Self::V;
    fn rat(&self, n: i64, d: i64) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn chi(&self, c: Character, x: FieldElem) -> Self::V;
    fn fa(&self, a: Character, bs: &[Character], cs: &[Character], xs: &[FieldElem]) -> Result<Self::V>;
    fn fa_shift(&self, a: Character, bs: &[Character], cs: &[Character], xs: &[FieldElem], c0: FieldElem) -> Self::V;
    fn level(&self, bs: &[Character], cs: &[Character], xs: &[FieldElem], c: FieldElem) -> Self::V;
    fn binom(&self, a: Character, b: Character) -> Result<Self::V>;
    fn jacobi(&self, a: Character, b: Character) -> Result<Self::V>;

    fn prod(&self, vs: &[Self::V]) -> Self::V {
        vs.iter().skip(1).fold(vs[0].clone(), |acc, v| self.mul(&acc, v))
    }
}

pub(crate) struct Exact {
    pub ctx: Ctx,
    pub route: Route,
}

impl Backend for Exact {
    type V = CycloNum;
    fn field(&self) -> &FieldCtx {
        self.ctx.field()
    }
    fn zero(&self) -> CycloNum {
        self.ctx.cyclo().zero()
    }
    fn rat(&self, n: i64, d: i64) -> CycloNum {
        self.ctx.cyclo().from_rational(self.ctx.rational(n, d))
    }
    fn add(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a + b
    }
    fn sub(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a - b
    }
    fn mul(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a * b
    }
    fn chi(&self, c: Character, x: FieldElem) -> CycloNum {
        self.ctx.chi_unchecked(c, x)
    }
    fn fa(&self, a: Character, bs: &[Character], cs: &[Character], xs: &[FieldElem]) -> Result<CycloNum> {
        let p = SeriesParams::new(a, bs.to_vec(), cs.to_vec(), xs.to_vec())?;
        lauricella_fa(&self.ctx, &p, self.route)
    }
    fn fa_shift(&self, a: Character, bs: &[Character], cs: &[Character], xs: &[FieldElem], c0: FieldElem) -> CycloNum {
        lauricella_shifted(&self.ctx, a, bs, cs, xs, c0)
    }
    fn level(&self, bs: &[Character], cs: &[Character], xs: &[FieldElem], c: FieldElem) -> CycloNum {
        level_weight(&self.ctx, bs, cs, xs, c)
    }
    fn binom(&self, a: Character, b: Character) -> Result<CycloNum> {
        char_sums::binom(&self.ctx, a, b)
    }
    fn jacobi(&self, a: Character, b: Character) -> Result<CycloNum> {
        char_sums::jacobi(&self.ctx, a, b)
    }
}

pub(crate) struct Float<'a> {
    pub mir: &'a Mirror,
}

impl Backend for Float<'_> {
    type V = Complex64;
    fn field(&self) -> &FieldCtx {
        self.mir.ctx().field()
    }
    fn zero(&self) -> Complex64 {
        Complex64::zero()
    }
    fn rat(&self, n: i64, d: i64) -> Complex64 {
        Complex64::new(n as f64 / d as f64, 0.0)
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn chi(&self, c: Character, x: FieldElem) -> Complex64 {
        self.mir.chi(c, x)
    }
    fn fa(&self, a: Character, bs: &[Character], cs: &[Character], xs: &[FieldElem]) -> Result<Complex64> {
        Ok(self.mir.lauricella_shifted(a, bs, cs, xs, self.field().one()))
    }
    fn fa_shift(&self, a: Character, bs: &[Character], cs: &[Character], xs: &[FieldElem], c0: FieldElem) -> Complex64 {
        self.mir.lauricella_shifted(a, bs, cs, xs, c0)
    }
    fn level(&self, bs: &[Character], cs: &[Character], xs: &[FieldElem], c: FieldElem) -> Complex64 {
        self.mir.level_weight(bs, cs, xs, c)
    }
    fn binom(&self, a: Character, b: Character) -> Result<Complex64> {
        Ok(self.mir.binom(a, b))
    }
    fn jacobi(&self, a: Character, b: Character) -> Result<Complex64> {
        Ok(self.mir.jacobi(a, b))
    }
}

fn rm<T: Copy>(v: &[T], k: usize) -> Vec<T> {
    v.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect()
}

fn scaled(f: &FieldCtx, xs: &[FieldElem], c: FieldElem) -> Vec<FieldElem> {
    xs.iter().map(|&x| f.mul(x, c)).collect()
}

pub(crate) fn lhs<B: Backend>(be: &B, inst: &Instance) -> Result<B::V> {
    let p = &inst.params;
    let f = be.field();
    let q = f.q() as i64;
    let fa = |a, bs: &[Character], xs: &[FieldElem]| be.fa(a, bs, &p.cs, xs);
    match inst.id {
        IdentityId::ReductionSplit
        | IdentityId::ReductionCov1
        | IdentityId::EpsReduction
        | IdentityId::EqualReduction => fa(p.a, &p.bs, &p.xs),
        IdentityId::ReductionCov2 => {
            let (k, t) = (inst.k_idx(), inst.t_elem());
            let mut ys = scaled(f, &p.xs, t);
            ys[k] = f.sub(f.one(), f.div(t, p.xs[k])?);
            fa(p.a, &p.bs, &ys)
        }
        IdentityId::GenfuncForward | IdentityId::GenfuncReversed | IdentityId::GenfuncLocal => {
            let t = inst.t_elem();
            let mut acc = be.zero();
            for j in 0..f.order() {
                let theta = Character::new(f, j as i64);
                let term = match inst.id {
                    IdentityId::GenfuncForward => {
                        let at = p.a.times(theta);
                        be.mul(&be.binom(at, theta)?, &fa(at, &p.bs, &p.xs)?)
                    }
                    IdentityId::GenfuncReversed => {
                        let at = p.a.times(theta);
                        be.mul(&be.binom(at, theta)?, &fa(theta.inv(), &p.bs, &p.xs)?)
                    }
                    _ => {
                        let k = inst.k_idx();
                        let top = p.bs[k].times(p.cs[k].inv()).times(theta);
                        let mut bs = p.bs.clone();
                        bs[k] = bs[k].times(theta);
                        be.mul(&be.binom(top, theta)?, &fa(p.a, &bs, &p.xs)?)
                    }
                };
                acc = be.add(&acc, &be.mul(&term, &be.chi(theta, t)));
            }
            Ok(be.mul(&acc, &be.rat(q, q - 1)))
        }
    }
}

pub(crate) fn rhs<B: Backend>(be: &B, inst: &Instance, form: Form) -> Result<B::V> {
    let p = &inst.params;
    let f = be.field();
    let q = f.q() as i64;
    let one = f.one();
    let m1 = f.minus_one();
    let eps = Character::trivial(f);
    let a = p.a;
    let abar = a.inv();
    match inst.id {
        IdentityId::ReductionSplit | IdentityId::ReductionCov1 => {
            let (k, l) = (inst.k_idx(), inst.l_idx());
            let (bk, ck, xk) = (p.bs[k], p.cs[k], p.xs[k]);
            let pterm = p_term(be, p, k, l)?;
            let (bs_k, cs_k, xs_k) = (rm(&p.bs, k), rm(&p.cs, k), rm(&p.xs, k));
            let mut sum = be.zero();
            for tk in f.elements() {
                let term = if inst.id == IdentityId::ReductionSplit {
                    let d = f.sub(one, f.mul(xk, tk));
                    if d.is_zero() {
                        continue;
                    }
                    let w = be.prod(&[
                        be.chi(bk, tk),
                        be.chi(bk.inv().times(ck), f.sub(one, tk)),
                        be.chi(abar, d),
                    ]);
                    be.mul(&w, &be.fa(a, &bs_k, &cs_k, &scaled(f, &xs_k, f.inv(d)?))?)
                } else {
                    let w = be.prod(&[
                        be.chi(a.times(ck.inv()), tk),
                        be.chi(bk, f.sub(tk, one)),
                        be.chi(bk.inv().times(ck), f.add(f.sub(one, tk), f.mul(xk, tk))),
                    ]);
                    be.mul(&w, &be.fa(a, &bs_k, &cs_k, &scaled(f, &xs_k, tk))?)
                };
                sum = be.add(&sum, &term);
            }
            let mut pre = be.mul(&be.chi(bk.times(ck), m1), &be.rat(1, q));
            if inst.id == IdentityId::ReductionCov1 {
                pre = be.mul(&pre, &be.chi(ck.inv(), xk));
            } else if form == Form::Corrected {
                pre = be.mul(&pre, &be.chi(eps, xk));
            }
            Ok(be.add(&pterm, &be.mul(&pre, &sum)))
        }
        IdentityId::ReductionCov2 => {
            let (k, l, t) = (inst.k_idx(), inst.l_idx(), inst.t_elem());
            let (bk, ck, xk) = (p.bs[k], p.cs[k], p.xs[k]);
            let (cl, xl) = (p.cs[l], p.xs[l]);
            let mut bs2 = p.bs.clone();
            bs2[l] = p.bs[l].inv().times(cl);
            let (pre, arg_scale) = match form {
                Form::Printed => (
                    be.prod(&[
                        be.chi(abar.times(bk).times(ck).times(cl), m1),
                        be.rat(1, q),
                        be.chi(abar, f.mul(xl, t)),
                        be.chi(bk, xk),
                        be.chi(bk.inv(), f.sub(xk, t)),
                    ]),
                    f.neg(f.div(t, xl)?),
                ),
                Form::Corrected => (
                    be.prod(&[
                        be.chi(abar.times(cl), m1),
                        be.rat(1, q),
                        be.chi(abar, f.mul(xl, t)),
                        be.chi(bk.inv().times(ck), t),
                        be.chi(bk, xk),
                        be.chi(ck.inv(), f.sub(xk, t)),
                    ]),
                    f.neg(f.inv(xl)?),
                ),
            };
            let mut xs2 = scaled(f, &p.xs, arg_scale);
            xs2[l] = one;
            let pterm = be.mul(&pre, &be.fa(a, &rm(&bs2, k), &rm(&p.cs, k), &rm(&xs2, k))?);
            let (bs_k, cs_k, xs_k) = (rm(&p.bs, k), rm(&p.cs, k), rm(&p.xs, k));
            let mut sum = be.zero();
            for u in f.elements() {
                let w = be.prod(&[
                    be.chi(a.times(ck.inv()), u),
                    be.chi(bk, f.sub(u, t)),
                    be.chi(bk.inv().times(ck), f.sub(xk, u)),
                ]);
                sum = be.add(&sum, &be.mul(&w, &be.fa(a, &bs_k, &cs_k, &scaled(f, &xs_k, u))?));
            }
            let qpre = be.prod(&[
                be.chi(bk.times(ck), m1),
                be.rat(1, q),
                be.chi(ck.inv(), f.sub(xk, t)),
                be.chi(bk, xk),
                be.chi(abar.times(bk.inv()).times(ck), t),
            ]);
            Ok(be.add(&pterm, &be.mul(&qpre, &sum)))
        }
        IdentityId::EpsReduction => {
            let k = inst.k_idx();
            let (ck, xk) = (p.cs[k], p.xs[k]);
            let (bs_k, cs_k, xs_k) = (rm(&p.bs, k), rm(&p.cs, k), rm(&p.xs, k));
            let d = f.sub(one, xk);
            let shifted = scaled(f, &xs_k, f.inv(d)?);
            let f_shift = be.fa(a.times(ck.inv()), &bs_k, &cs_k, &shifted)?;
            let f_plain = be.fa(a, &bs_k, &cs_k, &xs_k)?;
            let bracket = match form {
                Form::Printed => be.sub(&f_shift, &f_plain),
                Form::Corrected => {
                    let first = be.prod(&[
                        be.chi(ck, m1),
                        be.chi(ck.inv(), xk),
                        be.chi(abar.times(ck), d),
                        be.jacobi(abar, ck)?,
                        f_shift,
                    ]);
                    let mut acc = be.sub(&first, &f_plain);
                    if a == ck {
                        let w = be.prod(&[
                            be.rat(q - 1, 1),
                            be.chi(ck.inv(), xk),
                            be.level(&bs_k, &cs_k, &xs_k, d),
                        ]);
                        acc = be.add(&acc, &w);
                    }
                    acc
                }
            };
            Ok(be.prod(&[be.chi(eps, xk), be.chi(ck, m1), be.rat(1, q), bracket]))
        }
        IdentityId::EqualReduction => {
            let k = inst.k_idx();
            let (bk, xk) = (p.bs[k], p.xs[k]);
            let (bs_k, cs_k, xs_k) = (rm(&p.bs, k), rm(&p.cs, k), rm(&p.xs, k));
            let d = f.sub(one, xk);
            let f_minus = be.fa(a, &bs_k, &cs_k, &scaled(f, &xs_k, f.inv(d)?))?;
            let bracket = match form {
                Form::Printed => {
                    let f_top = be.fa(bk.inv(), &bs_k, &cs_k, &scaled(f, &xs_k, f.inv(xk)?))?;
                    be.mul(&be.chi(abar, d), &be.sub(&f_top, &f_minus))
                }
                Form::Corrected => {
                    let first = be.prod(&[
                        be.chi(bk.inv(), xk),
                        be.jacobi(bk, abar)?,
                        be.fa(a.times(bk.inv()), &bs_k, &cs_k, &xs_k)?,
                    ]);
                    let mut acc = be.sub(&first, &be.mul(&be.chi(abar, d), &f_minus));
                    if a == bk {
                        let w = be.prod(&[
                            be.rat(q - 1, 1),
                            be.chi(abar, f.neg(xk)),
                            be.level(&bs_k, &cs_k, &xs_k, one),
                        ]);
                        acc = be.add(&acc, &w);
                    }
                    acc
                }
            };
            Ok(be.prod(&[be.chi(eps, xk), be.rat(1, q), bracket]))
        }
        IdentityId::GenfuncForward | IdentityId::GenfuncReversed => {
            let t = inst.t_elem();
            let d = f.sub(one, t);
            let c = if inst.id == IdentityId::GenfuncForward {
                f.inv(d)?
            } else {
                f.neg(f.div(t, d)?)
            };
            let main = be.mul(&be.chi(abar, d), &be.fa(a, &p.bs, &p.cs, &scaled(f, &p.xs, c))?);
            match form {
                Form::Printed => Ok(main),
                Form::Corrected => {
                    let mut w = be.level(&p.bs, &p.cs, &p.xs, one);
                    if inst.id == IdentityId::GenfuncForward {
                        w = be.mul(&w, &be.chi(abar, f.neg(t)));
                    }
                    Ok(be.sub(&main, &w))
                }
            }
        }
        IdentityId::GenfuncLocal => {
            let (k, t) = (inst.k_idx(), inst.t_elem());
            let (bk, ck, xk) = (p.bs[k], p.cs[k], p.xs[k]);
            let d = f.sub(one, t);
            let mut xs2 = p.xs.clone();
            xs2[k] = f.div(xk, d)?;
            let main = be.mul(&be.chi(bk.inv(), d), &be.fa(a, &p.bs, &p.cs, &xs2)?);
            match form {
                Form::Printed => Ok(main),
                Form::Corrected => {
                    let corr = be.prod(&[
                        be.chi(eps, xk),
                        be.chi(bk.times(ck), m1),
                        be.rat(1, q),
                        be.chi(bk.inv().times(ck), t),
                        be.fa_shift(a, &rm(&p.bs, k), &rm(&p.cs, k), &rm(&p.xs, k), f.sub(one, xk)),
                    ]);
                    Ok(be.sub(&main, &corr))
                }
            }
        }
    }
}

/// The first term of the split and first change-of-variables reductions:
/// slot `k` removed, slot `l` replaced by `(B̄_lC_l; C_l; 1)`, the other
/// arguments mapped to `-x_i/x_l`.
fn p_term<B: Backend>(be: &B, p: &SeriesParams, k: usize, l: usize) -> Result<B::V> {
    let f = be.field();
    let q = f.q() as i64;
    let one = f.one();
    let (bk, ck, xk) = (p.bs[k], p.cs[k], p.xs[k]);
    let (cl, xl) = (p.cs[l], p.xs[l]);
    let pre = be.prod(&[
        be.chi(bk.times(ck), f.minus_one()),
        be.rat(1, q),
        be.chi(bk.inv().times(ck), f.sub(xk, one)),
        be.chi(ck.inv(), xk),
        be.chi(p.a.inv(), f.neg(xl)),
        be.chi(cl, f.minus_one()),
    ]);
    let mut bs2 = p.bs.clone();
    bs2[l] = p.bs[l].inv().times(cl);
    let mut xs2 = scaled(f, &p.xs, f.neg(f.inv(xl)?));
    xs2[l] = one;
    let v = be.fa(p.a, &rm(&bs2, k), &rm(&p.cs, k), &rm(&xs2, k))?;
    Ok(be.mul(&pre, &v))
}
