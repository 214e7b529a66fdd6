//! Double-precision mirror of the exact evaluators.
//!
//! Values are computed from a table of `e^{2πik/(q-1)}` with the same field
//! arithmetic but no cyclotomic reduction, and serve as an independent
//! cross-check of the exact results. Compare after rescaling by `q^n`, since
//! `F_A^(n)` values carry a denominator `q^n`.

use num_complex::Complex64;

use crate::characters::Character;
use crate::context::Ctx;
use crate::cyclotomic::CycloNum;
use crate::field::FieldElem;
use crate::hypergeometric::SeriesParams;

/// Default absolute tolerance for rescaled comparisons.
pub const TOLERANCE: f64 = 1e-6;

#[derive(Clone)]
pub struct Mirror {
    ctx: Ctx,
    roots: Vec<Complex64>,
}

impl Mirror {
    pub fn new(ctx: &Ctx) -> Mirror {
        let m = ctx.m() as f64;
        let roots = (0..ctx.m())
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m))
            .collect();
        Mirror { ctx: ctx.clone(), roots }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn chi(&self, c: Character, x: FieldElem) -> Complex64 {
        if x.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.ctx.m() as u64;
        let d = self.ctx.field().dlog(x).expect("nonzero element") as u64;
        self.roots[((c.index() as u64 * d) % m) as usize]
    }

    pub fn jacobi(&self, a: Character, b: Character) -> Complex64 {
        let f = self.ctx.field();
        f.elements().map(|x| self.chi(a, x) * self.chi(b, f.sub(f.one(), x))).sum()
    }

    pub fn binom(&self, a: Character, b: Character) -> Complex64 {
        self.jacobi(a, b.inv()) * b.at_minus_one() as f64 / self.ctx.q() as f64
    }

    /// Free-sum multiple-Jacobi sum.
    pub fn multi_jacobi(&self, chars: &[Character]) -> Complex64 {
        let f = self.ctx.field();
        let q = self.ctx.q() as usize;
        let k = chars.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for mut code in 0..q.pow(k as u32 - 1) {
            let mut s = f.one();
            let mut term = Complex64::new(1.0, 0.0);
            for l in &chars[1..] {
                let c = FieldElem((code % q) as u32);
                code /= q;
                s = f.add(s, c);
                term *= self.chi(*l, f.neg(c));
            }
            acc += term * self.chi(chars[0], s);
        }
        acc
    }

    pub fn multinom(&self, a: Character, bs: &[Character]) -> Complex64 {
        let mut chars = vec![a];
        chars.extend(bs.iter().map(|b| b.inv()));
        let sign: i64 = bs.iter().map(|b| b.at_minus_one()).product();
        self.multi_jacobi(&chars) * sign as f64 / (self.ctx.q() as f64).powi(bs.len() as i32)
    }

    fn weight(&self, b: Character, c: Character, t: FieldElem) -> Complex64 {
        let f = self.ctx.field();
        self.chi(b, t) * self.chi(b.inv().times(c), f.sub(f.one(), t))
    }

    fn prefactor(&self, bs: &[Character], cs: &[Character], xs: &[FieldElem]) -> f64 {
        if xs.iter().any(|x| x.is_zero()) {
            return 0.0;
        }
        let sign: i64 = bs.iter().zip(cs).map(|(b, c)| b.times(*c).at_minus_one()).product();
        sign as f64 / (self.ctx.q() as f64).powi(bs.len() as i32)
    }

    /// Calls `f(Σ x_i t_i, Π w_i(t_i))` for every `t ∈ F_q^n`.
    fn points(
        &self,
        bs: &[Character],
        cs: &[Character],
        xs: &[FieldElem],
        f: &mut dyn FnMut(FieldElem, Complex64),
    ) {
        let fld = self.ctx.field();
        let q = self.ctx.q() as usize;
        let n = bs.len();
        for mut code in 0..q.pow(n as u32) {
            let mut s = FieldElem::ZERO;
            let mut w = Complex64::new(1.0, 0.0);
            for i in 0..n {
                let t = FieldElem((code % q) as u32);
                code /= q;
                w *= self.weight(bs[i], cs[i], t);
                s = fld.add(s, fld.mul(xs[i], t));
            }
            f(s, w);
        }
    }

    pub fn lauricella_shifted(
        &self,
        a: Character,
        bs: &[Character],
        cs: &[Character],
        xs: &[FieldElem],
        c0: FieldElem,
    ) -> Complex64 {
        let pre = self.prefactor(bs, cs, xs);
        if pre == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let fld = self.ctx.field();
        let mut acc = Complex64::new(0.0, 0.0);
        self.points(bs, cs, xs, &mut |s, w| acc += w * self.chi(a.inv(), fld.sub(c0, s)));
        acc * pre
    }

    pub fn lauricella(&self, p: &SeriesParams) -> Complex64 {
        self.lauricella_shifted(p.a, &p.bs, &p.cs, &p.xs, self.ctx.field().one())
    }

    pub fn level_weight(
        &self,
        bs: &[Character],
        cs: &[Character],
        xs: &[FieldElem],
        c: FieldElem,
    ) -> Complex64 {
        let pre = self.prefactor(bs, cs, xs);
        if pre == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        self.points(bs, cs, xs, &mut |s, w| {
            if s == c {
                acc += w
            }
        });
        acc * pre
    }
}

/// `|q^n (embed(exact) - approx)|`.
pub fn rescaled_delta(q: u32, n: usize, exact: &CycloNum, approx: Complex64) -> f64 {
    (exact.embed() - approx).norm() * (q as f64).powi(n as i32)
}
