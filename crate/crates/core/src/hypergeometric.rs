//! Greene's `2F1` and `n+1Fn`, and the Lauricella series `F_A^(n)` over `F_q`.
//!
//! `F_A^(n)[A; B_1..B_n; C_1..C_n | x_1..x_n]` is the point sum
//!
//! ```text
//! Σ_{t ∈ F_q^n} Π_i [ε(x_i) B_iC_i(-1)/q · B_i(t_i) B̄_iC_i(1-t_i)] · Ā(1 - x_1t_1 - .. - x_nt_n)
//! ```
//!
//! evaluated three ways (see [`Route`]). Appell's `F2` is the case `n = 2`
//! and Greene's `2F1` the case `n = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::char_sums::BinomialTable;
use crate::characters::Character;
use crate::context::Ctx;
use crate::cyclotomic::{CycloCtx, CycloNum, ZetaSum};
use crate::error::{domain, Error, Result};
use crate::field::FieldElem;

/// Evaluation algorithm for [`lauricella_fa`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// The defining point sum, `O(q^n)` terms.
    Direct,
    /// Character expansion with coefficient `J(Ā, χ̄_1, .., χ̄_n)/q^n`, table
    /// driven, `O((q-1)^n)`.
    Charsum,
    /// Character expansion with the coefficient written as the telescoping
    /// product `Π_j binom(Aχ_1⋯χ_j, χ_j)`. It agrees with the other routes
    /// for `n = 1`, and for `n ≥ 2` whenever no partial product
    /// `Aχ_1⋯χ_j` (`j < n`) is trivial.
    BinomialProduct,
    /// `Charsum` if the context already holds a binomial table, else `Direct`.
    Auto,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Route> {
        match s {
            "direct" => Ok(Route::Direct),
            "charsum" => Ok(Route::Charsum),
            "product" | "binomial_product" => Ok(Route::BinomialProduct),
            "auto" => Ok(Route::Auto),
            _ => Err(Error::Parse(format!("unknown route `{s}`"))),
        }
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Direct => "direct",
            Route::Charsum => "charsum",
            Route::BinomialProduct => "product",
            Route::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussRoute {
    Direct,
    Charsum,
}

/// Parameters `(A; B_1..B_n; C_1..C_n | x_1..x_n)` of `F_A^(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesParams {
    pub a: Character,
    pub bs: Vec<Character>,
    pub cs: Vec<Character>,
    pub xs: Vec<FieldElem>,
}

/// Serialized form of [`SeriesParams`]: characters as `chi<j>`, elements
/// in the field's literal syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub bs: Vec<String>,
    #[serde(rename = "C")]
    pub cs: Vec<String>,
    pub x: Vec<String>,
}

impl SeriesParams {
    pub fn new(
        a: Character,
        bs: Vec<Character>,
        cs: Vec<Character>,
        xs: Vec<FieldElem>,
    ) -> Result<SeriesParams> {
        if bs.is_empty() {
            return domain("F_A^(n) needs n >= 1");
        }
        if bs.len() != cs.len() || bs.len() != xs.len() {
            return domain(format!(
                "inconsistent lengths: {} B, {} C, {} x",
                bs.len(),
                cs.len(),
                xs.len()
            ));
        }
        Ok(SeriesParams { a, bs, cs, xs })
    }

    /// Parses `chi<j>` characters and comma-separated lists.
    pub fn parse(ctx: &Ctx, a: &str, bs: &str, cs: &str, xs: &str) -> Result<SeriesParams> {
        let f = ctx.field();
        let xs = xs
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| f.parse_elem(t))
            .collect::<Result<Vec<_>>>()?;
        SeriesParams::new(
            Character::parse(f, a)?,
            Character::parse_list(f, bs)?,
            Character::parse_list(f, cs)?,
            xs,
        )
    }

    pub fn n(&self) -> usize {
        self.bs.len()
    }

    pub(crate) fn check(&self, ctx: &Ctx) -> Result<()> {
        ctx.check(self.a)?;
        for &c in self.bs.iter().chain(&self.cs) {
            ctx.check(c)?;
        }
        self.xs.iter().try_for_each(|&x| ctx.check_elem(x))
    }

    /// Simultaneously permutes the slots: slot `i` of the result is slot
    /// `sigma[i]` of `self` (0-based).
    pub fn permute(&self, sigma: &[usize]) -> Result<SeriesParams> {
        let n = self.n();
        let mut seen = vec![false; n];
        if sigma.len() != n || !sigma.iter().all(|&s| s < n && !std::mem::replace(&mut seen[s], true)) {
            return domain(format!("{sigma:?} is not a permutation of 0..{n}"));
        }
        Ok(SeriesParams {
            a: self.a,
            bs: sigma.iter().map(|&s| self.bs[s]).collect(),
            cs: sigma.iter().map(|&s| self.cs[s]).collect(),
            xs: sigma.iter().map(|&s| self.xs[s]).collect(),
        })
    }

    pub fn to_json(&self, ctx: &Ctx) -> ParamsJson {
        let f = ctx.field();
        ParamsJson {
            a: self.a.to_string(),
            bs: self.bs.iter().map(|c| c.to_string()).collect(),
            cs: self.cs.iter().map(|c| c.to_string()).collect(),
            x: self.xs.iter().map(|&x| f.format_elem(x)).collect(),
        }
    }
}

fn q_pow(q: u32, n: usize) -> BigInt {
    BigInt::from(q).pow(n as u32)
}

/// `Π_i ε(x_i) B_iC_i(-1) / q`, or `None` when some `x_i = 0`.
fn point_prefactor(ctx: &Ctx, bs: &[Character], cs: &[Character], xs: &[FieldElem]) -> Option<BigRational> {
    if xs.iter().any(|x| x.is_zero()) {
        return None;
    }
    let sign: i64 = bs.iter().zip(cs).map(|(b, c)| b.times(*c).at_minus_one()).product();
    Some(BigRational::new(sign.into(), q_pow(ctx.q(), bs.len())))
}

/// Per slot, the pairs `(x t, e)` with `B(t) B̄C(1-t) = ζ^e`, for `t ∉ {0, 1}`.
fn slot_terms(ctx: &Ctx, b: Character, c: Character, x: FieldElem) -> Vec<(FieldElem, u32)> {
    let f = ctx.field();
    let m = ctx.m();
    let bc = b.inv().times(c).index();
    f.nonzero()
        .filter_map(|t| {
            let u = f.sub(f.one(), t);
            let eu = ctx.chi_exp(bc, u)?;
            let e = (ctx.chi_exp(b.index(), t).unwrap() + eu) % m;
            Some((f.mul(x, t), e))
        })
        .collect()
}

fn walk_points(
    ctx: &Ctx,
    slots: &[Vec<(FieldElem, u32)>],
    s: FieldElem,
    e: u32,
    leaf: &mut dyn FnMut(FieldElem, u32),
) {
    match slots.split_first() {
        None => leaf(s, e),
        Some((head, rest)) => {
            let f = ctx.field();
            let m = ctx.m();
            for &(y, ey) in head {
                walk_points(ctx, rest, f.add(s, y), (e + ey) % m, leaf);
            }
        }
    }
}

fn all_slots(ctx: &Ctx, bs: &[Character], cs: &[Character], xs: &[FieldElem]) -> Vec<Vec<(FieldElem, u32)>> {
    bs.iter()
        .zip(cs)
        .zip(xs)
        .map(|((&b, &c), &x)| slot_terms(ctx, b, c, x))
        .collect()
}

/// The point sum with `Ā(c0 - Σ x_i t_i)` in place of `Ā(1 - Σ x_i t_i)`,
/// so `c0 = 1` gives `F_A^(n)`. Any `n ≥ 0` is accepted; for `n = 0` the
/// value is `Ā(c0)`.
pub fn lauricella_shifted(
    ctx: &Ctx,
    a: Character,
    bs: &[Character],
    cs: &[Character],
    xs: &[FieldElem],
    c0: FieldElem,
) -> CycloNum {
    let Some(scale) = point_prefactor(ctx, bs, cs, xs) else {
        return ctx.cyclo().zero();
    };
    let f = ctx.field();
    let m = ctx.m();
    let abar = a.inv().index();
    let mut hist = ZetaSum::new(m);
    walk_points(ctx, &all_slots(ctx, bs, cs, xs), FieldElem::ZERO, 0, &mut |s, e| {
        if let Some(eu) = ctx.chi_exp(abar, f.sub(c0, s)) {
            hist.add_root(((e + eu) % m) as usize);
        }
    });
    hist.finish(ctx.cyclo(), &scale)
}

/// Level-set weight `W(c)`: the point-sum weights `Π_i w_i(t_i)` (with the
/// same prefactors as `F_A^(n)`) summed over `x_1t_1 + .. + x_nt_n = c`.
/// For `n = 0` this is `[c = 0]`.
pub fn level_weight(
    ctx: &Ctx,
    bs: &[Character],
    cs: &[Character],
    xs: &[FieldElem],
    c: FieldElem,
) -> CycloNum {
    let Some(scale) = point_prefactor(ctx, bs, cs, xs) else {
        return ctx.cyclo().zero();
    };
    let mut hist = ZetaSum::new(ctx.m());
    walk_points(ctx, &all_slots(ctx, bs, cs, xs), FieldElem::ZERO, 0, &mut |s, e| {
        if s == c {
            hist.add_root(e as usize);
        }
    });
    hist.finish(ctx.cyclo(), &scale)
}

/// `F_A^(n)` by the chosen route.
pub fn lauricella_fa(ctx: &Ctx, p: &SeriesParams, route: Route) -> Result<CycloNum> {
    p.check(ctx)?;
    let route = match route {
        Route::Auto if ctx.has_table() => Route::Charsum,
        Route::Auto => Route::Direct,
        r => r,
    };
    match route {
        Route::Direct => Ok(lauricella_shifted(ctx, p.a, &p.bs, &p.cs, &p.xs, ctx.field().one())),
        Route::Charsum => charsum_exact(ctx, p),
        Route::BinomialProduct => charsum_product(ctx, p),
        Route::Auto => unreachable!(),
    }
}

/// Per slot and character `χ_s`: `q · binom(Bχ_s, Cχ_s) · χ_s(x)`.
fn slot_factors(ctx: &Ctx, table: &BinomialTable, b: Character, c: Character, x: FieldElem) -> Vec<Vec<i128>> {
    let cy = ctx.cyclo();
    let m = ctx.m();
    let dx = ctx.field().dlog_unchecked(x) as i64;
    let mut wide = vec![0i128; cy.wide_len()];
    (0..m)
        .map(|s| {
            // q·binom(χ_i, χ_j) = χ_j(-1) J(χ_i, χ̄_j), and χ_j(-1) = (-1)^j
            let (i, j) = ((b.index() + s) % m, (c.index() + s) % m);
            let mut out = vec![0i128; cy.degree()];
            cy.int_mul_to(&mut out, table.jac_int(i, (m - j) % m), cy.int_zeta(s as i64 * dx), &mut wide);
            if j % 2 == 1 {
                out.iter_mut().for_each(|v| *v = -*v);
            }
            out
        })
        .collect()
}

fn charsum_scale(ctx: &Ctx, n: usize) -> BigRational {
    let q = ctx.q();
    BigRational::new(BigInt::one(), q_pow(q, n) * q_pow(q - 1, n))
}

/// Exact character expansion
///
/// ```text
/// F = (q/(q-1))^n Σ_{χ_1..χ_n} J(Ā, χ̄_1, .., χ̄_n)/q^n · Π_i binom(B_iχ_i, C_iχ_i) χ_i(x_i)
/// ```
///
/// The multiple-Jacobi factor is built incrementally along the tuple walk by
/// the pairwise recursion of [`crate::char_sums::multi_jacobi_recursive`]; the
/// walk state at depth `d` is `M = J_{d+1} P_d` and `M' = J_d P_d`, where
/// `J_d` is the multiple-Jacobi sum of the first `d` characters and `P_d` the
/// product of the first `d` slot factors. The last slot is summed in closed
/// form through `H(λ) = Σ_s J(λ, χ̄_s) g_n(s)`.
fn charsum_exact(ctx: &Ctx, p: &SeriesParams) -> Result<CycloNum> {
    if p.xs.iter().any(|x| x.is_zero()) {
        return Ok(ctx.cyclo().zero());
    }
    let table = ctx.table()?;
    let cy = ctx.cyclo();
    let m = ctx.m();
    let n = p.n();
    let deg = cy.degree();
    let g: Vec<Vec<Vec<i128>>> = (0..n)
        .map(|i| slot_factors(ctx, &table, p.bs[i], p.cs[i], p.xs[i]))
        .collect();
    let last = &g[n - 1];
    // products are summed unreduced and reduced once per sum
    let mut wide = vec![0i128; cy.wide_len()];
    let mut h = vec![0i128; m as usize * deg];
    for (lam, out) in h.chunks_exact_mut(deg).enumerate() {
        wide.fill(0);
        for (s, gs) in last.iter().enumerate() {
            cy.int_fma(&mut wide, table.jac_int(lam as u32, (m - s as u32) % m), gs, 1);
        }
        cy.int_reduce_wide(&mut wide);
        out.copy_from_slice(&wide[..deg]);
    }
    let mut g_sum = vec![0i128; deg];
    for gs in last {
        cy.int_add_assign(&mut g_sum, gs);
    }

    struct Walk<'a> {
        cy: &'a CycloCtx,
        table: &'a BinomialTable,
        g: &'a [Vec<Vec<i128>>],
        h: &'a [i128],
        g_sum: &'a [i128],
        m: u32,
        deg: usize,
        corr: i128,
        total: Vec<i128>,
    }

    impl Walk<'_> {
        // `pref` = index of λ_1⋯λ_{d+1}, `last` = index of λ_{d+1}
        fn go(&mut self, d: usize, pref: u32, last: u32, mm: &[i128], mp: Option<&[i128]>) {
            let cy = self.cy;
            let deg = self.deg;
            let sign = if last.is_multiple_of(2) { 1 } else { -1 };
            if d == self.g.len() - 1 {
                let hp = &self.h[pref as usize * deg..][..deg];
                cy.int_fma(&mut self.total, mm, hp, 1);
                if let (0, Some(mp)) = (pref, mp) {
                    cy.int_fma(&mut self.total, mp, self.g_sum, sign * self.corr);
                }
                return;
            }
            let mut wide = vec![0i128; cy.wide_len()];
            let mut j_next = vec![0i128; deg];
            let mut m_new = vec![0i128; deg];
            let mut mp_new = vec![0i128; deg];
            for s in 0..self.m {
                let lam = (self.m - s) % self.m;
                let jac = self.table.jac_int(pref, lam);
                if d == 0 {
                    j_next.copy_from_slice(jac);
                } else {
                    cy.int_mul_to(&mut j_next, jac, mm, &mut wide);
                }
                if let (0, Some(mp)) = (pref, mp) {
                    cy.int_add_scaled(&mut j_next, mp, sign * self.corr);
                }
                let gs = &self.g[d][s as usize];
                cy.int_mul_to(&mut m_new, &j_next, gs, &mut wide);
                let pref_new = (pref + lam) % self.m;
                let mp_arg = if pref_new == 0 {
                    cy.int_mul_to(&mut mp_new, mm, gs, &mut wide);
                    Some(&mp_new[..])
                } else {
                    None
                };
                self.go(d + 1, pref_new, lam, &m_new, mp_arg);
            }
        }
    }

    let mut w = Walk {
        cy,
        table: &table,
        g: &g,
        h: &h,
        g_sum: &g_sum,
        m,
        deg,
        corr: ctx.q() as i128 - 1,
        total: vec![0i128; cy.wide_len()],
    };
    let abar = p.a.inv().index();
    w.go(0, abar, abar, &cy.int_one(), None);
    let mut total = w.total;
    cy.int_reduce_wide(&mut total);
    Ok(cy.from_int(&total[..deg], &charsum_scale(ctx, n)))
}

/// Character expansion with the coefficient written as
/// `Π_j binom(Aχ_1⋯χ_j, χ_j)`, walked with a running prefix product.
fn charsum_product(ctx: &Ctx, p: &SeriesParams) -> Result<CycloNum> {
    if p.xs.iter().any(|x| x.is_zero()) {
        return Ok(ctx.cyclo().zero());
    }
    let table = ctx.table()?;
    let cy = ctx.cyclo();
    let m = ctx.m();
    let n = p.n();
    let g: Vec<Vec<Vec<i128>>> = (0..n)
        .map(|i| slot_factors(ctx, &table, p.bs[i], p.cs[i], p.xs[i]))
        .collect();
    // h[top] = Σ_s q·binom(top·χ_s, χ_s) g_n(s)
    let h: Vec<Vec<i128>> = (0..m)
        .map(|top| {
            let mut acc = vec![0i128; cy.degree()];
            for (s, gs) in g[n - 1].iter().enumerate() {
                let b = table.q_binom_int(top + s as u32, s as u32);
                cy.int_add_assign(&mut acc, &cy.int_mul(&b, gs));
            }
            acc
        })
        .collect();
    let mut total = vec![0i128; cy.degree()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        cy: &CycloCtx,
        table: &BinomialTable,
        g: &[Vec<Vec<i128>>],
        h: &[Vec<i128>],
        d: usize,
        top: u32,
        acc: &[i128],
        total: &mut [i128],
    ) {
        let m = table.size();
        if d == g.len() - 1 {
            cy.int_add_assign(total, &cy.int_mul(acc, &h[top as usize]));
            return;
        }
        for s in 0..m {
            let top_new = (top + s) % m;
            let f = cy.int_mul(&table.q_binom_int(top_new, s), &g[d][s as usize]);
            go(cy, table, g, h, d + 1, top_new, &cy.int_mul(acc, &f), total);
        }
    }
    go(cy, &table, &g, &h, 0, p.a.index(), &cy.int_one(), &mut total);
    Ok(cy.from_int(&total, &charsum_scale(ctx, n)))
}

/// Greene's `2F1[A, B; C | x]`.
///
/// The direct route is `ε(x) BC(-1)/q Σ_y B(y) B̄C(1-y) Ā(1-xy)`; the
/// character route is `q/(q-1) Σ_χ binom(Aχ, χ) binom(Bχ, Cχ) χ(x)`. Both
/// use plain `CycloNum` arithmetic and share no code with [`lauricella_fa`].
pub fn gauss_2f1(
    ctx: &Ctx,
    a: Character,
    b: Character,
    c: Character,
    x: FieldElem,
    route: GaussRoute,
) -> Result<CycloNum> {
    for ch in [a, b, c] {
        ctx.check(ch)?;
    }
    ctx.check_elem(x)?;
    let f = ctx.field();
    let cy = ctx.cyclo();
    match route {
        GaussRoute::Direct => {
            if x.is_zero() {
                return Ok(cy.zero());
            }
            let bc = b.inv().times(c);
            let mut acc = cy.zero();
            for y in f.elements() {
                let term = ctx.chi_unchecked(b, y)
                    * ctx.chi_unchecked(bc, f.sub(f.one(), y))
                    * ctx.chi_unchecked(a.inv(), f.sub(f.one(), f.mul(x, y)));
                acc = acc + term;
            }
            let sign = b.times(c).at_minus_one();
            Ok(acc.scale(&ctx.rational(sign, ctx.q() as i64)))
        }
        GaussRoute::Charsum => {
            let table = ctx.table()?;
            let mut acc = cy.zero();
            for chi in ctx.characters() {
                let term = table.get(a.times(chi), chi)
                    * table.get(b.times(chi), c.times(chi))
                    * ctx.chi_unchecked(chi, x);
                acc = acc + term;
            }
            Ok(acc.scale(&ctx.rational(ctx.q() as i64, ctx.m() as i64)))
        }
    }
}

/// Greene's `n+1Fn[A_0, .., A_n; B_1, .., B_n | x]
/// = q/(q-1) Σ_χ binom(A_0χ, χ) Π_i binom(A_iχ, B_iχ) χ(x)`.
pub fn hyper_np1_fn(ctx: &Ctx, tops: &[Character], bottoms: &[Character], x: FieldElem) -> Result<CycloNum> {
    if tops.len() != bottoms.len() + 1 || bottoms.is_empty() {
        return domain(format!(
            "n+1Fn needs n+1 upper and n >= 1 lower characters, got {} and {}",
            tops.len(),
            bottoms.len()
        ));
    }
    for &ch in tops.iter().chain(bottoms) {
        ctx.check(ch)?;
    }
    ctx.check_elem(x)?;
    let table = ctx.table()?;
    let mut acc = ctx.cyclo().zero();
    if x.is_zero() {
        return Ok(acc);
    }
    for chi in ctx.characters() {
        let mut term = table.get(tops[0].times(chi), chi) * &ctx.chi_unchecked(chi, x);
        for (a, b) in tops[1..].iter().zip(bottoms) {
            term = term * table.get(a.times(chi), b.times(chi));
        }
        acc = acc + term;
    }
    Ok(acc.scale(&ctx.rational(ctx.q() as i64, ctx.m() as i64)))
}

/// Appell `F2[A; B_1, B_2; C_1, C_2 | x_1, x_2]`, i.e. `F_A^(2)`.
#[allow(clippy::too_many_arguments)]
pub fn appell_f2(
    ctx: &Ctx,
    a: Character,
    b: [Character; 2],
    c: [Character; 2],
    x: [FieldElem; 2],
    route: Route,
) -> Result<CycloNum> {
    let p = SeriesParams::new(a, b.to_vec(), c.to_vec(), x.to_vec())?;
    lauricella_fa(ctx, &p, route)
}

/// The two-variable Appell point sum `F2`, without the `1/q^2` normalization:
/// It equals `q^2 · F_A^(2)`.
/// It carries no `1/q^2`, so it equals `q^2 · F_A^(2)`.
pub fn appell_f2_point_sum(
    ctx: &Ctx,
    a: Character,
    b: [Character; 2],
    c: [Character; 2],
    x: [FieldElem; 2],
) -> Result<CycloNum> {
    for ch in [a, b[0], b[1], c[0], c[1]] {
        ctx.check(ch)?;
    }
    let f = ctx.field();
    let cy = ctx.cyclo();
    if x[0].is_zero() || x[1].is_zero() {
        return Ok(cy.zero());
    }
    let one = f.one();
    let w = |i: usize, t: FieldElem| {
        ctx.chi_unchecked(b[i], t) * ctx.chi_unchecked(b[i].inv().times(c[i]), f.sub(one, t))
    };
    let mut acc = cy.zero();
    for t1 in f.elements() {
        let w1 = w(0, t1);
        if w1.is_zero() {
            continue;
        }
        for t2 in f.elements() {
            let s = f.add(f.mul(x[0], t1), f.mul(x[1], t2));
            acc = acc + &w1 * &w(1, t2) * ctx.chi_unchecked(a.inv(), f.sub(one, s));
        }
    }
    let sign = b[0].times(b[1]).times(c[0]).times(c[1]).at_minus_one();
    Ok(acc.scale_int(sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(ctx: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> SeriesParams {
        let m = ctx.m() as i64;
        let q = ctx.q();
        let ch = |rng: &mut ChaCha8Rng| ctx.character(rng.gen_range(0..m));
        SeriesParams::new(
            ch(rng),
            (0..n).map(|_| ch(rng)).collect(),
            (0..n).map(|_| ch(rng)).collect(),
            (0..n).map(|_| FieldElem(rng.gen_range(0..q))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn params_validation() {
        let ctx = Ctx::new(5, 1).unwrap();
        let c = ctx.character(1);
        assert!(SeriesParams::new(c, vec![], vec![], vec![]).is_err());
        assert!(SeriesParams::new(c, vec![c], vec![c, c], vec![FieldElem(1)]).is_err());
        let p = SeriesParams::parse(&ctx, "chi1", "chi0,chi2", "chi1,chi3", "1,2").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.to_json(&ctx).x, vec!["1", "2"]);
    }

    #[test]
    fn vanishing_at_zero_argument() {
        let ctx = Ctx::new(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let mut p = random_params(&ctx, 2, &mut rng);
            p.xs[rng.gen_range(0..2)] = FieldElem::ZERO;
            for route in [Route::Direct, Route::Charsum, Route::BinomialProduct] {
                assert!(lauricella_fa(&ctx, &p, route).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn gauss_routes_agree_exhaustively_q5() {
        let ctx = Ctx::new(5, 1).unwrap();
        for a in ctx.characters() {
            for b in ctx.characters() {
                for c in ctx.characters() {
                    for x in ctx.field().elements() {
                        let d = gauss_2f1(&ctx, a, b, c, x, GaussRoute::Direct).unwrap();
                        let s = gauss_2f1(&ctx, a, b, c, x, GaussRoute::Charsum).unwrap();
                        assert_eq!(d, s, "{a} {b} {c} {x:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn n1_lauricella_is_2f1() {
        let ctx = Ctx::new(7, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let p = random_params(&ctx, 1, &mut rng);
            let g = gauss_2f1(&ctx, p.a, p.bs[0], p.cs[0], p.xs[0], GaussRoute::Direct).unwrap();
            for route in [Route::Direct, Route::Charsum, Route::BinomialProduct] {
                assert_eq!(lauricella_fa(&ctx, &p, route).unwrap(), g);
            }
        }
    }

    #[test]
    fn np1_fn_n1_is_2f1() {
        let ctx = Ctx::new(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let p = random_params(&ctx, 1, &mut rng);
            let (a, b, c, x) = (p.a, p.bs[0], p.cs[0], p.xs[0]);
            let v = hyper_np1_fn(&ctx, &[a, b], &[c], x).unwrap();
            assert_eq!(v, gauss_2f1(&ctx, a, b, c, x, GaussRoute::Charsum).unwrap());
        }
        assert!(hyper_np1_fn(&ctx, &[ctx.eps()], &[ctx.eps()], FieldElem(1)).is_err());
    }

    #[test]
    fn np1_fn_all_trivial_matches_brute_force() {
        // 3F2[ε, ε, ε; ε, ε | x] at q = 5 against a literal character sum
        let ctx = Ctx::new(5, 1).unwrap();
        let e = ctx.eps();
        let f = ctx.field();
        for x in f.elements() {
            let mut acc = ctx.cyclo().zero();
            for chi in ctx.characters() {
                let b = |u: Character, v: Character| {
                    let s: CycloNum = f
                        .elements()
                        .map(|y| ctx.chi(u, y).unwrap() * ctx.chi(v.inv(), f.sub(f.one(), y)).unwrap())
                        .sum();
                    s.scale(&ctx.rational(v.at_minus_one(), 5))
                };
                acc = acc + b(chi, chi) * b(chi, chi) * b(chi, chi) * ctx.chi(chi, x).unwrap();
            }
            let expect = acc.scale(&ctx.rational(5, 4));
            assert_eq!(hyper_np1_fn(&ctx, &[e, e, e], &[e, e], x).unwrap(), expect);
        }
    }

    #[test]
    fn exact_charsum_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in [3u32, 5, 7, 9] {
            let ctx = Ctx::for_q(q).unwrap();
            for _ in 0..25 {
                let n = rng.gen_range(1..=3);
                let p = random_params(&ctx, n, &mut rng);
                let d = lauricella_fa(&ctx, &p, Route::Direct).unwrap();
                assert_eq!(lauricella_fa(&ctx, &p, Route::Charsum).unwrap(), d, "q={q} {p:?}");
            }
        }
    }

    #[test]
    fn product_route_differs_only_on_vanishing_prefix() {
        let ctx = Ctx::for_q(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut differed = 0;
        for _ in 0..60 {
            let p = random_params(&ctx, 2, &mut rng);
            let d = lauricella_fa(&ctx, &p, Route::Direct).unwrap();
            if lauricella_fa(&ctx, &p, Route::BinomialProduct).unwrap() != d {
                differed += 1;
            }
        }
        assert!(differed > 0);
    }

    #[test]
    fn he_normalization() {
        let ctx = Ctx::for_q(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let p = random_params(&ctx, 2, &mut rng);
            let b = [p.bs[0], p.bs[1]];
            let c = [p.cs[0], p.cs[1]];
            let x = [p.xs[0], p.xs[1]];
            let fa = appell_f2(&ctx, p.a, b, c, x, Route::Direct).unwrap();
            let he = appell_f2_point_sum(&ctx, p.a, b, c, x).unwrap();
            assert_eq!(fa.scale_int(25), he);
        }
    }

    #[test]
    fn permutation_invariance() {
        let ctx = Ctx::for_q(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random_params(&ctx, 3, &mut rng);
        assert_eq!(p.permute(&[0, 1, 2]).unwrap(), p);
        assert!(p.permute(&[0, 0, 1]).is_err());
        assert!(p.permute(&[0, 1]).is_err());
        for _ in 0..20 {
            let p = random_params(&ctx, 3, &mut rng);
            let v = lauricella_fa(&ctx, &p, Route::Direct).unwrap();
            for sigma in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
                let pp = p.permute(&sigma).unwrap();
                assert_eq!(lauricella_fa(&ctx, &pp, Route::Direct).unwrap(), v);
            }
        }
    }

    #[test]
    fn shifted_and_level_sets_are_consistent() {
        // Σ_c W(c) Ā(1 - c) = F
        let ctx = Ctx::for_q(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = ctx.field();
        for _ in 0..10 {
            let p = random_params(&ctx, 2, &mut rng);
            let mut acc = ctx.cyclo().zero();
            for c in f.elements() {
                let w = level_weight(&ctx, &p.bs, &p.cs, &p.xs, c);
                acc = acc + w * ctx.chi(p.a.inv(), f.sub(f.one(), c)).unwrap();
            }
            assert_eq!(acc, lauricella_fa(&ctx, &p, Route::Direct).unwrap());
        }
        assert_eq!(level_weight(&ctx, &[], &[], &[], FieldElem::ZERO), ctx.cyclo().one());
        let a = ctx.character(2);
        let v = lauricella_shifted(&ctx, a, &[], &[], &[], ctx.elem(3));
        assert_eq!(v, ctx.chi(a.inv(), ctx.elem(3)).unwrap());
    }

    #[test]
    fn auto_route() {
        let ctx = Ctx::for_q(5).unwrap();
        let p = SeriesParams::parse(&ctx, "chi1", "chi2,chi3", "chi0,chi1", "2,3").unwrap();
        let v = lauricella_fa(&ctx, &p, Route::Auto).unwrap();
        assert!(!ctx.has_table());
        ctx.table().unwrap();
        assert_eq!(lauricella_fa(&ctx, &p, Route::Auto).unwrap(), v);
    }
}
