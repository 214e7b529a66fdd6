//! Finite fields `F_q`, `q = p^r` with `p` odd.
//!
//! Elements are dense indices into a canonical enumeration of coefficient
//! vectors `(c_0, .., c_{r-1})` (constant term first) ordered lexicographically,
//! so `c_0` is the most significant digit of the index. For `r = 1` the index
//! is the residue itself.
//!
//! Multiplication goes through the discrete-log table of the canonical
//! generator; addition works digit-wise.

pub mod cache;
mod poly;

use std::fmt;

use crate::error::{domain, Error, Result};

/// Largest field order accepted by [`FieldCtx::new`].
pub const MAX_Q: u32 = 1 << 16;

/// Identity of a field; two contexts with the same id are identical since
/// construction is deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    pub p: u32,
    pub r: u32,
}

impl FieldId {
    pub fn q(&self) -> u32 {
        self.p.pow(self.r)
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.r)
        }
    }
}

/// An element of a field, as an index into [`FieldCtx`]'s element table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    /// Monic irreducible modulus, low-to-high, length `r + 1`.
    modulus: Vec<u32>,
    /// `q * r` digits, element `i` at `digits[i*r .. (i+1)*r]`, constant first.
    digits: Vec<u32>,
    generator: FieldElem,
    /// `dlog[i]` for nonzero `i`; `dlog[0]` is unused.
    dlog: Vec<u32>,
    /// `exp[k]` = index of `g^k`, `k < q - 1`.
    exp: Vec<u32>,
    one: FieldElem,
    minus_one: FieldElem,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, r)`; errors if `q` is not a prime power.
pub fn split_prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return domain(format!("{q} is not a prime power"));
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    if rest != 1 {
        return domain(format!("{q} is not a prime power"));
    }
    Ok((p, r))
}

impl FieldCtx {
    /// Builds `F_{p^r}` with the lexicographically smallest monic irreducible
    /// modulus and the smallest element of order `q - 1` as generator.
    pub fn new(p: u32, r: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return domain(format!("p = {p} is not an odd prime"));
        }
        if r == 0 {
            return domain("extension degree must be at least 1");
        }
        let q = match p.checked_pow(r) {
            Some(q) if q <= MAX_Q => q,
            _ => {
                return Err(Error::Capacity(format!(
                    "{p}^{r} exceeds the field size limit {MAX_Q}"
                )))
            }
        };
        let ru = r as usize;

        let mut digits = vec![0u32; q as usize * ru];
        for i in 0..q as usize {
            let mut v = i as u32;
            for d in (0..ru).rev() {
                digits[i * ru + d] = v % p;
                v /= p;
            }
        }

        // Monic candidates in the same canonical order as elements.
        let modulus = (0..q as usize)
            .map(|i| {
                let mut f = digits[i * ru..(i + 1) * ru].to_vec();
                f.push(1);
                f
            })
            .find(|f| poly::is_irreducible(f, p))
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {r} over F_{p}")))?;

        let order = q - 1;
        let prime_factors = prime_factors(order);
        let as_poly = |i: usize| poly::trim(digits[i * ru..(i + 1) * ru].to_vec());
        let gen_index = (1..q as usize)
            .find(|&i| {
                let g = as_poly(i);
                prime_factors.iter().all(|&l| {
                    let h = poly::pow_mod(&g, (order / l) as u64, &modulus, p);
                    h != vec![1]
                })
            })
            .ok_or_else(|| Error::Internal("no generator found".into()))?;

        let index_of = |c: &[u32]| -> u32 {
            let mut idx = 0u32;
            for d in 0..ru {
                idx = idx * p + c.get(d).copied().unwrap_or(0);
            }
            idx
        };

        let g = as_poly(gen_index);
        let mut exp = Vec::with_capacity(order as usize);
        let mut dlog = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for k in 0..order {
            let idx = index_of(&cur);
            exp.push(idx);
            dlog[idx as usize] = k;
            cur = poly::mul_mod(&cur, &g, &modulus, p);
        }
        if cur != vec![1] {
            return Err(Error::Internal("generator order check failed".into()));
        }

        let one = FieldElem(index_of(&[1]));
        let minus_one = FieldElem(index_of(&[p - 1]));
        Ok(FieldCtx {
            p,
            r,
            q,
            modulus,
            digits,
            generator: FieldElem(gen_index as u32),
            dlog,
            exp,
            one,
            minus_one,
        })
    }

    /// Rebuilds a context from stored parts, checking every table invariant.
    pub(crate) fn from_parts(
        p: u32,
        r: u32,
        modulus: Vec<u32>,
        generator: u32,
        digits: Vec<u32>,
        dlog: Vec<u32>,
    ) -> Result<Self> {
        let fresh = FieldCtx::new(p, r)?;
        if fresh.modulus != modulus
            || fresh.generator.0 != generator
            || fresh.digits != digits
            || fresh.dlog != dlog
        {
            return Err(Error::Cache(format!(
                "stored tables for F_{p}^{r} disagree with a fresh build"
            )));
        }
        Ok(fresh)
    }

    pub fn id(&self) -> FieldId {
        FieldId { p: self.p, r: self.r }
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Order of the multiplicative group, `q - 1`.
    pub fn order(&self) -> u32 {
        self.q - 1
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> FieldElem {
        self.generator
    }
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }
    pub fn one(&self) -> FieldElem {
        self.one
    }
    pub fn minus_one(&self) -> FieldElem {
        self.minus_one
    }
    pub(crate) fn dlog_table(&self) -> &[u32] {
        &self.dlog
    }
    pub(crate) fn digit_table(&self) -> &[u32] {
        &self.digits
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.q).map(FieldElem)
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index))
        } else {
            domain(format!("index {index} out of range for {}", self.id()))
        }
    }

    /// The element with the given coefficient vector (constant first);
    /// missing high coefficients are zero.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.r as usize {
            return domain(format!("{} coefficients for a degree-{} field", coeffs.len(), self.r));
        }
        let mut idx = 0u32;
        for d in 0..self.r as usize {
            let c = coeffs.get(d).copied().unwrap_or(0);
            if c >= self.p {
                return domain(format!("coefficient {c} not reduced mod {}", self.p));
            }
            idx = idx * self.p + c;
        }
        Ok(FieldElem(idx))
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let c = n.rem_euclid(self.p as i64) as u32;
        if self.r == 1 {
            FieldElem(c)
        } else {
            FieldElem(c * self.p.pow(self.r - 1))
        }
    }

    pub fn coeffs(&self, x: FieldElem) -> &[u32] {
        let r = self.r as usize;
        &self.digits[x.0 as usize * r..(x.0 as usize + 1) * r]
    }

    fn digitwise(&self, a: FieldElem, b: FieldElem, f: impl Fn(u32, u32) -> u32) -> FieldElem {
        let (da, db) = (self.coeffs(a), self.coeffs(b));
        let mut idx = 0u32;
        for d in 0..self.r as usize {
            idx = idx * self.p + f(da[d], db[d]);
        }
        FieldElem(idx)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.r == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let p = self.p;
        self.digitwise(a, b, |x, y| (x + y) % p)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.r == 1 {
            return FieldElem((a.0 + self.p - b.0) % self.p);
        }
        let p = self.p;
        self.digitwise(a, b, |x, y| (x + p - y) % p)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.sub(FieldElem::ZERO, a)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        let k = (self.dlog[a.0 as usize] + self.dlog[b.0 as usize]) % self.order();
        FieldElem(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = (self.order() - self.dlog[a.0 as usize]) % self.order();
        Ok(FieldElem(self.exp[k as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if a.is_zero() {
            return if e == 0 { self.one } else { FieldElem::ZERO };
        }
        let k = (self.dlog[a.0 as usize] as u64 * (e % self.order() as u64)) % self.order() as u64;
        FieldElem(self.exp[k as usize])
    }

    /// `g^k` for the canonical generator.
    pub fn gen_pow(&self, k: i64) -> FieldElem {
        FieldElem(self.exp[k.rem_euclid(self.order() as i64) as usize])
    }

    /// Discrete log to the canonical generator.
    pub fn dlog(&self, x: FieldElem) -> Result<u32> {
        if x.is_zero() {
            return domain("discrete log of zero");
        }
        if x.0 >= self.q {
            return domain(format!("index {} out of range for {}", x.0, self.id()));
        }
        Ok(self.dlog[x.0 as usize])
    }

    /// Discrete log without the zero check; callers guarantee `x != 0`.
    #[inline]
    pub(crate) fn dlog_unchecked(&self, x: FieldElem) -> u32 {
        self.dlog[x.0 as usize]
    }

    /// Renders an element as a polynomial in `x` (or a residue when `r = 1`).
    pub fn format_elem(&self, a: FieldElem) -> String {
        if self.r == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let mut terms = Vec::new();
        for (d, &cd) in c.iter().enumerate().rev() {
            if cd == 0 {
                continue;
            }
            let coef = if cd == 1 && d > 0 { String::new() } else { cd.to_string() };
            terms.push(match d {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{d}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses an element literal: a residue `0..p` (or any integer, reduced
    /// mod `p`), a polynomial in `x` such as `2x^2+x+1`, or `#k` for the raw
    /// index `k`.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element literal".into()));
        }
        if let Some(rest) = s.strip_prefix('#') {
            let idx: u32 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad element index `{s}`")))?;
            return self.elem(idx);
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        let mut coeffs = vec![0i64; self.r as usize];
        let normalized = s.replace('-', "+-");
        for term in normalized.split('+').filter(|t| !t.is_empty()) {
            let bad = || Error::Parse(format!("bad polynomial term `{term}` in `{s}`"));
            let (coef, deg) = match term.find('x') {
                None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let coef = match head {
                        "" => 1,
                        "-" => -1,
                        h => h.parse::<i64>().map_err(|_| bad())?,
                    };
                    let tail = &term[pos + 1..];
                    let deg = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|d| d.parse::<usize>().ok())
                            .ok_or_else(bad)?
                    };
                    (coef, deg)
                }
            };
            if deg >= self.r as usize {
                return domain(format!("term `{term}` has degree >= {}", self.r));
            }
            coeffs[deg] += coef;
        }
        let reduced: Vec<u32> = coeffs
            .iter()
            .map(|c| c.rem_euclid(self.p as i64) as u32)
            .collect();
        self.from_coeffs(&reduced)
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
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
