//! Exact arithmetic in `Q(ζ_m)`.
//!
//! A [`CycloNum`] is a polynomial in `ζ = e^{2πi/m}` with rational
//! coefficients, reduced modulo the m-th cyclotomic polynomial `Φ_m`. Since
//! `Φ_m` is the minimal polynomial of `ζ`, two values are equal exactly when
//! their coefficient vectors are equal.
//!
//! Character sums are accumulated in integer form first (a histogram of
//! exponents, or products of algebraic integers) and only converted to
//! rational coefficients at the end; see [`ZetaSum`] and the `int_*`
//! methods of [`CycloCtx`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported root-of-unity order.
pub const MAX_M: u32 = 1 << 16;

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// Exact division of `num` by a monic `den` (both low-to-high).
fn div_exact_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact division");
    quot
}

/// `Φ_m` with integer coefficients, low-to-high, computed by dividing
/// `x^m - 1` by `Φ_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: u32) -> Result<Vec<i64>> {
    if m == 0 || m > MAX_M {
        return Err(Error::Capacity(format!("cyclotomic order {m} outside 1..={MAX_M}")));
    }
    let mut memo: BTreeMap<u32, Vec<i128>> = BTreeMap::new();
    for d in divisors(m) {
        let mut poly = vec![0i128; d as usize + 1];
        poly[0] = -1;
        poly[d as usize] = 1;
        for e in divisors(d).into_iter().filter(|&e| e < d) {
            poly = div_exact_monic(&poly, &memo[&e]);
        }
        memo.insert(d, poly);
    }
    memo[&m]
        .iter()
        .map(|&c| {
            i64::try_from(c).map_err(|_| Error::Internal("cyclotomic coefficient overflow".into()))
        })
        .collect()
}

#[derive(Debug, PartialEq, Eq)]
pub struct CycloCtx {
    m: u32,
    phi: Vec<i64>,
    deg: usize,
    /// `ζ^k mod Φ_m` as integer vectors, `k < m`.
    zeta_pows: Vec<Vec<i128>>,
}

impl CycloCtx {
    pub fn new(m: u32) -> Result<Arc<Self>> {
        let phi = cyclotomic_polynomial(m)?;
        let deg = phi.len() - 1;
        let mut zeta_pows = Vec::with_capacity(m as usize);
        let mut cur = vec![0i128; deg];
        cur[0] = 1;
        for _ in 0..m {
            zeta_pows.push(cur.clone());
            cur = Self::shift_reduce(&phi, &cur);
        }
        Ok(Arc::new(CycloCtx { m, phi, deg, zeta_pows }))
    }

    // multiply a reduced integer vector by ζ
    fn shift_reduce(phi: &[i64], a: &[i128]) -> Vec<i128> {
        let deg = a.len();
        let mut out = vec![0i128; deg];
        let top = a[deg - 1];
        for i in (1..deg).rev() {
            out[i] = a[i - 1];
        }
        for j in 0..deg {
            out[j] -= top * phi[j] as i128;
        }
        out
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    /// `deg Φ_m = φ(m)`.
    pub fn degree(&self) -> usize {
        self.deg
    }
    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    /// Reduced integer vector of `ζ^k`, `k` taken mod `m`.
    pub fn int_zeta(&self, k: i64) -> &[i128] {
        &self.zeta_pows[k.rem_euclid(self.m as i64) as usize]
    }

    pub fn int_one(&self) -> Vec<i128> {
        self.zeta_pows[0].clone()
    }

    /// Product of two reduced integer vectors.
    pub fn int_mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let d = self.deg;
        let mut prod = vec![0i128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.int_reduce(prod)
    }

    /// Reduces an integer polynomial in `ζ` of any length modulo `Φ_m`.
    pub fn int_reduce(&self, mut a: Vec<i128>) -> Vec<i128> {
        let d = self.deg;
        for i in (d..a.len()).rev() {
            let c = a[i];
            if c != 0 {
                for j in 0..d {
                    a[i - d + j] -= c * self.phi[j] as i128;
                }
            }
        }
        a.truncate(d);
        a.resize(d, 0);
        a
    }

    /// Length of an unreduced product buffer, `2 deg - 1`.
    pub fn wide_len(&self) -> usize {
        2 * self.deg - 1
    }

    /// `wide += c * a * b` without reduction; `wide` has [`Self::wide_len`] entries.
    pub fn int_fma(&self, wide: &mut [i128], a: &[i128], b: &[i128], c: i128) {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let cx = c * x;
            for (w, &y) in wide[i..].iter_mut().zip(b) {
                *w += cx * y;
            }
        }
    }

    /// Reduces a wide buffer modulo `Φ_m` in place; the result occupies the
    /// first `deg` entries and the tail is cleared.
    pub fn int_reduce_wide(&self, wide: &mut [i128]) {
        let d = self.deg;
        for i in (d..wide.len()).rev() {
            let c = std::mem::take(&mut wide[i]);
            if c != 0 {
                for j in 0..d {
                    wide[i - d + j] -= c * self.phi[j] as i128;
                }
            }
        }
    }

    /// `out = a * b` reduced, using `wide` as scratch.
    pub fn int_mul_to(&self, out: &mut [i128], a: &[i128], b: &[i128], wide: &mut [i128]) {
        wide.fill(0);
        self.int_fma(wide, a, b, 1);
        self.int_reduce_wide(wide);
        out.copy_from_slice(&wide[..self.deg]);
    }

    pub fn int_add_assign(&self, acc: &mut [i128], a: &[i128]) {
        for (x, &y) in acc.iter_mut().zip(a) {
            *x += y;
        }
    }

    /// `acc += c * a`.
    pub fn int_add_scaled(&self, acc: &mut [i128], a: &[i128], c: i128) {
        for (x, &y) in acc.iter_mut().zip(a) {
            *x += c * y;
        }
    }

    /// Converts `scale * a` for an integer vector `a` into a [`CycloNum`].
    pub fn from_int(self: &Arc<Self>, a: &[i128], scale: &BigRational) -> CycloNum {
        if let (Some(sn), Some(sd)) = (scale.numer().to_i128(), scale.denom().to_i128()) {
            // machine-word gcds; `scale` is already in lowest terms with sd > 0
            let coeffs: Option<Vec<BigRational>> = a
                .iter()
                .map(|&c| {
                    let num = c.checked_mul(sn)?;
                    let g = num_integer::gcd(num, sd);
                    Some(BigRational::new_raw(BigInt::from(num / g), BigInt::from(sd / g)))
                })
                .collect();
            if let Some(coeffs) = coeffs {
                return CycloNum { ctx: Arc::clone(self), coeffs };
            }
        }
        let coeffs = a
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)) * scale)
            .collect();
        CycloNum { ctx: Arc::clone(self), coeffs }
    }

    pub fn zero(self: &Arc<Self>) -> CycloNum {
        CycloNum { ctx: Arc::clone(self), coeffs: vec![BigRational::zero(); self.deg] }
    }

    pub fn one(self: &Arc<Self>) -> CycloNum {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(self: &Arc<Self>, r: BigRational) -> CycloNum {
        let mut z = self.zero();
        z.coeffs[0] = r;
        z
    }

    pub fn from_int_scalar(self: &Arc<Self>, n: i64) -> CycloNum {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    /// `ζ_m^k`, with `k` reduced mod `m`.
    pub fn root_of_unity(self: &Arc<Self>, k: i64) -> CycloNum {
        self.from_int(self.int_zeta(k), &BigRational::one())
    }

    /// Builds a value from a coefficient vector in `ζ` of any length.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<BigRational>) -> CycloNum {
        CycloNum { ctx: Arc::clone(self), coeffs: reduce_rational(&self.phi, self.deg, coeffs) }
    }

    /// Parses the `"num/den"` serialization produced by [`CycloNum::to_strings`].
    pub fn parse(self: &Arc<Self>, parts: &[String]) -> Result<CycloNum> {
        if parts.len() != self.deg {
            return Err(Error::Parse(format!(
                "expected {} coefficients, got {}",
                self.deg,
                parts.len()
            )));
        }
        let coeffs = parts
            .iter()
            .map(|s| {
                s.parse::<BigRational>()
                    .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.from_coeffs(coeffs))
    }
}

fn reduce_rational(phi: &[i64], deg: usize, mut a: Vec<BigRational>) -> Vec<BigRational> {
    for i in (deg..a.len()).rev() {
        let c = std::mem::take(&mut a[i]);
        if !c.is_zero() {
            for j in 0..deg {
                if phi[j] != 0 {
                    let t = &c * BigRational::from_integer(phi[j].into());
                    a[i - deg + j] -= t;
                }
            }
        }
    }
    a.truncate(deg);
    a.resize(deg, BigRational::zero());
    a
}

/// Exact element of `Q(ζ_m)` in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloNum {
    ctx: Arc<CycloCtx>,
    coeffs: Vec<BigRational>,
}

impl CycloNum {
    pub fn ctx(&self) -> &Arc<CycloCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &CycloNum) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.m == other.ctx.m,
            "mixing Q(ζ_{}) and Q(ζ_{})",
            self.ctx.m,
            other.ctx.m
        );
    }

    pub fn scale(&self, r: &BigRational) -> CycloNum {
        CycloNum { ctx: Arc::clone(&self.ctx), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, n: i64) -> CycloNum {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// Multiplication by `ζ^k`.
    pub fn mul_zeta(&self, k: i64) -> CycloNum {
        let k = k.rem_euclid(self.ctx.m as i64);
        if k == 0 {
            return self.clone();
        }
        let mut shifted = vec![BigRational::zero(); self.coeffs.len() + k as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            shifted[i + k as usize] = c.clone();
        }
        CycloNum {
            ctx: Arc::clone(&self.ctx),
            coeffs: reduce_rational(&self.ctx.phi, self.ctx.deg, shifted),
        }
    }

    /// Image under the embedding `ζ ↦ e^{2πi/m}`.
    pub fn embed(&self) -> Complex64 {
        let m = self.ctx.m as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(v, 2.0 * std::f64::consts::PI * k as f64 / m)
            })
            .sum()
    }

    /// Coefficients as `"num/den"` strings in lowest terms.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[m={}]({})", self.ctx.m, self)
    }
}

/// Serializes as the sequence of `"num/den"` coefficient strings.
impl serde::Serialize for CycloNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.to_strings())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let mag = if k > 0 && abs.is_one() { String::new() } else { abs.to_string() };
            let z = match k {
                0 => String::new(),
                1 => "ζ".to_string(),
                _ => format!("ζ^{k}"),
            };
            let sep = if !mag.is_empty() && !z.is_empty() { "*" } else { "" };
            write!(f, "{sign}{mag}{sep}{z}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycloNum { ctx: Arc::clone(&self.ctx), coeffs }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CycloNum { ctx: Arc::clone(&self.ctx), coeffs }
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { ctx: Arc::clone(&self.ctx), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.check(rhs);
        let d = self.ctx.deg;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycloNum { ctx: Arc::clone(&self.ctx), coeffs: reduce_rational(&self.ctx.phi, d, prod) }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                (&self).$method(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl std::iter::Sum for CycloNum {
    fn sum<I: Iterator<Item = CycloNum>>(mut iter: I) -> CycloNum {
        let first = iter.next().expect("sum of an empty CycloNum iterator");
        iter.fold(first, |acc, x| &acc + &x)
    }
}

/// Histogram of exponents: `Σ counts[k] ζ^k`, for character sums whose terms
/// are single roots of unity.
#[derive(Debug, Clone)]
pub struct ZetaSum {
    counts: Vec<i64>,
}

impl ZetaSum {
    pub fn new(m: u32) -> Self {
        ZetaSum { counts: vec![0; m as usize] }
    }

    #[inline]
    pub fn add_root(&mut self, k: usize) {
        self.counts[k] += 1;
    }

    #[inline]
    pub fn add_root_times(&mut self, k: usize, c: i64) {
        self.counts[k] += c;
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn merge(&mut self, other: &ZetaSum) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Reduced integer vector of the accumulated sum.
    pub fn to_int(&self, ctx: &CycloCtx) -> Vec<i128> {
        let mut acc = vec![0i128; ctx.degree()];
        for (k, &c) in self.counts.iter().enumerate() {
            if c != 0 {
                ctx.int_add_scaled(&mut acc, ctx.int_zeta(k as i64), c as i128);
            }
        }
        acc
    }

    pub fn finish(&self, ctx: &Arc<CycloCtx>, scale: &BigRational) -> CycloNum {
        ctx.from_int(&self.to_int(ctx), scale)
    }
}
