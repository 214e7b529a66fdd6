//! Dense polynomials over `F_p`, coefficients low-to-high, trimmed so the
//! zero polynomial is empty.

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut a = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] as u64 * lead_inv % p as u64;
        if c != 0 {
            let shift = da - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p as u64;
                a[shift + i] = ((a[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        a = trim(a);
    }
    a
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: a degree-`r` polynomial is irreducible iff
/// `gcd(f, x^(p^i) - x) = 1` for every `1 <= i <= r/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let r = f.len() - 1;
    if r == 0 {
        return false;
    }
    if r == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = rem(&x, &f, p);
    for _ in 1..=r / 2 {
        h = pow_mod(&h, p as u64, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}
