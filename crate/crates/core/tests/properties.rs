//! Randomized algebraic invariants.

mod common;

use common::*;
use ffhyper::char_sums::{binom, jacobi, multinom};
use ffhyper::field::cache;
use ffhyper::{lauricella_fa, Character, Ctx, CycloNum, FieldElem, Route, SeriesParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QS: [u32; 9] = [3, 5, 7, 9, 11, 13, 25, 27, 49];

fn ctx(q: u32) -> Ctx {
    Ctx::for_q(q).unwrap()
}

fn elem(ctx: &Ctx, seed: u32) -> FieldElem {
    FieldElem(seed % ctx.q())
}

fn nonzero(ctx: &Ctx, seed: u32) -> FieldElem {
    FieldElem(1 + seed % (ctx.q() - 1))
}

fn ch(ctx: &Ctx, seed: u32) -> Character {
    ctx.character((seed % ctx.m()) as i64)
}

/// `Σ c_k ζ^{e_k}` with small integer coefficients.
fn cyclo_from(ctx: &Ctx, terms: &[(i64, i64)]) -> CycloNum {
    let cy = ctx.cyclo();
    terms.iter().fold(cy.zero(), |acc, &(c, e)| acc + cy.root_of_unity(e).scale_int(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_is_a_field(qi in 0..QS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let ctx = ctx(QS[qi]);
        let f = ctx.field();
        let (a, b, c) = (elem(&ctx, a), elem(&ctx, b), elem(&ctx, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.gen_pow(f.dlog(a).unwrap() as i64), a);
            prop_assert_eq!(f.pow(a, (ctx.q() - 1) as u64), f.one());
        }
        // Frobenius is additive
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn element_formatting_round_trips(qi in 0..QS.len(), a in any::<u32>()) {
        let ctx = ctx(QS[qi]);
        let a = elem(&ctx, a);
        let f = ctx.field();
        prop_assert_eq!(f.parse_elem(&f.format_elem(a)).unwrap(), a);
        prop_assert_eq!(f.from_coeffs(f.coeffs(a)).unwrap(), a);
    }

    #[test]
    fn characters_are_multiplicative(qi in 0..QS.len(), j in any::<u32>(), k in any::<u32>(), x in any::<u32>(), y in any::<u32>()) {
        let ctx = ctx(QS[qi]);
        let f = ctx.field();
        let (c1, c2) = (ch(&ctx, j), ch(&ctx, k));
        let (x, y) = (elem(&ctx, x), elem(&ctx, y));
        prop_assert_eq!(ctx.chi(c1, f.mul(x, y)).unwrap(), ctx.chi(c1, x).unwrap() * ctx.chi(c1, y).unwrap());
        prop_assert_eq!(ctx.chi(c1.mul(c2).unwrap(), x).unwrap(), ctx.chi(c1, x).unwrap() * ctx.chi(c2, x).unwrap());
        let at = ctx.chi(c1, f.minus_one()).unwrap();
        prop_assert_eq!(at, ctx.cyclo().from_int_scalar(c1.at_minus_one()));
        prop_assert_eq!(c1.mul(c1.inv()).unwrap(), ctx.eps());
        prop_assert_eq!(Character::parse(f, &c1.to_string()).unwrap(), c1);
    }

    #[test]
    fn character_orthogonality(qi in 0..QS.len(), j in any::<u32>()) {
        let ctx = ctx(QS[qi]);
        let c = ch(&ctx, j);
        let s: CycloNum = ctx.field().elements().map(|x| ctx.chi(c, x).unwrap()).sum();
        let expect = if c.is_trivial() { ctx.q() as i64 - 1 } else { 0 };
        prop_assert_eq!(s, ctx.cyclo().from_int_scalar(expect));
    }

    #[test]
    fn cyclotomic_ring_laws(
        qi in 0..QS.len(),
        a in prop::collection::vec((-5i64..5, 0i64..200), 0..6),
        b in prop::collection::vec((-5i64..5, 0i64..200), 0..6),
        c in prop::collection::vec((-5i64..5, 0i64..200), 0..6),
    ) {
        let ctx = ctx(QS[qi]);
        let (a, b, c) = (cyclo_from(&ctx, &a), cyclo_from(&ctx, &b), cyclo_from(&ctx, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert!((&a - &a).is_zero());
        let m = ctx.m() as i64;
        prop_assert_eq!(a.mul_zeta(m), a.clone());
        prop_assert_eq!(a.mul_zeta(1), &a * &ctx.cyclo().root_of_unity(1));
        // the complex embedding is a ring homomorphism
        let (ea, eb) = (a.embed(), b.embed());
        prop_assert!(((&a * &b).embed() - ea * eb).norm() < 1e-6);
        prop_assert!(((&a + &b).embed() - (ea + eb)).norm() < 1e-6);
    }

    #[test]
    fn cyclotomic_strings_round_trip(qi in 0..QS.len(), a in prop::collection::vec((-50i64..50, 0i64..200), 0..8), d in 1i64..30) {
        let ctx = ctx(QS[qi]);
        let a = cyclo_from(&ctx, &a).scale(&rat(1, d));
        prop_assert_eq!(ctx.cyclo().parse(&a.to_strings()).unwrap(), a);
    }

    #[test]
    fn binomial_symmetries(qi in 0..QS.len(), i in any::<u32>(), j in any::<u32>()) {
        let ctx = ctx(QS[qi]);
        let (a, b) = (ch(&ctx, i), ch(&ctx, j));
        let v = binom(&ctx, a, b).unwrap();
        prop_assert_eq!(&v, &binom_oracle(&ctx, a, b));
        prop_assert_eq!(&v, &binom(&ctx, a, a.div(b).unwrap()).unwrap());
        prop_assert_eq!(&v, &binom(&ctx, b.div(a).unwrap(), b).unwrap().scale_int(b.at_minus_one()));
        // binom(A, ε) = -1/q + (q-1)/q δ(A)
        let q = ctx.q() as i64;
        let expect = if a.is_trivial() { rat(q - 2, q) } else { rat(-1, q) };
        prop_assert_eq!(binom(&ctx, a, ctx.eps()).unwrap(), ctx.cyclo().from_rational(expect));
    }

    #[test]
    fn jacobi_sums(qi in 0..QS.len(), i in any::<u32>(), j in any::<u32>()) {
        let ctx = ctx(QS[qi]);
        let (a, b) = (ch(&ctx, i), ch(&ctx, j));
        let jab = jacobi(&ctx, a, b).unwrap();
        prop_assert_eq!(&jab, &jacobi(&ctx, b, a).unwrap());
        prop_assert_eq!(&jab, &multi_jacobi_oracle(&ctx, &[a, b]));
        if !a.is_trivial() && !b.is_trivial() && !a.mul(b).unwrap().is_trivial() {
            // |J(A, B)|² = q, and the conjugate is J(Ā, B̄)
            let norm = &jab * &jacobi(&ctx, a.inv(), b.inv()).unwrap();
            prop_assert_eq!(norm, ctx.cyclo().from_int_scalar(ctx.q() as i64));
        }
    }

    #[test]
    fn multinomial_matches_oracle(qi in 0..4usize, n in 1usize..4, seed in any::<u64>()) {
        let ctx = ctx(QS[qi]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_char(&ctx, &mut rng);
        let bs: Vec<Character> = (0..n).map(|_| random_char(&ctx, &mut rng)).collect();
        let v = multinom(&ctx, a, &bs).unwrap();
        prop_assert_eq!(&v, &multinom_oracle(&ctx, a, &bs));
        if n == 1 {
            prop_assert_eq!(v, binom(&ctx, a, bs[0]).unwrap());
        }
    }

    #[test]
    fn lauricella_routes_and_permutations(qi in 0..6usize, n in 1usize..4, seed in any::<u64>()) {
        let ctx = ctx(QS[qi]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(&ctx, n, &mut rng);
        let direct = lauricella_fa(&ctx, &p, Route::Direct).unwrap();
        prop_assert_eq!(&direct, &lauricella_fa(&ctx, &p, Route::Charsum).unwrap(), "{}", describe(&ctx, &p));
        if ctx.q().pow(n as u32) <= 2197 {
            prop_assert_eq!(&direct, &lauricella_oracle(&ctx, &p));
        }
        let sigma: Vec<usize> = (0..n).rev().collect();
        let rotated = p.permute(&sigma).unwrap();
        prop_assert_eq!(&direct, &lauricella_fa(&ctx, &rotated, Route::Direct).unwrap());
        prop_assert_eq!(&direct, &lauricella_fa(&ctx, &rotated, Route::Charsum).unwrap());
    }

    #[test]
    fn lauricella_vanishes_at_zero_argument(qi in 0..6usize, n in 1usize..4, seed in any::<u64>(), slot in any::<usize>()) {
        let ctx = ctx(QS[qi]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(&ctx, n, &mut rng);
        let mut xs = p.xs.clone();
        xs[slot % n] = FieldElem(0);
        let p = SeriesParams::new(p.a, p.bs.clone(), p.cs.clone(), xs).unwrap();
        for route in [Route::Direct, Route::Charsum, Route::BinomialProduct] {
            prop_assert!(lauricella_fa(&ctx, &p, route).unwrap().is_zero());
        }
    }

    #[test]
    fn lauricella_single_variable_is_a_binomial_expansion(qi in 0..QS.len(), i in any::<u32>(), j in any::<u32>(), k in any::<u32>(), x in any::<u32>()) {
        let ctx = ctx(QS[qi]);
        let p = SeriesParams::new(ch(&ctx, i), vec![ch(&ctx, j)], vec![ch(&ctx, k)], vec![nonzero(&ctx, x)]).unwrap();
        let direct = lauricella_fa(&ctx, &p, Route::Direct).unwrap();
        prop_assert_eq!(&direct, &lauricella_fa(&ctx, &p, Route::BinomialProduct).unwrap());
        prop_assert_eq!(&direct, &lauricella_oracle(&ctx, &p));
    }
}

#[test]
fn field_cache_round_trips() {
    for q in QS {
        let ctx = ctx(q);
        let f = ctx.field();
        let bytes = cache::encode(f);
        let back = cache::decode(&bytes).unwrap();
        assert_eq!(cache::encode(&back), bytes);
        assert_eq!(cache::checksum_hex(&back), cache::checksum_hex(f));
        assert_eq!(back.modulus(), f.modulus());
        for x in f.elements() {
            assert_eq!(back.dlog(x).ok(), f.dlog(x).ok());
        }
    }
}

#[test]
fn corrupted_cache_is_rejected() {
    let ctx = ctx(9);
    let mut bytes = cache::encode(ctx.field());
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    assert!(cache::decode(&bytes).is_err());
    assert!(cache::decode(&bytes[..bytes.len() / 2]).is_err());
}
