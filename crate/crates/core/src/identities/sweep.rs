//! Deterministic exhaustive and sampled sweeps over identity instances.
//!
//! Instances are enumerated in a fixed canonical order (mixed radix over
//! `A, B_1..B_n, C_1..C_n, x_1..x_n, k, l, t`) or drawn from a ChaCha8 stream
//! seeded per `(seed, identity, q, n)`. Checks run on the current rayon pool
//! chunk by chunk and are merged back in enumeration order, so the report
//! stream does not depend on the number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{verify, Form, IdentityId, Instance, VerificationReport, VerifyOptions};
use crate::characters::Character;
use crate::context::Ctx;
use crate::error::{domain, Error, Result};
use crate::field::FieldElem;
use crate::hypergeometric::SeriesParams;

/// Default cap on the size of an exhaustive enumeration.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

const CHUNK: usize = 512;
const MAX_REJECTION_FACTOR: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Mode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub suite: Vec<IdentityId>,
    pub qs: Vec<u32>,
    pub n: usize,
    pub mode: Mode,
    pub form: Form,
    pub mirror: bool,
    pub budget: u64,
    pub fail_fast: bool,
}

impl SweepConfig {
    pub fn new(suite: Vec<IdentityId>, qs: Vec<u32>, n: usize, mode: Mode) -> SweepConfig {
        SweepConfig {
            suite,
            qs,
            n,
            mode,
            form: Form::Corrected,
            mirror: true,
            budget: DEFAULT_BUDGET,
            fail_fast: false,
        }
    }
}

/// Aggregate outcome for one `(identity, q, n)` cell.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub identity: IdentityId,
    pub form: Form,
    pub q: u32,
    pub n: usize,
    #[serde(flatten)]
    pub mode: Mode,
    /// Enumerated or drawn tuples that violated a hypothesis.
    pub rejected: u64,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    /// Checks whose float mirror disagreed beyond tolerance (counted in `failed`).
    pub mirror_failures: u64,
    pub first_counterexample: Option<VerificationReport>,
}

impl SweepSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Whether a report counts as a pass: exact equality and, when the mirror
/// ran, agreement within tolerance.
pub fn passes(r: &VerificationReport) -> bool {
    r.equal && r.mirror_ok != Some(false)
}

/// Radices of the canonical enumeration for `id` at field size `q`.
fn radices(ctx: &Ctx, id: IdentityId, n: usize) -> Vec<u64> {
    let (m, q) = (ctx.m() as u64, ctx.q() as u64);
    let mut r = vec![m; 1 + 2 * n];
    r.extend(std::iter::repeat_n(q, n));
    if id.uses_k() {
        r.push(n as u64);
    }
    if id.uses_l() {
        r.push(n as u64);
    }
    if id.uses_t() {
        r.push(q);
    }
    r
}

/// Number of tuples in the exhaustive enumeration, saturating.
pub fn space_size(ctx: &Ctx, id: IdentityId, n: usize) -> u64 {
    radices(ctx, id, n).iter().fold(1u64, |acc, &r| acc.saturating_mul(r))
}

fn build(ctx: &Ctx, id: IdentityId, n: usize, digits: &[u64]) -> Result<Instance> {
    let f = ctx.field();
    let ch = |d: u64| Character::new(f, d as i64);
    let a = ch(digits[0]);
    let bs = digits[1..=n].iter().map(|&d| ch(d)).collect();
    let cs = digits[n + 1..=2 * n].iter().map(|&d| ch(d)).collect();
    let xs = digits[2 * n + 1..=3 * n].iter().map(|&d| FieldElem(d as u32)).collect();
    let mut rest = digits[3 * n + 1..].iter();
    let k = id.uses_k().then(|| *rest.next().unwrap() as usize);
    let l = id.uses_l().then(|| *rest.next().unwrap() as usize);
    let t = id.uses_t().then(|| FieldElem(*rest.next().unwrap() as u32));
    Ok(Instance { id, params: SeriesParams::new(a, bs, cs, xs)?, k, l, t })
}

fn decode(ctx: &Ctx, id: IdentityId, n: usize, radices: &[u64], mut code: u64) -> Result<Instance> {
    // most significant digit first, so the order is lexicographic in A, B, C, x, k, l, t
    let mut digits = vec![0u64; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = code % r;
        code /= r;
    }
    build(ctx, id, n, &digits)
}

fn stream_seed(seed: u64, id: IdentityId, q: u32, n: usize) -> u64 {
    // SplitMix64 finalizer over the cell coordinates
    let mut z = seed
        ^ (id.ordinal() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (q as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ (n as u64).wrapping_mul(0x94D0_49BB_1331_11EB);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_applicable(id: IdentityId, n: usize) -> Result<()> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if id.is_reduction() && n < 2 {
        return domain(format!("{id} requires n >= 2"));
    }
    Ok(())
}

/// Draws `count` admissible instances uniformly by rejection. Returns the
/// instances and the number of rejected draws.
pub fn sample_instances(ctx: &Ctx, id: IdentityId, n: usize, count: usize, seed: u64) -> Result<(Vec<Instance>, u64)> {
    check_applicable(id, n)?;
    let radices = radices(ctx, id, n);
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, id, ctx.q(), n));
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0u64;
    let limit = (count.max(1) * MAX_REJECTION_FACTOR) as u64;
    while out.len() < count {
        let digits: Vec<u64> = radices.iter().map(|&r| rng.gen_range(0..r)).collect();
        let inst = build(ctx, id, n, &digits)?;
        if inst.validate(ctx).is_ok() {
            out.push(inst);
        } else {
            rejected += 1;
            if rejected > limit {
                return Err(Error::Capacity(format!(
                    "{id} at q={}, n={n}: no admissible instance after {rejected} draws",
                    ctx.q()
                )));
            }
        }
    }
    Ok((out, rejected))
}

/// All admissible instances in canonical order, refusing spaces larger than `budget`.
pub fn exhaustive_instances(ctx: &Ctx, id: IdentityId, n: usize, budget: u64) -> Result<(Vec<Instance>, u64)> {
    check_applicable(id, n)?;
    let size = space_size(ctx, id, n);
    if size > budget {
        return Err(Error::Capacity(format!(
            "exhaustive {id} at q={}, n={n} has {size} tuples, over the budget of {budget}",
            ctx.q()
        )));
    }
    let radices = radices(ctx, id, n);
    let all: Vec<Result<Option<Instance>>> = (0..size)
        .into_par_iter()
        .map(|code| {
            let inst = decode(ctx, id, n, &radices, code)?;
            Ok(inst.validate(ctx).is_ok().then_some(inst))
        })
        .collect();
    let mut out = Vec::new();
    for r in all {
        if let Some(inst) = r? {
            out.push(inst);
        }
    }
    let rejected = size - out.len() as u64;
    Ok((out, rejected))
}

/// Runs the sweep on the current rayon pool. `sink` receives every report in
/// canonical order; a summary is returned per `(q, identity)` cell.
pub fn sweep(cfg: &SweepConfig, sink: impl FnMut(&VerificationReport)) -> Result<Vec<SweepSummary>> {
    sweep_with(cfg, Ctx::for_q, sink)
}

/// [`sweep`] with a caller-supplied context constructor, e.g. one backed by
/// the on-disk field cache.
pub fn sweep_with(
    cfg: &SweepConfig,
    make_ctx: impl Fn(u32) -> Result<Ctx>,
    mut sink: impl FnMut(&VerificationReport),
) -> Result<Vec<SweepSummary>> {
    let opts = VerifyOptions { form: cfg.form, mirror: cfg.mirror };
    let mut summaries = Vec::new();
    for &q in &cfg.qs {
        let ctx = make_ctx(q)?;
        // a missing table only means the right sides fall back to point sums
        let _ = ctx.table();
        for &id in &cfg.suite {
            let (instances, rejected) = match cfg.mode {
                Mode::Exhaustive => exhaustive_instances(&ctx, id, cfg.n, cfg.budget)?,
                Mode::Sample { count, seed } => sample_instances(&ctx, id, cfg.n, count, seed)?,
            };
            let mut s = SweepSummary {
                identity: id,
                form: cfg.form,
                q,
                n: cfg.n,
                mode: cfg.mode,
                rejected,
                checked: 0,
                passed: 0,
                failed: 0,
                mirror_failures: 0,
                first_counterexample: None,
            };
            let mut stop = false;
            for chunk in instances.chunks(CHUNK) {
                let reports: Vec<Result<VerificationReport>> =
                    chunk.par_iter().map(|inst| verify(&ctx, inst, opts)).collect();
                for r in reports {
                    let r = r?;
                    sink(&r);
                    s.checked += 1;
                    if r.mirror_ok == Some(false) {
                        s.mirror_failures += 1;
                    }
                    if passes(&r) {
                        s.passed += 1;
                    } else {
                        s.failed += 1;
                        if s.first_counterexample.is_none() {
                            s.first_counterexample = Some(r);
                        }
                        if cfg.fail_fast {
                            stop = true;
                            break;
                        }
                    }
                }
                if stop {
                    break;
                }
            }
            summaries.push(s);
            if stop {
                return Ok(summaries);
            }
        }
    }
    Ok(summaries)
}
