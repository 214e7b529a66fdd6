//! Exact verification of the reduction, transformation and generating-function
//! identities for `F_A^(n)`.
//!
//! Each check evaluates both sides independently: the left side through the
//! point-sum route and the right side, whose `F_A` terms have different
//! parameters, through the character-sum route when a binomial table is
//! available. Both sides are also recomputed in floating point as a
//! consistency check.
//!
//! Several identities are available in two [`Form`]s. `Printed` is the
//! statement as usually displayed; `Corrected` adds the boundary terms that
//! the displayed statements drop. They coincide for `reduction_cov1`.
//! The corrections:
//!
//! * `reduction_split`: the second term carries a factor `ε(x_k)`.
//! * `reduction_cov2`: first term `ĀC_l(-1)/q · Ā(x_l t) B̄_kC_k(t) B_k(x_k) C̄_k(x_k - t)`
//!   with arguments `-x_i/x_l`, in place of `ĀB_kC_kC_l(-1)/q · Ā(x_l t) B_k(x_k) B̄_k(x_k - t)`
//!   with arguments `-x_i t/x_l`.
//! * `eps_reduction` (`B_k = ε`):
//!   `ε(x_k)C_k(-1)/q · [C_k(-1) C̄_k(x_k) ĀC_k(1-x_k) J(Ā,C_k) F[AC̄_k | x/(1-x_k)]
//!   + (q-1)[A = C_k] C̄_k(x_k) W(1-x_k) - F[A | x]]`.
//! * `equal_reduction` (`C_k = B_k`):
//!   `ε(x_k)/q · [B̄_k(x_k) J(B_k,Ā) F[AB̄_k | x] + (q-1)[A = B_k] Ā(-x_k) W(1)
//!   - Ā(1-x_k) F[A | x/(1-x_k)]]`.
//! * `genfunc_forward`: subtract `Ā(-t) W(1)`; `genfunc_reversed`: subtract `W(1)`.
//! * `genfunc_local`: subtract `ε(x_k) B_kC_k(-1)/q · B̄_kC_k(t) · Σ w(t') Ā(1 - x_k - Σ x_i t'_i)`
//!   over the slots other than `k`.
//!
//! Here `W(c)` is the sum of the point-sum weights of the remaining slots over
//! the hyperplane `Σ x_i t_i = c` (see [`crate::hypergeometric::level_weight`]).

pub(crate) mod formulas;
pub mod sweep;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::characters::Character;
use crate::context::Ctx;
use crate::cyclotomic::CycloNum;
use crate::error::{domain, Error, Result};
use crate::field::FieldElem;
use crate::hypergeometric::{ParamsJson, Route, SeriesParams};
use crate::mirror::{rescaled_delta, Mirror, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    ReductionSplit,
    ReductionCov1,
    ReductionCov2,
    EpsReduction,
    EqualReduction,
    GenfuncForward,
    GenfuncReversed,
    GenfuncLocal,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::ReductionSplit,
        IdentityId::ReductionCov1,
        IdentityId::ReductionCov2,
        IdentityId::EpsReduction,
        IdentityId::EqualReduction,
        IdentityId::GenfuncForward,
        IdentityId::GenfuncReversed,
        IdentityId::GenfuncLocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::ReductionSplit => "reduction_split",
            IdentityId::ReductionCov1 => "reduction_cov1",
            IdentityId::ReductionCov2 => "reduction_cov2",
            IdentityId::EpsReduction => "eps_reduction",
            IdentityId::EqualReduction => "equal_reduction",
            IdentityId::GenfuncForward => "genfunc_forward",
            IdentityId::GenfuncReversed => "genfunc_reversed",
            IdentityId::GenfuncLocal => "genfunc_local",
        }
    }

    pub fn is_reduction(self) -> bool {
        self.ordinal() < 5
    }

    pub(crate) fn ordinal(self) -> usize {
        IdentityId::ALL.iter().position(|&i| i == self).unwrap()
    }

    pub fn uses_k(self) -> bool {
        !matches!(self, IdentityId::GenfuncForward | IdentityId::GenfuncReversed)
    }

    pub fn uses_l(self) -> bool {
        matches!(
            self,
            IdentityId::ReductionSplit | IdentityId::ReductionCov1 | IdentityId::ReductionCov2
        )
    }

    pub fn uses_t(self) -> bool {
        matches!(
            self,
            IdentityId::ReductionCov2
                | IdentityId::GenfuncForward
                | IdentityId::GenfuncReversed
                | IdentityId::GenfuncLocal
        )
    }

    /// Parses a comma-separated suite: identity names, `all`, `reduction`
    /// or `genfunc`.
    pub fn parse_suite(s: &str) -> Result<Vec<IdentityId>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" => out.extend(IdentityId::ALL),
                "reduction" => out.extend(IdentityId::ALL.iter().filter(|i| i.is_reduction())),
                "genfunc" => out.extend(IdentityId::ALL.iter().filter(|i| !i.is_reduction())),
                name => out.push(name.parse()?),
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty identity suite".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<IdentityId> {
        IdentityId::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown identity `{s}`")))
    }
}

/// Which right-hand side to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// The statement as displayed.
    Printed,
    /// The statement with the missing boundary terms restored.
    #[default]
    Corrected,
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Form> {
        match s {
            "printed" => Ok(Form::Printed),
            "corrected" => Ok(Form::Corrected),
            _ => Err(Error::Parse(format!("unknown form `{s}`"))),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Printed => "printed",
            Form::Corrected => "corrected",
        })
    }
}

/// One identity applied to one parameter set. `k` and `l` are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub id: IdentityId,
    pub params: SeriesParams,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub t: Option<FieldElem>,
}

impl Instance {
    pub(crate) fn k_idx(&self) -> usize {
        self.k.expect("validated instance has k")
    }
    pub(crate) fn l_idx(&self) -> usize {
        self.l.expect("validated instance has l")
    }
    pub(crate) fn t_elem(&self) -> FieldElem {
        self.t.expect("validated instance has t")
    }

    /// Checks the hypotheses of the identity; the error names the first
    /// violated one.
    pub fn validate(&self, ctx: &Ctx) -> Result<()> {
        let p = &self.params;
        p.check(ctx)?;
        let n = p.n();
        let f = ctx.field();
        let id = self.id;
        if id.is_reduction() && n < 2 {
            return domain(format!("{id} requires n >= 2"));
        }
        if id.uses_k() {
            match self.k {
                None => return domain(format!("{id} requires k")),
                Some(k) if k >= n => return domain(format!("{id} requires 1 <= k <= n")),
                _ => {}
            }
        }
        if id.uses_l() {
            match (self.k, self.l) {
                (_, None) => return domain(format!("{id} requires l")),
                (_, Some(l)) if l >= n => return domain(format!("{id} requires 1 <= l <= n")),
                (Some(k), Some(l)) if k == l => return domain(format!("{id} requires k != l")),
                (_, Some(l)) if p.xs[l].is_zero() => {
                    return domain(format!("{id} requires x_l != 0"))
                }
                _ => {}
            }
        }
        if id.uses_t() {
            let Some(t) = self.t else {
                return domain(format!("{id} requires t"));
            };
            ctx.check_elem(t)?;
            if !id.is_reduction() && (t.is_zero() || t == f.one()) {
                return domain(format!("{id} requires t not in {{0, 1}}"));
            }
        }
        match id {
            IdentityId::ReductionCov2 if p.xs[self.k_idx()].is_zero() => {
                domain(format!("{id} requires x_k != 0"))
            }
            IdentityId::EpsReduction => {
                let k = self.k_idx();
                if !p.bs[k].is_trivial() {
                    domain(format!("{id} requires B_k = eps"))
                } else if p.xs[k] == f.one() {
                    domain(format!("{id} requires x_k != 1"))
                } else {
                    Ok(())
                }
            }
            IdentityId::EqualReduction => {
                let k = self.k_idx();
                if p.cs[k] != p.bs[k] {
                    domain(format!("{id} requires C_k = B_k"))
                } else if p.xs[k] == f.one() {
                    domain(format!("{id} requires x_k != 1"))
                } else if p.xs[k].is_zero() {
                    domain(format!("{id} requires x_k != 0"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Outcome of one check. Serializes to one JSON object; `elapsed` is kept
/// out of the default serialization so that reports are reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub form: Form,
    pub q: u32,
    pub n: usize,
    pub params: ParamsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    pub lhs: CycloNum,
    pub rhs: CycloNum,
    pub equal: bool,
    /// Largest `q^n`-rescaled deviation of the float mirror from either side.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror_ok: Option<bool>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub instance: Instance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub form: Form,
    pub mirror: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { form: Form::Corrected, mirror: true }
    }
}

/// Evaluates both sides of `inst` and compares them exactly.
pub fn verify(ctx: &Ctx, inst: &Instance, opts: VerifyOptions) -> Result<VerificationReport> {
    inst.validate(ctx)?;
    let start = Instant::now();
    let rhs_route = if ctx.table().is_ok() { Route::Charsum } else { Route::Direct };
    let lhs_be = formulas::Exact { ctx: ctx.clone(), route: Route::Direct };
    let rhs_be = formulas::Exact { ctx: ctx.clone(), route: rhs_route };
    let lhs = formulas::lhs(&lhs_be, inst)?;
    let rhs = formulas::rhs(&rhs_be, inst, opts.form)?;
    let equal = lhs == rhs;
    let n = inst.params.n();
    let (mirror_delta, mirror_ok) = if opts.mirror {
        let mir = Mirror::new(ctx);
        let fb = formulas::Float { mir: &mir };
        let fl = formulas::lhs(&fb, inst)?;
        let fr = formulas::rhs(&fb, inst, opts.form)?;
        let d = rescaled_delta(ctx.q(), n, &lhs, fl).max(rescaled_delta(ctx.q(), n, &rhs, fr));
        (Some(d), Some(d < TOLERANCE))
    } else {
        (None, None)
    };
    let elapsed = start.elapsed();
    Ok(VerificationReport {
        identity: inst.id,
        form: opts.form,
        q: ctx.q(),
        n,
        params: inst.params.to_json(ctx),
        k: inst.k.map(|k| k + 1),
        l: inst.l.map(|l| l + 1),
        t: inst.t.map(|t| ctx.field().format_elem(t)),
        lhs,
        rhs,
        equal,
        mirror_delta,
        mirror_ok,
        elapsed,
        instance: inst.clone(),
    })
}

fn run(
    ctx: &Ctx,
    id: IdentityId,
    params: &SeriesParams,
    k: Option<usize>,
    l: Option<usize>,
    t: Option<FieldElem>,
    form: Form,
) -> Result<VerificationReport> {
    let inst = Instance { id, params: params.clone(), k, l, t };
    verify(ctx, &inst, VerifyOptions { form, mirror: true })
}

/// Split reduction; `k`, `l` are 0-based slot indices.
pub fn verify_reduction_split(ctx: &Ctx, p: &SeriesParams, k: usize, l: usize, form: Form) -> Result<VerificationReport> {
    run(ctx, IdentityId::ReductionSplit, p, Some(k), Some(l), None, form)
}

pub fn verify_reduction_cov1(ctx: &Ctx, p: &SeriesParams, k: usize, l: usize, form: Form) -> Result<VerificationReport> {
    run(ctx, IdentityId::ReductionCov1, p, Some(k), Some(l), None, form)
}

pub fn verify_reduction_cov2(
    ctx: &Ctx,
    p: &SeriesParams,
    k: usize,
    l: usize,
    t: FieldElem,
    form: Form,
) -> Result<VerificationReport> {
    run(ctx, IdentityId::ReductionCov2, p, Some(k), Some(l), Some(t), form)
}

pub fn verify_eps_reduction(ctx: &Ctx, p: &SeriesParams, k: usize, form: Form) -> Result<VerificationReport> {
    run(ctx, IdentityId::EpsReduction, p, Some(k), None, None, form)
}

pub fn verify_equal_reduction(ctx: &Ctx, p: &SeriesParams, k: usize, form: Form) -> Result<VerificationReport> {
    run(ctx, IdentityId::EqualReduction, p, Some(k), None, None, form)
}

pub fn verify_genfunc_forward(ctx: &Ctx, p: &SeriesParams, t: FieldElem, form: Form) -> Result<VerificationReport> {
    run(ctx, IdentityId::GenfuncForward, p, None, None, Some(t), form)
}

pub fn verify_genfunc_reversed(ctx: &Ctx, p: &SeriesParams, t: FieldElem, form: Form) -> Result<VerificationReport> {
    run(ctx, IdentityId::GenfuncReversed, p, None, None, Some(t), form)
}

pub fn verify_genfunc_local(ctx: &Ctx, p: &SeriesParams, k: usize, t: FieldElem, form: Form) -> Result<VerificationReport> {
    run(ctx, IdentityId::GenfuncLocal, p, Some(k), None, Some(t), form)
}

/// A character-valued helper for building instances in tests and the CLI.
pub fn with_slot(p: &SeriesParams, k: usize, b: Option<Character>, c: Option<Character>) -> SeriesParams {
    let mut out = p.clone();
    if let Some(b) = b {
        out.bs[k] = b;
    }
    if let Some(c) = c {
        out.cs[k] = c;
    }
    out
}
