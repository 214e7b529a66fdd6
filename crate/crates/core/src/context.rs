//! A field together with its value ring `Q(ζ_{q-1})` and, on demand, the
//! binomial table used by the character-sum evaluators.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::char_sums::BinomialTable;
use crate::characters::{char_group, Character};
use crate::cyclotomic::{CycloCtx, CycloNum};
use crate::error::{Error, Result};
use crate::field::{split_prime_power, FieldCtx, FieldElem};

struct Inner {
    field: FieldCtx,
    cyclo: Arc<CycloCtx>,
    table: OnceLock<Result<Arc<BinomialTable>, String>>,
}

/// Cheaply clonable, immutable evaluation context.
#[derive(Clone)]
pub struct Ctx(Arc<Inner>);

impl std::fmt::Debug for Ctx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ctx({})", self.0.field.id())
    }
}

impl Ctx {
    pub fn new(p: u32, r: u32) -> Result<Ctx> {
        Self::from_field(FieldCtx::new(p, r)?)
    }

    /// Context for a prime power `q`.
    pub fn for_q(q: u32) -> Result<Ctx> {
        let (p, r) = split_prime_power(q)?;
        Self::new(p, r)
    }

    pub fn from_field(field: FieldCtx) -> Result<Ctx> {
        let cyclo = CycloCtx::new(field.order())?;
        Ok(Ctx(Arc::new(Inner { field, cyclo, table: OnceLock::new() })))
    }

    pub fn field(&self) -> &FieldCtx {
        &self.0.field
    }

    pub fn cyclo(&self) -> &Arc<CycloCtx> {
        &self.0.cyclo
    }

    pub fn q(&self) -> u32 {
        self.0.field.q()
    }

    /// `q - 1`, the order of the character group.
    pub fn m(&self) -> u32 {
        self.0.field.order()
    }

    pub fn character(&self, j: i64) -> Character {
        Character::new(&self.0.field, j)
    }

    pub fn eps(&self) -> Character {
        Character::trivial(&self.0.field)
    }

    pub fn characters(&self) -> Vec<Character> {
        char_group(&self.0.field)
    }

    pub fn elem(&self, i: i64) -> FieldElem {
        self.0.field.from_int(i)
    }

    pub(crate) fn check(&self, chi: Character) -> Result<()> {
        if chi.field() == self.0.field.id() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "character of {} used with {}",
                chi.field(),
                self.0.field.id()
            )))
        }
    }

    pub(crate) fn check_elem(&self, x: FieldElem) -> Result<()> {
        self.0.field.elem(x.index()).map(|_| ())
    }

    /// Exponent `e` with `χ_j(x) = ζ^e`, or `None` when `x = 0`.
    #[inline]
    pub(crate) fn chi_exp(&self, j: u32, x: FieldElem) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            let m = self.m() as u64;
            Some(((j as u64 * self.0.field.dlog_unchecked(x) as u64) % m) as u32)
        }
    }

    /// `χ(x)` with `χ(0) = 0`.
    pub fn chi(&self, chi: Character, x: FieldElem) -> Result<CycloNum> {
        self.check(chi)?;
        self.check_elem(x)?;
        Ok(self.chi_unchecked(chi, x))
    }

    pub(crate) fn chi_unchecked(&self, chi: Character, x: FieldElem) -> CycloNum {
        match self.chi_exp(chi.index(), x) {
            None => self.cyclo().zero(),
            Some(e) => self.cyclo().root_of_unity(e as i64),
        }
    }

    /// `δ(x)`: 1 at zero, 0 elsewhere.
    pub fn delta(&self, x: FieldElem) -> BigRational {
        if x.is_zero() {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }

    pub fn rational(&self, n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn has_table(&self) -> bool {
        matches!(self.0.table.get(), Some(Ok(_)))
    }

    /// The binomial table, built on first use.
    pub fn table(&self) -> Result<Arc<BinomialTable>> {
        self.0
            .table
            .get_or_init(|| BinomialTable::build(self).map(Arc::new).map_err(|e| e.to_string()))
            .clone()
            .map_err(Error::Capacity)
    }
}
