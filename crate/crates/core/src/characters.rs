//! Multiplicative characters of `F_q^×`.
//!
//! `χ_j(g^k) = ζ^{jk}` with `ζ = e^{2πi/(q-1)}` and `g` the field's canonical
//! generator. Every character, the trivial one included, is extended by
//! `χ(0) = 0`. Evaluation lives on [`Ctx`](crate::Ctx).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    j: u32,
    m: u32,
    field: FieldId,
}

impl Character {
    /// `χ_j`, with `j` reduced mod `q - 1`.
    pub fn new(field: &FieldCtx, j: i64) -> Character {
        let m = field.order();
        Character { j: j.rem_euclid(m as i64) as u32, m, field: field.id() }
    }

    pub fn trivial(field: &FieldCtx) -> Character {
        Character::new(field, 0)
    }

    pub fn index(self) -> u32 {
        self.j
    }

    pub fn field(self) -> FieldId {
        self.field
    }

    /// Order of the character group, `q - 1`.
    pub fn group_order(self) -> u32 {
        self.m
    }

    pub fn is_trivial(self) -> bool {
        self.j == 0
    }

    fn same_field(self, other: Character) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "characters of {} and {}",
                self.field, other.field
            )))
        }
    }

    /// Group product; fails when the characters belong to different fields.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Character) -> Result<Character> {
        self.same_field(other)?;
        Ok(self.times(other))
    }

    /// Group product for characters already known to share a field.
    pub(crate) fn times(self, other: Character) -> Character {
        debug_assert_eq!(self.field, other.field);
        Character { j: (self.j + other.j) % self.m, ..self }
    }

    /// The conjugate (inverse) character `χ̄`.
    pub fn inv(self) -> Character {
        Character { j: (self.m - self.j) % self.m, ..self }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: Character) -> Result<Character> {
        self.mul(other.inv())
    }

    pub fn pow(self, e: i64) -> Character {
        let j = (self.j as i64 * e).rem_euclid(self.m as i64) as u32;
        Character { j, ..self }
    }

    /// `χ(-1) = ±1`, which is `(-1)^j` since `-1 = g^{(q-1)/2}`.
    pub fn at_minus_one(self) -> i64 {
        if self.j.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Parses `chi<j>` (or `eps` for the trivial character).
    pub fn parse(field: &FieldCtx, s: &str) -> Result<Character> {
        let s = s.trim();
        if s == "eps" {
            return Ok(Character::trivial(field));
        }
        let j = s
            .strip_prefix("chi")
            .and_then(|rest| rest.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("bad character `{s}`, expected chi<j>")))?;
        if j >= field.order() {
            return Err(Error::Parse(format!(
                "character index {j} out of range 0..{} for {}",
                field.order(),
                field.id()
            )));
        }
        Ok(Character::new(field, j as i64))
    }

    /// Parses a comma-separated list of characters.
    pub fn parse_list(field: &FieldCtx, s: &str) -> Result<Vec<Character>> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| Character::parse(field, t))
            .collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi{}", self.j)
    }
}

/// All `q - 1` characters in index order; index 0 is `ε`.
pub fn char_group(field: &FieldCtx) -> Vec<Character> {
    (0..field.order()).map(|j| Character::new(field, j as i64)).collect()
}
