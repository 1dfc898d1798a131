use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Working precision plus the slack used for every "is zero" decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub bits: u32,
    pub guard_bits: u32,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;
    pub const MIN_GUARD: u32 = 32;
    pub const DEFAULT_GUARD: u32 = 40;

    pub fn new(bits: u32) -> Result<Self> {
        Self::with_guard(bits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidContext(format!("bits = {bits} < {}", Self::MIN_BITS)));
        }
        if guard_bits < Self::MIN_GUARD {
            return Err(Error::InvalidContext(format!("guard_bits = {guard_bits} < {}", Self::MIN_GUARD)));
        }
        if guard_bits + 16 > bits {
            return Err(Error::InvalidContext("guard_bits leaves no significant bits".into()));
        }
        Ok(PrecisionContext { bits, guard_bits })
    }

    /// Exponent `e` with tolerance `2^-e`.
    pub fn tol_exp(&self) -> u32 {
        self.bits - self.guard_bits
    }

    /// The single tolerance `2^-(bits - guard_bits)`.
    pub fn tol(&self) -> Float {
        Float::with_val(self.bits, Float::i_exp(1, -(self.tol_exp() as i32)))
    }

    pub fn is_zero(&self, x: &Float) -> bool {
        x.clone().abs() < self.tol()
    }

    /// Same context at a higher working precision, keeping the guard.
    pub fn raised(&self, extra: u32) -> Self {
        PrecisionContext { bits: self.bits + extra, guard_bits: self.guard_bits }
    }

    /// Decimal digits that are meaningful at this precision.
    pub fn digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { bits: 256, guard_bits: Self::DEFAULT_GUARD }
    }
}
