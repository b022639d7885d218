//! Exact and certified arithmetic.
//!
//! Integers and rationals come from `num`. Real quantities are carried as
//! [`RealBall`] enclosures whose radius is rounded outward at every step.

mod ball;
mod decimal;
mod dyadic;
mod factored;
mod fixed;

pub use ball::{ball_exp, ball_ln, ball_sqrt, RealBall};
pub use decimal::{
    fraction_to_decimal, fraction_to_sci_up, parse_decimal, round_scaled_half_even,
    signed_fraction_to_decimal,
};
pub use dyadic::Dyadic;
pub use factored::PowerProduct;

pub use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Exact rational, always in lowest terms with a positive denominator.
pub type Fraction = num_rational::BigRational;

pub const DEFAULT_START_BITS: u32 = 128;
pub const DEFAULT_MAX_BITS: u32 = 8192;

/// Requested enclosure width: the radius must not exceed `2^-bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetRad {
    pub bits: u32,
}

impl TargetRad {
    pub fn bits(bits: u32) -> Self {
        TargetRad { bits }
    }

    /// Radius at most `10^-digits`.
    pub fn decimal(digits: u32) -> Self {
        // log2(10) < 3.33
        TargetRad {
            bits: (digits as u64 * 333).div_ceil(100) as u32 + 1,
        }
    }

    pub fn met_by(&self, x: &RealBall) -> bool {
        x.rad_at_most_pow2(self.bits)
    }
}

impl Default for TargetRad {
    fn default() -> Self {
        TargetRad::bits(100)
    }
}

/// Working-precision schedule: start, then double until `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: DEFAULT_START_BITS,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, max_bits: u32) -> Result<Self> {
        if start_bits < 16 || start_bits > max_bits {
            return Err(Error::Parameter(format!(
                "precision schedule {start_bits}..{max_bits} bits is invalid"
            )));
        }
        Ok(PrecisionPolicy {
            start_bits,
            max_bits,
        })
    }

    /// Precisions tried in order: start, 2*start, ..., capped at max.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut p = self.start_bits;
        loop {
            out.push(p);
            if p >= self.max_bits {
                break;
            }
            p = p.saturating_mul(2).min(self.max_bits);
        }
        out
    }

    /// Start at least at `bits`, keeping the cap.
    pub fn at_least(&self, bits: u32) -> Self {
        PrecisionPolicy {
            start_bits: self.start_bits.max(bits).min(self.max_bits),
            max_bits: self.max_bits,
        }
    }

    /// Re-evaluate `f` at growing precision until the result meets `target`.
    pub fn certify<F>(&self, target: TargetRad, f: F) -> Result<RealBall>
    where
        F: Fn(u32) -> Result<RealBall>,
    {
        let mut start = *self;
        start.start_bits = start.start_bits.max(target.bits + 16).min(self.max_bits);
        for prec in start.schedule() {
            let x = f(prec)?;
            if target.met_by(&x) {
                return Ok(x);
            }
        }
        Err(Error::PrecisionExhausted {
            target_bits: target.bits,
            max_bits: self.max_bits,
        })
    }

    /// Re-run a ball decision until it resolves.
    pub fn decide<T, F>(&self, what: &str, f: F) -> Result<T>
    where
        F: Fn(u32) -> Result<Option<T>>,
    {
        for prec in self.schedule() {
            if let Some(v) = f(prec)? {
                return Ok(v);
            }
        }
        Err(Error::Indeterminate {
            what: what.to_string(),
            max_bits: self.max_bits,
        })
    }
}
