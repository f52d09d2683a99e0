//! Fixed-point message arithmetic.
//!
//! Decoder messages are sign-magnitude values with a small magnitude field
//! (3 bits for the default 4-bit format). Sums inside the variable node unit
//! are carried in two's complement at accumulator width and saturated, never
//! wrapped.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use crate::error::DecodeError;

/// Sign bit of a sign-magnitude message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    /// Sign of a two's complement value; zero is `Plus`.
    pub fn of(value: i32) -> Sign {
        if value < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// A sign-magnitude message. `-0` is representable and keeps its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Msg {
    pub sign: Sign,
    pub mag: u16,
}

impl Msg {
    pub const ZERO: Msg = Msg {
        sign: Sign::Plus,
        mag: 0,
    };

    pub fn new(sign: Sign, mag: u16) -> Msg {
        Msg { sign, mag }
    }

    /// Two's complement view; `-0` becomes `0`.
    pub fn value(self) -> i32 {
        self.sign.as_i32() * i32::from(self.mag)
    }

    /// Saturate a two's complement value into a message with magnitude at
    /// most `max_mag`. Zero maps to `+0`.
    pub fn saturating_from(value: i32, max_mag: u16) -> Msg {
        let mag = value.unsigned_abs().min(u32::from(max_mag)) as u16;
        Msg {
            sign: Sign::of(value),
            mag,
        }
    }
}

impl fmt::Display for Msg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign.is_minus() { '-' } else { '+' };
        write!(f, "{s}{}", self.mag)
    }
}

/// Quantization and word-width parameters of the fixed-point datapath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointFormat {
    /// Total bits per message: one sign bit plus the magnitude field.
    pub message_bits: u32,
    /// Quantizer step in LLR units.
    pub step: f64,
    /// Width of the internal two's complement adders.
    pub accumulator_bits: u32,
}

impl Default for FixedPointFormat {
    fn default() -> Self {
        FixedPointFormat {
            message_bits: 4,
            step: 0.5,
            accumulator_bits: 10,
        }
    }
}

impl FixedPointFormat {
    pub fn new(message_bits: u32, step: f64) -> Result<Self, DecodeError> {
        let fmt = FixedPointFormat {
            message_bits,
            step,
            accumulator_bits: message_bits + 6,
        };
        fmt.validate()?;
        Ok(fmt)
    }

    pub fn with_accumulator_bits(mut self, bits: u32) -> Self {
        self.accumulator_bits = bits;
        self
    }

    pub fn magnitude_max(&self) -> u16 {
        ((1u32 << (self.message_bits - 1)) - 1) as u16
    }

    /// Largest accumulator magnitude (symmetric range).
    pub fn accumulator_max(&self) -> i32 {
        ((1i64 << (self.accumulator_bits - 1)) - 1) as i32
    }

    pub fn saturate_accumulator(&self, value: i64) -> i32 {
        let max = i64::from(self.accumulator_max());
        value.clamp(-max, max) as i32
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        if !(2..=16).contains(&self.message_bits) {
            return Err(DecodeError::Config(format!(
                "message_bits {} outside 2..=16",
                self.message_bits
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(DecodeError::Config(format!(
                "quantizer step {} must be positive",
                self.step
            )));
        }
        if self.accumulator_bits < self.message_bits + 2 || self.accumulator_bits > 31 {
            return Err(DecodeError::Config(format!(
                "accumulator_bits {} outside {}..=31",
                self.accumulator_bits,
                self.message_bits + 2
            )));
        }
        Ok(())
    }

    /// Adders must hold the full extrinsic sum of a degree-`max_var_degree`
    /// variable plus headroom for the intrinsic and the scaling.
    pub fn validate_for_degree(&self, max_var_degree: usize) -> Result<(), DecodeError> {
        self.validate()?;
        let need = self.message_bits + ceil_log2(max_var_degree as u64 + 1) + 2;
        if self.accumulator_bits < need {
            return Err(DecodeError::Config(format!(
                "accumulator_bits {} too narrow for variable degree {max_var_degree} (need {need})",
                self.accumulator_bits
            )));
        }
        Ok(())
    }
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Uniform sign-magnitude quantizer with round-half-away-from-zero and
/// saturation at the format's magnitude limit. `0.0` and `-0.0` map to `+0`.
pub fn quantize(llr: f64, fmt: &FixedPointFormat) -> Msg {
    let max = fmt.magnitude_max();
    let scaled = (llr.abs() / fmt.step).round();
    let mag = if scaled.is_nan() {
        0
    } else if scaled >= f64::from(max) {
        max
    } else {
        scaled as u16
    };
    let sign = if llr < 0.0 { Sign::Minus } else { Sign::Plus };
    Msg { sign, mag }
}

/// Multiplication by 0.75 as the shift-add `(|x| >> 1) + (|x| >> 2)` on the
/// magnitude, sign reattached.
pub fn scale_three_quarters(x: i32) -> i32 {
    let m = x.unsigned_abs();
    let r = ((m >> 1) + (m >> 2)) as i32;
    if x < 0 {
        -r
    } else {
        r
    }
}

/// Scaling applied to the extrinsic sum in the variable node update.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Scaling {
    /// 0.75 through the shift-add datapath.
    #[default]
    ThreeQuarters,
    /// Arbitrary factor, magnitude truncated toward zero.
    Factor(f64),
}

impl Scaling {
    pub fn from_alpha(alpha: f64) -> Scaling {
        if alpha == 0.75 {
            Scaling::ThreeQuarters
        } else {
            Scaling::Factor(alpha)
        }
    }

    pub fn alpha(self) -> f64 {
        match self {
            Scaling::ThreeQuarters => 0.75,
            Scaling::Factor(a) => a,
        }
    }

    pub fn apply(self, x: i32) -> i32 {
        match self {
            Scaling::ThreeQuarters => scale_three_quarters(x),
            Scaling::Factor(a) => {
                let r = (f64::from(x.unsigned_abs()) * a).trunc() as i32;
                if x < 0 {
                    -r
                } else {
                    r
                }
            }
        }
    }
}
