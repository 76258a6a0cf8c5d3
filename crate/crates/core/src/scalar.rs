//! Numeric abstraction for rates, weights and probabilities.
//!
//! Token counts are always exact integers. Everything real-valued in the
//! engine (timed rates, immediate weights, branching probabilities, CTMC
//! generator entries, steady-state vectors) is generic over [`Scalar`], so the
//! same elimination and linear-solve code runs on `f32`, `f64` or exact
//! rationals.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Field-like numeric type used for rates and probabilities.
pub trait Scalar:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Absolute magnitude below which a pivot is treated as zero.
    fn pivot_tolerance() -> Self;

    /// Parses a plain decimal literal (`12`, `-0.25`, `1e-3`).
    fn parse_decimal(text: &str) -> Option<Self>;

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `true` for values that are not finite (always `false` for rationals).
    fn is_non_finite(self) -> bool {
        false
    }

    /// Decimal text for the net format: six fractional digits when that
    /// reads back to the same value, otherwise the shortest exact form.
    fn format_decimal(self) -> String;
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn pivot_tolerance() -> Self {
                $tol
            }

            fn parse_decimal(text: &str) -> Option<Self> {
                text.trim().parse::<$t>().ok()
            }

            fn is_non_finite(self) -> bool {
                !self.is_finite()
            }

            fn format_decimal(self) -> String {
                let fixed = format!("{:.6}", self);
                if fixed.parse::<$t>().ok() == Some(self) {
                    fixed
                } else {
                    format!("{}", self)
                }
            }
        }
    };
}

impl_float_scalar!(f32, 1e-6);
impl_float_scalar!(f64, 1e-13);

impl Scalar for Rational64 {
    fn pivot_tolerance() -> Self {
        Rational64::from_integer(0)
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.contains(['e', 'E']) {
            let value: f64 = text.parse().ok()?;
            return Rational64::from_f64(value);
        }
        let (negative, digits) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let scale = 10i64.checked_pow(u32::try_from(frac_part.len()).ok()?)?;
        let int_value: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
        let frac_value: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
        let numer = int_value.checked_mul(scale)?.checked_add(frac_value)?;
        let value = Rational64::new(numer, scale);
        Some(if negative { -value } else { value })
    }

    /// Exact when the denominator divides a power of ten, else rounded.
    fn format_decimal(self) -> String {
        let denom = *self.denom();
        let mut scale: i64 = 1;
        let mut digits = 0usize;
        while digits <= 18 {
            if scale % denom == 0 {
                let numer = self.numer().checked_mul(scale / denom);
                if let Some(n) = numer {
                    let width = digits.max(6);
                    let pad = 10i64.pow((width - digits) as u32);
                    if let Some(n) = n.checked_mul(pad) {
                        let unit = scale * pad;
                        let sign = if n < 0 { "-" } else { "" };
                        let n = n.unsigned_abs();
                        let unit = unit.unsigned_abs();
                        return format!("{sign}{}.{:0width$}", n / unit, n % unit, width = width);
                    }
                }
                break;
            }
            match scale.checked_mul(10) {
                Some(next) => scale = next,
                None => break,
            }
            digits += 1;
        }
        format!("{:.6}", self.to_f64_lossy())
    }
}
