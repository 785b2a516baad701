//! Explicit-precision real arithmetic.
//!
//! A [`PrecisionContext`] pins the significand width `p` (bits). Every
//! operation returns a value correctly rounded to `p` bits under
//! round-to-nearest-even: add/mul/div/sqrt/exp/atan are rounded natively,
//! while the composite sigmoid is evaluated with [`GUARD_BITS`] extra bits
//! internally and rounded to `p` exactly once at the end.
//!
//! Sums are accumulated in ascending value order, making every sum a
//! function of the multiset of terms alone. Two nodes whose neighbor
//! features agree as multisets therefore compute bit-identical sums at any
//! precision, and readouts are invariant under node relabeling.

use rug::float::ParseFloatError;
use rug::Float;

use crate::error::{Error, Result};

/// Internal extra precision for composite transcendental evaluation.
pub const GUARD_BITS: u32 = 32;

/// Smallest supported significand width.
pub const MIN_BITS: u32 = 2;
/// Largest supported significand width (sanity cap).
pub const MAX_BITS: u32 = 1 << 20;

/// An arbitrary-precision real; its value is always exactly representable
/// in the precision it was produced under.
pub type Real = Float;

/// A fixed significand width with round-to-nearest-even semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: u32,
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(Error::invalid(format!(
                "precision must be between {MIN_BITS} and {MAX_BITS} bits, got {bits}"
            )));
        }
        Ok(PrecisionContext { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn zero(&self) -> Real {
        Float::new(self.bits)
    }

    pub fn one(&self) -> Real {
        Float::with_val(self.bits, 1)
    }

    /// Loads an `f64`, rounding to `p` bits.
    pub fn from_f64(&self, x: f64) -> Real {
        Float::with_val(self.bits, x)
    }

    /// Loads an integer, rounding to `p` bits.
    pub fn from_u64(&self, n: u64) -> Real {
        Float::with_val(self.bits, n)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        Float::with_val(self.bits, a + b)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        Float::with_val(self.bits, a * b)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        Float::with_val(self.bits, a / b)
    }

    /// Square root of an exact integer, correctly rounded.
    pub fn sqrt_of(&self, n: u32) -> Real {
        Float::with_val(self.bits, Float::sqrt_u(n))
    }

    pub fn exp(&self, x: &Real) -> Real {
        Float::with_val(self.bits, x.exp_ref())
    }

    pub fn atan(&self, x: &Real) -> Real {
        Float::with_val(self.bits, x.atan_ref())
    }

    /// Logistic sigmoid e^x/(1+e^x): exp, add, and div run at `p +
    /// GUARD_BITS` bits, then the quotient is rounded once to `p`.
    pub fn sigmoid(&self, x: &Real) -> Real {
        let q = self.bits + GUARD_BITS;
        let t = Float::with_val(q, x.exp_ref());
        let d = Float::with_val(q, 1 + &t);
        let r = Float::with_val(q, &t / &d);
        Float::with_val(self.bits, r)
    }

    /// Sum accumulated in ascending value order; the empty sum is 0.
    /// The result depends only on the multiset of terms.
    pub fn sum(&self, terms: &[Real]) -> Real {
        let mut order: Vec<&Real> = terms.iter().collect();
        order.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        order.into_iter().fold(self.zero(), |acc, t| self.add(&acc, t))
    }

    /// Canonical textual form (hexadecimal mantissa/exponent): equal values
    /// at equal precision produce equal strings, distinct values distinct
    /// strings. Round-trips through [`PrecisionContext::parse_hex`].
    pub fn format_hex(&self, x: &Real) -> String {
        x.to_string_radix(16, None)
    }

    /// Parses the output of [`PrecisionContext::format_hex`].
    pub fn parse_hex(&self, s: &str) -> Result<Real> {
        let incomplete = Float::parse_radix(s, 16)
            .map_err(|e: ParseFloatError| Error::invalid(format!("bad real literal `{s}`: {e}")))?;
        Ok(Float::with_val(self.bits, incomplete))
    }
}
