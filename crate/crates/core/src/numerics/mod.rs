//! Precision contexts, MPFR-backed reals and closed-form expressions.
//!
//! Every real-valued computation in the crate runs at the binary precision
//! derived from a [`PrecisionContext`]. Values are plain [`rug::Float`]s,
//! which carry correctly rounded elementary functions.

mod expr;
mod parse;

pub use expr::{eval_expr, ClosedFormExpr};
pub use parse::parse_expr;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::{Error, Result};

/// Arbitrary-precision real used throughout the crate.
pub type Real = Float;

const DEFAULT_GUARD_DIGITS: u32 = 10;
const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Decimal digit budget for one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
    working_digits: u32,
    max_expected_terms: u64,
}

/// Builds a context with the default guard of 10 digits.
pub fn make_context(target_digits: u32, max_expected_terms: u64) -> Result<PrecisionContext> {
    PrecisionContext::new(target_digits, DEFAULT_GUARD_DIGITS, max_expected_terms)
}

impl PrecisionContext {
    pub fn new(target_digits: u32, guard_digits: u32, max_expected_terms: u64) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::ZeroDigits);
        }
        let max_expected_terms = max_expected_terms.max(1);
        Ok(PrecisionContext {
            target_digits,
            guard_digits,
            working_digits: target_digits + guard_digits + ceil_log10(max_expected_terms),
            max_expected_terms,
        })
    }

    /// Same guard and term budget, different target.
    pub fn with_target(&self, target_digits: u32) -> Result<Self> {
        Self::new(target_digits, self.guard_digits, self.max_expected_terms)
    }

    /// Same target and guard, different term budget.
    pub fn with_max_terms(&self, max_expected_terms: u64) -> Self {
        Self::new(self.target_digits, self.guard_digits, max_expected_terms)
            .expect("target already validated")
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn max_expected_terms(&self) -> u64 {
        self.max_expected_terms
    }

    /// Binary precision matching `working_digits`.
    pub fn bits(&self) -> u32 {
        (self.working_digits as f64 * BITS_PER_DIGIT).ceil() as u32 + 8
    }

    /// A real at working precision.
    pub fn real<T>(&self, value: T) -> Real
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn pi(&self) -> Real {
        self.real(Constant::Pi)
    }

    /// `10^exp` at working precision.
    pub fn ten_pow(&self, exp: i32) -> Real {
        self.real(10).pow(exp)
    }

    /// `10^(-target_digits)`.
    pub fn epsilon(&self) -> Real {
        self.ten_pow(-(self.target_digits as i32))
    }
}

fn ceil_log10(n: u64) -> u32 {
    let mut digits = 0;
    let mut power: u128 = 1;
    while power < n as u128 {
        power *= 10;
        digits += 1;
    }
    digits
}

/// The golden ratio `(1 + sqrt 5) / 2`.
pub fn golden_ratio(ctx: &PrecisionContext) -> Real {
    (ctx.real(5).sqrt() + 1u32) / 2u32
}

/// The conjugate `(1 - sqrt 5) / 2`.
pub fn golden_conjugate(ctx: &PrecisionContext) -> Real {
    (1u32 - ctx.real(5).sqrt()) / 2u32
}

/// Decimal rendering with `sig` significant digits.
///
/// Plain positional notation is used for moderate exponents and
/// `d.ddde-N` otherwise.
pub fn format_real(x: &Real, sig: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let (neg, digits, exp) = x.to_sign_string_exp(10, Some(sig.max(1)));
    let exp = exp.expect("normal value has an exponent");
    let sign = if neg { "-" } else { "" };
    let n = digits.len() as i32;
    let body = if (-6..=0).contains(&exp) {
        format!("0.{}{}", "0".repeat((-exp) as usize), digits)
    } else if exp > 0 && exp < n {
        let (int, frac) = digits.split_at(exp as usize);
        format!("{int}.{frac}")
    } else if exp >= n && exp <= 40 {
        format!("{}{}", digits, "0".repeat((exp - n) as usize))
    } else {
        let (lead, rest) = digits.split_at(1);
        if rest.is_empty() {
            format!("{lead}e{}", exp - 1)
        } else {
            format!("{lead}.{rest}e{}", exp - 1)
        }
    };
    format!("{sign}{body}")
}

/// Number of leading decimal digits on which `a` and `b` agree.
///
/// Relative difference when `|b| >= 1`, absolute difference otherwise,
/// floored at zero and capped at `cap`.
pub fn matched_digits(a: &Real, b: &Real, cap: u32) -> u32 {
    if !a.is_finite() || !b.is_finite() {
        return 0;
    }
    let diff = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = Float::with_val(b.prec(), b.abs_ref());
    let err = if scale >= 1 { diff / scale } else { diff };
    let digits = -err.log10().to_f64();
    if digits <= 0.0 {
        0
    } else {
        ((digits + 1e-9).floor() as u32).min(cap)
    }
}
