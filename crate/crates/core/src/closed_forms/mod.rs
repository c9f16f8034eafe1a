//! Closed-form right-hand sides.
//!
//! The identities here are written in terms of the pair `(x, y)` with
//! series argument `z = 27xy/(x+y)^2`:
//!
//! * level A sums `z^k/(k^2 C(3k,k))`,
//! * level B sums `z^k/(k C(3k,k))`,
//! * level C sums `z^k/C(3k,k)`.
//!
//! Cube roots are real and sign-preserving and `arctan` is the principal
//! branch throughout.

mod families;

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;

use crate::numerics::{ClosedFormExpr as E, PrecisionContext, Real};
use crate::{Error, Result};

pub use families::{
    theorem_expr, theorem_lhs_spec, theorem_rhs, theorem_substitution, thm7_branch_pair, thm7_intermediate, validate,
    Branch, Family, FamilyArgs, Kind, TheoremParams,
};

/// Exponent level of an `(x, y)` identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    A,
    B,
    C,
}

impl Level {
    /// Power of `k` in the denominator.
    pub fn exponent(self) -> u8 {
        match self {
            Level::A => 2,
            Level::B => 1,
            Level::C => 0,
        }
    }

    pub fn from_exponent(a: u8) -> Option<Level> {
        match a {
            2 => Some(Level::A),
            1 => Some(Level::B),
            0 => Some(Level::C),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::A => "A",
            Level::B => "B",
            Level::C => "C",
        })
    }
}

fn cube(x: &Real) -> Real {
    Float::with_val(x.prec(), Pow::pow(x, 3u32))
}

/// `cbrt((27 - 2z + 3 sqrt(81 - 12z)) / (2z))`.
pub fn phi(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if z.is_zero() {
        return Err(Error::domain("phi is undefined at z = 0", "z"));
    }
    let disc = ctx.real(81) - ctx.real(z * 12u32);
    if disc < 0 {
        return Err(Error::domain("z exceeds 27/4", "81 - 12z"));
    }
    let num = ctx.real(27) - ctx.real(z * 2u32) + disc.sqrt() * 3u32;
    Ok((num / ctx.real(z * 2u32)).cbrt())
}

/// `6 atan^2(sqrt3/(2 phi - 1)) - 1/2 log^2((phi^3 + 1)/(phi + 1)^3)`.
pub fn batir_rhs(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let f = phi(z, ctx)?;
    let den = ctx.real(&f * 2u32) - 1u32;
    if den.is_zero() {
        return Err(Error::domain("2 phi - 1 vanishes", "2*phi - 1"));
    }
    let s3 = ctx.real(3).sqrt();
    let at = (s3 / den).atan();
    let num = cube(&f) + 1u32;
    let arg = num / cube(&ctx.real(&f + 1u32));
    if arg <= 0 {
        return Err(Error::domain("log of a non-positive value", "(phi^3 + 1)/(phi + 1)^3"));
    }
    Ok(at.square() * 6u32 - arg.ln().square() / 2u32)
}

/// A point `(x, y)` with `z = 27xy/(x+y)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct XYPair {
    pub x: Real,
    pub y: Real,
}

impl XYPair {
    pub fn new(x: Real, y: Real) -> Self {
        XYPair { x, y }
    }

    pub fn from_exprs(x: &E, y: &E, ctx: &PrecisionContext) -> Result<Self> {
        Ok(XYPair::new(x.eval(ctx)?, y.eval(ctx)?))
    }

    pub fn swapped(&self) -> Self {
        XYPair::new(self.y.clone(), self.x.clone())
    }

    pub fn ratio(&self) -> Real {
        Float::with_val(self.x.prec(), &self.x / &self.y)
    }

    /// `27xy/(x+y)^2`.
    pub fn argument(&self, ctx: &PrecisionContext) -> Result<Real> {
        let s = ctx.real(&self.x + &self.y);
        if s.is_zero() {
            return Err(Error::domain("x + y vanishes", "x + y"));
        }
        Ok(ctx.real(&self.x * &self.y) * 27u32 / s.square())
    }

    /// Checks the validity window of `level`.
    pub fn check_window(&self, level: Level, ctx: &PrecisionContext) -> Result<()> {
        if self.y.is_zero() {
            return Err(Error::domain("y must be non-zero", "y"));
        }
        let ratio = self.ratio();
        let tol = ctx.ten_pow(-(ctx.working_digits() as i32) / 2);
        let one_gap = ctx.real(&ratio - 1u32);
        if level != Level::A && one_gap.clone().abs() <= tol {
            return Err(Error::SingularInput(format!(
                "level {level} identity is singular at x = y"
            )));
        }
        if one_gap >= 0 {
            return Ok(());
        }
        let edge = -(ctx.real(2).sqrt() + 1u32).square();
        if ratio <= ctx.real(&edge * (ctx.real(1) - &tol)) {
            return Ok(());
        }
        let strict = if level == Level::A { "x/y >= 1" } else { "x/y > 1" };
        Err(Error::domain(
            &format!("x/y = {} lies outside the window {strict} or x/y <= -(sqrt2 + 1)^2", ratio.to_f64()),
            "x/y",
        ))
    }
}

struct Parts {
    cx: Real,
    cy: Real,
    at: Real,
    lg: Real,
}

fn parts(pair: &XYPair, level: Level, ctx: &PrecisionContext) -> Result<Parts> {
    pair.check_window(level, ctx)?;
    let x = ctx.real(&pair.x);
    let y = ctx.real(&pair.y);
    let s = ctx.real(&x + &y);
    if s.is_zero() {
        return Err(Error::domain("x + y vanishes", "x + y"));
    }
    let cx = x.cbrt();
    let cy = y.cbrt();
    let s3 = ctx.real(3).sqrt();
    let den = ctx.real(&cx * 2u32) - &cy;
    if den.is_zero() {
        return Err(Error::domain("2 cbrt(x) - cbrt(y) vanishes", "2*cbrt(x) - cbrt(y)"));
    }
    let at = (s3 * &cy / den).atan();
    let arg = s / cube(&ctx.real(&cx + &cy));
    if arg <= 0 {
        return Err(Error::domain("log of a non-positive value", "(x + y)/(cbrt(x) + cbrt(y))^3"));
    }
    Ok(Parts { cx, cy, at, lg: arg.ln() })
}

/// `6 atan^2(sqrt3 cbrt(y)/(2cbrt(x) - cbrt(y))) - 1/2 log^2((x+y)/(cbrt(x)+cbrt(y))^3)`.
pub fn a_rhs(pair: &XYPair, ctx: &PrecisionContext) -> Result<Real> {
    let p = parts(pair, Level::A, ctx)?;
    Ok(p.at.square() * 6u32 - p.lg.square() / 2u32)
}

/// First derivative level: the sum of `z^k/(k C(3k,k))`.
pub fn b_rhs(pair: &XYPair, ctx: &PrecisionContext) -> Result<Real> {
    let p = parts(pair, Level::B, ctx)?;
    let s3 = ctx.real(3).sqrt();
    let cxy = ctx.real(&pair.x * &pair.y).cbrt();
    let diff = ctx.real(&pair.x - &pair.y);
    let at_term = s3 * 2u32 * ctx.real(&p.cx + &p.cy) * &p.at;
    let lg_term = ctx.real(&p.cx - &p.cy) * &p.lg;
    Ok(cxy / diff * (at_term + lg_term))
}

/// Second derivative level: the sum of `z^k/C(3k,k)`.
pub fn c_rhs(pair: &XYPair, ctx: &PrecisionContext) -> Result<Real> {
    let p = parts(pair, Level::C, ctx)?;
    let s3 = ctx.real(3).sqrt();
    let x = &pair.x;
    let y = &pair.y;
    let cxy = ctx.real(x * y).cbrt();
    let diff = ctx.real(x - y);
    let sum = ctx.real(x + y);
    let cx2 = ctx.real(p.cx.square_ref());
    let cy2 = ctx.real(p.cy.square_ref());
    let cx4 = ctx.real(cx2.square_ref());
    let cy4 = ctx.real(cy2.square_ref());
    let rational = ctx.real(x * y) * 4u32 / ctx.real(diff.square_ref());
    let at_coef = (ctx.real(&cx2 + &cy2) * &cxy * 2u32 + &cx4 + &cy4) * s3 * 2u32;
    let lg_coef = ctx.real(&cx2 - &cy2) * &cxy * 2u32 - &cx4 + &cy4;
    let outer = ctx.real(&cxy / 3u32) * sum / cube(&diff);
    Ok(rational + outer * (at_coef * &p.at - lg_coef * &p.lg))
}

/// The identity of `level` at `pair`.
pub fn level_rhs(level: Level, pair: &XYPair, ctx: &PrecisionContext) -> Result<Real> {
    match level {
        Level::A => a_rhs(pair, ctx),
        Level::B => b_rhs(pair, ctx),
        Level::C => c_rhs(pair, ctx),
    }
}

/// Like [`level_rhs`] but also tries `(y, x)`, which has the same argument.
pub fn level_rhs_oriented(level: Level, pair: &XYPair, ctx: &PrecisionContext) -> Result<Real> {
    match level_rhs(level, pair, ctx) {
        Err(Error::Domain { .. }) => level_rhs(level, &pair.swapped(), ctx),
        other => other,
    }
}

/// Symbolic form of the level identity at `(x, y)`.
pub fn level_expr(level: Level, x: E, y: E) -> E {
    let cx = x.clone().cbrt();
    let cy = y.clone().cbrt();
    let s3 = || E::int(3).sqrt();
    let at = (s3() * cy.clone() / (E::int(2) * cx.clone() - cy.clone())).atan();
    let lg = ((x.clone() + y.clone()) / (cx.clone() + cy.clone()).pow(3)).ln();
    match level {
        Level::A => E::int(6) * at.square() - lg.square() / E::int(2),
        Level::B => {
            (x.clone() * y.clone()).cbrt() / (x - y)
                * (E::int(2) * s3() * (cx.clone() + cy.clone()) * at + (cx - cy) * lg)
        }
        Level::C => {
            let cxy = || (x.clone() * y.clone()).cbrt();
            let cx2 = || cx.clone().square();
            let cy2 = || cy.clone().square();
            let at_coef = E::int(2) * cxy() * (cx2() + cy2()) + cx.clone().pow(4) + cy.clone().pow(4);
            let lg_coef = E::int(2) * cxy() * (cx2() - cy2()) - cx.clone().pow(4) + cy.clone().pow(4);
            E::int(4) * x.clone() * y.clone() / (x.clone() - y.clone()).square()
                + cxy() / E::int(3) * ((x.clone() + y.clone()) / (x - y).pow(3))
                    * (E::int(2) * s3() * at_coef * at - lg_coef * lg)
        }
    }
}

/// The three trigonometric forms of the level identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrigVariant {
    /// Level A at `(cot^2 x, 1)`, `x` in `(0, pi/4]`.
    D,
    /// Level A at `(-cot^2 x, 1)`, `x` in `(0, pi/8]`.
    E,
    /// Level B at `(cot^2 x, 1)`, `x` in `(0, pi/4)`.
    F,
}

impl TrigVariant {
    pub fn level(self) -> Level {
        match self {
            TrigVariant::D | TrigVariant::E => Level::A,
            TrigVariant::F => Level::B,
        }
    }
}

impl FromStr for TrigVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" | "d" => Ok(TrigVariant::D),
            "E" | "e" => Ok(TrigVariant::E),
            "F" | "f" => Ok(TrigVariant::F),
            _ => Err(Error::Parse(format!("unknown trigonometric variant {s:?}"))),
        }
    }
}

impl fmt::Display for TrigVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrigVariant::D => "D",
            TrigVariant::E => "E",
            TrigVariant::F => "F",
        })
    }
}

fn check_angle(variant: TrigVariant, x: &Real, ctx: &PrecisionContext) -> Result<()> {
    let tol = ctx.ten_pow(-(ctx.working_digits() as i32) / 2);
    let quarter = ctx.pi() / 4u32;
    let (upper, strict) = match variant {
        TrigVariant::D => (quarter, false),
        TrigVariant::E => (ctx.pi() / 8u32, false),
        TrigVariant::F => (quarter, true),
    };
    let above = ctx.real(x - &upper);
    let ok = *x > 0 && if strict { above < -tol.clone() } else { above <= tol };
    if ok {
        Ok(())
    } else {
        let interval = match variant {
            TrigVariant::D => "(0, pi/4]",
            TrigVariant::E => "(0, pi/8]",
            TrigVariant::F => "(0, pi/4)",
        };
        Err(Error::domain(&format!("x = {} outside {interval}", x.to_f64()), "x"))
    }
}

/// Series argument of a trigonometric variant: `(27/4) sin^2 2x` or `-(27/4) tan^2 2x`.
pub fn trig_argument(variant: TrigVariant, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_angle(variant, x, ctx)?;
    let two_x = ctx.real(x * 2u32);
    let quarter = ctx.real(27) / 4u32;
    Ok(match variant {
        TrigVariant::D | TrigVariant::F => quarter * two_x.sin().square(),
        TrigVariant::E => -quarter * two_x.tan().square(),
    })
}

/// Evaluates the trigonometric closed form at angle `x`.
pub fn trig_rhs(variant: TrigVariant, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_angle(variant, x, ctx)?;
    let s3 = ctx.real(3).sqrt();
    let sin2 = ctx.real(x.sin_ref()).square();
    let csc2 = ctx.real(sin2.recip_ref());
    let cos2x = ctx.real(x * 2u32).cos();
    let c = ctx.real(x.cot_ref()).square().cbrt();
    Ok(match variant {
        TrigVariant::D => {
            let at = (s3 / (ctx.real(&c * 2u32) - 1u32)).atan();
            let lg = (csc2 / cube(&ctx.real(&c + 1u32))).ln();
            at.square() * 6u32 - lg.square() / 2u32
        }
        TrigVariant::E => {
            let at = (s3 / (ctx.real(&c * 2u32) + 1u32)).atan();
            let lg = (csc2 * cos2x / cube(&ctx.real(&c - 1u32))).ln();
            at.square() * 6u32 - lg.square() / 2u32
        }
        TrigVariant::F => {
            let scale = sin2 / cos2x * &c;
            let at = (s3.clone() / (ctx.real(&c * 2u32) - 1u32)).atan();
            let lg = (csc2 / cube(&ctx.real(&c + 1u32))).ln();
            let first = ctx.real(&scale * &s3) * 2u32 * ctx.real(&c + 1u32) * at;
            let second = scale * ctx.real(&c - 1u32) * lg;
            first + second
        }
    })
}
