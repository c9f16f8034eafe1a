use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{golden_ratio, PrecisionContext, Real};
use crate::{Error, Result};

/// Expression tree for exact closed-form values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClosedFormExpr {
    Int(Integer),
    Rat(Rational),
    Pi,
    GoldenRatio,
    Sqrt(Box<ClosedFormExpr>),
    Cbrt(Box<ClosedFormExpr>),
    Log(Box<ClosedFormExpr>),
    Arctan(Box<ClosedFormExpr>),
    Neg(Box<ClosedFormExpr>),
    Add(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Sub(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Mul(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Div(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Pow(Box<ClosedFormExpr>, i32),
}

use ClosedFormExpr as E;

/// Evaluates `expr` at the working precision of `ctx`.
pub fn eval_expr(expr: &ClosedFormExpr, ctx: &PrecisionContext) -> Result<Real> {
    expr.eval(ctx)
}

impl ClosedFormExpr {
    pub fn int(v: impl Into<Integer>) -> Self {
        E::Int(v.into())
    }

    /// Reduced rational literal; collapses to an integer when possible.
    pub fn rational(v: impl Into<Rational>) -> Self {
        let r: Rational = v.into();
        if *r.denom() == 1 {
            E::Int(r.numer().clone())
        } else {
            E::Rat(r)
        }
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::rational(Rational::from((num, den)))
    }

    pub fn pi() -> Self {
        E::Pi
    }

    pub fn alpha() -> Self {
        E::GoldenRatio
    }

    pub fn sqrt(self) -> Self {
        E::Sqrt(Box::new(self))
    }

    pub fn cbrt(self) -> Self {
        E::Cbrt(Box::new(self))
    }

    pub fn ln(self) -> Self {
        E::Log(Box::new(self))
    }

    pub fn atan(self) -> Self {
        E::Arctan(Box::new(self))
    }

    pub fn pow(self, exp: i32) -> Self {
        E::Pow(Box::new(self), exp)
    }

    pub fn square(self) -> Self {
        self.pow(2)
    }

    pub fn eval(&self, ctx: &PrecisionContext) -> Result<Real> {
        let v = match self {
            E::Int(i) => ctx.real(i),
            E::Rat(r) => ctx.real(r),
            E::Pi => ctx.pi(),
            E::GoldenRatio => golden_ratio(ctx),
            E::Sqrt(c) => {
                let x = c.eval(ctx)?;
                if x < 0 {
                    return Err(Error::domain("sqrt of a negative value", c.to_string()));
                }
                x.sqrt()
            }
            E::Cbrt(c) => c.eval(ctx)?.cbrt(),
            E::Log(c) => {
                let x = c.eval(ctx)?;
                if x <= 0 {
                    return Err(Error::domain("log of a non-positive value", c.to_string()));
                }
                x.ln()
            }
            E::Arctan(c) => c.eval(ctx)?.atan(),
            E::Neg(c) => -c.eval(ctx)?,
            E::Add(l, r) => l.eval(ctx)? + r.eval(ctx)?,
            E::Sub(l, r) => l.eval(ctx)? - r.eval(ctx)?,
            E::Mul(l, r) => l.eval(ctx)? * r.eval(ctx)?,
            E::Div(l, r) => {
                let den = r.eval(ctx)?;
                if den.is_zero() {
                    return Err(Error::domain("division by zero", self.to_string()));
                }
                l.eval(ctx)? / den
            }
            E::Pow(c, n) => {
                let x = c.eval(ctx)?;
                if *n < 0 && x.is_zero() {
                    return Err(Error::domain("negative power of zero", self.to_string()));
                }
                x.pow(*n)
            }
        };
        if v.is_nan() {
            return Err(Error::domain("undefined value", self.to_string()));
        }
        Ok(v)
    }

    /// Exact value when the tree is built from rationals and field operations.
    pub fn as_rational(&self) -> Option<Rational> {
        Some(match self {
            E::Int(i) => Rational::from(i),
            E::Rat(r) => r.clone(),
            E::Neg(c) => -c.as_rational()?,
            E::Add(l, r) => l.as_rational()? + r.as_rational()?,
            E::Sub(l, r) => l.as_rational()? - r.as_rational()?,
            E::Mul(l, r) => l.as_rational()? * r.as_rational()?,
            E::Div(l, r) => {
                let den = r.as_rational()?;
                if den == 0 {
                    return None;
                }
                l.as_rational()? / den
            }
            E::Pow(c, n) => {
                let base = c.as_rational()?;
                if *n < 0 {
                    if base == 0 {
                        return None;
                    }
                    Rational::from(base.recip().pow(n.unsigned_abs()))
                } else {
                    Rational::from(base.pow(*n as u32))
                }
            }
            _ => return None,
        })
    }

    /// Canonical JSON form `{"kind": ..., "args": [...]}`.
    pub fn to_json(&self) -> Value {
        let (kind, args): (&str, Vec<Value>) = match self {
            E::Int(i) => ("int", vec![Value::String(i.to_string())]),
            E::Rat(r) => ("rat", vec![Value::String(r.to_string())]),
            E::Pi => ("pi", vec![]),
            E::GoldenRatio => ("golden_ratio", vec![]),
            E::Sqrt(c) => ("sqrt", vec![c.to_json()]),
            E::Cbrt(c) => ("cbrt", vec![c.to_json()]),
            E::Log(c) => ("log", vec![c.to_json()]),
            E::Arctan(c) => ("arctan", vec![c.to_json()]),
            E::Neg(c) => ("neg", vec![c.to_json()]),
            E::Add(l, r) => ("add", vec![l.to_json(), r.to_json()]),
            E::Sub(l, r) => ("sub", vec![l.to_json(), r.to_json()]),
            E::Mul(l, r) => ("mul", vec![l.to_json(), r.to_json()]),
            E::Div(l, r) => ("div", vec![l.to_json(), r.to_json()]),
            E::Pow(c, n) => ("pow", vec![c.to_json(), json!(n)]),
        };
        json!({ "kind": kind, "args": args })
    }

    /// Accepts the canonical tree form or an infix string.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(text) = v.as_str() {
            return super::parse_expr(text);
        }
        let bad = |what: &str| Error::Parse(format!("{what} in expression {v}"));
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing \"kind\""))?;
        let empty = Vec::new();
        let args = match v.get("args") {
            Some(a) => a.as_array().ok_or_else(|| bad("\"args\" is not an array"))?,
            None => &empty,
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("`{kind}` takes {n} argument(s)")))
            }
        };
        let child = |i: usize| Self::from_json(&args[i]).map(Box::new);
        let string = |i: usize| args[i].as_str().ok_or_else(|| bad("expected a decimal string"));
        Ok(match kind {
            "int" => {
                arity(1)?;
                let s = string(0)?;
                E::Int(s.parse().map_err(|_| bad(&format!("bad integer {s:?}")))?)
            }
            "rat" => {
                arity(1)?;
                let s = string(0)?;
                let r: Rational = s.parse().map_err(|_| bad(&format!("bad rational {s:?}")))?;
                E::Rat(r)
            }
            "pi" => {
                arity(0)?;
                E::Pi
            }
            "golden_ratio" => {
                arity(0)?;
                E::GoldenRatio
            }
            "sqrt" | "cbrt" | "log" | "arctan" | "neg" => {
                arity(1)?;
                let c = child(0)?;
                match kind {
                    "sqrt" => E::Sqrt(c),
                    "cbrt" => E::Cbrt(c),
                    "log" => E::Log(c),
                    "arctan" => E::Arctan(c),
                    _ => E::Neg(c),
                }
            }
            "add" | "sub" | "mul" | "div" => {
                arity(2)?;
                let (l, r) = (child(0)?, child(1)?);
                match kind {
                    "add" => E::Add(l, r),
                    "sub" => E::Sub(l, r),
                    "mul" => E::Mul(l, r),
                    _ => E::Div(l, r),
                }
            }
            "pow" => {
                arity(2)?;
                let n = args[1]
                    .as_i64()
                    .and_then(|n| i32::try_from(n).ok())
                    .ok_or_else(|| bad("pow exponent must be a small integer"))?;
                E::Pow(child(0)?, n)
            }
            other => return Err(bad(&format!("unknown kind {other:?}"))),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            E::Add(..) | E::Sub(..) => 1,
            E::Mul(..) | E::Div(..) => 2,
            E::Rat(_) => 2,
            E::Int(i) if *i < 0 => 3,
            E::Neg(_) => 3,
            E::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let own = self.precedence();
        if own < min_prec {
            f.write_str("(")?;
        }
        match self {
            E::Int(i) => write!(f, "{i}")?,
            E::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom())?,
            E::Pi => f.write_str("pi")?,
            E::GoldenRatio => f.write_str("alpha")?,
            E::Sqrt(c) | E::Cbrt(c) | E::Log(c) | E::Arctan(c) => {
                let name = match self {
                    E::Sqrt(_) => "sqrt",
                    E::Cbrt(_) => "cbrt",
                    E::Log(_) => "log",
                    _ => "atan",
                };
                write!(f, "{name}(")?;
                c.write(f, 0)?;
                f.write_str(")")?;
            }
            E::Neg(c) => {
                f.write_str("-")?;
                c.write(f, 4)?;
            }
            E::Add(l, r) | E::Sub(l, r) | E::Mul(l, r) | E::Div(l, r) => {
                let op = match self {
                    E::Add(..) => " + ",
                    E::Sub(..) => " - ",
                    E::Mul(..) => "*",
                    _ => "/",
                };
                l.write(f, own)?;
                f.write_str(op)?;
                r.write(f, own + 1)?;
            }
            E::Pow(c, n) => {
                c.write(f, 5)?;
                write!(f, "^{n}")?;
            }
        }
        if own < min_prec {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ClosedFormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl Serialize for ClosedFormExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClosedFormExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(D::Error::custom)
    }
}

impl From<i64> for ClosedFormExpr {
    fn from(v: i64) -> Self {
        E::Int(Integer::from(v))
    }
}

impl From<Integer> for ClosedFormExpr {
    fn from(v: Integer) -> Self {
        E::Int(v)
    }
}

impl From<&Integer> for ClosedFormExpr {
    fn from(v: &Integer) -> Self {
        E::Int(v.clone())
    }
}

impl From<Rational> for ClosedFormExpr {
    fn from(v: Rational) -> Self {
        Self::rational(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl<T: Into<ClosedFormExpr>> $trait<T> for ClosedFormExpr {
            type Output = ClosedFormExpr;
            fn $method(self, rhs: T) -> ClosedFormExpr {
                E::$variant(Box::new(self), Box::new(rhs.into()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for ClosedFormExpr {
    type Output = ClosedFormExpr;
    fn neg(self) -> ClosedFormExpr {
        E::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{format_real, make_context};

    #[test]
    fn signed_cube_root() {
        let ctx = make_context(30, 1).unwrap();
        let v = E::int(-8).cbrt().eval(&ctx).unwrap();
        assert_eq!(v, -2);
    }

    #[test]
    fn domain_errors_name_the_subtree() {
        let ctx = make_context(20, 1).unwrap();
        let e = (E::int(1) - E::int(3)).ln();
        match e.eval(&ctx) {
            Err(Error::Domain { subtree, .. }) => assert_eq!(subtree, "1 - 3"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(E::int(-2).sqrt().eval(&ctx).is_err());
        assert!((E::int(1) / E::int(0)).eval(&ctx).is_err());
        assert!(E::int(0).pow(-1).eval(&ctx).is_err());
    }

    #[test]
    fn json_round_trip() {
        let e = E::frac(2, 3) * E::pi().square() - E::int(2) * E::int(2).ln().square();
        let v = e.to_json();
        assert_eq!(v["kind"], "sub");
        assert_eq!(v["args"][0]["args"][0]["args"][0], "2/3");
        assert_eq!(E::from_json(&v).unwrap(), e);
        let text = serde_json::to_string(&e).unwrap();
        let back: ClosedFormExpr = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn exact_rational_folding() {
        let e = (E::frac(27, 4) - E::int(1)) / E::int(3).pow(-2);
        assert_eq!(e.as_rational().unwrap(), Rational::from((207, 4)));
        assert!(E::int(2).sqrt().as_rational().is_none());
    }

    #[test]
    fn display_is_infix() {
        let e = -(E::int(2) * E::alpha().pow(3)) / (E::int(1) - E::int(-3).cbrt());
        assert_eq!(e.to_string(), "-(2*alpha^3)/(1 - cbrt(-3))");
        let ctx = make_context(20, 1).unwrap();
        let s = format_real(&E::frac(-1, 8).pow(2).eval(&ctx).unwrap(), 6);
        assert_eq!(s, "0.0156250");
    }
}
