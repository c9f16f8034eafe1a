use std::fmt;

use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::numerics::{golden_conjugate, golden_ratio, ClosedFormExpr, PrecisionContext, Real};
use crate::sequences::{fib, horadam, lucas, HoradamParams};
use crate::{Error, Result};

/// The series argument `z`, exact when rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeriesArg {
    Exact(Rational),
    Expr(ClosedFormExpr),
}

impl SeriesArg {
    /// Folds rational expressions into [`SeriesArg::Exact`].
    pub fn from_expr(expr: ClosedFormExpr) -> Self {
        match expr.as_rational() {
            Some(r) => SeriesArg::Exact(r),
            None => SeriesArg::Expr(expr),
        }
    }

    pub fn eval(&self, ctx: &PrecisionContext) -> Result<Real> {
        match self {
            SeriesArg::Exact(r) => Ok(ctx.real(r)),
            SeriesArg::Expr(e) => e.eval(ctx),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            SeriesArg::Exact(r) => Some(r),
            SeriesArg::Expr(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SeriesArg::Exact(r) => Value::String(r.to_string()),
            SeriesArg::Expr(e) => e.to_json(),
        }
    }

    /// Accepts `"num/den"`, infix text, or an expression tree.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.as_str() {
            if let Ok(r) = s.trim().parse::<Rational>() {
                return Ok(SeriesArg::Exact(r));
            }
        }
        Ok(Self::from_expr(ClosedFormExpr::from_json(v)?))
    }
}

impl From<Rational> for SeriesArg {
    fn from(r: Rational) -> Self {
        SeriesArg::Exact(r)
    }
}

impl fmt::Display for SeriesArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesArg::Exact(r) => write!(f, "{r}"),
            SeriesArg::Expr(e) => write!(f, "{e}"),
        }
    }
}

/// The weight factor `w(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Weight {
    Unit,
    /// `F(m k)`
    Fib(i64),
    /// `L(m k)`
    Lucas(i64),
    /// `W(m k)`
    Horadam { m: u64, params: HoradamParams },
}

impl Weight {
    /// `w(k)`, exact.
    pub fn value(&self, k: u64) -> Integer {
        match self {
            Weight::Unit => Integer::from(1),
            Weight::Fib(m) => fib(m * k as i64),
            Weight::Lucas(m) => lucas(m * k as i64),
            Weight::Horadam { m, params } => horadam(m * k, params),
        }
    }

    /// Recurrence `w(k+1) = c1 w(k) + c2 w(k-1)` satisfied by the weights.
    pub(crate) fn recurrence(&self) -> (Integer, Integer) {
        let (p, q, m) = match self {
            Weight::Unit => return (Integer::from(1), Integer::new()),
            Weight::Fib(m) | Weight::Lucas(m) => (Integer::from(1), Integer::from(1), *m),
            Weight::Horadam { m, params } => (params.p.clone(), params.q.clone(), *m as i64),
        };
        // Roots r1^m, r2^m: sum is the companion sequence V(m), product (-q)^m.
        let companion = HoradamParams {
            p: p.clone(),
            q: q.clone(),
            a: Integer::from(2),
            b: p,
        };
        let c1 = if m >= 0 {
            horadam(m as u64, &companion)
        } else {
            // Only reached for Fibonacci/Lucas: V(-j) = L(-j).
            lucas(m)
        };
        let minus_q = Integer::from(-q);
        let prod = if m >= 0 {
            Integer::from(rug::ops::Pow::pow(&minus_q, m as u32))
        } else {
            // (-1)^m for q = 1
            Integer::from(if m % 2 == 0 { 1 } else { -1 })
        };
        (c1, -prod)
    }

    /// Binet components: `w(k) = sum_i coef_i root_i^k`.
    pub(crate) fn roots(&self, ctx: &PrecisionContext) -> Vec<(Real, Real)> {
        match self {
            Weight::Unit => vec![(ctx.real(1), ctx.real(1))],
            Weight::Fib(m) | Weight::Lucas(m) => {
                let m = *m as i32;
                let a = ctx.real(golden_ratio(ctx).pow_ref_i32(m));
                let b = ctx.real(golden_conjugate(ctx).pow_ref_i32(m));
                if let Weight::Fib(_) = self {
                    let s5 = ctx.real(5).sqrt();
                    let c = Float::with_val(ctx.bits(), 1u32 / &s5);
                    vec![(c.clone(), a), (-c, b)]
                } else {
                    vec![(ctx.real(1), a), (ctx.real(1), b)]
                }
            }
            Weight::Horadam { m, params } => {
                let m = *m as i32;
                let delta = params.delta(ctx);
                let a = Float::with_val(ctx.bits(), params.big_a(ctx) / &delta);
                let b = Float::with_val(ctx.bits(), -params.big_b(ctx) / &delta);
                vec![
                    (a, ctx.real(params.alpha_star(ctx).pow_ref_i32(m))),
                    (b, ctx.real(params.beta_star(ctx).pow_ref_i32(m))),
                ]
            }
        }
    }

    /// Components `(coef, z root^m)` of the series argument, zero ones dropped.
    pub(crate) fn components(&self, z: &Real, ctx: &PrecisionContext) -> Vec<(Real, Real)> {
        let tiny = ctx.ten_pow(-(ctx.working_digits() as i32));
        self.roots(ctx)
            .into_iter()
            .filter(|(c, _)| Float::with_val(ctx.bits(), c.abs_ref()) > tiny)
            .map(|(c, r)| (c, Float::with_val(ctx.bits(), &r * z)))
            .collect()
    }

    /// Growth rate `g` of `|w(k)|^(1/k)` and the sign of the dominant root.
    pub(crate) fn growth(&self, ctx: &PrecisionContext) -> (Real, i32) {
        let tiny = ctx.ten_pow(-(ctx.working_digits() as i32) / 2);
        let mut best: Option<Real> = None;
        for (coef, root) in self.roots(ctx) {
            if Float::with_val(ctx.bits(), coef.abs_ref()) <= tiny {
                continue;
            }
            let keep = match &best {
                None => true,
                Some(b) => Float::with_val(ctx.bits(), root.abs_ref()) > Float::with_val(ctx.bits(), b.abs_ref()),
            };
            if keep {
                best = Some(root);
            }
        }
        match best {
            Some(root) => {
                let sign = if root < 0 { -1 } else { 1 };
                (root.abs(), sign)
            }
            None => (ctx.real(0), 1),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Weight::Unit => json!({ "kind": "unit" }),
            Weight::Fib(m) => json!({ "kind": "fib", "m": m }),
            Weight::Lucas(m) => json!({ "kind": "lucas", "m": m }),
            Weight::Horadam { m, params } => json!({
                "kind": "horadam",
                "m": m,
                "p": params.p.to_string(),
                "q": params.q.to_string(),
                "a": params.a.to_string(),
                "b": params.b.to_string(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("{what} in weight {v}"));
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing kind"))?;
        let m = || v.get("m").and_then(Value::as_i64).ok_or_else(|| bad("missing integer m"));
        Ok(match kind {
            "unit" => Weight::Unit,
            "fib" => Weight::Fib(m()?),
            "lucas" => Weight::Lucas(m()?),
            "horadam" => {
                let big = |key: &str| -> Result<Integer> {
                    let field = v.get(key).ok_or_else(|| bad(&format!("missing {key}")))?;
                    match field {
                        Value::String(s) => s.parse().map_err(|_| bad(&format!("bad {key}"))),
                        Value::Number(n) => n.as_i64().map(Integer::from).ok_or_else(|| bad(key)),
                        _ => Err(bad(&format!("bad {key}"))),
                    }
                };
                let m = u64::try_from(m()?).map_err(|_| bad("horadam m must be >= 0"))?;
                let params = HoradamParams::new(big("p")?, big("q")?, big("a")?, big("b")?)?;
                Weight::Horadam { m, params }
            }
            other => return Err(bad(&format!("unknown kind {other:?}"))),
        })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Unit => f.write_str("1"),
            Weight::Fib(m) => write!(f, "F({m}k)"),
            Weight::Lucas(m) => write!(f, "L({m}k)"),
            Weight::Horadam { m, params } => write!(f, "W({m}k){params}"),
        }
    }
}

trait PowI32 {
    fn pow_ref_i32(&self, e: i32) -> Float;
}

impl PowI32 for Float {
    fn pow_ref_i32(&self, e: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), Pow::pow(self, e))
    }
}

/// One left-hand series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesSpec {
    pub z: SeriesArg,
    /// Exponent of `k` in the denominator, 0..=2.
    pub a: u8,
    pub weight: Weight,
    pub label: String,
}

impl SeriesSpec {
    pub fn new(z: impl Into<SeriesArg>, a: u8, weight: Weight) -> Result<Self> {
        if a > 2 {
            return Err(Error::InvalidParams(format!("exponent a = {a} is not in 0..=2")));
        }
        Ok(SeriesSpec {
            z: z.into(),
            a,
            weight,
            label: String::new(),
        })
    }

    /// Unit-weight series with rational argument `num/den`.
    pub fn unit(num: i64, den: i64, a: u8) -> Result<Self> {
        Self::new(Rational::from((num, den)), a, Weight::Unit)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// All terms vanish (zero argument or identically zero weight).
    pub fn is_trivially_zero(&self) -> bool {
        let zero_z = matches!(&self.z, SeriesArg::Exact(r) if *r == 0);
        let zero_w = match &self.weight {
            Weight::Fib(0) => true,
            Weight::Horadam { m: 0, params } => params.a == 0,
            _ => false,
        };
        zero_z || zero_w
    }

    pub fn to_json(&self) -> Value {
        json!({ "z": self.z.to_json(), "a": self.a, "weight": self.weight.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let z = SeriesArg::from_json(v.get("z").ok_or_else(|| Error::Parse("lhs without z".into()))?)?;
        let a = v
            .get("a")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("lhs without integer a".into()))?;
        let weight = match v.get("weight") {
            Some(w) => Weight::from_json(w)?,
            None => Weight::Unit,
        };
        Self::new(z, u8::try_from(a).unwrap_or(u8::MAX), weight)
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.weight {
            Weight::Unit => String::new(),
            _ => format!(" {}", self.weight),
        };
        let k = match self.a {
            0 => String::new(),
            1 => "k ".into(),
            n => format!("k^{n} "),
        };
        write!(f, "sum ({})^k{w} / ({k}C(3k,k))", self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;

    #[test]
    fn weight_recurrences_match_exact_values() {
        let weights = [
            Weight::Fib(3),
            Weight::Fib(-2),
            Weight::Lucas(-3),
            Weight::Lucas(5),
            Weight::Horadam { m: 2, params: HoradamParams::pell() },
            Weight::Horadam { m: 3, params: HoradamParams::new(3, 2, 1, 4).unwrap() },
        ];
        for w in weights {
            let (c1, c2) = w.recurrence();
            let (mut prev, mut cur) = (w.value(0), w.value(1));
            for k in 1..20 {
                let next = Integer::from(&c1 * &cur) + Integer::from(&c2 * &prev);
                assert_eq!(next, w.value(k + 1), "{w} at k={k}");
                prev = std::mem::replace(&mut cur, next);
            }
        }
    }

    #[test]
    fn growth_rates() {
        let ctx = make_context(20, 1).unwrap();
        let (g, s) = Weight::Fib(-3).growth(&ctx);
        assert!((g.to_f64() - 1.618033988749895f64.powi(3)).abs() < 1e-12);
        assert_eq!(s, -1);
        let (g, s) = Weight::Unit.growth(&ctx);
        assert_eq!((g.to_f64(), s), (1.0, 1));
    }

    #[test]
    fn json_forms() {
        let spec = SeriesSpec::new(
            SeriesArg::from_json(&Value::String("-(6*sqrt(6)/7)^2".into())).unwrap(),
            1,
            Weight::Lucas(2),
        )
        .unwrap();
        assert!(matches!(spec.z, SeriesArg::Expr(_)));
        let z = spec.z.eval(&make_context(20, 1).unwrap()).unwrap();
        assert!((z * 49u32 + 216u32).abs() < 1e-15);
        let back = SeriesSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let h = Weight::Horadam { m: 1, params: HoradamParams::pell() };
        assert_eq!(Weight::from_json(&h.to_json()).unwrap(), h);
        assert!(SeriesSpec::unit(1, 2, 3).is_err());
    }
}
