use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde_json::{json, Map, Value};

use super::{level_rhs, level_rhs_oriented, Level, XYPair};
use crate::numerics::{make_context, ClosedFormExpr as E, PrecisionContext, Real};
use crate::sequences::{fib, horadam, lucas, HoradamParams};
use crate::series::{classify, ConvergenceClass, SeriesSpec, Weight};
use crate::{Error, Result};

const MAX_INDEX: i64 = 2000;

/// Fibonacci or Lucas flavour of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Fib,
    Luc,
}

/// A parameterized family of identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Thm1(Kind),
    Cor2(Kind),
    /// Variants 1 to 6.
    Thm3(u8),
    Thm4(Kind),
    Cor5(Kind),
    Thm6(Kind),
    Thm7(Kind),
    Thm9(Kind),
    Thm10(Kind),
    HoradamA2,
    HoradamA1,
}

impl Family {
    pub const ALL: [Family; 24] = [
        Family::Thm1(Kind::Fib),
        Family::Thm1(Kind::Luc),
        Family::Cor2(Kind::Fib),
        Family::Cor2(Kind::Luc),
        Family::Thm3(1),
        Family::Thm3(2),
        Family::Thm3(3),
        Family::Thm3(4),
        Family::Thm3(5),
        Family::Thm3(6),
        Family::Thm4(Kind::Fib),
        Family::Thm4(Kind::Luc),
        Family::Cor5(Kind::Fib),
        Family::Cor5(Kind::Luc),
        Family::Thm6(Kind::Fib),
        Family::Thm6(Kind::Luc),
        Family::Thm7(Kind::Fib),
        Family::Thm7(Kind::Luc),
        Family::Thm9(Kind::Fib),
        Family::Thm9(Kind::Luc),
        Family::Thm10(Kind::Fib),
        Family::Thm10(Kind::Luc),
        Family::HoradamA2,
        Family::HoradamA1,
    ];

    /// Identifier such as `THM1_FIB` or `THM3_V4`.
    pub fn name(self) -> String {
        let kind = |k: Kind| match k {
            Kind::Fib => "FIB",
            Kind::Luc => "LUC",
        };
        match self {
            Family::Thm1(k) => format!("THM1_{}", kind(k)),
            Family::Cor2(k) => format!("COR2_{}", kind(k)),
            Family::Thm3(v) => format!("THM3_V{v}"),
            Family::Thm4(k) => format!("THM4_{}", kind(k)),
            Family::Cor5(k) => format!("COR5_{}", kind(k)),
            Family::Thm6(k) => format!("THM6_{}", kind(k)),
            Family::Thm7(k) => format!("THM7_{}", kind(k)),
            Family::Thm9(k) => format!("THM9_{}", kind(k)),
            Family::Thm10(k) => format!("THM10_{}", kind(k)),
            Family::HoradamA2 => "HORADAM_A2".into(),
            Family::HoradamA1 => "HORADAM_A1".into(),
        }
    }

    pub fn all() -> &'static [Family] {
        &Self::ALL
    }

    pub fn level(self) -> Level {
        match self {
            Family::Thm1(_) | Family::Cor2(_) | Family::Thm3(_) | Family::Thm7(_) | Family::HoradamA2 => Level::A,
            Family::Thm4(_) | Family::Cor5(_) | Family::Thm9(_) | Family::HoradamA1 => Level::B,
            Family::Thm6(_) | Family::Thm10(_) => Level::C,
        }
    }

    fn kind(self) -> Option<Kind> {
        match self {
            Family::Thm1(k)
            | Family::Cor2(k)
            | Family::Thm4(k)
            | Family::Cor5(k)
            | Family::Thm6(k)
            | Family::Thm7(k)
            | Family::Thm9(k)
            | Family::Thm10(k) => Some(k),
            _ => None,
        }
    }

    pub fn slug(self) -> String {
        self.name().to_lowercase().replace('_', "-")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_uppercase().replace('-', "_");
        Family::all()
            .iter()
            .copied()
            .find(|f| f.name() == up)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// Integer parameters of a family instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilyArgs {
    R(i64),
    NM { n: i64, m: i64 },
    PQ { p: i64, q: i64 },
    Horadam { r: i64, params: HoradamParams },
}

/// A family with bound parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TheoremParams {
    pub family: Family,
    pub args: FamilyArgs,
}

fn tag(v: i64) -> String {
    if v < 0 {
        format!("neg{}", -v)
    } else {
        v.to_string()
    }
}

impl TheoremParams {
    pub fn r(family: Family, r: i64) -> Self {
        TheoremParams { family, args: FamilyArgs::R(r) }
    }

    pub fn nm(variant: u8, n: i64, m: i64) -> Self {
        TheoremParams { family: Family::Thm3(variant), args: FamilyArgs::NM { n, m } }
    }

    pub fn pq(family: Family, p: i64, q: i64) -> Self {
        TheoremParams { family, args: FamilyArgs::PQ { p, q } }
    }

    pub fn horadam(family: Family, r: i64, params: HoradamParams) -> Self {
        TheoremParams { family, args: FamilyArgs::Horadam { r, params } }
    }

    /// Record id such as `thm1-fib-r3` or `thm7-luc-pneg2-q5`.
    pub fn id(&self) -> String {
        let fam = self.family.slug();
        match &self.args {
            FamilyArgs::R(r) => format!("{fam}-r{}", tag(*r)),
            FamilyArgs::NM { n, m } => format!("{fam}-n{}-m{}", tag(*n), tag(*m)),
            FamilyArgs::PQ { p, q } => format!("{fam}-p{}-q{}", tag(*p), tag(*q)),
            FamilyArgs::Horadam { r, params } => format!(
                "{fam}-p{}-q{}-a{}-b{}-r{}",
                tag(params.p.to_i64().unwrap_or(0)),
                tag(params.q.to_i64().unwrap_or(0)),
                tag(params.a.to_i64().unwrap_or(0)),
                tag(params.b.to_i64().unwrap_or(0)),
                tag(*r)
            ),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("family".into(), json!(self.family.name()));
        match &self.args {
            FamilyArgs::R(r) => {
                m.insert("r".into(), json!(r));
            }
            FamilyArgs::NM { n, m: mm } => {
                m.insert("n".into(), json!(n));
                m.insert("m".into(), json!(mm));
            }
            FamilyArgs::PQ { p, q } => {
                m.insert("p".into(), json!(p));
                m.insert("q".into(), json!(q));
            }
            FamilyArgs::Horadam { r, params } => {
                m.insert("r".into(), json!(r));
                m.insert(
                    "sequence".into(),
                    json!({
                        "p": params.p.to_string(),
                        "q": params.q.to_string(),
                        "a": params.a.to_string(),
                        "b": params.b.to_string(),
                    }),
                );
            }
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Catalog(format!("family reference: {what}"));
        let family: Family = v
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing \"family\""))?
            .parse()?;
        let int = |key: &str| {
            v.get(key)
                .and_then(Value::as_i64)
                .ok_or_else(|| bad(&format!("missing integer {key:?}")))
        };
        let args = match family {
            Family::Thm3(_) => FamilyArgs::NM { n: int("n")?, m: int("m")? },
            Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_) => FamilyArgs::PQ { p: int("p")?, q: int("q")? },
            Family::HoradamA2 | Family::HoradamA1 => {
                let seq = v.get("sequence").ok_or_else(|| bad("missing \"sequence\""))?;
                let big = |key: &str| -> Result<Integer> {
                    match seq.get(key) {
                        Some(Value::String(s)) => s.parse().map_err(|_| bad(&format!("bad integer {s:?}"))),
                        Some(Value::Number(n)) => n.as_i64().map(Integer::from).ok_or_else(|| bad("bad integer")),
                        _ => Err(bad(&format!("missing sequence field {key:?}"))),
                    }
                };
                let params = HoradamParams::new(big("p")?, big("q")?, big("a")?, big("b")?)?;
                FamilyArgs::Horadam { r: int("r")?, params }
            }
            _ => FamilyArgs::R(int("r")?),
        };
        Ok(TheoremParams { family, args })
    }
}

impl fmt::Display for TheoremParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.args {
            FamilyArgs::R(r) => write!(f, "{} r={r}", self.family),
            FamilyArgs::NM { n, m } => write!(f, "{} n={n} m={m}", self.family),
            FamilyArgs::PQ { p, q } => write!(f, "{} p={p} q={q}", self.family),
            FamilyArgs::Horadam { r, params } => write!(f, "{} {params} r={r}", self.family),
        }
    }
}

/// Branch of the Binet split used by the weighted families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Alpha,
    Beta,
}

fn invalid(params: &TheoremParams, why: impl fmt::Display) -> Error {
    Error::InvalidParams(format!("{params}: {why}"))
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn r_index(params: &TheoremParams) -> Result<i64> {
    match (&params.family, &params.args) {
        (Family::Cor2(_) | Family::Cor5(_), FamilyArgs::R(r)) => Ok(3 * r),
        (_, FamilyArgs::R(r)) => Ok(*r),
        _ => Err(invalid(params, "expected a single index r")),
    }
}

/// Exact `(x, y)` for the third family's variants.
fn thm3_pair(v: u8, n: i64, m: i64) -> (Integer, Integer) {
    let f = fib;
    let l = lucas;
    let s = |k: i64, e: Integer| if sign(k) > 0 { e } else { -e };
    match v {
        1 => (f(n).square(), s(n - m - 1, f(m).square())),
        2 => (f(n + m), s(m, f(n - m))),
        3 => (f(n + m), s(m - 1, f(n - m))),
        4 => (l(n) * f(m), l(m) * f(n)),
        5 => (l(n + m), s(m, l(n - m))),
        _ => (l(n + m), s(m - 1, l(n - m))),
    }
}

/// Exact check of `x/y >= 1` (or `> 1`) or `x/y <= -(sqrt2 + 1)^2`.
fn in_window(x: &Integer, y: &Integer, strict: bool) -> bool {
    if *y == 0 {
        return false;
    }
    let t = Rational::from((x.clone(), y.clone()));
    if t > 1 || (!strict && t == 1) {
        return true;
    }
    // -t >= 3 + 2 sqrt2  <=>  -t - 3 >= 0 and (-t - 3)^2 >= 8
    let u = Rational::from(-t) - 3u32;
    u >= 0 && Rational::from(u.square_ref()) >= 8u32
}

fn check_r(params: &TheoremParams, r: i64) -> Result<()> {
    let kind = params.family.kind().expect("single-index families have a kind");
    let min = match (params.family, kind) {
        (Family::Thm1(_), Kind::Fib) | (Family::Cor2(_), Kind::Fib) => 1,
        (Family::Thm4(_), Kind::Fib) | (Family::Cor5(_), Kind::Fib) | (Family::Thm6(_), Kind::Fib) => 1,
        (Family::Cor2(_), Kind::Luc) => 0,
        (Family::Cor5(_), Kind::Luc) => 1,
        (Family::Thm1(_), Kind::Luc) => {
            if r == 1 {
                return Err(invalid(
                    params,
                    "r = 1 puts 27/L_1^2 = 27 outside the radius 27/4, so r != 1 is required",
                ));
            }
            0
        }
        _ => {
            if r == 1 {
                return Err(invalid(params, "r = 1 puts 27/L_1^2 = 27 outside the radius 27/4"));
            }
            if r == 0 {
                return Err(invalid(params, "r = 0 is excluded (F_0 = 0 appears in a denominator)"));
            }
            2
        }
    };
    if r < min {
        return Err(invalid(params, format!("r must be at least {min}")));
    }
    if r > MAX_INDEX {
        return Err(invalid(params, format!("r must not exceed {MAX_INDEX}")));
    }
    Ok(())
}

fn check_thm3(params: &TheoremParams, v: u8, n: i64, m: i64) -> Result<()> {
    if !(1..=6).contains(&v) {
        return Err(invalid(params, "variant must be 1..6"));
    }
    if m < 1 || n > MAX_INDEX {
        return Err(invalid(params, format!("need 1 <= m and n <= {MAX_INDEX}")));
    }
    match v {
        1 if n <= m => return Err(invalid(params, "variant 1 needs n > m >= 1")),
        4 => {
            if lucas(n) * fib(m) <= fib(n) * lucas(m) {
                return Err(invalid(
                    params,
                    format!("variant 4 needs L_n F_m > F_n L_m, got {} <= {}", lucas(n) * fib(m), fib(n) * lucas(m)),
                ));
            }
        }
        _ if n < m => return Err(invalid(params, format!("variant {v} needs n >= m >= 1"))),
        _ => {}
    }
    let (x, y) = thm3_pair(v, n, m);
    if y == 0 {
        return Err(invalid(params, "the series argument vanishes (y = 0)"));
    }
    if !in_window(&x, &y, false) {
        return Err(invalid(
            params,
            format!("x/y = {x}/{y} lies outside x/y >= 1 or x/y <= -(sqrt2 + 1)^2"),
        ));
    }
    Ok(())
}

fn check_pq(params: &TheoremParams, p: i64, q: i64) -> Result<()> {
    if p > -2 {
        return Err(invalid(params, "p <= -2 is required"));
    }
    if q < 4 {
        return Err(invalid(params, "q >= 4 is required"));
    }
    if q <= p.abs() + 1 {
        return Err(invalid(params, "q > |p| + 1 is required"));
    }
    if q > MAX_INDEX {
        return Err(invalid(params, format!("q must not exceed {MAX_INDEX}")));
    }
    Ok(())
}

fn check_horadam(params: &TheoremParams, r: i64, seq: &HoradamParams) -> Result<()> {
    if !(1..=MAX_INDEX).contains(&r) {
        return Err(invalid(params, format!("r must lie in 1..={MAX_INDEX}")));
    }
    if seq.q == 0 {
        return Err(invalid(params, "q must be non-zero"));
    }
    if seq.ab_product() == 0 {
        return Err(invalid(params, "A B = b^2 - abp - a^2 q vanishes"));
    }
    if horadam(r as u64, seq) == 0 {
        return Err(invalid(params, "W_r vanishes"));
    }
    let ctx = make_context(30, 1)?;
    let pair = horadam_pair(seq, r, &ctx)?;
    pair.check_window(params.family.level(), &ctx)
        .map_err(|e| invalid(params, format!("substitution pair is invalid: {e}")))
}

/// Checks the family's parameter constraints and that the series converges.
pub fn validate(params: &TheoremParams) -> Result<()> {
    match (&params.family, &params.args) {
        (Family::Thm3(v), FamilyArgs::NM { n, m }) => check_thm3(params, *v, *n, *m)?,
        (Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_), FamilyArgs::PQ { p, q }) => check_pq(params, *p, *q)?,
        (Family::HoradamA2 | Family::HoradamA1, FamilyArgs::Horadam { r, params: seq }) => {
            check_horadam(params, *r, seq)?
        }
        (Family::Thm3(_), _)
        | (Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_), _)
        | (Family::HoradamA2 | Family::HoradamA1, _) => {
            return Err(invalid(params, "parameters do not match the family"));
        }
        (_, FamilyArgs::R(r)) => check_r(params, *r)?,
        _ => return Err(invalid(params, "expected a single index r")),
    }
    let spec = lhs_spec_unchecked(params)?;
    let ctx = make_context(30, 1)?;
    if classify(&spec, &ctx)? == ConvergenceClass::DivergentFormal {
        return Err(invalid(params, format!("series argument {} lies outside the radius", spec.z)));
    }
    Ok(())
}

fn rat(num: impl Into<Integer>, den: impl Into<Integer>) -> Rational {
    Rational::from((num.into(), den.into()))
}

fn lhs_spec_unchecked(params: &TheoremParams) -> Result<SeriesSpec> {
    let a = params.family.level().exponent();
    let (z, weight) = match (&params.family, &params.args) {
        (Family::Thm3(v), FamilyArgs::NM { n, m }) => (thm3_argument(*v, *n, *m), Weight::Unit),
        (Family::Thm7(k) | Family::Thm9(k) | Family::Thm10(k), FamilyArgs::PQ { p, q }) => {
            let z = rat(fib(*p) * fib(p + q) * -27, fib(*q).square());
            let m = 2 * p + q;
            let w = match k {
                Kind::Fib => Weight::Fib(m),
                Kind::Luc => Weight::Lucas(m),
            };
            (z, w)
        }
        (Family::HoradamA2 | Family::HoradamA1, FamilyArgs::Horadam { r, params: seq }) => {
            let w = horadam(*r as u64, seq);
            let qr = Integer::from(rug::ops::Pow::pow(&seq.q, *r as u32));
            let num = seq.ab_product() * qr * 27 * sign(r - 1);
            let den = seq.discriminant() * w.square();
            if den == 0 {
                return Err(invalid(params, "W_r vanishes"));
            }
            (rat(num, den), Weight::Unit)
        }
        (family, FamilyArgs::R(_)) => {
            let r = r_index(params)?;
            let z = match family.kind() {
                Some(Kind::Fib) => rat(27 * sign(r - 1), fib(r).square() * 5),
                _ => rat(27 * sign(r), lucas(r).square()),
            };
            (z, Weight::Unit)
        }
        _ => return Err(invalid(params, "parameters do not match the family")),
    };
    Ok(SeriesSpec::new(z, a, weight)?.with_label(params.id()))
}

fn thm3_argument(v: u8, n: i64, m: i64) -> Rational {
    let (f, l) = (fib, lucas);
    match v {
        1 => rat(f(n).square() * f(m).square() * 27 * sign(n - m - 1), (f(n - m) * f(n + m)).square()),
        2 => rat(f(n + m) * f(n - m) * 27 * sign(m), (l(m) * f(n)).square()),
        3 => rat(f(n + m) * f(n - m) * 27 * sign(m - 1), (f(m) * l(n)).square()),
        4 => rat(f(2 * m) * f(2 * n) * 27, f(n + m).square() * 4),
        5 => rat(l(n + m) * l(n - m) * 27 * sign(m), (l(m) * l(n)).square()),
        _ => rat(l(n + m) * l(n - m) * 27 * sign(m - 1), (f(m) * f(n)).square() * 25),
    }
}

/// The series `sum z^k w(k) / (k^a C(3k,k))` a family instance evaluates.
pub fn theorem_lhs_spec(params: &TheoremParams) -> Result<SeriesSpec> {
    validate(params)?;
    lhs_spec_unchecked(params)
}

fn n(v: i64) -> E {
    E::int(v)
}

fn big(v: Integer) -> E {
    E::int(v)
}

fn q(v: Rational) -> E {
    E::rational(v)
}

fn rt(v: i64) -> E {
    n(v).sqrt()
}

fn al(k: i64) -> E {
    match k {
        0 => n(1),
        1 => E::alpha(),
        _ => E::alpha().pow(k as i32),
    }
}

/// `beta^k` written as `(-1)^k alpha^-k`.
fn be(k: i64) -> E {
    if sign(k) > 0 {
        al(-k)
    } else {
        -al(-k)
    }
}

/// `a + b` or `a - b`.
fn pm(a: E, s: i64, b: E) -> E {
    if s > 0 {
        a + b
    } else {
        a - b
    }
}

fn signed(s: i64, e: E) -> E {
    if s > 0 {
        e
    } else {
        -e
    }
}

fn six_sq(e: E) -> E {
    n(6) * e.square()
}

fn half_sq(e: E) -> E {
    e.square() / n(2)
}

fn cb(e: E) -> E {
    e.cbrt()
}

fn at(num: E, den: E) -> E {
    (num / den).atan()
}

fn lg_cube(num: E, den: E) -> E {
    (num / den.pow(3)).ln()
}

fn expr_r(family: Family, r: i64) -> E {
    let s3 = || rt(3);
    let s5 = || rt(5);
    let sg = sign(r);
    let (fr, lr) = (fib(r), lucas(r));
    let c = || cb(al(2 * r));
    match family {
        Family::Thm1(Kind::Fib) => {
            six_sq(at(s3(), pm(n(2) * c(), sg, n(1))))
                - half_sq(lg_cube(s5() * al(r) * big(fr), pm(c(), -sg, n(1))))
        }
        Family::Thm1(Kind::Luc) => {
            six_sq(at(s3(), pm(n(2) * c(), -sg, n(1)))) - half_sq(lg_cube(al(r) * big(lr), pm(c(), sg, n(1))))
        }
        Family::Cor2(Kind::Fib) => {
            let r3 = 3 * r;
            six_sq(at(s3(), al(2 * r) + al(r) * big(lr.clone())))
                - half_sq(q(rat(fib(r3), fr.clone().pow(3) * 5)).ln())
        }
        Family::Cor2(Kind::Luc) => {
            let r3 = 3 * r;
            six_sq(at(s3(), al(2 * r) + s5() * al(r) * big(fr)))
                - half_sq(q(rat(lucas(r3), lr.clone().pow(3))).ln())
        }
        Family::Thm4(Kind::Fib) => {
            let body = n(2) * s3() * pm(c(), -sg, n(1)) * at(s3(), pm(n(2) * c(), sg, n(1)))
                - n(sg) * pm(c(), sg, n(1)) * lg_cube(s5() * al(r) * big(fr), pm(c(), -sg, n(1)));
            body / (cb(al(r)) * big(lr))
        }
        Family::Thm4(Kind::Luc) => {
            let body = n(2) * s3() * pm(c(), sg, n(1)) * at(s3(), pm(n(2) * c(), -sg, n(1)))
                + n(sg) * pm(c(), -sg, n(1)) * lg_cube(al(r) * big(lr), pm(c(), sg, n(1)));
            s5() / (n(5) * cb(al(r)) * big(fr)) * body
        }
        Family::Cor5(Kind::Fib) => {
            let l3 = lucas(3 * r);
            n(2) * rt(15) * q(rat(fr.clone(), l3.clone())) * at(s3(), al(r) * (al(r) + big(lr.clone())))
                - n(sg) * q(rat(lr, l3)) * q(rat(fib(3 * r), fr.pow(3) * 5)).ln()
        }
        Family::Cor5(Kind::Luc) => {
            let f3 = fib(3 * r);
            rt(15) * q(rat(lr.clone() * 2, f3.clone() * 5)) * at(s3(), al(r) * (al(r) + s5() * big(fr.clone())))
                + n(sg) * q(rat(fr, f3)) * q(rat(lucas(3 * r), lr.pow(3))).ln()
        }
        Family::Thm6(Kind::Fib) => {
            let (a2, b2, a4, b4) = (|| cb(al(2 * r)), || cb(al(-2 * r)), || cb(al(4 * r)), || cb(al(-4 * r)));
            let l3 = lr.clone().pow(3);
            let shown = q(rat(4, lr.square()))
                + rt(15) * q(rat(fr.clone() * 2, l3.clone() * 3))
                    * pm(n(2) * (a2() + b2()), -sg, a4() + b4())
                    * at(s3(), pm(n(2) * a2(), sg, n(1)))
                + n(sg) * s5() * q(rat(fr.clone(), l3 * 3))
                    * pm(n(2) * (a2() - b2()), sg, a4() - b4())
                    * lg_cube(s5() * al(r) * big(fr), pm(a2(), -sg, n(1)));
            // The displayed series carries the constant sign (-1)^(r-1).
            signed(sign(r - 1), shown)
        }
        Family::Thm6(Kind::Luc) => {
            let (a2, b2, a4, b4) = (|| cb(al(2 * r)), || cb(al(-2 * r)), || cb(al(4 * r)), || cb(al(-4 * r)));
            let f3 = fr.clone().pow(3);
            let shown = q(rat(4, fr.square() * 5))
                + rt(15) * q(rat(lr.clone() * 2, f3.clone() * 75))
                    * pm(n(2) * (a2() + b2()), sg, a4() + b4())
                    * at(s3(), pm(n(2) * a2(), -sg, n(1)))
                - n(sg) * s5() * q(rat(lr.clone(), f3 * 75))
                    * pm(n(2) * (a2() - b2()), -sg, a4() - b4())
                    * lg_cube(big(lr), cb(al(r)) + cb(be(r)));
            // The displayed series carries the constant sign (-1)^r.
            signed(sg, shown)
        }
        _ => unreachable!("single-index family"),
    }
}

fn expr_thm3(v: u8, n_: i64, m: i64) -> E {
    let s3 = || rt(3);
    let (f, l) = (|k: i64| big(fib(k)), |k: i64| big(lucas(k)));
    let sg = sign(n_ - m);
    let sm = sign(m);
    let (np, nm) = (n_ + m, n_ - m);
    match v {
        1 => {
            let cn = || cb(big(fib(n_).square()));
            let cm = || cb(big(fib(m).square()));
            six_sq(at(s3() * cm(), pm(n(2) * cn(), sg, cm())))
                - half_sq(lg_cube(big(fib(nm) * fib(np)), pm(cn(), -sg, cm())))
        }
        2 | 3 => {
            let s = if v == 2 { -sm } else { sm };
            let num = if v == 2 { big(lucas(m) * fib(n_)) } else { big(fib(m) * lucas(n_)) };
            six_sq(at(s3() * cb(f(nm)), pm(n(2) * cb(f(np)), s, cb(f(nm)))))
                - half_sq(lg_cube(num, pm(cb(f(np)), -s, cb(f(nm)))))
        }
        4 => {
            let cx = || cb(big(lucas(n_) * fib(m)));
            let cy = || cb(big(lucas(m) * fib(n_)));
            six_sq(at(s3() * cy(), n(2) * cx() - cy())) - half_sq(lg_cube(big(fib(np) * 2), cx() + cy()))
        }
        _ => {
            let s = if v == 5 { -sm } else { sm };
            let num = if v == 5 { big(lucas(m) * lucas(n_)) } else { big(fib(m) * fib(n_) * 5) };
            six_sq(at(s3() * cb(l(nm)), pm(n(2) * cb(l(np)), s, cb(l(nm)))))
                - half_sq(lg_cube(num, pm(cb(l(np)), -s, cb(l(nm)))))
        }
    }
}

/// Shared pieces of the weighted families at `(p, q)`.
struct PqParts {
    t1: E,
    t2: E,
    t2_alt: E,
    l1: E,
    l2: E,
}

fn pq_parts(p: i64, q_: i64) -> PqParts {
    let s3 = || rt(3);
    let fp = || big(fib(p));
    let fpq = || big(fib(p + q_));
    let fq = || big(fib(q_));
    let sq = sign(q_);
    PqParts {
        t1: at(s3() * cb(fpq()), n(2) * cb(al(q_) * fp()) + cb(fpq())),
        t2: at(s3() * cb(fp()), pm(n(2) * cb(al(q_) * fpq()), sq, cb(fp()))),
        t2_alt: at(s3() * cb(fp()), n(2 * sq) * cb(al(q_) * fpq()) + cb(fp())),
        l1: lg_cube(n(sign(p)) * fq(), cb(al(p) * fpq()) - cb(al(p + q_) * fp())),
        l2: lg_cube(al(p + q_) * fq(), pm(cb(al(q_) * fpq()), -sq, cb(fp()))),
    }
}

fn expr_pq(family: Family, p: i64, q_: i64) -> E {
    let s3 = || rt(3);
    let s5 = || rt(5);
    let fp = || big(fib(p));
    let fpq = || big(fib(p + q_));
    let sq = sign(q_);
    let PqParts { t1, t2, t2_alt, l1, l2 } = pq_parts(p, q_);
    // s^q for s = alpha, beta
    let sq_pow = |b: Branch, k: i64| match b {
        Branch::Alpha => al(k),
        Branch::Beta => be(k),
    };
    match family {
        Family::Thm7(Kind::Fib) => {
            n(6) / s5() * (t1.square() - t2.square()) - s5() / n(10) * (l1.square() - l2.square())
        }
        Family::Thm7(Kind::Luc) => {
            n(6) * (t1.square() + t2.square()) - (l1.square() + l2.square()) / n(2)
        }
        Family::Thm9(kind) => {
            let a_pm = |b: Branch, s: i64| {
                let sqp = || sq_pow(b, q_);
                cb(sqp()) * pm(cb(sqp() * fp()), s, cb(fpq())) / (sqp() * fp() + fpq())
            };
            let l1b = lg_cube(be(p) * big(fib(q_)), cb(fpq()) - cb(al(q_) * fp()));
            let l2b = lg_cube(al(p) * big(fib(q_)), cb(fpq()) - cb(be(q_) * fp()));
            let scale = cb(big(fib(p) * fib(p + q_)));
            match kind {
                Kind::Fib => {
                    let body = n(2) * s3() * (a_pm(Branch::Alpha, -1) * t1 + a_pm(Branch::Beta, -1) * t2_alt)
                        - (a_pm(Branch::Alpha, 1) * l1b - a_pm(Branch::Beta, 1) * l2b);
                    body * scale / s5()
                }
                Kind::Luc => {
                    let body = n(2) * s3() * (a_pm(Branch::Alpha, -1) * t1 - a_pm(Branch::Beta, -1) * t2_alt)
                        - (a_pm(Branch::Alpha, 1) * l1b + a_pm(Branch::Beta, 1) * l2b);
                    body * scale
                }
            }
        }
        Family::Thm10(kind) => {
            let b_pm = |b: Branch, s: i64| {
                let sp = |k: i64| sq_pow(b, k);
                let lead = cb(sp(q_ - 3 * p)) / (sp(q_) * fp() + fpq()).pow(3);
                let inner = pm(cb(sp(4 * q_) * big(fib(p).pow(4))), s, cb(big(fib(p + q_).pow(4))));
                let cross = n(2) * cb(sp(q_) * big(fib(p) * fib(p + q_)))
                    * pm(cb(sp(2 * q_) * big(fib(p).square())), s, cb(big(fib(p + q_).square())));
                lead * pm(inner, -s, cross)
            };
            let den = (fpq() + al(q_) * fp()).square() * (fpq() + be(q_) * fp()).square();
            let c2 = cb(big((fib(p) * fib(p + q_)).square()));
            let fq = fib(q_);
            let body = match kind {
                Kind::Fib => {
                    let num = fib(p + q_).square() - fib(p).square() * sq;
                    n(4 * sign(p - 1)) * c2 * big(num) / den
                        - n(2) * rt(15) / n(15) * (b_pm(Branch::Alpha, 1) * t1.clone() + b_pm(Branch::Beta, 1) * t2_alt.clone())
                        + s5() / n(15) * (b_pm(Branch::Alpha, -1) * l1.clone() - b_pm(Branch::Beta, -1) * l2.clone())
                }
                Kind::Luc => {
                    let lq = lucas(q_);
                    let num = fib(p).square() * lq.clone() + fib(p + q_).square() * lq * sq + fib(p) * fib(p + q_) * 4;
                    n(4 * sign(p - q_ - 1)) * c2 * q(rat(num, fq.clone())) / den
                        - n(2) / s3() * (b_pm(Branch::Alpha, 1) * t1.clone() - b_pm(Branch::Beta, 1) * t2_alt.clone())
                        + (b_pm(Branch::Alpha, -1) * l1.clone() + b_pm(Branch::Beta, -1) * l2.clone()) / n(3)
                }
            };
            body * big(fq * sign(p)) * cb(big(fib(p) * fib(p + q_)))
        }
        _ => unreachable!("(p, q) family"),
    }
}

/// Horadam roots and Binet constants as expressions.
struct HoradamExprs {
    alpha: E,
    a_const: E,
    b_const: E,
    delta: E,
}

fn horadam_exprs(seq: &HoradamParams) -> HoradamExprs {
    let d = || big(seq.discriminant()).sqrt();
    let alpha = (big(seq.p.clone()) + d()) / n(2);
    let beta = (big(seq.p.clone()) - d()) / n(2);
    let shift = |root: E| {
        if seq.a == 0 {
            big(seq.b.clone())
        } else {
            big(seq.b.clone()) - big(seq.a.clone()) * root
        }
    };
    HoradamExprs {
        a_const: shift(beta),
        b_const: shift(alpha.clone()),
        alpha,
        delta: d(),
    }
}

fn expr_horadam(level: Level, r: i64, seq: &HoradamParams) -> E {
    let h = horadam_exprs(seq);
    let s3 = || rt(3);
    let ar = |k: i64| h.alpha.clone().pow(k as i32);
    let q_pow = Integer::from(rug::ops::Pow::pow(&seq.q, r as u32));
    let mq_pow = if r % 2 == 0 { q_pow.clone() } else { -q_pow.clone() };
    let x_cb = || cb(h.a_const.clone() * ar(2 * r));
    let y_cb = || cb(h.b_const.clone() * big(mq_pow.clone()));
    let angle = at(s3() * cb(h.b_const.clone() * big(q_pow.clone())), n(2) * x_cb() + y_cb());
    let w = horadam(r as u64, seq);
    let lg = lg_cube(ar(r) * h.delta.clone() * big(w), x_cb() - y_cb());
    match level {
        Level::A => six_sq(angle) - half_sq(lg),
        _ => {
            let body = n(2) * s3() * (x_cb() - y_cb()) * angle - n(sign(r)) * (x_cb() + y_cb()) * lg;
            let pref_num = h.a_const.clone() * ar(2 * r) + h.b_const.clone() * big(mq_pow);
            let pref_den = cb(big(seq.ab_product() * q_pow) * ar(2 * r));
            body * pref_den / pref_num
        }
    }
}

/// Closed form of a family instance, normalized to equal the plain series
/// returned by [`theorem_lhs_spec`].
pub fn theorem_expr(params: &TheoremParams) -> Result<E> {
    validate(params)?;
    Ok(match (&params.family, &params.args) {
        (Family::Thm3(v), FamilyArgs::NM { n, m }) => expr_thm3(*v, *n, *m),
        (f @ (Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_)), FamilyArgs::PQ { p, q }) => expr_pq(*f, *p, *q),
        (f @ (Family::HoradamA2 | Family::HoradamA1), FamilyArgs::Horadam { r, params: seq }) => {
            expr_horadam(f.level(), *r, seq)
        }
        (f, FamilyArgs::R(r)) => expr_r(*f, *r),
        _ => return Err(invalid(params, "parameters do not match the family")),
    })
}

/// Evaluates [`theorem_expr`].
pub fn theorem_rhs(params: &TheoremParams, ctx: &PrecisionContext) -> Result<Real> {
    theorem_expr(params)?.eval(ctx)
}

fn horadam_pair(seq: &HoradamParams, r: i64, ctx: &PrecisionContext) -> Result<XYPair> {
    let alpha = seq.alpha_star(ctx);
    let x = seq.big_a(ctx) * ctx.real(rug::ops::Pow::pow(&alpha, (2 * r) as i32));
    let mq = Integer::from(rug::ops::Pow::pow(Integer::from(-&seq.q), r as u32));
    let y = -(seq.big_b(ctx) * ctx.real(&mq));
    Ok(XYPair::new(x, y))
}

/// The `(x, y)` substitution of one Binet branch of a weighted family.
fn branch_pair(p: i64, q_: i64, branch: Branch, ctx: &PrecisionContext) -> Result<XYPair> {
    let root = match branch {
        Branch::Alpha => E::alpha().pow(q_ as i32),
        Branch::Beta => be(q_),
    };
    XYPair::from_exprs(&(root * big(fib(p))), &big(-fib(p + q_)), ctx)
}

/// Evaluates a family instance through the level identity at the
/// substitution `(x, y)` used to derive it, recombining Binet branches
/// for the weighted families.
pub fn theorem_substitution(params: &TheoremParams, ctx: &PrecisionContext) -> Result<Real> {
    validate(params)?;
    let level = params.family.level();
    match (&params.family, &params.args) {
        (Family::Thm3(v), FamilyArgs::NM { n, m }) => {
            let (x, y) = thm3_pair(*v, *n, *m);
            level_rhs(level, &XYPair::new(ctx.real(&x), ctx.real(&y)), ctx)
        }
        (Family::Thm7(k) | Family::Thm9(k) | Family::Thm10(k), FamilyArgs::PQ { p, q }) => {
            let sa = level_rhs_oriented(level, &branch_pair(*p, *q, Branch::Alpha, ctx)?, ctx)?;
            let sb = level_rhs_oriented(level, &branch_pair(*p, *q, Branch::Beta, ctx)?, ctx)?;
            Ok(match k {
                Kind::Fib => (sa - sb) / ctx.real(5).sqrt(),
                Kind::Luc => sa + sb,
            })
        }
        (Family::HoradamA2 | Family::HoradamA1, FamilyArgs::Horadam { r, params: seq }) => {
            level_rhs(level, &horadam_pair(seq, *r, ctx)?, ctx)
        }
        (family, FamilyArgs::R(_)) => {
            let r = r_index(params)?;
            let y = match family.kind() {
                Some(Kind::Fib) => sign(r + 1),
                _ => sign(r),
            };
            let alpha = crate::numerics::golden_ratio(ctx);
            let x = ctx.real(rug::ops::Pow::pow(&alpha, (2 * r) as i32));
            level_rhs(level, &XYPair::new(x, ctx.real(y)), ctx)
        }
        _ => Err(invalid(params, "parameters do not match the family")),
    }
}

/// One Binet branch of the level-A weighted family at `(p, q)`, in the
/// displayed form.
pub fn thm7_intermediate(params: &TheoremParams, branch: Branch, ctx: &PrecisionContext) -> Result<Real> {
    let (p, q_) = match (&params.family, &params.args) {
        (Family::Thm7(_), FamilyArgs::PQ { p, q }) => (*p, *q),
        _ => return Err(invalid(params, "expected a THM7 family with (p, q)")),
    };
    check_pq(params, p, q_)?;
    let parts = pq_parts(p, q_);
    let e = match branch {
        Branch::Alpha => six_sq(parts.t1) - half_sq(parts.l1),
        Branch::Beta => six_sq(parts.t2) - half_sq(parts.l2),
    };
    e.eval(ctx)
}

/// The `(x, y)` pair behind one branch, for comparison against the level identity.
pub fn thm7_branch_pair(params: &TheoremParams, branch: Branch, ctx: &PrecisionContext) -> Result<XYPair> {
    match &params.args {
        FamilyArgs::PQ { p, q } => branch_pair(*p, *q, branch, ctx),
        _ => Err(invalid(params, "expected (p, q)")),
    }
}
