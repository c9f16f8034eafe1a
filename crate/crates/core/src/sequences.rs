//! Exact Fibonacci, Lucas and Horadam numbers.
//!
//! Negative indices follow `F(-j) = (-1)^(j-1) F(j)` and
//! `L(-j) = (-1)^j L(j)`. Horadam sequences use the recurrence
//! `W(n) = p W(n-1) + q W(n-2)`, whose characteristic roots are
//! `(p ± sqrt(p^2 + 4q)) / 2`.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::numerics::{golden_conjugate, golden_ratio, PrecisionContext, Real};
use crate::{Error, Result};

/// `(F(n), F(n+1))` by fast doubling.
fn fib_pair(n: u64) -> (Integer, Integer) {
    if n == 0 {
        return (Integer::new(), Integer::from(1));
    }
    let (a, b) = fib_pair(n / 2);
    // F(2k) = F(k) (2F(k+1) - F(k)),  F(2k+1) = F(k)^2 + F(k+1)^2
    let two_b_minus_a = Integer::from(&b << 1) - &a;
    let c = Integer::from(&a * &two_b_minus_a);
    let d = Integer::from(a.square_ref()) + Integer::from(b.square_ref());
    if n % 2 == 0 {
        (c, d)
    } else {
        let e = Integer::from(&c + &d);
        (d, e)
    }
}

/// Fibonacci number for any integer index.
pub fn fib(n: i64) -> Integer {
    let (f, _) = fib_pair(n.unsigned_abs());
    if n < 0 && n % 2 == 0 {
        -f
    } else {
        f
    }
}

/// Lucas number for any integer index.
pub fn lucas(n: i64) -> Integer {
    let k = n.unsigned_abs();
    let (f, f1) = fib_pair(k);
    // L(k) = 2F(k+1) - F(k)
    let l = Integer::from(&f1 << 1) - f;
    if n < 0 && k % 2 == 1 {
        -l
    } else {
        l
    }
}

/// Parameters of `W(n) = p W(n-1) + q W(n-2)`, `W(0) = a`, `W(1) = b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HoradamParams {
    pub p: Integer,
    pub q: Integer,
    pub a: Integer,
    pub b: Integer,
}

impl HoradamParams {
    /// Rejects parameters without two distinct real roots.
    pub fn new(
        p: impl Into<Integer>,
        q: impl Into<Integer>,
        a: impl Into<Integer>,
        b: impl Into<Integer>,
    ) -> Result<Self> {
        let params = HoradamParams {
            p: p.into(),
            q: q.into(),
            a: a.into(),
            b: b.into(),
        };
        if params.discriminant() <= 0 {
            return Err(Error::InvalidParams(format!(
                "p^2 + 4q = {} must be positive",
                params.discriminant()
            )));
        }
        Ok(params)
    }

    pub fn fibonacci() -> Self {
        Self::new(1, 1, 0, 1).expect("valid")
    }

    pub fn lucas() -> Self {
        Self::new(1, 1, 2, 1).expect("valid")
    }

    pub fn pell() -> Self {
        Self::new(2, 1, 0, 1).expect("valid")
    }

    /// `p^2 + 4q`.
    pub fn discriminant(&self) -> Integer {
        Integer::from(self.p.square_ref()) + Integer::from(&self.q << 2)
    }

    /// `A B = b^2 - a b p - a^2 q`, exact.
    pub fn ab_product(&self) -> Integer {
        let ab = Integer::from(&self.a * &self.b);
        Integer::from(self.b.square_ref())
            - ab * &self.p
            - Integer::from(self.a.square_ref()) * &self.q
    }

    pub fn delta(&self, ctx: &PrecisionContext) -> Real {
        ctx.real(self.discriminant()).sqrt()
    }

    pub fn alpha_star(&self, ctx: &PrecisionContext) -> Real {
        (self.delta(ctx) + &self.p) / 2u32
    }

    pub fn beta_star(&self, ctx: &PrecisionContext) -> Real {
        (ctx.real(&self.p) - self.delta(ctx)) / 2u32
    }

    /// `A = b - a beta*`.
    pub fn big_a(&self, ctx: &PrecisionContext) -> Real {
        ctx.real(&self.b) - self.beta_star(ctx) * &self.a
    }

    /// `B = b - a alpha*`.
    pub fn big_b(&self, ctx: &PrecisionContext) -> Real {
        ctx.real(&self.b) - self.alpha_star(ctx) * &self.a
    }
}

impl fmt::Display for HoradamParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={}, a={}, b={})", self.p, self.q, self.a, self.b)
    }
}

/// `W(n)` by direct recurrence.
pub fn horadam(n: u64, params: &HoradamParams) -> Integer {
    let mut prev = params.a.clone();
    if n == 0 {
        return prev;
    }
    let mut cur = params.b.clone();
    for _ in 1..n {
        let next = Integer::from(&params.p * &cur) + Integer::from(&params.q * &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The auxiliary Fibonacci/Lucas identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlIdentity {
    /// `alpha^(2r) + (-1)^(r+1) = alpha^r F(r) sqrt 5`
    F1,
    /// `alpha^(2r) + (-1)^r = alpha^r L(r)`
    F2,
    /// `beta^(2r) + (-1)^(r+1) = -beta^r F(r) sqrt 5`
    F1Beta,
    /// `beta^(2r) + (-1)^r = beta^r L(r)`
    F2Beta,
    /// `F(n)^2 + (-1)^(n+m-1) F(m)^2 = F(n-m) F(n+m)`
    F3,
    /// `F(n+m) + (-1)^m F(n-m) = L(m) F(n)`
    F4,
    /// `F(n+m) + (-1)^(m-1) F(n-m) = F(m) L(n)`
    F5,
    /// `L(n) F(m) + F(n) L(m) = 2 F(n+m)`
    F6,
    /// `L(n+m) + (-1)^m L(n-m) = L(m) L(n)`
    F7,
    /// `L(n+m) + (-1)^(m-1) L(n-m) = 5 F(m) F(n)`
    F8,
    /// `F(p) alpha^q - F(p+q) = -beta^p F(q)`
    Lemma1,
    /// `F(p+q) - beta^q F(p) = alpha^p F(q)`
    Lemma2,
}

impl FlIdentity {
    pub const ALL: [FlIdentity; 12] = [
        FlIdentity::F1,
        FlIdentity::F2,
        FlIdentity::F1Beta,
        FlIdentity::F2Beta,
        FlIdentity::F3,
        FlIdentity::F4,
        FlIdentity::F5,
        FlIdentity::F6,
        FlIdentity::F7,
        FlIdentity::F8,
        FlIdentity::Lemma1,
        FlIdentity::Lemma2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlIdentity::F1 => "F1",
            FlIdentity::F2 => "F2",
            FlIdentity::F1Beta => "F1B",
            FlIdentity::F2Beta => "F2B",
            FlIdentity::F3 => "F3",
            FlIdentity::F4 => "F4",
            FlIdentity::F5 => "F5",
            FlIdentity::F6 => "F6",
            FlIdentity::F7 => "F7",
            FlIdentity::F8 => "F8",
            FlIdentity::Lemma1 => "LEMMA1",
            FlIdentity::Lemma2 => "LEMMA2",
        }
    }
}

impl FromStr for FlIdentity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FlIdentity::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Checks one auxiliary identity.
///
/// `F1`, `F2` and their beta companions use `r = m_or_r` and ignore `n`.
/// `LEMMA1`/`LEMMA2` use `p = n`, `q = m_or_r`. The integer identities
/// `F3`..`F8` are checked exactly; the others to `10^-target` relative to
/// the larger side.
pub fn check_fl_identity(id: FlIdentity, n: i64, m_or_r: i64, ctx: &PrecisionContext) -> bool {
    let m = m_or_r;
    let exact = |lhs: Integer, rhs: Integer| lhs == rhs;
    match id {
        FlIdentity::F3 => exact(
            fib(n).square() + sign(n + m - 1) * fib(m).square(),
            fib(n - m) * fib(n + m),
        ),
        FlIdentity::F4 => exact(fib(n + m) + sign(m) * fib(n - m), lucas(m) * fib(n)),
        FlIdentity::F5 => exact(fib(n + m) + sign(m - 1) * fib(n - m), fib(m) * lucas(n)),
        FlIdentity::F6 => exact(lucas(n) * fib(m) + fib(n) * lucas(m), 2 * fib(n + m)),
        FlIdentity::F7 => exact(lucas(n + m) + sign(m) * lucas(n - m), lucas(m) * lucas(n)),
        FlIdentity::F8 => exact(
            lucas(n + m) + sign(m - 1) * lucas(n - m),
            5 * fib(m) * fib(n),
        ),
        _ => {
            // alpha^e carries about 0.21 e decimal digits.
            let extra = ((n.unsigned_abs() + m.unsigned_abs()) as f64 * 0.42).ceil() as u32;
            let wide = ctx.with_target(ctx.target_digits() + extra).unwrap_or(*ctx);
            let (lhs, rhs) = real_sides(id, n, m, &wide);
            close(&lhs, &rhs, ctx)
        }
    }
}

fn real_sides(id: FlIdentity, n: i64, r: i64, ctx: &PrecisionContext) -> (Real, Real) {
    let al = golden_ratio(ctx);
    let be = golden_conjugate(ctx);
    let sqrt5 = ctx.real(5).sqrt();
    let pow = |x: &Real, e: i64| -> Real { ctx.real(Pow::pow(x, e as i32)) };
    match id {
        FlIdentity::F1 => (
            pow(&al, 2 * r) + sign(r + 1),
            pow(&al, r) * fib(r) * &sqrt5,
        ),
        FlIdentity::F2 => (pow(&al, 2 * r) + sign(r), pow(&al, r) * lucas(r)),
        FlIdentity::F1Beta => (
            pow(&be, 2 * r) + sign(r + 1),
            -(pow(&be, r) * fib(r) * &sqrt5),
        ),
        FlIdentity::F2Beta => (pow(&be, 2 * r) + sign(r), pow(&be, r) * lucas(r)),
        FlIdentity::Lemma1 => {
            let (p, q) = (n, r);
            (
                pow(&al, q) * fib(p) - fib(p + q),
                -(pow(&be, p) * fib(q)),
            )
        }
        FlIdentity::Lemma2 => {
            let (p, q) = (n, r);
            (
                ctx.real(fib(p + q)) - pow(&be, q) * fib(p),
                pow(&al, p) * fib(q),
            )
        }
        _ => unreachable!("integer identity"),
    }
}

fn close(lhs: &Real, rhs: &Real, ctx: &PrecisionContext) -> bool {
    let diff = Float::with_val(ctx.bits(), lhs - rhs).abs();
    let scale = Float::with_val(ctx.bits(), lhs.abs_ref()).max(&Float::with_val(ctx.bits(), rhs.abs_ref()));
    if scale.is_zero() {
        return diff.is_zero();
    }
    diff <= scale * ctx.epsilon()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;

    #[test]
    fn small_values() {
        assert_eq!(fib(10), 55);
        assert_eq!(fib(-2), -1);
        assert_eq!(fib(-5), 5);
        assert_eq!(fib(0), 0);
        assert_eq!(lucas(0), 2);
        assert_eq!(lucas(6), 18);
        assert_eq!(lucas(-3), -4);
        assert_eq!(lucas(-4), 7);
    }

    #[test]
    fn horadam_specialisations() {
        assert_eq!(horadam(5, &HoradamParams::fibonacci()), 5);
        assert_eq!(horadam(4, &HoradamParams::lucas()), 7);
        assert_eq!(horadam(3, &HoradamParams::pell()), 5);
        assert!(HoradamParams::new(1, -1, 0, 1).is_err());
        assert_eq!(HoradamParams::fibonacci().ab_product(), 1);
        assert_eq!(HoradamParams::lucas().ab_product(), -5);
    }

    #[test]
    fn horadam_roots() {
        let ctx = make_context(30, 1).unwrap();
        let h = HoradamParams::new(3, 2, 1, 4).unwrap();
        let (al, be) = (h.alpha_star(&ctx), h.beta_star(&ctx));
        let prod = Float::with_val(ctx.bits(), &al * &be) + &h.q;
        let sum = Float::with_val(ctx.bits(), &al + &be) - &h.p;
        assert!(prod.abs() < ctx.epsilon());
        assert!(sum.abs() < ctx.epsilon());
        let ab = h.big_a(&ctx) * h.big_b(&ctx) - h.ab_product();
        assert!(ab.abs() < ctx.epsilon());
    }

    #[test]
    fn worked_identity_cases() {
        let ctx = make_context(30, 1).unwrap();
        assert!(check_fl_identity(FlIdentity::F3, 7, 3, &ctx));
        assert!(check_fl_identity(FlIdentity::F6, 4, 2, &ctx));
        assert!(check_fl_identity(FlIdentity::F1, 0, 5, &ctx));
        assert!(check_fl_identity(FlIdentity::Lemma1, -2, 5, &ctx));
        assert_eq!("lemma2".parse::<FlIdentity>().unwrap(), FlIdentity::Lemma2);
    }
}
