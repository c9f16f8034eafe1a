//! Series `sum_{k>=1} z^k w(k) / (k^a C(3k,k))`.
//!
//! Geometric series are summed directly with a certified tail bound.
//! Series at the radius `|z| = 27/4` go through [`sum_boundary`], and
//! geometric series too slow for direct summation through
//! [`sum_accelerated`].

mod alternating;
mod asymptotic;
mod spec;
mod terms;

pub use spec::{SeriesArg, SeriesSpec, Weight};

use std::fmt;

use rug::{Float, Integer};

use crate::numerics::{PrecisionContext, Real};
use crate::{Error, Result};
use terms::TermIter;

/// Most digits [`sum_boundary`] will promise.
pub const BOUNDARY_DIGIT_BUDGET: u32 = 12;

const FIRST_PROBE: u64 = 64;
const BOUNDARY_TOLERANCE: f64 = 1e-6;

/// Exact `C(3k,k)`.
pub fn binom_3k_k(k: u64) -> Integer {
    let mut c = Integer::from(1);
    for j in 0..k {
        // C(3j+3, j+1) = C(3j, j) (3j+1)(3j+2)(3j+3) / ((j+1)(2j+1)(2j+2))
        c *= (3 * j + 1) * (3 * j + 2) * (3 * j + 3);
        c /= (j + 1) * (2 * j + 1) * (2 * j + 2);
    }
    c
}

/// How a series behaves at its argument.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvergenceClass {
    /// Terms decay like `rho^k` with `rho < 1`.
    Geometric { rho: Real },
    BoundaryPositive,
    BoundaryAlternating,
    DivergentFormal,
}

impl ConvergenceClass {
    pub fn name(&self) -> &'static str {
        match self {
            ConvergenceClass::Geometric { .. } => "geometric",
            ConvergenceClass::BoundaryPositive => "boundary-positive",
            ConvergenceClass::BoundaryAlternating => "boundary-alternating",
            ConvergenceClass::DivergentFormal => "divergent-formal",
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            ConvergenceClass::BoundaryPositive | ConvergenceClass::BoundaryAlternating
        )
    }
}

impl fmt::Display for ConvergenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvergenceClass::Geometric { rho } => {
                write!(f, "geometric(rho={})", rho.to_f64())
            }
            other => f.write_str(other.name()),
        }
    }
}

/// Limiting ratio `|z| g 4/27` and the sign of the limiting ratio.
fn limit_ratio(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<(Real, i32)> {
    let z = spec.z.eval(ctx)?;
    let (growth, root_sign) = spec.weight.growth(ctx);
    let rho = Float::with_val(ctx.bits(), z.abs_ref()) * growth * 4u32 / 27u32;
    let z_sign = if z < 0 { -1 } else { 1 };
    Ok((rho, z_sign * root_sign))
}

/// Classifies the series by its limiting term ratio.
pub fn classify(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<ConvergenceClass> {
    if spec.is_trivially_zero() {
        return Ok(ConvergenceClass::Geometric { rho: ctx.real(0) });
    }
    let (rho, sign) = limit_ratio(spec, ctx)?;
    let dist = Float::with_val(ctx.bits(), &rho - 1u32);
    Ok(if dist.clone().abs() <= BOUNDARY_TOLERANCE {
        if sign > 0 {
            ConvergenceClass::BoundaryPositive
        } else {
            ConvergenceClass::BoundaryAlternating
        }
    } else if dist > 0 {
        ConvergenceClass::DivergentFormal
    } else {
        ConvergenceClass::Geometric { rho }
    })
}

/// `sum_{k=1..K}` of the terms at working precision.
pub fn partial_sum(spec: &SeriesSpec, k_max: u64, ctx: &PrecisionContext) -> Result<Real> {
    let mut iter = TermIter::new(spec, ctx)?;
    let mut sum = ctx.real(0);
    for _ in 0..k_max {
        sum += iter.next_term();
    }
    Ok(sum)
}

/// Certified bound on `|sum_{k>K} term_k|` for a geometric series.
pub fn tail_bound(spec: &SeriesSpec, k_max: u64, ctx: &PrecisionContext) -> Result<Real> {
    let class = classify(spec, ctx)?;
    if !matches!(class, ConvergenceClass::Geometric { .. }) {
        return Err(Error::NotGeometric(class.name().into()));
    }
    let mut iter = TermIter::new(spec, ctx)?;
    for _ in 0..k_max {
        iter.next_term();
    }
    let next = iter.next_term().abs();
    iter.tail_from(&next, k_max)
}

/// How a [`SumResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    /// Partial sum plus a rigorous tail bound.
    Direct,
    /// Partial sum plus an asymptotic tail expansion; `tail` is an error estimate.
    Asymptotic,
    /// Alternating-series acceleration; `tail` is an error estimate.
    Alternating,
}

impl SumMethod {
    pub fn name(self) -> &'static str {
        match self {
            SumMethod::Direct => "direct",
            SumMethod::Asymptotic => "asymptotic",
            SumMethod::Alternating => "alternating",
        }
    }
}

/// Value of a series with an error bound or estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SumResult {
    pub value: Real,
    pub terms_used: u64,
    /// Bound on `|value - sum|`, including rounding.
    pub tail: Real,
    pub method: SumMethod,
}

fn context_for(digits: u32, ctx: &PrecisionContext) -> Result<PrecisionContext> {
    if digits > ctx.target_digits() {
        ctx.with_target(digits)
    } else {
        Ok(*ctx)
    }
}

/// Sums a geometric series until the certified error drops below `10^-digits`.
///
/// `K` is probed on the doubling schedule 64, 128, ...; the reported
/// `terms_used` is the first probe that succeeds. The reported tail adds
/// a rounding allowance to the truncation bound.
pub fn sum_to_digits(spec: &SeriesSpec, digits: u32, ctx: &PrecisionContext) -> Result<SumResult> {
    let ctx = &context_for(digits, ctx)?;
    let class = classify(spec, ctx)?;
    if !matches!(class, ConvergenceClass::Geometric { .. }) {
        return Err(Error::NotGeometric(class.name().into()));
    }
    let goal = ctx.ten_pow(-(digits as i32));
    let limit = ctx.max_expected_terms().max(FIRST_PROBE);
    let ulp = Float::with_val(ctx.bits(), Float::i_exp(1, -(ctx.bits() as i32)));
    let mut iter = TermIter::new(spec, ctx)?;
    let mut sum = ctx.real(0);
    let mut abs_sum = ctx.real(0);
    let mut done = 0u64;
    let mut probe = FIRST_PROBE;
    loop {
        while done < probe {
            let t = iter.next_term();
            abs_sum += t.clone().abs();
            sum += t;
            done += 1;
        }
        let next = iter.peek_term().abs();
        let truncation = iter.tail_from(&next, probe)?;
        let rounding = Float::with_val(ctx.bits(), &abs_sum * &ulp) * (8 * probe + 32);
        let tail = truncation + rounding;
        if tail < goal {
            return Ok(SumResult {
                value: sum,
                terms_used: probe,
                tail,
                method: SumMethod::Direct,
            });
        }
        if probe * 2 > limit {
            return Err(Error::MaxTermsExceeded { limit });
        }
        probe *= 2;
    }
}

/// Estimated number of terms direct summation needs for `digits`.
pub fn predicted_terms(spec: &SeriesSpec, digits: u32, ctx: &PrecisionContext) -> Result<Option<u64>> {
    match classify(spec, ctx)? {
        ConvergenceClass::Geometric { rho } => {
            let rho = rho.to_f64();
            if rho <= 0.0 {
                return Ok(Some(1));
            }
            let need = (digits as f64 + 2.0) * std::f64::consts::LN_10 - (1.0 - rho).ln();
            Ok(Some((need / -rho.ln()).ceil().max(1.0) as u64))
        }
        _ => Ok(None),
    }
}

/// Sums a convergent series through the asymptotic tail expansion.
///
/// The terms `k <= N` are added directly; the remainder uses the
/// Stirling expansion of `1/C(3k,k)` with an Euler-Maclaurin evaluation
/// of each `sum_{k>N} rho^k k^-s`. Weighted series are split into their
/// Binet components first. Works for geometric series with ratio close
/// to one and for the positive boundary with `a = 2`.
pub fn sum_accelerated(spec: &SeriesSpec, digits: u32, ctx: &PrecisionContext) -> Result<SumResult> {
    let ctx = &context_for(digits, ctx)?;
    let class = classify(spec, ctx)?;
    match class {
        ConvergenceClass::DivergentFormal => {
            return Err(Error::Unsupported("divergent series".into()));
        }
        ConvergenceClass::BoundaryAlternating => {
            return Err(Error::Unsupported(
                "alternating boundary series need sum_boundary".into(),
            ));
        }
        ConvergenceClass::BoundaryPositive if spec.a < 2 => {
            return Err(Error::Unsupported(format!(
                "a = {} diverges at the positive boundary",
                spec.a
            )));
        }
        _ => {}
    }
    let n = asymptotic::cutoff(ctx);
    let head = partial_sum(spec, n, ctx)?;
    let mut value = head;
    let mut err = ctx.real(0);
    for (coef, zc) in spec.weight.components(&spec.z.eval(ctx)?, ctx) {
        let (tail, tail_err) = asymptotic::unit_tail(&zc, spec.a, n, ctx)?;
        value += Float::with_val(ctx.bits(), &coef * &tail);
        err += Float::with_val(ctx.bits(), &coef * &tail_err).abs();
    }
    Ok(SumResult {
        value,
        terms_used: n,
        tail: err,
        method: SumMethod::Asymptotic,
    })
}

/// Sums a series on the radius of convergence.
///
/// Positive boundary series (`a = 2`) use the asymptotic tail expansion;
/// alternating ones (`a` in {1, 2}) use Chebyshev-weighted acceleration
/// checked at two orders. At most [`BOUNDARY_DIGIT_BUDGET`] digits are
/// promised.
pub fn sum_boundary(spec: &SeriesSpec, digits: u32, ctx: &PrecisionContext) -> Result<SumResult> {
    if digits > BOUNDARY_DIGIT_BUDGET {
        return Err(Error::Unsupported(format!(
            "boundary summation is limited to {BOUNDARY_DIGIT_BUDGET} digits"
        )));
    }
    let class = classify(spec, ctx)?;
    if !matches!(spec.weight, Weight::Unit) {
        return Err(Error::Unsupported("weighted boundary series".into()));
    }
    match class {
        ConvergenceClass::BoundaryPositive => {
            if spec.a != 2 {
                return Err(Error::Unsupported(format!(
                    "a = {} diverges at z = 27/4",
                    spec.a
                )));
            }
            sum_accelerated(spec, digits, ctx)
        }
        ConvergenceClass::BoundaryAlternating => {
            if spec.a == 0 {
                return Err(Error::Unsupported("a = 0 diverges at z = -27/4".into()));
            }
            alternating::sum(spec, digits, ctx)
        }
        other => Err(Error::Unsupported(format!("{} series is not on the boundary", other.name()))),
    }
}

/// Picks direct, accelerated or boundary summation for `digits`.
///
/// Geometric series go direct unless more than `direct_budget` terms
/// are predicted. Boundary series are summed to `digits`, which must be
/// within [`BOUNDARY_DIGIT_BUDGET`].
pub fn sum_series(
    spec: &SeriesSpec,
    digits: u32,
    direct_budget: u64,
    ctx: &PrecisionContext,
) -> Result<SumResult> {
    match classify(spec, ctx)? {
        ConvergenceClass::Geometric { .. } => {
            let predicted = predicted_terms(spec, digits, ctx)?.unwrap_or(0);
            if predicted > direct_budget.min(ctx.max_expected_terms()) {
                match sum_accelerated(spec, digits, ctx) {
                    Err(Error::Unsupported(_)) => sum_to_digits(spec, digits, ctx),
                    other => other,
                }
            } else {
                sum_to_digits(spec, digits, ctx)
            }
        }
        ConvergenceClass::DivergentFormal => Err(Error::Unsupported("divergent series".into())),
        _ => sum_boundary(spec, digits, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{format_real, make_context, matched_digits};
    use rug::Rational;

    fn unit(num: i64, den: i64, a: u8) -> SeriesSpec {
        SeriesSpec::new(SeriesArg::Exact(Rational::from((num, den))), a, Weight::Unit).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_3k_k(1), 3);
        assert_eq!(binom_3k_k(2), 15);
        assert_eq!(binom_3k_k(3), 84);
        assert_eq!(binom_3k_k(0), 1);
    }

    #[test]
    fn classification() {
        let ctx = make_context(30, 1).unwrap();
        match classify(&unit(8, 3, 2), &ctx).unwrap() {
            ConvergenceClass::Geometric { rho } => {
                let expect = ctx.real(&Rational::from((32, 81)));
                assert!((rho - expect).abs() < ctx.epsilon());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(classify(&unit(27, 4, 2), &ctx).unwrap(), ConvergenceClass::BoundaryPositive);
        assert_eq!(classify(&unit(-27, 4, 1), &ctx).unwrap(), ConvergenceClass::BoundaryAlternating);
        assert_eq!(classify(&unit(-5832, 361, 2), &ctx).unwrap(), ConvergenceClass::DivergentFormal);
    }

    #[test]
    fn hand_partial_sums() {
        let ctx = make_context(30, 1).unwrap();
        let s1 = partial_sum(&unit(8, 3, 2), 1, &ctx).unwrap();
        assert_eq!(format_real(&s1, 10), "0.8888888889");
        let s2 = partial_sum(&unit(8, 3, 2), 2, &ctx).unwrap();
        assert_eq!(format_real(&s2, 10), "1.007407407");
    }

    #[test]
    fn tails() {
        let ctx = make_context(30, 1).unwrap();
        assert!(tail_bound(&unit(8, 3, 2), 50, &ctx).unwrap() < 1e-20);
        assert!(tail_bound(&unit(20, 3, 2), 100, &ctx).unwrap() > 1e-2);
        assert_eq!(tail_bound(&unit(0, 1, 2), 10, &ctx).unwrap(), 0);
        assert!(matches!(
            tail_bound(&unit(27, 4, 2), 10, &ctx),
            Err(Error::NotGeometric(_))
        ));
    }

    #[test]
    fn boundary_refusals() {
        let ctx = make_context(20, 1).unwrap();
        assert!(matches!(sum_boundary(&unit(27, 4, 0), 10, &ctx), Err(Error::Unsupported(_))));
        assert!(matches!(sum_boundary(&unit(27, 4, 2), 13, &ctx), Err(Error::Unsupported(_))));
        assert!(matches!(sum_boundary(&unit(1, 1, 2), 10, &ctx), Err(Error::Unsupported(_))));
    }

    #[test]
    fn term_budget() {
        let ctx = make_context(30, 100).unwrap();
        assert!(matches!(
            sum_to_digits(&unit(20, 3, 2), 30, &ctx),
            Err(Error::MaxTermsExceeded { limit: 100 })
        ));
    }

    #[test]
    fn boundary_values() {
        let ctx = make_context(30, 1_000_000).unwrap();
        let cases = [
            (27, 4, 2, "5.61883023955650289655545561393"),
            (-27, 4, 2, "-1.74243484365746607513577315338"),
            (-27, 4, 1, "-1.39376751700881593988520717295"),
        ];
        for (num, den, a, expect) in cases {
            let r = sum_boundary(&unit(num, den, a), 12, &ctx).unwrap();
            let want = ctx.real(rug::Float::parse(expect).unwrap());
            assert!(matched_digits(&r.value, &want, 40) >= 12, "{num}/{den} a={a}");
            assert!(r.tail < 1e-12);
        }
    }

    #[test]
    fn accelerated_agrees_with_direct() {
        let ctx = make_context(40, 1_000_000).unwrap();
        let specs = [
            unit(67, 10, 0),
            unit(-67, 10, 1),
            unit(20, 3, 2),
            SeriesSpec::new(Rational::from((41, 10)), 1, Weight::Fib(1)).unwrap(),
            SeriesSpec::new(Rational::from((-41, 10)), 0, Weight::Lucas(1)).unwrap(),
        ];
        for spec in &specs {
            let fast = sum_accelerated(spec, 40, &ctx).unwrap();
            let slow = sum_to_digits(spec, 40, &ctx).unwrap();
            assert_eq!(fast.method, SumMethod::Asymptotic);
            assert!(matched_digits(&fast.value, &slow.value, 60) >= 39, "{spec}");
        }
    }
}
