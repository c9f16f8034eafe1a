use rug::{Float, Integer};

use super::spec::{SeriesSpec, Weight};
use crate::numerics::{golden_ratio, PrecisionContext, Real};
use crate::Result;

/// Streams `z^k w(k) / (k^a C(3k,k))` for k = 1, 2, ...
///
/// `z^k / C(3k,k)` is carried by its exact ratio recurrence and the
/// weights by their exact integer recurrence.
pub(crate) struct TermIter<'a> {
    ctx: PrecisionContext,
    spec: &'a SeriesSpec,
    z: Real,
    k: u64,
    base: Real,
    w_prev: Integer,
    w_cur: Integer,
    c1: Integer,
    c2: Integer,
    peeked: Option<Real>,
}

impl<'a> TermIter<'a> {
    pub(crate) fn new(spec: &'a SeriesSpec, ctx: &PrecisionContext) -> Result<Self> {
        let (c1, c2) = spec.weight.recurrence();
        Ok(TermIter {
            ctx: *ctx,
            spec,
            z: spec.z.eval(ctx)?,
            k: 0,
            base: ctx.real(1),
            w_prev: spec.weight.value(0),
            w_cur: spec.weight.value(1),
            c1,
            c2,
            peeked: None,
        })
    }

    fn compute_next(&mut self) -> Real {
        let k = self.k + 1;
        self.base *= &self.z;
        self.base *= (2 * k) * (2 * k - 1);
        self.base /= 3 * (3 * k - 1) * (3 * k - 2);
        let mut t = self.base.clone();
        if !matches!(self.spec.weight, Weight::Unit) {
            t *= &self.w_cur;
            let next = Integer::from(&self.c1 * &self.w_cur) + Integer::from(&self.c2 * &self.w_prev);
            self.w_prev = std::mem::replace(&mut self.w_cur, next);
        }
        match self.spec.a {
            0 => {}
            1 => t /= k,
            _ => t /= k * k,
        }
        self.k = k;
        t
    }

    pub(crate) fn next_term(&mut self) -> Real {
        match self.peeked.take() {
            Some(t) => t,
            None => self.compute_next(),
        }
    }

    pub(crate) fn peek_term(&mut self) -> Real {
        if self.peeked.is_none() {
            let t = self.compute_next();
            self.peeked = Some(t);
        }
        self.peeked.clone().expect("just filled")
    }

    /// `|t_{K+1}| / (1 - rho_hat)` where `rho_hat` bounds every ratio
    /// `|t_{k+1} / t_k|` with `k > K`; infinite when no bound below 1 exists.
    pub(crate) fn tail_from(&self, next_abs: &Real, k_done: u64) -> Result<Real> {
        let ctx = &self.ctx;
        if next_abs.is_zero() && self.spec.is_trivially_zero() {
            return Ok(ctx.real(0));
        }
        let j = k_done + 1;
        let rho_hat = unit_ratio_bound(&self.z, j, ctx) * weight_ratio_bound(&self.spec.weight, j, ctx);
        if rho_hat >= 1 {
            return Ok(ctx.real(rug::float::Special::Infinity));
        }
        Ok(Float::with_val(ctx.bits(), next_abs / (1u32 - rho_hat)))
    }
}

/// Bound on `|z| (k/(k+1))^a C(3k,k)/C(3k+3,k+1)` for all `k >= j`.
///
/// `(27/4) C(3k,k)/C(3k+3,k+1) = 1 + (9k+5)/(18k^2+18k+4)` decreases to 1
/// and `(k/(k+1))^a <= 1`.
pub(crate) fn unit_ratio_bound(z: &Real, j: u64, ctx: &PrecisionContext) -> Real {
    let excess = Float::with_val(ctx.bits(), 9 * j + 5) / (18 * j * j + 18 * j + 4);
    Float::with_val(ctx.bits(), z.abs_ref()) * 4u32 / 27u32 * (excess + 1u32)
}

/// Bound on `|w(k+1)/w(k)|` for all `k >= j`.
fn weight_ratio_bound(weight: &Weight, j: u64, ctx: &PrecisionContext) -> Real {
    let inf = || ctx.real(rug::float::Special::Infinity);
    match weight {
        Weight::Unit | Weight::Fib(0) | Weight::Lucas(0) | Weight::Horadam { m: 0, .. } => ctx.real(1),
        Weight::Fib(m) | Weight::Lucas(m) => {
            // sqrt5 |F(n)| and |L(n)| lie in [alpha^n - alpha^-n, alpha^n + alpha^-n].
            let mm = m.unsigned_abs();
            let n = mm.saturating_mul(j);
            let al = golden_ratio(ctx);
            let x = Float::with_val(ctx.bits(), rug::ops::Pow::pow(&al, -2 * n.min(i32::MAX as u64 / 2) as i32));
            let growth = Float::with_val(ctx.bits(), rug::ops::Pow::pow(&al, mm as i32));
            growth * (Float::with_val(ctx.bits(), &x + 1u32) / (1u32 - x))
        }
        Weight::Horadam { .. } => {
            let roots = weight.roots(ctx);
            let abs = |x: &Real| Float::with_val(ctx.bits(), x.abs_ref());
            let tiny = ctx.ten_pow(-(ctx.working_digits() as i32) / 2);
            let live: Vec<&(Real, Real)> = roots.iter().filter(|(c, _)| abs(c) > tiny).collect();
            match live.as_slice() {
                [] => ctx.real(1),
                [(_, r)] => abs(r),
                [(c1, r1), (c2, r2)] => {
                    let ((cd, rd), (ce, re)) = if abs(r1) >= abs(r2) { ((c1, r1), (c2, r2)) } else { ((c2, r2), (c1, r1)) };
                    let q = abs(re) / abs(rd);
                    if q >= 1 {
                        return inf();
                    }
                    // Roots in `roots()` already carry the power m; the index is m*j.
                    let root_ratio = Float::with_val(ctx.bits(), rug::ops::Pow::pow(&q, j.min(i32::MAX as u64) as i32));
                    let kappa = abs(ce) / abs(cd) * root_ratio;
                    if kappa >= 1 {
                        return inf();
                    }
                    abs(rd) * (Float::with_val(ctx.bits(), &kappa + 1u32) / (1u32 - kappa))
                }
                _ => inf(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;
    use crate::sequences::HoradamParams;
    use crate::series::binom_3k_k;
    use rug::Rational;

    #[test]
    fn terms_match_exact_rationals() {
        let ctx = make_context(40, 1).unwrap();
        let z = Rational::from((-20, 7));
        for (a, weight) in [(2u8, Weight::Unit), (1, Weight::Fib(3)), (0, Weight::Lucas(-2))] {
            let spec = SeriesSpec::new(z.clone(), a, weight.clone()).unwrap();
            let mut it = TermIter::new(&spec, &ctx).unwrap();
            for k in 1..=30u64 {
                let exact = Rational::from(z.pow_ref_u32(k as u32)) * weight.value(k)
                    / (binom_3k_k(k) * Integer::from(rug::ops::Pow::pow(Integer::from(k), a as u32)));
                let t = it.next_term();
                let err = (t - ctx.real(&exact)).abs();
                assert!(err <= ctx.real(&exact).abs() * 1e-38, "k={k} a={a}");
            }
        }
    }

    #[test]
    fn ratio_bounds_dominate_observed_ratios() {
        let ctx = make_context(30, 1).unwrap();
        let specs = [
            SeriesSpec::unit(20, 3, 2).unwrap(),
            SeriesSpec::unit(-1, 1, 0).unwrap(),
            SeriesSpec::new(Rational::from((54, 25)), 2, Weight::Fib(1)).unwrap(),
            SeriesSpec::new(Rational::from((1, 2)), 1, Weight::Horadam { m: 2, params: HoradamParams::pell() }).unwrap(),
        ];
        for spec in &specs {
            let mut it = TermIter::new(spec, &ctx).unwrap();
            let z = spec.z.eval(&ctx).unwrap();
            let mut prev = it.next_term().abs();
            for k in 1..200u64 {
                let cur = it.next_term().abs();
                let bound = unit_ratio_bound(&z, k, &ctx) * weight_ratio_bound(&spec.weight, k, &ctx) * (1.0 + 1e-15);
                assert!(cur <= Float::with_val(ctx.bits(), &prev * &bound), "{spec} k={k}");
                prev = cur;
            }
        }
    }

    trait PowU32 {
        fn pow_ref_u32(&self, e: u32) -> Rational;
    }

    impl PowU32 for Rational {
        fn pow_ref_u32(&self, e: u32) -> Rational {
            Rational::from(rug::ops::Pow::pow(self, e))
        }
    }
}
