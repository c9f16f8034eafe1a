//! Tails `sum_{k>N} z^k / (k^a C(3k,k))` from the Stirling expansion.
//!
//! Stirling's series gives
//!
//! ```text
//!   1/C(3k,k) = (4/27)^k sqrt(4 pi k / 3) exp(-G(1/k)),
//!   G(u) = sum_j B_2j (3^(1-2j) - 1 - 2^(1-2j)) / (2j (2j-1)) u^(2j-1),
//! ```
//!
//! so with `rho = 4z/27` and `exp(-G(u)) = sum_j e_j u^j` the tail is
//! `sqrt(4 pi/3) sum_j e_j Phi_N(rho, a - 1/2 + j)`, where
//! `Phi_N(rho, s) = sum_{k>N} rho^k k^-s`. Each `Phi_N` is evaluated by
//! Euler-Maclaurin; negative `rho` is split into even and odd indices.

use std::sync::OnceLock;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::terms::unit_ratio_bound;
use crate::numerics::{PrecisionContext, Real};
use crate::{Error, Result};

const MAX_ORDER: usize = 160;
const MAX_EM_TERMS: usize = 80;
const EXTRA_BITS: u32 = 64;

struct Tables {
    /// `B_0 .. B_{2 MAX_EM_TERMS}`
    bernoulli: Vec<Rational>,
    /// `e_0 .. e_MAX_ORDER`
    stirling: Vec<Rational>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let n_bern = (2 * MAX_EM_TERMS).max(MAX_ORDER + 1);
        let bernoulli = bernoulli_numbers(n_bern);
        let mut g = vec![Rational::new(); MAX_ORDER + 1];
        let mut j = 1usize;
        while 2 * j - 1 <= MAX_ORDER {
            let e = 1 - 2 * j as i32;
            let three = Rational::from(Pow::pow(Rational::from(3), e));
            let two = Rational::from(Pow::pow(Rational::from(2), e));
            let factor = three - 1u32 - two;
            g[2 * j - 1] = Rational::from(&bernoulli[2 * j] * factor) / (2 * j * (2 * j - 1)) as u64;
            j += 1;
        }
        // E = exp(-G): n E_n = -sum_i i G_i E_{n-i}
        let mut e = vec![Rational::new(); MAX_ORDER + 1];
        e[0] = Rational::from(1);
        for n in 1..=MAX_ORDER {
            let mut acc = Rational::new();
            for i in 1..=n {
                if g[i] != 0 {
                    acc += Rational::from(&g[i] * &e[n - i]) * i as u64;
                }
            }
            e[n] = -acc / n as u64;
        }
        Tables {
            bernoulli,
            stirling: e,
        }
    })
}

/// `B_0 .. B_n` with `B_1 = -1/2`.
fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate().take(m) {
            if *bk != 0 {
                acc += Rational::from(&binom * bk);
            }
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        b.push(-acc / (m + 1) as u64);
    }
    b
}

/// Split point `N` used by the accelerated sum; always even.
pub(crate) fn cutoff(ctx: &PrecisionContext) -> u64 {
    let n = (8 * ctx.working_digits() as u64).max(256);
    n + n % 2
}

/// `sum_{k>n} zc^k / (k^a C(3k,k))` and an error estimate; `n` even.
pub(crate) fn unit_tail(zc: &Real, a: u8, n: u64, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    let bits = ctx.bits() + EXTRA_BITS;
    let rho = Float::with_val(bits, zc * 4u32) / 27u32;
    let r = Float::with_val(bits, rho.abs_ref());
    if r <= 0.5 {
        return direct_tail(zc, a, n, ctx);
    }
    if r > 1.000_001 {
        return Err(Error::Unsupported(format!(
            "Binet component with |4z/27| = {} is outside the radius",
            r.to_f64()
        )));
    }
    let r = if r > 1 { Float::with_val(bits, 1) } else { r };
    let negative = rho < 0;
    let threshold = Float::with_val(bits, Pow::pow(Float::with_val(bits, 10), -(ctx.working_digits() as i32) - 4));
    let tabs = tables();
    let mut total = Float::with_val(bits, 0);
    let mut last = Vec::new();
    let phi_ctx = PhiInputs::new(&r, a, n, bits);
    let phi_sq = if negative {
        let r2 = Float::with_val(bits, r.square_ref());
        Some(PhiInputs::new(&r2, a, n / 2, bits))
    } else {
        None
    };
    for (j, e) in tabs.stirling.iter().enumerate() {
        if *e == 0 {
            continue;
        }
        let mut phi = phi_ctx.phi(j, tabs)?;
        if let Some(sq) = &phi_sq {
            // sum_{k>N} (-r)^k k^-s = 2^(1-s) Phi_{N/2}(r^2, s) - Phi_N(r, s)
            let s = Float::with_val(bits, a as u32 + j as u32) - 0.5f64;
            let scale = Float::with_val(bits, Pow::pow(Float::with_val(bits, 2), Float::with_val(bits, 1u32 - s)));
            phi = scale * sq.phi(j, tabs)? - phi;
        }
        let contrib = Float::with_val(bits, e * &phi);
        let small = Float::with_val(bits, contrib.abs_ref()) < threshold;
        total += &contrib;
        last.push(contrib.abs());
        if small && last.len() >= 3 {
            let k = last.len();
            if last[k - 2] < threshold {
                break;
            }
        }
        if j == MAX_ORDER {
            return Err(Error::Unsupported("asymptotic tail did not converge".into()));
        }
    }
    let pi = Float::with_val(bits, Constant::Pi);
    let pref = Float::with_val(bits, pi * 4u32 / 3u32).sqrt();
    let k = last.len();
    let err_tail = Float::with_val(bits, &last[k - 1] + &last[k - 2]) * 10u32 + &threshold;
    Ok((
        Float::with_val(ctx.bits(), &total * &pref),
        Float::with_val(ctx.bits(), err_tail * pref),
    ))
}

/// Exact-recurrence summation for components well inside the radius.
fn direct_tail(zc: &Real, a: u8, n: u64, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    let bits = ctx.bits() + EXTRA_BITS;
    let mut base = Float::with_val(bits, 1);
    let step = |base: &mut Float, k: u64| {
        *base *= zc;
        *base *= (2 * k) * (2 * k - 1);
        *base /= 3 * (3 * k - 1) * (3 * k - 2);
    };
    for k in 1..=n {
        step(&mut base, k);
    }
    let goal = Float::with_val(bits, Pow::pow(Float::with_val(bits, 10), -(ctx.working_digits() as i32) - 4));
    let mut sum = Float::with_val(bits, 0);
    let mut k = n;
    loop {
        k += 1;
        step(&mut base, k);
        let t = Float::with_val(bits, &base / Pow::pow(Float::with_val(bits, k), a as u32));
        let bound = Float::with_val(bits, t.abs_ref()) / (1u32 - unit_ratio_bound(zc, k, ctx));
        if bound < goal {
            return Ok((Float::with_val(ctx.bits(), sum), Float::with_val(ctx.bits(), bound)));
        }
        sum += t;
    }
}

/// Precomputed inputs for `Phi_N(r, s_j)` at one `r`.
struct PhiInputs {
    bits: u32,
    a: u8,
    m: Float,
    /// `-ln r`, zero at `r = 1`.
    lambda: Float,
    exp_lm: Float,
    /// `Gamma(3/2 - t, lambda M)` for t = 0, 1, ...
    gammas: Vec<Float>,
}

impl PhiInputs {
    fn new(r: &Float, a: u8, n: u64, bits: u32) -> Self {
        let m = Float::with_val(bits, n + 1);
        let lambda = if *r >= 1 {
            Float::with_val(bits, 0)
        } else {
            -Float::with_val(bits, r.ln_ref())
        };
        let x = Float::with_val(bits, &lambda * &m);
        let exp_lm = Float::with_val(bits, (-x.clone()).exp_ref());
        let gammas = if lambda.is_zero() {
            Vec::new()
        } else {
            half_integer_gammas(&x, a as usize + MAX_ORDER + 1, bits)
        };
        PhiInputs {
            bits,
            a,
            m,
            lambda,
            exp_lm,
            gammas,
        }
    }

    /// `sum_{k>N} r^k k^-s` with `s = a - 1/2 + j`.
    fn phi(&self, j: usize, tabs: &Tables) -> Result<Float> {
        let bits = self.bits;
        let s = Float::with_val(bits, self.a as u32 + j as u32) - 0.5f64;
        let integral = if self.lambda.is_zero() {
            if s <= 1 {
                return Err(Error::Unsupported("divergent tail at the boundary".into()));
            }
            let one_minus_s = Float::with_val(bits, 1u32 - &s);
            Float::with_val(bits, Pow::pow(&self.m, &one_minus_s)) / Float::with_val(bits, &s - 1u32)
        } else {
            let t = self.a as usize + j;
            let s_minus_1 = Float::with_val(bits, &s - 1u32);
            Float::with_val(bits, Pow::pow(&self.lambda, &s_minus_1)) * &self.gammas[t]
        };
        let mut res = integral + self.derivative(&s, 0) / 2u32;
        let scale = Float::with_val(bits, res.abs_ref());
        let goal = Float::with_val(bits, Float::i_exp(1, -(bits as i32))) * &scale;
        let mut prev_mag: Option<Float> = None;
        let mut factorial = Integer::from(1);
        for p in 1..MAX_EM_TERMS {
            factorial *= (2 * p - 1) as u64;
            factorial *= (2 * p) as u64;
            let coef = Float::with_val(bits, &tabs.bernoulli[2 * p]) / &factorial;
            let term = coef * self.derivative(&s, 2 * p - 1);
            let mag = Float::with_val(bits, term.abs_ref());
            if let Some(prev) = &prev_mag {
                if mag > *prev {
                    break;
                }
            }
            res -= term;
            if mag < goal {
                break;
            }
            prev_mag = Some(mag);
        }
        Ok(res)
    }

    /// `d^n/dx^n [exp(-lambda x) x^-s]` at `x = M`.
    fn derivative(&self, s: &Float, n: usize) -> Float {
        let bits = self.bits;
        let neg_s = Float::with_val(bits, -s);
        let base_pow = Float::with_val(bits, Pow::pow(&self.m, &neg_s));
        if self.lambda.is_zero() {
            let mut fall = Float::with_val(bits, 1);
            for l in 0..n {
                fall *= Float::with_val(bits, &neg_s - l as u32);
            }
            return fall * base_pow / Pow::pow(Float::with_val(bits, &self.m), n as u32);
        }
        let neg_lambda = Float::with_val(bits, -&self.lambda);
        let mut total = Float::with_val(bits, 0);
        let mut fall = Float::with_val(bits, 1);
        let mut binom = Integer::from(1);
        let mut m_pow = base_pow;
        for i in 0..=n {
            let lam_pow = Float::with_val(bits, Pow::pow(&neg_lambda, (n - i) as u32));
            total += Float::with_val(bits, &fall * &m_pow) * lam_pow * &binom;
            fall *= Float::with_val(bits, &neg_s - i as u32);
            m_pow /= &self.m;
            binom *= (n - i) as u64;
            binom /= (i + 1) as u64;
        }
        total * &self.exp_lm
    }
}

/// `Gamma(3/2 - t, x)` for `t = 0 .. count-1`, `x > 0`.
fn half_integer_gammas(x: &Float, count: usize, bits: u32) -> Vec<Float> {
    // Downward recurrence loses about log10(x) digits per step for large x.
    let loss = (x.to_f64().max(1.0).log2() * count as f64).ceil() as u32;
    let wbits = bits + loss + 32;
    let x = Float::with_val(wbits, x);
    let pi = Float::with_val(wbits, Constant::Pi);
    let ex = Float::with_val(wbits, (-x.clone()).exp_ref());
    let sx = Float::with_val(wbits, x.sqrt_ref());
    let g_half = Float::with_val(wbits, sx.erfc_ref()) * pi.sqrt();
    let g_three_halves = Float::with_val(wbits, &g_half / 2u32) + Float::with_val(wbits, &sx * &ex);
    let mut out = vec![g_three_halves, g_half.clone()];
    let mut prev = g_half;
    let mut b = Float::with_val(wbits, 0.5f64);
    while out.len() < count {
        // Gamma(b-1, x) = (Gamma(b, x) - x^(b-1) e^-x) / (b-1)
        b -= 1u32;
        let xb = Float::with_val(wbits, Pow::pow(&x, &b)) * &ex;
        let next = (prev - xb) / &b;
        out.push(next.clone());
        prev = next;
    }
    out.into_iter().map(|g| Float::with_val(bits, g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[12], Rational::from((-691, 2730)));
        assert_eq!(b[11], 0);
    }

    #[test]
    fn stirling_coefficients() {
        let e = &tables().stirling;
        // G_1 = (1/6)(1/3 - 1 - 1/2)/2 = -7/72, so e_1 = 7/72.
        assert_eq!(e[1], Rational::from((7, 72)));
        assert_eq!(e[2], Rational::from((49, 10368)));
    }

    #[test]
    fn incomplete_gamma_recurrence() {
        let ctx = make_context(30, 1).unwrap();
        let bits = ctx.bits();
        let x = Float::with_val(bits, 0.75f64);
        let g = half_integer_gammas(&x, 6, bits);
        for (t, value) in g.iter().enumerate() {
            let a = Float::with_val(bits, 1.5f64 - t as f64);
            let direct = a.gamma_inc(&x);
            let rel = Float::with_val(bits, value - &direct).abs() / direct.abs();
            assert!(rel < 1e-35, "t={t}");
        }
    }
}
