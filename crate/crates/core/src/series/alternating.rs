//! Chebyshev-weighted acceleration for `z = -27/4`.

use rug::Float;

use super::terms::TermIter;
use super::{context_for, SeriesSpec, SumMethod, SumResult};
use crate::numerics::PrecisionContext;
use crate::{Error, Result};

/// `sum_j (-1)^j a_j` from the first `n` magnitudes.
fn accelerate(a: &[Float], n: usize, bits: u32) -> Float {
    let root = Float::with_val(bits, 8u32).sqrt() + 3u32;
    let mut d = Float::with_val(bits, rug::ops::Pow::pow(&root, n as u32));
    d = (Float::with_val(bits, d.recip_ref()) + d) / 2u32;
    let mut b = Float::with_val(bits, -1);
    let mut c = Float::with_val(bits, -&d);
    let mut s = Float::with_val(bits, 0);
    let n_i = n as i64;
    for (k, ak) in a.iter().take(n).enumerate() {
        let k_i = k as i64;
        c = Float::with_val(bits, &b - &c);
        s += Float::with_val(bits, &c * ak);
        b *= (k_i + n_i) * (k_i - n_i);
        b /= Float::with_val(bits, k as f64 + 0.5) * (k_i + 1);
    }
    s / d
}

pub(crate) fn sum(spec: &SeriesSpec, digits: u32, ctx: &PrecisionContext) -> Result<SumResult> {
    let ctx = &context_for(digits, ctx)?;
    let bits = ctx.bits();
    let n1 = (1.31 * (digits as f64 + 1.0)).ceil() as usize + 2;
    let n2 = n1 + 12;
    let mut it = TermIter::new(spec, ctx)?;
    let mags: Vec<Float> = (0..n2).map(|_| it.next_term().abs()).collect();
    let s1 = -accelerate(&mags, n1, bits);
    let s2 = -accelerate(&mags, n2, bits);
    let diff = Float::with_val(bits, &s1 - &s2).abs();
    let root = Float::with_val(bits, 8u32).sqrt() + 3u32;
    let bound = Float::with_val(bits, &mags[0] * 2u32) / Float::with_val(bits, rug::ops::Pow::pow(&root, n1 as u32));
    let tol = ctx.ten_pow(-(digits as i32));
    if diff > tol {
        return Err(Error::Unsupported(format!(
            "alternating acceleration unstable at {digits} digits"
        )));
    }
    Ok(SumResult {
        value: s2,
        terms_used: n2 as u64,
        tail: diff + bound,
        method: SumMethod::Alternating,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_two() {
        let bits = 200;
        let a: Vec<Float> = (1..=40).map(|k| Float::with_val(bits, 1) / k).collect();
        let s = accelerate(&a, 30, bits);
        let ln2 = Float::with_val(bits, 2).ln();
        assert!((s - ln2).abs() < 1e-20);
    }
}
