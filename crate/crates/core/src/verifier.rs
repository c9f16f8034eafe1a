//! Left/right comparison of catalog identities.
//!
//! Each side is computed independently: the series by certified
//! summation, the closed form by direct evaluation. A record passes
//! when both agree to `digits - 2` digits and the difference lies inside
//! three times the reported error bound.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rug::Float;

use crate::closed_forms::{level_rhs, validate, Family, Kind, Level, TheoremParams, XYPair};
use crate::numerics::{matched_digits, PrecisionContext, Real};
use crate::registry::{instantiate, Catalog, IdentityRecord};
use crate::sequences::HoradamParams;
use crate::series::{sum_boundary, sum_series, ConvergenceClass, BOUNDARY_DIGIT_BUDGET};
use crate::{Error, Result};

/// Digits promised for boundary records.
pub const BOUNDARY_TARGET: u32 = 10;

/// Extra digits of working precision over the requested target.
pub const GUARD: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    SkippedDivergent,
    PassBoundaryReduced,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::SkippedDivergent => "SKIPPED_DIVERGENT",
            Status::PassBoundaryReduced => "PASS_BOUNDARY_REDUCED",
        }
    }

    pub fn is_pass(self) -> bool {
        matches!(self, Status::Pass | Status::PassBoundaryReduced)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Status::Pass, Status::Fail, Status::SkippedDivergent, Status::PassBoundaryReduced]
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown status {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity_id: String,
    pub params: Option<TheoremParams>,
    /// Digits actually targeted (reduced for boundary records).
    pub target_digits: u32,
    /// NaN when the side was not computed.
    pub lhs_value: Real,
    pub rhs_value: Real,
    pub matched_digits: u32,
    pub terms_used: u64,
    /// Bound on `|lhs - rhs|` if the identity holds.
    pub tail: Real,
    pub status: Status,
    pub diagnostic: String,
    pub elapsed: Duration,
}

impl VerificationReport {
    fn blank(id: &str, digits: u32, ctx: &PrecisionContext) -> Self {
        let nan = Float::with_val(ctx.bits(), rug::float::Special::Nan);
        VerificationReport {
            identity_id: id.to_owned(),
            params: None,
            target_digits: digits,
            lhs_value: nan.clone(),
            rhs_value: nan.clone(),
            matched_digits: 0,
            terms_used: 0,
            tail: nan,
            status: Status::Fail,
            diagnostic: String::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn failed(id: &str, digits: u32, err: &Error, ctx: &PrecisionContext) -> Self {
        let mut r = Self::blank(id, digits, ctx);
        r.diagnostic = err.to_string();
        r
    }

    /// `|lhs - rhs| <= tail`.
    pub fn bracket_holds(&self) -> bool {
        let diff = Float::with_val(self.lhs_value.prec(), &self.lhs_value - &self.rhs_value).abs();
        diff <= self.tail
    }
}

/// Verifies one record at `digits` (at least 5).
pub fn verify(record: &IdentityRecord, digits: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if digits < 5 {
        return Err(Error::InvalidParams(format!("digits = {digits} is below 5")));
    }
    let start = Instant::now();
    let mut report = match &record.convergence {
        ConvergenceClass::DivergentFormal => {
            let mut r = VerificationReport::blank(&record.id, digits, ctx);
            r.status = Status::SkippedDivergent;
            r.diagnostic = "series diverges at its argument".into();
            r
        }
        class => {
            let boundary = class.is_boundary();
            let target = if boundary { digits.min(BOUNDARY_TARGET) } else { digits };
            let work = ctx.with_target(digits + GUARD)?;
            compare(record, target, boundary, &work)
        }
    };
    report.params = record.params().cloned();
    report.elapsed = start.elapsed();
    Ok(report)
}

fn compare(record: &IdentityRecord, target: u32, boundary: bool, ctx: &PrecisionContext) -> VerificationReport {
    let id = &record.id;
    let rhs = match record.rhs.eval(ctx) {
        Ok(v) => v,
        Err(e) => return VerificationReport::failed(id, target, &e, ctx),
    };
    let summed = if boundary {
        sum_boundary(&record.lhs, target.min(BOUNDARY_DIGIT_BUDGET), ctx)
    } else {
        sum_series(&record.lhs, target, ctx.max_expected_terms(), ctx)
    };
    let sum = match summed {
        Ok(s) => s,
        Err(e) => {
            let mut r = VerificationReport::failed(id, target, &e, ctx);
            r.rhs_value = rhs;
            return r;
        }
    };
    // Rounding in the closed-form evaluation.
    let scale = Float::with_val(ctx.bits(), rhs.abs_ref()).max(&ctx.real(1));
    let allowance = ctx.ten_pow(-((target + GUARD - 2) as i32)) * scale;
    let tail = sum.tail + allowance;
    let matched = matched_digits(&sum.value, &rhs, target);
    let diff = ctx.real(&sum.value - &rhs).abs();
    let bracket = diff <= ctx.real(&tail * 3u32);
    let good = matched + 2 >= target && bracket;
    let status = match (good, boundary) {
        (false, _) => Status::Fail,
        (true, false) => Status::Pass,
        (true, true) => Status::PassBoundaryReduced,
    };
    let diagnostic = if good {
        format!("{} summation", sum.method.name())
    } else if !bracket {
        format!("|lhs - rhs| = {} exceeds 3 * tail", diff.to_f64())
    } else {
        format!("only {matched} digits agree")
    };
    VerificationReport {
        identity_id: id.clone(),
        params: None,
        target_digits: target,
        lhs_value: sum.value,
        rhs_value: rhs,
        matched_digits: matched,
        terms_used: sum.terms_used,
        tail,
        status,
        diagnostic,
        elapsed: Duration::ZERO,
    }
}

/// Counts and reports of a batch run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub reports: Vec<VerificationReport>,
}

impl Summary {
    pub fn from_reports(mut reports: Vec<VerificationReport>) -> Self {
        reports.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
        let count = |f: fn(Status) -> bool| reports.iter().filter(|r| f(r.status)).count();
        Summary {
            pass: count(Status::is_pass),
            fail: count(|s| s == Status::Fail),
            skipped: count(|s| s == Status::SkippedDivergent),
            reports,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.fail == 0
    }
}

fn verify_or_fail(record: &IdentityRecord, digits: u32, ctx: &PrecisionContext) -> VerificationReport {
    verify(record, digits, ctx).unwrap_or_else(|e| VerificationReport::failed(&record.id, digits, &e, ctx))
}

/// Verifies every record on the current rayon pool.
pub fn verify_all(catalog: &Catalog, digits: u32, ctx: &PrecisionContext) -> Summary {
    let reports = catalog
        .records()
        .par_iter()
        .map(|r| verify_or_fail(r, digits, ctx))
        .collect();
    Summary::from_reports(reports)
}

/// [`verify_all`] on a dedicated pool of `jobs` threads.
pub fn verify_all_with_jobs(catalog: &Catalog, digits: u32, ctx: &PrecisionContext, jobs: usize) -> Result<Summary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    Ok(pool.install(|| verify_all(catalog, digits, ctx)))
}

/// Parameter points for [`sweep`].
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    R(Vec<i64>),
    NM(Vec<(i64, i64)>),
    PQ(Vec<(i64, i64)>),
    Horadam { params: HoradamParams, r: Vec<i64> },
}

impl Grid {
    pub fn r(values: impl IntoIterator<Item = i64>) -> Self {
        Grid::R(values.into_iter().collect())
    }

    /// `m` from 1 to `n - 1` (`strict`) or to `n`, for each `n`.
    pub fn triangle(n: impl IntoIterator<Item = i64>, strict: bool) -> Self {
        let mut pts = Vec::new();
        for n in n {
            let top = if strict { n - 1 } else { n };
            pts.extend((1..=top).map(|m| (n, m)));
        }
        Grid::NM(pts)
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::R(v) | Grid::Horadam { r: v, .. } => v.len(),
            Grid::NM(v) | Grid::PQ(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The parameter sets of `family` on this grid.
    pub fn points(&self, family: Family) -> Result<Vec<TheoremParams>> {
        let mismatch = || Error::InvalidParams(format!("grid shape does not fit {family}"));
        Ok(match (self, family) {
            (Grid::NM(v), Family::Thm3(variant)) => v.iter().map(|&(n, m)| TheoremParams::nm(variant, n, m)).collect(),
            (Grid::PQ(v), Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_)) => {
                v.iter().map(|&(p, q)| TheoremParams::pq(family, p, q)).collect()
            }
            (Grid::Horadam { params, r }, Family::HoradamA2 | Family::HoradamA1) => r
                .iter()
                .map(|&r| TheoremParams::horadam(family, r, params.clone()))
                .collect(),
            (Grid::R(v), f) if !is_two_index(f) => v.iter().map(|&r| TheoremParams::r(f, r)).collect(),
            _ => return Err(mismatch()),
        })
    }
}

/// The default sweep grid of each family.
///
/// Index ranges stop where the series arguments still give fast
/// convergence; `THM3` keeps only the `(n, m)` that satisfy the side
/// conditions.
pub fn standard_grid(family: Family) -> Grid {
    match family {
        Family::Thm1(Kind::Fib) => Grid::r(1..=8),
        Family::Thm1(Kind::Luc) => Grid::r((0..=8).filter(|&r| r != 1)),
        Family::Cor2(_) => Grid::r(1..=4),
        Family::Thm4(Kind::Luc) | Family::Thm6(Kind::Luc) => Grid::r(2..=6),
        Family::Thm4(_) | Family::Cor5(_) | Family::Thm6(_) => Grid::r(1..=6),
        Family::Thm3(variant) => {
            let Grid::NM(all) = Grid::triangle(2..=8, false) else {
                unreachable!()
            };
            Grid::NM(
                all.into_iter()
                    .filter(|&(n, m)| validate(&TheoremParams::nm(variant, n, m)).is_ok())
                    .collect(),
            )
        }
        Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_) => Grid::PQ(vec![(-2, 5), (-2, 6), (-3, 5), (-3, 6)]),
        Family::HoradamA2 | Family::HoradamA1 => Grid::Horadam {
            params: HoradamParams::pell(),
            r: (1..=5).collect(),
        },
    }
}

fn is_two_index(f: Family) -> bool {
    matches!(
        f,
        Family::Thm3(_) | Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_) | Family::HoradamA2 | Family::HoradamA1
    )
}

/// Verifies each parameter set; invalid ones come back as `FAIL`.
pub fn sweep_points(points: &[TheoremParams], digits: u32, ctx: &PrecisionContext) -> Vec<VerificationReport> {
    let mut reports: Vec<_> = points
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let mut report = match instantiate(p) {
                Ok(record) => verify_or_fail(&record, digits, ctx),
                Err(e) => VerificationReport::failed(&p.id(), digits, &e, ctx),
            };
            report.params = Some(p.clone());
            report.elapsed = start.elapsed();
            report
        })
        .collect();
    reports.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
    reports
}

pub fn sweep(family: Family, grid: &Grid, digits: u32, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    Ok(sweep_points(&grid.points(family)?, digits, ctx))
}

/// A derivative step between two level identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    AToB,
    BToC,
}

impl Transition {
    fn levels(self) -> (Level, Level) {
        match self {
            Transition::AToB => (Level::A, Level::B),
            Transition::BToC => (Level::B, Level::C),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transition::AToB => "A_to_B",
            Transition::BToC => "B_to_C",
        })
    }
}

impl std::str::FromStr for Transition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "a_to_b" | "ab" => Ok(Transition::AToB),
            "b_to_c" | "bc" => Ok(Transition::BToC),
            _ => Err(Error::Parse(format!("unknown transition {s:?}"))),
        }
    }
}

/// Checks `S_{a-1} = x(x+y)/(y-x) dS_a/dx` with a central difference.
///
/// `h = 10^(-digits/3) max(1, |x|)`; passes at `digits/3` matched digits.
pub fn differential_check(
    transition: Transition,
    pair: &XYPair,
    digits: u32,
    ctx: &PrecisionContext,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let ctx = &ctx.with_target(digits + GUARD)?;
    let (upper, lower) = transition.levels();
    let x = ctx.real(&pair.x);
    let y = ctx.real(&pair.y);
    if x == y {
        return Err(Error::domain("x = y is singular", "y - x"));
    }
    let scale = Float::with_val(ctx.bits(), x.abs_ref()).max(&ctx.real(1));
    let h = ctx.ten_pow(-((digits / 3) as i32)) * &scale;
    let shifted = |sign: i32| XYPair::new(ctx.real(&x + ctx.real(&h * sign)), y.clone());
    let (plus, minus) = (shifted(1), shifted(-1));
    for p in [&plus, &minus] {
        p.check_window(upper, ctx)
            .and_then(|_| p.check_window(lower, ctx))
            .map_err(|e| Error::domain(format!("x +- h leaves the window: {e}"), "x +- h"))?;
    }
    let direct = level_rhs(lower, pair, ctx)?;
    let slope = (level_rhs(upper, &plus, ctx)? - level_rhs(upper, &minus, ctx)?) / ctx.real(&h * 2u32);
    let factor = ctx.real(&x + &y) * &x / ctx.real(&y - &x);
    let transformed = slope * factor;
    let target = digits / 3;
    let matched = matched_digits(&transformed, &direct, digits);
    let id = format!("diff-{transition}-{}-{}", x.to_f64(), y.to_f64());
    let mut report = VerificationReport::blank(&id, target, ctx);
    report.tail = ctx.real(&h * &h) * scale;
    report.lhs_value = direct;
    report.rhs_value = transformed;
    report.matched_digits = matched;
    report.status = if matched >= target { Status::Pass } else { Status::Fail };
    report.diagnostic = "central difference".into();
    report.elapsed = start.elapsed();
    Ok(report)
}
