// One line per acceptance criterion; exits non-zero if any is red.

use std::time::{Duration, Instant};

use rug::Rational;
use tribinom::closed_forms::{
    a_rhs, level_expr, theorem_rhs, Family, Kind, Level, TheoremParams, XYPair,
};
use tribinom::numerics::{make_context, matched_digits, parse_expr, ClosedFormExpr as E, PrecisionContext, Real};
use tribinom::registry::{builtin_catalog, instantiate, scan_perfect_square, Catalog, IdentityRecord};
use tribinom::sequences::{check_fl_identity, FlIdentity, HoradamParams};
use tribinom::verifier::{
    differential_check, standard_grid, sweep, sweep_points, verify, verify_all, Status, Transition,
    VerificationReport,
};

type Outcome = Result<String, String>;

fn ctx(digits: u32) -> PrecisionContext {
    make_context(digits, 1_000_000).unwrap()
}

fn golden(text: &str, ctx: &PrecisionContext) -> Real {
    parse_expr(text).unwrap().eval(ctx).unwrap()
}

fn record<'a>(c: &'a Catalog, id: &str) -> Result<&'a IdentityRecord, String> {
    c.get(id).ok_or_else(|| format!("{id} missing from catalog"))
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_verify(c: &Catalog, id: &str, digits: u32) -> Result<(VerificationReport, Duration), String> {
    let t = Instant::now();
    let r = verify(record(c, id)?, digits, &ctx(30)).map_err(|e| e.to_string())?;
    Ok((r, t.elapsed()))
}

fn c1(c: &Catalog) -> Outcome {
    let (r, dt) = run_verify(c, "eq-italy", 50)?;
    let want = golden("1.0414595864419354475505256047213422324097182278922", &ctx(60));
    let vs_golden = matched_digits(&r.rhs_value, &want, 50);
    expect(r.status == Status::Pass && r.matched_digits >= 48 && vs_golden >= 48, || format!("{r:?}"))?;
    expect(dt < Duration::from_secs(2), || format!("took {dt:?}"))?;
    Ok(format!("eq-italy at 50 digits: {} matched digits, rhs matches golden value to {vs_golden}, {dt:.1?}", r.matched_digits))
}

fn c2(c: &Catalog) -> Outcome {
    let goldens = [("xy-8-1-a1", "1.240795944009869674396283"), ("xy-8-1-a0", "1.769354045667552152731111")];
    let mut parts = Vec::new();
    for (id, g) in goldens {
        let (r, _) = run_verify(c, id, 40)?;
        let vs = matched_digits(&r.rhs_value, &golden(g, &ctx(40)), 40);
        expect(r.status == Status::Pass && vs >= 24, || format!("{id}: {r:?}"))?;
        parts.push(format!("{id} {} digits", r.matched_digits));
    }
    Ok(parts.join(", "))
}

fn c3(c: &Catalog) -> Outcome {
    let mut slowest = String::new();
    for rec in c.with_tag("positive-special").filter(|r| r.id != "eq-27-4") {
        let (r, dt) = run_verify(c, &rec.id, 40)?;
        expect(r.status == Status::Pass, || format!("{}: {r:?}", rec.id))?;
        if rec.id == "eq-20-3" {
            expect(dt < Duration::from_secs(30) && r.terms_used <= 12_000, || format!("eq-20-3: {dt:?}, {} terms", r.terms_used))?;
            slowest = format!("eq-20-3 used {} terms in {dt:.1?}", r.terms_used);
        }
    }
    Ok(format!("8 records PASS at 40 digits; {slowest}"))
}

fn c4(c: &Catalog) -> Outcome {
    let g = [("eq-27-4", "5.618830239556502896555455613930770813415"), ("alt-27-4", "-1.742434843657466075135773153382764979610")];
    let mut parts = Vec::new();
    for (id, value) in g {
        let (r, dt) = run_verify(c, id, 40)?;
        let vs = matched_digits(&r.lhs_value, &golden(value, &ctx(40)), 40);
        expect(
            r.status == Status::PassBoundaryReduced && r.matched_digits >= 10 && vs >= 10 && dt < Duration::from_secs(60),
            || format!("{id}: {r:?} in {dt:?}"),
        )?;
        parts.push(format!("{id} {} digits ({dt:.1?})", r.matched_digits));
    }
    Ok(format!("PASS_BOUNDARY_REDUCED: {}", parts.join(", ")))
}

fn c5(c: &Catalog) -> Outcome {
    let alt = Catalog::new(c.with_tag("alternating-special").cloned().collect()).map_err(|e| e.to_string())?;
    let xy = Catalog::new(c.with_tag("xy-block").cloned().collect()).map_err(|e| e.to_string())?;
    let a = verify_all(&alt, 30, &ctx(30));
    let x = verify_all(&xy, 30, &ctx(30));
    expect(a.pass == 9 && a.fail == 0, || format!("alternating: {} pass, {} fail", a.pass, a.fail))?;
    expect(x.fail == 0 && x.pass + x.skipped == 23, || format!("xy: {} pass, {} fail", x.pass, x.fail))?;
    let skipped: Vec<_> = x.reports.iter().filter(|r| r.status == Status::SkippedDivergent).map(|r| r.identity_id.as_str()).collect();
    expect(skipped.iter().all(|id| id.starts_with("xy-27-neg8-")), || format!("unexpected skips {skipped:?}"))?;
    let converge: Vec<_> = xy.iter().filter(|r| !r.id.starts_with("xy-27-neg8-")).collect();
    expect(converge.len() == x.pass, || "a convergent record was skipped".into())?;
    Ok(format!(
        "9 alternating PASS; {} of 23 (x,y) records PASS, {} SKIPPED_DIVERGENT (the (27,-8) pair gives three series, all divergent)",
        x.pass, x.skipped
    ))
}

fn c6(c: &Catalog) -> Outcome {
    let trig = Catalog::new(c.with_tag("trig").cloned().collect()).map_err(|e| e.to_string())?;
    let s = verify_all(&trig, 30, &ctx(30));
    expect(s.pass == 7 && trig.len() == 7, || format!("{} of {} pass", s.pass, trig.len()))?;
    Ok("D at pi/12, pi/8, pi/6; E at pi/12; F at pi/12, pi/8, pi/6: 7 PASS".into())
}

fn c7() -> Outcome {
    let t = Instant::now();
    let families = [
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
    ];
    let mut total = 0;
    let mut reduced = Vec::new();
    for f in families {
        let reps = sweep(f, &standard_grid(f), 30, &ctx(30)).map_err(|e| e.to_string())?;
        for r in &reps {
            expect(r.status.is_pass(), || format!("{}: {} {}", r.identity_id, r.status, r.diagnostic))?;
            if r.status == Status::PassBoundaryReduced {
                reduced.push(r.identity_id.clone());
            }
        }
        total += reps.len();
    }
    let dt = t.elapsed();
    expect(dt < Duration::from_secs(120), || format!("took {dt:?}"))?;
    Ok(format!(
        "{total} points PASS at 30 digits in {dt:.1?} ({} on the boundary: {})",
        reduced.len(),
        reduced.join(", ")
    ))
}

fn c8(c: &Catalog) -> Outcome {
    let work = ctx(30);
    let mut worst = u32::MAX;
    for (kind, seq) in [(Kind::Fib, HoradamParams::fibonacci()), (Kind::Luc, HoradamParams::lucas())] {
        for r in 1..=5 {
            if kind == Kind::Luc && r == 1 {
                continue;
            }
            let h = theorem_rhs(&TheoremParams::horadam(Family::HoradamA2, r, seq.clone()), &work).map_err(|e| e.to_string())?;
            let t = theorem_rhs(&TheoremParams::r(Family::Thm1(kind), r), &work).map_err(|e| e.to_string())?;
            worst = worst.min(matched_digits(&h, &t, 30));
        }
    }
    // Lucas r = 1: the series diverges, so compare the closed forms formally.
    let lucas = HoradamParams::lucas();
    let x = E::int(5).sqrt() * E::alpha().pow(2);
    let y = -E::int(5).sqrt();
    let alpha2 = tribinom::numerics::golden_ratio(&work).square();
    let want_x = lucas.big_a(&work) * alpha2;
    // y = -B (-q)^r with q = r = 1.
    let want_y = lucas.big_b(&work);
    let pair = XYPair::from_exprs(&x, &y, &work).map_err(|e| e.to_string())?;
    expect(matched_digits(&pair.x, &want_x, 30) >= 28 && matched_digits(&pair.y, &want_y, 30) >= 28, || "pair".into())?;
    let formal = level_expr(Level::A, x, y).eval(&work).map_err(|e| e.to_string())?;
    let literal = record(c, "thm1-luc-r1")?.rhs.eval(&work).map_err(|e| e.to_string())?;
    worst = worst.min(matched_digits(&formal, &literal, 30));
    expect(worst >= 25, || format!("only {worst} digits"))?;
    let pell: Vec<_> = [Family::HoradamA2, Family::HoradamA1]
        .into_iter()
        .flat_map(|f| (1..=5).map(move |r| TheoremParams::horadam(f, r, HoradamParams::pell())))
        .collect();
    for p in &pell {
        instantiate(p).map_err(|e| e.to_string())?;
    }
    let reps = sweep_points(&pell, 20, &ctx(20));
    expect(reps.iter().all(|r| r.status == Status::Pass), || format!("{reps:?}"))?;
    Ok(format!(
        "(1,1,0,1) and (1,1,2,1) agree with the Fibonacci/Lucas family to >= {worst} digits for r in 1..5 (Lucas r = 1 formally); Pell: {} PASS at 20 digits",
        reps.len()
    ))
}

fn c9(c: &Catalog) -> Outcome {
    let work = ctx(30);
    let mut cases = 0;
    for id in FlIdentity::ALL {
        for n in -30..=30 {
            for m in -30..=30 {
                expect(check_fl_identity(id, n, m, &work), || format!("{} at ({n}, {m})", id.name()))?;
                cases += 1;
            }
        }
    }
    let mut homog = u32::MAX;
    for (x, y) in [(8, 1), (9, 1), (27, 8), (8, -1), (1, 0)].into_iter().filter(|p| p.1 != 0) {
        let base = XYPair::new(work.real(x), work.real(y));
        let v = a_rhs(&base, &work).map_err(|e| e.to_string())?;
        for t in [Rational::from(2), Rational::from(10), Rational::from((1, 3))] {
            let tp = XYPair::new(work.real(&t * work.real(x)), work.real(&t * work.real(y)));
            homog = homog.min(matched_digits(&a_rhs(&tp, &work).map_err(|e| e.to_string())?, &v, 30));
        }
    }
    expect(homog >= 28, || format!("homogeneity: {homog} digits"))?;
    let d40 = ctx(40);
    let mut diff = u32::MAX;
    for (x, y) in [(9, 1), (27, 8)] {
        for t in [Transition::AToB, Transition::BToC] {
            let r = differential_check(t, &XYPair::new(d40.real(x), d40.real(y)), 40, &d40).map_err(|e| e.to_string())?;
            expect(r.status == Status::Pass, || format!("{r:?}"))?;
            diff = diff.min(r.matched_digits);
        }
    }
    expect(diff >= 13, || format!("derivatives: {diff}"))?;
    let scan: Vec<String> = scan_perfect_square(8).iter().map(|z| z.to_string()).collect();
    expect(
        scan == ["27/4", "20/3", "77/12", "6", "65/12", "14/3", "15/4", "8/3", "17/12"],
        || format!("{scan:?}"),
    )?;
    let all = verify_all(c, 30, &work);
    let passes: Vec<_> = all.reports.iter().filter(|r| r.status.is_pass()).collect();
    let unsound: Vec<_> = passes.iter().filter(|r| !r.bracket_holds()).map(|r| r.identity_id.clone()).collect();
    expect(unsound.is_empty(), || format!("bracket fails for {unsound:?}"))?;
    Ok(format!(
        "{cases} exact identity cases; homogeneity >= {homog} digits; derivatives >= {diff} digits; scan exact; brackets sound on {} passes",
        passes.len()
    ))
}

fn main() {
    let catalog = builtin_catalog();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("closed form at z = 8/3", Box::new(|| c1(&catalog))),
        ("(x, y) = (8, 1) pair", Box::new(|| c2(&catalog))),
        ("positive perfect-square arguments", Box::new(|| c3(&catalog))),
        ("boundary z = +-27/4", Box::new(|| c4(&catalog))),
        ("alternating list and (x, y) block", Box::new(|| c5(&catalog))),
        ("trigonometric evaluations", Box::new(|| c6(&catalog))),
        ("theorem sweeps", Box::new(c7)),
        ("Horadam generalization", Box::new(|| c8(&catalog))),
        ("property suites", Box::new(|| c9(&catalog))),
    ];
    let mut red = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                red += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - red, criteria.len());
    if red > 0 {
        std::process::exit(1);
    }
}
