//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use blocksearch::accuracy::{
    basic_closed_big_delta, basic_closed_delta, closed_form_range, delta_star, general_accuracy, limit_bracket,
    limit_constant, step_accuracy, thresholds, trace_basic, verify_inequalities, PositionChoice, INEQUALITY_NAMES,
};
use blocksearch::asymptotics::{
    basic_track, check_cocycles, check_implications, check_step_bounds, phi_construction, ratio_trackers,
    reference_trace, PhiSource,
};
use blocksearch::oracle::{branch_steps, witness_function, worst_case, DEFAULT_BRANCH_CAP};
use blocksearch::policies::xy_backward;
use blocksearch::runtime::run_search_in;
use blocksearch::sequences::{check_identity, check_monotone_ratios, f_seq, g_seq, Identity, Seqs};
use blocksearch::{omega, run_search, Error, PolicySpec, QuadNum, Rational, Stop};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn q(n: i64, m: i64) -> QuadNum {
    QuadNum::from_ratio(n, m)
}

fn sequence_identities() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    for i in 1..=10u64 {
        for id in Identity::ALL {
            let reports = match id {
                Identity::FCassini | Identity::FFromG => vec![check_identity(id, i, 1..=25, 0..=0)],
                Identity::FAdjacentProducts => vec![check_identity(id, i, 2..=25, 0..=0)],
                Identity::GProducts => (0..=25)
                    .map(|n| check_identity(id, i, n..=n, 0..=(n + 1).min(25)))
                    .collect(),
                Identity::GSkipProducts | Identity::FGSkipProducts => (0..=25)
                    .map(|n| check_identity(id, i, n..=n, 1..=(n + 1).min(25)))
                    .collect(),
                Identity::GRatioOrder => (0..=25).map(|n| check_identity(id, i, n..=n, 0..=n)).collect(),
            };
            for r in reports {
                let r = r.map_err(e2s)?;
                cases += r.cases.len();
                if let Some(c) = r.cases.iter().find(|c| !c.holds) {
                    return Err(format!("{id:?} fails at i={i} n={} m={:?}", c.n, c.m));
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), format!("took {t:?}"))?;
    Ok(format!("{cases} exact cases in {t:.2?}"))
}

fn monotone_ratios() -> Check {
    let mut checks = 0;
    for i in 2..=10 {
        let r = check_monotone_ratios(i, 12).map_err(e2s)?;
        checks += r.checks.len();
        ensure(r.all_hold, format!("a ratio claim fails at i={i}"))?;
    }
    Ok(format!("{checks} claims for i = 2..10, n <= 12"))
}

fn fibonacci_oracle() -> Check {
    let f = f_seq(1, 8).map_err(e2s)?;
    for n in 1..=6usize {
        let p = PolicySpec::Fibonacci { horizon: n };
        let wc = worst_case(&p, n, DEFAULT_BRANCH_CAP).map_err(e2s)?.value;
        let expect = QuadNum::from_big_ratio(BigInt::from(1), f.at(n as i64 + 1).clone());
        ensure(wc == expect, format!("n={n}: oracle {wc}, expected {expect}"))?;
        ensure(
            step_accuracy(&p, n).map_err(e2s)? == expect,
            format!("n={n}: closed form differs"),
        )?;
    }
    Ok("oracle = 1/F(n+1) for n = 1..6 (n = 3 gives 1/5)".into())
}

fn g3_instance() -> Check {
    let plan = xy_backward(&[3, 3, 3]).map_err(e2s)?;
    let x0 = plan.x[0].clone();
    ensure(x0 == BigInt::from(28), format!("X0 = {x0}"))?;
    let p = PolicySpec::OddBlockG { i: 2, horizon: 3 };
    let wc = worst_case(&p, 3, DEFAULT_BRANCH_CAP).map_err(e2s)?.value;
    let expect = QuadNum::from_big_ratio(BigInt::from(1), x0);
    ensure(wc == expect, format!("oracle {wc}"))?;
    ensure(step_accuracy(&p, 3).map_err(e2s)? == expect, "closed form differs")?;
    Ok("oracle = 1/X0 = 1/28".into())
}

fn w_accuracy() -> Check {
    let w = omega(2).map_err(e2s)?;
    let ga = general_accuracy(&PolicySpec::OddBlockW { i: 2 }, 12).map_err(e2s)?;
    ensure(ga.sup == q(4, 1) * &w, format!("sup {}", ga.sup))?;
    ensure(ga.attained_at == 1, format!("attained at {}", ga.attained_at))?;
    ensure((ga.sup.to_f64() - 1.4641016).abs() < 1e-7, "float value")?;
    for i in 2..=10 {
        let ga = general_accuracy(&PolicySpec::OddBlockW { i }, 12).map_err(e2s)?;
        let expect = q(2 * i as i64, 1) * omega(i).map_err(e2s)?;
        ensure(ga.sup == expect, format!("i={i}: sup {} != 2i omega", ga.sup))?;
    }
    let b = limit_bracket(2, 12).map_err(e2s)?;
    ensure(b.holds(), "bracket fails at i=2")?;
    Ok(format!(
        "sup = 4 omega(2) = {:.7} at n = 1; bracket holds for n <= 12",
        ga.sup.to_f64()
    ))
}

fn h_accuracy() -> Check {
    let ga = general_accuracy(&PolicySpec::OddBlockH { i: 2 }, 12).map_err(e2s)?;
    let w = omega(2).map_err(e2s)?;
    ensure(ga.sup == q(28, 1) * w.pow(3).map_err(e2s)?, format!("sup {}", ga.sup))?;
    ensure(ga.attained_at == 3, format!("attained at {}", ga.attained_at))?;
    // 28 omega(2)^3 = 1.37306696, so the 7-digit figure needs a 1e-6 window
    ensure((ga.sup.to_f64() - 1.3730667).abs() < 1e-6, "float value")?;
    let rep = verify_inequalities(2..=50).map_err(e2s)?;
    let first_step = INEQUALITY_NAMES[0];
    let relevant: Vec<_> = rep.checks.iter().filter(|c| c.name == first_step).collect();
    ensure(relevant.len() == 49, format!("{} first-step checks", relevant.len()))?;
    if let Some(c) = relevant.iter().find(|c| !c.holds) {
        return Err(format!("first step exceeds the tail sup at i={}", c.i));
    }
    for i in 2..=50 {
        let s = Seqs::new(i, 6).map_err(e2s)?;
        let expect = s.fq(4) * omega(i).map_err(e2s)?.pow(3).map_err(e2s)?;
        let ga = general_accuracy(&PolicySpec::OddBlockH { i }, 6).map_err(e2s)?;
        ensure(ga.sup == expect, format!("i={i}: sup {} != F(4) omega^3", ga.sup))?;
    }
    Ok(format!(
        "sup = 28 omega(2)^3 = {:.7} at n = 3; first step below tail for i = 2..50",
        ga.sup.to_f64()
    ))
}

fn w_above_h() -> Check {
    for i in 2..=50 {
        let w = general_accuracy(&PolicySpec::OddBlockW { i }, 6).map_err(e2s)?.sup;
        let h = general_accuracy(&PolicySpec::OddBlockH { i }, 6).map_err(e2s)?.sup;
        ensure(w > h, format!("i={i}: {w} <= {h}"))?;
    }
    Ok("strict for i = 2..50".into())
}

fn limit_brackets() -> Check {
    for i in 2..=10u64 {
        let b = limit_bracket(i, 12).map_err(e2s)?;
        ensure(b.holds(), format!("bracket fails at i={i}"))?;
        // (L - 1/2) * 2/3 must square to i/(i+4)
        let l = limit_constant(i).map_err(e2s)?;
        let r = (l - q(1, 2)) * q(2, 3);
        ensure(
            &r * &r == q(i as i64, i as i64 + 4) && r > q(0, 1),
            format!("limit constant wrong at i={i}"),
        )?;
    }
    Ok("F(n+1) omega^n brackets the limit monotonically for i = 2..10, n <= 12".into())
}

fn a_thresholds() -> Check {
    for i in 2..=50 {
        let t = thresholds(i, 2).map_err(e2s)?;
        let s = Seqs::new(i, 6).map_err(e2s)?;
        let ds = s.fq(4) * omega(i).map_err(e2s)?.pow(3).map_err(e2s)?;
        ensure(delta_star(i).map_err(e2s)? == ds, format!("delta* at i={i}"))?;
        ensure(*t.a_at(1) == &ds / s.fq(3), format!("A1 at i={i}"))?;
        ensure(
            *t.a_at(2) == omega(i).map_err(e2s)?.pow(2).map_err(e2s)?,
            format!("A2 at i={i}"),
        )?;
    }
    Ok("A1 = delta*/F(3), A2 = omega^2 for i = 2..50".into())
}

fn inequality_suite() -> Check {
    let start = Instant::now();
    let rep = verify_inequalities(2..=100).map_err(e2s)?;
    let t = start.elapsed();
    if let Some(c) = rep.checks.iter().find(|c| !c.holds) {
        return Err(format!("{} fails at i={}", c.name, c.i));
    }
    ensure(rep.all_hold, "report flags a failure")?;
    ensure(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!("{} exact checks in {t:.2?}", rep.checks.len()))
}

/// Endpoints of the sub-intervals of `(F(1)/F(3), G(0)/G(2))` cut by the
/// thresholds `G(m)/G(m+2)` and `F(m+1)/F(m+3)`.
fn subinterval_cuts(i: u64, m_max: i64) -> Vec<Rational> {
    let f = f_seq(i, m_max as usize + 4).unwrap();
    let g = g_seq(i, m_max as usize + 3).unwrap();
    let r = |a: &BigInt, b: &BigInt| Rational::new(a.clone(), b.clone());
    let lo = r(f.at(1), f.at(3));
    let hi = r(g.at(0), g.at(2));
    let mut cuts = vec![lo.clone(), hi.clone()];
    for m in 1..=m_max {
        cuts.push(r(g.at(m), g.at(m + 2)));
        cuts.push(r(f.at(m + 1), f.at(m + 3)));
    }
    cuts.retain(|c| *c >= lo && *c <= hi);
    cuts.sort();
    cuts.dedup();
    cuts
}

fn closed_form_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut total = 0;
    let mut intervals = 0;
    for i in 2..=3u64 {
        let cuts = subinterval_cuts(i, 5);
        for w in cuts.windows(2) {
            intervals += 1;
            let mut done = 0;
            let mut tries = 0;
            while done < 100 {
                tries += 1;
                ensure(tries < 1000, format!("too many boundary hits in ({}, {})", w[0], w[1]))?;
                let t = Rational::new(
                    BigInt::from(rng.random_range(1..1_000_000_000i64)),
                    BigInt::from(1_000_000_000i64),
                );
                let a = QuadNum::rational(&w[0] + (&w[1] - &w[0]) * t);
                let range = match closed_form_range(&a, i, 10) {
                    Ok(r) => r,
                    Err(Error::Boundary { .. }) => continue,
                    Err(e) => return Err(e.to_string()),
                };
                ensure(
                    range.valid_through >= 1,
                    format!("alpha1 = {a} outside every eligible range"),
                )?;
                let tr = match trace_basic(&a, i, range.valid_through, &PositionChoice::Adversarial) {
                    Ok(t) => t,
                    Err(Error::Boundary { .. }) => continue,
                    Err(e) => return Err(e.to_string()),
                };
                for m in 1..=range.valid_through {
                    let d = basic_closed_delta(&a, i, m).map_err(e2s)?;
                    let bd = basic_closed_big_delta(&a, i, m).map_err(e2s)?;
                    ensure(
                        *tr.delta(m) == d && *tr.big_delta(m) == bd,
                        format!("i={i} alpha1={a} m={m}"),
                    )?;
                }
                done += 1;
                total += 1;
            }
        }
    }
    Ok(format!(
        "{total} random first gaps over {intervals} sub-intervals, i = 2, 3"
    ))
}

fn asymptotic_ratios() -> Check {
    let mut triples = 0;
    let mut bounds = 0;
    for i in 2..=3u64 {
        let w2 = omega(i).map_err(e2s)?.pow(2).map_err(e2s)?;
        for k in [q(85, 100), q(97, 100), q(103, 100), q(11, 10)] {
            let a = &w2 * k;
            let t = basic_track(i, &a, 8).map_err(e2s)?;
            let c = check_cocycles(&t).map_err(e2s)?;
            ensure(
                c.holds(),
                format!("cocycle fails for i={i} alpha1={a}: {:?}", c.failures.first()),
            )?;
            triples += c.triples;
            for b in check_step_bounds(&t)
                .map_err(e2s)?
                .into_iter()
                .chain(check_implications(&t).map_err(e2s)?)
            {
                ensure(b.holds, format!("{} fails at n={} for i={i} alpha1={a}", b.claim, b.n))?;
                bounds += 1;
            }
        }
    }

    // mu(0,1) < 1, mu(1,2) > 1, lambda(2,3) = 1, lambda(3,4) < 1, lambda = 1 from n = 5
    let reference = reference_trace(2, &q(1, 2), 4, 8).map_err(e2s)?;
    let s = [
        q(1, 1),
        q(6, 5),
        q(3, 2),
        q(3, 2),
        q(6, 5),
        q(2, 1),
        q(2, 1),
        q(2, 1),
        q(2, 1),
    ];
    let r = [
        q(1, 1),
        q(9, 10),
        q(3, 2),
        q(3, 2),
        q(6, 5),
        q(2, 1),
        q(2, 1),
        q(2, 1),
        q(2, 1),
    ];
    let u = s.iter().zip(&reference.x).map(|(a, b)| a * b).collect();
    let mut v: Vec<QuadNum> = r.iter().zip(&reference.y).map(|(a, b)| a * b).collect();
    v[0] = reference.x[0].clone();
    let t = ratio_trackers(u, v, &reference).map_err(e2s)?;
    let phi = phi_construction(&t).map_err(e2s)?;
    let sources: Vec<PhiSource> = phi.phi.iter().map(|p| p.source).collect();
    let expect = vec![
        PhiSource::Rho { m: 0, n: 1 },
        PhiSource::Mu { m: 1, n: 2 },
        PhiSource::MergedLambda { m: 3, n: 5 },
    ];
    ensure(sources == expect, format!("phi sources {sources:?}"))?;
    ensure(phi.phi[2].value == t.lambda(3, 5).map_err(e2s)?, "phi(3) value")?;
    Ok(format!(
        "{triples} cocycle triples, {bounds} bound checks, worked phi example reproduced"
    ))
}

fn oracle_round_trip() -> Check {
    let mut cases: Vec<(PolicySpec, usize)> = Vec::new();
    for n in 1..=6 {
        cases.push((PolicySpec::Fibonacci { horizon: n }, n));
        cases.push((PolicySpec::Golden, n));
    }
    for i in 1..=3 {
        for n in 1..=3 {
            if i >= 2 {
                cases.push((PolicySpec::OddBlockG { i, horizon: n }, n));
            }
            cases.push((PolicySpec::OddBlockW { i }, n));
            cases.push((PolicySpec::OddBlockH { i }, n));
            cases.push((PolicySpec::EvenBlock { i }, n));
        }
    }
    for (p, n) in &cases {
        let wc = worst_case(p, *n, DEFAULT_BRANCH_CAP).map_err(e2s)?;
        let analytic = step_accuracy(p, *n).map_err(e2s)?;
        ensure(
            wc.value == analytic,
            format!("{p} n={n}: oracle {} vs {analytic}", wc.value),
        )?;
        let w = witness_function(p, &wc.branch).map_err(e2s)?;
        let expected: Vec<(QuadNum, QuadNum)> = branch_steps(p, &wc.branch)
            .map_err(e2s)?
            .into_iter()
            .map(|s| (s.a, s.b))
            .collect();
        let exact = run_search_in(|x| w.eval(x), p, q(0, 1), q(1, 1), Stop::Steps(*n)).map_err(e2s)?;
        ensure(exact.trajectory == expected, format!("{p} n={n}: trajectory differs"))?;
        let float = run_search(|x| w.eval(x), p, 0.0, 1.0, Stop::Steps(*n)).map_err(e2s)?;
        let err = (float.estimate - w.peak.to_f64()).abs();
        ensure(
            (err - analytic.to_f64()).abs() < 1e-9,
            format!("{p} n={n}: error {err} vs {analytic}"),
        )?;
    }
    Ok(format!("{} policy/horizon pairs replayed", cases.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 13] = [
        (
            "sequence identities, i = 1..10, indices to 25, < 5 s",
            sequence_identities,
        ),
        (
            "monotone ratio and sandwich claims, i = 2..10, n <= 12",
            monotone_ratios,
        ),
        ("Fibonacci search accuracy 1/F(n+1) by oracle, n <= 6", fibonacci_oracle),
        ("G(3) at i = 2 has accuracy 1/28", g3_instance),
        ("W general accuracy 2i omega, bracket n <= 12", w_accuracy),
        (
            "H general accuracy F(4) omega^3, first-step bound i = 2..50",
            h_accuracy,
        ),
        ("W accuracy exceeds H accuracy, i = 2..50", w_above_h),
        ("limit of F(n+1) omega^n bracketed, i = 2..10, n <= 12", limit_brackets),
        ("thresholds A1 and A2, i = 2..50", a_thresholds),
        ("tail-bound inequality suite, i = 2..100, < 10 s", inequality_suite),
        ("chained step updates match closed forms", closed_form_consistency),
        ("ratio cocycles, one-step bounds, phi construction", asymptotic_ratios),
        ("oracle witnesses replay through the runtime", oracle_round_trip),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let t = start.elapsed();
        match res {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({t:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why} ({t:.2?})", k + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
