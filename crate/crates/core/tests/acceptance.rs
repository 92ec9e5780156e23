//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.  Built with `harness = false` so the lines always reach stdout.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use torsionlab_core::classifier::{classify, witness_nonmember, Decision, Rule, RuleOutcome};
use torsionlab_core::corpus::{corpus, corroborates};
use torsionlab_core::digits::{DigitRule, DigitSpec};
use torsionlab_core::exact_arith::{rat, Rational};
use torsionlab_core::experiment::Experiment;
use torsionlab_core::grammar::{parse_element, parse_ideal, parse_sequence};
use torsionlab_core::ideals::{dl_demo, IdealSpec};
use torsionlab_core::oracle::{
    convergence_reports, default_checkpoints, empirical_convergence, norm_trace, norm_trace_with, EmpiricalVerdict,
    NormEntry, NormTrace, Thresholds, TraceMode,
};
use torsionlab_core::sequences::ArithmeticSequence;
use torsionlab_core::sets::SetSpec;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit_s as f64, || format!("took {elapsed:.2?}, limit {limit_s} s"))
}

fn reports_for(e: &Experiment, n_max: u64, eps: &[Rational]) -> Vec<torsionlab_core::oracle::ConvergenceReport> {
    empirical_convergence(
        &e.element,
        (&e.seq).into(),
        &e.ideal,
        eps,
        n_max,
        e.oracle.tail_digits,
        &default_checkpoints(n_max),
        &Thresholds::default(),
    )
    .expect("oracle run")
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let rules = ["constant 2", "constant 3", "affine 1 1", "piecewise even: constant 2; odd: affine 1 0"];
    let mut checked = 0;
    let mut violations = Vec::new();
    for _ in 0..50 {
        let q: i64 = rng.random_range(2..=10_000);
        let p: i64 = rng.random_range(0..q);
        for rule in rules {
            let seq = parse_sequence(rule).unwrap();
            let d = DigitSpec::rational(rat(p, q), &seq).unwrap();
            match d.validate_expansion_identities(1..=30, 0..=8) {
                Ok(n) => checked += n,
                Err(e) => violations.push(format!("{p}/{q} over {rule}: {e}")),
            }
        }
    }
    check(violations.is_empty(), || violations.join("; "))?;
    within(start.elapsed(), 10)?;
    Ok(format!("{checked} (x, u, n, k) checks, zero violations"))
}

fn euler_pattern() -> Outcome {
    let start = Instant::now();
    let seq = ArithmeticSequence::factorial();
    let d = DigitSpec::rules(vec![(SetSpec::positive(), DigitRule::Const(1))], &seq).unwrap();
    let v = classify(&d, &IdealSpec::Fin);
    check(v.decision == Decision::Member && v.decided_by == Some(Rule::Armacost), || {
        format!("decision {} by {:?}", v.decision, v.decided_by)
    })?;
    let t = norm_trace(&d, (&seq).into(), 200, 40).map_err(|e| e.to_string())?;
    for n in 5..=200u64 {
        let e = &t.entries[n as usize];
        check(e.lo() >= &rat(1, n as i64 + 2) && e.hi() <= &rat(1, n as i64 + 1), || format!("n = {n}: [{}, {}]", e.lo(), e.hi()))?;
    }
    within(start.elapsed(), 5)?;
    Ok("Member by the factorial-base rule; enclosures inside [1/(n+2), 1/(n+1)] for 5 <= n <= 200".into())
}

fn half_in_base_three() -> Outcome {
    let start = Instant::now();
    let seq = ArithmeticSequence::constant(3).unwrap();
    let d = DigitSpec::rational(rat(1, 2), &seq).unwrap();
    for ideal in ["fin", "density 1/2", "density 1"] {
        let v = classify(&d, &parse_ideal(ideal, &seq).unwrap());
        check(v.decision == Decision::NonMember, || format!("{ideal}: {}", v.decision))?;
    }
    let t = norm_trace_with(&d, (&seq).into(), 10_000, TraceMode::ExactModular).map_err(|e| e.to_string())?;
    check(t.entries.iter().all(|e| e == &NormEntry::Exact(rat(1, 2))), || "a norm differs from 1/2".into())?;
    within(start.elapsed(), 2)?;
    Ok("NonMember for fin, density 1/2, density 1; norm = 1/2 for n <= 10000".into())
}

fn squares_in_density_ideal() -> Outcome {
    let start = Instant::now();
    let e = Experiment::new("squares", "constant 2", "digits on squares value 1", "density 1").unwrap();
    let v = classify(&e.element, &e.ideal);
    check(v.decision == Decision::Member, || format!("decision {}", v.decision))?;
    let r = reports_for(&e, 8192, &[rat(1, 8)]);
    let last = r[0].checkpoints.last().unwrap();
    check(last.ratio.lt(&rat(1, 20)), || format!("final ratio {}", last.ratio))?;
    check(r[0].verdict == EmpiricalVerdict::ConsistentWithConvergence, || format!("verdict {}", r[0].verdict))?;
    within(start.elapsed(), 30)?;
    Ok(format!("Member; |E_1/8(8192)|/8192 = {}", last.ratio))
}

fn third_in_base_two() -> Outcome {
    let start = Instant::now();
    let seq = ArithmeticSequence::constant(2).unwrap();
    let d = DigitSpec::rational(rat(1, 3), &seq).unwrap();
    let v = classify(&d, &IdealSpec::Fin);
    check(v.decision == Decision::NonMember, || format!("decision {}", v.decision))?;
    let n = 4096;
    let t: NormTrace = norm_trace_with(&d, (&seq).into(), n, TraceMode::ExactModular).map_err(|e| e.to_string())?;
    check(t.entries.iter().all(|e| e == &NormEntry::Exact(rat(1, 3))), || "a norm differs from 1/3".into())?;
    for ideal in [IdealSpec::Fin, IdealSpec::natural_density()] {
        let r = convergence_reports(&t, &ideal, &[rat(1, 4)], &default_checkpoints(n), &Thresholds::default())
            .map_err(|e| e.to_string())?;
        check(r[0].checkpoints.iter().all(|c| c.ratio.as_rational() == Some(rat(1, 1))), || format!("{ideal}: ratio below 1"))?;
    }
    within(start.elapsed(), 2)?;
    Ok("NonMember; norm = 1/3 everywhere; exceptional ratio 1 at every checkpoint".into())
}

fn convexity_obstruction() -> Outcome {
    let e = Experiment::new("evens", "constant 2", "digits on evens value 1", "density 1").unwrap();
    let v = classify(&e.element, &e.ideal);
    check(v.decision == Decision::NonMember && v.decided_by == Some(Rule::ConvexityObstruction), || {
        format!("decision {} by {:?}", v.decision, v.decided_by)
    })?;
    let r = reports_for(&e, 4096, &[rat(1, 8)]);
    check(r[0].verdict == EmpiricalVerdict::InconsistentWithConvergence, || format!("verdict {}", r[0].verdict))?;
    Ok("NonMember by the convexity rule; oracle Inconsistent at eps 1/8, N = 4096".into())
}

fn splitting_pipeline() -> Outcome {
    let ratio = "piecewise even: constant 2; odd: affine 1 0";
    let cases = [
        ("digits on intersection(odds, squares) value 1", Decision::Member, RuleOutcome::Member),
        ("digits on evens value top", Decision::NonMember, RuleOutcome::NonMember),
    ];
    for (element, want, outcome) in cases {
        let e = Experiment::new("split", ratio, element, "density 1").unwrap();
        let v = classify(&e.element, &e.ideal);
        check(v.decision == want, || format!("{element}: {}", v.decision))?;
        let entry = v.entry(Rule::Splitting).ok_or("no splitting entry")?;
        check(entry.outcome == outcome, || format!("{element}: splitting rule says {}", entry.outcome))?;
        for tag in ["(1_x)", "(2_x)", "(3_x)"] {
            check(entry.conditions.iter().any(|c| c.label.starts_with(tag)), || format!("{element}: trace lacks {tag}"))?;
        }
        let r = reports_for(&e, 4096, &e.oracle.epsilons);
        check(corroborates(want, &r), || format!("{element}: oracle does not corroborate"))?;
    }
    Ok("both cases decided; splitting conditions traced; oracle corroborates at N = 4096".into())
}

fn witness_generator() -> Outcome {
    let cases = [("constant 2", SetSpec::evens()), ("factorial", SetSpec::naturals())];
    let mut bands = 0;
    for (ratio, b) in cases {
        let seq = parse_sequence(ratio).unwrap();
        for ideal in ["fin", "density 1"] {
            let i = parse_ideal(ideal, &seq).unwrap();
            let x = witness_nonmember(&b, &seq, &i).map_err(|e| format!("{ratio} / {ideal}: {e}"))?;
            let v = classify(&x, &i);
            check(v.decision == Decision::NonMember, || format!("{ratio} / {ideal}: {}", v.decision))?;
            if seq.is_b_bounded().is_no() {
                // divergent branch: ||u_{n-1} x|| >= 1/6 on the support
                let n_max = 2000;
                let t = norm_trace(&x, (&seq).into(), n_max, 64).map_err(|e| e.to_string())?;
                let supp = x.supports().unwrap().supp;
                for n in supp.enumerate(n_max).into_iter().filter(|&n| n >= 1) {
                    let e = &t.entries[n as usize - 1];
                    check(e.lo() >= &rat(1, 6) && e.hi() <= &rat(5, 6), || format!("n = {n}: [{}, {}]", e.lo(), e.hi()))?;
                    bands += 1;
                }
            }
        }
    }
    Ok(format!("all four witnesses NonMember; {bands} band checks on the divergent branch"))
}

fn monotonicity() -> Outcome {
    let chain = ["fin", "density 1/2", "density 1"];
    let mut inversions = Vec::new();
    for case in corpus() {
        let seq = parse_sequence(case.ratio).unwrap();
        let d = parse_element(case.element, &seq).unwrap();
        let ds: Vec<Decision> = chain.iter().map(|i| classify(&d, &parse_ideal(i, &seq).unwrap()).decision).collect();
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                if ds[i] == Decision::Member && ds[j] == Decision::NonMember {
                    inversions.push(format!("{}: {} vs {}", case.name, chain[i], chain[j]));
                }
            }
        }
    }
    check(inversions.is_empty(), || inversions.join("; "))?;
    Ok(format!("{} corpus elements, no inversions", corpus().len()))
}

fn dl_chain() -> Outcome {
    let horizon = 1u64 << 26;
    let report = dl_demo(12, horizon);
    check(report.rows.len() == 12, || format!("{} rows", report.rows.len()))?;
    check(report.all_within_bound(), || "a pseudounion complement exceeds its bound".into())?;
    Ok(format!("n <= 12, exact counts up to {horizon}"))
}

fn mode_agreement() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let rules = ["constant 2", "constant 10", "affine 1 1", "periodic 2,3,5"];
    for i in 0..20 {
        let q: i64 = rng.random_range(2..=1_000_000);
        let p: i64 = rng.random_range(0..q);
        let seq = parse_sequence(rules[i % rules.len()]).unwrap();
        let d = DigitSpec::rational(rat(p, q), &seq).unwrap();
        let a = norm_trace_with(&d, (&seq).into(), 2000, TraceMode::ExactModular).map_err(|e| e.to_string())?;
        let b = norm_trace_with(&d, (&seq).into(), 2000, TraceMode::ExactBig).map_err(|e| e.to_string())?;
        check(a.entries == b.entries, || format!("{p}/{q}: traces differ"))?;
    }
    Ok("20 rationals, N = 2000, identical traces".into())
}

fn performance() -> Outcome {
    const MARGIN: f64 = 4.0;
    let seq = ArithmeticSequence::constant(10).unwrap();
    let d = DigitSpec::rational(rat(22, 97), &seq).unwrap();
    let n = 400_000;
    let start = Instant::now();
    norm_trace_with(&d, (&seq).into(), n, TraceMode::ExactModular).map_err(|e| e.to_string())?;
    let modular = n as f64 / start.elapsed().as_secs_f64();

    let seq2 = ArithmeticSequence::constant(2).unwrap();
    let d2 = DigitSpec::rules(vec![(SetSpec::squares(), DigitRule::Const(1))], &seq2).unwrap();
    let m = 40_000;
    let start = Instant::now();
    norm_trace_with(&d2, (&seq2).into(), m, TraceMode::IntervalTail(64)).map_err(|e| e.to_string())?;
    let interval = m as f64 / start.elapsed().as_secs_f64();

    let msg = format!("modular {modular:.0} steps/s, interval (K = 64) {interval:.0} steps/s");
    check(modular * MARGIN >= 1e5 && interval * MARGIN >= 1e4, || msg.clone())?;
    Ok(msg)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("exact identity suite", identity_suite),
        ("euler pattern in the factorial base", euler_pattern),
        ("one half in base three", half_in_base_three),
        ("squares in the density ideal", squares_in_density_ideal),
        ("one third in base two", third_in_base_two),
        ("convexity obstruction", convexity_obstruction),
        ("splitting pipeline", splitting_pipeline),
        ("witness generator", witness_generator),
        ("ideal monotonicity", monotonicity),
        ("diagonal pseudounion chain", dl_chain),
        ("oracle mode agreement", mode_agreement),
        ("performance floor", performance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
