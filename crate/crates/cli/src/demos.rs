use std::io::Write;

use torsionlab_core::classifier::{classify, Rule};
use torsionlab_core::digits::DigitSpec;
use torsionlab_core::exact_arith::{rat, Rational};
use torsionlab_core::experiment::Experiment;
use torsionlab_core::ideals::dl_demo;
use torsionlab_core::oracle::{empirical_convergence, norm_trace, NormEntry, Thresholds};
use torsionlab_core::sequences::{dk_e_pattern, dk_sequence, ArithmeticSequence};

use crate::commands::{
    decision_code, describe, print_reports, print_scan, print_verdict, scan, Failure, ScanRun, Settings,
};
use crate::DemoName;

const SPLITTING_RATIO: &str = "piecewise even: constant 2; odd: affine 1 0";
/// Terms of the e pattern; DK terms up to 10^4 only reach block 141.
const E_PATTERN_TERMS: u64 = 200;

fn io(e: std::io::Error) -> Failure {
    Failure::Oracle(e.into())
}

fn experiment(settings: &Settings, name: &str, ratio: &str, element: &str, ideal: &str) -> Result<Experiment, Failure> {
    let mut e = Experiment::new(name, ratio, element, ideal).map_err(|e| Failure::Input(e.into()))?;
    e.oracle.n_max = settings.horizon();
    settings.apply(&mut e);
    Ok(e)
}

fn classify_and_scan(e: &Experiment, out: &mut dyn Write) -> Result<ScanRun, Failure> {
    let run = scan(e)?;
    describe(e, out).map_err(io)?;
    print_verdict(&run.verdict, out).map_err(io)?;
    print_scan(&run, out).map_err(io)?;
    writeln!(out).map_err(io)?;
    Ok(run)
}

pub(crate) fn run(name: DemoName, settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    match name {
        DemoName::Euler => {
            let e = experiment(settings, "euler", "factorial", "digits on positive value 1", "fin")?;
            classify_and_scan(&e, out).map(|r| decision_code(r.verdict.decision))
        }
        DemoName::Squares => {
            let e = experiment(settings, "squares", "constant 2", "digits on squares value 1", "density 1")?;
            classify_and_scan(&e, out).map(|r| decision_code(r.verdict.decision))
        }
        DemoName::Half3 => half3(settings, out),
        DemoName::Splitting => {
            let member = experiment(
                settings,
                "splitting-member",
                SPLITTING_RATIO,
                "digits on intersection(odds, squares) value 1",
                "density 1",
            )?;
            let non_member = experiment(settings, "splitting-non-member", SPLITTING_RATIO, "digits on evens value top", "density 1")?;
            for e in [&member, &non_member] {
                let run = classify_and_scan(e, out)?;
                if let Some(entry) = run.verdict.entry(Rule::Splitting) {
                    writeln!(out, "splitting conditions:\n{entry}\n").map_err(io)?;
                }
            }
            Ok(0)
        }
        DemoName::Dk => dk(settings, out),
        DemoName::Dl => {
            let horizon = settings.horizon().max(1 << 14);
            let report = dl_demo(12, horizon);
            let mut w = || -> std::io::Result<()> {
                writeln!(out, "chain A_n = N \\ 2^n N, diagonal pseudounion U, counts on [t_n, {horizon}]")?;
                writeln!(out, "n,density(N\\A_n),in_I_d,t_n,count,ratio,within_2^-n_bound")?;
                for r in &report.rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        r.n, r.complement_density, r.complement_in_id, r.t_n, r.count, r.ratio, r.within_bound
                    )?;
                }
                writeln!(
                    out,
                    "every complement bound holds: {}; the density ideal fails the pseudounion property along this chain",
                    report.all_within_bound()
                )
            };
            w().map_err(io)?;
            Ok(0)
        }
    }
}

fn half3(settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    for ideal in ["fin", "density 1/2", "density 1"] {
        let e = experiment(settings, "half3", "constant 3", "rational 1/2", ideal)?;
        let v = classify(&e.element, &e.ideal);
        let by = v.decided_by.map_or(String::new(), |r| format!(" by {}", r.name()));
        writeln!(out, "ideal {ideal}: {}{by}", v.decision).map_err(io)?;
    }
    let e = experiment(settings, "half3", "constant 3", "rational 1/2", "density 1")?;
    let n = e.oracle.n_max;
    let trace = norm_trace(&e.element, (&e.seq).into(), n, e.oracle.tail_digits).map_err(|e| Failure::Oracle(e.into()))?;
    let flat = trace.entries.iter().all(|x| x == &NormEntry::Exact(rat(1, 2)));
    writeln!(out, "||3^n / 2|| = 1/2 for every n <= {n}: {flat}").map_err(io)?;
    Ok(1)
}

fn dk(settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = dk_sequence();
    let n = settings.horizon();
    // the sequence is not arithmetic, so only the oracle applies; the digit
    // container's own sequence is never consulted by the exact modes
    let holder = ArithmeticSequence::constant(2).expect("valid");
    let eps = settings.epsilons.clone().unwrap_or_else(|| vec![rat(1, 4), rat(1, 8)]);
    let cps = torsionlab_core::oracle::default_checkpoints(n);
    writeln!(out, "dk sequence 1, 2, 4, 6, 12, 18, 24, ... is not arithmetic: oracle only, ideal fin").map_err(io)?;
    let cases: [(&str, Rational); 2] = [
        ("x = 1/3", rat(1, 3)),
        ("x = e pattern (sum of 1/j! for 2 <= j <= 200)", dk_e_pattern(E_PATTERN_TERMS)),
    ];
    for (label, x) in cases {
        let d = DigitSpec::rational(x, &holder).map_err(|e| Failure::Input(e.into()))?;
        let reports = empirical_convergence(
            &d,
            (&g).into(),
            &torsionlab_core::ideals::IdealSpec::Fin,
            &eps,
            n,
            1,
            &cps,
            &Thresholds::default(),
        )
        .map_err(|e| Failure::Oracle(e.into()))?;
        writeln!(out, "{label}").map_err(io)?;
        print_reports("exact-modular", &reports, out).map_err(io)?;
    }
    Ok(0)
}
