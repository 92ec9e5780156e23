//! The bundled corpus: files on disk match the code, every classifier
//! decision matches the recorded one, and the oracle never contradicts it.

use std::path::PathBuf;

use rayon::prelude::*;
use torsionlab_core::classifier::{classify, Decision};
use torsionlab_core::corpus::{contradicts, corpus, corroborates, CORPUS_HORIZON};
use torsionlab_core::experiment::Experiment;
use torsionlab_core::oracle::empirical_convergence;

/// Set to rewrite `experiments/corpus/*.toml` from the code.
const REGENERATE_ENV: &str = "TORSIONLAB_REGENERATE_CORPUS";

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments/corpus")
}

#[test]
fn corpus_files_match_the_code() {
    let dir = corpus_dir();
    let regenerate = std::env::var_os(REGENERATE_ENV).is_some();
    if regenerate {
        std::fs::create_dir_all(&dir).unwrap();
    }
    for case in corpus() {
        let text = case.experiment().unwrap().to_toml();
        let path = dir.join(format!("{}.toml", case.name));
        if regenerate {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}; rerun with {REGENERATE_ENV}=1", path.display()));
        assert_eq!(on_disk, text, "{} is stale; rerun with {REGENERATE_ENV}=1", path.display());
        let back = Experiment::load(&path, 1).unwrap();
        assert_eq!(back.to_toml(), text);
        assert_eq!(back.oracle.n_max, CORPUS_HORIZON);
    }
    let files = std::fs::read_dir(&dir).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "toml"));
    assert_eq!(files.count(), corpus().len(), "stray files in {}", dir.display());
}

#[test]
fn corpus_has_at_least_thirty_cases() {
    assert!(corpus().len() >= 30);
}

#[test]
fn classifier_matches_recorded_decisions() {
    for case in corpus() {
        let e = case.experiment().unwrap();
        let v = classify(&e.element, &e.ideal);
        assert_eq!(v.decision, case.expected, "{}\n{}", case.name, v.trace_text());
        assert!(v.conflicts.is_empty(), "{}: conflicting rules {:?}", case.name, v.conflicts);
    }
}

#[test]
fn oracle_corroborates_every_decision() {
    let failures: Vec<String> = corpus()
        .par_iter()
        .filter_map(|case| {
            let e = case.experiment().unwrap();
            let o = &e.oracle;
            let reports = empirical_convergence(
                &e.element,
                (&e.seq).into(),
                &e.ideal,
                &o.epsilons,
                o.n_max,
                o.tail_digits,
                &o.checkpoints(),
                &o.thresholds,
            )
            .unwrap_or_else(|err| panic!("{}: {err}", case.name));
            let ok = corroborates(case.expected, &reports) && !contradicts(case.expected, &reports);
            (!ok).then(|| {
                let lines: Vec<String> = reports.iter().map(|r| format!("eps {} {}", r.epsilon, r.verdict)).collect();
                format!("{} ({}): {}", case.name, case.expected, lines.join(", "))
            })
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn member_ratios_end_small_and_non_member_ratios_stay_large() {
    // the numeric reading of the verdicts: final ratio < 1/20 for members,
    // every ratio > 1/5 for some epsilon of each non-member
    for case in corpus().iter().filter(|c| c.name.starts_with("half3") || c.name.starts_with("squares-b2")) {
        let e = case.experiment().unwrap();
        let o = &e.oracle;
        let reports =
            empirical_convergence(&e.element, (&e.seq).into(), &e.ideal, &o.epsilons, o.n_max, o.tail_digits, &o.checkpoints(), &o.thresholds)
                .unwrap();
        let small = torsionlab_core::exact_arith::rat(1, 20);
        let large = torsionlab_core::exact_arith::rat(1, 5);
        match case.expected {
            Decision::Member => {
                assert!(reports.iter().all(|r| r.checkpoints.last().unwrap().ratio.lt(&small)), "{}", case.name)
            }
            Decision::NonMember => assert!(
                reports.iter().any(|r| r.checkpoints.iter().all(|c| c.ratio.gt(&large))),
                "{}",
                case.name
            ),
            Decision::Unknown => unreachable!(),
        }
    }
}
