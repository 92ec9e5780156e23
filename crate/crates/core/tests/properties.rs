use proptest::prelude::*;
use torsionlab_core::classifier::{classify, witness_nonmember, Decision, Rule, RuleOutcome};
use torsionlab_core::corpus::corpus;
use torsionlab_core::digits::{DigitRule, DigitSpec};
use torsionlab_core::exact_arith::rat;
use torsionlab_core::grammar::{parse_element, parse_ideal, parse_sequence};
use torsionlab_core::ideals::IdealSpec;
use torsionlab_core::sequences::ArithmeticSequence;
use torsionlab_core::sets::SetSpec;

const CHAIN: [&str; 3] = ["fin", "density 1/2", "density 1"];

const RATIOS: [&str; 7] = [
    "constant 2",
    "constant 3",
    "factorial",
    "affine 2 0",
    "periodic 2,3",
    "piecewise even: constant 2; odd: affine 1 0",
    "prefix 3,5 then constant 2",
];

const SETS: [&str; 10] = [
    "evens",
    "odds",
    "squares",
    "cubes",
    "powers 2",
    "progression 3 1",
    "finite 1, 4, 9",
    "positive",
    "intersection(odds, squares)",
    "rank(evens, 2, 0)",
];

const VALUES: [&str; 4] = ["1", "top", "third", "2"];

fn chain_decisions(ratio: &str, element: &str) -> Option<Vec<Decision>> {
    let seq = parse_sequence(ratio).unwrap();
    let d = parse_element(element, &seq).ok()?;
    Some(CHAIN.iter().map(|i| classify(&d, &parse_ideal(i, &seq).unwrap()).decision).collect())
}

fn no_inversion(ds: &[Decision]) -> bool {
    ds.iter().enumerate().all(|(i, a)| ds[i + 1..].iter().all(|b| !(*a == Decision::Member && *b == Decision::NonMember)))
}

#[test]
fn corpus_is_monotone_along_the_chain() {
    for case in corpus() {
        let ds = chain_decisions(case.ratio, case.element).unwrap();
        assert!(no_inversion(&ds), "{}: {ds:?}", case.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_elements_are_monotone(r in 0..RATIOS.len(), s in 0..SETS.len(), v in 0..VALUES.len()) {
        let element = format!("digits on {} value {}", SETS[s], VALUES[v]);
        // some digit rules are invalid on some bases (value 2 in base 2)
        if let Some(ds) = chain_decisions(RATIOS[r], &element) {
            prop_assert!(no_inversion(&ds), "{} / {element}: {ds:?}", RATIOS[r]);
        }
    }

    #[test]
    fn rational_elements_are_monotone(p in 1i64..60, q in 2i64..60, r in 0..RATIOS.len()) {
        prop_assume!(p < q);
        let element = format!("rational {p}/{q}");
        let ds = chain_decisions(RATIOS[r], &element).unwrap();
        prop_assert!(no_inversion(&ds), "{} / {element}: {ds:?}", RATIOS[r]);
    }
}

#[test]
fn re_presented_digits_give_the_same_verdict() {
    let seq = ArithmeticSequence::constant(2).unwrap();
    let exact = DigitSpec::rational(rat(1, 3), &seq).unwrap();
    let rules = DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Const(1))], &seq).unwrap();
    assert_eq!(exact.digits_upto(64), rules.digits_upto(64));
    for ideal in [IdealSpec::Fin, IdealSpec::density(rat(1, 2)).unwrap(), IdealSpec::natural_density()] {
        let a = classify(&exact, &ideal);
        let b = classify(&rules, &ideal);
        assert_eq!(a.decision, b.decision);
        assert_eq!(a.decided_by, b.decided_by);
        let outcomes = |v: &torsionlab_core::classifier::Verdict| v.trace.iter().map(|e| (e.rule, e.outcome.clone())).collect::<Vec<_>>();
        assert_eq!(outcomes(&a), outcomes(&b));
    }
}

#[test]
fn bounded_fin_rule_agrees_with_bounded_support_rule() {
    let mut both = 0;
    for ratio in ["constant 2", "constant 3", "periodic 2,3", "constant 5"] {
        let seq = parse_sequence(ratio).unwrap();
        for s in SETS {
            for v in VALUES {
                let Ok(d) = parse_element(&format!("digits on {s} value {v}"), &seq) else { continue };
                let verdict = classify(&d, &IdealSpec::Fin);
                let conclusive = |r: Rule| {
                    verdict.entry(r).map(|e| e.outcome.clone()).filter(|o| matches!(o, RuleOutcome::Member | RuleOutcome::NonMember))
                };
                if let (Some(a), Some(b)) = (conclusive(Rule::FinBBounded), conclusive(Rule::BBoundedSupport)) {
                    assert_eq!(a, b, "{ratio} / {s} / {v}");
                    both += 1;
                }
            }
        }
    }
    assert!(both > 0, "the two rules never fired together");
}

#[test]
fn witnesses_are_never_members() {
    let cases = [
        ("constant 2", "evens"),
        ("constant 3", "odds"),
        ("factorial", "positive"),
        ("factorial", "evens"),
        ("affine 2 0", "progression 3 1"),
        ("piecewise even: constant 2; odd: affine 1 0", "positive"),
        ("periodic 2,3", "all"),
    ];
    for (ratio, set) in cases {
        let seq = parse_sequence(ratio).unwrap();
        let b = torsionlab_core::grammar::parse_set(set).unwrap();
        for ideal in ["fin", "density 1/2", "density 1"] {
            let i = parse_ideal(ideal, &seq).unwrap();
            let x = witness_nonmember(&b, &seq, &i).unwrap_or_else(|e| panic!("{ratio} / {set} / {ideal}: {e}"));
            let supp = x.supports().unwrap().supp;
            assert!(supp.is_subset(&b).is_yes(), "support escapes {set}");
            let v = classify(&x, &i);
            assert_eq!(v.decision, Decision::NonMember, "{ratio} / {set} / {ideal}\n{}", v.trace_text());
        }
    }
}

#[test]
fn witness_refuses_sets_inside_the_ideal() {
    let seq = ArithmeticSequence::constant(2).unwrap();
    let err = witness_nonmember(&SetSpec::squares(), &seq, &IdealSpec::natural_density()).unwrap_err();
    assert!(matches!(err, torsionlab_core::classifier::WitnessError::PreconditionFailed(_)));
}
