//! The bundled (x, u, I) cases and the rules for reading oracle reports
//! against classifier decisions.

use crate::classifier::Decision;
use crate::experiment::{Experiment, ExperimentError};
use crate::oracle::{ConvergenceReport, EmpiricalVerdict};

/// Horizon used when the corpus is replayed through the oracle.
pub const CORPUS_HORIZON: u64 = 8192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusCase {
    pub name: &'static str,
    pub ratio: &'static str,
    pub element: &'static str,
    pub ideal: &'static str,
    pub expected: Decision,
}

impl CorpusCase {
    pub fn experiment(&self) -> Result<Experiment, ExperimentError> {
        let mut e = Experiment::new(self.name, self.ratio, self.element, self.ideal)?;
        e.oracle.n_max = CORPUS_HORIZON;
        Ok(e)
    }
}

const fn case(
    name: &'static str,
    ratio: &'static str,
    element: &'static str,
    ideal: &'static str,
    expected: Decision,
) -> CorpusCase {
    CorpusCase { name, ratio, element, ideal, expected }
}

use Decision::{Member as M, NonMember as N};

const PIECEWISE: &str = "piecewise even: constant 2; odd: affine 1 0";

static CASES: [CorpusCase; 40] = [
    case("euler-fin", "factorial", "digits on positive value 1", "fin", M),
    case("euler-density", "factorial", "digits on positive value 1", "density 1", M),
    case("squares-b2-density", "constant 2", "digits on squares value 1", "density 1", M),
    case("dyadic-fin", "constant 2", "finite 1:1, 3:1", "fin", M),
    case("dyadic-half-density", "constant 2", "finite 1:1, 3:1", "density 1/2", M),
    case("dyadic-density", "constant 2", "finite 1:1, 3:1", "density 1", M),
    case("half-factorial-fin", "factorial", "rational 1/2", "fin", M),
    case("half-factorial-half-density", "factorial", "rational 1/2", "density 1/2", M),
    case("powers-b2-density", "constant 2", "digits on powers 2 value 1", "density 1", M),
    case("split-odd-squares-fin", PIECEWISE, "digits on intersection(odds, squares) value 1", "fin", M),
    case("split-odd-squares-half-density", PIECEWISE, "digits on intersection(odds, squares) value 1", "density 1/2", M),
    case("split-odd-squares-density", PIECEWISE, "digits on intersection(odds, squares) value 1", "density 1", M),
    case("factorial-top-evens-fin", "factorial", "digits on evens value top", "fin", M),
    case("factorial-top-evens-density", "factorial", "digits on evens value top", "density 1", M),
    case("squares-b3-density", "constant 3", "digits on squares value 1", "density 1", M),
    case("affine-top-squares-fin", "affine 2 0", "digits on squares value top", "fin", M),
    case("affine-top-squares-half-density", "affine 2 0", "digits on squares value top", "density 1/2", M),
    case("cubes-b2-density", "constant 2", "digits on cubes value 1", "density 1", M),
    case("factorial-top-squares-half-density", "factorial", "digits on squares value top", "density 1/2", M),
    case("prefix-third-half-density", "prefix 3,5 then constant 2", "rational 1/3", "density 1/2", M),
    case("factorial-odds-half-density", "affine 1 1", "digits on odds value 1", "density 1/2", M),
    case("split-odds-fin", PIECEWISE, "digits on odds value 1", "fin", M),
    case("half3-fin", "constant 3", "rational 1/2", "fin", N),
    case("half3-half-density", "constant 3", "rational 1/2", "density 1/2", N),
    case("half3-density", "constant 3", "rational 1/2", "density 1", N),
    case("third-b2-fin", "constant 2", "rational 1/3", "fin", N),
    case("third-b2-density", "constant 2", "rational 1/3", "density 1", N),
    case("squares-b2-fin", "constant 2", "digits on squares value 1", "fin", N),
    case("squares-b2-half-density", "constant 2", "digits on squares value 1", "density 1/2", N),
    case("evens-b2-density", "constant 2", "digits on evens value 1", "density 1", N),
    case("seventh-b10-density", "constant 10", "rational 1/7", "density 1", N),
    case("split-top-evens-fin", PIECEWISE, "digits on evens value top", "fin", N),
    case("split-top-evens-density", PIECEWISE, "digits on evens value top", "density 1", N),
    case("factorial-third-fin", "factorial", "digits on positive value third", "fin", N),
    case("affine3-linear-half-density", "affine 3 0", "digits on positive value affine 1 0", "density 1/2", N),
    case("progression31-b2-density", "constant 2", "digits on progression 3 1 value 1", "density 1", N),
    case("fifth-periodic-density", "periodic 2,3", "rational 1/5", "density 1", N),
    case("split-third-odds-density", PIECEWISE, "digits on odds value third", "density 1", N),
    case("odds-b4-fin", "constant 4", "digits on odds value 2", "fin", N),
    case("top-squares-b5-half-density", "constant 5", "digits on squares value 4", "density 1/2", N),
];

pub fn corpus() -> &'static [CorpusCase] {
    &CASES
}

/// The reports support the decision: every ε consistent for a member, some
/// ε inconsistent for a non-member.
pub fn corroborates(decision: Decision, reports: &[ConvergenceReport]) -> bool {
    match decision {
        Decision::Member => reports.iter().all(|r| r.verdict == EmpiricalVerdict::ConsistentWithConvergence),
        Decision::NonMember => reports.iter().any(|r| r.verdict == EmpiricalVerdict::InconsistentWithConvergence),
        Decision::Unknown => true,
    }
}

/// The reports speak against the decision: some ε inconsistent for a
/// member, every ε consistent for a non-member.
pub fn contradicts(decision: Decision, reports: &[ConvergenceReport]) -> bool {
    match decision {
        Decision::Member => reports.iter().any(|r| r.verdict == EmpiricalVerdict::InconsistentWithConvergence),
        Decision::NonMember => {
            !reports.is_empty() && reports.iter().all(|r| r.verdict == EmpiricalVerdict::ConsistentWithConvergence)
        }
        Decision::Unknown => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cases_parse_and_have_unique_names() {
        let names: HashSet<_> = corpus().iter().map(|c| c.name).collect();
        assert_eq!(names.len(), corpus().len());
        for c in corpus() {
            c.experiment().unwrap_or_else(|e| panic!("{}: {e}", c.name));
        }
        assert!(corpus().iter().filter(|c| c.expected == Decision::Member).count() >= 10);
        assert!(corpus().iter().filter(|c| c.expected == Decision::NonMember).count() >= 10);
    }
}
