//! Python bindings: sequences, sets, elements and ideals built from the
//! textual grammars, plus the classifier, the oracle and the witness builder.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use torsionlab_core::classifier::{classify_with_audit, witness_nonmember, Verdict as CoreVerdict};
use torsionlab_core::digits::DigitSpec;
use torsionlab_core::exact_arith::Rational;
use torsionlab_core::experiment::Experiment as CoreExperiment;
use torsionlab_core::grammar::{self, ElementSyntax};
use torsionlab_core::ideals::IdealSpec;
use torsionlab_core::oracle::{self, NormEntry, Thresholds, TraceMode};
use torsionlab_core::sequences::ArithmeticSequence;
use torsionlab_core::sets::SetSpec;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn oracle_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((r.numer().clone(), r.denom().clone()))
}

fn parse_epsilons(eps: Option<Vec<String>>) -> PyResult<Option<Vec<Rational>>> {
    eps.map(|v| v.iter().map(|s| torsionlab_core::exact_arith::parse_rational(s).map_err(value_err)).collect())
        .transpose()
}

/// An index set given in the set grammar, e.g. ``Set("union(squares, evens)")``.
#[pyclass(frozen, from_py_object, module = "torsionlab")]
#[derive(Clone)]
struct Set {
    inner: SetSpec,
}

#[pymethods]
impl Set {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Set { inner: grammar::parse_set(text).map_err(value_err)? })
    }

    fn __contains__(&self, n: u64) -> bool {
        self.inner.contains(n)
    }

    /// Members up to and including `n`.
    fn members(&self, n: u64) -> Vec<u64> {
        self.inner.enumerate(n)
    }

    /// `|A ∩ [0, n]|`.
    fn count(&self, n: u64) -> u64 {
        self.inner.counting(n)
    }

    /// `True`, `False` or `None` when undecided.
    fn is_finite(&self) -> Option<bool> {
        tri(self.inner.is_finite())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Set({:?})", self.inner.to_string())
    }
}

fn tri(t: torsionlab_core::logic::TriBool) -> Option<bool> {
    use torsionlab_core::logic::TriBool;
    match t {
        TriBool::Yes => Some(true),
        TriBool::No => Some(false),
        TriBool::Unknown => None,
    }
}

/// An arithmetic sequence given by its ratio rule, e.g. ``Sequence("factorial")``.
#[pyclass(frozen, from_py_object, module = "torsionlab")]
#[derive(Clone)]
struct Sequence {
    inner: ArithmeticSequence,
    text: String,
}

#[pymethods]
impl Sequence {
    #[new]
    fn new(ratio: &str) -> PyResult<Self> {
        Ok(Sequence { inner: grammar::parse_sequence(ratio).map_err(value_err)?, text: ratio.to_string() })
    }

    /// `b_n` for `n >= 1`.
    fn ratio(&self, n: u64) -> PyResult<u64> {
        if n == 0 {
            return Err(PyValueError::new_err("ratios start at n = 1"));
        }
        self.inner.try_ratio(n).map_err(value_err)
    }

    /// `u_n = b_1 ... b_n`.
    fn u(&self, n: u64) -> BigInt {
        self.inner.u_of(n).into()
    }

    fn bounded_part(&self) -> Set {
        Set { inner: self.inner.bounded_part() }
    }

    fn divergent_part(&self) -> Set {
        Set { inner: self.inner.divergent_part() }
    }

    fn __repr__(&self) -> String {
        format!("Sequence({:?})", self.text)
    }
}

/// A circle element in the element grammar over a sequence.
#[pyclass(frozen, from_py_object, module = "torsionlab")]
#[derive(Clone)]
struct Element {
    inner: DigitSpec,
}

#[pymethods]
impl Element {
    #[new]
    fn new(sequence: &Sequence, element: &str) -> PyResult<Self> {
        Ok(Element { inner: grammar::parse_element(element, &sequence.inner).map_err(value_err)? })
    }

    /// Digits `c_1, ..., c_n`.
    fn digits(&self, n: u64) -> Vec<u64> {
        self.inner.digits_upto(n)
    }

    fn supp(&self) -> PyResult<Set> {
        Ok(Set { inner: self.inner.supports().map_err(value_err)?.supp })
    }

    fn supp_b(&self) -> PyResult<Set> {
        Ok(Set { inner: self.inner.supports().map_err(value_err)?.supp_b })
    }

    /// The exact value as a ``Fraction`` when it is known.
    fn value<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner.value().map(|v| fraction(py, &v)).transpose()
    }

    /// `‖u_n x‖` for `0 <= n <= n_max` as ``(lo, hi)`` fraction pairs; the
    /// two agree for exact entries.
    #[pyo3(signature = (n_max, tail_digits = 64, mode = None))]
    fn norms<'py>(
        &self,
        py: Python<'py>,
        n_max: u64,
        tail_digits: u32,
        mode: Option<&str>,
    ) -> PyResult<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
        let seq = self.inner.seq();
        let trace = match mode {
            None => oracle::norm_trace(&self.inner, seq.into(), n_max, tail_digits),
            Some("exact-modular") => oracle::norm_trace_with(&self.inner, seq.into(), n_max, TraceMode::ExactModular),
            Some("exact-big") => oracle::norm_trace_with(&self.inner, seq.into(), n_max, TraceMode::ExactBig),
            Some("interval") => oracle::norm_trace_with(&self.inner, seq.into(), n_max, TraceMode::IntervalTail(tail_digits)),
            Some(other) => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        }
        .map_err(oracle_err)?;
        trace
            .entries
            .iter()
            .map(|e| match e {
                NormEntry::Exact(v) => Ok((fraction(py, v)?, fraction(py, v)?)),
                NormEntry::Enclosure(i) => Ok((fraction(py, &i.lo)?, fraction(py, &i.hi)?)),
            })
            .collect()
    }

    fn __str__(&self) -> String {
        ElementSyntax::of(&self.inner).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.__str__())
    }
}

/// An ideal in the ideal grammar; ``bu`` and ``du`` refer to the sequence.
#[pyclass(frozen, from_py_object, module = "torsionlab")]
#[derive(Clone)]
struct Ideal {
    inner: IdealSpec,
}

#[pymethods]
impl Ideal {
    #[new]
    fn new(sequence: &Sequence, ideal: &str) -> PyResult<Self> {
        Ok(Ideal { inner: grammar::parse_ideal(ideal, &sequence.inner).map_err(value_err)? })
    }

    /// `True`, `False` or `None` when undecided.
    fn contains(&self, set: &Set) -> Option<bool> {
        tri(self.inner.member(&set.inner))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ideal({:?})", self.inner.to_string())
    }
}

/// The classifier's decision with its rule trace.
#[pyclass(frozen, module = "torsionlab")]
struct Verdict {
    inner: CoreVerdict,
}

#[pymethods]
impl Verdict {
    /// ``"Member"``, ``"NonMember"`` or ``"Unknown"``.
    #[getter]
    fn decision(&self) -> String {
        self.inner.decision.to_string()
    }

    #[getter]
    fn rule(&self) -> Option<String> {
        self.inner.decided_by.map(|r| r.name().to_string())
    }

    /// One line per rule, `rule: outcome (anchor)`, with indented conditions.
    #[getter]
    fn trace(&self) -> String {
        self.inner.trace_text()
    }

    #[getter]
    fn witnesses(&self) -> Vec<(String, String)> {
        self.inner.witnesses.iter().map(|(l, s)| (l.clone(), s.to_string())).collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        match self.inner.decided_by {
            Some(r) => format!("<Verdict {} by {}>", self.inner.decision, r.name()),
            None => format!("<Verdict {}>", self.inner.decision),
        }
    }
}

/// Runs the rule-based classifier; `audit` is an optional set to probe.
#[pyfunction]
#[pyo3(signature = (element, ideal, audit = None))]
fn classify(element: &Element, ideal: &Ideal, audit: Option<&Set>) -> Verdict {
    Verdict { inner: classify_with_audit(&element.inner, &ideal.inner, audit.map(|s| &s.inner)) }
}

/// Empirical convergence reports, one dict per epsilon.
#[pyfunction]
#[pyo3(signature = (element, ideal, n_max = 4096, epsilons = None, tail_digits = 64))]
fn scan<'py>(
    py: Python<'py>,
    element: &Element,
    ideal: &Ideal,
    n_max: u64,
    epsilons: Option<Vec<String>>,
    tail_digits: u32,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let eps = parse_epsilons(epsilons)?.unwrap_or_else(|| vec![Rational::new(1.into(), 4.into()), Rational::new(1.into(), 8.into())]);
    let reports = oracle::empirical_convergence(
        &element.inner,
        element.inner.seq().into(),
        &ideal.inner,
        &eps,
        n_max,
        tail_digits,
        &oracle::default_checkpoints(n_max),
        &Thresholds::default(),
    )
    .map_err(oracle_err)?;
    reports
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("epsilon", fraction(py, &r.epsilon)?)?;
            d.set_item("verdict", r.verdict.to_string())?;
            let cps: Vec<(u64, u64, String)> = r.checkpoints.iter().map(|c| (c.n, c.count, c.ratio.to_string())).collect();
            d.set_item("checkpoints", cps)?;
            Ok(d)
        })
        .collect()
}

/// An element with support inside `set` that is not torsion for `ideal`.
#[pyfunction]
fn witness(sequence: &Sequence, set: &Set, ideal: &Ideal) -> PyResult<Element> {
    Ok(Element { inner: witness_nonmember(&set.inner, &sequence.inner, &ideal.inner).map_err(value_err)? })
}

/// An experiment file, with its sequence, element and ideal.
#[pyclass(frozen, module = "torsionlab")]
struct Experiment {
    inner: CoreExperiment,
}

#[pymethods]
impl Experiment {
    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Experiment {
            inner: CoreExperiment::load(&path, torsionlab_core::experiment::DEFAULT_HORIZON).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(Experiment { inner: CoreExperiment::from_toml(text, "experiment").map_err(value_err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn sequence(&self) -> Sequence {
        Sequence { inner: self.inner.seq.clone(), text: self.inner.ratio_text.clone() }
    }

    #[getter]
    fn element(&self) -> Element {
        Element { inner: self.inner.element.clone() }
    }

    #[getter]
    fn ideal(&self) -> Ideal {
        Ideal { inner: self.inner.ideal.clone() }
    }

    #[getter]
    fn n_max(&self) -> u64 {
        self.inner.oracle.n_max
    }

    fn classify(&self) -> Verdict {
        Verdict { inner: classify_with_audit(&self.inner.element, &self.inner.ideal, None) }
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml()
    }
}

/// The input grammars as text.
#[pyfunction]
fn grammar_text() -> &'static str {
    grammar::GRAMMAR
}

#[pymodule]
fn torsionlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Set>()?;
    m.add_class::<Sequence>()?;
    m.add_class::<Element>()?;
    m.add_class::<Ideal>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<Experiment>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(grammar_text, m)?)?;
    Ok(())
}
