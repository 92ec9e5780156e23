//! Brute-force computation of `‖u_n x‖` and empirical I-convergence checks.
//!
//! Rational inputs are scanned exactly by tracking `u_n p mod q`.  Digit
//! inputs get rigorous enclosures of `{u_n x}` from the next `K` digits:
//! with `D = b_{n+1} ⋯ b_{n+K}` and `N` the forward Horner value of
//! `c_{n+1}, …, c_{n+K}`, the fractional part lies in `[N/D, (N+1)/D]`.
//! Fewer than `K` digits are read once `D` exceeds `2^max(2K, 100)`.

use std::fmt;
use std::io::Write;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::digits::{DigitError, DigitKind, DigitSpec};
use crate::exact_arith::{interval_norm, rat, rat_big, ratio_power_decimal, ratio_power_lt, IntervalValue, Rational};
use crate::ideals::{BaseIdeal, IdealSpec};
use crate::sequences::{ArithmeticSequence, GeneralSequence};
use crate::sets::SetSpec;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enclosure of ||u_{n} x|| has width {width} and straddles epsilon {epsilon}; retry with more tail digits")]
    WidthExceeded { n: u64, width: String, epsilon: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Digit(#[from] DigitError),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug)]
pub enum SequenceRef<'a> {
    Arithmetic(&'a ArithmeticSequence),
    General(&'a GeneralSequence),
}

impl<'a> From<&'a ArithmeticSequence> for SequenceRef<'a> {
    fn from(s: &'a ArithmeticSequence) -> Self {
        SequenceRef::Arithmetic(s)
    }
}

impl<'a> From<&'a GeneralSequence> for SequenceRef<'a> {
    fn from(s: &'a GeneralSequence) -> Self {
        SequenceRef::General(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMode {
    ExactModular,
    ExactBig,
    IntervalTail(u32),
}

impl fmt::Display for TraceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceMode::ExactModular => write!(f, "exact-modular"),
            TraceMode::ExactBig => write!(f, "exact-big"),
            TraceMode::IntervalTail(k) => write!(f, "interval-tail-{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NormEntry {
    Exact(Rational),
    Enclosure(IntervalValue),
}

impl NormEntry {
    pub fn lo(&self) -> &Rational {
        match self {
            NormEntry::Exact(v) => v,
            NormEntry::Enclosure(i) => &i.lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            NormEntry::Exact(v) => v,
            NormEntry::Enclosure(i) => &i.hi,
        }
    }

    /// `‖u_n x‖ >= ε`, or `None` when the enclosure straddles `ε`.
    pub fn at_least(&self, eps: &Rational) -> Option<bool> {
        if self.lo() >= eps {
            Some(true)
        } else if self.hi() < eps {
            Some(false)
        } else {
            None
        }
    }
}

/// `‖u_n x‖` for `n = 0..=N`, indexed by `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormTrace {
    pub mode: TraceMode,
    pub entries: Vec<NormEntry>,
}

impl NormTrace {
    pub fn horizon(&self) -> u64 {
        self.entries.len() as u64 - 1
    }
}

/// Picks the mode from the inputs: exact for rationals, enclosures otherwise.
pub fn norm_trace(d: &DigitSpec, seq: SequenceRef, n_max: u64, k: u32) -> Result<NormTrace, OracleError> {
    let mode = match d.kind() {
        DigitKind::ExactRational(_) => TraceMode::ExactModular,
        _ => TraceMode::IntervalTail(k),
    };
    norm_trace_with(d, seq, n_max, mode)
}

pub fn norm_trace_with(d: &DigitSpec, seq: SequenceRef, n_max: u64, mode: TraceMode) -> Result<NormTrace, OracleError> {
    let entries = match (mode, seq) {
        (TraceMode::ExactModular, SequenceRef::Arithmetic(s)) => modular_arithmetic(exact_value(d)?, s, n_max),
        (TraceMode::ExactModular | TraceMode::ExactBig, SequenceRef::General(g)) => modular_general(exact_value(d)?, g, n_max),
        (TraceMode::ExactBig, SequenceRef::Arithmetic(s)) => big_arithmetic(exact_value(d)?, s, n_max),
        (TraceMode::IntervalTail(k), SequenceRef::Arithmetic(s)) => interval_tail(d, s, n_max, k)?,
        (TraceMode::IntervalTail(_), SequenceRef::General(_)) => {
            return Err(OracleError::Precondition("general sequences need an exact rational x".into()))
        }
    };
    Ok(NormTrace { mode, entries })
}

fn exact_value(d: &DigitSpec) -> Result<&Rational, OracleError> {
    match d.kind() {
        DigitKind::ExactRational(x) => Ok(x),
        _ => Err(OracleError::Precondition("exact modes need x given as a rational".into())),
    }
}

fn split(x: &Rational) -> (BigUint, BigUint) {
    let q = x.denom().to_biguint().expect("positive denominator");
    let p = x.numer().to_biguint().expect("x >= 0") % &q;
    (p, q)
}

fn norm_from_residue(r: u64, q: u64) -> Rational {
    rat(r.min(q - r) as i64, q as i64)
}

fn norm_from_big_residue(r: &BigUint, q: &BigUint) -> Rational {
    let twice: BigUint = r << 1u32;
    let num = if &twice <= q { r.clone() } else { q - r };
    rat_big(&num, q)
}

fn modular_arithmetic(x: &Rational, seq: &ArithmeticSequence, n_max: u64) -> Vec<NormEntry> {
    let (p, q) = split(x);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    match (p.to_u64(), q.to_u64()) {
        (Some(p), Some(q)) if q < i64::MAX as u64 => {
            let mut r = p;
            out.push(NormEntry::Exact(norm_from_residue(r, q)));
            for n in 1..=n_max {
                r = ((r as u128 * seq.ratio(n) as u128) % q as u128) as u64;
                out.push(NormEntry::Exact(norm_from_residue(r, q)));
            }
        }
        _ => {
            let mut r = p;
            out.push(NormEntry::Exact(norm_from_big_residue(&r, &q)));
            for n in 1..=n_max {
                r = (r * seq.ratio(n)) % &q;
                out.push(NormEntry::Exact(norm_from_big_residue(&r, &q)));
            }
        }
    }
    out
}

fn big_arithmetic(x: &Rational, seq: &ArithmeticSequence, n_max: u64) -> Vec<NormEntry> {
    let (p, q) = split(x);
    let mut u = BigUint::one();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        if n > 0 {
            u *= seq.ratio(n);
        }
        let r = (&u * &p).mod_floor(&q);
        out.push(NormEntry::Exact(norm_from_big_residue(&r, &q)));
    }
    out
}

fn modular_general(x: &Rational, g: &GeneralSequence, n_max: u64) -> Vec<NormEntry> {
    let (p, q) = split(x);
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let r = (g.term(n) % &q) * &p % &q;
            NormEntry::Exact(norm_from_big_residue(&r, &q))
        })
        .collect()
}

fn interval_tail(d: &DigitSpec, seq: &ArithmeticSequence, n_max: u64, k: u32) -> Result<Vec<NormEntry>, OracleError> {
    if k == 0 {
        return Err(OracleError::Precondition("at least one tail digit is needed".into()));
    }
    // reading on once D exceeds 2^(2K) only narrows an already tiny enclosure
    let precision_bits = (2 * k as u64).max(100);
    let top = n_max + k as u64;
    let digits = d.digits_upto(top);
    let ratios: Vec<u64> = (1..=top).map(|i| seq.ratio(i)).collect();
    // beyond the last nonzero digit the tail is exactly zero
    let last_nonzero = match d.kind() {
        DigitKind::FiniteDigits(pairs) => Some(pairs.last().map_or(0, |&(n, _)| n)),
        _ => None,
    };
    (0..n_max as usize + 1)
        .into_par_iter()
        .with_min_len(64)
        .map(|n| {
            let n = n as u64;
            let mut num = BigUint::zero();
            let mut den = BigUint::one();
            let mut last = n;
            for i in n + 1..=n + k as u64 {
                let b = ratios[i as usize - 1];
                num = num * b + digits[i as usize - 1];
                den *= b;
                last = i;
                if den.bits() > precision_bits {
                    break;
                }
            }
            let exact = last_nonzero.is_some_and(|l| l <= last);
            let lo = rat_big(&num, &den);
            let frac = if exact {
                IntervalValue::point(lo)
            } else {
                let hi = rat_big(&(num + 1u32), &den);
                IntervalValue::new(lo, hi).expect("lo < hi")
            };
            let enc = interval_norm(&frac).map_err(|e| OracleError::Precondition(e.to_string()))?;
            Ok(if enc.lo == enc.hi { NormEntry::Exact(enc.lo) } else { NormEntry::Enclosure(enc) })
        })
        .collect()
}

/// `{n <= N : ‖u_n x‖ >= ε}`, decided rigorously.
pub fn exceptional_set(trace: &NormTrace, eps: &Rational) -> Result<SetSpec, OracleError> {
    Ok(SetSpec::finite(
        exceptional_flags(trace, eps)?.into_iter().enumerate().filter(|(_, b)| *b).map(|(n, _)| n as u64),
    ))
}

fn exceptional_flags(trace: &NormTrace, eps: &Rational) -> Result<Vec<bool>, OracleError> {
    trace
        .entries
        .iter()
        .enumerate()
        .map(|(n, e)| {
            e.at_least(eps).ok_or_else(|| OracleError::WidthExceeded {
                n: n as u64,
                width: (e.hi() - e.lo()).to_string(),
                epsilon: eps.to_string(),
            })
        })
        .collect()
}

/// `num / n^α` with `α = p/q`, compared exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRatio {
    pub num: u64,
    pub n: u64,
    pub p: u64,
    pub q: u64,
}

impl DensityRatio {
    pub fn lt(&self, t: &Rational) -> bool {
        ratio_power_lt(self.num, self.n, self.p, self.q, t)
    }

    pub fn gt(&self, t: &Rational) -> bool {
        !self.lt(t) && !self.eq_value(t)
    }

    fn eq_value(&self, t: &Rational) -> bool {
        self.as_rational().is_some_and(|r| &r == t)
    }

    /// Exact value when `α = 1`.
    pub fn as_rational(&self) -> Option<Rational> {
        (self.p == self.q).then(|| rat(self.num as i64, self.n.max(1) as i64))
    }

    fn le_other(&self, other: &DensityRatio) -> bool {
        // same α: compare count_a^q n_b^p <= count_b^q n_a^p
        let lhs = num_traits::pow(BigUint::from(self.num), self.q as usize)
            * num_traits::pow(BigUint::from(other.n), self.p as usize);
        let rhs = num_traits::pow(BigUint::from(other.num), self.q as usize)
            * num_traits::pow(BigUint::from(self.n), self.p as usize);
        lhs <= rhs
    }
}

impl fmt::Display for DensityRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", ratio_power_decimal(self.num, self.n, self.p, self.q, 9)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmpiricalVerdict {
    ConsistentWithConvergence,
    InconsistentWithConvergence,
    Inconclusive,
}

impl fmt::Display for EmpiricalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmpiricalVerdict::ConsistentWithConvergence => "Consistent",
            EmpiricalVerdict::InconsistentWithConvergence => "Inconsistent",
            EmpiricalVerdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub n: u64,
    pub count: u64,
    pub ratio: DensityRatio,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub epsilon: Rational,
    pub checkpoints: Vec<Checkpoint>,
    pub verdict: EmpiricalVerdict,
}

/// Heuristic cut-offs for the empirical verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds {
    pub consistent: Rational,
    pub inconsistent: Rational,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { consistent: rat(1, 20), inconsistent: rat(1, 5) }
    }
}

/// Largest tail length tried when enclosures straddle an ε.
const MAX_TAIL_DIGITS: u32 = 512;

/// A trace precise enough to classify every index against every ε.
pub fn trace_for_epsilons(
    d: &DigitSpec,
    seq: SequenceRef,
    epsilons: &[Rational],
    n_max: u64,
    k: u32,
) -> Result<NormTrace, OracleError> {
    let mut k = k.max(1);
    loop {
        let trace = norm_trace(d, seq, n_max, k)?;
        match epsilons.iter().try_for_each(|e| exceptional_flags(&trace, e).map(|_| ())) {
            Ok(()) => return Ok(trace),
            Err(OracleError::WidthExceeded { .. }) if k < MAX_TAIL_DIGITS => k *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Default checkpoints `N/8, N/4, N/2, N`.
pub fn default_checkpoints(n_max: u64) -> Vec<u64> {
    [8, 4, 2, 1].iter().map(|q| (n_max / q).max(1)).collect()
}

/// Exceptional-set ratios at checkpoints.  `count` is always
/// `|E ∩ [1, N']|`.  For `I_α` the ratio is `count / N'^α`; for `Fin` it is
/// `max(E ∩ [1, N']) / N'`, the relative position of the last exception,
/// which drains to zero exactly when the exceptions stop.
#[allow(clippy::too_many_arguments)]
pub fn empirical_convergence(
    d: &DigitSpec,
    seq: SequenceRef,
    ideal: &IdealSpec,
    epsilons: &[Rational],
    n_max: u64,
    k: u32,
    checkpoints: &[u64],
    thresholds: &Thresholds,
) -> Result<Vec<ConvergenceReport>, OracleError> {
    let trace = trace_for_epsilons(d, seq, epsilons, n_max, k)?;
    convergence_reports(&trace, ideal, epsilons, checkpoints, thresholds)
}

/// The checkpoint statistics of [`empirical_convergence`] for a trace that
/// is already computed.
pub fn convergence_reports(
    trace: &NormTrace,
    ideal: &IdealSpec,
    epsilons: &[Rational],
    checkpoints: &[u64],
    thresholds: &Thresholds,
) -> Result<Vec<ConvergenceReport>, OracleError> {
    let nf = ideal.normal_form();
    if !nf.principal.is_structurally_empty() || nf.base == BaseIdeal::All {
        return Err(OracleError::Precondition(format!("empirical densities need fin or density ideals, got {ideal}")));
    }
    let n_max = trace.horizon();
    epsilons
        .iter()
        .map(|eps| {
            let flags = exceptional_flags(trace, eps)?;
            let mut prefix = vec![0u64; flags.len()];
            let mut acc = 0;
            for (n, &f) in flags.iter().enumerate() {
                if n >= 1 && f {
                    acc += 1;
                }
                prefix[n] = acc;
            }
            let cps: Vec<Checkpoint> = checkpoints
                .iter()
                .filter(|&&c| c >= 1 && c <= n_max)
                .map(|&c| match &nf.base {
                    BaseIdeal::Fin => {
                        let last = (1..=c).rev().find(|&m| flags[m as usize]).unwrap_or(0);
                        Checkpoint { n: c, count: prefix[c as usize], ratio: DensityRatio { num: last, n: c, p: 1, q: 1 } }
                    }
                    BaseIdeal::Density(alpha) => {
                        let count = prefix[c as usize];
                        let (p, q) = (alpha.numer().to_u64().unwrap_or(1), alpha.denom().to_u64().unwrap_or(1));
                        Checkpoint { n: c, count, ratio: DensityRatio { num: count, n: c, p, q } }
                    }
                    BaseIdeal::All => unreachable!("rejected above"),
                })
                .collect();
            let verdict = empirical_verdict(&cps, thresholds);
            Ok(ConvergenceReport { epsilon: eps.clone(), checkpoints: cps, verdict })
        })
        .collect()
}

/// Consistent when the last ratio is below the consistent cut-off and no
/// larger than the first; inconsistent when every ratio exceeds the
/// inconsistent cut-off.
fn empirical_verdict(cps: &[Checkpoint], t: &Thresholds) -> EmpiricalVerdict {
    let (first, last) = match (cps.first(), cps.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return EmpiricalVerdict::Inconclusive,
    };
    if last.ratio.lt(&t.consistent) && last.ratio.le_other(&first.ratio) {
        EmpiricalVerdict::ConsistentWithConvergence
    } else if cps.iter().all(|c| c.ratio.gt(&t.inconsistent)) {
        EmpiricalVerdict::InconsistentWithConvergence
    } else {
        EmpiricalVerdict::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Decreasing,
    Flat,
    Increasing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsequenceReport {
    /// Upper bound for `sup ‖u_n x‖` over `B ∩ [N/2, N]`.
    pub sup: Rational,
    /// The same over `B ∩ [N/4, N/2)`.
    pub previous_sup: Rational,
    pub trend: Trend,
}

pub fn limit_along_subsequence(
    d: &DigitSpec,
    seq: SequenceRef,
    b: &SetSpec,
    n_max: u64,
    k: u32,
) -> Result<SubsequenceReport, OracleError> {
    let trace = norm_trace(d, seq, n_max, k)?;
    let sup_on = |lo: u64, hi: u64| {
        b.enumerate(hi)
            .into_iter()
            .filter(|&n| n >= lo)
            .map(|n| trace.entries[n as usize].hi().clone())
            .max()
            .unwrap_or_else(Rational::zero)
    };
    let sup = sup_on(n_max / 2, n_max);
    let previous_sup = sup_on(n_max / 4, (n_max / 2).saturating_sub(1));
    let trend = match sup.cmp(&previous_sup) {
        std::cmp::Ordering::Less => Trend::Decreasing,
        std::cmp::Ordering::Equal => Trend::Flat,
        std::cmp::Ordering::Greater => Trend::Increasing,
    };
    Ok(SubsequenceReport { sup, previous_sup, trend })
}

/// Rows `n,norm_num,norm_den,lo_num,lo_den,hi_num,hi_den,mode`; exact rows
/// leave the enclosure columns equal to the value, enclosure rows leave the
/// norm columns empty.
pub fn write_norm_csv<W: Write>(trace: &NormTrace, w: W) -> Result<(), OracleError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "norm_num", "norm_den", "lo_num", "lo_den", "hi_num", "hi_den", "mode"])?;
    let mode = trace.mode.to_string();
    for (n, e) in trace.entries.iter().enumerate() {
        let (norm_num, norm_den) = match e {
            NormEntry::Exact(v) => (v.numer().to_string(), v.denom().to_string()),
            NormEntry::Enclosure(_) => (String::new(), String::new()),
        };
        out.write_record([
            n.to_string(),
            norm_num,
            norm_den,
            e.lo().numer().to_string(),
            e.lo().denom().to_string(),
            e.hi().numer().to_string(),
            e.hi().denom().to_string(),
            mode.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Rows `N,epsilon,count,ratio`.
pub fn write_density_csv<W: Write>(reports: &[ConvergenceReport], w: W) -> Result<(), OracleError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["N", "epsilon", "count", "ratio"])?;
    for r in reports {
        for c in &r.checkpoints {
            out.write_record([c.n.to_string(), r.epsilon.to_string(), c.count.to_string(), c.ratio.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}
