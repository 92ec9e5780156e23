//! Canonical digit expansions `x = Σ_{n>=1} c_n / u_n` with `0 <= c_n < b_n`
//! and `c_n < b_n - 1` infinitely often.
//!
//! Elements come in three shapes: an exact rational, a finite list of
//! nonzero digits, or digit rules attached to index sets.  All three are
//! reduced to a *profile*, a list of disjoint [`DigitPart`]s, whenever the
//! digit stream is eventually structured.  Intersecting the profile with the
//! ratio partition of the sequence yields [`Atom`]s: index sets on which both
//! the digit law and the ratio law are fixed.  Supports and limits of
//! `c_n / b_n` are read off the atoms.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_arith::{rat, rat_big, IntervalValue, Rational};
use crate::logic::TriBool;
use crate::sequences::{ArithmeticSequence, DivergentRule, PieceKind, SeqError};
use crate::sets::SetSpec;

/// Steps spent looking for a cycle in the remainders of a rational.
const CYCLE_BUDGET: u64 = 100_000;
/// Largest explicit range scanned when checking digit bounds.
const SCAN_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigitError {
    #[error("value {0} is outside [0, 1)")]
    OutOfRange(String),
    #[error("not a canonical expansion: {0}")]
    NotCanonical(String),
    #[error("cannot decide: {0}")]
    Undecided(String),
    #[error("{0}")]
    Precondition(String),
    #[error("identity {identity} fails at n={n}, k={k}: {lhs} vs {rhs}")]
    ViolationFound { identity: &'static str, n: u64, k: u64, lhs: String, rhs: String },
    #[error(transparent)]
    Sequence(#[from] SeqError),
}

/// Digit laws; every value is clipped into `[0, b_n - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DigitRule {
    Const(u64),
    /// `b_n - 1`
    Top,
    /// `floor(b_n / 3)`
    ThirdFloor,
    /// `a*n + c`
    Affine { a: i64, c: i64 },
}

impl DigitRule {
    pub fn at(&self, n: u64, b: u64) -> u64 {
        match self {
            DigitRule::Const(v) => *v,
            DigitRule::Top => b - 1,
            DigitRule::ThirdFloor => b / 3,
            DigitRule::Affine { a, c } => {
                let v = *a as i128 * n as i128 + *c as i128;
                v.clamp(0, b as i128 - 1) as u64
            }
        }
    }
}

impl fmt::Display for DigitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigitRule::Const(v) => write!(f, "{v}"),
            DigitRule::Top => write!(f, "top"),
            DigitRule::ThirdFloor => write!(f, "third"),
            DigitRule::Affine { a, c } => write!(f, "affine {a} {c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitPart {
    pub set: SetSpec,
    pub rule: DigitRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitKind {
    ExactRational(Rational),
    /// Sorted `(n, c_n)` pairs with `c_n != 0`.
    FiniteDigits(Vec<(u64, u64)>),
    /// Parts as written by the user; the first matching part wins.
    RuleDigits(Vec<DigitPart>),
}

/// Index set on which the digit law and the ratio law are both fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub set: SetSpec,
    pub piece: PieceKind,
    pub digit: DigitRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPair {
    pub supp: SetSpec,
    pub supp_b: SetSpec,
}

#[derive(Clone, Debug)]
pub struct DigitSpec {
    kind: DigitKind,
    seq: ArithmeticSequence,
    /// Disjoint parts covering the nonzero digits; `None` when the digit
    /// stream has no finite presentation in the rule grammar.
    profile: Option<Vec<DigitPart>>,
}

fn ceil_div(a: i128, b: i128) -> i128 {
    Integer::div_ceil(&a, &b)
}

/// `{ n >= lo : d*n >= e }` inside `N+`, as a threshold set.
fn linear_set(d: i128, e: i128, lo: u64) -> SetSpec {
    let lo = lo.max(1) as i128;
    let clip = |t: i128| t.clamp(0, u64::MAX as i128) as u64;
    match d.cmp(&0) {
        std::cmp::Ordering::Greater => SetSpec::from(clip(ceil_div(e, d).max(lo))),
        std::cmp::Ordering::Equal => {
            if e <= 0 {
                SetSpec::from(clip(lo))
            } else {
                SetSpec::empty()
            }
        }
        std::cmp::Ordering::Less => {
            let hi = Integer::div_floor(&(-e), &(-d));
            if hi < lo {
                SetSpec::empty()
            } else {
                SetSpec::range(clip(lo), clip(hi))
            }
        }
    }
}

/// Smallest `n >= 1` with `r(n) >= v`; ratios on divergent pieces are
/// nondecreasing.
pub(crate) fn div_threshold(r: &DivergentRule, v: u64) -> u64 {
    match r {
        DivergentRule::Affine { a, c } => {
            if v <= 2 {
                1
            } else {
                ceil_div(v as i128 - *c as i128, *a as i128).max(1).min(u64::MAX as i128) as u64
            }
        }
        DivergentRule::Power(b) => {
            let mut n = 1u64;
            let mut p = *b as u128;
            while p < v as u128 {
                p *= *b as u128;
                n += 1;
            }
            n
        }
    }
}

impl Atom {
    /// Indices of the atom where the digit is nonzero.
    pub fn nonzero_set(&self) -> SetSpec {
        let sub = match (&self.digit, &self.piece) {
            (DigitRule::Const(0), _) => SetSpec::empty(),
            (DigitRule::Const(_), _) | (DigitRule::Top, _) => return self.set.clone(),
            (DigitRule::ThirdFloor, PieceKind::Const(b)) => {
                return if *b >= 3 { self.set.clone() } else { SetSpec::empty() }
            }
            (DigitRule::ThirdFloor, PieceKind::Divergent(r)) => SetSpec::from(div_threshold(r, 3)),
            (DigitRule::Affine { a, c }, _) => linear_set(*a as i128, 1 - *c as i128, 1),
        };
        SetSpec::intersection(vec![self.set.clone(), sub]).normalize()
    }

    /// Indices of the atom carrying the top digit `b_n - 1`.
    pub fn top_set(&self) -> SetSpec {
        let sub = match (&self.digit, &self.piece) {
            (DigitRule::Top, _) => return self.set.clone(),
            (DigitRule::ThirdFloor, _) => SetSpec::empty(),
            (DigitRule::Const(v), PieceKind::Const(b)) => {
                return if *v + 1 == *b { self.set.clone() } else { SetSpec::empty() }
            }
            (DigitRule::Const(v), PieceKind::Divergent(r)) => {
                let lo = div_threshold(r, v + 1);
                let hi = div_threshold(r, v + 2);
                if hi > lo && r.at(lo) == Some(v + 1) {
                    SetSpec::range(lo, hi - 1)
                } else {
                    SetSpec::empty()
                }
            }
            (DigitRule::Affine { a, c }, PieceKind::Const(b)) => {
                linear_set(*a as i128, *b as i128 - 1 - *c as i128, 1)
            }
            (DigitRule::Affine { a, c }, PieceKind::Divergent(DivergentRule::Affine { a: a2, c: c2 })) => {
                // below the clipping point b_n = 2; above it b_n = a2*n + c2
                let clip_end = div_threshold(&DivergentRule::Affine { a: *a2, c: *c2 }, 3);
                let low: Vec<u64> = (1..clip_end.min(SCAN_CAP))
                    .filter(|&n| *a as i128 * n as i128 + *c as i128 >= 1 && (*a2 as i128 * n as i128 + *c2 as i128) <= 2)
                    .collect();
                let high = linear_set(*a as i128 - *a2 as i128, *c2 as i128 - 1 - *c as i128, 1);
                let high = SetSpec::intersection(vec![high, SetSpec::difference(SetSpec::positive(), SetSpec::finite(low.clone()))]);
                SetSpec::union(vec![SetSpec::finite(low), high])
            }
            (DigitRule::Affine { a, c }, PieceKind::Divergent(r @ DivergentRule::Power(_))) => SetSpec::finite(
                (1..=128u64).filter(|&n| r.at(n).is_some_and(|b| *a as i128 * n as i128 + *c as i128 >= b as i128 - 1)),
            ),
        };
        SetSpec::intersection(vec![self.set.clone(), sub]).normalize()
    }

    /// `lim c_n / b_n` along the atom (assumed infinite).
    pub fn limit_cb(&self) -> Rational {
        self.limits().0
    }

    /// `lim (c_n + 1) / b_n` along the atom (assumed infinite).
    pub fn limit_c1b(&self) -> Rational {
        self.limits().1
    }

    fn limits(&self) -> (Rational, Rational) {
        let one = Rational::one;
        match &self.piece {
            PieceKind::Const(b) => {
                let v = self.eventual_const_digit(*b);
                (rat(v as i64, *b as i64), rat(v as i64 + 1, *b as i64))
            }
            PieceKind::Divergent(r) => match (&self.digit, r) {
                (DigitRule::Const(_), _) => (Rational::zero(), Rational::zero()),
                (DigitRule::Top, _) => (one(), one()),
                (DigitRule::ThirdFloor, _) => (rat(1, 3), rat(1, 3)),
                (DigitRule::Affine { a, .. }, _) if *a <= 0 => (Rational::zero(), Rational::zero()),
                (DigitRule::Affine { a, .. }, DivergentRule::Affine { a: a2, .. }) => {
                    if *a as u64 >= *a2 {
                        (one(), one())
                    } else {
                        let l = rat(*a, *a2 as i64);
                        (l.clone(), l)
                    }
                }
                (DigitRule::Affine { .. }, DivergentRule::Power(_)) => (Rational::zero(), Rational::zero()),
            },
        }
    }

    /// Digit value taken on all but finitely many indices of a constant piece.
    pub fn eventual_const_digit(&self, b: u64) -> u64 {
        match &self.digit {
            DigitRule::Const(v) => *v,
            DigitRule::Top => b - 1,
            DigitRule::ThirdFloor => b / 3,
            DigitRule::Affine { a, c } => match a.cmp(&0) {
                std::cmp::Ordering::Greater => b - 1,
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => (*c).clamp(0, b as i64 - 1) as u64,
            },
        }
    }
}

impl DigitSpec {
    pub fn kind(&self) -> &DigitKind {
        &self.kind
    }

    pub fn seq(&self) -> &ArithmeticSequence {
        &self.seq
    }

    pub fn profile(&self) -> Option<&[DigitPart]> {
        self.profile.as_deref()
    }

    pub fn rational(x: Rational, seq: &ArithmeticSequence) -> Result<Self, DigitError> {
        if x < Rational::zero() || x >= Rational::one() {
            return Err(DigitError::OutOfRange(x.to_string()));
        }
        let profile = rational_profile(&x, seq);
        Ok(DigitSpec { kind: DigitKind::ExactRational(x), seq: seq.clone(), profile })
    }

    pub fn finite(pairs: Vec<(u64, u64)>, seq: &ArithmeticSequence) -> Result<Self, DigitError> {
        let mut pairs: Vec<(u64, u64)> = pairs.into_iter().filter(|&(_, c)| c != 0).collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DigitError::NotCanonical(format!("index {} listed twice", w[0].0)));
            }
        }
        for &(n, c) in &pairs {
            if n == 0 {
                return Err(DigitError::NotCanonical("digits are indexed from 1".into()));
            }
            let b = seq.try_ratio(n)?;
            if c >= b {
                return Err(DigitError::NotCanonical(format!("c_{n} = {c} is not below b_{n} = {b}")));
            }
        }
        let profile = pairs
            .iter()
            .map(|&(n, c)| DigitPart { set: SetSpec::finite([n]), rule: DigitRule::Const(c) })
            .collect();
        Ok(DigitSpec { kind: DigitKind::FiniteDigits(pairs), seq: seq.clone(), profile: Some(profile) })
    }

    /// Digit rules on index sets; earlier parts take precedence.
    pub fn rules(parts: Vec<(SetSpec, DigitRule)>, seq: &ArithmeticSequence) -> Result<Self, DigitError> {
        let mut taken: Vec<SetSpec> = Vec::new();
        let mut disjoint = Vec::new();
        for (s, rule) in &parts {
            let eff = SetSpec::difference(
                SetSpec::intersection(vec![s.clone(), SetSpec::positive()]),
                SetSpec::union(taken.clone()),
            )
            .normalize();
            taken.push(s.clone());
            if !eff.is_structurally_empty() && rule != &DigitRule::Const(0) {
                disjoint.push(DigitPart { set: eff, rule: rule.clone() });
            }
        }
        let user = parts.into_iter().map(|(set, rule)| DigitPart { set, rule }).collect();
        let d = DigitSpec { kind: DigitKind::RuleDigits(user), seq: seq.clone(), profile: Some(disjoint) };
        d.check_canonical()?;
        Ok(d)
    }

    fn check_canonical(&self) -> Result<(), DigitError> {
        for atom in self.atoms()? {
            if let DigitRule::Const(v) = atom.digit {
                match &atom.piece {
                    PieceKind::Const(b) => {
                        if v >= *b && !atom.set.is_empty().is_yes() {
                            return Err(DigitError::NotCanonical(format!(
                                "digit {v} is not below the ratio {b} on {}",
                                atom.set
                            )));
                        }
                    }
                    PieceKind::Divergent(r) => {
                        let t = div_threshold(r, v + 1);
                        if t > SCAN_CAP {
                            return Err(DigitError::Undecided(format!("digit bound for value {v} needs a scan to {t}")));
                        }
                        if let Some(n) = (1..t).find(|&n| atom.set.contains(n)) {
                            return Err(DigitError::NotCanonical(format!(
                                "digit {v} is not below b_{n} = {}",
                                r.at(n).unwrap_or(0)
                            )));
                        }
                    }
                }
            }
        }
        let supp_b = self.supports()?.supp_b;
        match supp_b.complement().is_infinite() {
            TriBool::Yes => Ok(()),
            TriBool::No => Err(DigitError::NotCanonical(format!(
                "top digits b_n - 1 occur on a cofinite set ({supp_b})"
            ))),
            TriBool::Unknown => Err(DigitError::NotCanonical(format!(
                "cannot certify that digits fall below b_n - 1 infinitely often (top digits on {supp_b})"
            ))),
        }
    }

    /// Intersections of the digit profile (zero region included) with the
    /// ratio partition.
    pub fn atoms(&self) -> Result<Vec<Atom>, DigitError> {
        let profile = self
            .profile
            .as_ref()
            .ok_or_else(|| DigitError::Undecided("digit stream has no finite presentation".into()))?;
        let mut parts: Vec<DigitPart> = profile.clone();
        let covered = SetSpec::union(profile.iter().map(|p| p.set.clone()).collect());
        let zero = SetSpec::difference(SetSpec::positive(), covered).normalize();
        parts.push(DigitPart { set: zero, rule: DigitRule::Const(0) });
        let mut atoms = Vec::new();
        for part in parts {
            for piece in self.seq.partition() {
                let set = SetSpec::intersection(vec![part.set.clone(), piece.set.clone()]).normalize();
                if set.is_structurally_empty() {
                    continue;
                }
                atoms.push(Atom { set, piece: piece.kind.clone(), digit: part.rule.clone() });
            }
        }
        Ok(atoms)
    }

    pub fn supports(&self) -> Result<SupportPair, DigitError> {
        let atoms = self.atoms()?;
        let supp = SetSpec::union(atoms.iter().map(Atom::nonzero_set).collect()).normalize();
        let supp_b = SetSpec::union(atoms.iter().map(Atom::top_set).collect()).normalize();
        Ok(SupportPair { supp, supp_b })
    }

    /// The digit `c_n` (`n >= 1`).
    pub fn digit(&self, n: u64) -> u64 {
        assert!(n >= 1, "digits are indexed from 1");
        if let Some(profile) = &self.profile {
            return profile
                .iter()
                .find(|p| p.set.contains(n))
                .map_or(0, |p| p.rule.at(n, self.seq.ratio(n)));
        }
        match &self.kind {
            DigitKind::ExactRational(x) => {
                let (p, q) = (x.numer().to_biguint().expect("x >= 0"), x.denom().to_biguint().expect("q > 0"));
                let mut r = p % &q;
                for i in 1..n {
                    r = (r * self.seq.ratio(i)) % &q;
                }
                (r * self.seq.ratio(n) / q).to_u64().expect("digit below b_n")
            }
            _ => unreachable!("finite and rule digits always carry a profile"),
        }
    }

    /// `c_1, ..., c_{n_max}`.
    pub fn digits_upto(&self, n_max: u64) -> Vec<u64> {
        match (&self.kind, &self.profile) {
            (DigitKind::ExactRational(x), _) => expand(x, &self.seq, n_max),
            (_, Some(profile)) => {
                let mut out = vec![0u64; n_max as usize];
                for part in profile {
                    for n in part.set.enumerate(n_max) {
                        if n >= 1 {
                            out[n as usize - 1] = part.rule.at(n, self.seq.ratio(n));
                        }
                    }
                }
                out
            }
            _ => (1..=n_max).map(|n| self.digit(n)).collect(),
        }
    }

    /// Exact value, when it is rational and known.
    pub fn value(&self) -> Option<Rational> {
        match &self.kind {
            DigitKind::ExactRational(x) => Some(x.clone()),
            _ => {
                let supp = self.supports().ok()?.supp;
                let members = supp.finite_members()?;
                let last = members.last().copied().unwrap_or(0);
                Some(partial_sum(&self.digits_upto(last), &self.seq))
            }
        }
    }

    /// Rigorous enclosure of `x` from the first `n_max` digits.
    pub fn reconstruct(&self, n_max: u64) -> IntervalValue {
        let digits = self.digits_upto(n_max);
        let lo = partial_sum(&digits, &self.seq);
        let exhausted = match &self.kind {
            DigitKind::FiniteDigits(pairs) => pairs.last().map_or(true, |&(n, _)| n <= n_max),
            _ => false,
        };
        if exhausted {
            return IntervalValue::point(lo);
        }
        let hi = &lo + rat_big(&BigUint::one(), &self.seq.u_of(n_max));
        IntervalValue::new(lo, hi).expect("lo <= hi")
    }

    /// `σ_{n,k} = c_n/b_n + c_{n+1}/(b_n b_{n+1}) + ... + c_{n+k}/(b_n ... b_{n+k})`.
    pub fn sigma(&self, n: u64, k: u64) -> Rational {
        assert!(n >= 1, "sigma is defined for n >= 1");
        sigma_from(&self.seq, n, k, |i| self.digit(i))
    }

    /// Checks the telescoping identities for `{u_{n-1} x}` exactly.
    pub fn validate_expansion_identities(
        &self,
        n_range: std::ops::RangeInclusive<u64>,
        k_range: std::ops::RangeInclusive<u64>,
    ) -> Result<usize, DigitError> {
        let x = self
            .value()
            .ok_or_else(|| DigitError::Precondition("identities need an exactly known value".into()))?;
        let n_hi = *n_range.end();
        let k_hi = *k_range.end();
        let top = n_hi + k_hi + 2;
        let digits = self.digits_upto(top);
        let c = |i: u64| digits[i as usize - 1];
        let b: Vec<u64> = (0..=top).map(|i| if i == 0 { 1 } else { self.seq.ratio(i) }).collect();
        // fractional parts {u_m x} for m = 0..=top
        let q = x.denom().clone();
        let mut residue = x.numer().clone();
        let mut fr: Vec<Rational> = Vec::with_capacity(top as usize + 1);
        for m in 0..=top {
            if m > 0 {
                residue = (residue * num_bigint::BigInt::from(b[m as usize])).mod_floor(&q);
            }
            fr.push(Rational::new(residue.clone(), q.clone()));
        }
        let mut checked = 0usize;
        let fail = |identity, n, k, lhs: &Rational, rhs: &Rational| DigitError::ViolationFound {
            identity,
            n,
            k,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        };
        for n in n_range.clone() {
            if n == 0 {
                continue;
            }
            let lhs = &fr[n as usize - 1];
            for k in k_range.clone() {
                let sig = sigma_from(&self.seq, n, k, c);
                let prod: BigUint = (n..=n + k).map(|i| BigUint::from(b[i as usize])).product();
                let prod_r = Rational::from_integer(prod.clone().into());
                let rhs2 = &sig + &fr[(n + k) as usize] / &prod_r;
                if *lhs != rhs2 {
                    return Err(fail("telescoping", n, k, lhs, &rhs2));
                }
                if k == 0 {
                    let bn = Rational::from_integer(b[n as usize].into());
                    let rhs3 = rat(c(n) as i64, 1) / &bn + &fr[n as usize] / &bn;
                    if *lhs != rhs3 {
                        return Err(fail("one-step", n, k, lhs, &rhs3));
                    }
                }
                if (n..=n + k).all(|i| c(i) == b[i as usize] - 1) {
                    let rhs4 = Rational::one() - Rational::one() / &prod_r;
                    if sig != rhs4 {
                        return Err(fail("top-block", n, k, &sig, &rhs4));
                    }
                }
                let prod1 = &prod_r * Rational::from_integer(b[(n + k + 1) as usize].into());
                let next = rat(c(n + k + 1) as i64, 1) / &prod1;
                let rhs5 = &sig + &next + &fr[(n + k + 1) as usize] / &prod1;
                if *lhs != rhs5 {
                    return Err(fail("two-term", n, k, lhs, &rhs5));
                }
                let upper = &sig + &next + rat(1, 1i64 << (k + 2).min(62));
                if !(sig <= *lhs && *lhs < upper) {
                    return Err(fail("sandwich", n, k, lhs, &upper));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

fn sigma_from(seq: &ArithmeticSequence, n: u64, k: u64, digit: impl Fn(u64) -> u64) -> Rational {
    // Horner from the inside out: s = c_n/b_n + (c_{n+1}/b_{n+1} + ...)/b_n
    let mut s = Rational::zero();
    for i in (n..=n + k).rev() {
        let b = Rational::from_integer(seq.ratio(i).into());
        s = (Rational::from_integer(digit(i).into()) + s) / b;
    }
    s
}

/// `Σ_{n=1}^{len} c_n / u_n`, via forward Horner over the ratios.
fn partial_sum(digits: &[u64], seq: &ArithmeticSequence) -> Rational {
    let mut num = BigUint::zero();
    let mut den = BigUint::one();
    for (i, &c) in digits.iter().enumerate() {
        let b = seq.ratio(i as u64 + 1);
        num = num * b + c;
        den *= b;
    }
    rat_big(&num, &den)
}

/// Greedy digits `c_1..c_{n_max}` of `x` in `[0, 1)`.
pub fn expand(x: &Rational, seq: &ArithmeticSequence, n_max: u64) -> Vec<u64> {
    let q = x.denom().to_biguint().expect("positive denominator");
    let mut r = x.numer().to_biguint().expect("x >= 0") % &q;
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        if r.is_zero() {
            out.resize(n_max as usize, 0);
            break;
        }
        let t = r * seq.ratio(n);
        let (c, rem) = t.div_rem(&q);
        out.push(c.to_u64().expect("digit below b_n"));
        r = rem;
    }
    out
}

/// Eventually periodic or finite digit profile of a rational.
fn rational_profile(x: &Rational, seq: &ArithmeticSequence) -> Option<Vec<DigitPart>> {
    let q = x.denom().to_biguint()?;
    let mut r = x.numer().to_biguint()? % &q;
    let period_info = seq.eventual_period();
    let mut digits: Vec<u64> = Vec::new();
    let mut seen: HashMap<(BigUint, u64), u64> = HashMap::new();
    for n in 1..=CYCLE_BUDGET {
        if r.is_zero() {
            return Some(finite_parts(&digits, 0));
        }
        if let Some((start, l)) = period_info {
            if n >= start {
                let key = (r.clone(), n % l);
                if let Some(&m) = seen.get(&key) {
                    return Some(cyclic_parts(&digits, m, n - m));
                }
                seen.insert(key, n);
            }
        }
        let b = seq.try_ratio(n).ok()?;
        let (c, rem) = (r * b).div_rem(&q);
        digits.push(c.to_u64()?);
        r = rem;
    }
    None
}

fn finite_parts(digits: &[u64], upto: usize) -> Vec<DigitPart> {
    let end = if upto == 0 { digits.len() } else { upto };
    digits[..end]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| DigitPart { set: SetSpec::finite([i as u64 + 1]), rule: DigitRule::Const(c) })
        .collect()
}

/// Digits from index `m` on repeat with period `p`.
fn cyclic_parts(digits: &[u64], m: u64, p: u64) -> Vec<DigitPart> {
    let mut by_value: Vec<(u64, Vec<SetSpec>)> = Vec::new();
    let mut push = |c: u64, s: SetSpec| match by_value.iter_mut().find(|(v, _)| *v == c) {
        Some((_, v)) => v.push(s),
        None => by_value.push((c, vec![s])),
    };
    for n in 1..m {
        let c = digits[n as usize - 1];
        if c != 0 {
            push(c, SetSpec::finite([n]));
        }
    }
    for t in 0..p {
        let n = m + t;
        let c = digits[n as usize - 1];
        if c != 0 {
            push(c, SetSpec::Progression { a: p, r: n });
        }
    }
    by_value
        .into_iter()
        .map(|(c, sets)| DigitPart { set: SetSpec::union(sets).normalize(), rule: DigitRule::Const(c) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::RatioRule;
    use proptest::prelude::*;

    fn c(b: u64) -> ArithmeticSequence {
        ArithmeticSequence::constant(b).unwrap()
    }

    fn piecewise() -> ArithmeticSequence {
        ArithmeticSequence::new(RatioRule::Piecewise {
            pieces: vec![(SetSpec::evens(), RatioRule::Constant(2)), (SetSpec::odds(), RatioRule::Affine { a: 1, c: 0 })],
            default: None,
        })
        .unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand(&rat(1, 3), &c(2), 6), vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(expand(&rat(1, 2), &c(2), 4), vec![1, 0, 0, 0]);
    }

    #[test]
    fn euler_truncation_has_unit_digits() {
        let f = ArithmeticSequence::factorial();
        let mut x = Rational::zero();
        for n in 1..=60u64 {
            x += rat_big(&BigUint::one(), &f.u_of(n));
        }
        assert_eq!(expand(&x, &f, 20), vec![1; 20]);
    }

    #[test]
    fn reconstruct_examples() {
        let d = DigitSpec::finite(vec![(1, 1)], &c(2)).unwrap();
        assert_eq!(d.reconstruct(5), IntervalValue::point(rat(1, 2)));
        let ones = DigitSpec::rules(vec![(SetSpec::naturals(), DigitRule::Const(1))], &c(3)).unwrap();
        let iv = ones.reconstruct(3);
        assert_eq!((iv.lo.clone(), iv.hi.clone()), (rat(13, 27), rat(14, 27)));
        assert!(iv.contains(&rat(1, 2)));
        let sq = DigitSpec::rules(vec![(SetSpec::squares(), DigitRule::Const(1))], &c(2)).unwrap();
        let lo = rat(1, 2) + rat(1, 16) + rat(1, 512);
        let iv = sq.reconstruct(9);
        assert_eq!((iv.lo.clone(), iv.hi.clone()), (lo.clone(), lo + rat(1, 512)));
    }

    #[test]
    fn support_examples() {
        let third = DigitSpec::rational(rat(1, 3), &c(2)).unwrap().supports().unwrap();
        assert_eq!(third.supp, SetSpec::Progression { a: 2, r: 2 });
        assert_eq!(third.supp_b, SetSpec::Progression { a: 2, r: 2 });
        let ones = DigitSpec::rules(vec![(SetSpec::naturals(), DigitRule::Const(1))], &c(3)).unwrap().supports().unwrap();
        assert_eq!(ones.supp, SetSpec::positive());
        assert_eq!(ones.supp_b, SetSpec::empty());
        let seq = ArithmeticSequence::new(RatioRule::Periodic(vec![2, 3, 3, 3, 5])).unwrap();
        let fin = DigitSpec::finite(vec![(2, 1), (5, 3)], &seq).unwrap().supports().unwrap();
        assert_eq!(fin.supp, SetSpec::finite([2, 5]));
        assert_eq!(fin.supp_b, SetSpec::empty());
        let seq2 = ArithmeticSequence::new(RatioRule::Periodic(vec![3, 2, 3, 3, 5])).unwrap();
        let fin2 = DigitSpec::finite(vec![(2, 1), (5, 3)], &seq2).unwrap().supports().unwrap();
        assert_eq!(fin2.supp_b, SetSpec::finite([2]));
    }

    #[test]
    fn sigma_examples() {
        let third = DigitSpec::rational(rat(1, 3), &c(2)).unwrap();
        assert_eq!(third.sigma(2, 1), rat(1, 2));
        let zero = DigitSpec::finite(vec![], &c(2)).unwrap();
        assert_eq!(zero.sigma(3, 4), Rational::zero());
        let top = DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Top)], &c(3)).unwrap();
        assert_eq!(top.sigma(4, 0), rat(2, 3));
    }

    #[test]
    fn identity_examples() {
        assert!(DigitSpec::rational(rat(1, 3), &c(2)).unwrap().validate_expansion_identities(1..=30, 0..=8).is_ok());
        let f = ArithmeticSequence::factorial();
        assert!(DigitSpec::rational(rat(5, 7), &f).unwrap().validate_expansion_identities(1..=20, 0..=6).is_ok());
        assert!(DigitSpec::rational(Rational::zero(), &c(2)).unwrap().validate_expansion_identities(1..=10, 0..=3).is_ok());
    }

    #[test]
    fn canonicality_is_enforced() {
        assert!(matches!(
            DigitSpec::rules(vec![(SetSpec::naturals(), DigitRule::Top)], &c(2)),
            Err(DigitError::NotCanonical(_))
        ));
        assert!(DigitSpec::rules(vec![(SetSpec::naturals(), DigitRule::Const(2))], &c(2)).is_err());
        assert!(DigitSpec::finite(vec![(3, 2)], &c(2)).is_err());
        assert!(DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Top)], &c(2)).is_ok());
        // value 1 on all indices is top on the even (base 2) indices only
        let d = DigitSpec::rules(vec![(SetSpec::naturals(), DigitRule::Const(1))], &piecewise()).unwrap();
        let s = d.supports().unwrap();
        assert_eq!(s.supp_b.normalize().enumerate(12), vec![1, 2, 4, 6, 8, 10, 12]);
    }

    #[test]
    fn piecewise_atoms_and_limits() {
        let d = DigitSpec::rules(vec![(SetSpec::naturals(), DigitRule::ThirdFloor)], &piecewise()).unwrap();
        let atoms = d.atoms().unwrap();
        let div = atoms.iter().find(|a| matches!(a.piece, PieceKind::Divergent(_)) && a.digit == DigitRule::ThirdFloor).unwrap();
        assert_eq!(div.limit_cb(), rat(1, 3));
        let sup = d.supports().unwrap().supp;
        assert_eq!(sup.enumerate(12), vec![3, 5, 7, 9, 11]);
    }

    #[test]
    fn rational_with_divergent_ratios_is_finite() {
        let f = ArithmeticSequence::factorial();
        let d = DigitSpec::rational(rat(5, 7), &f).unwrap();
        let s = d.supports().unwrap();
        assert!(s.supp.finite_members().is_some());
        assert_eq!(d.value(), Some(rat(5, 7)));
    }

    proptest! {
        #[test]
        fn round_trip_brackets(p in 0u64..500, q in 1u64..=500, rule in 0usize..4, n_max in 1u64..40) {
            prop_assume!(p < q);
            let seq = match rule {
                0 => c(2),
                1 => c(3),
                2 => ArithmeticSequence::factorial(),
                _ => piecewise(),
            };
            let x = rat(p as i64, q as i64);
            let d = DigitSpec::rational(x.clone(), &seq).unwrap();
            let iv = d.reconstruct(n_max);
            prop_assert!(iv.lo <= x && x <= iv.hi);
            prop_assert!(iv.width() <= rat(1, 1i64 << n_max.min(62)));
            let digits = expand(&x, &seq, n_max);
            for (i, &cn) in digits.iter().enumerate() {
                prop_assert!(cn < seq.ratio(i as u64 + 1));
            }
            prop_assert!(d.supports().map(|s| s.supp_b.is_subset(&s.supp) != TriBool::No).unwrap_or(true));
        }

        #[test]
        fn profile_digits_match_expansion(p in 1u64..200, q in 2u64..200, rule in 0usize..3) {
            prop_assume!(p < q);
            let seq = match rule { 0 => c(2), 1 => c(3), _ => ArithmeticSequence::new(RatioRule::Periodic(vec![2, 5, 3])).unwrap() };
            let d = DigitSpec::rational(rat(p as i64, q as i64), &seq).unwrap();
            prop_assert!(d.profile().is_some());
            let want = expand(&rat(p as i64, q as i64), &seq, 120);
            let got: Vec<u64> = (1..=120).map(|n| d.digit(n)).collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn greedy_is_canonical(p in 1u64..300, q in 2u64..300) {
            prop_assume!(p < q);
            let d = DigitSpec::rational(rat(p as i64, q as i64), &c(2)).unwrap();
            let s = d.supports().unwrap();
            prop_assert!(s.supp_b.complement().is_infinite().is_yes());
        }
    }
}
