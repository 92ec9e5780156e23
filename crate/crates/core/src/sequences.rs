//! Arithmetic sequences `u` given by ratio rules `b_n = u_n / u_{n-1}`
//! (`n >= 1`), plus arbitrary integer sequences for oracle-only work.

use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::logic::TriBool;
use crate::sets::{s_k, SetSpec};

/// Cached prefix products are kept for indices below this bound.
const MEMO_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("invalid ratio rule: {0}")]
    InvalidRatio(String),
    #[error("cannot decide: {0}")]
    Undecided(String),
    #[error("index {n} exceeds the largest representable ratio index {max}")]
    IndexTooLarge { n: u64, max: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioRule {
    Constant(u64),
    /// `b_n = values[(n - 1) % len]`
    Periodic(Vec<u64>),
    /// `b_n = max(2, a*n + c)` with `a >= 1`
    Affine { a: u64, c: i64 },
    /// `b_n = base^n`; only defined while it fits in 64 bits.
    Power(u64),
    /// First matching piece wins; `default` covers the rest.
    Piecewise { pieces: Vec<(SetSpec, RatioRule)>, default: Option<Box<RatioRule>> },
    /// `b_1..b_len` listed explicitly, then `tail` (indexed globally).
    ExplicitPrefix { prefix: Vec<u64>, tail: Box<RatioRule> },
}

/// Unbounded ratio shapes occurring on divergent pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivergentRule {
    Affine { a: u64, c: i64 },
    Power(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceKind {
    Const(u64),
    Divergent(DivergentRule),
}

/// A piece of the index set `N+` on which the ratios follow one simple law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioPiece {
    pub set: SetSpec,
    pub kind: PieceKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioBehavior {
    /// Bounded along the set, with a certified upper bound for the ratios.
    Bounded(u64),
    Divergent,
    Mixed,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaDegree {
    Finite(u64),
    AtLeast(u64),
}

impl DivergentRule {
    pub fn at(&self, n: u64) -> Option<u64> {
        match self {
            DivergentRule::Affine { a, c } => {
                let v = (*a as i128) * (n as i128) + *c as i128;
                Some(v.max(2).min(u64::MAX as i128) as u64)
            }
            DivergentRule::Power(b) => b.checked_pow(u32::try_from(n).ok()?),
        }
    }
}

impl RatioRule {
    pub fn affine(a: i64, c: i64) -> Result<RatioRule, SeqError> {
        match a {
            a if a < 0 => Err(SeqError::InvalidRatio("affine slope must be >= 0".into())),
            0 => RatioRule::constant(c.max(2) as u64),
            a => Ok(RatioRule::Affine { a: a as u64, c }),
        }
    }

    pub fn constant(b: u64) -> Result<RatioRule, SeqError> {
        if b < 2 {
            return Err(SeqError::InvalidRatio(format!("constant ratio {b} is below 2")));
        }
        Ok(RatioRule::Constant(b))
    }

    pub fn validate(&self) -> Result<(), SeqError> {
        let bad = |m: String| Err(SeqError::InvalidRatio(m));
        match self {
            RatioRule::Constant(b) if *b < 2 => bad(format!("constant ratio {b} is below 2")),
            RatioRule::Periodic(v) if v.is_empty() => bad("empty periodic list".into()),
            RatioRule::Periodic(v) if v.iter().any(|&b| b < 2) => bad("periodic ratios must be >= 2".into()),
            RatioRule::Affine { a: 0, .. } => bad("affine slope must be >= 1 (use constant)".into()),
            RatioRule::Power(b) if *b < 2 => bad(format!("power base {b} is below 2")),
            RatioRule::ExplicitPrefix { prefix, tail } => {
                if prefix.iter().any(|&b| b < 2) {
                    return bad("prefix ratios must be >= 2".into());
                }
                tail.validate()
            }
            RatioRule::Piecewise { pieces, default } => {
                for (_, r) in pieces {
                    if matches!(r, RatioRule::Piecewise { .. } | RatioRule::ExplicitPrefix { .. }) {
                        return bad("piecewise pieces must use simple rules".into());
                    }
                    r.validate()?;
                }
                match default {
                    Some(d) if matches!(**d, RatioRule::Piecewise { .. } | RatioRule::ExplicitPrefix { .. }) => {
                        bad("piecewise default must be a simple rule".into())
                    }
                    Some(d) => d.validate(),
                    None => {
                        let covered = SetSpec::union(pieces.iter().map(|(s, _)| s.clone()).collect());
                        if SetSpec::positive().is_subset(&covered).is_yes() {
                            Ok(())
                        } else {
                            bad("piecewise rule needs an else branch unless its pieces provably cover every index".into())
                        }
                    }
                }
            }
            _ => Ok(()),
        }
    }

    /// `b_n` for `n >= 1`, or `None` past the 64-bit range.
    pub fn at(&self, n: u64) -> Option<u64> {
        debug_assert!(n >= 1, "ratios are indexed from 1");
        match self {
            RatioRule::Constant(b) => Some(*b),
            RatioRule::Periodic(v) => Some(v[((n - 1) % v.len() as u64) as usize]),
            RatioRule::Affine { a, c } => DivergentRule::Affine { a: *a, c: *c }.at(n),
            RatioRule::Power(b) => DivergentRule::Power(*b).at(n),
            RatioRule::Piecewise { pieces, default } => {
                for (s, r) in pieces {
                    if s.contains(n) {
                        return r.at(n);
                    }
                }
                default.as_ref().and_then(|d| d.at(n))
            }
            RatioRule::ExplicitPrefix { prefix, tail } => {
                if n as usize <= prefix.len() {
                    Some(prefix[n as usize - 1])
                } else {
                    tail.at(n)
                }
            }
        }
    }

    /// Splits `N+` into pieces with constant or divergent ratios.
    pub fn partition(&self) -> Vec<RatioPiece> {
        let pos = SetSpec::positive();
        self.partition_on(&pos)
    }

    fn partition_on(&self, domain: &SetSpec) -> Vec<RatioPiece> {
        let piece = |set: SetSpec, kind| RatioPiece { set, kind };
        match self {
            RatioRule::Constant(b) => vec![piece(domain.clone(), PieceKind::Const(*b))],
            RatioRule::Periodic(v) => {
                let l = v.len() as u64;
                let mut by_value: Vec<(u64, Vec<SetSpec>)> = Vec::new();
                for (i, &b) in v.iter().enumerate() {
                    let cls = SetSpec::progression(l, i as u64 + 1).expect("len >= 1");
                    match by_value.iter_mut().find(|(x, _)| *x == b) {
                        Some((_, sets)) => sets.push(cls),
                        None => by_value.push((b, vec![cls])),
                    }
                }
                by_value
                    .into_iter()
                    .map(|(b, sets)| {
                        let s = SetSpec::intersection(vec![domain.clone(), SetSpec::union(sets)]).normalize();
                        piece(s, PieceKind::Const(b))
                    })
                    .collect()
            }
            RatioRule::Affine { a, c } => {
                vec![piece(domain.clone(), PieceKind::Divergent(DivergentRule::Affine { a: *a, c: *c }))]
            }
            RatioRule::Power(b) => vec![piece(domain.clone(), PieceKind::Divergent(DivergentRule::Power(*b)))],
            RatioRule::ExplicitPrefix { prefix, tail } => {
                let len = prefix.len() as u64;
                let mut out: Vec<RatioPiece> = Vec::new();
                for (i, &b) in prefix.iter().enumerate() {
                    let n = i as u64 + 1;
                    if domain.contains(n) {
                        out.push(piece(SetSpec::finite([n]), PieceKind::Const(b)));
                    }
                }
                let rest = SetSpec::intersection(vec![domain.clone(), SetSpec::from(len + 1)]).normalize();
                out.extend(tail.partition_on(&rest));
                out
            }
            RatioRule::Piecewise { pieces, default } => {
                let mut out = Vec::new();
                let mut taken: Vec<SetSpec> = Vec::new();
                for (s, r) in pieces {
                    let eff = SetSpec::difference(
                        SetSpec::intersection(vec![domain.clone(), s.clone()]),
                        SetSpec::union(taken.clone()),
                    )
                    .normalize();
                    taken.push(s.clone());
                    out.extend(r.partition_on(&eff));
                }
                if let Some(d) = default {
                    let rest = SetSpec::difference(domain.clone(), SetSpec::union(taken)).normalize();
                    out.extend(d.partition_on(&rest));
                }
                out
            }
        }
        .into_iter()
        .filter(|p| !p.set.is_structurally_empty())
        .collect()
    }

    /// Largest index whose ratio fits in 64 bits, if bounded.
    pub fn max_index(&self) -> Option<u64> {
        match self {
            RatioRule::Power(b) => Some((u64::MAX as f64).log(*b as f64).floor() as u64),
            RatioRule::Piecewise { pieces, default } => pieces
                .iter()
                .map(|(_, r)| r)
                .chain(default.as_deref())
                .filter_map(|r| r.max_index())
                .min(),
            RatioRule::ExplicitPrefix { tail, .. } => tail.max_index(),
            _ => None,
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for RatioRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioRule::Constant(b) => write!(f, "constant {b}"),
            RatioRule::Periodic(v) => write!(f, "periodic {}", join(v)),
            RatioRule::Affine { a, c } => write!(f, "affine {a} {c}"),
            RatioRule::Power(b) => write!(f, "power {b}"),
            RatioRule::Piecewise { pieces, default } => {
                write!(f, "piecewise ")?;
                for (i, (s, r)) in pieces.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{s}: {r}")?;
                }
                if let Some(d) = default {
                    write!(f, "; else: {d}")?;
                }
                Ok(())
            }
            RatioRule::ExplicitPrefix { prefix, tail } => write!(f, "prefix {} then {tail}", join(prefix)),
        }
    }
}

impl fmt::Display for DivergentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergentRule::Affine { a, c } => write!(f, "max(2, {a}n{c:+})"),
            DivergentRule::Power(b) => write!(f, "{b}^n"),
        }
    }
}

struct SeqInner {
    rule: RatioRule,
    memo: RwLock<Vec<BigUint>>,
    partition: OnceLock<Vec<RatioPiece>>,
}

/// `u_0 = 1`, `u_n = b_n u_{n-1}`.  Cheap to clone; clones share the memo.
#[derive(Clone)]
pub struct ArithmeticSequence {
    inner: Arc<SeqInner>,
}

impl fmt::Debug for ArithmeticSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArithmeticSequence").field("rule", &self.inner.rule).finish()
    }
}

impl PartialEq for ArithmeticSequence {
    fn eq(&self, other: &Self) -> bool {
        self.inner.rule == other.inner.rule
    }
}

impl fmt::Display for ArithmeticSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.rule.fmt(f)
    }
}

impl ArithmeticSequence {
    pub fn new(rule: RatioRule) -> Result<Self, SeqError> {
        rule.validate()?;
        Ok(ArithmeticSequence {
            inner: Arc::new(SeqInner { rule, memo: RwLock::new(vec![BigUint::one()]), partition: OnceLock::new() }),
        })
    }

    pub fn constant(b: u64) -> Result<Self, SeqError> {
        Self::new(RatioRule::constant(b)?)
    }

    /// `b_n = n + 1`, so `u_n = (n + 1)!`.
    pub fn factorial() -> Self {
        Self::new(RatioRule::Affine { a: 1, c: 1 }).expect("valid rule")
    }

    pub fn rule(&self) -> &RatioRule {
        &self.inner.rule
    }

    /// `b_n` for `n >= 1`.
    pub fn ratio(&self, n: u64) -> u64 {
        assert!(n >= 1, "b_n is defined for n >= 1");
        self.inner.rule.at(n).unwrap_or_else(|| panic!("ratio b_{n} exceeds 64 bits for rule {}", self.inner.rule))
    }

    pub fn try_ratio(&self, n: u64) -> Result<u64, SeqError> {
        self.inner.rule.at(n).ok_or(SeqError::IndexTooLarge { n, max: self.max_index().unwrap_or(0) })
    }

    pub fn max_index(&self) -> Option<u64> {
        self.inner.rule.max_index()
    }

    pub fn u_of(&self, n: u64) -> BigUint {
        {
            let memo = self.inner.memo.read().expect("memo lock");
            if (n as usize) < memo.len() {
                return memo[n as usize].clone();
            }
        }
        let (mut acc, start) = {
            let mut memo = self.inner.memo.write().expect("memo lock");
            while memo.len() < MEMO_CAP && memo.len() <= n as usize {
                let i = memo.len() as u64;
                let next = memo.last().expect("u_0 present") * self.ratio(i);
                memo.push(next);
            }
            if (n as usize) < memo.len() {
                return memo[n as usize].clone();
            }
            (memo.last().expect("nonempty").clone(), memo.len() as u64)
        };
        for i in start..=n {
            acc *= self.ratio(i);
        }
        acc
    }

    pub fn partition(&self) -> &[RatioPiece] {
        self.inner.partition.get_or_init(|| self.inner.rule.partition())
    }

    /// Indices with bounded ratios, 0 included.
    pub fn bounded_part(&self) -> SetSpec {
        let mut parts: Vec<SetSpec> = self
            .partition()
            .iter()
            .filter(|p| matches!(p.kind, PieceKind::Const(_)))
            .map(|p| p.set.clone())
            .collect();
        parts.push(SetSpec::finite([0]));
        SetSpec::union(parts).normalize()
    }

    /// Indices on divergent pieces.
    pub fn divergent_part(&self) -> SetSpec {
        SetSpec::union(
            self.partition()
                .iter()
                .filter(|p| matches!(p.kind, PieceKind::Divergent(_)))
                .map(|p| p.set.clone())
                .collect(),
        )
        .normalize()
    }

    /// `(start, L)` such that `b_{n+L} = b_n` for every `n >= start`, when
    /// the ratios are eventually periodic.
    pub fn eventual_period(&self) -> Option<(u64, u64)> {
        let mut start = 1u64;
        let mut period = 1u64;
        for p in self.partition() {
            match p.kind {
                PieceKind::Const(_) => {
                    let ev = p.set.exact_periodic()?;
                    if !ev.is_finite() {
                        period = num_integer::lcm(period, ev.period);
                    }
                    start = start.max(ev.start);
                }
                PieceKind::Divergent(_) => {
                    let members = p.set.finite_members()?;
                    start = start.max(members.last().map_or(0, |m| m + 1));
                }
            }
        }
        Some((start, period))
    }

    /// `u` is b-bounded when the divergent pieces are finite.
    pub fn is_b_bounded(&self) -> TriBool {
        self.divergent_part().is_finite()
    }

    pub fn classify_ratio_behavior(&self, a: &SetSpec) -> RatioBehavior {
        let mut sup: u64 = 0;
        let mut has_bounded = false;
        let mut has_divergent = false;
        for p in self.partition() {
            let x = SetSpec::intersection(vec![a.clone(), p.set.clone()]);
            let inf = x.is_infinite();
            match (&p.kind, inf) {
                (_, TriBool::Unknown) => return RatioBehavior::Unknown,
                (PieceKind::Const(b), TriBool::Yes) => {
                    has_bounded = true;
                    sup = sup.max(*b);
                }
                (PieceKind::Const(b), TriBool::No) => {
                    if !x.is_empty().is_yes() {
                        sup = sup.max(*b);
                    }
                }
                (PieceKind::Divergent(_), TriBool::Yes) => has_divergent = true,
                (PieceKind::Divergent(r), TriBool::No) => match x.finite_members() {
                    Some(ms) => {
                        for n in ms {
                            match r.at(n) {
                                Some(v) => sup = sup.max(v),
                                None => return RatioBehavior::Unknown,
                            }
                        }
                    }
                    None => return RatioBehavior::Unknown,
                },
            }
        }
        match (has_bounded, has_divergent) {
            (true, true) => RatioBehavior::Mixed,
            (false, true) => RatioBehavior::Divergent,
            _ => RatioBehavior::Bounded(sup),
        }
    }

    /// Largest `k <= k_max` with `S_k(A)` b-bounded.
    pub fn beta_degree(&self, a: &SetSpec, k_max: u64) -> Result<BetaDegree, SeqError> {
        for k in 0..=k_max {
            match self.classify_ratio_behavior(&s_k(a, k)) {
                RatioBehavior::Bounded(_) => {}
                RatioBehavior::Unknown => {
                    return Err(SeqError::Undecided(format!("ratio behaviour on S_{k}(A) is outside the decidable fragment")))
                }
                _ => return Ok(BetaDegree::Finite(k.saturating_sub(1))),
            }
        }
        Ok(BetaDegree::AtLeast(k_max))
    }
}

/// An arbitrary integer sequence, used only by the oracle.
#[derive(Clone)]
pub struct GeneralSequence {
    pub name: String,
    terms: Arc<dyn Fn(u64) -> BigUint + Send + Sync>,
}

impl fmt::Debug for GeneralSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneralSequence({})", self.name)
    }
}

impl GeneralSequence {
    pub fn new(name: impl Into<String>, f: impl Fn(u64) -> BigUint + Send + Sync + 'static) -> Self {
        GeneralSequence { name: name.into(), terms: Arc::new(f) }
    }

    pub fn from_arithmetic(seq: &ArithmeticSequence) -> Self {
        let s = seq.clone();
        GeneralSequence::new(seq.to_string(), move |n| s.u_of(n))
    }

    pub fn term(&self, n: u64) -> BigUint {
        (self.terms)(n)
    }

    /// Checks `u_0 = 1`, strict increase and `u_n | u_{n+1}` on `0..=n_max`.
    pub fn is_arithmetic_prefix(&self, n_max: u64) -> bool {
        let mut prev = self.term(0);
        if !prev.is_one() {
            return false;
        }
        for n in 1..=n_max {
            let cur = self.term(n);
            if cur <= prev || !(&cur % &prev).is_zero() {
                return false;
            }
            prev = cur;
        }
        true
    }
}

/// `k * m!` for `1 <= k <= m`, ordered by `m` then `k`: 1, 2, 4, 6, 12, 18, 24, ...
pub fn dk_sequence() -> GeneralSequence {
    GeneralSequence::new("dk", |i| {
        let (m, k) = dk_block(i);
        let mut f = BigUint::one();
        for j in 2..=m {
            f *= j;
        }
        f * k
    })
}

/// `sum_{j=2}^{last} 1/j!`, the fractional part of `e` cut after `1/last!`.
/// Along the DK sequence `k m! x` stays within `k m!/last!` of the true
/// pattern, which is negligible for `m` well below `last`.
pub fn dk_e_pattern(last: u64) -> crate::exact_arith::Rational {
    let mut num = BigUint::zero();
    let mut fact = BigUint::one();
    // Horner from the top: sum_{j=2}^{last} last!/j!
    let mut tail = BigUint::one();
    for j in (3..=last).rev() {
        tail *= j;
        num += &tail;
    }
    num += 1u32;
    for j in 2..=last {
        fact *= j;
    }
    crate::exact_arith::rat_big(&num, &fact)
}

/// Block `m` and multiplier `k` of the `i`-th term.
pub fn dk_block(i: u64) -> (u64, u64) {
    let mut m = ((((8 * i as u128 + 1) as f64).sqrt() - 1.0) / 2.0) as u64;
    while m * (m + 1) / 2 > i {
        m -= 1;
    }
    while (m + 1) * (m + 2) / 2 <= i {
        m += 1;
    }
    (m + 1, i - m * (m + 1) / 2 + 1)
}
