use std::fmt;

use super::{IntervalLength, IntervalStart, SetError, SetSpec, SparseKind};

/// Horizon used to sanity-check chain inclusions in [`c_k_chain`].
pub const CHAIN_CHECK_HORIZON: u64 = 10_000;

/// `S_k(E) = (E + 0) ∪ (E + 1) ∪ ... ∪ (E + k)`.
pub fn s_k(a: &SetSpec, k: u64) -> SetSpec {
    SetSpec::union((0..=k).map(|j| a.shift(j as i64)).collect()).normalize()
}

/// `C_k(α) = (A_0 + 0) ∪ (A_1 + 1) ∪ ... ∪ (A_k + k)` for a decreasing chain.
pub fn c_k_chain(alpha: &[SetSpec], k: usize) -> Result<SetSpec, SetError> {
    let used = &alpha[..=k.min(alpha.len().saturating_sub(1))];
    for j in 1..used.len() {
        if let Some(x) = used[j].enumerate(CHAIN_CHECK_HORIZON).into_iter().find(|&x| !used[j - 1].contains(x)) {
            return Err(SetError::NotDecreasing { index: j, prev: j - 1, element: x });
        }
    }
    Ok(SetSpec::union(used.iter().enumerate().map(|(j, a)| a.shift(j as i64)).collect()).normalize())
}

/// A convexity or gap number, or a certified statement about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CgValue {
    Exact(u64),
    /// Certified upper bound (from an inclusion argument).
    AtMost(u64),
    /// Certified to be infinite; the string names the reason.
    Infinite(String),
    /// Empirical maximum on a finite window; only a lower bound.
    AtLeast(u64),
}

impl CgValue {
    pub fn certified_finite(&self) -> Option<u64> {
        match self {
            CgValue::Exact(v) | CgValue::AtMost(v) => Some(*v),
            _ => None,
        }
    }

    fn tighter_upper(self, other: CgValue) -> CgValue {
        match (self.certified_finite(), other.certified_finite()) {
            (Some(a), Some(b)) if b < a => CgValue::AtMost(b),
            (Some(_), _) => self,
            (None, Some(b)) => CgValue::AtMost(b),
            (None, None) => self,
        }
    }
}

impl fmt::Display for CgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CgValue::Exact(v) => write!(f, "= {v}"),
            CgValue::AtMost(v) => write!(f, "<= {v}"),
            CgValue::Infinite(why) => write!(f, "= infinite ({why})"),
            CgValue::AtLeast(v) => write!(f, ">= {v} (empirical)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexityGap {
    /// Finite or cofinite sets have no meaningful pair of numbers.
    Degenerate(String),
    Values { c: CgValue, g: CgValue },
}

impl ConvexityGap {
    pub fn convexity(&self) -> Option<&CgValue> {
        match self {
            ConvexityGap::Values { c, .. } => Some(c),
            ConvexityGap::Degenerate(_) => None,
        }
    }
    pub fn gap(&self) -> Option<&CgValue> {
        match self {
            ConvexityGap::Values { g, .. } => Some(g),
            ConvexityGap::Degenerate(_) => None,
        }
    }
}

/// Maximal intervals and the gaps between them, read off a sorted list.
fn run_stats(members: &[u64], horizon: u64) -> (u64, u64) {
    let mut best_c = 0;
    let mut best_g = 0;
    let mut i = 0;
    while i < members.len() {
        let mut j = i;
        while j + 1 < members.len() && members[j + 1] == members[j] + 1 {
            j += 1;
        }
        let touches_end = members[j] >= horizon;
        if !touches_end {
            best_c = best_c.max(members[j] - members[i] + 1);
            if j + 1 < members.len() {
                best_g = best_g.max(members[j + 1] - members[j] - 1);
            }
        }
        i = j + 1;
    }
    (best_c, best_g)
}

pub fn convexity_and_gap(a: &SetSpec, horizon: u64) -> ConvexityGap {
    if let Some(ev) = a.exact_periodic() {
        if ev.is_finite() {
            return ConvexityGap::Degenerate("finite set".into());
        }
        if ev.is_cofinite() {
            return ConvexityGap::Degenerate("cofinite set".into());
        }
        let w = ev.start + 3 * ev.period;
        let members: Vec<u64> = (0..=w).filter(|&n| ev.contains(n)).collect();
        let (c, g) = run_stats(&members, w);
        return ConvexityGap::Values { c: CgValue::Exact(c), g: CgValue::Exact(g) };
    }
    match a {
        SetSpec::SparseImage(kind) => {
            let why = match kind {
                SparseKind::Poly(d) => format!("consecutive values of j^{d} drift apart"),
                SparseKind::Exponential(b) => format!("gaps between powers of {b} grow"),
            };
            ConvexityGap::Values { c: CgValue::Exact(1), g: CgValue::Infinite(why) }
        }
        SetSpec::IntervalFamily { start, length } => interval_family_cg(start, length),
        SetSpec::Shift(inner, k) if *k >= 0 => convexity_and_gap(inner, horizon),
        SetSpec::Intersection(xs) => {
            let mut c = empirical(a, horizon).0;
            for x in xs {
                if let Some(cv) = convexity_and_gap(x, horizon).convexity() {
                    c = c.tighter_upper(cv.clone());
                }
            }
            let (_, g) = empirical(a, horizon);
            ConvexityGap::Values { c, g }
        }
        SetSpec::Difference(x, _) | SetSpec::RankFilter { inner: x, .. } => {
            let (c, g) = empirical(a, horizon);
            let c = match convexity_and_gap(x, horizon).convexity() {
                Some(cv) => c.tighter_upper(cv.clone()),
                None => c,
            };
            ConvexityGap::Values { c, g }
        }
        SetSpec::Union(xs) => {
            let (c, mut g) = empirical(a, horizon);
            for x in xs {
                if x.is_infinite().is_yes() {
                    if let Some(gv) = convexity_and_gap(x, horizon).gap() {
                        g = g.tighter_upper(gv.clone());
                    }
                }
            }
            ConvexityGap::Values { c, g }
        }
        _ => {
            let (c, g) = empirical(a, horizon);
            ConvexityGap::Values { c, g }
        }
    }
}

fn empirical(a: &SetSpec, horizon: u64) -> (CgValue, CgValue) {
    let members = a.enumerate(horizon);
    let (c, g) = run_stats(&members, horizon);
    (CgValue::AtLeast(c), CgValue::AtLeast(g))
}

fn interval_family_cg(start: &IntervalStart, length: &IntervalLength) -> ConvexityGap {
    let g = CgValue::Infinite("gaps between consecutive intervals grow".into());
    match length {
        IntervalLength::Linear => {
            ConvexityGap::Values { c: CgValue::Infinite("interval lengths j + 1 are unbounded".into()), g }
        }
        IntervalLength::Const(e) => {
            // once consecutive starts are more than e + 1 apart, every later
            // interval is maximal with e + 1 elements
            let mut j = 1u64;
            loop {
                match (start.at(j), start.at(j + 1)) {
                    (Some(k0), Some(k1)) if k1 - k0 > e + 1 => break,
                    (Some(_), Some(_)) => j += 1,
                    _ => break,
                }
            }
            let bound = start.at(j + 1).map_or(u64::MAX, |k| k.saturating_add(*e));
            let members = SetSpec::IntervalFamily { start: start.clone(), length: length.clone() }.enumerate(bound);
            let (c, _) = run_stats(&members, u64::MAX);
            ConvexityGap::Values { c: CgValue::Exact(c.max(e + 1)), g }
        }
    }
}

/// Maximal intervals `[a_n, b_n]` of a set and the gaps between them,
/// produced lazily from a bounded enumeration.
pub struct IntervalDecomposition {
    members: Vec<u64>,
    pos: usize,
}

impl IntervalDecomposition {
    pub fn new(a: &SetSpec, horizon: u64) -> Self {
        IntervalDecomposition { members: a.enumerate(horizon), pos: 0 }
    }

    /// Gaps `(b_n + 1, a_{n+1} - 1)` between consecutive maximal intervals.
    pub fn gaps(self) -> impl Iterator<Item = (u64, u64)> {
        let ivs: Vec<(u64, u64)> = self.collect();
        let pairs: Vec<(u64, u64)> = ivs.windows(2).map(|w| (w[0].1 + 1, w[1].0 - 1)).collect();
        pairs.into_iter()
    }
}

impl Iterator for IntervalDecomposition {
    type Item = (u64, u64);
    fn next(&mut self) -> Option<(u64, u64)> {
        let m = &self.members;
        if self.pos >= m.len() {
            return None;
        }
        let lo = m[self.pos];
        let mut j = self.pos;
        while j + 1 < m.len() && m[j + 1] == m[j] + 1 {
            j += 1;
        }
        self.pos = j + 1;
        Some((lo, m[j]))
    }
}
