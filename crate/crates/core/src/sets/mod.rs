//! Finitely presented subsets of the natural numbers (0 included).
//!
//! A [`SetSpec`] is a small expression tree.  Leaves have closed-form
//! membership and enumeration; inner nodes are shifts, boolean combinations
//! and rank filters.  Alongside plain membership the module offers two
//! symbolic views used by the ideal layer: an exact eventually periodic
//! normal form ([`EvPeriodic`]) and growth bounds on counting functions
//! ([`Growth`]).

mod combinatorics;
mod growth;
mod periodic;

use std::fmt;

use thiserror::Error;

pub use combinatorics::{c_k_chain, convexity_and_gap, s_k, CgValue, ConvexityGap, IntervalDecomposition};
pub use growth::Growth;
pub use periodic::EvPeriodic;

use crate::logic::TriBool;

/// Provably finite sets are listed only when their members lie below this.
const FINITE_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("progression step must be at least 1")]
    ZeroStep,
    #[error("polynomial images need degree >= 2, got {0}")]
    BadDegree(u32),
    #[error("exponential images need base >= 2, got {0}")]
    BadBase(u64),
    #[error("rank filter modulus must be >= 1 and residue < modulus")]
    BadRankFilter,
    #[error("chain is not decreasing: element {element} of A_{index} is missing from A_{prev}")]
    NotDecreasing { index: usize, prev: usize, element: u64 },
}

/// Image kinds of strictly increasing maps `j -> f(j)`, `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SparseKind {
    /// `j^d`
    Poly(u32),
    /// `base^j`
    Exponential(u64),
}

/// Left endpoints `k_j` of an interval family, `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalStart {
    /// `k_j = base^j`
    Geometric(u64),
    /// `k_j = j^d`
    Power(u32),
}

/// Span `e_j` of the `j`-th interval `[k_j, k_j + e_j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalLength {
    Const(u64),
    /// `e_j = j`
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetSpec {
    /// Sorted, deduplicated members.
    Finite(Vec<u64>),
    /// Everything except the listed (sorted, deduplicated) values.
    Cofinite(Vec<u64>),
    /// `{ a*n + r : n >= 0 }`
    Progression { a: u64, r: u64 },
    SparseImage(SparseKind),
    IntervalFamily { start: IntervalStart, length: IntervalLength },
    /// `(A + k) ∩ N`
    Shift(Box<SetSpec>, i64),
    Union(Vec<SetSpec>),
    Intersection(Vec<SetSpec>),
    Difference(Box<SetSpec>, Box<SetSpec>),
    /// Members of `inner` whose 0-based rank is `residue` modulo `modulus`.
    RankFilter { inner: Box<SetSpec>, modulus: u64, residue: u64 },
}

pub(crate) fn ipow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// `floor(n^(1/d))`.
pub(crate) fn iroot(n: u64, d: u32) -> u64 {
    if d == 1 || n < 2 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / d as f64).round() as u64;
    while x > 0 && ipow(x, d).map_or(true, |v| v > n) {
        x -= 1;
    }
    while ipow(x + 1, d).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

fn sorted_dedup(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v.dedup();
    v
}

impl IntervalStart {
    pub(crate) fn at(&self, j: u64) -> Option<u64> {
        match self {
            IntervalStart::Geometric(b) => ipow(*b, u32::try_from(j).ok()?),
            IntervalStart::Power(d) => ipow(j, *d),
        }
    }
}

impl IntervalLength {
    pub(crate) fn at(&self, j: u64) -> u64 {
        match self {
            IntervalLength::Const(c) => *c,
            IntervalLength::Linear => j,
        }
    }
}

impl SparseKind {
    pub(crate) fn at(&self, j: u64) -> Option<u64> {
        match self {
            SparseKind::Poly(d) => ipow(j, *d),
            SparseKind::Exponential(b) => ipow(*b, u32::try_from(j).ok()?),
        }
    }
}

impl SetSpec {
    pub fn empty() -> Self {
        SetSpec::Finite(Vec::new())
    }
    /// All of N, 0 included.
    pub fn naturals() -> Self {
        SetSpec::Cofinite(Vec::new())
    }
    /// N without 0.
    pub fn positive() -> Self {
        SetSpec::Cofinite(vec![0])
    }
    pub fn finite<I: IntoIterator<Item = u64>>(it: I) -> Self {
        SetSpec::Finite(sorted_dedup(it.into_iter().collect()))
    }
    pub fn cofinite<I: IntoIterator<Item = u64>>(it: I) -> Self {
        SetSpec::Cofinite(sorted_dedup(it.into_iter().collect()))
    }
    pub fn range(lo: u64, hi_inclusive: u64) -> Self {
        SetSpec::finite(lo..=hi_inclusive)
    }
    /// `{ n : n >= lo }`
    pub fn from(lo: u64) -> Self {
        SetSpec::Cofinite((0..lo).collect())
    }
    pub fn progression(a: u64, r: u64) -> Result<Self, SetError> {
        if a == 0 {
            return Err(SetError::ZeroStep);
        }
        if a == 1 {
            return Ok(SetSpec::from(r));
        }
        Ok(SetSpec::Progression { a, r })
    }
    pub fn evens() -> Self {
        SetSpec::Progression { a: 2, r: 0 }
    }
    pub fn odds() -> Self {
        SetSpec::Progression { a: 2, r: 1 }
    }
    pub fn poly(d: u32) -> Result<Self, SetError> {
        if d < 2 {
            return Err(SetError::BadDegree(d));
        }
        Ok(SetSpec::SparseImage(SparseKind::Poly(d)))
    }
    pub fn squares() -> Self {
        SetSpec::SparseImage(SparseKind::Poly(2))
    }
    pub fn powers(base: u64) -> Result<Self, SetError> {
        if base < 2 {
            return Err(SetError::BadBase(base));
        }
        Ok(SetSpec::SparseImage(SparseKind::Exponential(base)))
    }
    pub fn intervals(start: IntervalStart, length: IntervalLength) -> Result<Self, SetError> {
        match start {
            IntervalStart::Geometric(b) if b < 2 => Err(SetError::BadBase(b)),
            IntervalStart::Power(d) if d < 2 => Err(SetError::BadDegree(d)),
            _ => Ok(SetSpec::IntervalFamily { start, length }),
        }
    }

    pub fn is_structurally_empty(&self) -> bool {
        matches!(self, SetSpec::Finite(v) if v.is_empty())
    }
    pub fn is_structurally_naturals(&self) -> bool {
        matches!(self, SetSpec::Cofinite(v) if v.is_empty())
    }

    /// `(A + k) ∩ N`.
    pub fn shift(&self, k: i64) -> SetSpec {
        if k == 0 {
            return self.clone();
        }
        let mv = |x: u64| -> Option<u64> {
            let y = x as i128 + k as i128;
            if y >= 0 && y <= u64::MAX as i128 {
                Some(y as u64)
            } else {
                None
            }
        };
        match self {
            SetSpec::Finite(v) => SetSpec::Finite(v.iter().filter_map(|&x| mv(x)).collect()),
            SetSpec::Cofinite(v) => {
                if k > 0 {
                    let mut out: Vec<u64> = (0..k as u64).collect();
                    out.extend(v.iter().filter_map(|&x| mv(x)));
                    SetSpec::cofinite(out)
                } else {
                    SetSpec::cofinite(v.iter().filter_map(|&x| mv(x)))
                }
            }
            SetSpec::Progression { a, r } => {
                let nr = *r as i128 + k as i128;
                let nr = if nr >= 0 { nr as u64 } else { nr.rem_euclid(*a as i128) as u64 };
                SetSpec::Progression { a: *a, r: nr }
            }
            SetSpec::Shift(inner, j) if *j >= 0 || k < 0 => inner.shift_raw(j + k),
            SetSpec::Union(xs) => SetSpec::union(xs.iter().map(|x| x.shift(k)).collect()),
            _ => self.shift_raw(k),
        }
    }

    fn shift_raw(&self, k: i64) -> SetSpec {
        if k == 0 {
            self.clone()
        } else {
            SetSpec::Shift(Box::new(self.clone()), k)
        }
    }

    pub fn union(items: Vec<SetSpec>) -> SetSpec {
        let mut flat = Vec::new();
        let mut finite_acc: Vec<u64> = Vec::new();
        let mut stack = items;
        while let Some(s) = stack.pop() {
            match s {
                SetSpec::Union(xs) => stack.extend(xs),
                SetSpec::Finite(v) => finite_acc.extend(v),
                s if s.is_structurally_naturals() => return SetSpec::naturals(),
                s => flat.push(s),
            }
        }
        if !finite_acc.is_empty() {
            let fin = sorted_dedup(finite_acc);
            // drop finite members already covered by a simple sibling
            let fin: Vec<u64> = fin
                .into_iter()
                .filter(|&x| !flat.iter().any(|s| s.is_leaf() && s.contains(x)))
                .collect();
            if !fin.is_empty() {
                flat.push(SetSpec::Finite(fin));
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => SetSpec::empty(),
            1 => flat.pop().unwrap(),
            _ => SetSpec::Union(flat),
        }
    }

    pub fn intersection(items: Vec<SetSpec>) -> SetSpec {
        let mut flat = Vec::new();
        let mut stack = items;
        while let Some(s) = stack.pop() {
            match s {
                SetSpec::Intersection(xs) => stack.extend(xs),
                s if s.is_structurally_naturals() => {}
                s if s.is_structurally_empty() => return SetSpec::empty(),
                s => flat.push(s),
            }
        }
        flat.sort();
        flat.dedup();
        if let Some(pos) = flat.iter().position(|s| matches!(s, SetSpec::Finite(_))) {
            let fin = flat.remove(pos);
            if let SetSpec::Finite(v) = fin {
                return SetSpec::Finite(v.into_iter().filter(|&x| flat.iter().all(|s| s.contains(x))).collect());
            }
        }
        // drop members that structurally contain another member
        let snapshot = flat.clone();
        flat.retain(|b| !snapshot.iter().any(|a| a != b && a.structurally_subset(b)));
        match flat.len() {
            0 => SetSpec::naturals(),
            1 => flat.pop().unwrap(),
            _ => SetSpec::Intersection(flat),
        }
    }

    pub fn difference(a: SetSpec, b: SetSpec) -> SetSpec {
        if a.is_structurally_empty() || b.is_structurally_naturals() {
            return SetSpec::empty();
        }
        if b.is_structurally_empty() {
            return a;
        }
        if let SetSpec::Finite(v) = &a {
            return SetSpec::Finite(v.iter().copied().filter(|&x| !b.contains(x)).collect());
        }
        if a.structurally_subset(&b) {
            return SetSpec::empty();
        }
        if a.is_structurally_naturals() {
            match &b {
                SetSpec::Finite(v) => return SetSpec::Cofinite(v.clone()),
                SetSpec::Cofinite(v) => return SetSpec::Finite(v.clone()),
                _ => {}
            }
        }
        if let (SetSpec::Cofinite(v), SetSpec::Finite(w)) = (&a, &b) {
            return SetSpec::cofinite(v.iter().chain(w.iter()).copied());
        }
        SetSpec::Difference(Box::new(a), Box::new(b))
    }

    pub fn complement(&self) -> SetSpec {
        SetSpec::difference(SetSpec::naturals(), self.clone())
    }

    pub fn rank_filter(inner: SetSpec, modulus: u64, residue: u64) -> Result<SetSpec, SetError> {
        if modulus == 0 || residue >= modulus {
            return Err(SetError::BadRankFilter);
        }
        if modulus == 1 {
            return Ok(inner);
        }
        if let SetSpec::Finite(v) = &inner {
            return Ok(SetSpec::Finite(
                v.iter().enumerate().filter(|(i, _)| *i as u64 % modulus == residue).map(|(_, &x)| x).collect(),
            ));
        }
        Ok(SetSpec::RankFilter { inner: Box::new(inner), modulus, residue })
    }

    fn is_leaf(&self) -> bool {
        matches!(
            self,
            SetSpec::Finite(_)
                | SetSpec::Cofinite(_)
                | SetSpec::Progression { .. }
                | SetSpec::SparseImage(_)
                | SetSpec::IntervalFamily { .. }
        )
    }

    /// Conservative syntactic inclusion test: `true` only when `self ⊆ other`
    /// follows from the shape of the two trees.
    pub fn structurally_subset(&self, other: &SetSpec) -> bool {
        if self == other || self.is_structurally_empty() || other.is_structurally_naturals() {
            return true;
        }
        match (self, other) {
            (SetSpec::Finite(v), _) => v.iter().all(|&x| other.contains(x)),
            (SetSpec::Union(xs), _) => xs.iter().all(|x| x.structurally_subset(other)),
            (SetSpec::Intersection(xs), _) if xs.iter().any(|x| x.structurally_subset(other)) => true,
            (SetSpec::Difference(a, _), _) if a.structurally_subset(other) => true,
            (SetSpec::RankFilter { inner, .. }, _) if inner.structurally_subset(other) => true,
            (_, SetSpec::Union(ys)) if ys.iter().any(|y| self.structurally_subset(y)) => true,
            (_, SetSpec::Intersection(ys)) => ys.iter().all(|y| self.structurally_subset(y)),
            (SetSpec::Progression { a: a1, r: r1 }, SetSpec::Progression { a: a2, r: r2 }) => {
                a1 % a2 == 0 && r1 >= r2 && (r1 - r2) % a2 == 0
            }
            (SetSpec::Progression { r, .. }, SetSpec::Cofinite(v)) => v.last().map_or(true, |&m| *r > m),
            _ => false,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            SetSpec::Finite(v) => v.binary_search(&n).is_ok(),
            SetSpec::Cofinite(v) => v.binary_search(&n).is_err(),
            SetSpec::Progression { a, r } => n >= *r && (n - r) % a == 0,
            SetSpec::SparseImage(SparseKind::Poly(d)) => {
                let j = iroot(n, *d);
                j >= 1 && ipow(j, *d) == Some(n)
            }
            SetSpec::SparseImage(SparseKind::Exponential(b)) => {
                if n < *b {
                    return false;
                }
                let mut m = n;
                while m % b == 0 {
                    m /= b;
                }
                m == 1
            }
            SetSpec::IntervalFamily { start, length } => interval_family_contains(start, length, n),
            SetSpec::Shift(inner, k) => {
                let m = n as i128 - *k as i128;
                m >= 0 && m <= u64::MAX as i128 && inner.contains(m as u64)
            }
            SetSpec::Union(xs) => xs.iter().any(|x| x.contains(n)),
            SetSpec::Intersection(xs) => xs.iter().all(|x| x.contains(n)),
            SetSpec::Difference(a, b) => a.contains(n) && !b.contains(n),
            SetSpec::RankFilter { inner, modulus, residue } => {
                inner.contains(n) && (inner.counting(n) - 1) % modulus == *residue
            }
        }
    }

    /// Sorted members `<= n`.
    pub fn enumerate(&self, n: u64) -> Vec<u64> {
        match self {
            SetSpec::Finite(v) => v.iter().copied().take_while(|&x| x <= n).collect(),
            SetSpec::Cofinite(v) => (0..=n).filter(|x| v.binary_search(x).is_err()).collect(),
            SetSpec::Progression { a, r } => {
                if *r > n {
                    Vec::new()
                } else {
                    (0..=(n - r) / a).map(|i| r + i * a).collect()
                }
            }
            SetSpec::SparseImage(kind) => {
                let mut out = Vec::new();
                let mut j = 1u64;
                while let Some(v) = kind.at(j) {
                    if v > n {
                        break;
                    }
                    out.push(v);
                    j += 1;
                }
                out
            }
            SetSpec::IntervalFamily { start, length } => {
                let mut out = Vec::new();
                let mut j = 1u64;
                while let Some(k) = start.at(j) {
                    if k > n {
                        break;
                    }
                    let hi = k.saturating_add(length.at(j)).min(n);
                    out.extend(k..=hi);
                    j += 1;
                }
                sorted_dedup(out)
            }
            SetSpec::Shift(inner, k) => {
                let bound = (n as i128 - *k as i128).max(-1);
                if bound < 0 {
                    return Vec::new();
                }
                let bound = bound.min(u64::MAX as i128) as u64;
                inner
                    .enumerate(bound)
                    .into_iter()
                    .filter_map(|x| {
                        let y = x as i128 + *k as i128;
                        (y >= 0 && y <= n as i128).then_some(y as u64)
                    })
                    .collect()
            }
            SetSpec::Union(xs) => sorted_dedup(xs.iter().flat_map(|x| x.enumerate(n)).collect()),
            SetSpec::Intersection(xs) => {
                let mut iter = xs.iter();
                let first = match iter.next() {
                    Some(f) => f.enumerate(n),
                    None => return (0..=n).collect(),
                };
                iter.fold(first, |acc, x| merge_and(&acc, &x.enumerate(n)))
            }
            SetSpec::Difference(a, b) => merge_and_not(&a.enumerate(n), &b.enumerate(n)),
            SetSpec::RankFilter { inner, modulus, residue } => inner
                .enumerate(n)
                .into_iter()
                .enumerate()
                .filter(|(i, _)| *i as u64 % modulus == *residue)
                .map(|(_, x)| x)
                .collect(),
        }
    }

    /// `|A ∩ [0, n]|`.
    pub fn counting(&self, n: u64) -> u64 {
        match self {
            SetSpec::Finite(v) => v.partition_point(|&x| x <= n) as u64,
            SetSpec::Cofinite(v) => n + 1 - v.partition_point(|&x| x <= n) as u64,
            SetSpec::Progression { a, r } => {
                if *r > n {
                    0
                } else {
                    (n - r) / a + 1
                }
            }
            SetSpec::SparseImage(SparseKind::Poly(d)) => iroot(n, *d),
            _ => self.enumerate(n).len() as u64,
        }
    }

    /// Exact members when the set is provably finite.
    pub fn finite_members(&self) -> Option<Vec<u64>> {
        if let SetSpec::Finite(v) = self {
            return Some(v.clone());
        }
        if let Some(ev) = self.exact_periodic() {
            return ev.is_finite().then(|| ev.prefix.clone());
        }
        let g = self.growth();
        match (g.infinite, g.max_member) {
            (TriBool::No, Some(m)) if m <= FINITE_ENUMERATION_CAP => Some(self.enumerate(m)),
            _ => None,
        }
    }

    pub fn exact_periodic(&self) -> Option<EvPeriodic> {
        periodic::exact_periodic(self)
    }

    pub fn growth(&self) -> Growth {
        growth::growth(self)
    }

    pub fn is_infinite(&self) -> TriBool {
        self.growth().infinite
    }

    pub fn is_finite(&self) -> TriBool {
        self.is_infinite().not()
    }

    pub fn is_empty(&self) -> TriBool {
        if let SetSpec::Finite(v) = self {
            return TriBool::from_bool(v.is_empty());
        }
        if let Some(ev) = self.exact_periodic() {
            return TriBool::from_bool(ev.is_finite() && ev.prefix.is_empty());
        }
        match self.growth().infinite {
            TriBool::Yes => TriBool::No,
            TriBool::No => match self.finite_members() {
                Some(v) => TriBool::from_bool(v.is_empty()),
                None => TriBool::Unknown,
            },
            TriBool::Unknown => TriBool::Unknown,
        }
    }

    /// `A ⊆ B`, decided structurally or through periodic normal forms.
    pub fn is_subset(&self, other: &SetSpec) -> TriBool {
        if self.structurally_subset(other) {
            return TriBool::Yes;
        }
        SetSpec::difference(self.clone(), other.clone()).is_empty()
    }

    /// Rewrites eventually periodic sets into a canonical flat form.
    pub fn normalize(&self) -> SetSpec {
        match self {
            SetSpec::Finite(_) | SetSpec::Cofinite(_) | SetSpec::SparseImage(_) | SetSpec::IntervalFamily { .. } => {
                return self.clone()
            }
            SetSpec::Progression { a, .. } if *a > 1 => return self.clone(),
            _ => {}
        }
        if let Some(ev) = self.exact_periodic() {
            if let Some(s) = ev.to_spec() {
                return s;
            }
        }
        match self {
            SetSpec::Union(xs) => SetSpec::union(xs.iter().map(|x| x.normalize()).collect()),
            SetSpec::Intersection(xs) => SetSpec::intersection(xs.iter().map(|x| x.normalize()).collect()),
            SetSpec::Difference(a, b) => SetSpec::difference(a.normalize(), b.normalize()),
            SetSpec::Shift(a, k) => a.normalize().shift(*k),
            _ => self.clone(),
        }
    }
}

fn interval_family_contains(start: &IntervalStart, length: &IntervalLength, n: u64) -> bool {
    match start {
        IntervalStart::Geometric(_) => {
            let mut j = 1u64;
            while let Some(k) = start.at(j) {
                if k > n {
                    return false;
                }
                if n <= k.saturating_add(length.at(j)) {
                    return true;
                }
                j += 1;
            }
            false
        }
        IntervalStart::Power(d) => {
            let mut j = iroot(n, *d);
            while j >= 1 {
                let k = ipow(j, *d).unwrap_or(u64::MAX);
                let hi = k.saturating_add(length.at(j));
                if hi < n {
                    return false;
                }
                if k <= n {
                    return true;
                }
                j -= 1;
            }
            false
        }
    }
}

fn merge_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn merge_and_not(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut j, mut out) = (0, Vec::new());
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

fn join_list(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Finite(v) if v.is_empty() => write!(f, "empty"),
            SetSpec::Finite(v) => write!(f, "finite {}", join_list(v)),
            SetSpec::Cofinite(v) if v.is_empty() => write!(f, "all"),
            SetSpec::Cofinite(v) if v == &[0] => write!(f, "positive"),
            SetSpec::Cofinite(v) => write!(f, "cofinite {}", join_list(v)),
            SetSpec::Progression { a, r } => write!(f, "progression {a} {r}"),
            SetSpec::SparseImage(SparseKind::Poly(2)) => write!(f, "squares"),
            SetSpec::SparseImage(SparseKind::Poly(3)) => write!(f, "cubes"),
            SetSpec::SparseImage(SparseKind::Poly(d)) => write!(f, "poly {d}"),
            SetSpec::SparseImage(SparseKind::Exponential(b)) => write!(f, "powers {b}"),
            SetSpec::IntervalFamily { start, length } => {
                match start {
                    IntervalStart::Geometric(b) => write!(f, "intervals geometric {b}")?,
                    IntervalStart::Power(d) => write!(f, "intervals power {d}")?,
                }
                match length {
                    IntervalLength::Const(c) => write!(f, " length {c}"),
                    IntervalLength::Linear => write!(f, " length n"),
                }
            }
            SetSpec::Shift(a, k) => write!(f, "shift({}, {k})", Grouped(a)),
            SetSpec::Union(xs) => write_call(f, "union", xs),
            SetSpec::Intersection(xs) => write_call(f, "intersection", xs),
            SetSpec::Difference(a, b) => write!(f, "difference({a}, {b})"),
            SetSpec::RankFilter { inner, modulus, residue } => {
                write!(f, "rank({}, {modulus}, {residue})", Grouped(inner))
            }
        }
    }
}

/// A set argument followed by integers; lists are parenthesized so their
/// commas do not run into the arguments.
struct Grouped<'a>(&'a SetSpec);

impl fmt::Display for Grouped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0.to_string();
        if s.starts_with("finite ") || s.starts_with("cofinite ") {
            write!(f, "({s})")
        } else {
            f.write_str(&s)
        }
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, xs: &[SetSpec]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}
