use num_integer::Integer;

use super::SetSpec;

/// Largest period kept when combining residue masks.
pub(crate) const MAX_PERIOD: u64 = 1 << 20;
/// Largest explicit prefix scanned when aligning two normal forms.
const MAX_START: u64 = 1 << 22;

/// A set that agrees with a periodic mask from `start` onwards.
///
/// For `n >= start`, membership is `mask[n % period]`; below `start` the
/// members are listed in `prefix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvPeriodic {
    pub start: u64,
    pub period: u64,
    pub mask: Vec<bool>,
    pub prefix: Vec<u64>,
}

impl EvPeriodic {
    pub fn contains(&self, n: u64) -> bool {
        if n < self.start {
            self.prefix.binary_search(&n).is_ok()
        } else {
            self.mask[(n % self.period) as usize]
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    /// Number of residues hit per period.
    pub fn hits(&self) -> u64 {
        self.mask.iter().filter(|&&b| b).count() as u64
    }

    fn finite(members: Vec<u64>) -> Self {
        let start = members.last().map_or(0, |m| m + 1);
        EvPeriodic { start, period: 1, mask: vec![false], prefix: members }
    }

    fn cofinite(missing: &[u64]) -> Self {
        let start = missing.last().map_or(0, |m| m + 1);
        let prefix = (0..start).filter(|x| missing.binary_search(x).is_err()).collect();
        EvPeriodic { start, period: 1, mask: vec![true], prefix }
    }

    pub fn combine(&self, other: &EvPeriodic, op: impl Fn(bool, bool) -> bool) -> Option<EvPeriodic> {
        let period = self.period.lcm(&other.period);
        if period > MAX_PERIOD {
            return None;
        }
        let start = self.start.max(other.start);
        if start > MAX_START {
            return None;
        }
        let mask = (0..period)
            .map(|t| op(self.mask[(t % self.period) as usize], other.mask[(t % other.period) as usize]))
            .collect();
        let prefix = (0..start).filter(|&n| op(self.contains(n), other.contains(n))).collect();
        Some(EvPeriodic { start, period, mask, prefix }.reduced())
    }

    pub fn and(&self, other: &EvPeriodic) -> Option<EvPeriodic> {
        self.combine(other, |a, b| a && b)
    }

    pub fn or(&self, other: &EvPeriodic) -> Option<EvPeriodic> {
        self.combine(other, |a, b| a || b)
    }

    pub fn and_not(&self, other: &EvPeriodic) -> Option<EvPeriodic> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> EvPeriodic {
        EvPeriodic {
            start: self.start,
            period: self.period,
            mask: self.mask.iter().map(|b| !b).collect(),
            prefix: (0..self.start).filter(|n| self.prefix.binary_search(n).is_err()).collect(),
        }
    }

    /// `(A + k) ∩ N`.
    pub fn shift(&self, k: i64) -> EvPeriodic {
        let p = self.period as i128;
        let new_start = (self.start as i128 + k as i128).max(0) as u64;
        let mask = (0..self.period)
            .map(|t| self.mask[((t as i128 - k as i128).rem_euclid(p)) as usize])
            .collect();
        let prefix = self
            .prefix
            .iter()
            .filter_map(|&x| {
                let y = x as i128 + k as i128;
                (y >= 0).then_some(y as u64)
            })
            .filter(|&y| y < new_start)
            .collect();
        EvPeriodic { start: new_start, period: self.period, mask, prefix }.reduced()
    }

    /// Shrinks period and start to their minimal values.
    fn reduced(mut self) -> EvPeriodic {
        let p = self.period;
        let hits = self.hits();
        for d in divisors(p) {
            // a mask with period d hits a multiple of p / d residues
            if d < p && hits % (p / d) == 0 && (0..p).all(|t| self.mask[t as usize] == self.mask[(t % d) as usize]) {
                self.mask.truncate(d as usize);
                self.period = d;
                break;
            }
        }
        while self.start > 0 {
            let n = self.start - 1;
            let periodic_says = self.mask[(n % self.period) as usize];
            let actual = self.prefix.last() == Some(&n);
            if periodic_says != actual {
                break;
            }
            if actual {
                self.prefix.pop();
            }
            self.start = n;
        }
        self
    }

    /// Canonical flat description, when the residue pattern is small.
    pub fn to_spec(&self) -> Option<SetSpec> {
        if self.is_finite() {
            return Some(SetSpec::Finite(self.prefix.clone()));
        }
        if self.is_cofinite() {
            let missing: Vec<u64> = (0..self.start).filter(|n| self.prefix.binary_search(n).is_err()).collect();
            return Some(SetSpec::Cofinite(missing));
        }
        let p = self.period;
        if p > 64 {
            return None;
        }
        let residues: Vec<u64> = (0..p).filter(|&t| self.mask[t as usize]).collect();
        if residues.len() > 16 {
            return None;
        }
        let mut covered: Vec<u64> = Vec::new();
        let mut parts = Vec::new();
        for t in residues {
            let s = self.start;
            let mut n0 = s + (t + p - s % p) % p;
            while n0 >= p && self.prefix.binary_search(&(n0 - p)).is_ok() {
                n0 -= p;
                covered.push(n0);
            }
            parts.push(SetSpec::Progression { a: p, r: n0 });
        }
        let rest: Vec<u64> = self.prefix.iter().copied().filter(|x| !covered.contains(x)).collect();
        if !rest.is_empty() {
            parts.push(SetSpec::Finite(rest));
        }
        Some(SetSpec::union(parts))
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub(crate) fn exact_periodic(s: &SetSpec) -> Option<EvPeriodic> {
    match s {
        SetSpec::Finite(v) => Some(EvPeriodic::finite(v.clone())),
        SetSpec::Cofinite(v) => {
            if v.last().map_or(false, |&m| m > MAX_START) {
                return None;
            }
            Some(EvPeriodic::cofinite(v))
        }
        SetSpec::Progression { a, r } => {
            if *a > MAX_PERIOD {
                return None;
            }
            let mut mask = vec![false; *a as usize];
            mask[(r % a) as usize] = true;
            Some(EvPeriodic { start: *r, period: *a, mask, prefix: Vec::new() }.reduced())
        }
        SetSpec::SparseImage(_) | SetSpec::IntervalFamily { .. } => None,
        SetSpec::Shift(inner, k) => Some(exact_periodic(inner)?.shift(*k)),
        SetSpec::Union(xs) => union_periodic(xs),
        SetSpec::Intersection(xs) => {
            let mut acc = EvPeriodic::cofinite(&[]);
            for x in xs {
                acc = acc.and(&exact_periodic(x)?)?;
            }
            Some(acc)
        }
        SetSpec::Difference(a, b) => exact_periodic(a)?.and_not(&exact_periodic(b)?),
        SetSpec::RankFilter { inner, modulus, residue } => {
            let ev = exact_periodic(inner)?;
            rank_filter_periodic(&ev, *modulus, *residue)
        }
    }
}

/// Unions are marked into one mask over the common period, so a union of
/// many progressions costs one pass rather than one pass per member.
fn union_periodic(xs: &[SetSpec]) -> Option<EvPeriodic> {
    let mut progressions = Vec::new();
    let mut others = Vec::new();
    for x in xs {
        match x {
            SetSpec::Progression { a, r } if *a <= MAX_PERIOD => progressions.push((*a, *r)),
            _ => others.push(exact_periodic(x)?),
        }
    }
    let mut period = 1u64;
    for p in progressions.iter().map(|&(a, _)| a).chain(others.iter().map(|o| o.period)) {
        period = period.lcm(&p);
        if period > MAX_PERIOD {
            return None;
        }
    }
    let start = progressions.iter().map(|&(_, r)| r).chain(others.iter().map(|o| o.start)).max().unwrap_or(0);
    if start > MAX_START {
        return None;
    }
    let mut mask = vec![false; period as usize];
    let mut prefix = Vec::new();
    for &(a, r) in &progressions {
        for t in (r % a..period).step_by(a as usize) {
            mask[t as usize] = true;
        }
        prefix.extend((r..start).step_by(a as usize));
    }
    for o in &others {
        for t in (0..o.period).filter(|&t| o.mask[t as usize]) {
            for u in (t..period).step_by(o.period as usize) {
                mask[u as usize] = true;
            }
        }
        prefix.extend(o.prefix.iter().copied());
        prefix.extend((o.start..start).filter(|&n| o.contains(n)));
    }
    prefix.sort_unstable();
    prefix.dedup();
    Some(EvPeriodic { start, period, mask, prefix }.reduced())
}

/// Every `modulus`-th member of an eventually periodic set is again
/// eventually periodic, with period `P * m / gcd(c, m)` where `c` counts
/// hits per period.
fn rank_filter_periodic(ev: &EvPeriodic, m: u64, r: u64) -> Option<EvPeriodic> {
    if ev.is_finite() {
        let members = ev.prefix.iter().enumerate().filter(|(i, _)| *i as u64 % m == r).map(|(_, &x)| x).collect();
        return Some(EvPeriodic::finite(members));
    }
    let c = ev.hits();
    let period = ev.period.checked_mul(m / c.gcd(&m))?;
    if period > MAX_PERIOD {
        return None;
    }
    let start = ev.start;
    let end = start.checked_add(period)?;
    if end > MAX_START {
        return None;
    }
    let mut rank = ev.prefix.len() as u64;
    let mut mask = vec![false; period as usize];
    for n in start..end {
        if ev.contains(n) {
            mask[(n % period) as usize] = rank % m == r;
            rank += 1;
        }
    }
    let prefix = ev.prefix.iter().enumerate().filter(|(i, _)| *i as u64 % m == r).map(|(_, &x)| x).collect();
    Some(EvPeriodic { start, period, mask, prefix }.reduced())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_periodic_spec() -> impl Strategy<Value = SetSpec> {
        let leaf = prop_oneof![
            proptest::collection::vec(0u64..40, 0..5).prop_map(SetSpec::finite),
            proptest::collection::vec(0u64..40, 0..5).prop_map(SetSpec::cofinite),
            (1u64..7, 0u64..10).prop_map(|(a, r)| SetSpec::progression(a, r).unwrap()),
        ];
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 1..3).prop_map(SetSpec::Union),
                proptest::collection::vec(inner.clone(), 1..3).prop_map(SetSpec::Intersection),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| SetSpec::Difference(Box::new(a), Box::new(b))),
                (inner.clone(), -5i64..5).prop_map(|(a, k)| SetSpec::Shift(Box::new(a), k)),
                (inner, 1u64..4).prop_map(|(a, m)| SetSpec::RankFilter { inner: Box::new(a), modulus: m, residue: 0 }),
            ]
        })
    }

    #[test]
    fn wide_unions_of_progressions() {
        let p = 50_021u64;
        let parts: Vec<SetSpec> = (0..p).filter(|t| t % 3 != 0).map(|t| SetSpec::Progression { a: p, r: 7 + t }).collect();
        let ev = exact_periodic(&SetSpec::Union(parts)).expect("periodic");
        for n in 7..7 + 2 * p {
            assert_eq!(ev.contains(n), (n - 7) % p % 3 != 0, "n = {n}");
        }
        assert!(!ev.contains(6));
    }

    proptest! {
        #[test]
        fn normal_form_agrees_with_membership(s in arb_periodic_spec()) {
            let ev = exact_periodic(&s).expect("periodic");
            for n in 0..300u64 {
                prop_assert_eq!(ev.contains(n), s.contains(n), "n={} s={}", n, s);
            }
            if let Some(flat) = ev.to_spec() {
                for n in 0..300u64 {
                    prop_assert_eq!(flat.contains(n), s.contains(n));
                }
            }
        }
    }

    #[test]
    fn rank_filter_of_odds() {
        let s = SetSpec::rank_filter(SetSpec::odds(), 2, 0).unwrap();
        let ev = exact_periodic(&s).unwrap();
        assert_eq!(ev.to_spec().unwrap(), SetSpec::Progression { a: 4, r: 1 });
    }

    #[test]
    fn complement_of_progression() {
        let ev = exact_periodic(&SetSpec::Progression { a: 3, r: 0 }).unwrap().complement();
        let flat = ev.to_spec().unwrap();
        assert_eq!(flat.enumerate(8), vec![1, 2, 4, 5, 7, 8]);
    }
}
