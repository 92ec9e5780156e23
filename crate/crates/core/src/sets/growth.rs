use num_traits::{One, Zero};

use super::periodic::EvPeriodic;
use super::{IntervalLength, IntervalStart, SetSpec, SparseKind};
use crate::exact_arith::{rat, Rational};
use crate::logic::TriBool;

/// Polynomial growth bounds for a counting function `A(n) = |A ∩ [0, n]|`.
///
/// `upper = γ` certifies `A(n) = O(n^γ log^k n)` for some `k`.
/// `lower = Some(γ)` certifies `A(n) >= c n^γ` for some `c > 0` and all
/// large `n` (so the set is infinite).  Finite sets carry `upper = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Growth {
    pub infinite: TriBool,
    pub upper: Rational,
    pub lower: Option<Rational>,
    /// Natural density, when the set is eventually periodic.
    pub density: Option<Rational>,
    /// For provably finite sets, a bound on the largest member.
    pub max_member: Option<u64>,
}

impl Growth {
    pub fn finite_below(bound: u64) -> Self {
        Growth {
            infinite: TriBool::No,
            upper: Rational::zero(),
            lower: None,
            density: Some(Rational::zero()),
            max_member: Some(bound),
        }
    }

    fn empty() -> Self {
        Growth::finite_below(0)
    }

    fn exact(gamma: Rational) -> Self {
        Growth { infinite: TriBool::Yes, upper: gamma.clone(), lower: Some(gamma), density: None, max_member: None }
    }

    pub fn from_periodic(ev: &EvPeriodic) -> Self {
        if ev.is_finite() {
            return Growth::finite_below(ev.prefix.last().copied().unwrap_or(0));
        }
        Growth {
            infinite: TriBool::Yes,
            upper: Rational::one(),
            lower: Some(Rational::one()),
            density: Some(rat(ev.hits() as i64, ev.period as i64)),
            max_member: None,
        }
    }

    fn unknown_subset_of(g: &Growth) -> Self {
        Growth {
            infinite: if g.infinite.is_no() { TriBool::No } else { TriBool::Unknown },
            upper: g.upper.clone(),
            lower: None,
            density: None,
            max_member: g.max_member,
        }
    }

    fn union(self, other: Growth) -> Growth {
        let lower = match (self.lower, other.lower) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let max_member = match (self.max_member, other.max_member) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Growth {
            infinite: self.infinite.or(other.infinite),
            upper: self.upper.max(other.upper),
            lower,
            density: None,
            max_member,
        }
    }

    fn shifted(self, k: i64) -> Growth {
        let max_member = self.max_member.map(|m| (m as i128 + k as i128).clamp(0, u64::MAX as i128) as u64);
        Growth { density: None, max_member, ..self }
    }

    /// `A ∖ B` where `self` describes `A` and `b` describes `B`.
    fn minus(self, b: &Growth) -> Growth {
        if b.infinite.is_no() {
            return Growth { density: None, ..self };
        }
        match &self.lower {
            Some(la) if b.upper < *la => Growth { density: None, ..self },
            _ => Growth::unknown_subset_of(&self),
        }
    }

    /// `|A ∩ [0,n]| / n^α` tends to 0.
    pub fn density_zero(&self, alpha: &Rational) -> TriBool {
        if self.infinite.is_no() || self.upper < *alpha {
            return TriBool::Yes;
        }
        if let Some(l) = &self.lower {
            if l >= alpha {
                return TriBool::No;
            }
        }
        if *alpha == Rational::one() {
            if let Some(d) = &self.density {
                return TriBool::from_bool(d.is_zero());
            }
        }
        TriBool::Unknown
    }
}

fn leaf_growth(s: &SetSpec) -> Option<Growth> {
    Some(match s {
        SetSpec::SparseImage(SparseKind::Poly(d)) => Growth::exact(rat(1, *d as i64)),
        SetSpec::SparseImage(SparseKind::Exponential(_)) => Growth::exact(Rational::zero()),
        SetSpec::IntervalFamily { start, length } => match (start, length) {
            (IntervalStart::Geometric(_), _) => Growth::exact(Rational::zero()),
            (IntervalStart::Power(d), IntervalLength::Const(_)) => Growth::exact(rat(1, *d as i64)),
            (IntervalStart::Power(d), IntervalLength::Linear) => {
                Growth::exact(rat(2, *d as i64).min(Rational::one()))
            }
        },
        _ => return None,
    })
}

pub(crate) fn growth(s: &SetSpec) -> Growth {
    if let Some(ev) = s.exact_periodic() {
        return Growth::from_periodic(&ev);
    }
    if let Some(g) = leaf_growth(s) {
        return g;
    }
    match s {
        SetSpec::Shift(inner, k) => growth(inner).shifted(*k),
        SetSpec::Union(xs) => xs.iter().map(growth).reduce(Growth::union).unwrap_or_else(Growth::empty),
        SetSpec::Intersection(xs) => intersection_growth(xs, None),
        SetSpec::Difference(a, b) => match (b.exact_periodic(), b.as_ref()) {
            (Some(eb), _) => restricted_growth(a, &eb.complement()),
            // a \ (c \ d) = (a \ c) ∪ (a ∩ d)
            (None, SetSpec::Difference(c, d)) => growth(&SetSpec::union(vec![
                SetSpec::difference(a.as_ref().clone(), c.as_ref().clone()),
                SetSpec::intersection(vec![a.as_ref().clone(), d.as_ref().clone()]),
            ])),
            (None, _) => growth(a).minus(&growth(b)),
        },
        SetSpec::RankFilter { inner, .. } => {
            let g = growth(inner);
            Growth { density: None, ..g }
        }
        _ => Growth {
            infinite: TriBool::Unknown,
            upper: Rational::one(),
            lower: None,
            density: None,
            max_member: None,
        },
    }
}

fn intersection_growth(xs: &[SetSpec], restrict: Option<&EvPeriodic>) -> Growth {
    let mut per = restrict.cloned();
    let mut rest = Vec::new();
    for x in xs {
        match x.exact_periodic() {
            Some(ev) => {
                per = match per {
                    None => Some(ev),
                    Some(p) => match p.and(&ev) {
                        Some(q) => Some(q),
                        None => {
                            rest.push(x);
                            Some(p)
                        }
                    },
                }
            }
            None => rest.push(x),
        }
    }
    let per = match per {
        Some(p) => p,
        None => {
            let gs: Vec<Growth> = rest.iter().map(|x| growth(x)).collect();
            return generic_intersection(&gs);
        }
    };
    match rest.len() {
        0 => Growth::from_periodic(&per),
        1 => restricted_growth(rest[0], &per),
        _ => {
            let gs: Vec<Growth> = rest.iter().map(|x| restricted_growth(x, &per)).collect();
            generic_intersection(&gs)
        }
    }
}

fn generic_intersection(gs: &[Growth]) -> Growth {
    let upper = gs.iter().map(|g| g.upper.clone()).min().unwrap_or_else(Rational::one);
    let infinite = if gs.iter().any(|g| g.infinite.is_no()) { TriBool::No } else { TriBool::Unknown };
    let max_member = gs.iter().filter_map(|g| g.max_member).min();
    Growth { infinite, upper, lower: None, density: None, max_member }
}

/// Cycle of `base^j mod p` for `j >= 1`, and the number of exponents
/// before the cycle starts.
fn power_cycle(base: u64, p: u64) -> (Vec<u64>, u32) {
    let mut seen = std::collections::HashMap::new();
    let mut seq = Vec::new();
    let mut v = base % p;
    loop {
        if let Some(&i) = seen.get(&v) {
            return (seq[i..].to_vec(), i as u32);
        }
        seen.insert(v, seq.len());
        seq.push(v);
        v = ((v as u128 * base as u128) % p as u128) as u64;
    }
}

fn pow_mod(b: u64, e: u32, p: u64) -> u64 {
    let mut acc: u128 = 1 % p as u128;
    for _ in 0..e {
        acc = acc * (b as u128 % p as u128) % p as u128;
    }
    acc as u64
}

/// Growth of `s ∩ per`.
pub(crate) fn restricted_growth(s: &SetSpec, per: &EvPeriodic) -> Growth {
    if per.is_finite() {
        return Growth::finite_below(per.prefix.last().copied().unwrap_or(0));
    }
    if let Some(ev) = s.exact_periodic() {
        return match ev.and(per) {
            Some(x) => Growth::from_periodic(&x),
            None => Growth::unknown_subset_of(&Growth::from_periodic(&ev)),
        };
    }
    let p = per.period;
    let hit = |v: u64| per.mask[(v % p) as usize];
    // beyond the pre-period of the index pattern, members are confined to
    // residues that never hit, so everything lies below this bound
    let past = |pre: Option<u64>| Growth::finite_below(per.start.max(pre.unwrap_or(u64::MAX)));
    match s {
        SetSpec::SparseImage(SparseKind::Poly(d)) => {
            if (0..p).any(|j| hit(pow_mod(j, *d, p))) {
                growth(s)
            } else {
                past(Some(0))
            }
        }
        SetSpec::SparseImage(SparseKind::Exponential(b)) => {
            let (cycle, pre) = power_cycle(*b, p);
            if cycle.into_iter().any(hit) {
                growth(s)
            } else {
                past(b.checked_pow(pre + 1))
            }
        }
        SetSpec::IntervalFamily { start, length } => {
            let (starts, pre) = match start {
                IntervalStart::Geometric(b) => power_cycle(*b, p),
                IntervalStart::Power(d) => ((0..p).map(|j| pow_mod(j, *d, p)).collect(), 0),
            };
            let any_hit = match length {
                IntervalLength::Linear => per.hits() > 0,
                IntervalLength::Const(e) => {
                    starts.iter().any(|&k| (0..=(*e).min(p)).any(|i| hit(k + i)))
                }
            };
            if any_hit {
                growth(s)
            } else {
                let reach = start.at(pre as u64 + 1).and_then(|k| k.checked_add(length.at(pre as u64 + 1)));
                past(reach)
            }
        }
        SetSpec::Shift(inner, k) => {
            restricted_growth(inner, &per.shift(-*k)).shifted(*k)
        }
        SetSpec::Union(xs) => xs
            .iter()
            .map(|x| restricted_growth(x, per))
            .reduce(Growth::union)
            .unwrap_or_else(Growth::empty),
        SetSpec::Intersection(xs) => intersection_growth(xs, Some(per)),
        SetSpec::Difference(a, b) => match b.exact_periodic().and_then(|eb| per.and_not(&eb)) {
            Some(q) => restricted_growth(a, &q),
            None => restricted_growth(a, per).minus(&growth(b)),
        },
        SetSpec::RankFilter { inner, .. } => Growth::unknown_subset_of(&restricted_growth(inner, per)),
        _ => Growth::unknown_subset_of(&growth(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic(s: SetSpec) -> EvPeriodic {
        s.exact_periodic().unwrap()
    }

    #[test]
    fn squares_mod_three() {
        // squares are 0 or 1 mod 3, never 2
        let two_mod_three = periodic(SetSpec::Progression { a: 3, r: 2 });
        assert!(restricted_growth(&SetSpec::squares(), &two_mod_three).infinite.is_no());
        let one_mod_three = periodic(SetSpec::Progression { a: 3, r: 1 });
        assert!(restricted_growth(&SetSpec::squares(), &one_mod_three).infinite.is_yes());
    }

    #[test]
    fn powers_of_two_mod_three() {
        let zero = periodic(SetSpec::Progression { a: 3, r: 0 });
        assert!(restricted_growth(&SetSpec::powers(2).unwrap(), &zero).infinite.is_no());
    }

    #[test]
    fn density_decisions() {
        let half = rat(1, 2);
        assert!(SetSpec::squares().growth().density_zero(&rat(1, 3)).is_no());
        assert!(SetSpec::squares().growth().density_zero(&rat(2, 3)).is_yes());
        assert!(SetSpec::evens().growth().density_zero(&Rational::one()).is_no());
        assert!(SetSpec::powers(2).unwrap().growth().density_zero(&rat(1, 100)).is_yes());
        let diff = SetSpec::difference(SetSpec::evens(), SetSpec::squares());
        assert!(diff.growth().density_zero(&half).is_no());
    }

    #[test]
    fn shifted_intersection_is_exact() {
        let s = SetSpec::intersection(vec![SetSpec::squares().shift(1), SetSpec::Progression { a: 4, r: 0 }]);
        // j^2 + 1 is never 0 mod 4
        assert!(s.is_infinite().is_no());
    }
}
