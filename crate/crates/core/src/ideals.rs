//! Free ideals of `N` as decision objects.
//!
//! Every ideal in the supported grammar has the shape `base + P(U)`: a base
//! ideal (`Fin`, an order-α density ideal, or the full power set) enlarged by
//! all subsets of one principal set `U`.  `B_u` is `Fin + P(bounded part)`,
//! `D_u` is `Fin + P(divergent part)`, sums join bases and principal sets, and
//! `mod(B, I)` adds `B` to the principal set of `I`.  Membership then reduces
//! exactly to `A \ U ∈ base`.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{rat, Rational};
use crate::logic::TriBool;
use crate::sequences::ArithmeticSequence;
use crate::sets::SetSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("density order must lie in (0, 1], got {0}")]
    InvalidOrder(String),
    #[error("family member {index} ({set}) is not in the ideal")]
    NotInIdeal { index: u64, set: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdealSpec {
    Fin,
    /// `I_α`; `α = 1` is the density ideal `I_d`.
    Density(Rational),
    /// Generated by the b-bounded sets of the sequence.
    BU(ArithmeticSequence),
    /// Generated by the b-divergent sets of the sequence.
    DU(ArithmeticSequence),
    Sum(Box<IdealSpec>, Box<IdealSpec>),
    /// `P(B) + I`.
    PrincipalMod(SetSpec, Box<IdealSpec>),
    PowerSetAll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealFlags {
    pub p_ideal: TriBool,
    pub translation_invariant: TriBool,
}

/// The base ideal of the normal form, ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseIdeal {
    Fin,
    Density(Rational),
    All,
}

impl BaseIdeal {
    fn join(self, other: BaseIdeal) -> BaseIdeal {
        match (self, other) {
            (BaseIdeal::All, _) | (_, BaseIdeal::All) => BaseIdeal::All,
            (BaseIdeal::Density(a), BaseIdeal::Density(b)) => BaseIdeal::Density(a.max(b)),
            (d @ BaseIdeal::Density(_), BaseIdeal::Fin) | (BaseIdeal::Fin, d @ BaseIdeal::Density(_)) => d,
            (BaseIdeal::Fin, BaseIdeal::Fin) => BaseIdeal::Fin,
        }
    }

    pub fn member(&self, a: &SetSpec) -> TriBool {
        match self {
            BaseIdeal::All => TriBool::Yes,
            BaseIdeal::Fin => a.is_finite(),
            BaseIdeal::Density(alpha) => a.growth().density_zero(alpha),
        }
    }
}

/// `base + P(principal)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub base: BaseIdeal,
    pub principal: SetSpec,
}

impl NormalForm {
    pub fn member(&self, a: &SetSpec) -> TriBool {
        if a.structurally_subset(&self.principal) {
            return TriBool::Yes;
        }
        let rest = SetSpec::difference(a.clone(), self.principal.clone()).normalize();
        self.base.member(&rest)
    }

    /// The ideal is exactly `Fin`.
    pub fn is_fin(&self) -> TriBool {
        match self.base {
            BaseIdeal::Fin => self.principal.is_finite(),
            BaseIdeal::Density(_) => TriBool::No,
            BaseIdeal::All => TriBool::No,
        }
    }

    /// Translation invariance, assuming the base is translation invariant
    /// (all bases are): `base + P(U)` is invariant iff `U ± 1 \ U` lies in
    /// the base.
    pub fn translation_invariant(&self) -> TriBool {
        let u = &self.principal;
        TriBool::all([1i64, -1].into_iter().map(|k| {
            let moved = SetSpec::difference(u.shift(k), u.clone()).normalize();
            self.base.member(&moved)
        }))
    }
}

impl IdealSpec {
    pub fn density(alpha: Rational) -> Result<IdealSpec, IdealError> {
        if alpha <= Rational::zero() || alpha > Rational::one() {
            return Err(IdealError::InvalidOrder(alpha.to_string()));
        }
        Ok(IdealSpec::Density(alpha))
    }

    /// The density ideal `I_d`.
    pub fn natural_density() -> IdealSpec {
        IdealSpec::Density(Rational::one())
    }

    pub fn sum(a: IdealSpec, b: IdealSpec) -> IdealSpec {
        IdealSpec::Sum(Box::new(a), Box::new(b))
    }

    pub fn principal_mod(b: SetSpec, i: IdealSpec) -> IdealSpec {
        IdealSpec::PrincipalMod(b, Box::new(i))
    }

    pub fn normal_form(&self) -> NormalForm {
        match self {
            IdealSpec::Fin => NormalForm { base: BaseIdeal::Fin, principal: SetSpec::empty() },
            IdealSpec::Density(a) => NormalForm { base: BaseIdeal::Density(a.clone()), principal: SetSpec::empty() },
            IdealSpec::PowerSetAll => NormalForm { base: BaseIdeal::All, principal: SetSpec::empty() },
            IdealSpec::BU(seq) => NormalForm { base: BaseIdeal::Fin, principal: seq.bounded_part() },
            IdealSpec::DU(seq) => NormalForm { base: BaseIdeal::Fin, principal: seq.divergent_part() },
            IdealSpec::Sum(a, b) => {
                let (na, nb) = (a.normal_form(), b.normal_form());
                NormalForm {
                    base: na.base.join(nb.base),
                    principal: SetSpec::union(vec![na.principal, nb.principal]).normalize(),
                }
            }
            IdealSpec::PrincipalMod(set, inner) => {
                let n = inner.normal_form();
                NormalForm { base: n.base, principal: SetSpec::union(vec![n.principal, set.clone()]).normalize() }
            }
        }
    }

    pub fn member(&self, a: &SetSpec) -> TriBool {
        self.normal_form().member(a)
    }

    pub fn flags(&self) -> IdealFlags {
        let yes = IdealFlags { p_ideal: TriBool::Yes, translation_invariant: TriBool::Yes };
        let unknown = IdealFlags { p_ideal: TriBool::Unknown, translation_invariant: TriBool::Unknown };
        match self {
            IdealSpec::Fin | IdealSpec::Density(_) | IdealSpec::PowerSetAll => yes,
            IdealSpec::BU(_) | IdealSpec::DU(_) => unknown,
            IdealSpec::Sum(a, b) => {
                let (fa, fb) = (a.flags(), b.flags());
                let both = |x: TriBool, y: TriBool| if x.is_yes() && y.is_yes() { TriBool::Yes } else { TriBool::Unknown };
                IdealFlags {
                    p_ideal: both(fa.p_ideal, fb.p_ideal),
                    translation_invariant: both(fa.translation_invariant, fb.translation_invariant),
                }
            }
            IdealSpec::PrincipalMod(_, inner) => {
                let f = inner.flags();
                let ti = if f.translation_invariant.is_yes() {
                    self.normal_form().translation_invariant()
                } else {
                    TriBool::Unknown
                };
                IdealFlags { p_ideal: if f.p_ideal.is_yes() { TriBool::Yes } else { TriBool::Unknown }, translation_invariant: ti }
            }
        }
    }

    /// The hypotheses the classifier may rely on.  The declared flags are
    /// used when certified; otherwise the normal form decides.  Every
    /// `base + P(U)` is a P-ideal (a pseudounion of the parts outside `U`
    /// in the base, joined with `U`, covers the family), and it is
    /// translation invariant exactly when `U ± 1 \ U` lies in the base.
    pub fn verified_flags(&self) -> IdealFlags {
        let f = self.flags();
        let nf = self.normal_form();
        IdealFlags {
            p_ideal: TriBool::Yes,
            translation_invariant: if f.translation_invariant.is_yes() {
                TriBool::Yes
            } else {
                nf.translation_invariant()
            },
        }
    }

    /// Both flags needed by the full characterization are certified.
    pub fn is_ti_p_ideal(&self) -> bool {
        let f = self.flags();
        f.p_ideal.is_yes() && f.translation_invariant.is_yes()
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSpec::Fin => write!(f, "fin"),
            IdealSpec::Density(a) => write!(f, "density {a}"),
            IdealSpec::BU(_) => write!(f, "bu"),
            IdealSpec::DU(_) => write!(f, "du"),
            IdealSpec::Sum(a, b) => write!(f, "sum({a}, {b})"),
            IdealSpec::PrincipalMod(s, i) => write!(f, "mod({s}, {i})"),
            IdealSpec::PowerSetAll => write!(f, "all"),
        }
    }
}

/// `A ⊆^I B`, i.e. `A \ B ∈ I`.
pub fn almost_contained(a: &SetSpec, b: &SetSpec, ideal: &IdealSpec) -> TriBool {
    ideal.member(&SetSpec::difference(a.clone(), b.clone()).normalize())
}

/// `A ⊆_I B`, i.e. `A ⊆ B` and `B \ A ∈ I`.
pub fn contained_mod(a: &SetSpec, b: &SetSpec, ideal: &IdealSpec) -> TriBool {
    let sub = a.is_subset(b);
    if sub.is_no() {
        return TriBool::No;
    }
    sub.and(ideal.member(&SetSpec::difference(b.clone(), a.clone()).normalize()))
}

/// Whether every integer shift of `A` (clipped to `N`) stays in `I`.
///
/// Invariant ideals answer at once.  Otherwise shifts up to `k_max` are
/// checked: a shift provably outside `I` gives `No`, and surviving all
/// checks without a symbolic argument gives `Unknown`.
pub fn translation_invariant_on(ideal: &IdealSpec, a: &SetSpec, k_max: u64) -> TriBool {
    if ideal.verified_flags().translation_invariant.is_yes() {
        return TriBool::Yes;
    }
    let nf = ideal.normal_form();
    if a.is_finite().is_yes() || nf.base.member(a).is_yes() {
        return TriBool::Yes;
    }
    for k in 1..=k_max as i64 {
        if [k, -k].iter().any(|&s| nf.member(&a.shift(s)).is_no()) {
            return TriBool::No;
        }
    }
    TriBool::Unknown
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IbdIdiv {
    /// `X ∈ I + B_u`: `X` is b-bounded mod `I`.
    pub in_ibd: TriBool,
    /// `X ∈ I + D_u`: `X` is b-divergent mod `I`.
    pub in_idiv: TriBool,
}

pub fn ibd_idiv_member(seq: &ArithmeticSequence, ideal: &IdealSpec, x: &SetSpec) -> IbdIdiv {
    let div_part = SetSpec::intersection(vec![x.clone(), seq.divergent_part()]).normalize();
    let bnd_part = SetSpec::intersection(vec![x.clone(), seq.bounded_part()]).normalize();
    IbdIdiv { in_ibd: ideal.member(&div_part), in_idiv: ideal.member(&bnd_part) }
}

/// `{n ∈ A : b_n <= k}` restricted to the bounded pieces; the divergent
/// pieces contribute only finitely many indices, which are included.
pub fn threshold_subset(seq: &ArithmeticSequence, a: &SetSpec, k: u64) -> SetSpec {
    use crate::sequences::PieceKind;
    let mut parts = Vec::new();
    for p in seq.partition() {
        match &p.kind {
            PieceKind::Const(b) if *b <= k => parts.push(p.set.clone()),
            PieceKind::Const(_) => {}
            PieceKind::Divergent(r) => {
                let t = crate::digits::div_threshold(r, k.saturating_add(1));
                if t > 1 {
                    parts.push(SetSpec::intersection(vec![p.set.clone(), SetSpec::range(1, t - 1)]));
                }
            }
        }
    }
    SetSpec::intersection(vec![a.clone(), SetSpec::union(parts)]).normalize()
}

/// When every b-bounded subset of `A` lies in `I`, returns the b-divergent
/// set `B = A \ C ⊆_I A` with `C` the bounded part of `A`.
pub fn divergent_core(seq: &ArithmeticSequence, ideal: &IdealSpec, a: &SetSpec) -> Option<SetSpec> {
    let bounded = SetSpec::intersection(vec![a.clone(), seq.bounded_part()]).normalize();
    ideal
        .member(&bounded)
        .is_yes()
        .then(|| SetSpec::difference(a.clone(), bounded).normalize())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pseudounion {
    Found { union: SetSpec, certificate: String },
    Unknown(String),
}

/// Pseudounion of the family `j ↦ family(j)` for `j <= j_max`.
pub fn pseudounion(
    ideal: &IdealSpec,
    family: &dyn Fn(u64) -> SetSpec,
    j_max: u64,
) -> Result<Pseudounion, IdealError> {
    let mut members = Vec::new();
    let mut undecided = Vec::new();
    for j in 0..=j_max {
        let s = family(j);
        match ideal.member(&s) {
            TriBool::Yes => {}
            TriBool::No => return Err(IdealError::NotInIdeal { index: j, set: s.to_string() }),
            TriBool::Unknown => undecided.push(j),
        }
        members.push(s);
    }
    if !undecided.is_empty() {
        return Ok(Pseudounion::Unknown(format!("membership of family members {undecided:?} is undecided")));
    }
    let union = SetSpec::union(members).normalize();
    Ok(match ideal.member(&union) {
        TriBool::Yes => Pseudounion::Found {
            certificate: format!("finite union of {} members of {ideal}, each in the ideal", j_max + 1),
            union,
        },
        _ => Pseudounion::Unknown("union membership undecided".into()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SplitResult {
    Found { bounded: SetSpec, divergent: SetSpec, certificate: Vec<String> },
    None(String),
    Unknown(String),
}

/// Partition `N = B ⊔ D` witnessing the I-splitting property, built from
/// the ratio pieces.
pub fn splitting_partition(seq: &ArithmeticSequence, ideal: &IdealSpec) -> SplitResult {
    let bnd = seq.bounded_part();
    let div = seq.divergent_part();
    let (b_in, d_in) = (ideal.member(&bnd), ideal.member(&div));
    if b_in.is_yes() {
        return SplitResult::Found {
            bounded: SetSpec::empty(),
            divergent: SetSpec::naturals(),
            certificate: vec![
                format!("bounded part {bnd} lies in {ideal}"),
                format!("N is b-divergent mod {ideal}: N \\ ({div}) is in the ideal"),
            ],
        };
    }
    if d_in.is_yes() {
        return SplitResult::Found {
            bounded: SetSpec::naturals(),
            divergent: SetSpec::empty(),
            certificate: vec![
                format!("divergent part {div} lies in {ideal}"),
                format!("N is b-bounded mod {ideal}: N \\ ({bnd}) is in the ideal"),
            ],
        };
    }
    if b_in.is_no() && d_in.is_no() {
        return SplitResult::Found {
            bounded: bnd.clone(),
            divergent: div.clone(),
            certificate: vec![
                format!("B = {bnd} has bounded ratios and is not in {ideal}"),
                format!("D = {div} has divergent ratios and is not in {ideal}"),
            ],
        };
    }
    SplitResult::Unknown(format!("cannot decide whether {bnd} or {div} lies in {ideal}"))
}

/// One row of the diagonal pseudounion check for the chain `A_n = N \ 2^n N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DlRow {
    pub n: u32,
    /// Density of `N \ A_n = 2^n N`, computed from its periodic form.
    pub complement_density: Rational,
    /// `N \ A_n ∈ I_d` (expected `No`).
    pub complement_in_id: TriBool,
    pub t_n: u64,
    /// `|U* ∩ [t_n, M]|` for the diagonal pseudounion `U`.
    pub count: u64,
    /// `count / (M - t_n + 1)`.
    pub ratio: Rational,
    /// `count <= (M - t_n + 1)/2^n + 1`.
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DlReport {
    pub horizon: u64,
    pub rows: Vec<DlRow>,
}

impl DlReport {
    pub fn all_within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound && r.complement_in_id.is_no())
    }
}

fn dl_cut(j: u32) -> u64 {
    4u64.saturating_pow(j)
}

/// Multiples of `m` in `[lo, hi]`.
fn multiples_in(m: u64, lo: u64, hi: u64) -> u64 {
    if lo > hi {
        return 0;
    }
    hi / m - if lo == 0 { 0 } else { (lo - 1) / m } + u64::from(lo == 0)
}

/// `|U* ∩ [lo, horizon]|` where `U = ⋃_j (A_j ∩ [4^j, ∞))`; on `[4^j, 4^{j+1})`
/// the complement of `U` is exactly the multiples of `2^j`.
pub fn dl_complement_count(lo: u64, horizon: u64) -> u64 {
    let mut total = 0;
    let mut j = 0u32;
    while dl_cut(j) <= horizon {
        let block_lo = if j == 0 { lo } else { dl_cut(j).max(lo) };
        let block_hi = (dl_cut(j + 1) - 1).min(horizon);
        total += multiples_in(1u64 << j, block_lo, block_hi);
        j += 1;
    }
    total
}

/// Membership in the complement of the diagonal pseudounion (brute force).
pub fn dl_complement_contains(m: u64) -> bool {
    (0..63u32).take_while(|&j| dl_cut(j) <= m).all(|j| m % (1u64 << j) == 0)
}

/// The density ideal fails the diagonal-limit property: every checked
/// pseudounion complement is squeezed into `2^n N` beyond `t_n`.
pub fn dl_demo(n_max: u32, horizon: u64) -> DlReport {
    let id = IdealSpec::natural_density();
    let rows = (1..=n_max)
        .map(|n| {
            let b_n = SetSpec::progression(1u64 << n, 0).expect("nonzero step");
            let complement_density = b_n
                .exact_periodic()
                .map(|ev| rat(ev.hits() as i64, ev.period as i64))
                .unwrap_or_else(Rational::zero);
            let t_n = dl_cut(n);
            let count = dl_complement_count(t_n, horizon);
            let len = horizon.saturating_sub(t_n) + 1;
            let within_bound = count as u128 <= (len as u128) / (1u128 << n) + 1;
            DlRow {
                n,
                complement_density,
                complement_in_id: id.member(&b_n),
                t_n,
                count,
                ratio: rat(count as i64, len as i64),
                within_bound,
            }
        })
        .collect();
    DlReport { horizon, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::RatioRule;

    fn id() -> IdealSpec {
        IdealSpec::natural_density()
    }

    fn split_seq() -> ArithmeticSequence {
        ArithmeticSequence::new(RatioRule::Piecewise {
            pieces: vec![(SetSpec::evens(), RatioRule::Constant(2))],
            default: Some(Box::new(RatioRule::Affine { a: 1, c: 0 })),
        })
        .unwrap()
    }

    #[test]
    fn density_membership() {
        assert_eq!(id().member(&SetSpec::squares()), TriBool::Yes);
        assert_eq!(id().member(&SetSpec::evens()), TriBool::No);
        let half = IdealSpec::density(rat(1, 2)).unwrap();
        assert_eq!(half.member(&SetSpec::squares()), TriBool::No);
        assert_eq!(half.member(&SetSpec::poly(3).unwrap()), TriBool::Yes);
        assert!(IdealSpec::density(rat(3, 2)).is_err());
    }

    #[test]
    fn relations() {
        let n = SetSpec::naturals();
        let ev = SetSpec::evens();
        let sq = SetSpec::squares();
        assert_eq!(almost_contained(&ev, &n, &id()), TriBool::Yes);
        assert_eq!(almost_contained(&n, &ev, &id()), TriBool::No);
        assert_eq!(almost_contained(&SetSpec::union(vec![sq.clone(), ev.clone()]), &ev, &id()), TriBool::Yes);
        let four = SetSpec::progression(4, 0).unwrap();
        assert_eq!(contained_mod(&four, &ev, &id()), TriBool::No);
        assert_eq!(contained_mod(&SetSpec::difference(ev.clone(), sq.clone()), &ev, &id()), TriBool::Yes);
        assert_eq!(contained_mod(&sq, &sq, &IdealSpec::Fin), TriBool::Yes);
    }

    #[test]
    fn bu_du_and_sums() {
        let u = split_seq();
        let bu = IdealSpec::BU(u.clone());
        let du = IdealSpec::DU(u.clone());
        assert_eq!(bu.member(&SetSpec::evens()), TriBool::Yes);
        assert_eq!(bu.member(&SetSpec::odds()), TriBool::No);
        assert_eq!(du.member(&SetSpec::odds()), TriBool::Yes);
        let s = IdealSpec::sum(bu.clone(), du.clone());
        assert_eq!(s.member(&SetSpec::naturals()), TriBool::Yes);
        let m = IdealSpec::sum(bu, id());
        assert_eq!(m.member(&SetSpec::union(vec![SetSpec::evens(), SetSpec::squares()])), TriBool::Yes);
        assert_eq!(m.member(&SetSpec::odds()), TriBool::No);
        assert_eq!(IdealSpec::PowerSetAll.member(&SetSpec::naturals()), TriBool::Yes);
        assert_eq!(m.to_string(), "sum(bu, density 1)");
    }

    #[test]
    fn flags_and_translation() {
        assert!(id().is_ti_p_ideal());
        assert_eq!(IdealSpec::BU(split_seq()).flags().translation_invariant, TriBool::Unknown);
        assert_eq!(translation_invariant_on(&id(), &SetSpec::squares(), 4), TriBool::Yes);
        assert_eq!(translation_invariant_on(&IdealSpec::Fin, &SetSpec::finite([1, 5]), 4), TriBool::Yes);
        assert_eq!(translation_invariant_on(&IdealSpec::BU(split_seq()), &SetSpec::evens(), 3), TriBool::No);
        // P(evens) + Fin is not invariant, P(4N ∪ (4N+1)) + I_d is not either,
        // while P(squares) + I_d is.
        let pm = IdealSpec::principal_mod(SetSpec::evens(), IdealSpec::Fin);
        assert_eq!(pm.flags().translation_invariant, TriBool::No);
        let pm2 = IdealSpec::principal_mod(SetSpec::squares(), id());
        assert_eq!(pm2.flags().translation_invariant, TriBool::Yes);
    }

    #[test]
    fn ibd_idiv() {
        let u = split_seq();
        let r = ibd_idiv_member(&u, &id(), &SetSpec::naturals());
        assert_eq!((r.in_ibd, r.in_idiv), (TriBool::No, TriBool::No));
        assert_eq!(ibd_idiv_member(&u, &IdealSpec::Fin, &SetSpec::evens()).in_ibd, TriBool::Yes);
        let e = ArithmeticSequence::factorial();
        assert_eq!(ibd_idiv_member(&e, &IdealSpec::Fin, &SetSpec::naturals()).in_idiv, TriBool::Yes);
    }

    #[test]
    fn threshold_family_and_core() {
        let u = split_seq();
        let a = SetSpec::naturals();
        let t5 = threshold_subset(&u, &a, 5);
        assert!(t5.contains(4) && t5.contains(5) && !t5.contains(7));
        let odds = SetSpec::odds();
        let core = divergent_core(&u, &id(), &odds).unwrap();
        assert_eq!(u.classify_ratio_behavior(&core), crate::sequences::RatioBehavior::Divergent);
        assert_eq!(contained_mod(&core, &odds, &id()), TriBool::Yes);
        assert!(divergent_core(&u, &id(), &a).is_none());
    }

    #[test]
    fn pseudounions() {
        let fin = |j: u64| SetSpec::finite([j]);
        match pseudounion(&IdealSpec::Fin, &fin, 10).unwrap() {
            Pseudounion::Found { union, .. } => assert_eq!(union, SetSpec::range(0, 10).normalize()),
            other => panic!("{other:?}"),
        }
        let shifted = |j: u64| SetSpec::squares().shift(j as i64);
        assert!(matches!(pseudounion(&id(), &shifted, 5).unwrap(), Pseudounion::Found { .. }));
        let bad = |_: u64| SetSpec::evens();
        assert!(matches!(pseudounion(&id(), &bad, 2), Err(IdealError::NotInIdeal { index: 0, .. })));
    }

    #[test]
    fn splitting() {
        let u = split_seq();
        match splitting_partition(&u, &IdealSpec::Fin) {
            SplitResult::Found { bounded, divergent, .. } => {
                assert_eq!(bounded, SetSpec::evens());
                assert_eq!(divergent, SetSpec::odds());
            }
            other => panic!("{other:?}"),
        }
        match splitting_partition(&ArithmeticSequence::constant(2).unwrap(), &id()) {
            SplitResult::Found { bounded, divergent, .. } => {
                assert!(bounded.is_structurally_naturals());
                assert!(divergent.is_structurally_empty());
            }
            other => panic!("{other:?}"),
        }
        match splitting_partition(&ArithmeticSequence::factorial(), &IdealSpec::Fin) {
            SplitResult::Found { bounded, divergent, .. } => {
                assert!(bounded.is_structurally_empty());
                assert!(divergent.is_structurally_naturals());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bu_cap_du_is_fin() {
        let u = split_seq();
        let (bu, du) = (IdealSpec::BU(u.clone()), IdealSpec::DU(u));
        let samples = [
            SetSpec::evens(),
            SetSpec::odds(),
            SetSpec::squares(),
            SetSpec::finite([1, 2, 3]),
            SetSpec::powers(2).unwrap(),
            SetSpec::progression(4, 1).unwrap(),
        ];
        for s in samples {
            if bu.member(&s).is_yes() && du.member(&s).is_yes() {
                assert_eq!(s.is_finite(), TriBool::Yes, "{s}");
            }
        }
    }

    #[test]
    fn dl_counts_match_brute_force() {
        for (lo, hi) in [(0, 300), (4, 1000), (16, 5000), (64, 4096)] {
            let brute = (lo..=hi).filter(|&m| dl_complement_contains(m)).count() as u64;
            assert_eq!(dl_complement_count(lo, hi), brute, "[{lo}, {hi}]");
        }
        let report = dl_demo(12, 1 << 30);
        assert!(report.all_within_bound());
        assert_eq!(report.rows[2].complement_density, rat(1, 8));
    }
}
