//! Rule-based decision of whether `x̄` is topologically `u_I`-torsion.
//!
//! Every rule reduces its hypotheses and conditions to ideal membership of
//! sets built from the support, the top-digit support and the digit/ratio
//! atoms.  All rules are evaluated and recorded; the first conclusive one in
//! [`RULE_ORDER`] decides.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::digits::{div_threshold, Atom, DigitError, DigitRule, DigitSpec};
use crate::exact_arith::{norm_of, rat, Rational};
use crate::ideals::{splitting_partition, translation_invariant_on, IdealSpec, NormalForm, SplitResult};
use crate::logic::TriBool;
use crate::sequences::{ArithmeticSequence, PieceKind, RatioRule};
use crate::sets::convexity_and_gap;
use crate::sets::SetSpec;

/// Shifts probed when an ideal is not known to be translation invariant.
const SHIFT_PROBE: u64 = 4;
/// Window used for empirical convexity and gap bounds.
const CG_HORIZON: u64 = 4096;
/// Indices sampled when a limit has no closed form.
const SAMPLE_HORIZON: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Member,
    NonMember,
    Unknown,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Member => "Member",
            Decision::NonMember => "NonMember",
            Decision::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    FiniteSupport,
    SuppInIdeal,
    BBoundedSupport,
    BDivergentSupport,
    IdealSwallowsBounded,
    Splitting,
    FinBBounded,
    Armacost,
    ConvexityObstruction,
    MiddleThird,
    Audit,
}

/// Evaluation order; the first conclusive rule decides.
pub const RULE_ORDER: [Rule; 10] = [
    Rule::FiniteSupport,
    Rule::SuppInIdeal,
    Rule::FinBBounded,
    Rule::Armacost,
    Rule::ConvexityObstruction,
    Rule::MiddleThird,
    Rule::BBoundedSupport,
    Rule::BDivergentSupport,
    Rule::IdealSwallowsBounded,
    Rule::Splitting,
];

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::FiniteSupport => "R1 FiniteSupport",
            Rule::SuppInIdeal => "R2 SuppInIdeal",
            Rule::BBoundedSupport => "R3 BBoundedSupport",
            Rule::BDivergentSupport => "R4 BDivergentSupport",
            Rule::IdealSwallowsBounded => "R5 IdealSwallowsBounded",
            Rule::Splitting => "R6 Splitting",
            Rule::FinBBounded => "R7 FinBBounded",
            Rule::Armacost => "R8 Armacost",
            Rule::ConvexityObstruction => "R9 ConvexityObstruction",
            Rule::MiddleThird => "R10 MiddleThird",
            Rule::Audit => "Audit",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            Rule::FiniteSupport => "u_n x is eventually an integer",
            Rule::SuppInIdeal => "support in the ideal and invariant under shifts",
            Rule::BBoundedSupport => "support b-bounded mod I: (i_x), (ii_x), (a2_x)",
            Rule::BDivergentSupport => "support b-divergent mod I: S in I or (I_x), (II_x)",
            Rule::IdealSwallowsBounded => "B_u contained in I: (b_x) alone",
            Rule::Splitting => "I-splitting partition: (1_x), (2_x), (3_x)",
            Rule::FinBBounded => "ordinary convergence, bounded ratios: digits eventually 0",
            Rule::Armacost => "factorial base: phi(c_n/(n+1)) -> 0",
            Rule::ConvexityObstruction => "finite convexity or gap number of the support",
            Rule::MiddleThird => "digit ratios c_n/b_n confined to [m1, m2] with m2 < 1/2",
            Rule::Audit => "necessary conditions (a_x)/(b_x) on a supplied set",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOutcome {
    Member,
    NonMember,
    /// Hypotheses hold (or may hold) but some answer was undecided.
    Undecided,
    NotApplicable,
}

impl RuleOutcome {
    fn decision(self) -> Option<Decision> {
        match self {
            RuleOutcome::Member => Some(Decision::Member),
            RuleOutcome::NonMember => Some(Decision::NonMember),
            _ => None,
        }
    }
}

impl fmt::Display for RuleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleOutcome::Member => "Member",
            RuleOutcome::NonMember => "NonMember",
            RuleOutcome::Undecided => "Undecided",
            RuleOutcome::NotApplicable => "NotApplicable",
        })
    }
}

/// A checked statement, with the set it was reduced to.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub label: String,
    pub result: TriBool,
    pub set: Option<SetSpec>,
}

impl Condition {
    fn new(label: impl Into<String>, result: TriBool, set: Option<SetSpec>) -> Self {
        Condition { label: label.into(), result, set }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub rule: Rule,
    pub outcome: RuleOutcome,
    pub note: String,
    pub conditions: Vec<Condition>,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.rule.name(), self.outcome, self.rule.anchor())?;
        if !self.note.is_empty() {
            write!(f, " -- {}", self.note)?;
        }
        for c in &self.conditions {
            write!(f, "\n  {}: {}", c.label, c.result)?;
            if let Some(s) = &c.set {
                write!(f, " [{s}]")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub decision: Decision,
    pub decided_by: Option<Rule>,
    pub trace: Vec<TraceEntry>,
    /// Sets backing the decision, e.g. a failing condition set.
    pub witnesses: Vec<(String, SetSpec)>,
    /// Conclusive rules that disagree with the deciding one (should be empty).
    pub conflicts: Vec<Rule>,
}

impl Verdict {
    pub fn entry(&self, rule: Rule) -> Option<&TraceEntry> {
        self.trace.iter().find(|e| e.rule == rule)
    }

    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decided_by {
            Some(r) => writeln!(f, "verdict: {} by {}", self.decision, r.name())?,
            None => writeln!(f, "verdict: {}", self.decision)?,
        }
        write!(f, "{}", self.trace_text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitExpr {
    /// `(c_{n+1} + 1)/b_{n+1} → 1`
    NextTopRatio,
    /// `c_{n+1}/b_{n+1} → 0`
    NextDigitRatio,
    /// `φ(c_n/b_n) → 0` in the circle
    PhiDigitRatio,
    /// `φ(c_n/(n+1)) → 0` in the circle
    PhiFactorial,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LimitTarget {
    Value(Rational),
    ZeroInCircle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitMode {
    ProvenConverges,
    ProvenDiverges,
    SampledConsistent,
    SampledInconsistent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub target: LimitTarget,
    pub mode: LimitMode,
    pub along: SetSpec,
}

impl LimitExpr {
    fn target(self) -> LimitTarget {
        match self {
            LimitExpr::NextTopRatio => LimitTarget::Value(Rational::one()),
            LimitExpr::NextDigitRatio => LimitTarget::Value(Rational::zero()),
            LimitExpr::PhiDigitRatio | LimitExpr::PhiFactorial => LimitTarget::ZeroInCircle,
        }
    }

    /// Distance from the target of the expression at `n`.
    fn sample(self, d: &DigitSpec, n: u64) -> Rational {
        let seq = d.seq();
        match self {
            LimitExpr::NextTopRatio => {
                let b = seq.ratio(n + 1);
                (Rational::one() - rat(d.digit(n + 1) as i64 + 1, b as i64)).abs()
            }
            LimitExpr::NextDigitRatio => rat(d.digit(n + 1) as i64, seq.ratio(n + 1) as i64),
            LimitExpr::PhiDigitRatio => norm_of(&rat(d.digit(n) as i64, seq.ratio(n) as i64)).into_value(),
            LimitExpr::PhiFactorial => norm_of(&rat(d.digit(n) as i64, n as i64 + 1)).into_value(),
        }
    }

    /// Whether the atom's limit of the expression equals the target.
    fn atom_ok(self, atom: &Atom) -> bool {
        match self {
            LimitExpr::NextTopRatio => atom.limit_c1b().is_one(),
            LimitExpr::NextDigitRatio => atom.limit_cb().is_zero(),
            LimitExpr::PhiDigitRatio | LimitExpr::PhiFactorial => norm_of(&atom.limit_cb()).value().is_zero(),
        }
    }

    fn uses_next(self) -> bool {
        matches!(self, LimitExpr::NextTopRatio | LimitExpr::NextDigitRatio)
    }
}

/// Limit of `expr` along the infinite set `A`.
pub fn limit_along(expr: LimitExpr, d: &DigitSpec, a: &SetSpec) -> LimitReport {
    let symbolic = expr != LimitExpr::PhiFactorial || is_factorial(d.seq());
    if symbolic {
        if let Some(mode) = symbolic_limit(expr, d, a) {
            return LimitReport { target: expr.target(), mode, along: a.clone() };
        }
    }
    let members: Vec<u64> = a.enumerate(SAMPLE_HORIZON).into_iter().filter(|&n| n >= 1).collect();
    let half = members.len() / 2;
    let tail_max = members[half..].iter().map(|&n| expr.sample(d, n)).max().unwrap_or_else(Rational::zero);
    let mode = if tail_max < rat(1, 20) { LimitMode::SampledConsistent } else { LimitMode::SampledInconsistent };
    LimitReport { target: expr.target(), mode, along: a.clone() }
}

fn symbolic_limit(expr: LimitExpr, d: &DigitSpec, a: &SetSpec) -> Option<LimitMode> {
    let atoms = d.atoms().ok()?;
    let idx = if expr.uses_next() { a.shift(1) } else { a.clone() };
    let mut all_ok = true;
    for atom in &atoms {
        let meet = SetSpec::intersection(vec![idx.clone(), atom.set.clone()]);
        match meet.is_infinite() {
            TriBool::Yes => {
                if !expr.atom_ok(atom) {
                    return Some(LimitMode::ProvenDiverges);
                }
            }
            TriBool::No => {}
            TriBool::Unknown => all_ok = false,
        }
    }
    all_ok.then_some(LimitMode::ProvenConverges)
}

fn is_factorial(seq: &ArithmeticSequence) -> bool {
    matches!(seq.rule(), RatioRule::Affine { a: 1, c: 1 })
}

/// Everything the rules need, computed once.
struct Context<'a> {
    seq: &'a ArithmeticSequence,
    ideal: &'a IdealSpec,
    nf: NormalForm,
    ti: TriBool,
    p: TriBool,
    supp: SetSpec,
    supp_b: SetSpec,
    atoms: Vec<Atom>,
    bnd: SetSpec,
    div: SetSpec,
    /// Atoms where `lim c_n/b_n != 0`.
    bad0: SetSpec,
    /// Atoms where `lim (c_n + 1)/b_n != 1`.
    bad1: SetSpec,
    /// Atoms where `φ(lim c_n/b_n) != 0`.
    bad_phi: SetSpec,
}

fn union_where(atoms: &[Atom], keep: impl Fn(&Atom) -> bool) -> SetSpec {
    SetSpec::union(atoms.iter().filter(|a| keep(a)).map(|a| a.set.clone()).collect()).normalize()
}

fn inter(xs: Vec<SetSpec>) -> SetSpec {
    SetSpec::intersection(xs).normalize()
}

fn minus(a: SetSpec, b: SetSpec) -> SetSpec {
    SetSpec::difference(a, b).normalize()
}

impl<'a> Context<'a> {
    fn new(d: &'a DigitSpec, ideal: &'a IdealSpec) -> Result<Self, DigitError> {
        let seq = d.seq();
        let atoms = d.atoms()?;
        let sp = d.supports()?;
        let flags = ideal.verified_flags();
        Ok(Context {
            seq,
            ideal,
            nf: ideal.normal_form(),
            ti: flags.translation_invariant,
            p: flags.p_ideal,
            supp: sp.supp,
            supp_b: sp.supp_b,
            bnd: seq.bounded_part(),
            div: seq.divergent_part(),
            bad0: union_where(&atoms, |a| !a.limit_cb().is_zero()),
            bad1: union_where(&atoms, |a| !a.limit_c1b().is_one()),
            bad_phi: union_where(&atoms, |a| !norm_of(&a.limit_cb()).value().is_zero()),
            atoms,
        })
    }

    fn member(&self, s: &SetSpec) -> TriBool {
        self.nf.member(s)
    }

    /// A membership condition, recorded with its set.
    fn cond(&self, label: &str, s: SetSpec) -> Condition {
        Condition::new(label, self.member(&s), Some(s))
    }

    fn needs_ti(&self, rule: Rule, p_too: bool) -> Option<TraceEntry> {
        let ok = self.ti.is_yes() && (!p_too || self.p.is_yes());
        (!ok).then(|| TraceEntry {
            rule,
            outcome: RuleOutcome::NotApplicable,
            note: if p_too {
                format!("needs a translation invariant P-ideal; {} is not certified as one", self.ideal)
            } else {
                format!("needs a translation invariant ideal; {} is not certified as one", self.ideal)
            },
            conditions: vec![],
        })
    }
}

fn entry(rule: Rule, outcome: RuleOutcome, note: impl Into<String>, conditions: Vec<Condition>) -> TraceEntry {
    TraceEntry { rule, outcome, note: note.into(), conditions }
}

/// Conjunction of conditions: all Yes gives `Member`, any No `NonMember`.
fn conjunction(rule: Rule, conditions: Vec<Condition>) -> TraceEntry {
    let all = TriBool::all(conditions.iter().map(|c| c.result));
    let outcome = match all {
        TriBool::Yes => RuleOutcome::Member,
        TriBool::No => RuleOutcome::NonMember,
        TriBool::Unknown => RuleOutcome::Undecided,
    };
    entry(rule, outcome, "", conditions)
}

fn r1(cx: &Context) -> TraceEntry {
    let fin = cx.supp.is_finite();
    let c = vec![Condition::new("supp finite", fin, Some(cx.supp.clone()))];
    match fin {
        TriBool::Yes => entry(Rule::FiniteSupport, RuleOutcome::Member, "", c),
        TriBool::No => entry(Rule::FiniteSupport, RuleOutcome::NotApplicable, "", c),
        TriBool::Unknown => entry(Rule::FiniteSupport, RuleOutcome::Undecided, "", c),
    }
}

fn r2(cx: &Context) -> TraceEntry {
    let m = cx.member(&cx.supp);
    let mut c = vec![Condition::new("supp in I", m, Some(cx.supp.clone()))];
    if m.is_no() {
        return entry(Rule::SuppInIdeal, RuleOutcome::NotApplicable, "", c);
    }
    let t = translation_invariant_on(cx.ideal, &cx.supp, SHIFT_PROBE);
    c.push(Condition::new("supp I-translation invariant", t, None));
    let outcome = if m.is_yes() && t.is_yes() { RuleOutcome::Member } else { RuleOutcome::Undecided };
    entry(Rule::SuppInIdeal, outcome, "", c)
}

fn r7(cx: &Context) -> TraceEntry {
    let fin = cx.nf.is_fin();
    let bb = cx.seq.is_b_bounded();
    let mut c = vec![Condition::new("I = Fin", fin, None), Condition::new("u b-bounded", bb, Some(cx.div.clone()))];
    if fin.is_no() || bb.is_no() {
        return entry(Rule::FinBBounded, RuleOutcome::NotApplicable, "", c);
    }
    if !(fin.is_yes() && bb.is_yes()) {
        return entry(Rule::FinBBounded, RuleOutcome::Undecided, "", c);
    }
    let s = cx.supp.is_finite();
    c.push(Condition::new("supp finite", s, Some(cx.supp.clone())));
    let outcome = match s {
        TriBool::Yes => RuleOutcome::Member,
        TriBool::No => RuleOutcome::NonMember,
        TriBool::Unknown => RuleOutcome::Undecided,
    };
    entry(Rule::FinBBounded, outcome, "", c)
}

fn r8(cx: &Context, d: &DigitSpec) -> TraceEntry {
    let fin = cx.nf.is_fin();
    let fact = is_factorial(cx.seq);
    let mut c = vec![
        Condition::new("I = Fin", fin, None),
        Condition::new("b_n = n + 1", TriBool::from_bool(fact), None),
    ];
    if fin.is_no() || !fact {
        return entry(Rule::Armacost, RuleOutcome::NotApplicable, "", c);
    }
    if !fin.is_yes() {
        return entry(Rule::Armacost, RuleOutcome::Undecided, "", c);
    }
    let rep = limit_along(LimitExpr::PhiFactorial, d, &SetSpec::positive());
    let (res, outcome) = match rep.mode {
        LimitMode::ProvenConverges => (TriBool::Yes, RuleOutcome::Member),
        LimitMode::ProvenDiverges => (TriBool::No, RuleOutcome::NonMember),
        _ => (TriBool::Unknown, RuleOutcome::Undecided),
    };
    c.push(Condition::new("phi(c_n/(n+1)) -> 0", res, Some(cx.bad_phi.clone())));
    entry(Rule::Armacost, outcome, "", c)
}

fn r9(cx: &Context) -> TraceEntry {
    if let Some(e) = cx.needs_ti(Rule::ConvexityObstruction, false) {
        return e;
    }
    let bb = cx.seq.is_b_bounded();
    let mut c = vec![Condition::new("u b-bounded", bb, Some(cx.div.clone()))];
    if !bb.is_yes() {
        let o = if bb.is_no() { RuleOutcome::NotApplicable } else { RuleOutcome::Undecided };
        return entry(Rule::ConvexityObstruction, o, "", c);
    }
    let cg = convexity_and_gap(&cx.supp, CG_HORIZON);
    let (conv, gap) = (cg.convexity().and_then(|v| v.certified_finite()), cg.gap().and_then(|v| v.certified_finite()));
    let s_out = cx.member(&cx.supp).not();
    let comp = cx.supp.complement();
    let comp_out = cx.member(&comp).not();
    let a = s_out.and(TriBool::from_bool(conv.is_some()));
    let b = comp_out.and(TriBool::from_bool(gap.is_some()));
    c.push(Condition::new(
        format!("(a) supp not in I and c(supp) {} finite", cg.convexity().map_or("= ?".into(), |v| v.to_string())),
        a,
        Some(cx.supp.clone()),
    ));
    c.push(Condition::new(
        format!("(b) complement not in I and g(supp) {} finite", cg.gap().map_or("= ?".into(), |v| v.to_string())),
        b,
        Some(comp),
    ));
    let outcome = if a.is_yes() || b.is_yes() {
        RuleOutcome::NonMember
    } else if a.is_no() && b.is_no() {
        RuleOutcome::NotApplicable
    } else {
        RuleOutcome::Undecided
    };
    entry(Rule::ConvexityObstruction, outcome, "", c)
}

fn r10(cx: &Context) -> TraceEntry {
    if let Some(e) = cx.needs_ti(Rule::MiddleThird, false) {
        return e;
    }
    let out = cx.member(&cx.supp).not();
    let mut c = vec![Condition::new("supp not in I", out, Some(cx.supp.clone()))];
    if out.is_no() {
        return entry(Rule::MiddleThird, RuleOutcome::NotApplicable, "", c);
    }
    let half = rat(1, 2);
    let mut band: Option<(Rational, Rational)> = None;
    let mut in_band = TriBool::Yes;
    for atom in &cx.atoms {
        let nz = atom.nonzero_set();
        match nz.is_infinite() {
            TriBool::No => {}
            TriBool::Unknown => in_band = in_band.and(TriBool::Unknown),
            TriBool::Yes => {
                let l = atom.limit_cb();
                if l.is_positive() && l < half {
                    band = Some(match band {
                        None => (l.clone(), l),
                        Some((lo, hi)) => (lo.min(l.clone()), hi.max(l)),
                    });
                } else {
                    in_band = TriBool::No;
                }
            }
        }
    }
    let note = match &band {
        Some((lo, hi)) => format!("limits of c_n/b_n on the support lie in [{lo}, {hi}]"),
        None => String::new(),
    };
    c.push(Condition::new("c_n/b_n eventually in a band inside (0, 1/2)", in_band, None));
    let outcome = match out.and(in_band) {
        TriBool::Yes => RuleOutcome::NonMember,
        TriBool::No => RuleOutcome::NotApplicable,
        TriBool::Unknown => RuleOutcome::Undecided,
    };
    entry(Rule::MiddleThird, outcome, note, c)
}

fn r3(cx: &Context) -> TraceEntry {
    if let Some(e) = cx.needs_ti(Rule::BBoundedSupport, false) {
        return e;
    }
    let s = &cx.supp;
    let s_div = inter(vec![s.clone(), cx.div.clone()]);
    let app = cx.member(&s_div);
    let hyp = Condition::new("supp b-bounded mod I", app, Some(s_div));
    match app {
        TriBool::No => return entry(Rule::BBoundedSupport, RuleOutcome::NotApplicable, "", vec![hyp]),
        TriBool::Unknown => return entry(Rule::BBoundedSupport, RuleOutcome::Undecided, "", vec![hyp]),
        TriBool::Yes => {}
    }
    let i_x = cx.cond("(i_x) S+1 ⊆^I S", minus(s.shift(1), s.clone()));
    let ii_x = cx.cond("(ii_x) S_b ⊆_I S", minus(s.clone(), cx.supp_b.clone()));
    let a2_x = cx.cond(
        "(a2_x) lim c_{n+1}/b_{n+1} = 0 off the support",
        minus(inter(vec![cx.bad0.shift(-1), cx.bnd.clone()]), s.clone()),
    );
    let mut e = conjunction(Rule::BBoundedSupport, vec![i_x, ii_x, a2_x]);
    e.conditions.insert(0, hyp);
    e
}

fn r4(cx: &Context) -> TraceEntry {
    if let Some(e) = cx.needs_ti(Rule::BDivergentSupport, true) {
        return e;
    }
    let s = &cx.supp;
    let s_bnd = inter(vec![s.clone(), cx.bnd.clone()]);
    let s_div_inf = inter(vec![s.clone(), cx.div.clone()]).is_infinite();
    let app = cx.member(&s_bnd).and(s_div_inf);
    let hyp = Condition::new("supp b-divergent mod I", app, Some(s_bnd));
    match app {
        TriBool::No => return entry(Rule::BDivergentSupport, RuleOutcome::NotApplicable, "", vec![hyp]),
        TriBool::Unknown => return entry(Rule::BDivergentSupport, RuleOutcome::Undecided, "", vec![hyp]),
        TriBool::Yes => {}
    }
    let s_in = cx.member(s);
    if s_in.is_yes() {
        return entry(
            Rule::BDivergentSupport,
            RuleOutcome::Member,
            "",
            vec![hyp, Condition::new("S in I", TriBool::Yes, Some(s.clone()))],
        );
    }
    let i_x = cx.cond("(I_x) lim phi(c_n/b_n) = 0 on D ⊆_I S", inter(vec![s.clone(), cx.bad_phi.clone()]));
    let ii_x = cx.cond(
        "(II_x) lim c_n/b_n = 0 where b_{n-1} is bounded",
        inter(vec![s.clone(), cx.bnd.shift(1), cx.bad0.clone()]),
    );
    let mut e = conjunction(Rule::BDivergentSupport, vec![i_x, ii_x]);
    if s_in.is_unknown() && e.outcome == RuleOutcome::NonMember {
        e.outcome = RuleOutcome::Undecided;
    }
    e.conditions.insert(0, hyp);
    e
}

fn r5(cx: &Context) -> TraceEntry {
    if let Some(e) = cx.needs_ti(Rule::IdealSwallowsBounded, true) {
        return e;
    }
    let app = cx.member(&cx.bnd);
    let hyp = Condition::new("B_u ⊆ I", app, Some(cx.bnd.clone()));
    match app {
        TriBool::No => return entry(Rule::IdealSwallowsBounded, RuleOutcome::NotApplicable, "", vec![hyp]),
        TriBool::Unknown => return entry(Rule::IdealSwallowsBounded, RuleOutcome::Undecided, "", vec![hyp]),
        TriBool::Yes => {}
    }
    let b_x = cx.cond("(b_x) lim phi(c_n/b_n) = 0 on b-divergent sets", inter(vec![cx.div.clone(), cx.bad_phi.clone()]));
    let mut e = conjunction(Rule::IdealSwallowsBounded, vec![b_x]);
    e.conditions.insert(0, hyp);
    e
}

fn r6(cx: &Context) -> TraceEntry {
    if let Some(e) = cx.needs_ti(Rule::Splitting, true) {
        return e;
    }
    let (b, d, cert) = match splitting_partition(cx.seq, cx.ideal) {
        SplitResult::Found { bounded, divergent, certificate } => (bounded, divergent, certificate),
        SplitResult::None(why) => return entry(Rule::Splitting, RuleOutcome::NotApplicable, why, vec![]),
        SplitResult::Unknown(why) => return entry(Rule::Splitting, RuleOutcome::Undecided, why, vec![]),
    };
    let s = &cx.supp;
    let bs = inter(vec![b.clone(), s.clone()]);
    let one_a = cx.cond("(1_x) (B∩S)+1 ⊆^I S", minus(bs.shift(1), s.clone()));
    let one_b = cx.cond("(1_x) B∩S ⊆^I S_b", minus(bs.clone(), cx.supp_b.clone()));
    let one_c = cx.cond("(1_x) lim (c_{n+1}+1)/b_{n+1} = 1 on C ⊆_I B∩S", inter(vec![bs, cx.bad1.shift(-1)]));
    let two = cx.cond(
        "(2_x) lim c_{n+1}/b_{n+1} = 0 on C ⊆_I B\\S",
        inter(vec![minus(b.clone(), s.clone()), cx.bad0.shift(-1)]),
    );
    let three = cx.cond("(3_x) lim phi(c_n/b_n) = 0 on E ⊆_I D∩S", inter(vec![d.clone(), s.clone(), cx.bad_phi.clone()]));
    let mut e = conjunction(Rule::Splitting, vec![one_a, one_b, one_c, two, three]);
    e.note = format!("B = {b}, D = {d}; {}", cert.join("; "));
    e
}

/// `(a_x)`/`(b_x)` on a user-supplied `A`; a provable violation refutes
/// membership.
pub fn audit(d: &DigitSpec, ideal: &IdealSpec, a: &SetSpec) -> TraceEntry {
    let cx = match Context::new(d, ideal) {
        Ok(cx) => cx,
        Err(e) => return entry(Rule::Audit, RuleOutcome::Undecided, e.to_string(), vec![]),
    };
    if let Some(e) = cx.needs_ti(Rule::Audit, true) {
        return e;
    }
    let out = cx.member(a).not();
    let mut conds = vec![Condition::new("A not in I", out, Some(a.clone()))];
    if !out.is_yes() {
        let o = if out.is_no() { RuleOutcome::NotApplicable } else { RuleOutcome::Undecided };
        return entry(Rule::Audit, o, "", conds);
    }
    let s = &cx.supp;
    let a_div = inter(vec![a.clone(), cx.div.clone()]);
    let a_bnd = inter(vec![a.clone(), cx.bnd.clone()]);
    let bounded = a_div.is_finite();
    let divergent = a_bnd.is_finite();
    conds.push(Condition::new("A b-bounded", bounded, Some(a_div)));
    conds.push(Condition::new("A b-divergent", divergent, Some(a_bnd)));
    let mut checks = Vec::new();
    if bounded.is_yes() {
        let a_in_s = cx.member(&minus(a.clone(), s.clone()));
        conds.push(Condition::new("A ⊆^I S", a_in_s, None));
        if a_in_s.is_yes() {
            checks.push(cx.cond("(a1_x) A ⊆^I S_b", minus(a.clone(), cx.supp_b.clone())));
            checks.push(cx.cond("(a1_x) A+1 ⊆^I S", minus(a.shift(1), s.clone())));
            checks.push(cx.cond("(a1_x) lim (c_{n+1}+1)/b_{n+1} = 1 on A' ⊆_I A", inter(vec![a.clone(), cx.bad1.shift(-1)])));
        }
        let meet = cx.member(&inter(vec![a.clone(), s.clone()]));
        conds.push(Condition::new("A∩S in I", meet, None));
        if meet.is_yes() {
            checks.push(cx.cond("(a2_x) lim c_{n+1}/b_{n+1} = 0 on B' ⊆_I A", inter(vec![a.clone(), cx.bad0.shift(-1)])));
        }
    }
    if divergent.is_yes() {
        checks.push(cx.cond("(b_x) lim phi(c_n/b_n) = 0 on B ⊆_I A", inter(vec![a.clone(), cx.bad_phi.clone()])));
    }
    let violated = checks.iter().any(|c| c.result.is_no());
    conds.extend(checks);
    let outcome = if violated { RuleOutcome::NonMember } else { RuleOutcome::Undecided };
    entry(Rule::Audit, outcome, "a violated necessary condition refutes membership", conds)
}

pub fn classify(d: &DigitSpec, ideal: &IdealSpec) -> Verdict {
    classify_with_audit(d, ideal, None)
}

pub fn classify_with_audit(d: &DigitSpec, ideal: &IdealSpec, audit_set: Option<&SetSpec>) -> Verdict {
    let cx = match Context::new(d, ideal) {
        Ok(cx) => cx,
        Err(e) => {
            return Verdict {
                decision: Decision::Unknown,
                decided_by: None,
                trace: vec![entry(Rule::FiniteSupport, RuleOutcome::Undecided, format!("digit structure unavailable: {e}"), vec![])],
                witnesses: vec![],
                conflicts: vec![],
            }
        }
    };
    let mut trace: Vec<TraceEntry> = RULE_ORDER
        .iter()
        .map(|rule| match rule {
            Rule::FiniteSupport => r1(&cx),
            Rule::SuppInIdeal => r2(&cx),
            Rule::FinBBounded => r7(&cx),
            Rule::Armacost => r8(&cx, d),
            Rule::ConvexityObstruction => r9(&cx),
            Rule::MiddleThird => r10(&cx),
            Rule::BBoundedSupport => r3(&cx),
            Rule::BDivergentSupport => r4(&cx),
            Rule::IdealSwallowsBounded => r5(&cx),
            Rule::Splitting => r6(&cx),
            Rule::Audit => unreachable!("audit is not part of the pipeline"),
        })
        .collect();
    if let Some(a) = audit_set {
        trace.push(audit(d, ideal, a));
    }
    let first = trace.iter().find(|e| e.outcome.decision().is_some());
    let (decision, decided_by) = match first {
        Some(e) => (e.outcome.decision().expect("conclusive"), Some(e.rule)),
        None => (Decision::Unknown, None),
    };
    let conflicts = trace
        .iter()
        .filter(|e| e.outcome.decision().is_some_and(|x| x != decision))
        .map(|e| e.rule)
        .collect();
    let witnesses = match first {
        Some(e) => e
            .conditions
            .iter()
            .filter(|c| c.result.is_no() || decision == Decision::Member)
            .filter_map(|c| c.set.clone().map(|s| (c.label.clone(), s)))
            .collect(),
        None => vec![],
    };
    Verdict { decision, decided_by, trace, witnesses, conflicts }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("cannot decide: {0}")]
    Undecided(String),
    #[error(transparent)]
    Digit(#[from] DigitError),
}

/// An `x` with `supp(x) ⊆ B` that is not topologically `u_I`-torsion.
pub fn witness_nonmember(b: &SetSpec, seq: &ArithmeticSequence, ideal: &IdealSpec) -> Result<DigitSpec, WitnessError> {
    match ideal.member(b) {
        TriBool::Yes => {
            return Err(WitnessError::PreconditionFailed(format!("{b} lies in {ideal}, so every such x is a member")))
        }
        TriBool::Unknown => return Err(WitnessError::Undecided(format!("membership of {b} in {ideal}"))),
        TriBool::No => {}
    }
    let bounded = minus(inter(vec![b.clone(), seq.bounded_part()]), SetSpec::finite([0]));
    match ideal.member(&bounded) {
        TriBool::No => return bounded_witness(&bounded, seq, ideal),
        TriBool::Unknown => return Err(WitnessError::Undecided(format!("membership of {bounded} in {ideal}"))),
        TriBool::Yes => {}
    }
    let divergent = inter(vec![b.clone(), seq.divergent_part()]);
    let k = seq
        .partition()
        .iter()
        .filter_map(|p| match &p.kind {
            PieceKind::Divergent(r) => Some(div_threshold(r, 3).saturating_sub(1)),
            PieceKind::Const(_) => None,
        })
        .max()
        .unwrap_or(0);
    let tail = inter(vec![divergent, SetSpec::from(k + 1)]);
    Ok(DigitSpec::rules(vec![(tail, DigitRule::ThirdFloor)], seq)?)
}

fn bounded_witness(a: &SetSpec, seq: &ArithmeticSequence, ideal: &IdealSpec) -> Result<DigitSpec, WitnessError> {
    let halves: Vec<SetSpec> =
        (0..2).map(|r| SetSpec::rank_filter(a.clone(), 2, r).expect("valid rank filter").normalize()).collect();
    if let Some(h) = halves.iter().find(|h| ideal.member(h).is_no()) {
        return Ok(DigitSpec::rules(vec![(h.clone(), DigitRule::Const(1))], seq)?);
    }
    for h in &halves {
        let d = DigitSpec::rules(vec![(h.clone(), DigitRule::Const(1))], seq)?;
        if classify(&d, ideal).decision == Decision::NonMember {
            return Ok(d);
        }
    }
    Err(WitnessError::Undecided(format!("neither alternating half of {a} is provably outside {ideal}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    fn id() -> IdealSpec {
        IdealSpec::natural_density()
    }

    fn base(b: u64) -> ArithmeticSequence {
        ArithmeticSequence::constant(b).unwrap()
    }

    fn split_seq() -> ArithmeticSequence {
        ArithmeticSequence::new(RatioRule::Piecewise {
            pieces: vec![(SetSpec::evens(), RatioRule::Constant(2))],
            default: Some(Box::new(RatioRule::Affine { a: 1, c: 0 })),
        })
        .unwrap()
    }

    #[test]
    fn half_in_base_three() {
        let d = DigitSpec::rational(rat(1, 2), &base(3)).unwrap();
        for ideal in [IdealSpec::Fin, id(), IdealSpec::density(rat(1, 2)).unwrap()] {
            let v = classify(&d, &ideal);
            assert_eq!(v.decision, Decision::NonMember, "{ideal}: {v}");
            assert!(v.conflicts.is_empty(), "{v}");
        }
        assert_eq!(classify(&d, &id()).decided_by, Some(Rule::MiddleThird));
    }

    #[test]
    fn squares_member_by_ideal() {
        let d = DigitSpec::rules(vec![(SetSpec::squares(), DigitRule::Const(1))], &base(2)).unwrap();
        let v = classify(&d, &id());
        assert_eq!(v.decision, Decision::Member);
        assert_eq!(v.decided_by, Some(Rule::SuppInIdeal));
        assert!(v.conflicts.is_empty(), "{v}");
    }

    #[test]
    fn euler_pattern() {
        let e = ArithmeticSequence::factorial();
        let d = DigitSpec::rules(vec![(SetSpec::positive(), DigitRule::Const(1))], &e).unwrap();
        let v = classify(&d, &IdealSpec::Fin);
        assert_eq!(v.decision, Decision::Member);
        assert_eq!(v.decided_by, Some(Rule::Armacost));
        assert!(v.conflicts.is_empty(), "{v}");
    }

    #[test]
    fn third_in_base_two() {
        let d = DigitSpec::rational(rat(1, 3), &base(2)).unwrap();
        let v = classify(&d, &IdealSpec::Fin);
        assert_eq!((v.decision, v.decided_by), (Decision::NonMember, Some(Rule::FinBBounded)));
        let r = DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Const(1))], &base(2)).unwrap();
        for ideal in [IdealSpec::Fin, id()] {
            let (a, b) = (classify(&d, &ideal), classify(&r, &ideal));
            assert_eq!(a.decision, b.decision);
            assert_eq!(a.decided_by, b.decided_by);
        }
        let v = classify(&r, &id());
        assert_eq!((v.decision, v.decided_by), (Decision::NonMember, Some(Rule::ConvexityObstruction)));
    }

    #[test]
    fn splitting_cases() {
        let u = split_seq();
        let odd_sq = inter(vec![SetSpec::squares(), SetSpec::odds()]);
        let member = DigitSpec::rules(vec![(odd_sq, DigitRule::Const(1))], &u).unwrap();
        let v = classify(&member, &id());
        assert_eq!(v.decision, Decision::Member, "{v}");
        let r6 = v.entry(Rule::Splitting).unwrap();
        assert_eq!(r6.outcome, RuleOutcome::Member, "{r6}");
        let top = DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Top)], &u).unwrap();
        let v = classify(&top, &id());
        assert_eq!(v.decision, Decision::NonMember, "{v}");
        let r6 = v.entry(Rule::Splitting).unwrap();
        assert_eq!(r6.outcome, RuleOutcome::NonMember);
        assert!(r6.conditions.iter().any(|c| c.label.starts_with("(1_x)") && c.result.is_no()));
        assert!(v.conflicts.is_empty());
    }

    #[test]
    fn limits() {
        let d = DigitSpec::rules(vec![(SetSpec::positive(), DigitRule::Const(1))], &base(3)).unwrap();
        assert_eq!(limit_along(LimitExpr::PhiDigitRatio, &d, &SetSpec::naturals()).mode, LimitMode::ProvenDiverges);
        let top = DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Top)], &base(3)).unwrap();
        let a = SetSpec::odds();
        assert_eq!(limit_along(LimitExpr::NextTopRatio, &top, &a).mode, LimitMode::ProvenConverges);
        let z = DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Const(1))], &base(3)).unwrap();
        assert_eq!(limit_along(LimitExpr::NextDigitRatio, &z, &SetSpec::evens()).mode, LimitMode::ProvenConverges);
    }

    #[test]
    fn witnesses() {
        let w = witness_nonmember(&SetSpec::evens(), &base(2), &id()).unwrap();
        let supp = w.supports().unwrap().supp;
        assert_eq!(supp.normalize(), SetSpec::progression(4, 2).unwrap());
        assert_eq!(classify(&w, &id()).decision, Decision::NonMember);
        let e = ArithmeticSequence::factorial();
        let w = witness_nonmember(&SetSpec::naturals(), &e, &IdealSpec::Fin).unwrap();
        assert_eq!(w.digits_upto(8), vec![0, 1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(classify(&w, &IdealSpec::Fin).decision, Decision::NonMember);
        assert!(matches!(
            witness_nonmember(&SetSpec::squares(), &base(2), &id()),
            Err(WitnessError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn audit_probe() {
        let d = DigitSpec::rules(vec![(SetSpec::evens(), DigitRule::Const(1))], &base(3)).unwrap();
        let e = audit(&d, &id(), &SetSpec::evens());
        assert_eq!(e.outcome, RuleOutcome::NonMember, "{e}");
        let v = classify_with_audit(&d, &id(), Some(&SetSpec::evens()));
        assert!(v.conflicts.is_empty());
    }
}
