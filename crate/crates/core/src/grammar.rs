//! Text grammars for sets, ratio rules, elements and ideals.
//!
//! The accepted forms are listed in [`GRAMMAR`].
//!
//! Every parser accepts the `Display` output of the value it builds.
//! Pieces of a piecewise rule may not themselves be piecewise.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::digits::{DigitError, DigitKind, DigitRule, DigitSpec};
use crate::exact_arith::Rational;
use crate::ideals::IdealSpec;
use crate::sequences::{ArithmeticSequence, RatioRule, SeqError};
use crate::sets::{IntervalLength, IntervalStart, SetSpec};

/// Reference text for every grammar, as printed by `torsionlab grammar`.
pub const GRAMMAR: &str = r#"set     := "empty" | "all" | "naturals" | "positive" | "evens" | "even" | "odds" | "odd"
         | "squares" | "cubes" | "poly" D | "powers" B
         | "finite" N {"," N} | "cofinite" N {"," N} | "from" N | "range" N N
         | "progression" A R
         | "intervals" ("geometric" B | "power" D) "length" (N | "n")
         | "shift" "(" set "," INT ")" | "rank" "(" set "," M "," R ")"
         | "union" "(" set {"," set} ")" | "intersection" "(" set {"," set} ")"
         | "difference" "(" set "," set ")" | "(" set ")"
ratio   := "constant" B | "periodic" B {"," B} | "affine" A C | "power" B | "factorial"
         | "prefix" B {"," B} "then" ratio
         | "piecewise" piece {";" piece}        piece := (set | "else") ":" ratio
element := "rational" P "/" Q | "finite" N ":" C {"," N ":" C}
         | "digits" part {";" part}             part  := "on" set "value" digit
digit   := C | "top" | "third" | "affine" A C
ideal   := "fin" | "density" P ["/" Q] | "bu" | "du" | "all"
         | "sum" "(" ideal "," ideal ")" | "mod" "(" set "," ideal ")"

Sets live in N = {0, 1, 2, ...}.  Parentheses group a set, so a list can be
followed by integer arguments: "shift((finite 1, 2), 3)".  "progression A R" is {A k + R : k >= 0};
"squares", "cubes" and "poly D" are {j^D : j >= 1}; "powers B" is {B^j : j >= 1};
"intervals geometric B length L" is the union of [B^j, B^j + L] (L = "n" means j).
Ratios give b_n for n >= 1: "affine A C" is max(2, A n + C), "factorial" is n + 1,
"power B" is B^n, "periodic" cycles through its list from n = 1.
Digits are clipped to [0, b_n - 1]: "top" is b_n - 1, "third" is floor(b_n / 3),
"affine A C" is A n + C.  "density A" is the ideal of sets of upper density
of order A equal to zero; "bu" and "du" are generated by the b-bounded and
b-divergent sets of the sequence; "mod(S, I)" is P(S) + I.
"#;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{grammar} grammar, rule `{rule}`: {message} in {input:?}")]
pub struct GrammarError {
    pub grammar: &'static str,
    pub rule: String,
    pub message: String,
    pub input: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(BigInt),
    Punct(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
        }
    }
}

struct Parser<'a> {
    grammar: &'static str,
    input: &'a str,
    toks: Vec<Tok>,
    pos: usize,
}

type PResult<T> = Result<T, GrammarError>;

impl<'a> Parser<'a> {
    fn new(grammar: &'static str, input: &'a str) -> PResult<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = input.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Word(chars[start..i].iter().collect::<String>().to_ascii_lowercase()));
            } else if c.is_ascii_digit() || (c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                toks.push(Tok::Int(text.trim_start_matches('+').parse().expect("digits")));
            } else if "(),;:/".contains(c) {
                toks.push(Tok::Punct(c));
                i += 1;
            } else {
                return Err(GrammarError {
                    grammar,
                    rule: "token".into(),
                    message: format!("unexpected character {c:?}"),
                    input: input.to_string(),
                });
            }
        }
        Ok(Parser { grammar, input, toks, pos: 0 })
    }

    fn err<T>(&self, rule: &str, message: impl Into<String>) -> PResult<T> {
        Err(GrammarError {
            grammar: self.grammar,
            rule: rule.to_string(),
            message: message.into(),
            input: self.input.to_string(),
        })
    }

    fn found(&self) -> String {
        self.toks.get(self.pos).map_or("end of input".to_string(), |t| t.to_string())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn peek_int_at(&self, offset: usize) -> bool {
        matches!(self.toks.get(self.pos + offset), Some(Tok::Int(_)))
    }

    fn word(&mut self, rule: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(rule, format!("expected a keyword, found {}", self.found())),
        }
    }

    fn keyword(&mut self, rule: &str, kw: &str) -> PResult<()> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(rule, format!("expected `{kw}`, found {}", self.found())),
        }
    }

    fn punct(&mut self, rule: &str, c: char) -> PResult<()> {
        if self.peek_punct(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(rule, format!("expected `{c}`, found {}", self.found()))
        }
    }

    fn big(&mut self, rule: &str) -> PResult<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err(rule, format!("expected an integer, found {}", self.found())),
        }
    }

    fn int(&mut self, rule: &str) -> PResult<i64> {
        let n = self.big(rule)?;
        match i64::try_from(&n) {
            Ok(v) => Ok(v),
            Err(_) => self.err(rule, format!("integer {n} is out of range")),
        }
    }

    fn nat(&mut self, rule: &str) -> PResult<u64> {
        let n = self.big(rule)?;
        match u64::try_from(&n) {
            Ok(v) => Ok(v),
            Err(_) => self.err(rule, format!("expected a non-negative integer, found {n}")),
        }
    }

    fn small(&mut self, rule: &str) -> PResult<u32> {
        let n = self.nat(rule)?;
        match u32::try_from(n) {
            Ok(v) => Ok(v),
            Err(_) => self.err(rule, format!("{n} is too large")),
        }
    }

    fn nat_list(&mut self, rule: &str) -> PResult<Vec<u64>> {
        let mut v = vec![self.nat(rule)?];
        while self.peek_punct(',') && self.peek_int_at(1) {
            self.pos += 1;
            v.push(self.nat(rule)?);
        }
        Ok(v)
    }

    fn rational(&mut self, rule: &str) -> PResult<Rational> {
        let p = self.big(rule)?;
        let q = if self.peek_punct('/') {
            self.pos += 1;
            self.big(rule)?
        } else {
            BigInt::from(1)
        };
        if q == BigInt::from(0) {
            return self.err(rule, "zero denominator");
        }
        Ok(Rational::new(p, q))
    }

    fn finish(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("end", format!("unexpected trailing {}", self.found()))
        }
    }

    fn set(&mut self) -> PResult<SetSpec> {
        if self.peek_punct('(') {
            self.pos += 1;
            let inner = self.set()?;
            self.punct("group", ')')?;
            return Ok(inner);
        }
        let w = self.word("set")?;
        let wrap = |r: Result<SetSpec, crate::sets::SetError>, p: &Self, rule: &str| match r {
            Ok(s) => Ok(s),
            Err(e) => p.err(rule, e.to_string()),
        };
        Ok(match w.as_str() {
            "empty" => SetSpec::empty(),
            "all" | "naturals" => SetSpec::naturals(),
            "positive" => SetSpec::positive(),
            "evens" | "even" => SetSpec::evens(),
            "odds" | "odd" => SetSpec::odds(),
            "squares" => SetSpec::squares(),
            "cubes" => wrap(SetSpec::poly(3), self, "cubes")?,
            "poly" => {
                let d = self.small("poly")?;
                wrap(SetSpec::poly(d), self, "poly")?
            }
            "powers" => {
                let b = self.nat("powers")?;
                wrap(SetSpec::powers(b), self, "powers")?
            }
            "finite" => SetSpec::finite(self.nat_list("finite")?),
            "cofinite" => SetSpec::cofinite(self.nat_list("cofinite")?),
            "from" => SetSpec::from(self.nat("from")?),
            "range" => {
                let lo = self.nat("range")?;
                let hi = self.nat("range")?;
                SetSpec::range(lo, hi)
            }
            "progression" => {
                let a = self.nat("progression")?;
                let r = self.nat("progression")?;
                wrap(SetSpec::progression(a, r), self, "progression")?
            }
            "intervals" => {
                let start = match self.word("intervals")?.as_str() {
                    "geometric" => IntervalStart::Geometric(self.nat("intervals")?),
                    "power" => IntervalStart::Power(self.small("intervals")?),
                    other => return self.err("intervals", format!("expected `geometric` or `power`, found `{other}`")),
                };
                self.keyword("intervals", "length")?;
                let length = if matches!(self.peek(), Some(Tok::Word(w)) if w == "n") {
                    self.pos += 1;
                    IntervalLength::Linear
                } else {
                    IntervalLength::Const(self.nat("intervals")?)
                };
                wrap(SetSpec::intervals(start, length), self, "intervals")?
            }
            "shift" => {
                self.punct("shift", '(')?;
                let a = self.set()?;
                self.punct("shift", ',')?;
                let k = self.int("shift")?;
                self.punct("shift", ')')?;
                a.shift(k)
            }
            "rank" => {
                self.punct("rank", '(')?;
                let a = self.set()?;
                self.punct("rank", ',')?;
                let m = self.nat("rank")?;
                self.punct("rank", ',')?;
                let r = self.nat("rank")?;
                self.punct("rank", ')')?;
                wrap(SetSpec::rank_filter(a, m, r), self, "rank")?
            }
            "union" | "intersection" => {
                self.punct(&w, '(')?;
                let mut items = vec![self.set()?];
                while self.peek_punct(',') {
                    self.pos += 1;
                    items.push(self.set()?);
                }
                self.punct(&w, ')')?;
                if w == "union" {
                    SetSpec::union(items)
                } else {
                    SetSpec::intersection(items)
                }
            }
            "difference" => {
                self.punct("difference", '(')?;
                let a = self.set()?;
                self.punct("difference", ',')?;
                let b = self.set()?;
                self.punct("difference", ')')?;
                SetSpec::difference(a, b)
            }
            other => return self.err("set", format!("unknown set form `{other}`")),
        })
    }

    fn ratio(&mut self, nested: bool) -> PResult<RatioRule> {
        let w = self.word("ratio")?;
        let wrap = |r: Result<RatioRule, SeqError>, p: &Self, rule: &str| match r {
            Ok(s) => Ok(s),
            Err(e) => p.err(rule, e.to_string()),
        };
        Ok(match w.as_str() {
            "constant" => {
                let b = self.nat("constant")?;
                wrap(RatioRule::constant(b), self, "constant")?
            }
            "periodic" => RatioRule::Periodic(self.nat_list("periodic")?),
            "affine" => {
                let a = self.int("affine")?;
                let c = self.int("affine")?;
                wrap(RatioRule::affine(a, c), self, "affine")?
            }
            "power" => RatioRule::Power(self.nat("power")?),
            "factorial" => RatioRule::Affine { a: 1, c: 1 },
            "prefix" => {
                let prefix = self.nat_list("prefix")?;
                self.keyword("prefix", "then")?;
                let tail = self.ratio(nested)?;
                RatioRule::ExplicitPrefix { prefix, tail: Box::new(tail) }
            }
            "piecewise" if nested => return self.err("piecewise", "pieces cannot be piecewise themselves"),
            "piecewise" => {
                let mut pieces = Vec::new();
                let mut default = None;
                loop {
                    if default.is_some() {
                        return self.err("piecewise", "`else` must be the last piece");
                    }
                    if matches!(self.peek(), Some(Tok::Word(w)) if w == "else") {
                        self.pos += 1;
                        self.punct("piecewise", ':')?;
                        default = Some(Box::new(self.ratio(true)?));
                    } else {
                        let s = self.set()?;
                        self.punct("piecewise", ':')?;
                        pieces.push((s, self.ratio(true)?));
                    }
                    if !self.peek_punct(';') {
                        break;
                    }
                    self.pos += 1;
                }
                RatioRule::Piecewise { pieces, default }
            }
            other => return self.err("ratio", format!("unknown ratio form `{other}`")),
        })
    }

    fn digit_rule(&mut self) -> PResult<DigitRule> {
        match self.peek() {
            Some(Tok::Int(_)) => Ok(DigitRule::Const(self.nat("digit")?)),
            _ => match self.word("digit")?.as_str() {
                "top" => Ok(DigitRule::Top),
                "third" => Ok(DigitRule::ThirdFloor),
                "affine" => {
                    let a = self.int("digit")?;
                    let c = self.int("digit")?;
                    Ok(DigitRule::Affine { a, c })
                }
                other => self.err("digit", format!("unknown digit law `{other}`")),
            },
        }
    }

    fn ideal(&mut self, seq: &ArithmeticSequence) -> PResult<IdealSpec> {
        let w = self.word("ideal")?;
        Ok(match w.as_str() {
            "fin" => IdealSpec::Fin,
            "density" => {
                let a = self.rational("density")?;
                match IdealSpec::density(a) {
                    Ok(i) => i,
                    Err(e) => return self.err("density", e.to_string()),
                }
            }
            "bu" => IdealSpec::BU(seq.clone()),
            "du" => IdealSpec::DU(seq.clone()),
            "all" => IdealSpec::PowerSetAll,
            "sum" => {
                self.punct("sum", '(')?;
                let a = self.ideal(seq)?;
                self.punct("sum", ',')?;
                let b = self.ideal(seq)?;
                self.punct("sum", ')')?;
                IdealSpec::sum(a, b)
            }
            "mod" => {
                self.punct("mod", '(')?;
                let s = self.set()?;
                self.punct("mod", ',')?;
                let i = self.ideal(seq)?;
                self.punct("mod", ')')?;
                IdealSpec::principal_mod(s, i)
            }
            other => return self.err("ideal", format!("unknown ideal form `{other}`")),
        })
    }
}

pub fn parse_set(s: &str) -> Result<SetSpec, GrammarError> {
    let mut p = Parser::new("set", s)?;
    let v = p.set()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_ratio(s: &str) -> Result<RatioRule, GrammarError> {
    let mut p = Parser::new("ratio", s)?;
    let v = p.ratio(false)?;
    p.finish()?;
    if let Err(e) = v.validate() {
        return p.err("ratio", e.to_string());
    }
    Ok(v)
}

pub fn parse_sequence(s: &str) -> Result<ArithmeticSequence, GrammarError> {
    let rule = parse_ratio(s)?;
    ArithmeticSequence::new(rule).map_err(|e| GrammarError {
        grammar: "ratio",
        rule: "sequence".into(),
        message: e.to_string(),
        input: s.to_string(),
    })
}

pub fn parse_digit_rule(s: &str) -> Result<DigitRule, GrammarError> {
    let mut p = Parser::new("digit", s)?;
    let v = p.digit_rule()?;
    p.finish()?;
    Ok(v)
}

/// A parsed element before it is tied to a sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementSyntax {
    Rational(Rational),
    Finite(Vec<(u64, u64)>),
    Digits(Vec<(SetSpec, DigitRule)>),
}

impl ElementSyntax {
    pub fn build(&self, seq: &ArithmeticSequence) -> Result<DigitSpec, DigitError> {
        match self {
            ElementSyntax::Rational(x) => DigitSpec::rational(x.clone(), seq),
            ElementSyntax::Finite(pairs) => DigitSpec::finite(pairs.clone(), seq),
            ElementSyntax::Digits(parts) => DigitSpec::rules(parts.clone(), seq),
        }
    }

    pub fn of(d: &DigitSpec) -> ElementSyntax {
        match d.kind() {
            DigitKind::ExactRational(x) => ElementSyntax::Rational(x.clone()),
            DigitKind::FiniteDigits(p) => ElementSyntax::Finite(p.clone()),
            DigitKind::RuleDigits(parts) => {
                ElementSyntax::Digits(parts.iter().map(|p| (p.set.clone(), p.rule.clone())).collect())
            }
        }
    }
}

impl fmt::Display for ElementSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementSyntax::Rational(x) => write!(f, "rational {}/{}", x.numer(), x.denom()),
            ElementSyntax::Finite(pairs) => {
                write!(f, "finite ")?;
                let items: Vec<String> = pairs.iter().map(|(n, c)| format!("{n}:{c}")).collect();
                write!(f, "{}", items.join(", "))
            }
            ElementSyntax::Digits(parts) => {
                write!(f, "digits ")?;
                let items: Vec<String> = parts.iter().map(|(s, r)| format!("on {s} value {r}")).collect();
                write!(f, "{}", items.join("; "))
            }
        }
    }
}

pub fn parse_element_syntax(s: &str) -> Result<ElementSyntax, GrammarError> {
    let mut p = Parser::new("element", s)?;
    let v = match p.word("element")?.as_str() {
        "rational" => ElementSyntax::Rational(p.rational("rational")?),
        "finite" => {
            let mut pairs = Vec::new();
            loop {
                let n = p.nat("finite")?;
                p.punct("finite", ':')?;
                pairs.push((n, p.nat("finite")?));
                if !p.peek_punct(',') {
                    break;
                }
                p.pos += 1;
            }
            ElementSyntax::Finite(pairs)
        }
        "digits" => {
            let mut parts = Vec::new();
            loop {
                p.keyword("digits", "on")?;
                let s = p.set()?;
                p.keyword("digits", "value")?;
                parts.push((s, p.digit_rule()?));
                if !p.peek_punct(';') {
                    break;
                }
                p.pos += 1;
            }
            ElementSyntax::Digits(parts)
        }
        other => return p.err("element", format!("unknown element form `{other}`")),
    };
    p.finish()?;
    Ok(v)
}

pub fn parse_element(s: &str, seq: &ArithmeticSequence) -> Result<DigitSpec, GrammarError> {
    parse_element_syntax(s)?.build(seq).map_err(|e| GrammarError {
        grammar: "element",
        rule: "digits".into(),
        message: e.to_string(),
        input: s.to_string(),
    })
}

/// `bu` and `du` refer to `seq`.
pub fn parse_ideal(s: &str, seq: &ArithmeticSequence) -> Result<IdealSpec, GrammarError> {
    let mut p = Parser::new("ideal", s)?;
    let v = p.ideal(seq)?;
    p.finish()?;
    Ok(v)
}

/// A comma separated list of rationals such as `1/4,1/8`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, GrammarError> {
    let mut p = Parser::new("rational list", s)?;
    let mut v = vec![p.rational("rational")?];
    while p.peek_punct(',') {
        p.pos += 1;
        v.push(p.rational("rational")?);
    }
    p.finish()?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    #[test]
    fn sets_round_trip() {
        for s in [
            "squares",
            "progression 2 0",
            "progression 3 1",
            "intervals geometric 2 length n",
            "intervals power 2 length 3",
            "finite 1,4,9",
            "cofinite 0,1,2",
            "union(finite 1,2, squares, powers 3)",
            "difference(evens, squares)",
            "intersection(odds, squares)",
            "shift(squares, -1)",
            "rank(odds, 3, 1)",
            "cubes",
            "from 5",
            "range 3 9",
            "positive",
            "empty",
        ] {
            let a = parse_set(s).unwrap();
            let b = parse_set(&a.to_string()).unwrap();
            assert_eq!(a, b, "{s}");
        }
        assert_eq!(parse_set("even").unwrap(), SetSpec::evens());
        assert_eq!(parse_set("union(finite 1,2, squares)").unwrap().enumerate(10), vec![1, 2, 4, 9]);
    }

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("constant 2").unwrap(), RatioRule::Constant(2));
        assert_eq!(parse_ratio("affine 1 1").unwrap(), RatioRule::Affine { a: 1, c: 1 });
        let pw = parse_ratio("piecewise even: constant 2; odd: affine 1 0").unwrap();
        let seq = ArithmeticSequence::new(pw.clone()).unwrap();
        assert_eq!((1..=6).map(|n| seq.ratio(n)).collect::<Vec<_>>(), vec![2, 2, 3, 2, 5, 2]);
        for r in [pw, parse_ratio("prefix 3,5 then power 2").unwrap(), parse_ratio("periodic 2,3").unwrap()] {
            assert_eq!(parse_ratio(&r.to_string()).unwrap(), r);
        }
        let with_else = parse_ratio("piecewise squares: constant 5; else: constant 2").unwrap();
        assert_eq!(parse_ratio(&with_else.to_string()).unwrap(), with_else);
    }

    #[test]
    fn errors_name_the_rule() {
        let e = parse_ratio("constant 1").unwrap_err();
        assert_eq!(e.rule, "constant");
        let e = parse_ratio("konstant 2").unwrap_err();
        assert_eq!(e.rule, "ratio");
        assert!(e.to_string().contains("ratio grammar"));
        assert_eq!(parse_ratio("affine 1").unwrap_err().rule, "affine");
        assert_eq!(parse_ratio("constant 2 extra").unwrap_err().rule, "end");
        assert!(parse_ratio("piecewise even: piecewise odd: constant 2").is_err());
        assert_eq!(parse_set("union(squares").unwrap_err().rule, "union");
        assert!(parse_ideal("density 3/2", &ArithmeticSequence::constant(2).unwrap()).is_err());
        assert_eq!(parse_set("squares & evens").unwrap_err().rule, "token");
    }

    #[test]
    fn elements() {
        let s2 = ArithmeticSequence::constant(2).unwrap();
        let d = parse_element("rational 5/7", &s2).unwrap();
        assert_eq!(d.kind(), &DigitKind::ExactRational(rat(5, 7)));
        let d = parse_element("digits on squares value 1", &s2).unwrap();
        assert_eq!(d.digits_upto(9), vec![1, 0, 0, 1, 0, 0, 0, 0, 1]);
        let f = ArithmeticSequence::factorial();
        let d = parse_element("digits on evens value top", &f).unwrap();
        assert_eq!(d.digits_upto(4), vec![0, 2, 0, 4]);
        assert_eq!(parse_element("digits on all value top", &f).unwrap_err().rule, "digits");
        for s in ["rational 1/3", "finite 1:1, 3:1", "digits on evens value 1; on odds value top", "digits on all value affine 1 -2"] {
            let a = parse_element_syntax(s).unwrap();
            assert_eq!(parse_element_syntax(&a.to_string()).unwrap(), a, "{s}");
        }
        assert!(parse_element("rational 3/2", &s2).is_err());
        assert!(parse_element("finite 1:2", &s2).is_err());
    }

    #[test]
    fn ideals() {
        let s = ArithmeticSequence::constant(2).unwrap();
        for i in ["fin", "density 1", "density 1/2", "bu", "du", "sum(bu, density 1)", "mod(squares, fin)", "all"] {
            let a = parse_ideal(i, &s).unwrap();
            assert_eq!(a.to_string(), i);
        }
        assert_eq!(parse_rational_list("1/4,1/8").unwrap(), vec![rat(1, 4), rat(1, 8)]);
    }
}
