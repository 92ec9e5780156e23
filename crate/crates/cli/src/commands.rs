use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use torsionlab_core::classifier::{classify_with_audit, witness_nonmember, Decision, Verdict, WitnessError};
use torsionlab_core::corpus::{contradicts, corroborates};
use torsionlab_core::exact_arith::Rational;
use torsionlab_core::experiment::{Experiment, DEFAULT_HORIZON};
use torsionlab_core::grammar::{parse_ideal, parse_rational_list, parse_sequence, parse_set, ElementSyntax, GRAMMAR};
use torsionlab_core::logic::TriBool;
use torsionlab_core::oracle::{
    convergence_reports, trace_for_epsilons, write_density_csv, write_norm_csv, ConvergenceReport, NormTrace,
};

use crate::{demos, Cli, Command, EXIT_INPUT, EXIT_MEMBER, EXIT_NON_MEMBER, EXIT_ORACLE, EXIT_UNKNOWN, HORIZON_ENV};

/// A failed command: bad input, or an oracle run that could not finish.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Oracle(anyhow::Error),
}

impl Failure {
    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Oracle(e) => e,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Oracle(_) => EXIT_ORACLE,
        }
    }
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn oracle<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Oracle(e.into())
}

fn io(e: std::io::Error) -> Failure {
    Failure::Oracle(e.into())
}

/// Oracle overrides gathered from flags and the environment.
pub(crate) struct Settings {
    pub n_max: Option<u64>,
    pub tail_digits: Option<u32>,
    pub epsilons: Option<Vec<Rational>>,
    pub default_horizon: u64,
}

impl Settings {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let default_horizon = match std::env::var(HORIZON_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| input(anyhow!("{HORIZON_ENV}={v:?} is not a positive integer")))?,
            Err(_) => DEFAULT_HORIZON,
        };
        if default_horizon == 0 || cli.n_max == Some(0) || cli.tail_digits == Some(0) {
            return Err(input(anyhow!("horizon and tail digits must be positive")));
        }
        let epsilons = cli.epsilons.as_deref().map(parse_rational_list).transpose().map_err(input)?;
        let half = Rational::new(1.into(), 2.into());
        if let Some(eps) = &epsilons {
            if eps.iter().any(|e| e <= &Rational::from_integer(0.into()) || e > &half) {
                return Err(input(anyhow!("--epsilons must lie in (0, 1/2]")));
            }
        }
        Ok(Settings { n_max: cli.n_max, tail_digits: cli.tail_digits, epsilons, default_horizon })
    }

    pub fn horizon(&self) -> u64 {
        self.n_max.unwrap_or(self.default_horizon)
    }

    pub fn apply(&self, e: &mut Experiment) {
        if let Some(n) = self.n_max {
            e.oracle.n_max = n;
            e.oracle.checkpoints = None;
        }
        if let Some(k) = self.tail_digits {
            e.oracle.tail_digits = k;
        }
        if let Some(eps) = &self.epsilons {
            e.oracle.epsilons = eps.clone();
        }
    }

    fn load(&self, path: &Path) -> Result<Experiment, Failure> {
        let mut e = Experiment::load(path, self.default_horizon).map_err(input)?;
        self.apply(&mut e);
        Ok(e)
    }
}

pub(crate) fn decision_code(d: Decision) -> i32 {
    match d {
        Decision::Member => EXIT_MEMBER,
        Decision::NonMember => EXIT_NON_MEMBER,
        Decision::Unknown => EXIT_UNKNOWN,
    }
}

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let settings = Settings::from_cli(cli)?;
    match &cli.command {
        Command::Expand { file } => {
            let e = settings.load(file)?;
            expand(&e, cli.n_max.unwrap_or(32), out)?;
            Ok(0)
        }
        Command::Classify { file: Some(f), audit, .. } => {
            let e = settings.load(f)?;
            let audit = audit.as_deref().map(parse_set).transpose().map_err(input)?;
            let v = classify_with_audit(&e.element, &e.ideal, audit.as_ref());
            describe(&e, out).map_err(io)?;
            print_verdict(&v, out).map_err(io)?;
            Ok(decision_code(v.decision))
        }
        Command::Classify { all: Some(dir), .. } => classify_all(dir, &settings, out),
        Command::Scan { file: Some(f), csv, density_csv, .. } => {
            let e = settings.load(f)?;
            let run = scan(&e)?;
            describe(&e, out).map_err(io)?;
            print_scan(&run, out).map_err(io)?;
            if let Some(p) = csv {
                write_norm_csv(&run.trace, BufWriter::new(create(p)?)).map_err(oracle)?;
            }
            if let Some(p) = density_csv {
                write_density_csv(&run.reports, BufWriter::new(create(p)?)).map_err(oracle)?;
            }
            Ok(if contradicts(run.verdict.decision, &run.reports) { EXIT_ORACLE } else { 0 })
        }
        Command::Scan { all: Some(dir), .. } => scan_all(dir, &settings, out),
        Command::Classify { .. } | Command::Scan { .. } => Err(input(anyhow!("give a file or --all DIR"))),
        Command::Witness { ratio, set, ideal } => witness(ratio, set, ideal, out),
        Command::Demo { name } => demos::run(*name, &settings, out),
        Command::Grammar => {
            write!(out, "{GRAMMAR}").map_err(io)?;
            Ok(0)
        }
    }
}

fn create(p: &Path) -> Result<File, Failure> {
    File::create(p).with_context(|| format!("cannot create {}", p.display())).map_err(oracle)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn expand(e: &Experiment, n: u64, out: &mut dyn Write) -> Result<(), Failure> {
    let digits = e.element.digits_upto(n);
    let ratios: Vec<u64> = (1..=n).map(|i| e.seq.ratio(i)).collect();
    let s = e.element.supports().map_err(oracle)?;
    let mut w = || -> std::io::Result<()> {
        writeln!(out, "x: {}", e.element_text)?;
        writeln!(out, "u: {}", e.ratio_text)?;
        writeln!(out, "b_1..b_{n}: {}", join(&ratios))?;
        writeln!(out, "c_1..c_{n}: {}", join(&digits))?;
        writeln!(out, "supp = {}", s.supp)?;
        writeln!(out, "supp_b = {}", s.supp_b)?;
        match s.supp.is_finite() {
            TriBool::Yes => writeln!(out, "finite support"),
            TriBool::No => writeln!(out, "infinite support"),
            TriBool::Unknown => Ok(()),
        }
    };
    w().map_err(io)
}

pub(crate) fn describe(e: &Experiment, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "case: {}", e.name)?;
    writeln!(out, "x: {} | u: {} | ideal: {}", e.element_text, e.ratio_text, e.ideal)
}

pub(crate) fn print_verdict(v: &Verdict, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{v}")?;
    for (label, s) in &v.witnesses {
        writeln!(out, "witness {label}: {s}")?;
    }
    if !v.conflicts.is_empty() {
        let names: Vec<&str> = v.conflicts.iter().map(|r| r.name()).collect();
        writeln!(out, "conflicting rules: {}", names.join(", "))?;
    }
    Ok(())
}

pub(crate) struct ScanRun {
    pub verdict: Verdict,
    pub trace: NormTrace,
    pub reports: Vec<ConvergenceReport>,
}

pub(crate) fn scan(e: &Experiment) -> Result<ScanRun, Failure> {
    let verdict = classify_with_audit(&e.element, &e.ideal, None);
    let o = &e.oracle;
    let trace = trace_for_epsilons(&e.element, (&e.seq).into(), &o.epsilons, o.n_max, o.tail_digits).map_err(oracle)?;
    let reports =
        convergence_reports(&trace, &e.ideal, &o.epsilons, &o.checkpoints(), &o.thresholds).map_err(oracle)?;
    Ok(ScanRun { verdict, trace, reports })
}

pub(crate) fn print_reports(mode: &str, reports: &[ConvergenceReport], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "oracle mode: {mode}")?;
    for r in reports {
        writeln!(out, "epsilon {}: {}", r.epsilon, r.verdict)?;
        for c in &r.checkpoints {
            writeln!(out, "  N={} count={} ratio={}", c.n, c.count, c.ratio)?;
        }
    }
    Ok(())
}

pub(crate) fn agreement(decision: Decision, reports: &[ConvergenceReport]) -> &'static str {
    if contradicts(decision, reports) {
        "contradicts the classifier"
    } else if decision != Decision::Unknown && corroborates(decision, reports) {
        "corroborates the classifier"
    } else {
        "does not contradict the classifier"
    }
}

pub(crate) fn print_scan(run: &ScanRun, out: &mut dyn Write) -> std::io::Result<()> {
    match run.verdict.decided_by {
        Some(r) => writeln!(out, "classifier: {} by {}", run.verdict.decision, r.name())?,
        None => writeln!(out, "classifier: {}", run.verdict.decision)?,
    }
    print_reports(&run.trace.mode.to_string(), &run.reports, out)?;
    writeln!(out, "oracle {}", agreement(run.verdict.decision, &run.reports))
}

fn toml_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))
        .map_err(input)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(input(anyhow!("no .toml files in {}", dir.display())));
    }
    Ok(files)
}

fn classify_all(dir: &Path, settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    let lines: Vec<(String, bool)> = toml_files(dir)?
        .par_iter()
        .map(|p| match settings.load(p) {
            Ok(e) => {
                let v = classify_with_audit(&e.element, &e.ideal, None);
                let by = v.decided_by.map_or(String::new(), |r| format!(" by {}", r.name()));
                (format!("{}: {}{by}", e.name, v.decision), true)
            }
            Err(f) => (format!("{}: error: {:#}", p.display(), f.error()), false),
        })
        .collect();
    for (l, _) in &lines {
        writeln!(out, "{l}").map_err(io)?;
    }
    Ok(if lines.iter().all(|(_, ok)| *ok) { 0 } else { EXIT_INPUT })
}

fn scan_all(dir: &Path, settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    let results: Vec<(String, i32)> = toml_files(dir)?
        .par_iter()
        .map(|p| match settings.load(p).and_then(|e| scan(&e).map(|r| (e, r))) {
            Ok((e, r)) => {
                let bad = contradicts(r.verdict.decision, &r.reports);
                let eps: Vec<String> = r.reports.iter().map(|x| format!("{}={}", x.epsilon, x.verdict)).collect();
                let line = format!(
                    "{}: classifier {}; oracle {} [{}]",
                    e.name,
                    r.verdict.decision,
                    agreement(r.verdict.decision, &r.reports),
                    eps.join(", ")
                );
                (line, if bad { EXIT_ORACLE } else { 0 })
            }
            Err(f) => (format!("{}: error: {:#}", p.display(), f.error()), f.exit_code()),
        })
        .collect();
    for (l, _) in &results {
        writeln!(out, "{l}").map_err(io)?;
    }
    Ok(results.iter().map(|(_, c)| *c).max().unwrap_or(0))
}

fn witness(ratio: &str, set: &str, ideal: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let seq = parse_sequence(ratio).map_err(input)?;
    let b = parse_set(set).map_err(input)?;
    let i = parse_ideal(ideal, &seq).map_err(input)?;
    let d = match witness_nonmember(&b, &seq, &i) {
        Ok(d) => d,
        Err(WitnessError::Undecided(m)) => {
            writeln!(out, "no witness: {m}").map_err(io)?;
            return Ok(EXIT_UNKNOWN);
        }
        Err(e) => return Err(input(e)),
    };
    let v = classify_with_audit(&d, &i, None);
    let mut w = || -> std::io::Result<()> {
        writeln!(out, "element = {}", ElementSyntax::of(&d))?;
        print_verdict(&v, out)
    };
    w().map_err(io)?;
    Ok(decision_code(v.decision))
}
