//! Experiment files: flat TOML sections holding grammar strings.
//!
//! ```toml
//! name = "half3"
//!
//! [sequence]
//! ratio = "constant 3"
//!
//! [element]
//! element = "rational 1/2"
//!
//! [ideal]
//! ideal = "density 1"
//!
//! [oracle]
//! n_max = 4096
//! tail_digits = 64
//! epsilons = ["1/4", "1/8"]
//! checkpoints = [512, 1024, 2048, 4096]
//! consistent = "1/20"
//! inconsistent = "1/5"
//! ```
//!
//! Only `[sequence]` and `[element]` are required.  Unknown keys are errors.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::digits::DigitSpec;
use crate::exact_arith::{parse_rational, rat, Rational};
use crate::grammar::{parse_element, parse_ideal, parse_sequence, GrammarError};
use crate::ideals::IdealSpec;
use crate::oracle::{default_checkpoints, Thresholds};
use crate::sequences::ArithmeticSequence;

pub const DEFAULT_HORIZON: u64 = 4096;
pub const DEFAULT_TAIL_DIGITS: u32 = 64;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot read {path}: {error}")]
    Io { path: String, error: std::io::Error },
    #[error("malformed experiment file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("[{section}] {error}")]
    Grammar { section: &'static str, error: GrammarError },
    #[error("[oracle] {0}")]
    Oracle(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    name: Option<String>,
    sequence: RawSequence,
    element: RawElement,
    ideal: Option<RawIdeal>,
    oracle: Option<RawOracle>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    ratio: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    element: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    ideal: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    n_max: Option<u64>,
    tail_digits: Option<u32>,
    epsilons: Option<Vec<String>>,
    checkpoints: Option<Vec<u64>>,
    consistent: Option<String>,
    inconsistent: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    pub n_max: u64,
    pub tail_digits: u32,
    pub epsilons: Vec<Rational>,
    /// `None` means the default `N/8, N/4, N/2, N`.
    pub checkpoints: Option<Vec<u64>>,
    pub thresholds: Thresholds,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_max: DEFAULT_HORIZON,
            tail_digits: DEFAULT_TAIL_DIGITS,
            epsilons: vec![rat(1, 4), rat(1, 8)],
            checkpoints: None,
            thresholds: Thresholds::default(),
        }
    }
}

impl OracleConfig {
    pub fn checkpoints(&self) -> Vec<u64> {
        self.checkpoints.clone().unwrap_or_else(|| default_checkpoints(self.n_max))
    }
}

#[derive(Clone, Debug)]
pub struct Experiment {
    pub name: String,
    pub ratio_text: String,
    pub element_text: String,
    pub ideal_text: String,
    pub seq: ArithmeticSequence,
    pub element: DigitSpec,
    pub ideal: IdealSpec,
    pub oracle: OracleConfig,
}

fn rational_field(field: &str, s: &str) -> Result<Rational, ExperimentError> {
    parse_rational(s).map_err(|e| ExperimentError::Oracle(format!("{field}: {e}")))
}

impl Experiment {
    /// Builds an experiment from grammar strings with default oracle settings.
    pub fn new(name: &str, ratio: &str, element: &str, ideal: &str) -> Result<Self, ExperimentError> {
        let seq = parse_sequence(ratio).map_err(|error| ExperimentError::Grammar { section: "sequence", error })?;
        let d = parse_element(element, &seq).map_err(|error| ExperimentError::Grammar { section: "element", error })?;
        let i = parse_ideal(ideal, &seq).map_err(|error| ExperimentError::Grammar { section: "ideal", error })?;
        Ok(Experiment {
            name: name.to_string(),
            ratio_text: ratio.to_string(),
            element_text: element.to_string(),
            ideal_text: ideal.to_string(),
            seq,
            element: d,
            ideal: i,
            oracle: OracleConfig::default(),
        })
    }

    pub fn from_toml(text: &str, fallback_name: &str) -> Result<Self, ExperimentError> {
        Experiment::from_toml_with_horizon(text, fallback_name, DEFAULT_HORIZON)
    }

    /// As [`Experiment::from_toml`], with `default_horizon` used when the
    /// file does not set `n_max`.
    pub fn from_toml_with_horizon(text: &str, fallback_name: &str, default_horizon: u64) -> Result<Self, ExperimentError> {
        let raw: RawFile = toml::from_str(text)?;
        let ideal = raw.ideal.map_or_else(|| "fin".to_string(), |i| i.ideal);
        let name = raw.name.unwrap_or_else(|| fallback_name.to_string());
        let mut e = Experiment::new(&name, &raw.sequence.ratio, &raw.element.element, &ideal)?;
        let o = raw.oracle.unwrap_or_default();
        let d = OracleConfig::default();
        let epsilons = match o.epsilons {
            Some(v) if v.is_empty() => return Err(ExperimentError::Oracle("epsilons must not be empty".into())),
            Some(v) => v.iter().map(|s| rational_field("epsilons", s)).collect::<Result<_, _>>()?,
            None => d.epsilons,
        };
        if epsilons.iter().any(|e| e <= &rat(0, 1) || e > &rat(1, 2)) {
            return Err(ExperimentError::Oracle("epsilons must lie in (0, 1/2]".into()));
        }
        let thresholds = Thresholds {
            consistent: o.consistent.map_or(Ok(d.thresholds.consistent), |s| rational_field("consistent", &s))?,
            inconsistent: o.inconsistent.map_or(Ok(d.thresholds.inconsistent), |s| rational_field("inconsistent", &s))?,
        };
        e.oracle = OracleConfig {
            n_max: o.n_max.unwrap_or(default_horizon),
            tail_digits: o.tail_digits.unwrap_or(d.tail_digits),
            epsilons,
            checkpoints: o.checkpoints,
            thresholds,
        };
        if e.oracle.n_max == 0 || e.oracle.tail_digits == 0 {
            return Err(ExperimentError::Oracle("n_max and tail_digits must be positive".into()));
        }
        Ok(e)
    }

    pub fn load(path: &Path, default_horizon: u64) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|error| ExperimentError::Io { path: path.display().to_string(), error })?;
        let stem = path.file_stem().map_or("experiment".into(), |s| s.to_string_lossy().into_owned());
        Experiment::from_toml_with_horizon(&text, &stem, default_horizon)
    }

    /// Flat TOML that [`Experiment::from_toml`] reads back unchanged.
    pub fn to_toml(&self) -> String {
        let q = |s: &str| format!("{s:?}");
        let eps: Vec<String> = self.oracle.epsilons.iter().map(|e| q(&e.to_string())).collect();
        let mut out = format!(
            "name = {}\n\n[sequence]\nratio = {}\n\n[element]\nelement = {}\n\n[ideal]\nideal = {}\n\n[oracle]\nn_max = {}\ntail_digits = {}\nepsilons = [{}]\n",
            q(&self.name),
            q(&self.ratio_text),
            q(&self.element_text),
            q(&self.ideal_text),
            self.oracle.n_max,
            self.oracle.tail_digits,
            eps.join(", "),
        );
        if let Some(c) = &self.oracle.checkpoints {
            let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("checkpoints = [{}]\n", c.join(", ")));
        }
        out.push_str(&format!(
            "consistent = {}\ninconsistent = {}\n",
            q(&self.oracle.thresholds.consistent.to_string()),
            q(&self.oracle.thresholds.inconsistent.to_string())
        ));
        out
    }
}
