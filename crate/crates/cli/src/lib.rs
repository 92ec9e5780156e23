//! Command-line front end.
//!
//! ```text
//! torsionlab expand   FILE [--n-max N]
//! torsionlab classify FILE [--audit SET] | --all DIR
//! torsionlab scan     FILE [--csv PATH] [--density-csv PATH] | --all DIR
//! torsionlab witness  --ratio R --set S --ideal I
//! torsionlab demo     euler | dk | half3 | squares | splitting | dl
//! torsionlab grammar
//! ```
//!
//! Oracle flags `--n-max`, `--tail-digits K` and `--epsilons 1/4,1/8` apply
//! to every command and take precedence over experiment files.  When neither
//! sets the horizon, `TORSIONLAB_HORIZON` replaces the default of 4096.
//!
//! Exit codes:
//!
//! | code | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success; `classify` and `witness` decided Member    |
//! | 1    | `classify` or `witness` decided NonMember           |
//! | 2    | malformed input (file, grammar string, flag)        |
//! | 3    | `classify` returned Unknown                         |
//! | 4    | oracle failure, or a scan whose report contradicts the classifier |
//!
//! Input grammars are printed by `torsionlab grammar`.

mod commands;
mod demos;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::Failure;

pub const EXIT_MEMBER: i32 = 0;
pub const EXIT_NON_MEMBER: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

pub const HORIZON_ENV: &str = "TORSIONLAB_HORIZON";

#[derive(Debug, Parser)]
#[command(name = "torsionlab", version, about = "Decide and test topological u_I-torsion of circle elements")]
pub struct Cli {
    /// Oracle horizon N.
    #[arg(long, global = true)]
    pub n_max: Option<u64>,
    /// Tail digits K for interval enclosures.
    #[arg(long, global = true)]
    pub tail_digits: Option<u32>,
    /// Comma separated epsilons, e.g. 1/4,1/8.
    #[arg(long, global = true)]
    pub epsilons: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the digits c_1..c_N and the supports.
    Expand { file: PathBuf },
    /// Run the rule-based classifier.
    Classify {
        /// Experiment file.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        file: Option<PathBuf>,
        /// Also probe the necessary conditions on this set.
        #[arg(long)]
        audit: Option<String>,
        /// Classify every *.toml file in a directory.
        #[arg(long)]
        all: Option<PathBuf>,
    },
    /// Replay an experiment through the brute-force oracle.
    Scan {
        /// Experiment file.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        file: Option<PathBuf>,
        /// Write the norm trace (one row per n) to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the checkpoint ratios to this path.
        #[arg(long)]
        density_csv: Option<PathBuf>,
        /// Scan every *.toml file in a directory and report contradictions.
        #[arg(long)]
        all: Option<PathBuf>,
    },
    /// Build an element outside the torsion subgroup with support in a set.
    Witness {
        /// Ratio rule of the sequence.
        #[arg(long)]
        ratio: String,
        /// Set that must contain the support.
        #[arg(long)]
        set: String,
        /// Ideal the element must avoid.
        #[arg(long, default_value = "fin")]
        ideal: String,
    },
    /// Run a bundled experiment.
    Demo { name: DemoName },
    /// Print the input grammars.
    Grammar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Euler,
    Dk,
    Half3,
    Squares,
    Splitting,
    Dl,
}

/// The error followed by each cause not already spelled out in it.
fn error_chain(e: &anyhow::Error) -> String {
    let mut msg = e.to_string();
    for cause in e.chain().skip(1) {
        let c = cause.to_string();
        if !msg.contains(&c) {
            msg = format!("{msg}: {c}");
        }
    }
    msg
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe))
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(code) => code,
        // a closed stdout (`| head`) ends the output quietly
        Err(f) if broken_pipe(f.error()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", error_chain(f.error()));
            f.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_captured(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("torsionlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn chain_skips_repeated_causes() {
        let inner = std::io::Error::other("disk full");
        let e = anyhow::Error::new(inner).context("cannot write out.csv");
        assert_eq!(error_chain(&e), "cannot write out.csv: disk full");
        let same = anyhow::anyhow!("bad input: x").context("bad input: x");
        assert_eq!(error_chain(&same), "bad input: x");
    }

    #[test]
    fn witness_in_memory() {
        let (code, out, _) = run_captured(&["witness", "--ratio", "factorial", "--set", "evens"]);
        assert_eq!(code, EXIT_NON_MEMBER);
        assert!(out.starts_with("element = digits on"), "{out}");
    }

    #[test]
    fn malformed_flags_are_input_errors() {
        let (code, _, err) = run_captured(&["witness", "--ratio", "constant", "--set", "evens"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("ratio grammar"), "{err}");
        let (code, _, _) = run_captured(&["classify"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, err) = run_captured(&["grammar", "--epsilons", "0"]);
        assert_eq!(code, EXIT_INPUT, "{err}");
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = run_captured(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("classify"));
    }
}
