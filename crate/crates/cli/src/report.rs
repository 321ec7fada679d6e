//! Check records and run reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

/// Where the expected value of a check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperFormula,
    Oracle,
    Trivial,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::PaperFormula => "paper-formula",
            Provenance::Oracle => "oracle",
            Provenance::Trivial => "trivial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Comparison {
    /// |observed − expected| ≤ tol
    Abs {
        tol: f64,
    },
    /// |observed − expected| ≤ tol·|expected|
    Rel {
        tol: f64,
    },
    AtMost,
    AtLeast,
    /// lo ≤ observed ≤ hi
    Within {
        lo: f64,
        hi: f64,
    },
    Equal,
}

impl Comparison {
    pub fn holds(self, expected: f64, observed: f64) -> bool {
        match self {
            Comparison::Abs { tol } => (observed - expected).abs() <= tol,
            Comparison::Rel { tol } => (observed - expected).abs() <= tol * expected.abs(),
            Comparison::AtMost => observed <= expected,
            Comparison::AtLeast => observed >= expected,
            Comparison::Within { lo, hi } => lo <= observed && observed <= hi,
            Comparison::Equal => observed == expected,
        }
    }

    pub fn describe(self) -> String {
        match self {
            Comparison::Abs { tol } => format!("abs {tol:e}"),
            Comparison::Rel { tol } => format!("rel {tol:e}"),
            Comparison::AtMost => "at-most".into(),
            Comparison::AtLeast => "at-least".into(),
            Comparison::Within { lo, hi } => format!("within [{lo}, {hi}]"),
            Comparison::Equal => "equal".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub provenance: Provenance,
    pub expected: f64,
    pub observed: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Record {
    pub fn new(name: impl Into<String>, provenance: Provenance, expected: f64, observed: f64, comparison: Comparison) -> Self {
        // NaN never passes
        let pass = comparison.holds(expected, observed);
        Record { name: name.into(), provenance, expected, observed, comparison, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Environment { version: env!("CARGO_PKG_VERSION").into(), os: std::env::consts::OS.into(), arch: std::env::consts::ARCH.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub pass: bool,
    pub config_hash: String,
    pub seed: u64,
    pub environment: Environment,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn new(command: &str, cfg: &ExperimentConfig) -> Self {
        RunReport { command: command.into(), pass: true, config_hash: cfg.hash(), seed: cfg.seed, environment: Environment::current(), records: Vec::new() }
    }

    pub fn push(&mut self, r: Record) {
        self.pass &= r.pass;
        self.records.push(r);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// One line per record, then the overall status.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} (config {}, seed {})", self.command, &self.config_hash[..12], self.seed);
        for r in &self.records {
            let _ = writeln!(
                s,
                "  [{}] {:<58} expected {:<12.6e} observed {:<12.6e} {} ({})",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.expected,
                r.observed,
                r.comparison.describe(),
                r.provenance.as_str()
            );
        }
        let _ = writeln!(s, "status: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}
