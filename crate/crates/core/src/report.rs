//! JSON reports for single verifications and parameter sweeps.
//!
//! Output is deterministic: struct fields serialize in declaration order,
//! parameter maps are sorted by key, and every float is written with 17
//! significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::{Map, Value};

use crate::geometry::CheckReport;
use crate::rootcheck::BlaschkeClass;

/// Version string embedded in every report.
pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON schema every [`Report`] validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Hypotheses hold and every check agrees with the conclusion.
    Consistent,
    /// Hypotheses fail; checks ran for information only.
    HypothesesNotSatisfied,
    /// Hypotheses hold but a check failed.
    Contradiction,
    /// The supplied data cannot describe a normalized mapping.
    Inconsistent,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Contradiction => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub case: String,
    pub satisfied: bool,
}

/// One cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub a: f64,
    /// `θ - γ` for the Möbius sweep, `θ` otherwise.
    pub angle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub case: String,
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blaschke: Option<BlaschkeClass>,
    pub max_modulus: f64,
    pub witness: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_x_margin: Option<f64>,
    /// False only when the hypotheses hold and a bound is violated.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub hypothesis: Hypothesis,
    pub checks: Vec<CheckReport>,
    pub verdict: Verdict,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<SweepCell>>,
}

impl Report {
    pub fn new(command: &str, params: Map<String, Value>, hypothesis: Hypothesis) -> Self {
        Report {
            command: command.into(),
            params,
            hypothesis,
            checks: Vec::new(),
            verdict: Verdict::Consistent,
            version: REPORT_VERSION.into(),
            cells: None,
        }
    }

    /// Sets the verdict from the hypothesis flag and the checks.
    pub fn conclude(&mut self) {
        self.verdict = if !self.hypothesis.satisfied {
            Verdict::HypothesesNotSatisfied
        } else if self.checks.iter().all(|c| c.pass) {
            Verdict::Consistent
        } else {
            Verdict::Contradiction
        };
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

/// Writes floats as `{:.16e}`, i.e. 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with [`FixedDigits`] float formatting.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FixedDigits);
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Builds a parameter map from `(key, value)` pairs.
pub fn params<I, K>(pairs: I) -> Map<String, Value>
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}
