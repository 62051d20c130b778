//! Verification reports and their JSON / CSV / text renderings.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::catalog::Completeness;
use crate::error::{Error, Result};
use crate::spectrum::GroupStats;

/// Serializes a big integer as a bare JSON number.
pub(crate) fn big_number<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    let num = serde_json::Number::from_str(&n.to_string()).map_err(serde::ser::Error::custom)?;
    num.serialize(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    /// Output of scans and runs outside the stated hypotheses. Carries no
    /// pass/fail meaning.
    Exploratory,
    VerifiedOnIncompleteCatalog,
    Counterexample,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified | Verdict::Exploratory => 0,
            Verdict::Counterexample => 1,
            Verdict::VerifiedOnIncompleteCatalog => 2,
        }
    }

    /// Verdict for a check that passed over a catalog of the given completeness.
    pub fn passed(completeness: Completeness) -> Verdict {
        if completeness.is_complete() {
            Verdict::Verified
        } else {
            Verdict::VerifiedOnIncompleteCatalog
        }
    }

    /// The more serious of two verdicts.
    pub fn worst(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Exploratory => "exploratory",
            Verdict::VerifiedOnIncompleteCatalog => "verified-on-incomplete-catalog",
            Verdict::Counterexample => "counterexample",
        })
    }
}

/// A group (with its statistics) or a grid point singled out by a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<GroupStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Witness {
    pub fn group(name: impl Into<String>, spec: impl fmt::Display, stats: GroupStats) -> Self {
        Witness {
            subject: name.into(),
            spec: Some(spec.to_string()),
            stats: Some(stats),
            detail: None,
        }
    }

    pub fn point(subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Witness {
            subject: subject.into(),
            spec: None,
            stats: None,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    fn summary(&self) -> String {
        let mut s = self.subject.clone();
        if let Some(spec) = self.spec.as_ref().filter(|sp| **sp != self.subject) {
            s.push_str(&format!(" [{spec}]"));
        }
        if let Some(d) = &self.detail {
            s.push_str(&format!(": {d}"));
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Left-aligned columns separated by two spaces, trailing blanks trimmed.
    pub fn write_text(&self, out: &mut dyn Write) -> Result<()> {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                s.push_str(cell);
                s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
            }
            s.trim_end().to_string()
        };
        writeln!(out, "{}", line(&self.columns))?;
        for row in &self.rows {
            writeln!(out, "{}", line(row))?;
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::invariant(format!("csv writer: {other:?}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::input(format!(
                "unknown output format `{other}` (expected json, csv or text)"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub parameters: BTreeMap<String, String>,
    pub completeness: Completeness,
    pub verdict: Verdict,
    /// Number of groups or grid points examined.
    pub checked: u64,
    pub expected: Vec<String>,
    pub argmax: Vec<Witness>,
    pub witnesses: Vec<Witness>,
    pub table: Table,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(claim: &str, table: Table) -> Self {
        VerificationReport {
            claim: claim.to_string(),
            parameters: BTreeMap::new(),
            completeness: Completeness::Complete,
            verdict: Verdict::Verified,
            checked: 0,
            expected: Vec::new(),
            argmax: Vec::new(),
            witnesses: Vec::new(),
            table,
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    /// Checks the structural promises of a report.
    pub fn check(&self) -> Result<()> {
        if self.verdict == Verdict::Counterexample && self.witnesses.is_empty() {
            return Err(Error::invariant(format!(
                "{}: counterexample verdict without a witness",
                self.claim
            )));
        }
        if self.verdict == Verdict::Verified && !self.completeness.is_complete() {
            return Err(Error::invariant(format!(
                "{}: verified verdict over an incomplete catalog",
                self.claim
            )));
        }
        Ok(())
    }

    pub fn render(&self, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, self)
                    .map_err(|e| Error::invariant(format!("json: {e}")))?;
                writeln!(out)?;
                Ok(())
            }
            OutputFormat::Csv => self.table.write_csv(out),
            OutputFormat::Text => self.write_text(out),
        }
    }

    fn write_text(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "claim         {}", self.claim)?;
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(out, "parameters    {}", params.join(" "))?;
        writeln!(out, "completeness  {}", self.completeness)?;
        writeln!(out, "verdict       {}", self.verdict)?;
        writeln!(out, "checked       {}", self.checked)?;
        if !self.expected.is_empty() {
            writeln!(out, "expected      {}", self.expected.join(", "))?;
        }
        for (i, w) in self.argmax.iter().enumerate() {
            let head = if i == 0 { "argmax" } else { "" };
            writeln!(out, "{head:<14}{}", w.summary())?;
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            let head = if i == 0 { "witness" } else { "" };
            writeln!(out, "{head:<14}{}", w.summary())?;
        }
        if !self.table.columns.is_empty() {
            writeln!(out)?;
            self.table.write_text(out)?;
        }
        if !self.notes.is_empty() {
            writeln!(out)?;
            for n in &self.notes {
                writeln!(out, "note: {n}")?;
            }
        }
        Ok(())
    }
}
