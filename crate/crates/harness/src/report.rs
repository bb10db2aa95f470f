//! Check reports and their CSV / JSON-lines serialization.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Reserved for checks tied to a recorded discrepancy between a printed
    /// formula and direct computation.
    DiscrepancyLogged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DiscrepancyLogged => "discrepancy-logged",
        }
    }
}

/// Non-finite values are written as the strings `inf`, `-inf` and `nan` so
/// JSON output round-trips.
mod float {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t.parse::<f64>().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    #[serde(with = "float")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub status: Status,
    /// Headline measured quantity.
    #[serde(with = "float")]
    pub value: f64,
    /// Value the headline is compared with (closed form, bound or limit).
    #[serde(with = "float")]
    pub reference: f64,
    #[serde(with = "float")]
    pub tolerance: f64,
    #[serde(default)]
    pub measured: Vec<Measurement>,
    #[serde(default)]
    pub note: String,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport {
            check_name: name.to_string(),
            status: Status::Pass,
            value: f64::NAN,
            reference: f64::NAN,
            tolerance: f64::NAN,
            measured: Vec::new(),
            note: String::new(),
        }
    }

    pub fn measure(&mut self, name: impl Into<String>, value: f64) {
        self.measured.push(Measurement {
            name: name.into(),
            value,
        });
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.measured.iter().find(|m| m.name == name).map(|m| m.value)
    }

    /// Record a failed assertion; the first failure message is kept in the note.
    pub fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            if self.status != Status::Fail {
                let msg = what();
                self.note = if self.note.is_empty() { msg } else { format!("{msg}; {}", self.note) };
            }
            self.status = Status::Fail;
        }
    }

    pub fn add_note(&mut self, text: &str) {
        if self.note.is_empty() {
            self.note = text.to_string();
        } else {
            self.note.push_str("; ");
            self.note.push_str(text);
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    check_name: String,
    status: Status,
    value: f64,
    reference: f64,
    tolerance: f64,
}

/// Serialize reports. CSV carries `check_name,status,value,reference,tolerance`;
/// JSON lines carry one full report per line.
pub fn emit_report<W: Write>(reports: &[CheckReport], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(["check_name", "status", "value", "reference", "tolerance"])?;
            for r in reports {
                w.serialize(CsvRow {
                    check_name: r.check_name.clone(),
                    status: r.status,
                    value: r.value,
                    reference: r.reference,
                    tolerance: r.tolerance,
                })?;
            }
            w.flush().map_err(|e| HarnessError::Serialize(e.to_string()))?;
        }
        Format::Jsonl => {
            let mut out = out;
            for r in reports {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")
                    .map_err(|e| HarnessError::Serialize(e.to_string()))?;
            }
        }
    }
    Ok(())
}

pub fn write_report(path: &Path, reports: &[CheckReport], format: Format) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let file = std::fs::File::create(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    emit_report(reports, format, std::io::BufWriter::new(file))
}

/// Read back the CSV columns. Measurements and notes are not part of the CSV.
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<CheckReport>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rd.deserialize() {
        let row: CsvRow = row?;
        out.push(CheckReport {
            check_name: row.check_name,
            status: row.status,
            value: row.value,
            reference: row.reference,
            tolerance: row.tolerance,
            measured: Vec::new(),
            note: String::new(),
        });
    }
    Ok(out)
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| HarnessError::Serialize(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

pub fn any_failed(reports: &[CheckReport]) -> bool {
    reports.iter().any(CheckReport::failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckReport {
        let mut r = CheckReport::new("gamma_closed_form");
        r.value = 2.0;
        r.reference = 2.0;
        r.tolerance = 1e-8;
        r.measure("p=2", 2.0000000001);
        r.measure("unbounded", f64::INFINITY);
        r
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        emit_report(&[], Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "check_name,status,value,reference,tolerance\n");
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        emit_report(&[sample()], Format::Csv, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].check_name, "gamma_closed_form");
        assert_eq!((back[0].value, back[0].tolerance), (2.0, 1e-8));
    }

    #[test]
    fn jsonl_round_trip_keeps_infinities() {
        let mut buf = Vec::new();
        emit_report(&[sample()], Format::Jsonl, &mut buf).unwrap();
        let back = read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, vec![sample()]);
    }

    #[test]
    fn status_strings() {
        let j = serde_json::to_string(&Status::DiscrepancyLogged).unwrap();
        assert_eq!(j, "\"discrepancy-logged\"");
        assert_eq!(Status::DiscrepancyLogged.as_str(), "discrepancy-logged");
    }

    #[test]
    fn failure_flag() {
        let mut a = sample();
        assert!(!any_failed(&[a.clone()]));
        a.require(false, || "broken".into());
        assert!(any_failed(&[sample(), a]));
    }
}
