//! Serialization of endpoint sequences: b-file, CSV, and JSON.
//!
//! The b-file and CSV forms are bit-exact contracts (fixed separators,
//! 1-based consecutive indices, trailing newline, no blank lines), so
//! emitted files diff cleanly against reference data. JSON keeps every
//! integer faithful to readers that parse numbers as doubles: values above
//! 2^53 are written as decimal strings, and the parser accepts either
//! representation.

use serde::{Deserialize, Serialize};

use crate::sieve::EndpointSequence;
use crate::{Error, Result};

/// Largest integer JSON readers can be assumed to hold exactly (2^53).
const JSON_SAFE_MAX: u64 = 9_007_199_254_740_992;

mod json_safe_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::JSON_SAFE_MAX;

    pub fn serialize<S: Serializer>(v: &u64, ser: S) -> Result<S::Ok, S::Error> {
        if *v <= JSON_SAFE_MAX {
            ser.serialize_u64(*v)
        } else {
            ser.serialize_str(&v.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(super) enum NumberOrString {
        Number(u64),
        String(String),
    }

    pub(super) fn to_u64<E: serde::de::Error>(v: NumberOrString) -> Result<u64, E> {
        match v {
            NumberOrString::Number(n) => Ok(n),
            NumberOrString::String(s) => s
                .parse()
                .map_err(|e| E::custom(format!("invalid integer string {s:?}: {e}"))),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<u64, D::Error> {
        to_u64(NumberOrString::deserialize(de)?)
    }
}

mod json_safe_u64_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::json_safe_u64::{to_u64, NumberOrString};
    use super::JSON_SAFE_MAX;

    pub fn serialize<S: Serializer>(v: &[u64], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for &x in v {
            if x <= JSON_SAFE_MAX {
                seq.serialize_element(&x)?;
            } else {
                seq.serialize_element(&x.to_string())?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<u64>, D::Error> {
        Vec::<NumberOrString>::deserialize(de)?
            .into_iter()
            .map(to_u64)
            .collect()
    }
}

/// A computed endpoint sequence plus the provenance needed to reproduce it.
/// `generated_at` and `tool_version` describe the producing run; comparisons
/// of mathematical content go through [`ExportRecord::to_endpoint_sequence`],
/// which drops them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub k: u32,
    #[serde(with = "json_safe_u64")]
    pub limit: u64,
    #[serde(with = "json_safe_u64")]
    pub complete_below: u64,
    #[serde(with = "json_safe_u64_vec")]
    pub endpoints: Vec<u64>,
    pub generated_at: String,
    pub tool_version: String,
}

impl ExportRecord {
    pub fn new(seq: &EndpointSequence, limit: u64) -> Self {
        ExportRecord {
            k: seq.k(),
            limit,
            complete_below: seq.complete_below(),
            endpoints: seq.endpoints().to_vec(),
            generated_at: chrono::Utc::now().to_rfc3339(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_endpoint_sequence(&self) -> Result<EndpointSequence> {
        EndpointSequence::new(self.k, self.endpoints.clone(), self.complete_below)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Parse(format!("JSON encoding failed: {e}")))
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON record: {e}")))
    }
}

/// "i A_i" per line, 1-indexed, single space, newline after every line.
pub fn to_bfile(endpoints: &[u64]) -> String {
    let mut out = String::new();
    for (i, v) in endpoints.iter().enumerate() {
        out.push_str(&format!("{} {v}\n", i + 1));
    }
    out
}

/// Strict inverse of [`to_bfile`]: consecutive 1-based indices, exactly one
/// space per line, terminating newline, no blank or comment lines.
pub fn parse_bfile(text: &str) -> Result<Vec<u64>> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(Error::Parse("missing terminating newline".into()));
    }
    let mut endpoints = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let (idx, value) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("line {}: expected \"i A_i\"", lineno + 1)))?;
        let idx: usize = idx
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: bad index: {e}", lineno + 1)))?;
        if idx != lineno + 1 {
            return Err(Error::Parse(format!(
                "line {}: index {idx} out of sequence",
                lineno + 1
            )));
        }
        if value.is_empty() || value.contains(' ') {
            return Err(Error::Parse(format!(
                "line {}: expected a single space separator",
                lineno + 1
            )));
        }
        let value: u64 = value
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: bad value: {e}", lineno + 1)))?;
        endpoints.push(value);
    }
    Ok(endpoints)
}

const CSV_HEADER: &str = "i,A_i";

/// CSV with header "i,A_i", then one "i,value" row per endpoint.
pub fn to_csv(endpoints: &[u64]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (i, v) in endpoints.iter().enumerate() {
        out.push_str(&format!("{},{v}\n", i + 1));
    }
    out
}

/// Strict inverse of [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<u64>> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(Error::Parse("missing terminating newline".into()));
    }
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse(format!("expected header {CSV_HEADER:?}")));
    }
    let mut endpoints = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let (idx, value) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("row {}: expected \"i,A_i\"", lineno + 1)))?;
        let idx: usize = idx
            .parse()
            .map_err(|e| Error::Parse(format!("row {}: bad index: {e}", lineno + 1)))?;
        if idx != lineno + 1 {
            return Err(Error::Parse(format!(
                "row {}: index {idx} out of sequence",
                lineno + 1
            )));
        }
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("row {}: bad value: {e}", lineno + 1)))?;
        endpoints.push(value);
    }
    Ok(endpoints)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Bfile,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfile" => Ok(Format::Bfile),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParams(format!(
                "unknown format {other:?} (expected bfile, json, or csv)"
            ))),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Bfile => "bfile",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Renders a record in the requested format.
pub fn render(record: &ExportRecord, format: Format) -> Result<String> {
    match format {
        Format::Bfile => Ok(to_bfile(&record.endpoints)),
        Format::Csv => Ok(to_csv(&record.endpoints)),
        Format::Json => record.to_json(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: u32, endpoints: Vec<u64>, complete_below: u64, limit: u64) -> ExportRecord {
        let seq = EndpointSequence::new(k, endpoints, complete_below).unwrap();
        ExportRecord::new(&seq, limit)
    }

    #[test]
    fn bfile_bytes_are_exact() {
        assert_eq!(to_bfile(&[1, 4, 8, 9]), "1 1\n2 4\n3 8\n4 9\n");
        assert_eq!(to_bfile(&[]), "");
    }

    #[test]
    fn csv_bytes_are_exact() {
        assert_eq!(to_csv(&[1, 4, 8, 9]), "i,A_i\n1,1\n2,4\n3,8\n4,9\n");
        assert_eq!(to_csv(&[]), "i,A_i\n");
    }

    #[test]
    fn bfile_round_trips() {
        let endpoints = vec![1, 4, 8, 9, 12, 24];
        assert_eq!(parse_bfile(&to_bfile(&endpoints)).unwrap(), endpoints);
        assert_eq!(parse_bfile("").unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn bfile_parser_is_strict() {
        assert!(parse_bfile("1 1\n2 4").is_err(), "missing final newline");
        assert!(parse_bfile("1 1\n3 4\n").is_err(), "skipped index");
        assert!(parse_bfile("0 1\n").is_err(), "0-based index");
        assert!(parse_bfile("1  1\n").is_err(), "double space");
        assert!(parse_bfile("1 1\n\n2 4\n").is_err(), "blank line");
        assert!(parse_bfile("1 1 \n").is_err(), "trailing space");
        assert!(parse_bfile("1\t1\n").is_err(), "tab separator");
    }

    #[test]
    fn csv_parser_is_strict() {
        assert!(parse_csv("1,1\n").is_err(), "missing header");
        assert!(parse_csv("i,A_i\n1,1").is_err(), "missing final newline");
        assert!(parse_csv("i,A_i\n2,1\n").is_err(), "wrong start index");
        let endpoints = vec![1, 4, 8, 9];
        assert_eq!(parse_csv(&to_csv(&endpoints)).unwrap(), endpoints);
    }

    #[test]
    fn json_round_trips_and_preserves_big_integers() {
        let big = JSON_SAFE_MAX + 12_345;
        let rec = record(40, vec![1, 2, big], big, big + 1);
        let json = rec.to_json().unwrap();
        // Above 2^53 the value must travel as a string.
        assert!(json.contains(&format!("\"{big}\"")), "{json}");
        assert!(json.contains("\"limit\": \"9007199254753338\""), "{json}");
        let back = ExportRecord::parse_json(&json).unwrap();
        assert_eq!(back, rec);

        // Small values stay plain numbers, and numeric form parses too.
        let rec = record(3, vec![1, 4, 8, 9], 9, 50);
        let json = rec.to_json().unwrap();
        assert!(json.contains("\"limit\": 50"), "{json}");
        assert_eq!(ExportRecord::parse_json(&json).unwrap(), rec);
    }

    #[test]
    fn json_accepts_string_form_for_small_values() {
        let text = r#"{
            "k": 3, "limit": "50", "complete_below": 9,
            "endpoints": [1, "4", 8, 9],
            "generated_at": "2026-01-01T00:00:00+00:00",
            "tool_version": "0.0.0"
        }"#;
        let rec = ExportRecord::parse_json(text).unwrap();
        assert_eq!(rec.limit, 50);
        assert_eq!(rec.endpoints, vec![1, 4, 8, 9]);
    }

    #[test]
    fn record_round_trips_through_sequence() {
        let rec = record(3, vec![1, 4, 8, 9, 12], 13, 20);
        let seq = rec.to_endpoint_sequence().unwrap();
        assert_eq!(seq.endpoints(), &[1, 4, 8, 9, 12]);
        assert_eq!(seq.complete_below(), 13);
        assert_eq!(seq.k(), 3);
    }

    #[test]
    fn format_parses_and_displays() {
        for (s, f) in [
            ("bfile", Format::Bfile),
            ("json", Format::Json),
            ("csv", Format::Csv),
        ] {
            assert_eq!(s.parse::<Format>().unwrap(), f);
            assert_eq!(f.to_string(), s);
        }
        assert!("tsv".parse::<Format>().is_err());
    }
}
