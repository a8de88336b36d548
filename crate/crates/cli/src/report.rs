//! JSON envelope written by every command.

use std::io;

use ifs_lab::certificate::CertificateReport;
use ifs_lab::paramspace::{ParamSet, Window};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::commands::{AttractorSummary, LandmarkRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub timestamp: String,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Certificate(Box<CertificateReport>),
    Grid(GridSummary),
    Attractor(AttractorSummary),
    Landmarks(Vec<LandmarkRow>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub depth: usize,
    pub set: ParamSet,
    pub survived: usize,
    pub escaped: usize,
    pub output: String,
}

impl ReportEnvelope {
    pub fn new(command: Vec<String>, payload: Payload) -> Self {
        ReportEnvelope {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            timestamp: chrono::Utc::now().to_rfc3339(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Writes floats with 17 significant digits, enough to round-trip exactly.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).expect("report types serialize infallibly");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(to_json(&0.1f64), "1.0000000000000001e-1");
        assert_eq!(to_json(&vec![1.0f64, -2.5]), "[1.0000000000000000e0,-2.5000000000000000e0]");
        let back: f64 = serde_json::from_str(&to_json(&std::f64::consts::PI)).unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(to_json(&f64::INFINITY), "null");
    }
}
