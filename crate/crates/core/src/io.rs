//! Versioned JSON documents exchanged by the command-line tool.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::ClassDescriptor;
use crate::error::{Error, Result};
use crate::finite::{AxiomReport, FiniteRootSystem};
use crate::symbolic::SymbolicRootSystem;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Payload {
    Finite(FiniteRootSystem),
    Symbolic(SymbolicRootSystem),
    Report(AxiomReport),
    Classes(Vec<ClassDescriptor>),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    #[serde(rename = "schemaVersion")]
    schema_version: u64,
    kind: String,
    payload: Value,
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Finite(_) => "finite",
            Payload::Symbolic(_) => "symbolic",
            Payload::Report(_) => "report",
            Payload::Classes(_) => "classes",
        }
    }

    fn to_value(&self) -> Value {
        let v = match self {
            Payload::Finite(r) => serde_json::to_value(r),
            Payload::Symbolic(r) => serde_json::to_value(r),
            Payload::Report(r) => serde_json::to_value(r),
            Payload::Classes(r) => serde_json::to_value(r),
        };
        v.expect("payloads serialize")
    }
}

fn invalid(e: impl std::fmt::Display) -> Error {
    Error::Invalid(e.to_string())
}

/// Canonical text of a document: sorted keys, two-space indent, trailing
/// newline.
pub fn to_string(p: &Payload) -> String {
    let env = Envelope { schema_version: SCHEMA_VERSION, kind: p.kind().into(), payload: p.to_value() };
    let mut s = serde_json::to_string_pretty(&env).expect("values serialize");
    s.push('\n');
    s
}

pub fn from_str(text: &str) -> Result<Payload> {
    let env: Envelope = serde_json::from_str(text).map_err(invalid)?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(Error::Invalid(format!("unsupported schemaVersion {}", env.schema_version)));
    }
    let v = env.payload;
    Ok(match env.kind.as_str() {
        "finite" => Payload::Finite(serde_json::from_value(v).map_err(invalid)?),
        "symbolic" => Payload::Symbolic(serde_json::from_value(v).map_err(invalid)?),
        "report" => Payload::Report(serde_json::from_value(v).map_err(invalid)?),
        "classes" => Payload::Classes(serde_json::from_value(v).map_err(invalid)?),
        k => return Err(Error::Invalid(format!("unknown document kind {k:?}"))),
    })
}
