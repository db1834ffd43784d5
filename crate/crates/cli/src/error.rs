use std::path::Path;

use knotres::diagram::DiagramError;
use knotres::flype::FlypeError;
use knotres::invariants::InvariantError;
use knotres::linalg::LinalgError;
use knotres::tait::TaitError;
use serde::Serialize;

/// A failure reported as `{"error": kind, "message": ...}`.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub error: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
    #[serde(skip)]
    pub usage: bool,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError { error: kind.to_string(), message: message.into(), report: None, usage: false }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError { usage: true, ..CliError::new("Usage", message) }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::new("Io", format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        if self.usage {
            2
        } else {
            1
        }
    }
}

fn diagram_kind(e: &DiagramError) -> &'static str {
    match e {
        DiagramError::Empty => "Empty",
        DiagramError::MalformedSyntax { .. } => "MalformedSyntax",
        DiagramError::BadArcMultiplicity { .. } => "BadArcMultiplicity",
        DiagramError::DisconnectedDiagram => "DisconnectedDiagram",
        DiagramError::NonPlanarRotation { .. } => "NonPlanarRotation",
        DiagramError::InconsistentOrientation { .. } => "InconsistentOrientation",
        DiagramError::BadOrientationCount { .. } => "BadOrientationCount",
        DiagramError::NotBipartite => "NotBipartite",
        DiagramError::BadOrder(_) => "BadOrder",
    }
}

fn linalg_kind(e: &LinalgError) -> &'static str {
    match e {
        LinalgError::NonSquare { .. } => "NonSquare",
        LinalgError::DimensionMismatch { .. } => "DimensionMismatch",
        LinalgError::Ragged => "Ragged",
        LinalgError::BadEntry(_) => "BadEntry",
        LinalgError::Singular => "Singular",
        LinalgError::SingularInterior => "SingularInterior",
        LinalgError::IndexOutOfRange { .. } => "IndexOutOfRange",
        LinalgError::PenroseViolation(_) => "PenroseViolation",
    }
}

fn tait_kind(e: &TaitError) -> &'static str {
    match e {
        TaitError::NotAccepted(reason) => reason,
        TaitError::IndexOutOfRange { .. } => "IndexOutOfRange",
        TaitError::BadWeight(_) => "BadWeight",
        TaitError::SelfLoop(_) => "SelfLoop",
        TaitError::UnbalancedGraph(_) => "UnbalancedGraph",
        TaitError::BadOrder(_) => "BadOrder",
        TaitError::Malformed(_) => "MalformedSyntax",
    }
}

fn invariant_kind(e: &InvariantError) -> &'static str {
    match e {
        InvariantError::Linalg(l) => linalg_kind(l),
        InvariantError::NonUniformWeights => "NonUniformWeights",
        InvariantError::IndexOutOfRange { .. } => "IndexOutOfRange",
        InvariantError::RankMismatch { .. } => "RankMismatch",
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        CliError::new(diagram_kind(&e), e.to_string())
    }
}

impl From<TaitError> for CliError {
    fn from(e: TaitError) -> Self {
        CliError::new(tait_kind(&e), e.to_string())
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        CliError::new(invariant_kind(&e), e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::new(linalg_kind(&e), e.to_string())
    }
}

impl From<FlypeError> for CliError {
    fn from(e: FlypeError) -> Self {
        match e {
            FlypeError::NotAdmissible => CliError::new("NotAdmissible", e.to_string()),
            FlypeError::NotAccepted(reason) => CliError::new(reason, e.to_string()),
            FlypeError::Diagram(d) => d.into(),
            FlypeError::Tait(t) => t.into(),
            FlypeError::Invariant(i) => i.into(),
        }
    }
}
