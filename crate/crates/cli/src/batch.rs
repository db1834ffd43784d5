use std::path::{Path, PathBuf};

use knotres::invariants::fp;
use knotres::linalg::{format_rational, Rational};
use knotres::tait::laplacian;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::input::{self, Format, Loaded};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
}

/// `name path` per line; `#` starts a comment; paths are relative to the manifest.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(path), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(CliError::new("MalformedManifest", format!("line {}: expected `name path`", lineno + 1)));
        };
        let path = Path::new(path);
        let path = if path.is_absolute() { path.to_path_buf() } else { base.join(path) };
        out.push(ManifestEntry { name: name.to_string(), path });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryResult {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fp: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Group {
    pub fp: String,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchReport {
    pub entries: Vec<EntryResult>,
    pub groups: Vec<Group>,
}

fn compute(entry: &ManifestEntry) -> Result<Rational, CliError> {
    let text = input::read_file(&entry.path)?;
    let format = if entry.path.extension().is_some_and(|e| e == "pd") {
        Format::Pd
    } else {
        match serde_json::from_str::<serde_json::Value>(&text) {
            Ok(v) if v.get("edges").is_some() => Format::EdgeList,
            Ok(_) => Format::Json,
            Err(_) => Format::Pd,
        }
    };
    let graph = match input::parse(&text, format, true)? {
        Loaded::Diagram(d) => knotres::tait::tait_graph(&d)?,
        Loaded::Graph(g) => g,
    };
    Ok(fp(&laplacian(&graph))?)
}

/// FP of every entry, computed concurrently and reported in manifest order.
pub fn run(entries: &[ManifestEntry]) -> BatchReport {
    let values: Vec<Result<Rational, CliError>> = entries.par_iter().map(compute).collect();
    let mut groups: Vec<(Rational, Vec<String>)> = Vec::new();
    let mut results = Vec::with_capacity(entries.len());
    for (entry, value) in entries.iter().zip(values) {
        match value {
            Ok(v) => {
                match groups.iter_mut().find(|(g, _)| *g == v) {
                    Some((_, names)) => names.push(entry.name.clone()),
                    None => groups.push((v.clone(), vec![entry.name.clone()])),
                }
                results.push(EntryResult { name: entry.name.clone(), fp: Some(format_rational(&v)), error: None, message: None });
            }
            Err(e) => results.push(EntryResult {
                name: entry.name.clone(),
                fp: None,
                error: Some(e.error),
                message: Some(e.message),
            }),
        }
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    BatchReport {
        entries: results,
        groups: groups.into_iter().map(|(v, names)| Group { fp: format_rational(&v), names }).collect(),
    }
}

pub fn table(report: &BatchReport) -> String {
    let mut rows: Vec<(String, String)> = report.groups.iter().map(|g| (g.fp.clone(), g.names.join(", "))).collect();
    for e in report.entries.iter().filter(|e| e.error.is_some()) {
        rows.push(("failed".into(), format!("{}: {}", e.name, e.error.as_deref().unwrap_or(""))));
    }
    if rows.is_empty() {
        return String::new();
    }
    let width = rows.iter().map(|(a, _)| a.len()).max().unwrap_or(0).max("FP".len());
    let mut out = format!("{:<width$}  names\n", "FP");
    for (a, b) in rows {
        out.push_str(&format!("{a:<width$}  {b}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lines() {
        let m = parse_manifest("# header\n3a1 torus3.pd\n\n8a2A  sub/8a2A.pd # trailing\n", Path::new("/d")).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1], ManifestEntry { name: "8a2A".into(), path: PathBuf::from("/d/sub/8a2A.pd") });
        assert!(parse_manifest("just-a-name\n", Path::new(".")).is_err());
    }

    #[test]
    fn empty_manifest_gives_empty_table() {
        let r = run(&[]);
        assert!(r.entries.is_empty() && r.groups.is_empty());
        assert_eq!(table(&r), "");
    }
}
