use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use knotres::diagram::{parse_json_diagram, parse_pd, Diagram};
use knotres::tait::{parse_edge_list, tait_graph, TaitGraph};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pd,
    #[value(alias = "json-diagram")]
    Json,
    EdgeList,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Read the input from a file (looked up in the data directory when not found).
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Inline PD text.
    #[arg(long, value_name = "STR")]
    pub pd: Option<String>,
    /// Inline edge-list JSON.
    #[arg(long = "edge-list", value_name = "STR")]
    pub edge_list: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[command(flatten)]
    pub source: Source,
    /// Format of `--input`; inferred from the file name and contents when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Reject unbalanced edge lists.
    #[arg(long)]
    pub strict: bool,
}

pub enum Loaded {
    Diagram(Diagram),
    Graph(TaitGraph),
}

/// `KNOTRES_DATA`, or the repository's `data/` directory.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("KNOTRES_DATA") {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

pub fn resolve_path(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    let dir = data_dir();
    let candidates = [dir.join(path), path.file_name().map(|f| dir.join(f)).unwrap_or_default()];
    candidates.into_iter().find(|p| p.exists()).unwrap_or_else(|| path.to_path_buf())
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    let resolved = resolve_path(path);
    fs::read_to_string(&resolved).map_err(|e| CliError::io(&resolved, e))
}

fn infer_format(path: &Path, text: &str) -> Format {
    let name = path.to_string_lossy();
    if name.ends_with(".pd") {
        return Format::Pd;
    }
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(v) if v.get("edges").is_some() => Format::EdgeList,
        Ok(_) => Format::Json,
        Err(_) => Format::Pd,
    }
}

pub fn load(args: &InputArgs) -> Result<Loaded, CliError> {
    let (text, format) = match (&args.source.input, &args.source.pd, &args.source.edge_list) {
        (Some(path), _, _) => {
            let text = read_file(path)?;
            let format = args.format.unwrap_or_else(|| infer_format(path, &text));
            (text, format)
        }
        (_, Some(pd), _) => (pd.clone(), args.format.unwrap_or(Format::Pd)),
        (_, _, Some(el)) => (el.clone(), args.format.unwrap_or(Format::EdgeList)),
        _ => return Err(CliError::usage("exactly one of --input, --pd, --edge-list is required")),
    };
    parse(&text, format, args.strict)
}

pub fn parse(text: &str, format: Format, strict: bool) -> Result<Loaded, CliError> {
    Ok(match format {
        Format::Pd => Loaded::Diagram(parse_pd(text)?),
        Format::Json => Loaded::Diagram(parse_json_diagram(text)?),
        Format::EdgeList => Loaded::Graph(parse_edge_list(text, strict)?),
    })
}

pub fn load_diagram(args: &InputArgs) -> Result<Diagram, CliError> {
    match load(args)? {
        Loaded::Diagram(d) => Ok(d),
        Loaded::Graph(_) => Err(CliError::usage("this command needs a diagram, not an edge list")),
    }
}

pub fn load_graph(args: &InputArgs) -> Result<TaitGraph, CliError> {
    match load(args)? {
        Loaded::Diagram(d) => Ok(tait_graph(&d)?),
        Loaded::Graph(g) => Ok(g),
    }
}
