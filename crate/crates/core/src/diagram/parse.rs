//! PD text and JSON front ends.
//!
//! Text form: crossing tuples `X(a,b,c,d)` (square brackets also accepted)
//! separated by whitespace or commas, `%` starts a line comment, and two
//! optional directives: `orient: [±1, ...]` (one entry per component, in
//! order of each component's smallest arc label) and `order: [a, ...]`
//! (one arc label per Tait vertex, naming the unshaded face on that arc).

use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramError};

/// Raw contents of a PD text or JSON document before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub crossings: Vec<[u32; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<u32>>,
}

fn malformed(token: &str, reason: &str) -> DiagramError {
    DiagramError::MalformedSyntax { token: token.to_string(), reason: reason.to_string() }
}

fn parse_int_list<T: std::str::FromStr>(inner: &str, whole: &str) -> Result<Vec<T>, DiagramError> {
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            let s = s.trim();
            let s = s.strip_prefix('+').unwrap_or(s);
            s.parse::<T>().map_err(|_| malformed(whole, "expected an integer"))
        })
        .collect()
}

/// Parses PD text into its raw parts.
pub fn parse_pd_raw(text: &str) -> Result<DiagramJson, DiagramError> {
    let stripped: String = text
        .lines()
        .map(|l| l.split('%').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let bytes = stripped.as_bytes();
    let mut out = DiagramJson::default();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_whitespace() || ch == ',' || ch == ';' {
            i += 1;
            continue;
        }
        let rest = &stripped[i..];
        if let Some(after) = rest.strip_prefix('X') {
            let (open, close) = match after.chars().next() {
                Some('(') => ('(', ')'),
                Some('[') => ('[', ']'),
                _ => return Err(malformed(first_token(rest), "expected X(a,b,c,d)")),
            };
            debug_assert!(after.starts_with(open));
            let end = after
                .find(close)
                .ok_or_else(|| malformed(first_token(rest), "unterminated crossing tuple"))?;
            let whole = &rest[..end + 2];
            let labels: Vec<u32> = parse_int_list(&after[1..end], whole)?;
            let tuple: [u32; 4] = labels
                .try_into()
                .map_err(|_| malformed(whole, "a crossing needs exactly four arc labels"))?;
            out.crossings.push(tuple);
            i += end + 2;
            continue;
        }
        let directive = ["orient", "order"].into_iter().find(|d| rest.starts_with(d));
        if let Some(name) = directive {
            let body = rest[name.len()..].trim_start();
            let body = body
                .strip_prefix(':')
                .ok_or_else(|| malformed(first_token(rest), "expected ':' after directive"))?
                .trim_start();
            let inner_start = body
                .strip_prefix('[')
                .ok_or_else(|| malformed(first_token(rest), "expected '[' list"))?;
            let end = inner_start
                .find(']')
                .ok_or_else(|| malformed(first_token(rest), "unterminated list"))?;
            let whole_len = rest.len() - inner_start.len() + end + 1;
            let whole = &rest[..whole_len];
            match name {
                "orient" => {
                    let v: Vec<i8> = parse_int_list(&inner_start[..end], whole)?;
                    if v.iter().any(|&x| x != 1 && x != -1) {
                        return Err(malformed(whole, "orientations must be +1 or -1"));
                    }
                    out.orientations = Some(v);
                }
                _ => out.order = Some(parse_int_list(&inner_start[..end], whole)?),
            }
            i += whole_len;
            continue;
        }
        return Err(malformed(first_token(rest), "unrecognized token"));
    }
    Ok(out)
}

fn first_token(s: &str) -> &str {
    s.split_whitespace().next().unwrap_or(s)
}

/// Parses PD text into a validated [`Diagram`].
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    Diagram::from_json(parse_pd_raw(text)?)
}

/// Parses the JSON diagram form.
pub fn parse_json_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let raw: DiagramJson = serde_json::from_str(text)
        .map_err(|e| DiagramError::MalformedSyntax { token: "<json>".into(), reason: e.to_string() })?;
    Diagram::from_json(raw)
}
