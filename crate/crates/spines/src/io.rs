//! Line-oriented text format for spines.
//!
//! ```text
//! # comment
//! spine n=<int>
//! edge <id>: (<v>,<i>)-(<w>,<k>) wings=<j1>:<m1>,<j2>:<m2>,<j3>:<m3>
//! branch <+1|-1>, ... one sign per region id
//! ```
//!
//! The `branch` line is optional: a file without it describes a plain
//! standard spine (accepted by `parse_spine_document`; `parse_spine` demands
//! a branching). Files always represent sign-normalized spines (all vertex
//! orientations `+1`); the serializer normalizes before writing and emits
//! edge records sorted into their id order.

use crate::branching::{BranchedSpine, Branching};
use crate::perm::Perm4;
use crate::spine::{EdgeRec, Germ, Spine};
use crate::transform::normalize_signs;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("missing `spine n=` header")]
    MissingHeader,
    #[error("missing `branch` line (file describes an unbranched spine)")]
    MissingBranch,
    #[error("spine is invalid: {0:?}")]
    InvalidSpine(Vec<String>),
    #[error("branching is invalid: {0}")]
    InvalidBranching(String),
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line(line, msg.into())
}

fn parse_germ(tok: &str, line: usize) -> Result<Germ, ParseError> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| err(line, format!("expected (v,s), got `{tok}`")))?;
    let mut parts = inner.split(',');
    let v = parts
        .next()
        .and_then(|p| p.trim().parse::<usize>().ok())
        .ok_or_else(|| err(line, "bad vertex index"))?;
    let s = parts
        .next()
        .and_then(|p| p.trim().parse::<u8>().ok())
        .filter(|&s| s < 4)
        .ok_or_else(|| err(line, "bad slot index"))?;
    if parts.next().is_some() {
        return Err(err(line, "too many fields in germ"));
    }
    Ok(Germ::new(v, s))
}

/// Parse a document into the spine and the optional branch signs.
pub fn parse_spine_document(text: &str) -> Result<(Spine, Option<Vec<i8>>), ParseError> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, EdgeRec)> = Vec::new();
    let mut branch: Option<Vec<i8>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("spine") {
            let rest = rest.trim();
            let val = rest
                .strip_prefix("n=")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(|| err(lineno, "expected `spine n=<int>`"))?;
            if n.replace(val).is_some() {
                return Err(err(lineno, "duplicate `spine` header"));
            }
        } else if let Some(rest) = line.strip_prefix("edge") {
            let (id_part, body) = rest
                .split_once(':')
                .ok_or_else(|| err(lineno, "expected `edge <id>: ...`"))?;
            let id = id_part
                .trim()
                .parse::<usize>()
                .map_err(|_| err(lineno, "bad edge id"))?;
            let (germs_part, wings_part) = body
                .trim()
                .split_once(" wings=")
                .ok_or_else(|| err(lineno, "expected ` wings=` section"))?;
            let (ga, gb) = germs_part
                .trim()
                .split_once('-')
                .ok_or_else(|| err(lineno, "expected `(v,i)-(w,k)`"))?;
            let a = parse_germ(ga.trim(), lineno)?;
            let b = parse_germ(gb.trim(), lineno)?;
            let mut images = [4u8; 4];
            images[a.slot as usize] = b.slot;
            for pair in wings_part.trim().split(',') {
                let (j, m) = pair
                    .split_once(':')
                    .ok_or_else(|| err(lineno, "expected `j:m` wing pair"))?;
                let j = j
                    .trim()
                    .parse::<u8>()
                    .ok()
                    .filter(|&x| x < 4)
                    .ok_or_else(|| err(lineno, "bad wing slot"))?;
                let m = m
                    .trim()
                    .parse::<u8>()
                    .ok()
                    .filter(|&x| x < 4)
                    .ok_or_else(|| err(lineno, "bad wing image"))?;
                if j == a.slot {
                    return Err(err(lineno, "wing slot equals the germ slot"));
                }
                if images[j as usize] != 4 {
                    return Err(err(lineno, "duplicate wing slot"));
                }
                images[j as usize] = m;
            }
            if images.iter().any(|&x| x == 4) {
                return Err(err(lineno, "wing bijection must list three pairs"));
            }
            let perm = Perm4::new(images)
                .ok_or_else(|| err(lineno, "wing bijection is not a bijection"))?;
            edges.push((id, EdgeRec { a, b, perm }));
        } else if let Some(rest) = line.strip_prefix("branch") {
            let signs: Result<Vec<i8>, ParseError> = rest
                .trim()
                .split(',')
                .map(|t| match t.trim() {
                    "+1" | "1" | "+" => Ok(1i8),
                    "-1" | "-" => Ok(-1i8),
                    other => Err(err(lineno, format!("bad branch sign `{other}`"))),
                })
                .collect();
            if branch.replace(signs?).is_some() {
                return Err(err(lineno, "duplicate `branch` line"));
            }
        } else {
            return Err(err(lineno, format!("unrecognized line `{line}`")));
        }
    }
    let n = n.ok_or(ParseError::MissingHeader)?;
    edges.sort_by_key(|&(id, _)| id);
    for (k, &(id, _)) in edges.iter().enumerate() {
        if id != k {
            return Err(ParseError::Line(
                0,
                format!("edge ids must be 0..{} without gaps, found {id}", 2 * n),
            ));
        }
    }
    let spine = Spine::new(n, edges.into_iter().map(|(_, e)| e).collect());
    Ok((spine, branch))
}

/// Parse a single branched spine; the file must carry a `branch` line.
pub fn parse_spine(text: &str) -> Result<BranchedSpine, ParseError> {
    let (spine, branch) = parse_spine_document(text)?;
    let diag = spine.validate();
    if !diag.is_valid() {
        return Err(ParseError::InvalidSpine(diag.failures));
    }
    let signs = branch.ok_or(ParseError::MissingBranch)?;
    BranchedSpine::new(spine, Branching {
        region_orientations: signs,
    })
    .map_err(|e| ParseError::InvalidBranching(e.to_string()))
}

/// Serialize a branched spine (sign-normalized) in the text format.
pub fn serialize_spine(bs: &BranchedSpine) -> String {
    let bs = if bs.spine.vertex_orientations.iter().all(|&s| s == 1) {
        bs.clone()
    } else {
        normalize_signs(bs)
    };
    let mut out = String::new();
    out.push_str(&format!("spine n={}\n", bs.spine.vertex_count));
    for (id, e) in bs.spine.edges.iter().enumerate() {
        let mut wings = Vec::new();
        for j in 0..4u8 {
            if j != e.a.slot {
                wings.push(format!("{}:{}", j, e.perm.apply(j)));
            }
        }
        out.push_str(&format!(
            "edge {}: ({},{})-({},{}) wings={}\n",
            id,
            e.a.vertex,
            e.a.slot,
            e.b.vertex,
            e.b.slot,
            wings.join(",")
        ));
    }
    let signs: Vec<String> = bs
        .branching
        .region_orientations
        .iter()
        .map(|&s| if s > 0 { "+1".to_string() } else { "-1".to_string() })
        .collect();
    out.push_str(&format!("branch {}\n", signs.join(",")));
    out
}

/// Parse a multi-record file (records separated by `spine` headers), as used
/// by census files. Returns each record's preceding `# canon=<hex>` comment
/// if present.
pub fn parse_many(text: &str) -> Result<Vec<(Option<String>, BranchedSpine)>, ParseError> {
    let mut records: Vec<(Option<String>, String)> = Vec::new();
    let mut pending_canon: Option<String> = None;
    for raw in text.lines() {
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix("# canon=") {
            pending_canon = Some(rest.trim().to_string());
            continue;
        }
        if trimmed.starts_with("spine") {
            records.push((pending_canon.take(), String::new()));
        }
        if let Some(last) = records.last_mut() {
            last.1.push_str(raw);
            last.1.push('\n');
        }
    }
    records
        .into_iter()
        .map(|(canon, text)| parse_spine(&text).map(|bs| (canon, bs)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::enumerate_branchings;
    use crate::enumerate::enumerate_spines;

    #[test]
    fn round_trip_is_identity_on_enumerated_spines() {
        for spine in enumerate_spines(1) {
            for b in enumerate_branchings(&spine).unwrap() {
                let bs = BranchedSpine::new(spine.clone(), b).unwrap();
                let text = serialize_spine(&bs);
                let back = parse_spine(&text).unwrap();
                assert_eq!(serialize_spine(&back), text);
            }
        }
    }

    #[test]
    fn duplicate_germ_is_a_parse_error() {
        let text = "spine n=1\n\
                    edge 0: (0,0)-(0,0) wings=1:1,2:2,3:3\n\
                    edge 1: (0,2)-(0,3) wings=0:0,1:1,2:2\n\
                    branch +1\n";
        assert!(parse_spine(text).is_err());
    }
}
