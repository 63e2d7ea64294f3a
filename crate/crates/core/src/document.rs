//! Serialization formats and Gray code export.
//!
//! One document format covers cycles and open paths; the closed flag lives
//! in the free-form `meta` map so the walk fields stay uniform. Two
//! encodings are supported: a JSON document and a line-oriented text form
//! whose step word is written `+1 -3 +2` (1-based dimensions, sign prefix).
//! Decoding validates everything and reports range errors with field
//! context; round-trips are lossless.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planner::CertifiedCycle;
use crate::torus::{Step, TorusSpec, Vertex, Walk};

pub const FORMAT_VERSION: u32 = 1;

/// On-disk representation of a walk. `meta` is free-form provenance
/// (ordered so serialized output is deterministic); decoding reads only the
/// `closed` key from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDocument {
    pub format_version: u32,
    pub dims: Vec<usize>,
    pub directed: Vec<bool>,
    pub start: Vec<usize>,
    pub steps: Vec<Step>,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

impl CycleDocument {
    /// Lossless encoding of a walk with caller-supplied metadata. The
    /// `closed` key is always set from the walk.
    pub fn from_walk(walk: &Walk, mut meta: BTreeMap<String, String>) -> Self {
        meta.insert("closed".into(), walk.is_closed().to_string());
        Self {
            format_version: FORMAT_VERSION,
            dims: walk.torus().sizes().to_vec(),
            directed: walk.torus().directed_flags().to_vec(),
            start: walk.start().coords().to_vec(),
            steps: walk.steps().to_vec(),
            meta,
        }
    }

    /// Reconstructs and validates the walk; all range and directedness
    /// checks apply.
    pub fn to_walk(&self) -> Result<Walk> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse {
                line: None,
                message: format!("unsupported format_version {}", self.format_version),
            });
        }
        let spec = TorusSpec::new(self.dims.clone(), self.directed.clone())?;
        let closed = match self.meta.get("closed").map(String::as_str) {
            None | Some("true") => true,
            Some("false") => false,
            Some(other) => {
                return Err(Error::Parse {
                    line: None,
                    message: format!("meta.closed must be true or false, got {other:?}"),
                })
            }
        };
        Walk::new(spec, Vertex::new(self.start.clone()), self.steps.clone(), closed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CycleDocument> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Encodes a certified cycle with its measurement and provenance recorded
/// in `meta`.
pub fn encode(cycle: &CertifiedCycle) -> CycleDocument {
    let mut meta = BTreeMap::new();
    meta.insert("measured_rl".into(), cycle.measured_rl.to_string());
    meta.insert("claimed_rl".into(), cycle.claimed_rl.to_string());
    meta.insert("claim_met".into(), cycle.claim_met.to_string());
    meta.insert("provenance".into(), cycle.provenance.to_string());
    CycleDocument::from_walk(&cycle.walk, meta)
}

/// Decodes a document back into a validated walk.
pub fn decode(doc: &CycleDocument) -> Result<Walk> {
    doc.to_walk()
}

// ---------------------------------------------------------------------------
// Step-word text format
// ---------------------------------------------------------------------------

/// Formats steps as a step word: sign prefix plus 1-based dimension, e.g.
/// `+1 -3 +2`.
pub fn format_step_word(steps: &[Step]) -> String {
    let mut out = String::new();
    for (i, s) in steps.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{}{}", if s.sign >= 0 { '+' } else { '-' }, s.dim + 1);
    }
    out
}

/// Parses a step word (`+1 -3 +2`; a bare number means forward).
pub fn parse_step_word(text: &str) -> Result<Vec<Step>> {
    text.split_whitespace()
        .map(|tok| {
            let (sign, digits) = match tok.as_bytes()[0] {
                b'+' => (1i8, &tok[1..]),
                b'-' => (-1i8, &tok[1..]),
                _ => (1i8, tok),
            };
            let dim: usize = digits.parse().map_err(|_| Error::Parse {
                line: None,
                message: format!("invalid step token {tok:?}"),
            })?;
            if dim == 0 {
                return Err(Error::Parse {
                    line: None,
                    message: "step dimensions are 1-based".into(),
                });
            }
            Ok(Step { dim: dim - 1, sign })
        })
        .collect()
}

/// Writes the text form of a document:
///
/// ```text
/// dims: 4,2
/// directed: 0,0
/// start: 0,0
/// closed: true
/// word: +1 +2 +1 +2 +1 +2 +1 +2
/// ```
pub fn to_text(doc: &CycleDocument) -> String {
    let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let flags =
        doc.directed.iter().map(|&d| if d { "1" } else { "0" }).collect::<Vec<_>>().join(",");
    let closed = doc.meta.get("closed").cloned().unwrap_or_else(|| "true".into());
    let mut out = String::new();
    let _ = writeln!(out, "dims: {}", list(&doc.dims));
    let _ = writeln!(out, "directed: {flags}");
    let _ = writeln!(out, "start: {}", list(&doc.start));
    let _ = writeln!(out, "closed: {closed}");
    let _ = writeln!(out, "word: {}", format_step_word(&doc.steps));
    out
}

/// Parses the text form. Unknown keys are an error; `directed`, `start`,
/// and `closed` may be omitted (defaulting to undirected, the origin, and
/// closed).
pub fn from_text(text: &str) -> Result<CycleDocument> {
    let mut dims: Option<Vec<usize>> = None;
    let mut directed: Option<Vec<bool>> = None;
    let mut start: Option<Vec<usize>> = None;
    let mut closed = true;
    let mut steps: Option<Vec<Step>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| Error::Parse {
            line: Some(line_no),
            message: format!("expected 'key: value', got {line:?}"),
        })?;
        let value = value.trim();
        let at = |message: String| Error::Parse { line: Some(line_no), message };
        match key.trim() {
            "dims" => {
                dims = Some(
                    value
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| at(format!("invalid dims list {value:?}")))?,
                )
            }
            "directed" => {
                directed = Some(
                    value
                        .split(',')
                        .map(|t| match t.trim() {
                            "0" | "false" => Ok(false),
                            "1" | "true" => Ok(true),
                            other => Err(at(format!("invalid directed flag {other:?}"))),
                        })
                        .collect::<Result<_>>()?,
                )
            }
            "start" => {
                start = Some(
                    value
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| at(format!("invalid start list {value:?}")))?,
                )
            }
            "closed" => {
                closed = match value {
                    "true" => true,
                    "false" => false,
                    other => return Err(at(format!("invalid closed flag {other:?}"))),
                }
            }
            "word" => {
                steps = Some(parse_step_word(value).map_err(|e| match e {
                    Error::Parse { message, .. } => at(message),
                    other => other,
                })?)
            }
            other => return Err(at(format!("unknown key {other:?}"))),
        }
    }

    let dims = dims.ok_or(Error::Parse { line: None, message: "missing dims line".into() })?;
    let steps = steps.ok_or(Error::Parse { line: None, message: "missing word line".into() })?;
    let k = dims.len();
    let mut meta = BTreeMap::new();
    meta.insert("closed".into(), closed.to_string());
    Ok(CycleDocument {
        format_version: FORMAT_VERSION,
        directed: directed.unwrap_or_else(|| vec![false; k]),
        start: start.unwrap_or_else(|| vec![0; k]),
        dims,
        steps,
        meta,
    })
}

/// Loads a document from bytes, sniffing JSON (leading `{`) versus text.
pub fn parse_document(text: &str) -> Result<CycleDocument> {
    if text.trim_start().starts_with('{') {
        CycleDocument::from_json(text)
    } else {
        from_text(text)
    }
}

// ---------------------------------------------------------------------------
// Gray code export
// ---------------------------------------------------------------------------

/// Coordinate listing of a verified Hamiltonian cycle: `|G|` rows, each the
/// coordinates of one vertex, consecutive rows (cyclically) differing in
/// exactly one coordinate. On an all-size-2 torus this is a k-bit Gray code
/// whose gap equals the walk's run length.
pub fn gray_export(walk: &Walk) -> Result<Vec<Vec<usize>>> {
    let report = walk.verify();
    if !report.is_hamiltonian {
        return Err(Error::NotHamiltonian(format!(
            "gray export needs a Hamiltonian cycle (missing {} vertices)",
            report.missing_count
        )));
    }
    let n = walk.torus().vertex_count();
    Ok(walk.trace()[..n].iter().map(|v| v.coords().to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{self, SearchBudget};
    use proptest::prelude::*;

    fn square_cycle() -> Walk {
        let spec = TorusSpec::undirected(vec![2, 2]).unwrap();
        Walk::new(
            spec.clone(),
            Vertex::origin(&spec),
            vec![Step::forward(0), Step::forward(1), Step::forward(0), Step::forward(1)],
            true,
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip_of_square_cycle() {
        let walk = square_cycle();
        let doc = CycleDocument::from_walk(&walk, BTreeMap::new());
        let parsed = CycleDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(parsed, doc);
        let back = decode(&parsed).unwrap();
        assert_eq!(back, walk);
        assert!(back.verify().is_hamiltonian);
        assert_eq!(back.run_length(), 2);
    }

    #[test]
    fn decode_rejects_out_of_range_step() {
        let walk = square_cycle();
        let mut doc = CycleDocument::from_walk(&walk, BTreeMap::new());
        doc.steps[3].dim = 5;
        let err = decode(&doc).unwrap_err();
        assert!(matches!(err, Error::DimensionOutOfRange { dim: 5, dims: 2 }));
    }

    #[test]
    fn decode_rejects_out_of_range_start() {
        let walk = square_cycle();
        let mut doc = CycleDocument::from_walk(&walk, BTreeMap::new());
        doc.start = vec![0, 7];
        let err = decode(&doc).unwrap_err();
        assert!(matches!(err, Error::CoordinateOutOfRange { dim: 1, coord: 7, size: 2 }));
    }

    #[test]
    fn text_round_trip() {
        let walk = square_cycle();
        let doc = CycleDocument::from_walk(&walk, BTreeMap::new());
        let text = to_text(&doc);
        assert!(text.contains("word: +1 +2 +1 +2"));
        let parsed = from_text(&text).unwrap();
        assert_eq!(decode(&parsed).unwrap(), walk);
    }

    #[test]
    fn text_parse_reports_line_numbers() {
        let err = from_text("dims: 2,2\nbogus line\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, Some(2)),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn step_word_round_trip() {
        let steps = vec![Step::forward(0), Step::backward(2), Step::forward(1)];
        let word = format_step_word(&steps);
        assert_eq!(word, "+1 -3 +2");
        assert_eq!(parse_step_word(&word).unwrap(), steps);
    }

    #[test]
    fn gray_export_square_is_two_bit_gray_code() {
        let rows = gray_export(&square_cycle()).unwrap();
        assert_eq!(rows, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn gray_export_cube_witness_has_gap_two() {
        let spec = TorusSpec::undirected(vec![2, 2, 2]).unwrap();
        let res = oracle::exact_mrl(&spec, &SearchBudget::default());
        let walk = res.witness.unwrap();
        let rows = gray_export(&walk).unwrap();
        assert_eq!(rows.len(), 8);
        check_single_coordinate_adjacency(&rows);
        assert_eq!(walk.run_length(), 2);
    }

    #[test]
    fn gray_export_mixed_radix_from_enumeration() {
        let spec = TorusSpec::undirected(vec![3, 2]).unwrap();
        let res = oracle::enumerate_hamiltonian(&spec, &SearchBudget::default());
        assert!(res.exhausted);
        let walk = &res.cycles[0];
        let rows = gray_export(walk).unwrap();
        assert_eq!(rows.len(), 6);
        check_single_coordinate_adjacency(&rows);
    }

    #[test]
    fn gray_export_rejects_non_hamiltonian() {
        let spec = TorusSpec::undirected(vec![2, 2]).unwrap();
        let path = Walk::new(spec.clone(), Vertex::origin(&spec), vec![Step::forward(0)], false)
            .unwrap();
        assert!(matches!(gray_export(&path), Err(Error::NotHamiltonian(_))));
    }

    fn check_single_coordinate_adjacency(rows: &[Vec<usize>]) {
        let n = rows.len();
        let mut sorted = rows.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), n, "rows must be pairwise distinct");
        for i in 0..n {
            let a = &rows[i];
            let b = &rows[(i + 1) % n];
            let diffs = a.iter().zip(b).filter(|(x, y)| x != y).count();
            assert_eq!(diffs, 1, "rows {i} and {} differ in {diffs} coordinates", (i + 1) % n);
        }
    }

    proptest! {
        #[test]
        fn document_round_trip_is_lossless(
            sizes in prop::collection::vec(2usize..5, 1..4),
            seed in any::<u64>(),
        ) {
            // Random open walks: steps generated from the seed, all forward.
            let spec = TorusSpec::undirected(sizes.clone()).unwrap();
            let k = sizes.len();
            let len = (seed % 17) as usize + 1;
            let steps: Vec<Step> = (0..len)
                .map(|i| {
                    let x = seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64);
                    Step { dim: (x >> 33) as usize % k, sign: if x & 1 == 0 { 1 } else { -1 } }
                })
                .collect();
            let walk = Walk::new(spec, Vertex::new(vec![0; k]), steps, false).unwrap();
            let doc = CycleDocument::from_walk(&walk, BTreeMap::new());
            prop_assert_eq!(decode(&CycleDocument::from_json(&doc.to_json()).unwrap()).unwrap(), walk.clone());
            prop_assert_eq!(decode(&from_text(&to_text(&doc)).unwrap()).unwrap(), walk);
        }
    }
}
