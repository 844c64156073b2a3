//! Text formats: OEIS b-files, JSON array documents, the compact row table,
//! and lookups against a local OEIS "stripped" dump.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{self, EngineError, OutputArray, Row};
use crate::oracle::{self, OracleError};
use crate::sequence::InputSequenceSpec;

/// Default number of entries written per row in JSON documents.
pub const DEFAULT_EXPAND_CAP: usize = 4096;

/// Default minimum prefix length for stripped-dump lookups.
pub const DEFAULT_MIN_MATCH: usize = 8;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("b-file line {line}: {reason}")]
    BFile { line: usize, reason: String },
    #[error("stripped dump line {line}: {reason}")]
    Stripped { line: usize, reason: String },
    #[error("table line {line}: {reason}")]
    Table { line: usize, reason: String },
    #[error("array document: {0}")]
    Document(String),
    #[error("lookup needs at least {min_match} terms, got {len}")]
    PrefixTooShort { len: usize, min_match: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One `"<index> <value>"` line per term, starting at `offset`.
pub fn export_bfile(terms: &[BigUint], offset: i64) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        writeln!(out, "{} {}", offset + i as i64, t).expect("write to String");
    }
    out
}

/// Parses a b-file back into `(offset, terms)`. Blank lines and `#` comments
/// are skipped; indices must be consecutive. An empty file has offset 0.
pub fn parse_bfile(text: &str) -> Result<(i64, Vec<BigUint>), FormatError> {
    let mut offset = None;
    let mut terms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| FormatError::BFile { line: line_no, reason };
        let mut parts = line.split_whitespace();
        let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err("expected `<index> <value>`".into()));
        };
        let idx: i64 = idx.parse().map_err(|_| err(format!("bad index `{idx}`")))?;
        let val: BigUint = val.parse().map_err(|_| err(format!("bad value `{val}`")))?;
        let start = *offset.get_or_insert(idx);
        if idx != start + terms.len() as i64 {
            return Err(err(format!("index {idx} out of sequence")));
        }
        terms.push(val);
    }
    Ok((offset.unwrap_or(0), terms))
}

/// A plateau left unexpanded in a JSON document: `length` further copies of
/// `value` follow the listed entries of `row`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlateauNote {
    pub row: usize,
    pub value: String,
    pub length: usize,
}

/// JSON form of an output array. Every integer is a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayDocument {
    pub spec: String,
    pub y: Vec<String>,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plateau: Vec<PlateauNote>,
    #[serde(rename = "W")]
    pub w: Vec<String>,
}

impl ArrayDocument {
    /// Explicit prefixes are always written in full; plateaus are expanded
    /// while the row stays within `expand_cap` entries and noted otherwise.
    pub fn from_array(spec: &str, array: &OutputArray, expand_cap: usize) -> Self {
        let mut rows = Vec::with_capacity(array.n_rows());
        let mut plateau = Vec::new();
        for (i, row) in array.rows().iter().enumerate() {
            let mut entries: Vec<String> = row.explicit().iter().map(ToString::to_string).collect();
            let room = expand_cap.saturating_sub(entries.len());
            let shown = row.plateau_len().min(room);
            entries.extend(std::iter::repeat_n(row.plateau_value().to_string(), shown));
            if shown < row.plateau_len() {
                plateau.push(PlateauNote {
                    row: i + 1,
                    value: row.plateau_value().to_string(),
                    length: row.plateau_len() - shown,
                });
            }
            rows.push(entries);
        }
        ArrayDocument {
            spec: spec.to_string(),
            y: array.y().iter().map(ToString::to_string).collect(),
            rows,
            plateau,
            w: array.row_sums().iter().map(ToString::to_string).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the compressed array, checking plateaus and row sums.
    pub fn to_array(&self) -> Result<OutputArray, FormatError> {
        let bad = |m: String| FormatError::Document(m);
        let y: Vec<usize> = self
            .y
            .iter()
            .map(|v| v.parse().map_err(|_| bad(format!("bad y term `{v}`"))))
            .collect::<Result<_, _>>()?;
        if self.rows.len() != y.len() || self.w.len() != y.len() {
            return Err(bad("y, rows and W lengths differ".into()));
        }
        let mut notes: BTreeMap<usize, &PlateauNote> = BTreeMap::new();
        for note in &self.plateau {
            notes.insert(note.row, note);
        }
        let mut rows = Vec::with_capacity(y.len());
        for (i, entries) in self.rows.iter().enumerate() {
            let n = i + 1;
            let values: Vec<BigUint> = entries
                .iter()
                .map(|v| v.parse().map_err(|_| bad(format!("row {n}: bad entry `{v}`"))))
                .collect::<Result<_, _>>()?;
            let explicit_len = if i == 0 { y[0] + 1 } else { y[i - 1].min(y[i]) + 1 };
            if values.len() < explicit_len {
                return Err(bad(format!("row {n} lists {} entries, needs {explicit_len}", values.len())));
            }
            let (explicit, shown) = values.split_at(explicit_len);
            let last = explicit[explicit_len - 1].clone();
            if shown.iter().any(|v| *v != last) {
                return Err(bad(format!("row {n}: plateau entries differ from A({n}, {})", explicit_len - 1)));
            }
            let hidden = match notes.get(&n) {
                None => 0,
                Some(note) => {
                    if note.value != last.to_string() {
                        return Err(bad(format!("row {n}: plateau note value {} differs", note.value)));
                    }
                    note.length
                }
            };
            rows.push(Row::from_parts(explicit.to_vec(), last, shown.len() + hidden));
        }
        let array = OutputArray::from_parts(y, rows)?;
        for (n, (stated, actual)) in self.w.iter().zip(array.row_sums()).enumerate() {
            if *stated != actual.to_string() {
                return Err(bad(format!("W({}) is {stated}, rows sum to {actual}", n + 1)));
            }
        }
        Ok(array)
    }
}

/// One line per row: the explicit prefix, then `(+L x v)` for a plateau of
/// `L` further copies of `v`.
pub fn render_table(array: &OutputArray) -> String {
    let width = array.n_rows().to_string().len();
    let mut out = String::new();
    for (i, row) in array.rows().iter().enumerate() {
        write!(out, "{:>width$}:", i + 1).expect("write to String");
        for v in row.explicit() {
            write!(out, " {v}").expect("write to String");
        }
        if row.plateau_len() > 0 {
            write!(out, " (+{} x {})", row.plateau_len(), row.plateau_value()).expect("write to String");
        }
        out.push('\n');
    }
    out
}

/// Reads [`render_table`] output back as plateau-expanded rows. Lines
/// starting with `#` are ignored.
pub fn parse_table(text: &str) -> Result<Vec<Vec<BigUint>>, FormatError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| FormatError::Table { line: line_no, reason };
        let (label, rest) = line.split_once(':').ok_or_else(|| err("missing `n:` label".into()))?;
        let n: usize = label.trim().parse().map_err(|_| err(format!("bad row label `{label}`")))?;
        if n != rows.len() + 1 {
            return Err(err(format!("row {n} out of order")));
        }
        let (body, tail) = match rest.split_once('(') {
            Some((body, tail)) => (body, Some(tail)),
            None => (rest, None),
        };
        let mut row: Vec<BigUint> = body
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(format!("bad entry `{t}`"))))
            .collect::<Result<_, _>>()?;
        if let Some(tail) = tail {
            let inner = tail
                .strip_suffix(')')
                .and_then(|t| t.strip_prefix('+'))
                .ok_or_else(|| err("malformed plateau annotation".into()))?;
            let (len, value) = inner.split_once(" x ").ok_or_else(|| err("malformed plateau annotation".into()))?;
            let len: usize = len.trim().parse().map_err(|_| err(format!("bad plateau length `{len}`")))?;
            let value: BigUint = value.trim().parse().map_err(|_| err(format!("bad plateau value `{value}`")))?;
            row.extend(std::iter::repeat_n(value, len));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// A-numbers mapped to their listed terms, read from an OEIS stripped dump.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OeisStrippedIndex {
    entries: BTreeMap<String, Vec<BigInt>>,
}

impl OeisStrippedIndex {
    /// Lines look like `A000108 ,1,1,2,5,14,`; `#` lines are comments.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| FormatError::Stripped { line: line_no, reason };
            let (id, rest) = line.split_once(' ').ok_or_else(|| err("expected `A______ ,t1,t2,...,`".into()))?;
            let well_formed = id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit());
            if !well_formed {
                return Err(err(format!("bad A-number `{id}`")));
            }
            let terms: Vec<BigInt> = rest
                .trim()
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| err(format!("bad term `{t}`"))))
                .collect::<Result<_, _>>()?;
            entries.insert(id.to_string(), terms);
        }
        Ok(OeisStrippedIndex { entries })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, FormatError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn terms(&self, id: &str) -> Option<&[BigInt]> {
        self.entries.get(id).map(Vec::as_slice)
    }
}

/// A-numbers whose terms contain `prefix` as a contiguous run starting at
/// position 0, 1 or 2 (so a leading `W(0) = 1` or similar offset is
/// tolerated).
pub fn lookup_stripped(
    index: &OeisStrippedIndex,
    prefix: &[BigUint],
    min_match: usize,
) -> Result<Vec<String>, FormatError> {
    if prefix.len() < min_match {
        return Err(FormatError::PrefixTooShort { len: prefix.len(), min_match });
    }
    let wanted: Vec<BigInt> = prefix.iter().cloned().map(BigInt::from).collect();
    Ok(index
        .entries
        .iter()
        .filter(|(_, terms)| {
            (0..=2).any(|s| terms.len() >= s + wanted.len() && terms[s..s + wanted.len()] == wanted[..])
        })
        .map(|(id, _)| id.clone())
        .collect())
}

/// An engine entry that disagrees with the tuple count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub k: usize,
    pub engine: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub spec: String,
    pub n_max: usize,
    pub entries_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Cross-checks every entry of rows `1..=n_max` against [`oracle::count_columns`].
pub fn verify_against_oracle(
    spec: &InputSequenceSpec,
    n_max: usize,
    max_width: usize,
) -> Result<VerifyReport, VerifyError> {
    let array = engine::build(spec, n_max, max_width)?;
    let mut report = VerifyReport { spec: spec.to_string(), n_max, entries_checked: 0, mismatches: Vec::new() };
    for n in 1..=n_max {
        let counted = oracle::count_columns(spec, n)?;
        let row = array.row(n)?;
        // One column past y_n confirms the zero tail.
        for k in 0..=counted.len() {
            let expected = counted.get(k).cloned().unwrap_or_default();
            let got = row.get(k);
            report.entries_checked += 1;
            if got != expected {
                report.mismatches.push(Mismatch { n, k, engine: got.to_string(), oracle: expected.to_string() });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
