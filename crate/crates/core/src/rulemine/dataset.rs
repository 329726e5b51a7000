use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::RuleError;
use crate::boolpoly::{Point, VariableContext};

pub const ID_COLUMN: &str = "object_id";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataRow {
    pub object_id: String,
    pub point: Point,
}

/// Binary object × property matrix.
#[derive(Debug, Clone)]
pub struct Dataset {
    context: Arc<VariableContext>,
    rows: Vec<DataRow>,
    source_digest: String,
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(7 + 64);
    out.push_str("sha256:");
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

impl Dataset {
    /// Parses `object_id,<prop>,...` CSV with `0`/`1` cells.
    pub fn load_csv(bytes: &[u8]) -> Result<Self, RuleError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(bytes);
        let header = reader
            .headers()
            .map_err(|e| RuleError::BadHeader(e.to_string()))?
            .clone();
        let mut columns = header.iter();
        match columns.next() {
            Some(ID_COLUMN) => {}
            Some(other) => {
                return Err(RuleError::BadHeader(format!(
                    "first column must be `{ID_COLUMN}`, found `{other}`"
                )))
            }
            None => return Err(RuleError::BadHeader("missing header".into())),
        }
        let names: Vec<&str> = columns.collect();
        let context = VariableContext::new(names.iter().copied())
            .map_err(|e| RuleError::BadHeader(e.to_string()))?;
        let width = context.len() + 1;

        let mut rows = Vec::new();
        let mut ids = HashSet::new();
        for (k, record) in reader.records().enumerate() {
            let row = k + 1;
            let record = record.map_err(|e| RuleError::Csv { row, message: e.to_string() })?;
            if record.len() != width {
                return Err(RuleError::RaggedRow { row, expected: width, found: record.len() });
            }
            let object_id = record[0].to_string();
            if object_id.is_empty() {
                return Err(RuleError::EmptyObjectId { row });
            }
            let mut values = Vec::with_capacity(context.len());
            for (col, cell) in record.iter().enumerate().skip(1) {
                match cell {
                    "0" => values.push(false),
                    "1" => values.push(true),
                    _ => {
                        return Err(RuleError::NonBinaryCell {
                            row,
                            column: context.name(col - 1).to_string(),
                            value: cell.to_string(),
                        })
                    }
                }
            }
            if !ids.insert(object_id.clone()) {
                return Err(RuleError::DuplicateObjectId(object_id));
            }
            let point = Point::from_bools(&values).expect("width checked against context");
            rows.push(DataRow { object_id, point });
        }
        if rows.is_empty() {
            return Err(RuleError::EmptyDataset);
        }
        Ok(Self {
            context: Arc::new(context),
            rows,
            source_digest: sha256_hex(bytes),
        })
    }

    /// Builds a dataset through the CSV path so both routes validate alike.
    pub fn from_rows<S: AsRef<str>>(properties: &[S], rows: &[(String, Vec<u8>)]) -> Result<Self, RuleError> {
        let mut text = String::from(ID_COLUMN);
        for p in properties {
            text.push(',');
            text.push_str(p.as_ref());
        }
        text.push('\n');
        for (id, bits) in rows {
            text.push_str(id);
            for b in bits {
                text.push(',');
                let _ = write!(text, "{b}");
            }
            text.push('\n');
        }
        Self::load_csv(text.as_bytes())
    }

    pub fn to_csv(&self) -> String {
        let mut text = String::from(ID_COLUMN);
        for p in self.context.names() {
            text.push(',');
            text.push_str(p);
        }
        text.push('\n');
        for row in &self.rows {
            text.push_str(&row.object_id);
            for i in 0..self.context.len() {
                text.push_str(if row.point.get(i) { ",1" } else { ",0" });
            }
            text.push('\n');
        }
        text
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.context
    }

    pub fn property_names(&self) -> &[String] {
        self.context.names()
    }

    pub fn rows(&self) -> &[DataRow] {
        &self.rows
    }

    pub fn points(&self) -> Vec<Point> {
        self.rows.iter().map(|r| r.point).collect()
    }

    /// SHA-256 of the ingested bytes.
    pub fn source_digest(&self) -> &str {
        &self.source_digest
    }

    /// SHA-256 over the property names and the sorted multiset of rows; blind
    /// to row order and object ids, so it identifies the mined content.
    pub fn content_digest(&self) -> String {
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for r in &self.rows {
            *counts.entry(r.point.bits()).or_default() += 1;
        }
        let mut canon = self.context.names().join(",");
        canon.push('\n');
        for (bits, count) in counts {
            let p = Point::from_bits(bits, self.context.len()).expect("row points fit context");
            let _ = writeln!(canon, "{p} {count}");
        }
        sha256_hex(canon.as_bytes())
    }

    pub fn distinct_point_count(&self) -> usize {
        self.rows.iter().map(|r| r.point.bits()).collect::<HashSet<_>>().len()
    }
}
