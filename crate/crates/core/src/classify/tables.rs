// SPDX-License-Identifier: Apache-2.0

//! Reference classification tables and diffs against fresh sweeps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{sweep_imaginary_index, sweep_rd_genus_eq_class, sweep_rd_polya_index1, SweepRecord};
use crate::classno::DEFAULT_MEMORY_BUDGET;
use crate::error::{Error, Result};
use crate::polya::invariants;
use crate::quadfield::QuadField;

const EMBEDDED: &str = include_str!("../../data/tables.csv");

/// The four reproducible tables.
///
/// * `T1`: imaginary fields with `g = h`, grouped by `h`.
/// * `T5`: imaginary fields with Pólya index 2, grouped by `h`.
/// * `T6`: extended R-D fields with `#Po = h`, grouped by `h/h_plus`.
/// * `T7`: extended R-D fields with `g = h` and `g+ != h+`, grouped by `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableId {
    T1,
    T5,
    T6,
    T7,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::T1, TableId::T5, TableId::T6, TableId::T7];

    /// Whether the listed `D` name imaginary fields `Q(sqrt(-D))`.
    pub fn is_imaginary(self) -> bool {
        matches!(self, TableId::T1 | TableId::T5)
    }

    /// Group label of a record in this table's layout.
    pub fn group_of(self, r: &SweepRecord) -> String {
        match self {
            TableId::T6 => format!("{}/{}", r.h, r.h_plus),
            _ => r.h.to_string(),
        }
    }

    /// Whether a record satisfies the table's defining property.
    fn admits(self, r: &SweepRecord) -> bool {
        match self {
            TableId::T1 => r.d < 0 && r.g == r.h,
            TableId::T5 => r.d < 0 && r.index == 2,
            TableId::T6 => r.d > 0 && r.index == 1,
            TableId::T7 => r.d > 0 && r.g == r.h && r.g_plus != r.h_plus,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(TableId::T1),
            "T5" => Ok(TableId::T5),
            "T6" => Ok(TableId::T6),
            "T7" => Ok(TableId::T7),
            _ => Err(Error::Parse(format!("unknown table {s:?}"))),
        }
    }
}

/// One reference row; `d` carries the sign of the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRow {
    pub table: TableId,
    pub group: String,
    pub d: i64,
}

#[derive(Deserialize)]
struct RawRow {
    table: String,
    group: String,
    #[serde(rename = "D")]
    d: i64,
}

#[derive(Debug, Clone)]
pub struct ReferenceTables {
    rows: Vec<ReferenceRow>,
}

impl ReferenceTables {
    pub fn embedded() -> Result<Self> {
        Self::parse(EMBEDDED)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::DataFileMissing(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for raw in reader.deserialize::<RawRow>() {
            let raw = raw?;
            let table: TableId = raw.table.parse()?;
            if raw.d <= 0 {
                return Err(Error::Parse(format!("non-positive D {} in {table}", raw.d)));
            }
            let d = if table.is_imaginary() { -raw.d } else { raw.d };
            rows.push(ReferenceRow {
                table,
                group: raw.group,
                d,
            });
        }
        Ok(Self { rows })
    }

    pub fn rows(&self, table: TableId) -> impl Iterator<Item = &ReferenceRow> + '_ {
        self.rows.iter().filter(move |r| r.table == table)
    }

    pub fn len(&self, table: TableId) -> usize {
        self.rows(table).count()
    }
}

/// A reference row whose recomputed data disagree with the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub d: i64,
    pub expected: String,
    pub actual: String,
}

/// Difference between a reference table and a fresh sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableDiff {
    pub table: TableId,
    pub limit: u64,
    pub rows: usize,
    /// Reference rows the sweep did not produce.
    pub missing: Vec<i64>,
    /// Sweep rows absent from the reference.
    pub extra: Vec<i64>,
    pub mismatched: Vec<Mismatch>,
}

impl TableDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.mismatched.is_empty()
    }
}

/// Sweep limit used when verifying a table: on `d_K` for the imaginary
/// tables, on `D` for the real ones.
pub fn default_verify_limit(table: TableId) -> u64 {
    match table {
        TableId::T1 | TableId::T5 | TableId::T7 => 1_000_000,
        TableId::T6 => 2_000_000,
    }
}

pub fn verify_table(table: TableId, reference: &ReferenceTables) -> Result<TableDiff> {
    verify_table_with_limit(table, reference, default_verify_limit(table))
}

/// Sweep up to `limit`, diff the set and the group labels against the
/// reference, and recompute every reference row on its own.
pub fn verify_table_with_limit(table: TableId, reference: &ReferenceTables, limit: u64) -> Result<TableDiff> {
    let swept = match table {
        TableId::T1 => sweep_imaginary_index(limit, 1, DEFAULT_MEMORY_BUDGET)?,
        TableId::T5 => sweep_imaginary_index(limit, 2, DEFAULT_MEMORY_BUDGET)?,
        TableId::T6 => sweep_rd_polya_index1(limit)?,
        TableId::T7 => sweep_rd_genus_eq_class(limit)?,
    };
    let swept: BTreeMap<i64, String> = swept.iter().map(|r| (r.d, table.group_of(r))).collect();
    let expected: BTreeMap<i64, &str> = reference.rows(table).map(|r| (r.d, r.group.as_str())).collect();

    let mut mismatched = Vec::new();
    for (&d, &group) in &expected {
        let actual = match recompute(table, d)? {
            Some(r) if table.admits(&r) => table.group_of(&r),
            Some(r) => format!("{} outside the table (h = {}, index = {})", table.group_of(&r), r.h, r.index),
            None => "not a field of the table's family".to_owned(),
        };
        let in_sweep = swept.get(&d);
        if actual != group || in_sweep.is_some_and(|g| g != group) {
            mismatched.push(Mismatch {
                d,
                expected: group.to_owned(),
                actual,
            });
        }
    }
    let ref_set: BTreeSet<i64> = expected.keys().copied().collect();
    let sweep_set: BTreeSet<i64> = swept.keys().copied().collect();
    Ok(TableDiff {
        table,
        limit,
        rows: ref_set.len(),
        missing: ref_set.difference(&sweep_set).copied().collect(),
        extra: sweep_set.difference(&ref_set).copied().collect(),
        mismatched,
    })
}

fn recompute(table: TableId, d: i64) -> Result<Option<SweepRecord>> {
    let field = match QuadField::new(d) {
        Ok(f) => f,
        Err(Error::NotSquarefree(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let witness = if table.is_imaginary() {
        None
    } else {
        match crate::rdtype::best_witness(d as u64) {
            Some(w) => Some(w),
            None => return Ok(None),
        }
    };
    Ok(Some(SweepRecord::new(&invariants(&field)?, witness.as_ref())))
}
