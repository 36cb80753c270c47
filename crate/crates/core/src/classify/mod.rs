// SPDX-License-Identifier: Apache-2.0

//! Classification sweeps over imaginary fields and over real fields of
//! extended R-D type, with verification against the reference tables.

mod tables;

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::classno::{batch_class_numbers_imaginary, class_number_real, UnitNorm};
use crate::error::{Error, Result};
use crate::polya::ClassInvariants;
use crate::quadfield::QuadField;
use crate::rdtype::{enumerate_extended_rd, RdKind, RdWitness};

pub use tables::{
    default_verify_limit, verify_table, verify_table_with_limit, Mismatch, ReferenceRow,
    ReferenceTables, TableDiff, TableId,
};

/// One classified field; the CSV and JSON layouts follow the field names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "d_K")]
    pub d_k: u64,
    pub h: u64,
    pub h_plus: u64,
    pub polya: u64,
    pub g: u64,
    pub g_plus: u64,
    /// Norm of the fundamental unit, real fields only.
    pub norm: Option<i32>,
    /// Pólya index `h / #Po`.
    pub index: u64,
    pub kind: Option<RdKind>,
    pub ell: Option<u64>,
    pub r: Option<i64>,
}

impl SweepRecord {
    pub fn new(inv: &ClassInvariants, witness: Option<&RdWitness>) -> Self {
        Self {
            d: inv.field.d(),
            d_k: inv.field.abs_disc(),
            h: inv.h,
            h_plus: inv.h_plus,
            polya: inv.polya_order,
            g: inv.g,
            g_plus: inv.g_plus,
            norm: inv.unit_norm.map(UnitNorm::value),
            index: inv.polya_index,
            kind: witness.map(|w| w.kind),
            ell: witness.map(|w| w.ell),
            r: witness.map(|w| w.r),
        }
    }

    /// Re-derive the invariant bundle from the stored class numbers, which
    /// re-runs every identity check.
    pub fn check(&self) -> Result<ClassInvariants> {
        let field = QuadField::new(self.d)?;
        let norm = match self.norm {
            None => None,
            Some(v) => Some(
                UnitNorm::from_value(v.into())
                    .ok_or_else(|| Error::Parse(format!("unit norm {v} for D = {}", self.d)))?,
            ),
        };
        let inv = ClassInvariants::from_parts(field, self.h, self.h_plus, norm)?;
        let consistent = inv.field.abs_disc() == self.d_k
            && inv.polya_order == self.polya
            && inv.g == self.g
            && inv.g_plus == self.g_plus
            && inv.polya_index == self.index;
        if !consistent {
            return Err(Error::IdentityViolation {
                d: self.d,
                what: format!("record {self:?} disagrees with {inv:?}"),
            });
        }
        Ok(inv)
    }
}

/// Square-free `D < 0` with `|disc| = d_k`, if `-d_k` is a fundamental discriminant.
fn imaginary_d(d_k: u64) -> Option<i64> {
    let disc = -(d_k as i64);
    if !arith::is_fundamental_discriminant(disc) {
        return None;
    }
    Some(if d_k % 4 == 0 { disc / 4 } else { disc })
}

/// Imaginary fields with `d_K <= limit` and Pólya index `index`, ascending by `d_K`.
pub fn sweep_imaginary_index(limit: u64, index: u64, memory_budget: u64) -> Result<Vec<SweepRecord>> {
    let table = batch_class_numbers_imaginary(limit, memory_budget)?;
    let candidates: Vec<(u64, i64)> = (3..=limit).filter_map(|dk| imaginary_d(dk).map(|d| (dk, d))).collect();
    let records: Vec<Option<SweepRecord>> = candidates
        .par_iter()
        .map(|&(dk, d)| {
            let field = QuadField::new(d)?;
            let h = table.get(dk).expect("fundamental discriminant within the table");
            let inv = ClassInvariants::from_parts(field, h, h, None)?;
            Ok((inv.polya_index == index).then(|| SweepRecord::new(&inv, None)))
        })
        .collect::<Result<_>>()?;
    Ok(records.into_iter().flatten().collect())
}

/// Invariants of every extended R-D field with `D <= limit`, ascending by `D`.
pub fn sweep_extended_rd(limit: u64) -> Result<Vec<SweepRecord>> {
    if limit < 5 {
        return Err(Error::Domain(format!("R-D sweep limit must be >= 5, got {limit}")));
    }
    let fields: Vec<(QuadField, RdWitness)> = enumerate_extended_rd(limit)?
        .into_iter()
        .map(|(d, w)| Ok((QuadField::new(d as i64)?, w)))
        .collect::<Result<_>>()?;
    fields
        .par_iter()
        .map(|(f, w)| {
            let c = class_number_real(f)?;
            let inv = ClassInvariants::from_parts(f.clone(), c.h, c.h_plus, Some(c.unit_norm))?;
            Ok(SweepRecord::new(&inv, Some(w)))
        })
        .collect()
}

/// Extended R-D fields with `D <= limit` and `#Po = h`.
pub fn sweep_rd_polya_index1(limit: u64) -> Result<Vec<SweepRecord>> {
    Ok(sweep_extended_rd(limit)?.into_iter().filter(|r| r.index == 1).collect())
}

fn genus_case_two(r: &SweepRecord) -> Result<bool> {
    let field = QuadField::new(r.d)?;
    Ok(r.norm == Some(1) && !field.has_prime_3mod4() && r.h == 1 << (field.s_k() - 1))
}

/// Extended R-D fields with `D <= limit`, `g = h` and `g+ != h+`.
///
/// These are exactly the fields with a unit of norm +1, no prime `p = 3 mod 4`
/// dividing `D` and `h = 2^(s-1)`; every record is checked against that
/// description as well.
pub fn sweep_rd_genus_eq_class(limit: u64) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::new();
    for r in sweep_extended_rd(limit)? {
        let selected = r.g == r.h && r.g_plus != r.h_plus;
        if selected != genus_case_two(&r)? {
            return Err(Error::IdentityViolation {
                d: r.d,
                what: format!("g = h, g+ != h+ is {selected} but the unit-norm description disagrees"),
            });
        }
        if selected {
            out.push(r);
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(records: &[SweepRecord], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub const CSV_HEADER: [&str; 12] = [
    "D", "d_K", "h", "h_plus", "polya", "g", "g_plus", "norm", "index", "kind", "ell", "r",
];

pub fn read_csv<R: Read>(source: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(source);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
