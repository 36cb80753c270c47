// SPDX-License-Identifier: Apache-2.0

//! Pólya fields among quadratic fields: class numbers, units, Pólya groups and
//! the explicit bounds that make the classification finite.

pub mod arith;
pub mod bounds;
pub mod classify;
pub mod classno;
pub mod error;
pub mod polya;
pub mod quadfield;
pub mod rdtype;

pub use error::{Error, Result};
pub use quadfield::{QuadField, Residue};
