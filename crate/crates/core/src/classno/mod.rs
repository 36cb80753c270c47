// SPDX-License-Identifier: Apache-2.0

//! Class numbers of quadratic fields.
//!
//! Imaginary fields count reduced positive definite forms, real fields count
//! cycles of reduced indefinite forms (which gives the narrow class number)
//! and read the unit norm off the continued fraction of the ring generator.
//! The analytic class number formula is kept as an independent cross-check.

mod analytic;
mod imaginary;
mod real;
mod unit;

pub use analytic::class_number_analytic;
pub use imaginary::{
    batch_class_numbers_imaginary, class_number_imaginary, count_reduced_definite,
    ImaginaryClassTable, DEFAULT_MEMORY_BUDGET,
};
pub use real::{class_number_real, narrow_class_number, reduced_indefinite_forms, ClassData};
pub use unit::{cf_period, fundamental_unit_cf, CfPeriod, UnitData, UnitNorm};
