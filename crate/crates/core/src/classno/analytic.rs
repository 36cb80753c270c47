// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use crate::arith::kronecker_symbol;
use crate::error::{Error, Result};
use crate::quadfield::QuadField;

use super::unit::cf_period;

const MAX_ANALYTIC_DISC: u64 = 10_000_000;

/// Class number from the Dirichlet class number formula with the finite
/// character sum. Costs O(d_K); only meant as an oracle for the form counts.
///
/// Imaginary: `h = -(w / 2d) * sum_{n<d} chi(n) n`, evaluated exactly.
/// Real: `h = -(1 / 2R) * sum_{n<d} chi(n) ln sin(pi n / d)`, rounded.
pub fn class_number_analytic(f: &QuadField) -> Result<u64> {
    let d = f.abs_disc();
    if d > MAX_ANALYTIC_DISC {
        return Err(Error::Domain(format!(
            "analytic class number needs d_K <= {MAX_ANALYTIC_DISC}, got {d}"
        )));
    }
    let disc = f.disc();
    let chi = |n: u64| kronecker_symbol(disc, n as i64).expect("n > 0");
    if f.is_real() {
        let regulator = cf_period(f.d() as u64)?.regulator;
        // chi is even, so pair n with d - n
        let mut sum = 0.0;
        for n in 1..=(d - 1) / 2 {
            let c = chi(n);
            if c != 0 {
                sum += f64::from(c) * (PI * n as f64 / d as f64).sin().ln();
            }
        }
        let value = -sum / regulator;
        let rounded = value.round();
        if (value - rounded).abs() > 0.2 || rounded < 1.0 {
            return Err(Error::PrecisionFailure { value });
        }
        Ok(rounded as u64)
    } else {
        let w: i128 = match d {
            3 => 6,
            4 => 4,
            _ => 2,
        };
        let sum: i128 = (1..d).map(|n| i128::from(chi(n)) * n as i128).sum();
        let num = -w * sum;
        let den = 2 * d as i128;
        if num <= 0 || num % den != 0 {
            return Err(Error::PrecisionFailure {
                value: num as f64 / den as f64,
            });
        }
        Ok((num / den) as u64)
    }
}
