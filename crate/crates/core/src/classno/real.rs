// SPDX-License-Identifier: Apache-2.0

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::QuadField;

use super::unit::{cf_period, UnitNorm};

/// Class numbers of a real quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassData {
    pub h: u64,
    pub h_plus: u64,
    pub unit_norm: UnitNorm,
}

/// All reduced indefinite forms `(a, b, c)` of discriminant `disc`:
/// `0 < b < sqrt(disc)` and `sqrt(disc) - b < 2|a| < sqrt(disc) + b`.
/// Returned sorted as `(a, b)` pairs; `c = (b^2 - disc) / 4a`.
pub fn reduced_indefinite_forms(disc: u64) -> Vec<(i64, i64)> {
    let root = arith::isqrt(disc);
    debug_assert!(root * root != disc, "square discriminant {disc}");
    let disc_i = disc as i128;
    let mut forms = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    let factorizer = arith::default_factorizer();
    while b <= root {
        let n = (disc - b * b) / 4;
        let fac = factorizer.factorize(n).expect("n > 0");
        for m in fac.divisors() {
            let two_m = 2 * m as i128;
            let b_i = b as i128;
            // sqrt(disc) - b < 2m  and  2m < sqrt(disc) + b, in exact arithmetic
            let lower_ok = (two_m + b_i) * (two_m + b_i) > disc_i;
            let upper_ok = two_m <= b_i || (two_m - b_i) * (two_m - b_i) < disc_i;
            if lower_ok && upper_ok {
                forms.push((m as i64, b as i64));
                forms.push((-(m as i64), b as i64));
            }
        }
        b += 2;
    }
    forms.sort_unstable();
    forms
}

/// The reduction step rho: `(a, b, c) -> (c, b', a')` with `b' = -b mod 2|c|`
/// and `sqrt(disc) - 2|c| < b' < sqrt(disc)`.
fn rho(disc: i64, root: i64, (a, b): (i64, i64)) -> (i64, i64) {
    let c = (b * b - disc) / (4 * a);
    let m = 2 * c.abs();
    let b_next = root - (root + b).rem_euclid(m);
    (c, b_next)
}

/// Narrow class number: the number of rho-cycles of reduced forms.
pub fn narrow_class_number(disc: u64) -> u64 {
    let forms = reduced_indefinite_forms(disc);
    let disc_i = disc as i64;
    let root = arith::isqrt(disc) as i64;
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0;
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        loop {
            seen[i] = true;
            let next = rho(disc_i, root, forms[i]);
            i = forms
                .binary_search(&next)
                .unwrap_or_else(|_| panic!("rho{:?} = {next:?} is not reduced", forms[i]));
            if i == start {
                break;
            }
            debug_assert!(!seen[i], "rho is not a permutation at {:?}", forms[i]);
        }
    }
    cycles
}

/// `h_plus` from form cycles; `h = h_plus` when the fundamental unit has norm -1,
/// otherwise `h_plus / 2`.
pub fn class_number_real(f: &QuadField) -> Result<ClassData> {
    if !f.is_real() {
        return Err(Error::WrongSignature {
            d: f.d(),
            expected: "real",
        });
    }
    let unit_norm = cf_period(f.d() as u64)?.norm;
    let h_plus = narrow_class_number(f.abs_disc());
    let h = match unit_norm {
        UnitNorm::Minus => h_plus,
        UnitNorm::Plus => {
            if h_plus % 2 != 0 {
                return Err(Error::IdentityViolation {
                    d: f.d(),
                    what: format!("odd narrow class number {h_plus} with a unit of norm +1"),
                });
            }
            h_plus / 2
        }
    };
    Ok(ClassData {
        h,
        h_plus,
        unit_norm,
    })
}
