// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::QuadField;

/// Default cap on the memory a batch class-number table may allocate.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Number of reduced forms `(a, b, c)` with `b^2 - 4ac = -d`,
/// `-a < b <= a <= c`, and `b >= 0` when `a = c`.
pub fn count_reduced_definite(d: u64) -> u64 {
    let d = d as i64;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= d {
        let mut b = if (a - 1 + d) % 2 == 0 { -a + 1 } else { -a + 2 };
        while b <= a {
            let num = b * b + d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c > a || (c == a && b >= 0) {
                    debug_assert!(
                        !arith::is_fundamental_discriminant(-d)
                            || num_integer::gcd(num_integer::gcd(a, b), c) == 1,
                        "non-primitive form ({a}, {b}, {c}) of fundamental discriminant -{d}"
                    );
                    count += 1;
                }
            }
            b += 2;
        }
        a += 1;
    }
    count as u64
}

/// Class number of an imaginary quadratic field by counting reduced forms.
pub fn class_number_imaginary(f: &QuadField) -> Result<u64> {
    if f.is_real() {
        return Err(Error::WrongSignature {
            d: f.d(),
            expected: "imaginary",
        });
    }
    Ok(count_reduced_definite(f.abs_disc()))
}

/// Class numbers for every imaginary fundamental discriminant `-d` with
/// `d <= limit`, produced by one pass over all reduced forms.
#[derive(Debug, Clone)]
pub struct ImaginaryClassTable {
    counts: Vec<u32>,
}

impl ImaginaryClassTable {
    pub fn limit(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    /// `h(-d)` if `-d` is a fundamental discriminant within the table.
    pub fn get(&self, d: u64) -> Option<u64> {
        if d > self.limit() || !arith::is_fundamental_discriminant(-(d as i64)) {
            return None;
        }
        Some(u64::from(self.counts[d as usize]))
    }

    /// Raw reduced-form count for any `d`, fundamental or not.
    pub fn form_count(&self, d: u64) -> Option<u64> {
        self.counts.get(d as usize).map(|&c| u64::from(c))
    }
}

fn count_a_range(a_lo: u64, a_hi: u64, limit: u64, counts: &mut [u32]) {
    for a in a_lo..a_hi {
        for b in 0..=a {
            let mut c = a;
            loop {
                let disc = 4 * a * c - b * b;
                if disc > limit {
                    break;
                }
                // -b is a separate reduced form unless b = 0, b = a, or a = c
                let w = if b == 0 || b == a || a == c { 1 } else { 2 };
                counts[disc as usize] += w;
                c += 1;
            }
        }
    }
}

pub fn batch_class_numbers_imaginary(limit: u64, memory_budget: u64) -> Result<ImaginaryClassTable> {
    if limit < 3 {
        return Err(Error::Domain(format!("batch limit must be >= 3, got {limit}")));
    }
    let a_max = arith::isqrt(limit / 3) + 1;
    let workers = rayon::current_num_threads().max(1) as u64;
    let shards = workers.min(a_max);
    let table_bytes = (limit + 1).saturating_mul(4);
    let needed = table_bytes.saturating_mul(shards + 1);
    if needed > memory_budget {
        return Err(Error::ResourceLimit(format!(
            "class-number table up to {limit} needs {needed} bytes with {shards} shards, budget is {memory_budget}"
        )));
    }
    // Work per leading coefficient is roughly constant, so equal a-ranges balance.
    let bounds: Vec<(u64, u64)> = (0..shards)
        .map(|i| (1 + i * a_max / shards, 1 + (i + 1) * a_max / shards))
        .collect();
    let counts = bounds
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut counts = vec![0u32; (limit + 1) as usize];
            count_a_range(lo, hi, limit, &mut counts);
            counts
        })
        .reduce_with(|mut acc, part| {
            for (x, y) in acc.iter_mut().zip(part) {
                *x += y;
            }
            acc
        })
        .unwrap_or_else(|| vec![0u32; (limit + 1) as usize]);
    Ok(ImaginaryClassTable { counts })
}
