// SPDX-License-Identifier: Apache-2.0

//! Richaud-Degert discriminants `D = l^2 + r` with `r | 4l`, and their
//! explicit units.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::classno::{cf_period, UnitData};
use crate::error::{Error, Result};

/// Largest sweep limit for [`enumerate_extended_rd`]; the square-free sieve is
/// one byte per integer.
pub const MAX_ENUMERATION_LIMIT: u64 = 1 << 34;

/// Strength of a Richaud-Degert representation, weakest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RdKind {
    #[serde(rename = "EXTENDED")]
    Extended,
    #[serde(rename = "RD")]
    Rd,
    #[serde(rename = "NARROW")]
    Narrow,
}

impl fmt::Display for RdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RdKind::Extended => "EXTENDED",
            RdKind::Rd => "RD",
            RdKind::Narrow => "NARROW",
        })
    }
}

/// A representation `D = ell^2 + r` with `r | 4 ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RdWitness {
    pub ell: u64,
    pub r: i64,
    pub kind: RdKind,
}

impl RdWitness {
    pub fn d(&self) -> u64 {
        (self.ell * self.ell).wrapping_add_signed(self.r)
    }

    /// The witness for `(ell, r)` if `r` is a nonzero divisor of `4 ell` giving
    /// `D >= 2`.
    pub fn new(ell: u64, r: i64) -> Option<Self> {
        if ell == 0 || r == 0 || (4 * ell) % r.unsigned_abs() != 0 {
            return None;
        }
        let d = (ell * ell).checked_add_signed(r).filter(|&d| d >= 2)?;
        let ell_i = ell as i64;
        let kind = if d == 5 || r <= -ell_i || r > ell_i {
            RdKind::Extended
        } else if matches!(r.abs(), 1 | 4) {
            RdKind::Narrow
        } else {
            RdKind::Rd
        };
        Some(Self { ell, r, kind })
    }

    // Stronger kinds first, then smaller ell.
    fn preference(&self) -> (RdKind, std::cmp::Reverse<u64>) {
        (self.kind, std::cmp::Reverse(self.ell))
    }
}

/// Every representation of `D` as `ell^2 + r` with `r | 4 ell`.
pub fn rd_representations(d: u64) -> Vec<RdWitness> {
    if d < 2 {
        return Vec::new();
    }
    let root = arith::isqrt(d);
    let ceil_root = if root * root == d { root } else { root + 1 };
    (1..=ceil_root + 2)
        .filter_map(|ell| {
            let r = d as i128 - (ell as i128) * (ell as i128);
            RdWitness::new(ell, i64::try_from(r).ok()?)
        })
        .collect()
}

fn best(ws: impl IntoIterator<Item = RdWitness>) -> Option<RdWitness> {
    ws.into_iter().max_by_key(RdWitness::preference)
}

/// The strongest Richaud-Degert kind of `D`, if any.
pub fn classify_rd(d: u64) -> Option<RdKind> {
    best(rd_representations(d)).map(|w| w.kind)
}

/// The preferred witness of `D`: strongest kind, smallest `ell` among those.
pub fn best_witness(d: u64) -> Option<RdWitness> {
    best(rd_representations(d))
}

/// All square-free `2 <= D <= limit` of extended R-D type, ascending, each with
/// its preferred witness.
pub fn enumerate_extended_rd(limit: u64) -> Result<Vec<(u64, RdWitness)>> {
    if limit < 2 {
        return Err(Error::Domain(format!("R-D enumeration limit must be >= 2, got {limit}")));
    }
    if limit > MAX_ENUMERATION_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "R-D enumeration up to {limit} exceeds {MAX_ENUMERATION_LIMIT}"
        )));
    }
    let squarefree = arith::squarefree_sieve(limit)?;
    let ell_max = arith::isqrt(limit) + 3;
    let factorizer = arith::default_factorizer();
    let mut found: Vec<(u64, RdWitness)> = (1..=ell_max)
        .into_par_iter()
        .flat_map_iter(|ell| {
            let divisors = factorizer.factorize(4 * ell).expect("4 ell > 0").divisors();
            let squarefree = &squarefree;
            divisors
                .into_iter()
                .flat_map(|t| [t as i64, -(t as i64)])
                .filter_map(move |r| RdWitness::new(ell, r))
                .map(|w| (w.d(), w))
                .filter(move |&(d, _)| d <= limit && squarefree[d as usize])
                .collect::<Vec<_>>()
        })
        .collect();
    found.sort_unstable_by_key(|&(d, w)| (d, std::cmp::Reverse(w.preference())));
    found.dedup_by_key(|&mut (d, _)| d);
    Ok(found)
}

/// The unit attached to a witness: `ell + sqrt(D)` for `|r| = 1`,
/// `(ell + sqrt(D)) / 2` for `|r| = 4`, and `(2 ell^2 + r + 2 ell sqrt(D)) / |r|`
/// otherwise. Fundamental whenever the witness has R-D kind.
pub fn degert_unit(w: &RdWitness) -> Result<UnitData> {
    let d = w.d();
    let ell = BigUint::from(w.ell);
    let abs_r = w.r.unsigned_abs();
    match abs_r {
        1 => UnitData::new(d, ell, BigUint::from(1u32), 1),
        4 => UnitData::new(d, ell, BigUint::from(1u32), 2),
        _ => {
            // 2 ell^2 + r = ell^2 + D
            let rational = u128::from(w.ell) * u128::from(w.ell) + u128::from(d);
            let irrational = 2 * u128::from(w.ell);
            let m = u128::from(abs_r);
            let not_a_unit = || Error::NotAUnit {
                a: rational.to_string(),
                b: irrational.to_string(),
                q: abs_r,
                d: d as i64,
            };
            let (a, b, q) = if rational % m == 0 && irrational % m == 0 {
                (rational / m, irrational / m, 1)
            } else if (2 * rational) % m == 0 && (2 * irrational) % m == 0 {
                (2 * rational / m, 2 * irrational / m, 2)
            } else {
                return Err(not_a_unit());
            };
            UnitData::new(d, BigUint::from(a), BigUint::from(b), q).map_err(|_| not_a_unit())
        }
    }
}

/// Whether the regulator of `Q(sqrt(D))` is below `ln(3D)`.
pub fn regulator_bound_holds(d: u64) -> Result<bool> {
    if classify_rd(d).is_none() {
        return Err(Error::NotExtendedRd(d as i64));
    }
    Ok(cf_period(d)?.regulator < (3.0 * d as f64).ln())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use num_traits::ToPrimitive;

    use super::*;
    use crate::classno::{fundamental_unit_cf, UnitNorm};

    fn pairs(d: u64) -> Vec<(u64, i64, RdKind)> {
        rd_representations(d).into_iter().map(|w| (w.ell, w.r, w.kind)).collect()
    }

    /// Brute force over every (ell, r) pair with a generous ell range.
    fn brute_is_extended(d: u64) -> bool {
        (1..=2 * arith::isqrt(d) + 10).any(|ell: u64| {
            let r = d as i64 - (ell * ell) as i64;
            r != 0 && (4 * ell as i64) % r == 0
        })
    }

    #[test]
    fn representation_examples() {
        let five = pairs(5);
        for (ell, r) in [(1, 4), (2, 1), (3, -4)] {
            assert!(five.contains(&(ell, r, RdKind::Extended)), "{five:?}");
        }
        assert_eq!(pairs(34), vec![(6, -2, RdKind::Rd)]);
        assert!(pairs(19).is_empty());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_rd(2), Some(RdKind::Narrow));
        assert_eq!(classify_rd(7), Some(RdKind::Rd));
        assert_eq!(classify_rd(5), Some(RdKind::Extended));
        assert_eq!(classify_rd(19), None);
    }

    #[test]
    fn enumeration_examples() {
        let ds = |limit| -> BTreeSet<u64> {
            enumerate_extended_rd(limit).unwrap().into_iter().map(|(d, _)| d).collect()
        };
        assert_eq!(ds(11), BTreeSet::from([2, 3, 5, 6, 7, 10, 11]));
        let s = ds(20);
        for d in [13, 14, 15, 17] {
            assert!(s.contains(&d));
        }
        assert!(!s.contains(&19));
        assert!(ds(5).contains(&5));
        assert!(enumerate_extended_rd(1).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let limit = 100_000;
        let listed = enumerate_extended_rd(limit).unwrap();
        let expected: Vec<u64> = (2..=limit)
            .filter(|&d| arith::is_squarefree(d).unwrap() && brute_is_extended(d))
            .collect();
        let got: Vec<u64> = listed.iter().map(|&(d, _)| d).collect();
        assert_eq!(got, expected);
        for (d, w) in listed {
            assert_eq!(Some(w), best_witness(d), "D = {d}");
        }
    }

    #[test]
    fn degert_unit_examples() {
        let coords = |u: &UnitData| (u.a().to_u64().unwrap(), u.b().to_u64().unwrap(), u.q());
        let u = degert_unit(&RdWitness::new(1, 1).unwrap()).unwrap();
        assert_eq!((coords(&u), u.norm()), ((1, 1, 1), UnitNorm::Minus));
        let u = degert_unit(&RdWitness::new(1, 4).unwrap()).unwrap();
        assert_eq!((coords(&u), u.norm()), ((1, 1, 2), UnitNorm::Minus));
        let u = degert_unit(&RdWitness::new(6, -2).unwrap()).unwrap();
        assert_eq!((coords(&u), u.norm()), ((35, 6, 1), UnitNorm::Plus));
    }

    #[test]
    fn regulator_bound_examples() {
        assert_eq!(regulator_bound_holds(5), Ok(true));
        assert_eq!(regulator_bound_holds(3), Ok(true));
        assert_eq!(regulator_bound_holds(34), Ok(true));
        assert_eq!(regulator_bound_holds(19), Err(Error::NotExtendedRd(19)));
        let r5 = cf_period(5).unwrap().regulator;
        assert!((r5 - 0.4812118250596).abs() < 1e-9);
    }

    #[test]
    fn degert_units_on_small_discriminants() {
        for d in 2..=100_000u64 {
            if !arith::is_squarefree(d).unwrap() {
                continue;
            }
            for w in rd_representations(d) {
                let u = degert_unit(&w).unwrap_or_else(|e| panic!("{w:?}: {e}"));
                assert!(u.verify(), "{w:?}");
                if w.kind >= RdKind::Rd {
                    assert_eq!(u, fundamental_unit_cf(d).unwrap(), "{w:?}");
                }
            }
        }
    }
}
