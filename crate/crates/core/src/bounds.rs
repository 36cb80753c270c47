// SPDX-License-Identifier: Apache-2.0

//! Explicit class-number lower bounds and the discriminant cutoffs derived
//! from them.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::classno::UnitNorm;
use crate::error::{Error, Result};
use crate::quadfield::{QuadField, Residue};
use crate::rdtype::classify_rd;

const IHARA_B1: f64 = -0.34037;
const IHARA_B2: f64 = -0.49480;
/// Tatuzawa-type constant in the lower bound for extended R-D fields.
const MW_CONSTANT: f64 = 0.655;

/// Grid ratio and relative bisection tolerance of [`solve_threshold`].
pub const GRID_RATIO: f64 = 1.01;
pub const BISECTION_TOLERANCE: f64 = 1e-6;
/// Upper end of the scanned range.
pub const SCAN_MAX: f64 = 1e30;

fn c_term(t: f64) -> f64 {
    (4.0 * t.ln() + 2.0) / (t - 1.0)
}

/// GRH-conditional lower bound for the class number of an imaginary
/// quadratic field with `|disc| = d_k >= 11`.
pub fn ihara_lower_bound(d_k: f64) -> Result<f64> {
    if !(d_k >= 11.0) || !d_k.is_finite() {
        return Err(Error::Domain(format!("Ihara bound needs d_K >= 11, got {d_k}")));
    }
    let alpha = 0.5 * d_k.ln();
    // exp(-pi sqrt(d)) underflows to 0 for d_K above ~5e4
    let b1 = IHARA_B1 - 4.0 * (-PI * d_k.sqrt()).exp();
    let num = PI / 6.0 * d_k.sqrt() - alpha + b1;
    let den = alpha + 2.0 * alpha.ln() + IHARA_B2 + c_term(alpha);
    Ok(num / den)
}

fn mw_value(d_k: f64, d: f64) -> f64 {
    MW_CONSTANT * d_k.powf(7.0 / 16.0) / (32.0 * (3.0 * d).ln())
}

/// Lower bound `0.655 d_K^(7/16) / (32 ln 3D)` for the class number of a real
/// field of extended R-D type, valid with at most one exception.
pub fn mw_lower_bound(f: &QuadField) -> Result<f64> {
    if !f.is_real() {
        return Err(Error::WrongSignature {
            d: f.d(),
            expected: "real",
        });
    }
    if classify_rd(f.d() as u64).is_none() {
        return Err(Error::NotExtendedRd(f.d()));
    }
    Ok(mw_value(f.abs_disc() as f64, f.d() as f64))
}

fn residue_constant(residue: Residue) -> f64 {
    let c = residue.c_factor();
    *c.numer() as f64 / *c.denom() as f64 * residue.c_prime_factor()
}

/// Upper bound for `#Po / h` of an imaginary field with `d_K = x`, from the
/// divisor bound over the GRH class-number bound. Index 2 is impossible where
/// this drops below 1/2; the returned value is doubled so the test is `f < 1`.
pub fn f_imag_index2(residue: Residue, x: f64) -> Result<f64> {
    if !(x > std::f64::consts::E.powi(2)) || !x.is_finite() {
        return Err(Error::Domain(format!("f_imag_index2 needs x > e^2, got {x}")));
    }
    let l = 0.5 * x.ln();
    let b1 = IHARA_B1 - 4.0 * (-PI * x.sqrt()).exp();
    let num = residue_constant(residue) * x.powf(0.25) * (l + 2.0 * l.ln() + IHARA_B2 + c_term(l));
    let den = PI / 6.0 * x.sqrt() - l + b1;
    if den <= 0.0 {
        return Err(Error::Domain(format!("Ihara denominator vanishes at x = {x}")));
    }
    Ok(2.0 * num / den)
}

/// Upper bound for `#Po / h` of a real field of extended R-D type with
/// `d_K = x`, halved when the fundamental unit has norm +1. `D` inside the
/// logarithm is recovered from `x` (`D = x` or `x / 4` by residue).
pub fn f_rd(residue: Residue, norm: UnitNorm, x: f64) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::Domain(format!("f_rd needs x >= 2, got {x}")));
    }
    let d = match residue {
        Residue::One => x,
        Residue::Two | Residue::Three => x / 4.0,
    };
    let value = 32.0 * residue_constant(residue) * (3.0 * d).ln() / (MW_CONSTANT * x.powf(3.0 / 16.0));
    Ok(match norm {
        UnitNorm::Minus => value,
        UnitNorm::Plus => value / 2.0,
    })
}

/// Residue classes sharing one published cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ResidueGroup {
    #[serde(rename = "1 mod 4")]
    One,
    #[serde(rename = "2,3 mod 4")]
    TwoThree,
}

impl ResidueGroup {
    fn residues(self) -> &'static [Residue] {
        match self {
            ResidueGroup::One => &[Residue::One],
            ResidueGroup::TwoThree => &[Residue::Two, Residue::Three],
        }
    }
}

/// One of the cutoff curves; a group of residues is bounded by its worst member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Curve {
    ImaginaryIndex2(ResidueGroup),
    RealPolya1(ResidueGroup, UnitNorm),
}

impl Curve {
    pub fn eval(&self, x: f64) -> Result<f64> {
        let f = |r| match *self {
            Curve::ImaginaryIndex2(_) => f_imag_index2(r, x),
            Curve::RealPolya1(_, n) => f_rd(r, n, x),
        };
        let (Curve::ImaginaryIndex2(group) | Curve::RealPolya1(group, _)) = *self;
        group
            .residues()
            .iter()
            .map(|&r| f(r))
            .try_fold(f64::NEG_INFINITY, |acc, v| Ok(acc.max(v?)))
    }

    fn domain_start(&self) -> f64 {
        match self {
            Curve::ImaginaryIndex2(_) => 10.0,
            Curve::RealPolya1(..) => 2.0,
        }
    }

    /// The published cutoff for this curve.
    pub fn published_cutoff(&self) -> f64 {
        use ResidueGroup::*;
        match *self {
            Curve::ImaginaryIndex2(One) => 3.6e7,
            Curve::ImaginaryIndex2(TwoThree) => 4.1e8,
            Curve::RealPolya1(One, UnitNorm::Minus) => 4.3e18,
            Curve::RealPolya1(TwoThree, UnitNorm::Minus) => 8.14e19,
            Curve::RealPolya1(One, UnitNorm::Plus) => 6.3e16,
            Curve::RealPolya1(TwoThree, UnitNorm::Plus) => 1.3e18,
        }
    }

    pub fn all() -> [Curve; 6] {
        use ResidueGroup::*;
        [
            Curve::ImaginaryIndex2(One),
            Curve::ImaginaryIndex2(TwoThree),
            Curve::RealPolya1(One, UnitNorm::Minus),
            Curve::RealPolya1(TwoThree, UnitNorm::Minus),
            Curve::RealPolya1(One, UnitNorm::Plus),
            Curve::RealPolya1(TwoThree, UnitNorm::Plus),
        ]
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let group = |g: &ResidueGroup| match g {
            ResidueGroup::One => "1 mod 4",
            ResidueGroup::TwoThree => "2,3 mod 4",
        };
        match self {
            Curve::ImaginaryIndex2(g) => write!(f, "imaginary D = {}, index 2", group(g)),
            Curve::RealPolya1(g, n) => {
                write!(f, "extended R-D D = {}, norm {n}, index 1", group(g))
            }
        }
    }
}

/// Result of locating where a cutoff curve drops below 1 for good.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub case_label: String,
    pub threshold: f64,
    pub f_at_threshold: f64,
    pub published_threshold: f64,
    pub f_at_published: f64,
    /// `f < 1` at every scan-grid point from the published cutoff upward.
    pub holds_beyond_published: bool,
    /// `(published - threshold) / published`; negative when the solved
    /// crossing lies above the published cutoff.
    pub relative_gap: f64,
}

/// Largest crossing of `f = 1`: multiplicative grid scan, then bisection.
pub fn solve_threshold(curve: &Curve) -> Result<BoundReport> {
    let lo = curve.domain_start();
    let mut grid = Vec::new();
    let mut x = lo;
    while x <= SCAN_MAX {
        grid.push((x, curve.eval(x)?));
        x *= GRID_RATIO;
    }
    let last_above = grid.iter().rposition(|&(_, v)| v >= 1.0);
    let threshold = match last_above {
        None => lo,
        Some(i) if i + 1 == grid.len() => return Err(Error::NoCrossing { lo, hi: SCAN_MAX }),
        Some(i) => {
            let (mut a, mut b) = (grid[i].0, grid[i + 1].0);
            while (b - a) / b > BISECTION_TOLERANCE {
                let mid = 0.5 * (a + b);
                if curve.eval(mid)? >= 1.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            b
        }
    };
    let published = curve.published_cutoff();
    let holds_beyond_published = curve.eval(published)? < 1.0
        && grid.iter().filter(|&&(x, _)| x >= published).all(|&(_, v)| v < 1.0);
    Ok(BoundReport {
        case_label: curve.to_string(),
        threshold,
        f_at_threshold: curve.eval(threshold)?,
        published_threshold: published,
        f_at_published: curve.eval(published)?,
        holds_beyond_published,
        relative_gap: (published - threshold) / published,
    })
}

/// Reports for all six published cutoffs.
pub fn all_threshold_reports() -> Result<Vec<BoundReport>> {
    Curve::all().iter().map(solve_threshold).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn mw_examples() {
        assert!((mw_lower_bound(&field(2)).unwrap() - 0.0283735).abs() < 1e-6);
        assert!((mw_lower_bound(&field(5)).unwrap() - 0.0152839).abs() < 1e-6);
        assert!(mw_lower_bound(&field(451605)).unwrap() < 16.0);
        assert!(matches!(mw_lower_bound(&field(-5)), Err(Error::WrongSignature { .. })));
        assert_eq!(mw_lower_bound(&field(19)), Err(Error::NotExtendedRd(19)));
    }

    #[test]
    fn ihara_examples() {
        let v = ihara_lower_bound(11.0).unwrap();
        assert!(v > 0.0 && v < 2.0);
        let v = ihara_lower_bound(163.0).unwrap();
        assert!(v > 0.0 && v < 1.0);
        assert!(ihara_lower_bound(10.0).is_err());
        let mut prev = 0.0;
        let mut x = 1e3;
        while x <= 1e9 {
            let v = ihara_lower_bound(x).unwrap();
            assert!(v > prev, "not increasing at {x}");
            prev = v;
            x *= 1.5;
        }
    }

    #[test]
    fn imaginary_cutoff_examples() {
        assert!(f_imag_index2(Residue::One, 3.6e7).unwrap() < 1.0);
        for r in [Residue::Two, Residue::Three] {
            assert!(f_imag_index2(r, 4.1e8).unwrap() < 1.0);
            assert!(f_imag_index2(r, 1e6).unwrap() > 1.0);
        }
        assert!(f_imag_index2(Residue::One, 7.0).is_err());
    }

    #[test]
    fn real_cutoff_examples() {
        assert!(f_rd(Residue::One, UnitNorm::Minus, 4.3e18).unwrap() < 1.0);
        assert!(f_rd(Residue::Two, UnitNorm::Minus, 8.14e19).unwrap() < 1.0);
        assert!(f_rd(Residue::One, UnitNorm::Plus, 6.3e16).unwrap() < 1.0);
        assert!(f_rd(Residue::One, UnitNorm::Minus, 1.0).is_err());
        let minus = f_rd(Residue::Three, UnitNorm::Minus, 1e10).unwrap();
        let plus = f_rd(Residue::Three, UnitNorm::Plus, 1e10).unwrap();
        assert_eq!(minus, 2.0 * plus);
    }

    #[test]
    fn solver_brackets_its_crossing() {
        for curve in Curve::all() {
            let rep = solve_threshold(&curve).unwrap();
            assert!(rep.f_at_threshold < 1.0, "{rep:?}");
            let below = rep.threshold * (1.0 - 2.0 * BISECTION_TOLERANCE);
            assert!(curve.eval(below).unwrap() >= 1.0, "{rep:?}");
        }
    }

    #[test]
    fn conservative_published_cutoffs() {
        for curve in [
            Curve::ImaginaryIndex2(ResidueGroup::One),
            Curve::RealPolya1(ResidueGroup::One, UnitNorm::Minus),
            Curve::RealPolya1(ResidueGroup::TwoThree, UnitNorm::Plus),
        ] {
            let rep = solve_threshold(&curve).unwrap();
            assert!(rep.threshold <= rep.published_threshold, "{rep:?}");
            assert!(rep.holds_beyond_published, "{rep:?}");
        }
    }
}
