// SPDX-License-Identifier: Apache-2.0

//! Quadratic fields `Q(sqrt(D))` and their discriminant data.

use std::fmt;

use num_rational::Ratio;

use crate::arith;
use crate::error::{Error, Result};

/// Largest |D| accepted; keeps `4D` and the reduced-form arithmetic inside i64.
pub const MAX_ABS_D: i64 = 1 << 60;

/// Residue of the square-free `D` modulo 4, after sign normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Residue {
    One,
    Two,
    Three,
}

impl Residue {
    pub fn of(d: i64) -> Option<Self> {
        match d.rem_euclid(4) {
            1 => Some(Residue::One),
            2 => Some(Residue::Two),
            3 => Some(Residue::Three),
            _ => None,
        }
    }

    /// The constant `c_K` with `#Po(K) = c_K * tau(d_K)` when no unit of norm -1
    /// is in play.
    pub fn c_factor(self) -> Ratio<u64> {
        match self {
            Residue::One => Ratio::new(1, 2),
            Residue::Three => Ratio::new(1, 3),
            Residue::Two => Ratio::new(1, 4),
        }
    }

    /// The constant `c'_K` with `tau(d_K) < c'_K * d_K^(1/4)`.
    pub fn c_prime_factor(self) -> f64 {
        match self {
            Residue::One => 2.8908,
            Residue::Three => 7.2927,
            Residue::Two => 9.7235,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self {
            Residue::One => 1,
            Residue::Two => 2,
            Residue::Three => 3,
        };
        write!(f, "{r} mod 4")
    }
}

/// The quadratic field `Q(sqrt(D))` for square-free `D != 0, 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
    disc: i64,
    ramified: Vec<u64>,
    residue: Residue,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::DegenerateD(d));
        }
        if d.abs() > MAX_ABS_D {
            return Err(Error::Domain(format!("|D| = {} exceeds 2^60", d.unsigned_abs())));
        }
        let fac = arith::factorize(d.unsigned_abs())?;
        if !fac.is_squarefree() {
            return Err(Error::NotSquarefree(d));
        }
        let residue = Residue::of(d).expect("square-free D is not 0 mod 4");
        let mut ramified: Vec<u64> = fac.primes().collect();
        if residue != Residue::One && ramified.first() != Some(&2) {
            ramified.insert(0, 2);
        }
        Ok(Self::from_parts(d, ramified))
    }

    fn from_parts(d: i64, ramified: Vec<u64>) -> Self {
        let residue = Residue::of(d).expect("square-free D is not 0 mod 4");
        let disc = if residue == Residue::One { d } else { 4 * d };
        Self {
            d,
            disc,
            ramified,
            residue,
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Signed fundamental discriminant.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// `d_K = |disc|`.
    pub fn abs_disc(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn ramified_primes(&self) -> &[u64] {
        &self.ramified
    }

    /// Number of ramified primes, `s_K = omega(d_K)`.
    pub fn s_k(&self) -> u32 {
        self.ramified.len() as u32
    }

    pub fn residue(&self) -> Residue {
        self.residue
    }

    pub fn c_factor(&self) -> Ratio<u64> {
        self.residue.c_factor()
    }

    pub fn c_prime_factor(&self) -> f64 {
        self.residue.c_prime_factor()
    }

    /// True iff some prime `p = 3 mod 4` divides `D`.
    pub fn has_prime_3mod4(&self) -> bool {
        self.ramified.iter().any(|&p| p % 4 == 3)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}
