// SPDX-License-Identifier: Apache-2.0

//! Pólya group orders, genus numbers and the identities tying them to the
//! class numbers of a quadratic field.

use num_rational::Ratio;

use crate::arith;
use crate::classno::{class_number_imaginary, class_number_real, UnitNorm};
use crate::error::{Error, Result};
use crate::quadfield::QuadField;

fn check_norm(f: &QuadField, unit_norm: Option<UnitNorm>) -> Result<Option<UnitNorm>> {
    match (f.is_real(), unit_norm) {
        (true, None) => Err(Error::MissingUnitNorm(f.d())),
        (false, Some(_)) => Err(Error::UnexpectedUnitNorm(f.d())),
        (_, n) => Ok(n),
    }
}

/// `#Po(K)`: `2^(s-2)` for a real field whose fundamental unit has norm +1,
/// `2^(s-1)` otherwise.
pub fn polya_order(f: &QuadField, unit_norm: Option<UnitNorm>) -> Result<u64> {
    let s = f.s_k();
    Ok(match check_norm(f, unit_norm)? {
        Some(UnitNorm::Plus) => 1 << (s - 2),
        _ => 1 << (s - 1),
    })
}

/// Genus number `g_K`. Only drops to `2^(s-2)` for a real field with a unit of
/// norm +1 and a prime `p = 3 mod 4` dividing `D`.
pub fn genus_number(f: &QuadField, unit_norm: Option<UnitNorm>) -> Result<u64> {
    let s = f.s_k();
    Ok(match check_norm(f, unit_norm)? {
        Some(UnitNorm::Plus) if f.has_prime_3mod4() => 1 << (s - 2),
        _ => 1 << (s - 1),
    })
}

/// Narrow genus number `g_K^+ = prod(e_p) / [K:Q] = 2^(s-1)`.
pub fn narrow_genus_number(f: &QuadField) -> u64 {
    let ramification: u64 = f.ramified_primes().iter().map(|_| 2u64).product();
    ramification / 2
}

/// `#Po(K)` as `c_K * tau(d_K)`, halved for a real field with a unit of norm +1.
pub fn polya_order_via_tau(f: &QuadField, unit_norm: Option<UnitNorm>) -> Result<u64> {
    let unit_norm = check_norm(f, unit_norm)?;
    let tau = arith::tau(f.abs_disc())?;
    let mut value = f.c_factor() * Ratio::from_integer(tau);
    if unit_norm == Some(UnitNorm::Plus) {
        value /= 2;
    }
    if !value.is_integer() {
        return Err(Error::NonIntegerResult {
            num: *value.numer(),
            den: *value.denom(),
        });
    }
    Ok(value.to_integer())
}

/// Class group, Pólya group and genus data of one quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInvariants {
    pub field: QuadField,
    pub h: u64,
    pub h_plus: u64,
    /// `None` for imaginary fields.
    pub unit_norm: Option<UnitNorm>,
    pub polya_order: u64,
    pub g: u64,
    pub g_plus: u64,
    pub polya_index: u64,
    pub genus_index: u64,
}

impl ClassInvariants {
    /// Assemble the bundle from known class numbers, checking every
    /// divisibility and index identity.
    pub fn from_parts(
        field: QuadField,
        h: u64,
        h_plus: u64,
        unit_norm: Option<UnitNorm>,
    ) -> Result<Self> {
        let polya = polya_order(&field, unit_norm)?;
        let g = genus_number(&field, unit_norm)?;
        let g_plus = narrow_genus_number(&field);
        let d = field.d();
        let violation = |what: String| Err(Error::IdentityViolation { d, what });

        let expected_h_plus = match unit_norm {
            Some(UnitNorm::Plus) => 2 * h,
            _ => h,
        };
        if h == 0 || h_plus != expected_h_plus {
            return violation(format!("h = {h}, h+ = {h_plus}, unit norm {unit_norm:?}"));
        }
        if h % polya != 0 {
            return violation(format!("#Po = {polya} does not divide h = {h}"));
        }
        if h % g != 0 {
            return violation(format!("g = {g} does not divide h = {h}"));
        }
        if h_plus % g_plus != 0 {
            return violation(format!("g+ = {g_plus} does not divide h+ = {h_plus}"));
        }
        // #Po / h = g+ / h+
        if u128::from(polya) * u128::from(h_plus) != u128::from(g_plus) * u128::from(h) {
            return violation(format!(
                "#Po/h = {polya}/{h} differs from g+/h+ = {g_plus}/{h_plus}"
            ));
        }
        Ok(Self {
            field,
            h,
            h_plus,
            unit_norm,
            polya_order: polya,
            g,
            g_plus,
            polya_index: h / polya,
            genus_index: h / g,
        })
    }
}

/// Compute the full invariant bundle of a field from scratch.
pub fn invariants(f: &QuadField) -> Result<ClassInvariants> {
    if f.is_real() {
        let c = class_number_real(f)?;
        ClassInvariants::from_parts(f.clone(), c.h, c.h_plus, Some(c.unit_norm))
    } else {
        let h = class_number_imaginary(f)?;
        ClassInvariants::from_parts(f.clone(), h, h, None)
    }
}
