// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Norm of the fundamental unit of a real quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UnitNorm {
    #[serde(rename = "-1")]
    Minus,
    #[serde(rename = "1")]
    Plus,
}

impl UnitNorm {
    pub fn value(self) -> i32 {
        match self {
            UnitNorm::Minus => -1,
            UnitNorm::Plus => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            -1 => Some(UnitNorm::Minus),
            1 => Some(UnitNorm::Plus),
            _ => None,
        }
    }

    fn from_parity(len: usize) -> Self {
        if len % 2 == 0 {
            UnitNorm::Plus
        } else {
            UnitNorm::Minus
        }
    }
}

impl fmt::Display for UnitNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// A unit `(a + b*sqrt(D)) / q` of a real quadratic field, `q` in {1, 2}.
///
/// `a` and `b` are stored without a common factor 2 when `q = 2`, so two
/// values describe the same element iff their `(a, b, q)` agree.
#[derive(Debug, Clone)]
pub struct UnitData {
    d: u64,
    a: BigUint,
    b: BigUint,
    q: u32,
    norm: UnitNorm,
    regulator: f64,
}

impl PartialEq for UnitData {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.a == other.a && self.b == other.b && self.q == other.q
    }
}

impl Eq for UnitData {}

impl UnitData {
    /// Builds the element `(a + b*sqrt(d)) / q` and checks that it is an
    /// integral unit.
    pub fn new(d: u64, a: BigUint, b: BigUint, q: u32) -> Result<Self> {
        let not_a_unit = |a: &BigUint, b: &BigUint| Error::NotAUnit {
            a: a.to_string(),
            b: b.to_string(),
            q: u64::from(q),
            d: d as i64,
        };
        if b.is_zero() || !(q == 1 || q == 2) {
            return Err(not_a_unit(&a, &b));
        }
        let (mut a, mut b, mut q) = (a, b, q);
        let two = BigUint::from(2u32);
        if q == 2 && (&a % &two).is_zero() && (&b % &two).is_zero() {
            a /= &two;
            b /= &two;
            q = 1;
        }
        if q == 2 && (d % 4 != 1 || (&a % &two) != (&b % &two)) {
            return Err(not_a_unit(&a, &b));
        }
        let lhs = BigInt::from(&a * &a) - BigInt::from(d) * BigInt::from(&b * &b);
        let q2 = BigInt::from(q * q);
        let norm = if lhs == q2 {
            UnitNorm::Plus
        } else if lhs == -q2 {
            UnitNorm::Minus
        } else {
            return Err(not_a_unit(&a, &b));
        };
        let regulator = ln_element(d, &a, &b, q);
        Ok(Self {
            d,
            a,
            b,
            q,
            norm,
            regulator,
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn norm(&self) -> UnitNorm {
        self.norm
    }

    /// Natural logarithm of the unit.
    pub fn regulator(&self) -> f64 {
        self.regulator
    }

    /// Exact check of `a^2 - D b^2 = q^2 * norm`.
    pub fn verify(&self) -> bool {
        let lhs = BigInt::from(&self.a * &self.a)
            - BigInt::from(self.d) * BigInt::from(&self.b * &self.b);
        lhs == BigInt::from(self.q * self.q) * BigInt::from(self.norm.value())
    }

    /// `ln` of the unit recomputed from its big-integer coordinates rather
    /// than carried along the expansion.
    pub fn log_from_coordinates(&self) -> f64 {
        ln_element(self.d, &self.a, &self.b, self.q)
    }
}

impl fmt::Display for UnitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        } else {
            write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.q)
        }
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln((a + b*sqrt(d)) / q)` without overflowing for huge coordinates.
fn ln_element(d: u64, a: &BigUint, b: &BigUint, q: u32) -> f64 {
    let ln_b_sqrt_d = ln_biguint(b) + 0.5 * (d as f64).ln();
    let sum = if a.is_zero() {
        ln_b_sqrt_d
    } else {
        let ln_a = ln_biguint(a);
        let (hi, lo) = if ln_a >= ln_b_sqrt_d {
            (ln_a, ln_b_sqrt_d)
        } else {
            (ln_b_sqrt_d, ln_a)
        };
        hi + (lo - hi).exp().ln_1p()
    };
    sum - f64::from(q).ln()
}

/// Period data of the continued fraction of the ring generator
/// `omega = (1 + sqrt(D))/2` (for `D = 1 mod 4`) or `omega = sqrt(D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfPeriod {
    pub len: usize,
    pub norm: UnitNorm,
    pub regulator: f64,
}

fn check_real_d(d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("need square-free D >= 2, got {d}")));
    }
    if d > crate::quadfield::MAX_ABS_D as u64 {
        return Err(Error::Domain(format!("D = {d} exceeds 2^60")));
    }
    if !arith::is_squarefree(d)? {
        return Err(Error::NotSquarefree(d as i64));
    }
    Ok(())
}

/// Complete quotients `(p + sqrt(D)) / q` of the expansion of omega.
struct Expansion {
    d: u64,
    root: i64,
    sqrt_d: f64,
    p: i64,
    q: i64,
    q0: i64,
}

impl Expansion {
    fn new(d: u64) -> Self {
        let (p, q) = if d % 4 == 1 { (1, 2) } else { (0, 1) };
        Self {
            d,
            root: arith::isqrt(d) as i64,
            sqrt_d: (d as f64).sqrt(),
            p,
            q,
            q0: q,
        }
    }

    /// Emits the next partial quotient and advances; returns it together with
    /// the log of the new complete quotient and whether the period closed.
    fn step(&mut self) -> (i64, f64, bool) {
        let a = (self.p + self.root) / self.q;
        let p = a * self.q - self.p;
        let q = ((self.d as i128 - (p as i128) * (p as i128)) / self.q as i128) as i64;
        debug_assert!(q > 0);
        self.p = p;
        self.q = q;
        let ln_quotient = ((p as f64 + self.sqrt_d) / q as f64).ln();
        (a, ln_quotient, q == self.q0)
    }
}

/// Period length, unit norm `(-1)^len`, and regulator, without big integers.
pub fn cf_period(d: u64) -> Result<CfPeriod> {
    check_real_d(d)?;
    let mut exp = Expansion::new(d);
    let mut len = 0;
    let mut regulator = 0.0;
    loop {
        let (_, ln_q, closed) = exp.step();
        len += 1;
        regulator += ln_q;
        if closed {
            break;
        }
    }
    Ok(CfPeriod {
        len,
        norm: UnitNorm::from_parity(len),
        regulator,
    })
}

/// Fundamental unit of the maximal order of `Q(sqrt(D))`.
///
/// The convergent `p/q` at the end of the first period of omega gives the
/// unit `p - q * conj(omega)`. The regulator is summed from the complete
/// quotients in floating point, so it never needs the log of a huge integer.
pub fn fundamental_unit_cf(d: u64) -> Result<UnitData> {
    check_real_d(d)?;
    let mut exp = Expansion::new(d);
    let (mut p_prev, mut p) = (BigUint::zero(), BigUint::one());
    let (mut q_prev, mut q) = (BigUint::one(), BigUint::zero());
    let mut len = 0usize;
    let mut regulator = 0.0;
    loop {
        let (a, ln_q, closed) = exp.step();
        let a = BigUint::from(a as u64);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        len += 1;
        regulator += ln_q;
        if closed {
            break;
        }
    }
    let unit = if d % 4 == 1 {
        // p - q(1 - sqrt(D))/2 = (2p - q + q sqrt(D)) / 2
        let a = (&p << 1u32) - &q;
        UnitData::new(d, a, q, 2)?
    } else {
        UnitData::new(d, p, q, 1)?
    };
    if unit.norm != UnitNorm::from_parity(len) {
        return Err(Error::IdentityViolation {
            d: d as i64,
            what: format!("unit norm {} disagrees with period length {len}", unit.norm),
        });
    }
    Ok(UnitData { regulator, ..unit })
}
