// SPDX-License-Identifier: Apache-2.0

//! Elementary integer arithmetic: factorization, divisor functions,
//! square-freeness, and the Kronecker symbol.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Numbers below this bound are factored from the shared smallest-prime-factor
/// table; larger ones fall back to trial division plus Pollard rho.
pub const DEFAULT_SIEVE_THRESHOLD: u64 = 1 << 23;

/// Prime factorization `n = p1^e1 * ... * pk^ek` with `p1 < ... < pk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = Vec::with_capacity(self.tau() as usize);
        divs.push(1u64);
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }

    fn push(&mut self, p: u64) {
        match self.factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => self.factors.push((p, 1)),
        }
    }
}

/// Smallest-prime-factor table for `0..=limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Self {
        assert!(limit < u64::from(u32::MAX), "sieve limit too large");
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        // linear sieve: every composite is crossed out once, by its smallest prime
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Self { spf, primes }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        (n >= 2 && n <= self.limit()).then(|| u64::from(self.spf[n as usize]))
    }

    fn factor_into(&self, mut n: u64, out: &mut Factorization) {
        debug_assert!(n <= self.limit());
        while n > 1 {
            let p = u64::from(self.spf[n as usize]);
            out.push(p);
            n /= p;
        }
    }
}

/// Factors integers up to 2^63, using a sieve below a threshold.
#[derive(Debug, Clone)]
pub struct Factorizer {
    sieve: SpfSieve,
}

impl Factorizer {
    pub fn with_threshold(threshold: u64) -> Self {
        Self {
            sieve: SpfSieve::new(threshold.max(1 << 16)),
        }
    }

    pub fn threshold(&self) -> u64 {
        self.sieve.limit()
    }

    pub fn sieve(&self) -> &SpfSieve {
        &self.sieve
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Zero);
        }
        let mut out = Factorization {
            n,
            factors: Vec::new(),
        };
        if n <= self.sieve.limit() {
            self.sieve.factor_into(n, &mut out);
            return Ok(out);
        }
        let mut m = n;
        for &p in &self.sieve.primes {
            let p = u64::from(p);
            if p * p > m || p > 1 << 16 {
                break;
            }
            while m % p == 0 {
                out.push(p);
                m /= p;
            }
        }
        if m > 1 {
            if m <= self.sieve.limit() {
                self.sieve.factor_into(m, &mut out);
            } else {
                let mut big = Vec::new();
                split_large(m, &mut big);
                big.sort_unstable();
                for p in big {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }
}

static DEFAULT_FACTORIZER: OnceLock<Factorizer> = OnceLock::new();

/// Process-wide factorizer with [`DEFAULT_SIEVE_THRESHOLD`].
pub fn default_factorizer() -> &'static Factorizer {
    DEFAULT_FACTORIZER.get_or_init(|| Factorizer::with_threshold(DEFAULT_SIEVE_THRESHOLD))
}

pub fn factorize(n: u64) -> Result<Factorization> {
    default_factorizer().factorize(n)
}

pub fn tau(n: u64) -> Result<u64> {
    factorize(n).map(|f| f.tau())
}

pub fn omega(n: u64) -> Result<u32> {
    factorize(n).map(|f| f.omega())
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    factorize(n).map(|f| f.is_squarefree())
}

/// `table[n]` is true iff `n` is square-free, for `1 <= n <= limit`; `table[0]` is false.
pub fn squarefree_sieve(limit: u64) -> Result<Vec<bool>> {
    if limit == 0 {
        return Err(Error::Zero);
    }
    let n = limit as usize;
    let mut table = vec![true; n + 1];
    table[0] = false;
    let root = isqrt(limit) as usize;
    let small = SpfSieve::new(root.max(2) as u64);
    for &p in small.primes() {
        let sq = (p as usize) * (p as usize);
        if sq > n {
            break;
        }
        for m in (sq..=n).step_by(sq) {
            table[m] = false;
        }
    }
    Ok(table)
}

/// True iff `disc` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    let m4 = disc.rem_euclid(4);
    if m4 == 1 {
        return is_squarefree(disc.unsigned_abs()).unwrap_or(false);
    }
    if m4 != 0 {
        return false;
    }
    let m = disc / 4;
    matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs()).unwrap_or(false)
}

/// Kronecker symbol `(a | n)`. The case `n = 0` is rejected.
pub fn kronecker_symbol(a: i64, n: i64) -> Result<i32> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut sign = 1;
    if n < 0 && a < 0 {
        sign = -1;
    }
    let mut n = n.unsigned_abs();
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        n >>= v;
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    Ok(sign * jacobi(a.rem_euclid(n as i64) as u64, n))
}

/// Jacobi symbol `(a | n)` for odd `n`.
fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho; `n` odd composite without small factors.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut r = 1u64;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}
