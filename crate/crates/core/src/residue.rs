//! Exact modular arithmetic on `u64` residues.
//!
//! Every product is formed in `u128` before reduction, so all routines are
//! exact for moduli up to `2^64 - 1`.

use std::fmt;
use std::ops::{Mul, Neg};

use crate::budget::{FACTORIAL_LOOP_CAP, SQUARE_ORACLE_CAP};
use crate::{Error, Result};

/// Witnesses that make Miller-Rabin deterministic below 3.3 * 10^24.
const MILLER_RABIN_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `b^e mod m` by square-and-multiply. `b` is reduced first.
///
/// # Panics
///
/// If `m < 2`.
pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    assert!(m >= 2, "modulus must be at least 2, got {m}");
    let mut base = b % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality test for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MILLER_RABIN_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MILLER_RABIN_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A validated odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(n: u64) -> Result<Self> {
        if n == 2 {
            return Err(Error::domain("2 is not an odd prime"));
        }
        if !is_prime(n) {
            return Err(Error::domain(format!("{n} is not prime")));
        }
        Ok(OddPrime(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `(p - 1) / 2`.
    pub fn half(self) -> u64 {
        (self.0 - 1) / 2
    }

    pub fn mod4(self) -> u64 {
        self.0 % 4
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A sign `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// A Legendre symbol evaluated at a unit; zero is never produced.
pub type LegendreValue = Sign;

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `(-1)^exp`.
    pub fn from_parity(exp: u64) -> Sign {
        if exp.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Reads residue `1` as `+1` and `m - 1` as `-1`; anything else is `None`.
    pub fn from_residue(r: u64, m: u64) -> Option<Sign> {
        if r == 1 {
            Some(Sign::Plus)
        } else if r + 1 == m {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn to_residue(self, m: u64) -> u64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => m - 1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

fn reduce_unit(a: u64, p: OddPrime) -> Result<u64> {
    let r = a % p.get();
    if r == 0 {
        return Err(Error::domain(format!(
            "{a} is divisible by {p}; the symbol is only taken at units"
        )));
    }
    Ok(r)
}

/// `(a/p)` by Euler's criterion, `a^((p-1)/2) mod p`.
pub fn legendre_euler(a: u64, p: OddPrime) -> Result<LegendreValue> {
    let a = reduce_unit(a, p)?;
    let m = p.get();
    let r = pow_mod(a, p.half(), m);
    Sign::from_residue(r, m).ok_or_else(|| {
        Error::Internal(format!("{a}^(({m}-1)/2) = {r} mod {m} is neither 1 nor -1"))
    })
}

/// `(a/p)` by listing the squares `x^2 mod p` for `1 <= x <= (p-1)/2`.
pub fn legendre_oracle(a: u64, p: OddPrime) -> Result<LegendreValue> {
    let a = reduce_unit(a, p)?;
    if p.get() > SQUARE_ORACLE_CAP {
        return Err(Error::capacity(
            "square oracle prime",
            p.get(),
            SQUARE_ORACLE_CAP,
        ));
    }
    let m = p.get();
    let is_square = (1..=p.half()).any(|x| x * x % m == a);
    Ok(if is_square { Sign::Plus } else { Sign::Minus })
}

/// `n! mod m` with a reduction after every step.
pub fn factorial_mod(n: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::domain(format!(
            "modulus must be at least 2, got {m}"
        )));
    }
    if n > FACTORIAL_LOOP_CAP {
        return Err(Error::capacity("factorial length", n, FACTORIAL_LOOP_CAP));
    }
    Ok((2..=n).fold(1 % m, |acc, k| mul_mod(acc, k % m, m)))
}

/// Wilson's theorem at `p`: `(p-1)! = -1 (mod p)`.
pub fn wilson_check(p: OddPrime) -> Result<bool> {
    let m = p.get();
    Ok(factorial_mod(m - 1, m)? == m - 1)
}

/// Checks `q * 2q * ... * ((p-1)/2)q = (q/p) * ((p-1)/2)! (mod p)` with both
/// sides computed independently.
pub fn euler_criterion_check(q: u64, p: OddPrime) -> Result<bool> {
    let qr = reduce_unit(q, p)?;
    let m = p.get();
    let h = p.half();
    if h > FACTORIAL_LOOP_CAP {
        return Err(Error::capacity("factorial length", h, FACTORIAL_LOOP_CAP));
    }
    let left = (1..=h).fold(1u64, |acc, j| mul_mod(acc, mul_mod(j, qr, m), m));
    let fact = factorial_mod(h, m)?;
    let right = match legendre_euler(qr, p)? {
        Sign::Plus => fact,
        Sign::Minus => (m - fact) % m,
    };
    Ok(left == right)
}
