//! Exact integer helpers: gcd/lcm with overflow detection, trial-division
//! factorization, Euler's totient and prime enumeration.
//!
//! Every routine here either returns an exact value or an [`Error::Overflow`];
//! nothing wraps.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn gcd(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

pub fn checked_lcm(a: u128, b: u128) -> Result<u128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

pub fn checked_pow(base: u128, exp: u32) -> Result<u128> {
    base.checked_pow(exp).ok_or(Error::Overflow("power"))
}

pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `p <= bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// `n = p_1^{a_1} ... p_k^{a_k}` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u128,
    pub factors: Vec<(u128, u32)>,
    /// Zero-based position of the smallest prime whose exponent exceeds 1;
    /// `None` exactly when `n` is square-free.
    pub s_index: Option<usize>,
}

impl Factorization {
    pub fn is_square_free(&self) -> bool {
        self.s_index.is_none()
    }

    /// The prime `p_s` at the s-index.
    pub fn p_s(&self) -> Option<u128> {
        self.s_index.map(|i| self.factors[i].0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.factors.iter().map(|&(_, a)| a).max().unwrap_or(0)
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }
}

/// Trial-division factorization.
pub fn factorize(n: u128) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::input("cannot factorize 0"));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut d = 2u128;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut a = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                a += 1;
            }
            factors.push((d, a));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let s_index = factors.iter().position(|&(_, a)| a > 1);
    Ok(Factorization {
        n,
        factors,
        s_index,
    })
}

pub fn totient(m: u128) -> Result<u128> {
    if m == 0 {
        return Err(Error::input("totient is undefined at 0"));
    }
    let f = factorize(m)?;
    let mut phi = m;
    for &(p, _) in &f.factors {
        phi = phi / p * (p - 1);
    }
    Ok(phi)
}

/// All divisors of `m` in increasing order.
pub fn divisors(m: u128) -> Result<Vec<u128>> {
    let f = factorize(m)?;
    let mut out = vec![1u128];
    for &(p, a) in &f.factors {
        let len = out.len();
        let mut pk = 1u128;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
