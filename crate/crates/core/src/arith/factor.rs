//! Integer factorization for isolated arguments: trial division by small
//! primes, then deterministic Miller–Rabin and Pollard–Brent rho.

use crate::error::{Error, Result};
use std::sync::OnceLock;

const SMALL_PRIME_BOUND: u64 = 1 << 12;
const RHO_ITERATION_CAP: u64 = 1 << 26;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for all `u64` with this base set.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
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

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's cycle-finding variant; returns a nontrivial factor of the odd
/// composite `n`.
fn rho(n: u64, budget: &mut u64) -> Option<u64> {
    for c in 1..64u64 {
        let f = |v: u64| ((mul_mod(v, v, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1;
        let mut x = y;
        let mut ys = y;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BLOCK;
            }
            r *= 2;
            *budget = budget.checked_sub(r)?;
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
            return Some(g);
        }
    }
    None
}

fn split(n: u64, out: &mut Vec<u64>, budget: &mut u64, original: u64) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    let d = rho(n, budget).ok_or(Error::FactorizationBudget(original))?;
    split(d, out, budget, original)?;
    split(n / d, out, budget, original)
}

/// Prime factorization as `(p, e)` pairs with ascending `p`.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    static SMALL: OnceLock<Vec<u64>> = OnceLock::new();
    let small = SMALL.get_or_init(|| super::primes_up_to(SMALL_PRIME_BOUND));
    for &p in small {
        if p * p > rest {
            break;
        }
        push(p, &mut rest);
    }
    if rest > 1 && rest < SMALL_PRIME_BOUND * SMALL_PRIME_BOUND {
        factors.push((rest, 1));
    } else if rest > 1 {
        let mut primes = Vec::new();
        let mut budget = RHO_ITERATION_CAP;
        split(rest, &mut primes, &mut budget, n)?;
        primes.sort_unstable();
        for chunk in primes.chunk_by(|a, b| a == b) {
            factors.push((chunk[0], chunk.len() as u32));
        }
    }
    Ok(factors)
}
