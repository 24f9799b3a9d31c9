//! Integer helpers shared by the field and discrete-log modules.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// Miller-Rabin bases that make the test deterministic for every `n < 2^64`.
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Number of fixed-base Miller-Rabin rounds used above 2^64.
/// The error probability is at most 4^-40 for adversarial inputs.
pub const BIG_PRIME_ROUNDS: usize = 40;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &DETERMINISTIC_BASES {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &DETERMINISTIC_BASES {
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

/// Primality test for arbitrary-precision integers: exact below 2^64,
/// [`BIG_PRIME_ROUNDS`] fixed-base Miller-Rabin rounds above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut base = 2u64;
    let mut rounds = 0;
    'witness: while rounds < BIG_PRIME_ROUNDS {
        rounds += 1;
        let a = BigUint::from(base);
        base = next_small_prime(base);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_small_prime(mut q: u64) -> u64 {
    loop {
        q += 1;
        if is_prime_u64(q) {
            return q;
        }
    }
}

/// Primes up to `limit` inclusive, by the sieve of Eratosthenes.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `base^exp` with an arbitrary-precision result.
pub fn big_pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Smallest `k >= 0` with `p^k >= n`.
pub fn ceil_log(p: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut acc: u128 = 1;
    while acc < n as u128 {
        acc *= p as u128;
        k += 1;
    }
    k
}
