//! Integer factorization: trial division up to 10^6, then Pollard's rho with
//! Brent's cycle detection on the remaining cofactor.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

const TRIAL_LIMIT: usize = 1_000_000;

/// Iterations of the rho map allowed per factorization before giving up.
pub const RHO_ITERATION_BUDGET: u64 = 1 << 26;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// A positive integer with its prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        Self { value: BigUint::one(), factors: Vec::new() }
    }

    /// Builds from prime powers; merges repeated primes and sorts. The caller
    /// vouches for primality.
    pub fn from_prime_powers(mut factors: Vec<(BigUint, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort();
        let mut merged: Vec<(BigUint, u32)> = Vec::new();
        for (q, e) in factors {
            match merged.last_mut() {
                Some((last, le)) if *last == q => *le += e,
                _ => merged.push((q, e)),
            }
        }
        let value = merged
            .iter()
            .fold(BigUint::one(), |acc, (q, e)| acc * num_traits::pow(q.clone(), *e as usize));
        Self { value, factors: merged }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn largest_prime(&self) -> Option<&BigUint> {
        self.factors.last().map(|(q, _)| q)
    }

    /// Least common multiple, keeping the factorization.
    pub fn lcm(&self, other: &Self) -> Self {
        let mut all = self.factors.clone();
        for (q, e) in &other.factors {
            match all.iter_mut().find(|(r, _)| r == q) {
                Some((_, f)) => *f = (*f).max(*e),
                None => all.push((q.clone(), *e)),
            }
        }
        Self::from_prime_powers(all)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        Self::from_prime_powers(all)
    }

    /// The factorization of a divisor, given by its value.
    pub fn divisor(&self, d: &BigUint) -> Self {
        let mut rest = d.clone();
        let mut out = Vec::new();
        for (q, _) in &self.factors {
            let mut e = 0;
            while !rest.is_zero() && (&rest % q).is_zero() {
                rest /= q;
                e += 1;
            }
            out.push((q.clone(), e));
        }
        assert!(rest.is_one(), "{d} does not divide {}", self.value);
        Self::from_prime_powers(out)
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(q, e)| if *e == 1 { q.to_string() } else { format!("{q}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Complete factorization with the default seed and iteration budget.
pub fn factor_integer(n: &BigUint) -> Result<FactoredInteger> {
    factor_integer_with(n, &mut SplitMix64::new(0x5eed_f4c7), RHO_ITERATION_BUDGET)
}

/// Complete factorization of `n >= 1`. Fails with `ResourceLimit` if a
/// composite cofactor survives `budget` rho iterations.
pub fn factor_integer_with(n: &BigUint, rng: &mut SplitMix64, budget: u64) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut rest = n.clone();
    let mut found = Vec::new();
    for &q in small_primes() {
        let qb = BigUint::from(q);
        if &qb * &qb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % q).is_zero() {
            rest /= q;
            e += 1;
        }
        if e > 0 {
            found.push((qb, e));
        }
    }
    let mut stack = vec![rest];
    let mut spent = 0u64;
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            found.push((c, 1));
            continue;
        }
        let d = rho_brent(&c, rng, budget, &mut spent)?;
        let other = &c / &d;
        stack.push(d);
        stack.push(other);
    }
    Ok(FactoredInteger::from_prime_powers(found))
}

/// Finds a nontrivial divisor of an odd composite `n`.
fn rho_brent(n: &BigUint, rng: &mut SplitMix64, budget: u64, spent: &mut u64) -> Result<BigUint> {
    let one = BigUint::one();
    let batch = 128u64;
    loop {
        let c = BigUint::one() + rng.below_big(&(n - 2u32));
        let step = |y: &BigUint| (y * y + &c) % n;
        let mut y = BigUint::one() + rng.below_big(&(n - 2u32));
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            *spent += r;
            if *spent > budget {
                return Err(Error::ResourceLimit(format!(
                    "Pollard rho exceeded {budget} iterations on a {}-bit cofactor",
                    n.bits()
                )));
            }
            r *= 2;
        }
        if &g == n {
            // The batch overshot; step one at a time from the saved point.
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Ok(g);
        }
    }
}
