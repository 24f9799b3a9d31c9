use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use super::{crt_combine, FactoredInteger, Group, Residue};
use crate::error::{Error, Result};

/// Default ceiling for the group order a single BSGS or exhaustive call may
/// attack: 2^40, i.e. about 10^6 baby steps.
pub const DEFAULT_CEILING_BITS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Exhaustive,
    Bsgs,
    PohligHellman,
}

impl std::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "bsgs" => Ok(Self::Bsgs),
            "ph" | "pohlig_hellman" | "pohlig-hellman" => Ok(Self::PohligHellman),
            other => Err(Error::InvalidInput(format!("unknown solver {other:?}"))),
        }
    }
}

impl std::fmt::Display for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exhaustive => "exhaustive",
            Self::Bsgs => "bsgs",
            Self::PohligHellman => "ph",
        })
    }
}

/// Which solver to use and the largest group order it may attack directly.
/// For Pohlig-Hellman the ceiling bounds each prime factor instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub solver: Solver,
    pub ceiling: BigUint,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            solver: Solver::PohligHellman,
            ceiling: BigUint::one() << DEFAULT_CEILING_BITS,
        }
    }
}

impl SolverConfig {
    pub fn new(solver: Solver) -> Self {
        Self { solver, ..Self::default() }
    }

    pub fn with_ceiling(mut self, ceiling: BigUint) -> Self {
        self.ceiling = ceiling;
        self
    }
}

fn check_ceiling(order: &BigUint, ceiling: &BigUint) -> Result<()> {
    if order > ceiling {
        return Err(Error::ResourceLimit(format!(
            "group order {order} exceeds the solver ceiling {ceiling}"
        )));
    }
    Ok(())
}

/// Smallest `e` in `[0, order)` with `base^e = target`, by trying every exponent.
pub fn exhaustive<G: Group>(
    group: &G,
    base: &G::Elem,
    target: &G::Elem,
    order: &BigUint,
    ceiling: &BigUint,
) -> Result<Option<BigUint>> {
    check_ceiling(order, ceiling)?;
    let order = order.to_u64().expect("order below ceiling");
    let mut acc = group.identity();
    for e in 0..order {
        if &acc == target {
            return Ok(Some(BigUint::from(e)));
        }
        acc = group.op(&acc, base);
    }
    Ok(None)
}

/// Baby-step giant-step: smallest `e` in `[0, order)` with `base^e = target`,
/// or `None` if `target` is not a power of `base`.
pub fn bsgs<G: Group>(
    group: &G,
    base: &G::Elem,
    target: &G::Elem,
    order: &BigUint,
    ceiling: &BigUint,
) -> Result<Option<BigUint>> {
    check_ceiling(order, ceiling)?;
    let n = order.to_u64().expect("order below ceiling");
    if n == 0 {
        return Ok(None);
    }
    let mut m = n.sqrt();
    if m * m < n {
        m += 1;
    }
    let mut table: HashMap<G::Elem, u64> = HashMap::with_capacity(m as usize);
    let mut baby = group.identity();
    for j in 0..m {
        table.entry(baby.clone()).or_insert(j);
        baby = group.op(&baby, base);
    }
    // base^(-m) = base^(n - m mod n).
    let giant = group.pow(base, &BigUint::from((n - m % n) % n));
    let mut gamma = target.clone();
    for i in 0..m {
        if let Some(&j) = table.get(&gamma) {
            let e = BigUint::from(i * m + j);
            if &e < order && &group.pow(base, &e) == target {
                return Ok(Some(e));
            }
        }
        gamma = group.op(&gamma, &giant);
    }
    Ok(None)
}

/// Pohlig-Hellman: `order` must be the exact order of `base`. Each prime
/// power is solved digit by digit with BSGS in the subgroup of prime order,
/// and the digits are recombined by CRT. The result has modulus `order`.
pub fn pohlig_hellman<G: Group>(
    group: &G,
    base: &G::Elem,
    target: &G::Elem,
    order: &FactoredInteger,
    ceiling: &BigUint,
) -> Result<Residue> {
    let n = order.value();
    if let Some(q) = order.largest_prime() {
        check_ceiling(q, ceiling)?;
    }
    let mut parts = vec![Residue::default()];
    for (q, e) in order.factors() {
        let cofactor = n / q;
        let gamma = group.pow(base, &cofactor);
        let mut x = BigUint::zero();
        let mut q_k = BigUint::one();
        for _ in 0..*e {
            let q_next = &q_k * q;
            // (base^-x * target)^(n / q^(k+1)) has order dividing q.
            let shift = group.pow(base, &((n - &x % n) % n));
            let h = group.pow(&group.op(&shift, target), &(n / &q_next));
            let digit = bsgs(group, &gamma, &h, q, ceiling)?
                .ok_or_else(|| Error::NoSolution("target is outside the cyclic subgroup".into()))?;
            x += digit * &q_k;
            q_k = q_next;
        }
        parts.push(Residue::new(x, q_k)?);
    }
    let combined = crt_combine(&parts)?;
    if &group.pow(base, combined.r()) != target {
        return Err(Error::NoSolution("target is outside the cyclic subgroup".into()));
    }
    Ok(combined)
}

/// Dispatches to the configured solver. `order` is the exact order of `base`;
/// the result is the logarithm modulo that order.
pub fn solve<G: Group>(
    config: &SolverConfig,
    group: &G,
    base: &G::Elem,
    target: &G::Elem,
    order: &FactoredInteger,
) -> Result<Residue> {
    let none = || Error::NoSolution("target is outside the cyclic subgroup".into());
    let e = match config.solver {
        Solver::Exhaustive => exhaustive(group, base, target, order.value(), &config.ceiling)?.ok_or_else(none)?,
        Solver::Bsgs => bsgs(group, base, target, order.value(), &config.ceiling)?.ok_or_else(none)?,
        Solver::PohligHellman => return pohlig_hellman(group, base, target, order, &config.ceiling),
    };
    Residue::new(e, order.value().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlp::{element_order, factor_integer, ExtUnits, PrimeUnits};
    use crate::ff::{ExtElem, ExtField, Poly, PrimeField};
    use crate::rng::SplitMix64;
    use std::sync::Arc;

    fn ceiling() -> BigUint {
        BigUint::one() << DEFAULT_CEILING_BITS
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn bsgs_spot_values() {
        let z5 = PrimeField::new(5).unwrap();
        let g = PrimeUnits(z5);
        assert_eq!(bsgs(&g, &2, &3, &big(4), &ceiling()).unwrap(), Some(big(3)));
        assert_eq!(bsgs(&g, &2, &1, &big(4), &ceiling()).unwrap(), Some(big(0)));
        // 4 has order 2; 2 is not in its subgroup.
        assert_eq!(bsgs(&g, &4, &2, &big(2), &ceiling()).unwrap(), None);
        assert!(matches!(
            bsgs(&g, &2, &3, &big(4), &big(3)),
            Err(Error::ResourceLimit(_))
        ));
    }

    fn f25() -> Arc<ExtField> {
        let z5 = PrimeField::new(5).unwrap();
        ExtField::new(Poly::new(z5, vec![2, 0, 1])).unwrap()
    }

    #[test]
    fn pohlig_hellman_in_f25() {
        let ctx = f25();
        let group = ExtUnits(ctx.clone());
        let units = factor_integer(&ctx.unit_order()).unwrap();
        // Find a generator of the order-24 unit group by brute force.
        let base = (0..25u64)
            .map(|k| ExtElem::new(&ctx, Poly::new(ctx.base(), vec![k % 5, k / 5])))
            .find(|a| !a.is_zero() && (1..24u64).all(|e| !a.pow_u64(e).is_one()))
            .unwrap();
        let order = element_order(&group, &base, &units).unwrap();
        assert_eq!(order.value(), &big(24));
        let target = base.pow_u64(19);
        let r = pohlig_hellman(&group, &base, &target, &order, &ceiling()).unwrap();
        assert_eq!(r, Residue::from_u64(19, 24).unwrap());
    }

    #[test]
    fn prime_order_is_a_single_bsgs_call() {
        let z = PrimeField::new(23).unwrap();
        let g = PrimeUnits(z);
        // 2 has order 11 mod 23.
        let order = factor_integer(&big(11)).unwrap();
        for e in 0..11u64 {
            let t = z.pow(2, e);
            let ph = pohlig_hellman(&g, &2, &t, &order, &ceiling()).unwrap();
            let direct = bsgs(&g, &2, &t, &big(11), &ceiling()).unwrap().unwrap();
            assert_eq!(ph.r(), &direct);
        }
    }

    #[test]
    fn no_solution_and_ceiling() {
        let z = PrimeField::new(13).unwrap();
        let g = PrimeUnits(z);
        // 3 has order 3 mod 13; 2 is not a power of 3.
        let order = factor_integer(&big(3)).unwrap();
        assert!(matches!(
            pohlig_hellman(&g, &3, &2, &order, &ceiling()),
            Err(Error::NoSolution(_))
        ));
        let order = factor_integer(&big(12)).unwrap();
        assert!(matches!(
            pohlig_hellman(&g, &2, &5, &order, &big(2)),
            Err(Error::ResourceLimit(_))
        ));
        let cfg = SolverConfig::new(Solver::Exhaustive).with_ceiling(big(5));
        assert!(matches!(solve(&cfg, &g, &2, &5, &order), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn solvers_agree_with_exhaustive_search() {
        let mut rng = SplitMix64::new(77);
        let primes = [101u64, 211, 1009, 4001, 7919, 9973];
        for _ in 0..500 {
            let p = primes[rng.below(primes.len() as u64) as usize];
            let z = PrimeField::new(p).unwrap();
            let g = PrimeUnits(z);
            let base = 2 + rng.below(p - 2);
            let order = element_order(&g, &base, &factor_integer(&big(p - 1)).unwrap()).unwrap();
            let n = order.value().to_u64().unwrap();
            let target = if rng.bit() { z.pow(base, rng.below(n)) } else { 1 + rng.below(p - 1) };
            let brute = exhaustive(&g, &base, &target, order.value(), &ceiling()).unwrap();
            let baby = bsgs(&g, &base, &target, order.value(), &ceiling()).unwrap();
            assert_eq!(brute, baby);
            let ph = pohlig_hellman(&g, &base, &target, &order, &ceiling());
            match brute {
                Some(e) => assert_eq!(ph.unwrap(), Residue::new(e, order.value().clone()).unwrap()),
                None => assert!(matches!(ph, Err(Error::NoSolution(_)))),
            }
        }
    }

    #[test]
    fn solver_names() {
        assert_eq!("ph".parse::<Solver>().unwrap(), Solver::PohligHellman);
        assert_eq!("bsgs".parse::<Solver>().unwrap(), Solver::Bsgs);
        assert_eq!("exhaustive".parse::<Solver>().unwrap(), Solver::Exhaustive);
        assert!("rho".parse::<Solver>().is_err());
    }
}
