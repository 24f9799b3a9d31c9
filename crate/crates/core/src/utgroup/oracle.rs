//! Brute-force computation of the Frattini subgroup on tiny groups.

use std::collections::VecDeque;

use num_traits::ToPrimitive;

use super::{frattini_project, generators, GroupParams, UtElement};
use crate::error::{Error, Result};

/// Largest |G| the oracle will enumerate.
pub const ORACLE_LIMIT: u64 = 20_000;

/// Phi(G) computed two ways, plus the kernel of the projection.
#[derive(Debug, Clone)]
pub struct FrattiniOracle {
    pub group_order: u64,
    /// Subgroup generated by all commutators and p-th powers.
    pub commutators_and_powers: Vec<UtElement>,
    /// Intersection of all maximal subgroups.
    pub maximal_intersection: Vec<UtElement>,
    /// Elements with zero first superdiagonal.
    pub projection_kernel: Vec<UtElement>,
    /// Number of distinct maximal subgroups found.
    pub maximal_subgroups: usize,
}

impl FrattiniOracle {
    pub fn consistent(&self) -> bool {
        self.commutators_and_powers == self.maximal_intersection
            && self.maximal_intersection == self.projection_kernel
    }

    pub fn index(&self) -> u64 {
        self.group_order / self.projection_kernel.len() as u64
    }
}

fn group_size(params: GroupParams) -> Result<u64> {
    params
        .group_order()
        .to_u64()
        .filter(|&s| s <= ORACLE_LIMIT)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "{params} has {} elements, oracle limit is {ORACLE_LIMIT}",
                params.group_order()
            ))
        })
}

/// Membership flags of the subgroup generated by `gens`, by breadth-first
/// closure under right multiplication. In a finite group this is the
/// generated subgroup.
fn closure(params: GroupParams, size: u64, gens: &[UtElement]) -> Vec<bool> {
    let mut member = vec![false; size as usize];
    let mut queue = VecDeque::new();
    let id = UtElement::identity(params);
    member[id.index() as usize] = true;
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = x.mul_unchecked(s);
            let k = y.index() as usize;
            if !member[k] {
                member[k] = true;
                queue.push_back(y);
            }
        }
    }
    member
}

fn elements_of(params: GroupParams, flags: &[bool]) -> Vec<UtElement> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(k, _)| UtElement::from_index(params, k as u64))
        .collect()
}

/// Order of the subgroup generated by `gens`.
pub fn generated_subgroup_size(params: GroupParams, gens: &[UtElement]) -> Result<u64> {
    let size = group_size(params)?;
    if gens.iter().any(|g| g.params() != params) {
        return Err(Error::ParamsMismatch);
    }
    Ok(closure(params, size, gens).iter().filter(|&&m| m).count() as u64)
}

/// Enumerates the group and computes Phi(G) as the subgroup generated by
/// commutators and p-th powers, and as the intersection of all maximal
/// subgroups. Maximal subgroups of a p-group are exactly the kernels of
/// surjections onto Z_p; these are found by trying every assignment of
/// values to the generators and keeping those that extend consistently
/// over the Cayley graph.
pub fn frattini_bruteforce(params: GroupParams) -> Result<FrattiniOracle> {
    let size = group_size(params)?;
    let f = params.field();
    let p = params.p();
    let all: Vec<UtElement> = (0..size).map(|k| UtElement::from_index(params, k)).collect();

    let mut gen_flags = vec![false; size as usize];
    for (ia, a) in all.iter().enumerate() {
        gen_flags[a.pow_u64(p).index() as usize] = true;
        for b in &all[ia + 1..] {
            gen_flags[a.commutator(b)?.index() as usize] = true;
        }
    }
    let derived_gens = elements_of(params, &gen_flags);
    let commutators_and_powers = elements_of(params, &closure(params, size, &derived_gens));

    let gens = generators(params);
    let table: Vec<Vec<usize>> = gens
        .iter()
        .map(|s| all.iter().map(|x| x.mul_unchecked(s).index() as usize).collect())
        .collect();
    let rank = gens.len();
    let mut intersection = vec![true; size as usize];
    let mut kernels: Vec<Vec<bool>> = Vec::new();
    let assignments = p.pow(rank as u32);
    for code in 1..assignments {
        let values: Vec<u64> = (0..rank).map(|i| code / p.pow(i as u32) % p).collect();
        let Some(h) = extend_homomorphism(&table, &values, f, size) else {
            continue;
        };
        let kernel: Vec<bool> = h.iter().map(|&v| v == 0).collect();
        if !kernels.contains(&kernel) {
            for (acc, &k) in intersection.iter_mut().zip(&kernel) {
                *acc &= k;
            }
            kernels.push(kernel);
        }
    }
    let maximal_intersection = elements_of(params, &intersection);

    let projection_kernel = all
        .iter()
        .filter(|a| frattini_project(a).is_zero())
        .cloned()
        .collect();

    Ok(FrattiniOracle {
        group_order: size,
        commutators_and_powers,
        maximal_intersection,
        projection_kernel,
        maximal_subgroups: kernels.len(),
    })
}

/// Tries to extend `x_i -> values[i]` to a homomorphism into (Z_p, +).
fn extend_homomorphism(
    table: &[Vec<usize>],
    values: &[u64],
    f: crate::ff::PrimeField,
    size: u64,
) -> Option<Vec<u64>> {
    let identity = 0usize;
    let mut h: Vec<Option<u64>> = vec![None; size as usize];
    h[identity] = Some(0);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        let hx = h[x].unwrap();
        for (s, row) in table.iter().enumerate() {
            let y = row[x];
            let want = f.add(hx, values[s]);
            match h[y] {
                None => {
                    h[y] = Some(want);
                    queue.push_back(y);
                }
                Some(v) if v != want => return None,
                Some(_) => {}
            }
        }
    }
    h.into_iter().collect()
}
