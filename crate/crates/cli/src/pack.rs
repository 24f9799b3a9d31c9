//! Demo packing of short byte strings into group elements.
//!
//! The block is `[len, data..., zero padding]` of `capacity + 1` bytes, read
//! as a big-endian integer and written in base p over all strictly upper
//! entries (canonical order, least significant digit first). Every entry is
//! used, so the first superdiagonal digits are exactly what the quotient
//! attack recovers without the full key.

use num_bigint::BigUint;

use mor_core::utgroup::{GroupParams, UtElement};
use mor_core::{Error, Result};

/// Largest `c` with `256^(c+1) <= p^N`, capped so the length fits a byte.
pub fn capacity(params: GroupParams) -> usize {
    let space = params.group_order();
    let mut c = 0usize;
    while c < 255 && BigUint::from(256u32).pow(c as u32 + 2) <= space {
        c += 1;
    }
    c
}

pub fn pack(params: GroupParams, data: &[u8]) -> Result<UtElement> {
    let cap = capacity(params);
    if data.len() > cap {
        return Err(Error::Validation(format!(
            "{} bytes do not fit: capacity is {cap} bytes for {params}",
            data.len()
        )));
    }
    let mut block = vec![0u8; cap + 1];
    block[0] = data.len() as u8;
    block[1..=data.len()].copy_from_slice(data);
    let mut x = BigUint::from_bytes_be(&block);
    let p = BigUint::from(params.p());
    let digits: Vec<u64> = (0..params.root_count())
        .map(|_| {
            let d = &x % &p;
            x /= &p;
            d.try_into().expect("digit below p")
        })
        .collect();
    UtElement::from_canonical(params, &digits)
}

pub fn unpack(a: &UtElement) -> Result<Vec<u8>> {
    let params = a.params();
    let cap = capacity(params);
    let p = BigUint::from(params.p());
    let x = a
        .entries()
        .iter()
        .rev()
        .fold(BigUint::default(), |acc, &d| acc * &p + d);
    let bad = || Error::Validation("element does not hold packed bytes".into());
    let bytes = x.to_bytes_be();
    if bytes.len() > cap + 1 {
        return Err(bad());
    }
    let mut block = vec![0u8; cap + 1 - bytes.len()];
    block.extend_from_slice(&bytes);
    let len = block[0] as usize;
    if len > cap {
        return Err(bad());
    }
    Ok(block[1..=len].to_vec())
}
