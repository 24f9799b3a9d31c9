//! The MOR cryptosystem over UT(n, p).
//!
//! Public key `(phi, phi^m)`, private key `m`, ciphertext
//! `(phi^r, phi^(mr)(a))`. Raw primitive: no padding, no integrity, and the
//! ciphertext is malleable.

mod format;
mod keys;

pub use format::{
    automorphism_from_value, automorphism_to_value, element_from_value, element_to_value,
    message_from_json, message_to_json, params_from_value, params_to_value,
};
pub use keys::{
    decrypt, encrypt, encrypt_with_r, keygen, keypair_from, Ciphertext, KeyFamily, PrivateKey,
    PublicKey, KEYGEN_ATTEMPTS,
};
