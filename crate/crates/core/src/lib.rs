//! A McEliece-type public-key scheme built on a convolutional encoder.
//!
//! The public generator `G'(D) = S(D) G T^-1(D, D^-1)` hides a generalized
//! Reed–Solomon generator `G` behind a Laurent-polynomial scrambler `S(D)` and
//! a structured unimodular mask `T(D, D^-1)`. Ciphertexts are sequences of
//! blocks; decryption unmasks with `T`, decodes each block and back-substitutes
//! through `S`.

pub mod analysis;
pub mod crypto;
pub mod field;
pub mod grs;
pub mod keygen;
pub mod laurent;
pub mod matrix;

pub use crypto::{decrypt, encrypt, Ciphertext, CryptoError, ErrorPattern, Schedule};
pub use field::{Field, FieldElement, FieldError};
pub use grs::{DecodeFailure, GrsCode};
pub use keygen::{keygen, KeyParams, KeygenError, PublicKey, SecretKey};
pub use laurent::{BlockSequence, LaurentMatrix, LaurentPoly};
pub use matrix::Matrix;
