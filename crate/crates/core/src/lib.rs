//! Binary codes correcting two edits.
//!
//! The crate provides the building blocks for studying codes over the
//! insertion/deletion/substitution channel at small lengths: packed bit
//! sequences and their transforms ([`bitseq`]), higher-order VT syndromes
//! ([`syndromes`]), local balance predicates ([`balance`]), error balls and a
//! channel simulator ([`balls`]), the code constructions as membership
//! predicates ([`codes`]), decoders ([`decode`]) and exhaustive verification
//! of correcting properties ([`verify`]).

pub mod balance;
pub mod balls;
pub mod bitseq;
pub mod codes;
pub mod decode;
mod error;
pub mod syndromes;
pub mod verify;

pub use bitseq::BitSeq;
pub use error::{Error, Result};
