//! List-decoding reconstruction for uniform tandem-duplication channels.
//!
//! A tandem duplication copies a fixed-length window of a string and inserts
//! the copy right after the original. This crate models that channel over
//! Z_q, maps descendant cones isometrically into integer lattices, works out
//! the exact combinatorics of how many reads make list reconstruction
//! certain, and implements the decoders themselves, with and without an
//! underlying error-correcting codebook. Brute-force oracles back every
//! closed form.

pub mod codes;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod reconstruct;
pub mod strings;
pub mod transform;
pub mod typicality;

pub use error::{Error, Result};
pub use strings::{Alphabet, Cone, GString};
