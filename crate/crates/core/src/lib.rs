//! Hashed character n-gram vectors for short-string similarity.
//!
//! Titles (or any short strings) are reduced to overlapping character
//! n-grams, each n-gram is hashed to an index modulo a fixed dimension,
//! and the result is stored either as a dense count vector
//! ([`FeatureVector`], 32-bit floats) or as a packed bit vector
//! ([`BitVector`], one presence bit per dimension, 32x smaller).
//!
//! Bit vectors keep the cosine geometry: for binary inputs the cosine
//! reduces to `popcnt(a & b) / sqrt(popcnt(a) * popcnt(b))` (the Ochiai
//! coefficient), which runs on packed words with hardware popcount.
//! [`user`] adds the two ways of scoring a candidate set against a
//! viewing history: pairwise best-match, or a single combined history
//! vector (element-wise sum for floats, logical OR for bits).
//!
//! The crate is `no_std`-compatible (`alloc` required); disable the
//! default `std` feature for embedded use. The `std` feature only adds
//! `std::error::Error` impls and runtime CPU feature detection for the
//! popcount kernels.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod codec;
mod error;
mod popcount;
pub mod similarity;
pub mod text;
pub mod user;
pub mod vector;

pub use error::Error;
pub use vector::{
    build_bit_vector, build_float_vector, hash_feature, BitVector, FeatureVector, HashConfig,
};

/// Library version, echoed into report headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// f64 square root that also works without std.
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sqrt()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sqrt(x)
    }
}
