//! Hashed feature vectors: float counts and packed presence bits.
//!
//! Features are hashed with XXH64 (seeded) and reduced modulo the vector
//! length, so the same feature lands on the same index across runs,
//! platforms, and processes. The float builder accumulates counts; the bit
//! builder records presence, making duplicates idempotent.

use alloc::vec;
use alloc::vec::Vec;

use xxhash_rust::xxh64::xxh64;

use crate::popcount;

/// Default vector length. Short of this, hash collisions start to erase
/// the signal carried by title n-grams.
pub const DEFAULT_DIM: usize = 8000;

/// Seed fed to the sign hash so it stays decorrelated from the index hash.
const SIGN_SEED_XOR: u64 = 0x9E37_79B9_7F4A_7C15;

/// Hashing parameters shared by every vector in an experiment.
///
/// Two vectors are only comparable when built with equal configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashConfig {
    /// Vector length d. Must be at least 1.
    pub dim: usize,
    /// XXH64 seed; vary it to re-roll the collision pattern.
    pub seed: u64,
    /// When set, float increments become ±1 chosen by an independent hash
    /// bit. Bit vectors ignore this: presence has no sign.
    pub sign_hash: bool,
}

impl Default for HashConfig {
    fn default() -> Self {
        HashConfig { dim: DEFAULT_DIM, seed: 0, sign_hash: false }
    }
}

impl HashConfig {
    /// Config with the given dimension and default seed, no sign hash.
    pub fn with_dim(dim: usize) -> Self {
        HashConfig { dim, ..HashConfig::default() }
    }
}

/// Index of `feature` in a vector of length `config.dim`.
///
/// XXH64 of the feature's UTF-8 bytes, seeded, reduced modulo the
/// dimension. Panics if `config.dim` is 0.
pub fn hash_feature(feature: &str, config: &HashConfig) -> usize {
    assert!(config.dim > 0, "vector dimension must be at least 1");
    (xxh64(feature.as_bytes(), config.seed) % config.dim as u64) as usize
}

fn feature_sign(feature: &str, config: &HashConfig) -> f32 {
    let h = xxh64(feature.as_bytes(), config.seed ^ SIGN_SEED_XOR);
    if h & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Dense float vector of hashed feature counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f32>,
}

impl FeatureVector {
    /// All-zero vector of length `dim`.
    pub fn zero(dim: usize) -> Self {
        FeatureVector { values: vec![0.0; dim] }
    }

    /// Wraps raw values; the dimension is the slice length.
    pub fn from_values(values: Vec<f32>) -> Self {
        FeatureVector { values }
    }

    /// 0.0/1.0 expansion of a bit vector, same dimension.
    pub fn from_bits(bits: &BitVector) -> Self {
        let mut values = vec![0.0; bits.dim()];
        for (i, v) in values.iter_mut().enumerate() {
            if bits.get(i) {
                *v = 1.0;
            }
        }
        FeatureVector { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f32] {
        &mut self.values
    }

    /// Sum of absolute values, accumulated in f64.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs() as f64).sum()
    }

    /// Euclidean norm, accumulated in f64.
    pub fn l2_norm(&self) -> f64 {
        crate::sqrt(self.values.iter().map(|v| (*v as f64) * (*v as f64)).sum())
    }

    /// Fraction of nonzero elements; the float analogue of bit density.
    pub fn nonzero_fraction(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        let nonzero = self.values.iter().filter(|v| **v != 0.0).count();
        nonzero as f64 / self.values.len() as f64
    }
}

/// Presence bits packed into u64 words, with a cached popcount.
///
/// Word 0 bit 0 is logical index 0. Padding bits past `dim` in the final
/// word are always zero, so word-wise popcount loops need no edge handling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    dim: usize,
    words: Vec<u64>,
    ones: u64,
}

/// Packed words needed for `dim` logical bits.
pub(crate) fn words_for(dim: usize) -> usize {
    dim.div_ceil(64)
}

impl BitVector {
    /// All-clear vector of length `dim`.
    pub fn zero(dim: usize) -> Self {
        BitVector { dim, words: vec![0; words_for(dim)], ones: 0 }
    }

    /// Builds from packed words, masking any set padding bits and
    /// recounting. `words` must be exactly the packed length for `dim`.
    pub(crate) fn from_raw_words(dim: usize, mut words: Vec<u64>) -> Self {
        assert_eq!(words.len(), words_for(dim));
        if !dim.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (dim % 64)) - 1;
            }
        }
        let ones = popcount::ones(&words);
        BitVector { dim, words, ones }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Cached count of set bits; maintained by `set`, never recomputed.
    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.dim, "bit {index} out of range for dim {}", self.dim);
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    /// Sets a bit; counts it only if it was clear.
    pub fn set(&mut self, index: usize) {
        assert!(index < self.dim, "bit {index} out of range for dim {}", self.dim);
        let mask = 1u64 << (index % 64);
        let word = &mut self.words[index / 64];
        if *word & mask == 0 {
            *word |= mask;
            self.ones += 1;
        }
    }

    /// Set-bit fraction: popcount / dim. High density means saturation,
    /// and a saturated vector scores everything as similar.
    pub fn density(&self) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        self.ones as f64 / self.dim as f64
    }
}

/// Accumulates hashed feature counts into a float vector.
///
/// Duplicate features add up. With `sign_hash` on, each feature
/// contributes ±1 instead of +1.
pub fn build_float_vector<I>(features: I, config: &HashConfig) -> FeatureVector
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut v = FeatureVector::zero(config.dim);
    for feature in features {
        let feature = feature.as_ref();
        let idx = hash_feature(feature, config);
        let delta = if config.sign_hash { feature_sign(feature, config) } else { 1.0 };
        v.values[idx] += delta;
    }
    v
}

/// Sets the hashed index bit for each feature. Duplicates are idempotent:
/// a feature is either present or absent.
pub fn build_bit_vector<I>(features: I, config: &HashConfig) -> BitVector
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut v = BitVector::zero(config.dim);
    for feature in features {
        v.set(hash_feature(feature.as_ref(), config));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use alloc::string::String;

    // Pins the hash identity: XXH64 with seed 0 of the empty input.
    #[test]
    fn xxh64_known_answer() {
        assert_eq!(xxh64(b"", 0), 0xEF46_DB37_51D8_E999);
    }

    // Golden value, computed once from this implementation and frozen.
    // A change here means hashed vector files are no longer readable.
    #[test]
    fn hash_feature_golden() {
        let config = HashConfig::default();
        assert_eq!(hash_feature("hello", &config), GOLDEN_HELLO_INDEX);
    }

    const GOLDEN_HELLO_INDEX: usize = 2659;

    #[test]
    fn hash_feature_deterministic_and_in_range() {
        let config = HashConfig { dim: 97, seed: 42, sign_hash: false };
        for f in ["a", "hello", "größe", " spaces "] {
            let i = hash_feature(f, &config);
            assert_eq!(i, hash_feature(f, &config));
            assert!(i < config.dim);
        }
    }

    #[test]
    fn hash_feature_dim_one_is_zero() {
        let config = HashConfig { dim: 1, seed: 9, sign_hash: false };
        assert_eq!(hash_feature("anything", &config), 0);
    }

    #[test]
    fn build_float_empty_is_zero() {
        let v = build_float_vector([] as [&str; 0], &HashConfig::default());
        assert_eq!(v.dim(), DEFAULT_DIM);
        assert!(v.values().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn build_float_duplicates_accumulate() {
        let config = HashConfig::default();
        let v = build_float_vector(["x", "x"], &config);
        let nonzero: Vec<f32> = v.values().iter().copied().filter(|x| *x != 0.0).collect();
        assert_eq!(nonzero, [2.0]);
    }

    #[test]
    fn build_float_matches_count_dictionary() {
        // Brute-force oracle: count features in a map, then place the
        // counts through hash_feature.
        let config = HashConfig::with_dim(8000);
        let features = ["hel", "ell", "llo"];
        let v = build_float_vector(features, &config);
        assert_eq!(v.l1_norm(), 3.0);

        let mut counts: BTreeMap<usize, f32> = BTreeMap::new();
        for f in features {
            *counts.entry(hash_feature(f, &config)).or_default() += 1.0;
        }
        let mut expect = FeatureVector::zero(config.dim);
        for (i, c) in counts {
            expect.values_mut()[i] = c;
        }
        assert_eq!(v, expect);
    }

    #[test]
    fn sign_hash_yields_plus_minus_one() {
        let config = HashConfig { dim: 50, seed: 3, sign_hash: true };
        // Enough features that both signs almost surely appear.
        let features: Vec<String> = (0..64).map(|i| alloc::format!("f{i}")).collect();
        let v = build_float_vector(&features, &config);
        assert!(v.values().iter().all(|x| x.fract() == 0.0));
        let mut signs = [false, false];
        for f in &features {
            let s = feature_sign(f, &config);
            assert!(s == 1.0 || s == -1.0);
            signs[(s < 0.0) as usize] = true;
        }
        assert_eq!(signs, [true, true]);
    }

    #[test]
    fn build_bit_empty_and_duplicates() {
        let config = HashConfig::default();
        let empty = build_bit_vector([] as [&str; 0], &config);
        assert_eq!(empty.count_ones(), 0);
        let dup = build_bit_vector(["hel", "hel"], &config);
        assert_eq!(dup.count_ones(), 1);
    }

    #[test]
    fn build_bit_popcount_equals_distinct_indices() {
        let config = HashConfig::with_dim(8000);
        let features = ["hel", "ell", "llo"];
        let v = build_bit_vector(features, &config);
        let distinct: alloc::collections::BTreeSet<usize> =
            features.iter().map(|f| hash_feature(f, &config)).collect();
        assert!(v.count_ones() <= 3);
        assert_eq!(v.count_ones() as usize, distinct.len());
        for i in 0..config.dim {
            assert_eq!(v.get(i), distinct.contains(&i));
        }
    }

    #[test]
    fn set_and_get_maintain_count() {
        let mut v = BitVector::zero(130);
        v.set(0);
        v.set(64);
        v.set(129);
        v.set(129);
        assert_eq!(v.count_ones(), 3);
        assert!(v.get(0) && v.get(64) && v.get(129));
        assert!(!v.get(1));
        assert_eq!(v.density(), 3.0 / 130.0);
    }

    #[test]
    fn from_raw_words_masks_padding() {
        // dim 70: the final word holds 6 logical bits, the rest is padding
        // that must vanish.
        let v = BitVector::from_raw_words(70, vec![0, u64::MAX]);
        assert_eq!(v.count_ones(), 6);
        assert_eq!(v.words()[1], 0b11_1111);
    }

    #[test]
    fn from_bits_expands_to_indicator() {
        let mut b = BitVector::zero(5);
        b.set(1);
        b.set(4);
        let f = FeatureVector::from_bits(&b);
        assert_eq!(f.values(), [0.0, 1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn norms_and_density() {
        let v = FeatureVector::from_values(vec![3.0, -4.0, 0.0, 0.0]);
        assert_eq!(v.l1_norm(), 7.0);
        assert_eq!(v.l2_norm(), 5.0);
        assert_eq!(v.nonzero_fraction(), 0.5);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use alloc::string::String;
    use proptest::prelude::*;

    fn feature_lists() -> impl Strategy<Value = Vec<String>> {
        proptest::collection::vec("[a-z ]{1,8}", 0..60)
    }

    proptest! {
        // Bit i is set exactly when the float count at i is positive
        // (sign hash off, so counts cannot cancel).
        #[test]
        fn bit_set_iff_float_positive(features in feature_lists(), dim in 1usize..512) {
            let config = HashConfig { dim, seed: 1, sign_hash: false };
            let fv = build_float_vector(&features, &config);
            let bv = build_bit_vector(&features, &config);
            for i in 0..dim {
                prop_assert_eq!(bv.get(i), fv.values()[i] > 0.0);
            }
        }

        #[test]
        fn popcount_bounded_by_feature_counts(features in feature_lists()) {
            let config = HashConfig::with_dim(509);
            let bv = build_bit_vector(&features, &config);
            let distinct: alloc::collections::BTreeSet<&str> =
                features.iter().map(|s| s.as_str()).collect();
            prop_assert!(bv.count_ones() as usize <= features.len());
            prop_assert!(bv.count_ones() as usize <= distinct.len());
        }

        #[test]
        fn builds_are_pure(features in feature_lists(), seed in any::<u64>()) {
            let config = HashConfig { dim: 777, seed, sign_hash: false };
            prop_assert_eq!(
                build_float_vector(&features, &config),
                build_float_vector(&features, &config)
            );
            prop_assert_eq!(
                build_bit_vector(&features, &config),
                build_bit_vector(&features, &config)
            );
        }

        // Float L1 norm equals the feature count when signs are off.
        #[test]
        fn l1_norm_counts_features(features in feature_lists()) {
            let config = HashConfig::with_dim(251);
            let fv = build_float_vector(&features, &config);
            prop_assert_eq!(fv.l1_norm(), features.len() as f64);
        }
    }
}
