//! Similarity kernels over float and bit vectors.
//!
//! The bit kernels are the point of the crate: for binary vectors the
//! cosine collapses to `popcnt(a & b) / sqrt(popcnt(a) * popcnt(b))`
//! (Ochiai), replacing a float dot product with word-wise AND plus
//! popcount against cached totals. None of the kernels allocate.

use crate::popcount;
use crate::{BitVector, Error, FeatureVector};

fn check_dims(left: usize, right: usize) -> Result<(), Error> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimMismatch { left, right })
    }
}

/// Cosine similarity `dot(a,b) / (|a|*|b|)`, accumulated in f64.
///
/// Returns 0.0 if either vector is all zero. The loop keeps four partial
/// sums per term; the summation order is fixed, so results are
/// reproducible across runs and platforms.
pub fn cosine(a: &FeatureVector, b: &FeatureVector) -> Result<f64, Error> {
    check_dims(a.dim(), b.dim())?;
    let (av, bv) = (a.values(), b.values());
    let mut dot = [0.0f64; 4];
    let mut na = [0.0f64; 4];
    let mut nb = [0.0f64; 4];
    let mut ac = av.chunks_exact(4);
    let mut bc = bv.chunks_exact(4);
    for (ca, cb) in (&mut ac).zip(&mut bc) {
        for k in 0..4 {
            let x = ca[k] as f64;
            let y = cb[k] as f64;
            dot[k] += x * y;
            na[k] += x * x;
            nb[k] += y * y;
        }
    }
    for (x, y) in ac.remainder().iter().zip(bc.remainder()) {
        let x = *x as f64;
        let y = *y as f64;
        dot[0] += x * y;
        na[0] += x * x;
        nb[0] += y * y;
    }
    let dot: f64 = dot.iter().sum();
    let na: f64 = na.iter().sum();
    let nb: f64 = nb.iter().sum();
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    // One sqrt of the product, not a product of sqrts: keeps clean cases
    // like 1/sqrt(2*2) exact.
    Ok(dot / crate::sqrt(na * nb))
}

/// Ochiai coefficient: the cosine of two {0,1} vectors.
///
/// `popcnt(a & b) / sqrt(popcnt(a) * popcnt(b))`, using the cached
/// popcounts for the denominator. Returns 0.0 if either vector is empty.
pub fn ochiai(a: &BitVector, b: &BitVector) -> Result<f64, Error> {
    check_dims(a.dim(), b.dim())?;
    let pa = a.count_ones();
    let pb = b.count_ones();
    if pa == 0 || pb == 0 {
        return Ok(0.0);
    }
    let inter = popcount::and(a.words(), b.words());
    Ok(inter as f64 / crate::sqrt(pa as f64 * pb as f64))
}

/// Hamming distance: number of positions where the vectors differ.
///
/// A distance, not a similarity; negate it when ranking by it.
pub fn hamming(a: &BitVector, b: &BitVector) -> Result<u64, Error> {
    check_dims(a.dim(), b.dim())?;
    Ok(popcount::xor(a.words(), b.words()))
}

/// Jaccard coefficient `|a & b| / |a | b|`; 0.0 when the union is empty.
pub fn jaccard(a: &BitVector, b: &BitVector) -> Result<f64, Error> {
    check_dims(a.dim(), b.dim())?;
    let (inter, union) = popcount::and_or(a.words(), b.words());
    if union == 0 {
        return Ok(0.0);
    }
    Ok(inter as f64 / union as f64)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    prop_compose! {
        fn bit_pair()(dim in 1usize..300)(
            dim in Just(dim),
            ia in proptest::collection::vec(0..dim, 0..80),
            ib in proptest::collection::vec(0..dim, 0..80),
        ) -> (BitVector, BitVector) {
            let mut a = BitVector::zero(dim);
            for i in ia { a.set(i); }
            let mut b = BitVector::zero(dim);
            for i in ib { b.set(i); }
            (a, b)
        }
    }

    proptest! {
        // The anchor property: Ochiai over bits equals cosine over the
        // same bits expanded to 0.0/1.0 floats.
        #[test]
        fn ochiai_is_cosine_of_indicators((a, b) in bit_pair()) {
            let oc = ochiai(&a, &b).unwrap();
            let cs = cosine(&FeatureVector::from_bits(&a), &FeatureVector::from_bits(&b)).unwrap();
            prop_assert!((oc - cs).abs() <= 1e-6, "ochiai {oc} vs cosine {cs}");
        }

        #[test]
        fn kernels_are_symmetric((a, b) in bit_pair()) {
            prop_assert_eq!(ochiai(&a, &b).unwrap(), ochiai(&b, &a).unwrap());
            prop_assert_eq!(hamming(&a, &b).unwrap(), hamming(&b, &a).unwrap());
            prop_assert_eq!(jaccard(&a, &b).unwrap(), jaccard(&b, &a).unwrap());
            let (fa, fb) = (FeatureVector::from_bits(&a), FeatureVector::from_bits(&b));
            prop_assert_eq!(cosine(&fa, &fb).unwrap(), cosine(&fb, &fa).unwrap());
        }

        #[test]
        fn kernel_ranges((a, b) in bit_pair()) {
            let oc = ochiai(&a, &b).unwrap();
            let jc = jaccard(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&oc));
            prop_assert!((0.0..=1.0).contains(&jc));
            prop_assert!(hamming(&a, &b).unwrap() <= a.dim() as u64);
        }

        // Word loops against bit-by-bit set arithmetic; catches any
        // padding-bit leak into the popcounts.
        #[test]
        fn word_loops_match_bitwise_oracle((a, b) in bit_pair()) {
            let mut inter = 0u64;
            let mut union = 0u64;
            let mut diff = 0u64;
            for i in 0..a.dim() {
                match (a.get(i), b.get(i)) {
                    (true, true) => { inter += 1; union += 1; }
                    (false, false) => {}
                    _ => { union += 1; diff += 1; }
                }
            }
            prop_assert_eq!(hamming(&a, &b).unwrap(), diff);
            let expect_j = if union == 0 { 0.0 } else { inter as f64 / union as f64 };
            prop_assert_eq!(jaccard(&a, &b).unwrap(), expect_j);
            let expect_o = if a.count_ones() == 0 || b.count_ones() == 0 {
                0.0
            } else {
                inter as f64 / (a.count_ones() as f64 * b.count_ones() as f64).sqrt()
            };
            prop_assert_eq!(ochiai(&a, &b).unwrap(), expect_o);
        }
    }
}
