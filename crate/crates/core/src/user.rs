//! Combining a viewing history into one user vector, and the two ways of
//! scoring a candidate set against that history.
//!
//! Pairwise scoring keeps every history vector and takes each candidate's
//! best match: N kernel calls per candidate. User-vector scoring collapses
//! the history first (element-wise sum for floats, logical OR for bits)
//! and spends one kernel call per candidate. Both report how many kernel
//! invocations they made, which is the cost model under test.

use alloc::vec;
use alloc::vec::Vec;

use crate::{BitVector, Error, FeatureVector};

/// Sums float vectors element-wise and L2-normalizes the result.
///
/// An all-zero sum is returned unchanged (there is no direction to keep).
/// Accumulation happens in f64; the result is stored back as f32.
pub fn combine_float(vectors: &[FeatureVector]) -> Result<FeatureVector, Error> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    let mut sum = vec![0.0f64; dim];
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimMismatch { left: dim, right: v.dim() });
        }
        for (s, x) in sum.iter_mut().zip(v.values()) {
            *s += *x as f64;
        }
    }
    let norm = crate::sqrt(sum.iter().map(|x| x * x).sum());
    let mut out = FeatureVector::zero(dim);
    if norm > 0.0 {
        for (o, s) in out.values_mut().iter_mut().zip(&sum) {
            *o = (*s / norm) as f32;
        }
    }
    Ok(out)
}

/// ORs bit vectors word-wise; the popcount is recomputed for the result.
pub fn combine_bits(vectors: &[BitVector]) -> Result<BitVector, Error> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    let mut words = first.words().to_vec();
    for v in &vectors[1..] {
        if v.dim() != dim {
            return Err(Error::DimMismatch { left: dim, right: v.dim() });
        }
        for (w, x) in words.iter_mut().zip(v.words()) {
            *w |= *x;
        }
    }
    Ok(BitVector::from_raw_words(dim, words))
}

/// Candidate scores plus the exact number of kernel invocations spent.
#[derive(Debug, Clone, PartialEq)]
pub struct Scores {
    /// One score per candidate, in candidate order.
    pub scores: Vec<f64>,
    /// Kernel calls made: M*N for pairwise, M for user-vector scoring.
    pub comparisons: u64,
}

/// Scores each candidate by its best match over the whole history.
///
/// Maximum similarity stands in for smallest distance; kernels that
/// return distances should be negated by the caller. Costs exactly
/// `history.len() * candidates.len()` kernel calls, all made (no
/// short-circuiting), so the counter is the true cost.
pub fn score_pairwise<V, K>(history: &[V], candidates: &[V], mut kernel: K) -> Result<Scores, Error>
where
    K: FnMut(&V, &V) -> Result<f64, Error>,
{
    if history.is_empty() || candidates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut comparisons = 0u64;
    let mut scores = Vec::with_capacity(candidates.len());
    for candidate in candidates {
        let mut best = f64::NEG_INFINITY;
        for item in history {
            comparisons += 1;
            let s = kernel(item, candidate)?;
            if s > best {
                best = s;
            }
        }
        scores.push(best);
    }
    Ok(Scores { scores, comparisons })
}

/// Scores each candidate against one combined user vector: exactly
/// `candidates.len()` kernel calls.
pub fn score_user_vector<V, K>(user: &V, candidates: &[V], mut kernel: K) -> Result<Scores, Error>
where
    K: FnMut(&V, &V) -> Result<f64, Error>,
{
    if candidates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut scores = Vec::with_capacity(candidates.len());
    for candidate in candidates {
        scores.push(kernel(user, candidate)?);
    }
    Ok(Scores { scores, comparisons: candidates.len() as u64 })
}

/// A candidate with its score and 1-based position after sorting.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredCandidate<I> {
    pub rank: usize,
    pub item: I,
    pub score: f64,
}

/// Sorts candidates by descending score; ties break by ascending item id,
/// so the ordering is stable under any shuffle of the inputs.
pub fn rank<I>(scores: &[f64], items: &[I]) -> Result<Vec<ScoredCandidate<I>>, Error>
where
    I: Ord + Clone,
{
    if scores.len() != items.len() {
        return Err(Error::LengthMismatch { scores: scores.len(), items: items.len() });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&x, &y| scores[y].total_cmp(&scores[x]).then_with(|| items[x].cmp(&items[y])));
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(r, i)| ScoredCandidate { rank: r + 1, item: items[i].clone(), score: scores[i] })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::{cosine, ochiai};
    use crate::text::ngrams;
    use crate::{build_float_vector, HashConfig};

    fn unit(dim: usize, axis: usize) -> FeatureVector {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        FeatureVector::from_values(v)
    }

    fn bits(pattern: &str) -> BitVector {
        let mut v = BitVector::zero(pattern.len());
        for (i, c) in pattern.chars().enumerate() {
            if c == '1' {
                v.set(i);
            }
        }
        v
    }

    #[test]
    fn combine_float_single_unit_vector_is_identity() {
        let v = unit(4, 2);
        assert_eq!(combine_float(std::slice::from_ref(&v)).unwrap(), v);
    }

    #[test]
    fn combine_float_two_axes() {
        let got = combine_float(&[unit(4, 0), unit(4, 1)]).unwrap();
        let r = core::f32::consts::FRAC_1_SQRT_2;
        assert_eq!(got.values(), [r, r, 0.0, 0.0]);
    }

    #[test]
    fn combine_float_zero_sum_stays_zero() {
        let z = FeatureVector::zero(3);
        let got = combine_float(&[z.clone(), z.clone()]).unwrap();
        assert_eq!(got, z);
    }

    #[test]
    fn combine_float_many_title_vectors_is_unit_norm() {
        // 44 pseudo-random titles; the combined vector must be unit length.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        let config = HashConfig::default();
        let vectors: Vec<FeatureVector> = (0..44)
            .map(|_| {
                let len = rng.gen_range(20..=60);
                let title: String =
                    (0..len).map(|_| char::from(rng.gen_range(b'a'..=b'z'))).collect();
                build_float_vector(ngrams(&title, 5).unwrap(), &config)
            })
            .collect();
        let combined = combine_float(&vectors).unwrap();
        assert!((combined.l2_norm() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn combine_errors() {
        assert_eq!(combine_float(&[]), Err(Error::EmptyInput));
        assert_eq!(combine_bits(&[]), Err(Error::EmptyInput));
        assert_eq!(
            combine_float(&[FeatureVector::zero(4), FeatureVector::zero(5)]),
            Err(Error::DimMismatch { left: 4, right: 5 })
        );
        assert_eq!(
            combine_bits(&[BitVector::zero(4), BitVector::zero(5)]),
            Err(Error::DimMismatch { left: 4, right: 5 })
        );
    }

    #[test]
    fn combine_bits_is_or() {
        let got = combine_bits(&[bits("1100"), bits("1010")]).unwrap();
        assert_eq!(got, bits("1110"));
        assert_eq!(got.count_ones(), 3);
        let single = bits("0101");
        assert_eq!(combine_bits(std::slice::from_ref(&single)).unwrap(), single);
    }

    #[test]
    fn pairwise_takes_best_match() {
        let v = unit(4, 0);
        let w = unit(4, 1);
        let got = score_pairwise(std::slice::from_ref(&v), &[v.clone(), w], cosine).unwrap();
        assert_eq!(got.scores, [1.0, 0.0]);
        assert_eq!(got.comparisons, 2);
    }

    #[test]
    fn pairwise_comparison_count_is_m_times_n() {
        let h: Vec<BitVector> = (0..44).map(|_| bits("1001")).collect();
        let c: Vec<BitVector> = (0..100).map(|_| bits("1010")).collect();
        let got = score_pairwise(&h, &c, ochiai).unwrap();
        assert_eq!(got.comparisons, 4400);
    }

    #[test]
    fn pairwise_is_order_free_over_history() {
        let h1 = [bits("1100"), bits("0011"), bits("1010")];
        let h2 = [bits("1010"), bits("1100"), bits("0011")];
        let c = [bits("1000"), bits("0110"), bits("1111")];
        assert_eq!(
            score_pairwise(&h1, &c, ochiai).unwrap().scores,
            score_pairwise(&h2, &c, ochiai).unwrap().scores
        );
    }

    #[test]
    fn pairwise_empty_inputs_error() {
        let v = [bits("11")];
        assert_eq!(score_pairwise(&[], &v, ochiai), Err(Error::EmptyInput));
        assert_eq!(score_pairwise(&v, &[], ochiai), Err(Error::EmptyInput));
    }

    #[test]
    fn pairwise_propagates_dim_mismatch() {
        let got = score_pairwise(&[bits("11")], &[bits("101")], ochiai);
        assert_eq!(got, Err(Error::DimMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn user_vector_costs_one_call_per_candidate() {
        let user = bits("1100");
        let c: Vec<BitVector> = (0..100).map(|_| bits("0110")).collect();
        let got = score_user_vector(&user, &c, ochiai).unwrap();
        assert_eq!(got.comparisons, 100);
        assert_eq!(got.scores.len(), 100);
    }

    #[test]
    fn user_vector_self_match_scores_one() {
        let user = bits("1100");
        let got = score_user_vector(&user, &[bits("1100"), bits("0011")], ochiai).unwrap();
        assert_eq!(got.scores, [1.0, 0.0]);
    }

    #[test]
    fn single_item_or_reduces_to_self_similarity() {
        let item = bits("10110");
        let user = combine_bits(core::slice::from_ref(&item)).unwrap();
        let got = score_user_vector(&user, core::slice::from_ref(&item), ochiai).unwrap();
        assert_eq!(got.scores, [1.0]);
    }

    #[test]
    fn rank_orders_by_score() {
        let got = rank(&[0.2, 0.9, 0.5], &["a", "b", "c"]).unwrap();
        assert_eq!(got[0].item, "b");
        assert_eq!(got[0].rank, 1);
        assert_eq!(got[1].item, "c");
        assert_eq!(got[2].item, "a");
    }

    #[test]
    fn rank_breaks_ties_by_item_id() {
        let got = rank(&[0.5, 0.5, 0.5], &["z", "m", "a"]).unwrap();
        let order: Vec<&str> = got.iter().map(|s| s.item).collect();
        assert_eq!(order, ["a", "m", "z"]);
        let ranks: Vec<usize> = got.iter().map(|s| s.rank).collect();
        assert_eq!(ranks, [1, 2, 3]);
    }

    #[test]
    fn rank_length_mismatch_errors() {
        assert_eq!(
            rank(&[0.1, 0.2], &["only"]),
            Err(Error::LengthMismatch { scores: 2, items: 1 })
        );
    }
}
