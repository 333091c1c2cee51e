//! The purchase-prediction experiment: vectorize every case, score its
//! recall set by the configured strategy, rank, and accumulate top-k
//! accuracy, comparison counts, and density diagnostics.
//!
//! Scoring wall time is measured separately from vectorization so the
//! kernel/strategy cost comparison is not polluted by hashing cost; the
//! report carries both.

use std::time::Instant;

use rayon::prelude::*;

use bitgram_core::similarity::{cosine, hamming, jaccard, ochiai};
use bitgram_core::text::{ngrams, normalize};
use bitgram_core::user::{
    combine_bits, combine_float, rank, score_pairwise, score_user_vector, Scores,
};
use bitgram_core::{build_bit_vector, build_float_vector, BitVector, FeatureVector, HashConfig};

use crate::dataset::{Dataset, EvalCase};
use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Pairwise,
    UserVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Float,
    Bit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Cosine,
    Ochiai,
    Hamming,
    Jaccard,
}

impl Kernel {
    fn name(&self) -> &'static str {
        match self {
            Kernel::Cosine => "cosine",
            Kernel::Ochiai => "ochiai",
            Kernel::Hamming => "hamming",
            Kernel::Jaccard => "jaccard",
        }
    }
}

/// One report row's worth of configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodSpec {
    pub strategy: Strategy,
    pub element: Element,
    pub kernel: Kernel,
    pub hash: HashConfig,
}

impl MethodSpec {
    /// Row label, e.g. "pairwise float" or "user-vec 1-bit (hamming)".
    /// The kernel is only spelled out when it is not the element default.
    pub fn label(&self) -> String {
        let strategy = match self.strategy {
            Strategy::Pairwise => "pairwise",
            Strategy::UserVector => "user-vec",
        };
        let element = match self.element {
            Element::Float => "float",
            Element::Bit => "1-bit",
        };
        let default_kernel = matches!(
            (self.element, self.kernel),
            (Element::Float, Kernel::Cosine) | (Element::Bit, Kernel::Ochiai)
        );
        if default_kernel {
            format!("{strategy} {element}")
        } else {
            format!("{strategy} {element} ({})", self.kernel.name())
        }
    }

    /// Serialized payload bytes per vector at this method's dimension.
    pub fn payload_bytes(&self) -> usize {
        match self.element {
            Element::Float => bitgram_core::codec::float_payload_len(self.hash.dim),
            Element::Bit => bitgram_core::codec::bit_payload_len(self.hash.dim),
        }
    }

    pub fn validate(&self) -> Result<(), AppError> {
        let compatible = match self.element {
            Element::Float => self.kernel == Kernel::Cosine,
            Element::Bit => self.kernel != Kernel::Cosine,
        };
        if !compatible {
            return Err(AppError::Config(format!(
                "kernel {} cannot score {} vectors",
                self.kernel.name(),
                match self.element {
                    Element::Float => "float",
                    Element::Bit => "1-bit",
                }
            )));
        }
        if self.hash.dim == 0 {
            return Err(AppError::Config("dim must be at least 1".into()));
        }
        Ok(())
    }
}

/// Aggregated results for one method over all cases.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub label: String,
    pub dim: usize,
    /// Serialized payload bytes per item vector.
    pub size_bytes: usize,
    /// Wall seconds spent scoring and ranking.
    pub score_sec: f64,
    /// Wall seconds spent building vectors (and user vectors).
    pub vectorize_sec: f64,
    pub top1: f64,
    pub top5: f64,
    pub top10: f64,
    pub mean_comparisons: f64,
    /// Mean user-vector density (bit) or nonzero fraction (float).
    /// Pairwise strategies build no user vector and report 0.
    pub mean_density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<MethodResult>,
    pub cases: usize,
}

/// Fraction of cases whose purchased item landed within the first `k`
/// ranks. Ranks are 1-based.
pub fn topk_accuracy(purchased_ranks: &[usize], k: usize) -> f64 {
    debug_assert!(k >= 1);
    if purchased_ranks.is_empty() {
        return 0.0;
    }
    let hits = purchased_ranks.iter().filter(|&&r| r <= k).count();
    hits as f64 / purchased_ranks.len() as f64
}

struct CaseOutcome {
    purchased_rank: usize,
    comparisons: u64,
    density: f64,
    vectorize_ns: u64,
    score_ns: u64,
}

/// Runs every method over every case. All methods are validated before
/// any work starts; rows come back in method order.
pub fn run_experiment(
    dataset: &Dataset,
    methods: &[MethodSpec],
    ngram: usize,
    parallel: bool,
) -> Result<EvalReport, AppError> {
    if methods.is_empty() {
        return Err(AppError::Config("no methods selected".into()));
    }
    if ngram == 0 {
        return Err(AppError::Config("ngram must be at least 1".into()));
    }
    for m in methods {
        m.validate()?;
    }
    if dataset.cases.is_empty() {
        return Err(AppError::Data("dataset has no evaluation cases".into()));
    }

    let mut rows = Vec::with_capacity(methods.len());
    for method in methods {
        rows.push(run_method(dataset, method, ngram, parallel)?);
    }
    Ok(EvalReport { rows, cases: dataset.cases.len() })
}

fn run_method(
    dataset: &Dataset,
    method: &MethodSpec,
    ngram: usize,
    parallel: bool,
) -> Result<MethodResult, AppError> {
    let run = |case: &EvalCase| run_case(dataset, case, method, ngram);
    let outcomes: Result<Vec<CaseOutcome>, AppError> = if parallel {
        dataset.cases.par_iter().map(run).collect()
    } else {
        dataset.cases.iter().map(run).collect()
    };
    let outcomes = outcomes?;

    // Serial aggregation in case order keeps every derived number
    // identical whether or not the cases ran in parallel.
    let cases = outcomes.len() as f64;
    let ranks: Vec<usize> = outcomes.iter().map(|o| o.purchased_rank).collect();
    let comparisons: u64 = outcomes.iter().map(|o| o.comparisons).sum();
    let density: f64 = outcomes.iter().map(|o| o.density).sum();
    let vectorize_ns: u64 = outcomes.iter().map(|o| o.vectorize_ns).sum();
    let score_ns: u64 = outcomes.iter().map(|o| o.score_ns).sum();

    Ok(MethodResult {
        label: method.label(),
        dim: method.hash.dim,
        size_bytes: method.payload_bytes(),
        score_sec: score_ns as f64 / 1e9,
        vectorize_sec: vectorize_ns as f64 / 1e9,
        top1: topk_accuracy(&ranks, 1),
        top5: topk_accuracy(&ranks, 5),
        top10: topk_accuracy(&ranks, 10),
        mean_comparisons: comparisons as f64 / cases,
        mean_density: density / cases,
    })
}

fn run_case(
    dataset: &Dataset,
    case: &EvalCase,
    method: &MethodSpec,
    ngram: usize,
) -> Result<CaseOutcome, AppError> {
    let features = |index: u32| -> Result<Vec<String>, AppError> {
        let normalized = normalize(&dataset.item(index).title);
        let grams = ngrams(&normalized, ngram).map_err(|e| AppError::Config(e.to_string()))?;
        Ok(grams.into_iter().map(str::to_owned).collect())
    };

    let t_vec = Instant::now();
    let (history_f, candidates_f, history_b, candidates_b) = match method.element {
        Element::Float => {
            let h: Vec<FeatureVector> = case
                .history
                .iter()
                .map(|&i| Ok(build_float_vector(features(i)?, &method.hash)))
                .collect::<Result<_, AppError>>()?;
            let c: Vec<FeatureVector> = case
                .candidates
                .iter()
                .map(|&i| Ok(build_float_vector(features(i)?, &method.hash)))
                .collect::<Result<_, AppError>>()?;
            (h, c, Vec::new(), Vec::new())
        }
        Element::Bit => {
            let h: Vec<BitVector> = case
                .history
                .iter()
                .map(|&i| Ok(build_bit_vector(features(i)?, &method.hash)))
                .collect::<Result<_, AppError>>()?;
            let c: Vec<BitVector> = case
                .candidates
                .iter()
                .map(|&i| Ok(build_bit_vector(features(i)?, &method.hash)))
                .collect::<Result<_, AppError>>()?;
            (Vec::new(), Vec::new(), h, c)
        }
    };

    // User vectors are part of vectorization cost, not scoring cost.
    let internal = |e: bitgram_core::Error| AppError::Data(format!("internal: {e}"));
    let (user_f, user_b, density) = match (method.strategy, method.element) {
        (Strategy::UserVector, Element::Float) => {
            let u = combine_float(&history_f).map_err(internal)?;
            let d = u.nonzero_fraction();
            (Some(u), None, d)
        }
        (Strategy::UserVector, Element::Bit) => {
            let u = combine_bits(&history_b).map_err(internal)?;
            let d = u.density();
            (None, Some(u), d)
        }
        (Strategy::Pairwise, _) => (None, None, 0.0),
    };
    let vectorize_ns = t_vec.elapsed().as_nanos() as u64;

    let t_score = Instant::now();
    let scores: Scores = match method.element {
        Element::Float => match method.strategy {
            Strategy::Pairwise => {
                score_pairwise(&history_f, &candidates_f, cosine).map_err(internal)?
            }
            Strategy::UserVector => {
                score_user_vector(user_f.as_ref().unwrap(), &candidates_f, cosine)
                    .map_err(internal)?
            }
        },
        Element::Bit => {
            let kernel = |a: &BitVector, b: &BitVector| match method.kernel {
                Kernel::Ochiai => ochiai(a, b),
                // Distance, negated so that higher is always better.
                Kernel::Hamming => hamming(a, b).map(|d| -(d as f64)),
                Kernel::Jaccard => jaccard(a, b),
                Kernel::Cosine => unreachable!("validated"),
            };
            match method.strategy {
                Strategy::Pairwise => {
                    score_pairwise(&history_b, &candidates_b, kernel).map_err(internal)?
                }
                Strategy::UserVector => {
                    score_user_vector(user_b.as_ref().unwrap(), &candidates_b, kernel)
                        .map_err(internal)?
                }
            }
        }
    };

    let candidate_ids: Vec<&str> =
        case.candidates.iter().map(|&i| dataset.item(i).item_id.as_str()).collect();
    let ranked = rank(&scores.scores, &candidate_ids).map_err(internal)?;
    let purchased_id = dataset.item(case.purchased).item_id.as_str();
    let purchased_rank = ranked
        .iter()
        .find(|s| s.item == purchased_id)
        .map(|s| s.rank)
        .expect("purchased item is always a candidate");
    let score_ns = t_score.elapsed().as_nanos() as u64;

    Ok(CaseOutcome {
        purchased_rank,
        comparisons: scores.comparisons,
        density,
        vectorize_ns,
        score_ns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Item;
    use crate::synth::{generate, SynthConfig};

    fn spec(strategy: Strategy, element: Element, dim: usize) -> MethodSpec {
        let kernel = match element {
            Element::Float => Kernel::Cosine,
            Element::Bit => Kernel::Ochiai,
        };
        MethodSpec { strategy, element, kernel, hash: HashConfig::with_dim(dim) }
    }

    fn all_methods(dim: usize) -> Vec<MethodSpec> {
        vec![
            spec(Strategy::Pairwise, Element::Float, dim),
            spec(Strategy::Pairwise, Element::Bit, dim),
            spec(Strategy::UserVector, Element::Float, dim),
            spec(Strategy::UserVector, Element::Bit, dim),
        ]
    }

    fn small_synth() -> Dataset {
        generate(&SynthConfig {
            users: 60,
            categories: 3,
            vocab: 8,
            titles_per_category: 40,
            history_median: 8,
            distractors: 20,
            signal: 0.7,
            noise_tokens: 2,
            seed: 5,
        })
        .unwrap()
        .dataset
    }

    #[test]
    fn topk_accuracy_rules() {
        assert_eq!(topk_accuracy(&[1, 1, 1], 1), 1.0);
        assert_eq!(topk_accuracy(&[6, 6], 5), 0.0);
        assert_eq!(topk_accuracy(&[6, 6], 10), 1.0);
        assert_eq!(topk_accuracy(&[2, 11], 10), 0.5);
        // k at or past M catches everything
        assert_eq!(topk_accuracy(&[101, 50, 3], 101), 1.0);
    }

    #[test]
    fn identical_title_is_a_top1_hit() {
        // Purchased title appears verbatim in the history; self-similarity
        // is maximal, so pairwise ranks it first.
        let items = vec![
            Item { item_id: "p".into(), title: "acme tx100 red".into(), category: "c".into() },
            Item { item_id: "h".into(), title: "acme tx100 red".into(), category: "c".into() },
            Item { item_id: "d1".into(), title: "zorro qq555 blue".into(), category: "c".into() },
            Item { item_id: "d2".into(), title: "other vv900 green".into(), category: "c".into() },
        ];
        let case = crate::dataset::EvalCase {
            user_id: "u".into(),
            history: vec![1],
            purchased: 0,
            candidates: vec![0, 2, 3],
        };
        let dataset = Dataset { items, cases: vec![case], skipped_lines: 0 };
        for element in [Element::Float, Element::Bit] {
            let report =
                run_experiment(&dataset, &[spec(Strategy::Pairwise, element, 2000)], 5, false)
                    .unwrap();
            assert_eq!(report.rows[0].top1, 1.0, "{element:?}");
        }
    }

    #[test]
    fn rows_echo_methods_in_input_order() {
        let dataset = small_synth();
        let methods = vec![
            spec(Strategy::UserVector, Element::Bit, 500),
            spec(Strategy::Pairwise, Element::Float, 250),
        ];
        let report = run_experiment(&dataset, &methods, 5, false).unwrap();
        assert_eq!(report.rows[0].label, "user-vec 1-bit");
        assert_eq!(report.rows[0].dim, 500);
        assert_eq!(report.rows[1].label, "pairwise float");
        assert_eq!(report.rows[1].dim, 250);
    }

    #[test]
    fn comparison_counters_follow_the_law() {
        let dataset = small_synth();
        let report = run_experiment(&dataset, &all_methods(500), 5, false).unwrap();
        let mean_mn: f64 = dataset
            .cases
            .iter()
            .map(|c| (c.history.len() * c.candidates.len()) as f64)
            .sum::<f64>()
            / dataset.cases.len() as f64;
        let mean_m = dataset.mean_m();
        assert_eq!(report.rows[0].mean_comparisons, mean_mn);
        assert_eq!(report.rows[1].mean_comparisons, mean_mn);
        assert_eq!(report.rows[2].mean_comparisons, mean_m);
        assert_eq!(report.rows[3].mean_comparisons, mean_m);
    }

    #[test]
    fn topk_is_monotone_in_every_row() {
        let report = run_experiment(&small_synth(), &all_methods(500), 5, false).unwrap();
        for row in &report.rows {
            assert!(row.top1 <= row.top5, "{}", row.label);
            assert!(row.top5 <= row.top10, "{}", row.label);
            assert!(row.top10 <= 1.0);
        }
    }

    #[test]
    fn pairwise_rows_report_zero_density_user_vec_rows_positive() {
        let report = run_experiment(&small_synth(), &all_methods(500), 5, false).unwrap();
        assert_eq!(report.rows[0].mean_density, 0.0);
        assert_eq!(report.rows[1].mean_density, 0.0);
        assert!(report.rows[2].mean_density > 0.0);
        assert!(report.rows[3].mean_density > 0.0);
    }

    #[test]
    fn results_are_deterministic_ignoring_time() {
        let dataset = small_synth();
        let a = run_experiment(&dataset, &all_methods(500), 5, false).unwrap();
        let b = run_experiment(&dataset, &all_methods(500), 5, true).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.top1, y.top1);
            assert_eq!(x.top5, y.top5);
            assert_eq!(x.top10, y.top10);
            assert_eq!(x.mean_comparisons, y.mean_comparisons);
            assert_eq!(x.mean_density, y.mean_density);
        }
    }

    #[test]
    fn incompatible_method_rejected_before_work() {
        let dataset = small_synth();
        let bad = MethodSpec {
            strategy: Strategy::Pairwise,
            element: Element::Float,
            kernel: Kernel::Ochiai,
            hash: HashConfig::with_dim(500),
        };
        let methods = vec![spec(Strategy::Pairwise, Element::Bit, 500), bad];
        let err = run_experiment(&dataset, &methods, 5, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run_experiment(&dataset, &[], 5, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run_experiment(&dataset, &all_methods(500), 0, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn labels_spell_out_non_default_kernels() {
        let mut m = spec(Strategy::Pairwise, Element::Bit, 100);
        assert_eq!(m.label(), "pairwise 1-bit");
        m.kernel = Kernel::Hamming;
        assert_eq!(m.label(), "pairwise 1-bit (hamming)");
        assert_eq!(spec(Strategy::UserVector, Element::Float, 100).label(), "user-vec float");
    }

    #[test]
    fn hamming_ranks_like_a_similarity_after_negation() {
        let report = run_experiment(
            &small_synth(),
            &[MethodSpec {
                strategy: Strategy::Pairwise,
                element: Element::Bit,
                kernel: Kernel::Hamming,
                hash: HashConfig::with_dim(2000),
            }],
            5,
            false,
        )
        .unwrap();
        // Hamming at decent dim should beat random (1/21) comfortably.
        assert!(report.rows[0].top1 > 0.2, "top1 {}", report.rows[0].top1);
    }

    #[test]
    fn payload_bytes_match_element_type() {
        assert_eq!(spec(Strategy::Pairwise, Element::Float, 8000).payload_bytes(), 32000);
        assert_eq!(spec(Strategy::Pairwise, Element::Bit, 8000).payload_bytes(), 1000);
    }
}
