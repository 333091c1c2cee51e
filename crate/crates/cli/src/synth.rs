//! Synthetic clickstream generator with controllable signal strength.
//!
//! Each category gets a catalog of items whose titles are a product
//! phrase (brand word, globally unique model code, attribute word) plus
//! noise tokens. A user's case is a purchased catalog item, a history of
//! viewed listings, and a recall set of same-category distractors. With
//! probability `signal` a history listing carries the purchased item's
//! full product phrase (differing only in noise); otherwise its phrase is
//! drawn from a background space that never matches any catalog item, so
//! at signal 0.0 the purchase is statistically indistinguishable from the
//! distractors and top-1 accuracy sits at 1/M.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, EvalCase, Item};
use crate::AppError;

/// Knobs for the generator. All randomness flows from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Users, and therefore evaluation cases.
    pub users: usize,
    pub categories: usize,
    /// Brand and attribute pool size per category.
    pub vocab: usize,
    pub titles_per_category: usize,
    /// Target median history length N.
    pub history_median: usize,
    /// Distractors per recall set; M = distractors + 1.
    pub distractors: usize,
    /// Probability a history item shares the purchase's product phrase.
    pub signal: f64,
    /// Noise tokens appended to every title. 0 keeps titles minimal.
    pub noise_tokens: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            users: 500,
            categories: 10,
            vocab: 16,
            titles_per_category: 200,
            history_median: 44,
            distractors: 100,
            signal: 0.6,
            noise_tokens: 2,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), AppError> {
        let counts = [
            ("users", self.users),
            ("categories", self.categories),
            ("vocab", self.vocab),
            ("titles-per-category", self.titles_per_category),
            ("history-median", self.history_median),
            ("distractors", self.distractors),
        ];
        for (name, value) in counts {
            if value == 0 {
                return Err(AppError::Config(format!("{name} must be at least 1")));
            }
        }
        if !(0.0..=1.0).contains(&self.signal) {
            return Err(AppError::Config(format!(
                "signal must be within [0, 1], got {}",
                self.signal
            )));
        }
        if self.titles_per_category <= self.distractors {
            return Err(AppError::Config(format!(
                "titles-per-category ({}) must exceed distractors ({}) to fill recall sets",
                self.titles_per_category, self.distractors
            )));
        }
        // Longest possible title: 8+1+5+1+8 phrase chars plus 9 per noise
        // token; 6 tokens keeps every title within 80 characters.
        if self.noise_tokens > 6 {
            return Err(AppError::Config(format!(
                "noise-tokens must be at most 6, got {}",
                self.noise_tokens
            )));
        }
        Ok(())
    }
}

/// A generated dataset plus which history items carry signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub dataset: Dataset,
    /// Per case, per history slot: does it share the purchase's phrase.
    pub signal_flags: Vec<Vec<bool>>,
}

fn word(rng: &mut ChaCha8Rng, min: usize, max: usize) -> String {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| char::from(rng.gen_range(b'a'..=b'z'))).collect()
}

/// Two letters + three digits; rejection keeps codes globally unique so
/// no two product phrases ever collide.
fn model_code(rng: &mut ChaCha8Rng, used: &mut HashSet<String>) -> String {
    loop {
        let code = format!(
            "{}{}{}",
            char::from(rng.gen_range(b'a'..=b'z')),
            char::from(rng.gen_range(b'a'..=b'z')),
            rng.gen_range(100..1000)
        );
        if used.insert(code.clone()) {
            return code;
        }
    }
}

fn noise_suffix(rng: &mut ChaCha8Rng, pool: &[String], count: usize) -> String {
    let mut out = String::new();
    for _ in 0..count {
        out.push(' ');
        out.push_str(&pool[rng.gen_range(0..pool.len())]);
    }
    out
}

/// Median-preserving lognormal history length: exp of a normal draw
/// centered on ln(median), via Box-Muller.
fn history_len(rng: &mut ChaCha8Rng, median: usize) -> usize {
    const SIGMA: f64 = 0.5;
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let z = (-2.0 * (1.0 - u1).ln()).sqrt() * (core::f64::consts::TAU * u2).cos();
    let n = (median as f64 * (SIGMA * z).exp()).round();
    (n as usize).clamp(1, 400)
}

/// Generates a dataset deterministically from the config.
pub fn generate(config: &SynthConfig) -> Result<SynthDataset, AppError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut used_codes = HashSet::new();

    let noise_pool: Vec<String> = (0..100).map(|_| word(&mut rng, 3, 8)).collect();

    // Catalog: per category, phrase pools and the items themselves.
    let mut items: Vec<Item> = Vec::new();
    let mut phrases: Vec<String> = Vec::new();
    for c in 0..config.categories {
        let brands: Vec<String> = (0..config.vocab).map(|_| word(&mut rng, 4, 8)).collect();
        let attrs: Vec<String> = (0..config.vocab).map(|_| word(&mut rng, 3, 8)).collect();
        for j in 0..config.titles_per_category {
            let brand = &brands[rng.gen_range(0..brands.len())];
            let code = model_code(&mut rng, &mut used_codes);
            let attr = &attrs[rng.gen_range(0..attrs.len())];
            let phrase = format!("{brand} {code} {attr}");
            let title =
                format!("{phrase}{}", noise_suffix(&mut rng, &noise_pool, config.noise_tokens));
            debug_assert!(title.len() <= 80);
            items.push(Item {
                item_id: format!("c{c:02}i{j:04}"),
                title,
                category: format!("cat{c:02}"),
            });
            phrases.push(phrase);
        }
    }
    let catalog_len = items.len();

    let mut cases = Vec::with_capacity(config.users);
    let mut signal_flags = Vec::with_capacity(config.users);
    for u in 0..config.users {
        let c = rng.gen_range(0..config.categories);
        let base = c * config.titles_per_category;
        let purchased = (base + rng.gen_range(0..config.titles_per_category)) as u32;

        let n = history_len(&mut rng, config.history_median);
        let mut history = Vec::with_capacity(n);
        let mut flags = Vec::with_capacity(n);
        for s in 0..n {
            let is_signal = rng.gen::<f64>() < config.signal;
            let phrase = if is_signal {
                phrases[purchased as usize].clone()
            } else {
                // Background product: unique code, off-pool words. Never
                // matches a catalog phrase.
                format!(
                    "{} {} {}",
                    word(&mut rng, 4, 8),
                    model_code(&mut rng, &mut used_codes),
                    word(&mut rng, 3, 8)
                )
            };
            let title =
                format!("{phrase}{}", noise_suffix(&mut rng, &noise_pool, config.noise_tokens));
            debug_assert!(title.len() <= 80);
            history.push(items.len() as u32);
            items.push(Item {
                item_id: format!("u{u:05}v{s:03}"),
                title,
                category: format!("cat{c:02}"),
            });
            flags.push(is_signal);
        }

        // Recall set: the purchase plus distractors sampled without
        // replacement from the same category's catalog.
        let mut pool: Vec<u32> = (base..base + config.titles_per_category)
            .map(|i| i as u32)
            .filter(|&i| i != purchased)
            .collect();
        let (sampled, _) = pool.partial_shuffle(&mut rng, config.distractors);
        let mut candidates = Vec::with_capacity(config.distractors + 1);
        candidates.push(purchased);
        candidates.extend_from_slice(sampled);

        cases.push(EvalCase { user_id: format!("u{u:05}"), history, purchased, candidates });
        signal_flags.push(flags);
    }

    debug_assert!(items[..catalog_len].iter().all(|i| i.title.len() <= 80));
    Ok(SynthDataset { dataset: Dataset { items, cases, skipped_lines: 0 }, signal_flags })
}
