//! Microbenchmarks for the similarity kernels and user-vector combiners.
//!
//! Not a statistics suite: each operation runs in a fixed wall-clock
//! window and reports mean ns/op, which is plenty to show the order of
//! magnitude between the float and bit paths. Inputs are hashed from
//! random feature sets at title-like densities so the popcount kernels
//! see realistic word occupancy.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bitgram_core::similarity::{cosine, hamming, jaccard, ochiai};
use bitgram_core::user::{combine_bits, combine_float};
use bitgram_core::{build_bit_vector, build_float_vector, BitVector, FeatureVector, HashConfig};

use crate::report::RunConfig;

/// History length used by the combine benchmarks, matching the median
/// history in the evaluation protocol.
pub const COMBINE_HISTORY: usize = 44;

const CORPUS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: &'static str,
    pub dim: usize,
    pub ns_per_op: f64,
}

/// Times one closure: warm up, then repeat batches until `window` has
/// elapsed. Returns mean ns/op over the whole window.
fn measure(window: Duration, mut op: impl FnMut() -> f64) -> f64 {
    for _ in 0..16 {
        black_box(op());
    }
    let mut ops = 0u64;
    let start = Instant::now();
    let elapsed = loop {
        for _ in 0..32 {
            black_box(op());
        }
        ops += 32;
        let elapsed = start.elapsed();
        if elapsed >= window {
            break elapsed;
        }
    };
    elapsed.as_nanos() as f64 / ops as f64
}

fn corpus(dim: usize, seed: u64) -> (Vec<FeatureVector>, Vec<BitVector>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = HashConfig::with_dim(dim);
    let mut floats = Vec::with_capacity(CORPUS);
    let mut bits = Vec::with_capacity(CORPUS);
    for _ in 0..CORPUS {
        // A five-gram title of typical length hashes to roughly 24..40
        // features; both element types get the same feature sets.
        let count = rng.gen_range(24..=40);
        let features: Vec<String> = (0..count).map(|_| format!("f{}", rng.gen::<u64>())).collect();
        floats.push(build_float_vector(&features, &config));
        bits.push(build_bit_vector(&features, &config));
    }
    (floats, bits)
}

/// Runs every benchmark at every dimension. `window` is the wall-clock
/// budget per benchmark.
pub fn run_bench(dims: &[usize], seed: u64, window: Duration) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &dim in dims {
        let (floats, bits) = corpus(dim, seed);
        let mut i = 0usize;
        let mut pair = move || {
            let a = i % CORPUS;
            let b = (i + 1) % CORPUS;
            i = i.wrapping_add(1);
            (a, b)
        };

        let mut kernel_rows: Vec<(&'static str, f64)> = Vec::new();
        kernel_rows.push((
            "cosine",
            measure(window, {
                let pair = &mut pair;
                let floats = &floats;
                move || {
                    let (a, b) = pair();
                    cosine(&floats[a], &floats[b]).unwrap()
                }
            }),
        ));
        kernel_rows.push((
            "ochiai",
            measure(window, {
                let pair = &mut pair;
                let bits = &bits;
                move || {
                    let (a, b) = pair();
                    ochiai(&bits[a], &bits[b]).unwrap()
                }
            }),
        ));
        kernel_rows.push((
            "hamming",
            measure(window, {
                let pair = &mut pair;
                let bits = &bits;
                move || {
                    let (a, b) = pair();
                    hamming(&bits[a], &bits[b]).unwrap() as f64
                }
            }),
        ));
        kernel_rows.push((
            "jaccard",
            measure(window, {
                let pair = &mut pair;
                let bits = &bits;
                move || {
                    let (a, b) = pair();
                    jaccard(&bits[a], &bits[b]).unwrap()
                }
            }),
        ));

        let mut start = 0usize;
        let mut history = move || {
            start = (start + 7) % (CORPUS - COMBINE_HISTORY);
            start
        };
        kernel_rows.push((
            "combine_float",
            measure(window, {
                let history = &mut history;
                let floats = &floats;
                move || {
                    let s = history();
                    combine_float(&floats[s..s + COMBINE_HISTORY]).unwrap().l2_norm()
                }
            }),
        ));
        kernel_rows.push((
            "combine_bits",
            measure(window, {
                let history = &mut history;
                let bits = &bits;
                move || {
                    let s = history();
                    combine_bits(&bits[s..s + COMBINE_HISTORY]).unwrap().count_ones() as f64
                }
            }),
        ));

        rows.extend(kernel_rows.into_iter().map(|(name, ns_per_op)| BenchRow {
            name,
            dim,
            ns_per_op,
        }));
    }
    rows
}

fn ratio(rows: &[BenchRow], dim: usize, slow: &str, fast: &str) -> Option<f64> {
    let find =
        |name: &str| rows.iter().find(|r| r.dim == dim && r.name == name).map(|r| r.ns_per_op);
    Some(find(slow)? / find(fast)?)
}

pub fn render_bench_csv(config: &RunConfig, rows: &[BenchRow]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    config.echo(&mut out);
    out.push_str("name,dim,ns_per_op\n");
    let mut dims: Vec<usize> = Vec::new();
    for row in rows {
        writeln!(out, "{},{},{:.1}", row.name, row.dim, row.ns_per_op).unwrap();
        if !dims.contains(&row.dim) {
            dims.push(row.dim);
        }
    }
    for dim in dims {
        if let Some(r) = ratio(rows, dim, "cosine", "ochiai") {
            writeln!(out, "# dim {dim}: ochiai {r:.1}x faster than cosine").unwrap();
        }
        if let Some(r) = ratio(rows, dim, "combine_float", "combine_bits") {
            writeln!(out, "# dim {dim}: combine_bits {r:.1}x faster than combine_float").unwrap();
        }
    }
    out
}
