//! Popcount loops over packed words, shared by the bit-vector kernels.
//!
//! The default x86-64 target does not enable the POPCNT instruction, so
//! `u64::count_ones` compiles to a multi-op bit-twiddling sequence that
//! dominates these loops. On std builds the public functions detect POPCNT
//! once at runtime (the detection result is cached by the standard library)
//! and jump to variants compiled with the feature enabled.

#[inline(always)]
fn ones_body(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

#[inline(always)]
fn and_body(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

#[inline(always)]
fn xor_body(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as u64).sum()
}

#[inline(always)]
fn and_or_body(a: &[u64], b: &[u64]) -> (u64, u64) {
    let mut and = 0u64;
    let mut or = 0u64;
    for (x, y) in a.iter().zip(b) {
        and += (x & y).count_ones() as u64;
        or += (x | y).count_ones() as u64;
    }
    (and, or)
}

#[cfg(all(feature = "std", target_arch = "x86_64"))]
mod accel {
    // The feature attribute only affects code generated inside these
    // functions, so each body is an #[inline(always)] helper that gets
    // inlined here and compiled with POPCNT available.

    #[target_feature(enable = "popcnt")]
    pub unsafe fn ones(words: &[u64]) -> u64 {
        super::ones_body(words)
    }

    #[target_feature(enable = "popcnt")]
    pub unsafe fn and(a: &[u64], b: &[u64]) -> u64 {
        super::and_body(a, b)
    }

    #[target_feature(enable = "popcnt")]
    pub unsafe fn xor(a: &[u64], b: &[u64]) -> u64 {
        super::xor_body(a, b)
    }

    #[target_feature(enable = "popcnt")]
    pub unsafe fn and_or(a: &[u64], b: &[u64]) -> (u64, u64) {
        super::and_or_body(a, b)
    }
}

macro_rules! dispatch {
    ($accel:ident($($arg:ident),*), $body:ident) => {{
        #[cfg(all(feature = "std", target_arch = "x86_64"))]
        {
            if std::arch::is_x86_feature_detected!("popcnt") {
                // SAFETY: POPCNT support was just detected on this CPU.
                return unsafe { accel::$accel($($arg),*) };
            }
        }
        $body($($arg),*)
    }};
}

/// Total set bits in `words`.
pub(crate) fn ones(words: &[u64]) -> u64 {
    dispatch!(ones(words), ones_body)
}

/// Set bits in the word-wise AND of two equal-length slices.
pub(crate) fn and(a: &[u64], b: &[u64]) -> u64 {
    debug_assert_eq!(a.len(), b.len());
    dispatch!(and(a, b), and_body)
}

/// Set bits in the word-wise XOR of two equal-length slices.
pub(crate) fn xor(a: &[u64], b: &[u64]) -> u64 {
    debug_assert_eq!(a.len(), b.len());
    dispatch!(xor(a, b), xor_body)
}

/// Set bits in the AND and the OR of two equal-length slices, in one pass.
pub(crate) fn and_or(a: &[u64], b: &[u64]) -> (u64, u64) {
    debug_assert_eq!(a.len(), b.len());
    dispatch!(and_or(a, b), and_or_body)
}
