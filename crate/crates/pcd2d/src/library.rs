//! Deterministic pseudo-random library generation.
//!
//! Files are streams of field symbols drawn from a counter-based SplitMix64
//! generator, so fixtures are reproducible bit-for-bit across platforms and
//! runs without shipping data files. The `i`-th raw value of a stream is
//!
//! ```text
//! v(seed, i) = mix(seed + (i+1) * 0x9E3779B97F4A7C15)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer (xor-shift/multiply rounds with
//! constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB). Symbol `j` of file
//! `n` (1-based `n`, 0-based `j`, files of `file_len` symbols) is
//! `v(seed, (n-1)*file_len + j)` masked to the field's symbol width.

use crate::gf::{Field, Symbol};

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// The `index`-th output of the SplitMix64 stream for `seed`.
pub fn stream_value(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Generates `files` pseudo-random files of `file_len` symbols each.
pub fn generate_library(
    seed: u64,
    files: usize,
    file_len: usize,
    field: Field,
) -> Vec<Vec<Symbol>> {
    let mask = field.symbol_mask();
    (1..=files)
        .map(|n| {
            (0..file_len)
                .map(|j| (stream_value(seed, ((n - 1) * file_len + j) as u64) & mask) as Symbol)
                .collect()
        })
        .collect()
}

/// Zero-pads `file` up to the next multiple of `multiple`.
pub fn pad_to_multiple(file: &[Symbol], multiple: usize) -> Vec<Symbol> {
    let mut out = file.to_vec();
    let rem = out.len() % multiple;
    if rem != 0 {
        out.resize(out.len() + multiple - rem, 0);
    }
    out
}
