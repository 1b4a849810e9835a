//! Fast Walsh–Hadamard transform.
//!
//! `out[s] = Σ_x (−1)^{popcount(x & s)} · in[x]`, unnormalized, in place.

use std::ops::{Add, Sub};

use rayon::prelude::*;

// Below this length the sequential butterfly beats the rayon overhead.
const PARALLEL_MIN_LEN: usize = 1 << 14;

/// In-place unnormalized transform. `data.len()` must be a power of two.
///
/// Every butterfly touches a disjoint pair of slots, so the parallel schedule
/// produces bit-identical results to the sequential one.
pub fn fwht<T>(data: &mut [T])
where
    T: Copy + Send + Sync + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(
        len.is_power_of_two(),
        "transform length must be a power of two"
    );
    let mut half = 1;
    while half < len {
        if len >= PARALLEL_MIN_LEN {
            data.par_chunks_mut(2 * half)
                .for_each(|block| butterfly(block, half));
        } else {
            data.chunks_mut(2 * half)
                .for_each(|block| butterfly(block, half));
        }
        half *= 2;
    }
}

#[inline]
fn butterfly<T>(block: &mut [T], half: usize)
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let (lo, hi) = block.split_at_mut(half);
    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = x + y;
        *b = x - y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(input: &[i64]) -> Vec<i64> {
        (0..input.len())
            .map(|s| {
                input
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| if (x & s).count_ones() % 2 == 0 { v } else { -v })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_definition() {
        let input: Vec<i64> = (0..32).map(|i| (i * 7 + 3) % 11 - 5).collect();
        let mut fast = input.clone();
        fwht(&mut fast);
        assert_eq!(fast, naive(&input));
    }

    #[test]
    fn involution_up_to_scale() {
        let input: Vec<i64> = (0..64).map(|i| i * i % 13).collect();
        let mut twice = input.clone();
        fwht(&mut twice);
        fwht(&mut twice);
        assert!(twice.iter().zip(&input).all(|(a, b)| *a == 64 * b));
    }

    #[test]
    fn parallel_path_matches_naive() {
        let len = PARALLEL_MIN_LEN;
        let input: Vec<i64> = (0..len as i64).map(|i| (i * 31) % 17 - 8).collect();
        let mut fast = input.clone();
        fwht(&mut fast);
        // spot-check a handful of coefficients
        for s in [0usize, 1, 77, 4097, len - 1] {
            let expect: i64 = input
                .iter()
                .enumerate()
                .map(|(x, &v)| if (x & s).count_ones() % 2 == 0 { v } else { -v })
                .sum();
            assert_eq!(fast[s], expect);
        }
    }

    #[test]
    fn length_one_is_identity() {
        let mut d = [5.0f64];
        fwht(&mut d);
        assert_eq!(d, [5.0]);
    }
}
