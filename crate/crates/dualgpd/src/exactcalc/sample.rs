use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{rat, Mat, Poly, Rat};

pub const DEFAULT_HEIGHT: i64 = 13;

/// Seeded source of small-height rationals (|numerator|, denominator <= height).
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    height: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler::with_height(seed, DEFAULT_HEIGHT)
    }

    pub fn with_height(seed: u64, height: i64) -> Self {
        assert!(height >= 1);
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), height }
    }

    /// Independent child stream, so parallel trials stay reproducible.
    pub fn fork(&mut self, tag: u64) -> Sampler {
        let seed = self.rng.gen::<u64>() ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        Sampler::with_height(seed, self.height)
    }

    pub fn rational(&mut self) -> Rat {
        let h = self.height;
        rat(self.rng.gen_range(-h..=h), self.rng.gen_range(1..=h))
    }

    pub fn nonzero(&mut self) -> Rat {
        loop {
            let x = self.rational();
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn vector(&mut self, n: usize) -> Vec<Rat> {
        (0..n).map(|_| self.rational()).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Mat {
        let entries: Vec<Rat> = (0..rows * cols).map(|_| self.rational()).collect();
        Mat::from_fn(rows, cols, |i, j| entries[i * cols + j].clone())
    }

    pub fn invertible(&mut self, n: usize) -> Mat {
        loop {
            let m = self.matrix(n, n);
            if m.det().map(|d| !d.is_zero()).unwrap_or(false) {
                return m;
            }
        }
    }

    /// Random polynomial of total degree at most `degree` with a handful of terms.
    pub fn poly(&mut self, nvars: usize, degree: u32) -> Poly {
        let nterms = self.rng.gen_range(1..=4);
        let terms: Vec<(Vec<u32>, Rat)> = (0..nterms)
            .map(|_| {
                let mut e = vec![0u32; nvars];
                let d = if nvars == 0 { 0 } else { self.rng.gen_range(0..=degree) };
                for _ in 0..d {
                    e[self.rng.gen_range(0..nvars)] += 1;
                }
                (e, self.rational())
            })
            .collect();
        Poly::from_terms(nvars, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::scalar::height;
    use num_bigint::BigInt;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<Rat> = Sampler::new(5).vector(20);
        let b: Vec<Rat> = Sampler::new(5).vector(20);
        assert_eq!(a, b);
    }

    #[test]
    fn heights_are_bounded() {
        let mut s = Sampler::new(1);
        assert!(s.vector(200).iter().all(|x| height(x) <= BigInt::from(DEFAULT_HEIGHT)));
    }

    #[test]
    fn random_poly_respects_degree() {
        let mut s = Sampler::new(2);
        for _ in 0..50 {
            assert!(s.poly(3, 2).degree() <= 2);
        }
    }
}
