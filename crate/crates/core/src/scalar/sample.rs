use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::FiniteField;

/// Seeded stream of uniform field elements.
///
/// Draws are a pure function of `(seed, draw index)`. Streams are owned by one
/// task at a time; clone a stream only to replay it.
#[derive(Clone, Debug)]
pub struct FieldStream {
    seed: u64,
    rng: ChaCha8Rng,
    draws: u64,
}

impl FieldStream {
    pub fn new(seed: u64) -> Self {
        FieldStream { seed, rng: ChaCha8Rng::seed_from_u64(seed), draws: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn sample<F: FiniteField>(&mut self) -> F {
        self.draws += 1;
        F::random(&mut self.rng)
    }

    pub fn sample_nonzero<F: FiniteField>(&mut self) -> F {
        loop {
            let x = self.sample::<F>();
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn sample_vec<F: FiniteField>(&mut self, n: usize) -> Vec<F> {
        (0..n).map(|_| self.sample()).collect()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        use rand::Rng;
        self.draws += 1;
        self.rng.gen_range(0..n)
    }

    /// Independent child stream, e.g. for a retry after a bad specialization.
    pub fn fork(&self, salt: u64) -> FieldStream {
        FieldStream::new(derive_seed(self.seed, salt))
    }
}

/// SplitMix64 mix of a seed and a salt.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
