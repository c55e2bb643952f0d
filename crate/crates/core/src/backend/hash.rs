use crate::error::{Error, Result};
use crate::tokenizer::TokenId;

use super::{Distribution, LanguageModel, MaskedSentence};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Deterministic pseudo-model deriving each distribution from a hash of its
/// inputs.
///
/// For a masked position the stub computes a 64-bit FNV-1a hash over
///
/// 1. the seed, 8 bytes little-endian,
/// 2. the position, as a `u64` little-endian,
/// 3. every piece of the masked sentence in order, each as its byte length
///    (`u64` little-endian) followed by its UTF-8 bytes.
///
/// The hash seeds a SplitMix64 generator which yields one value `z` per
/// vocabulary id in index order. Each becomes `u = ((z >> 11) + 1) * 2^-53`
/// in `(0, 1]` and the score `u^K`, where `K` is the smallest power of two
/// not below `max(V / 4, 1)` and is applied by repeated squaring. Scores are
/// normalized by their sum accumulated in index order. The exponent
/// concentrates mass on a handful of tokens, as a trained model would.
#[derive(Clone, Debug)]
pub struct HashStub {
    seed: u64,
    vocab_size: usize,
    squarings: u32,
}

impl HashStub {
    pub fn new(seed: u64, vocab_size: usize) -> Result<Self> {
        if vocab_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "hash stub needs at least 2 vocabulary entries, got {vocab_size}"
            )));
        }
        let exponent = (vocab_size / 4).max(1).next_power_of_two();
        Ok(Self {
            seed,
            vocab_size,
            squarings: exponent.trailing_zeros(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The exponent `K` applied to each uniform draw.
    pub fn exponent(&self) -> u64 {
        1 << self.squarings
    }

    fn distribution(&self, pieces: &[String], position: usize) -> Distribution {
        let mut rng = SplitMix64(self.context_hash(pieces, position));
        let mut scores = Vec::with_capacity(self.vocab_size);
        for _ in 0..self.vocab_size {
            let mut score = ((rng.next() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
            for _ in 0..self.squarings {
                score *= score;
            }
            scores.push(score);
        }
        let total: f64 = scores.iter().sum();
        let entries = scores
            .into_iter()
            .enumerate()
            .map(|(id, score)| (id as TokenId, score / total))
            .collect();
        Distribution::new(entries).expect("normalized scores form a distribution")
    }

    fn context_hash(&self, pieces: &[String], position: usize) -> u64 {
        let mut hash = Fnv1a(FNV_OFFSET);
        hash.write(&self.seed.to_le_bytes());
        hash.write(&(position as u64).to_le_bytes());
        for piece in pieces {
            hash.write(&(piece.len() as u64).to_le_bytes());
            hash.write(piece.as_bytes());
        }
        hash.0
    }
}

struct Fnv1a(u64);

impl Fnv1a {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

impl LanguageModel for HashStub {
    fn predict(&self, input: &MaskedSentence) -> Result<Vec<Distribution>> {
        Ok(input
            .positions
            .iter()
            .map(|&position| self.distribution(&input.pieces, position))
            .collect())
    }

    fn identity(&self) -> String {
        format!("hash:seed={}:vocab={}", self.seed, self.vocab_size)
    }

    fn vocab_size(&self) -> Option<usize> {
        Some(self.vocab_size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::SentenceKey;

    fn masked(pieces: &[&str], positions: &[usize]) -> MaskedSentence {
        MaskedSentence {
            key: SentenceKey::new(None, 0),
            pieces: pieces.iter().map(|p| p.to_string()).collect(),
            positions: positions.to_vec(),
        }
    }

    #[test]
    fn reference_hashes() {
        // FNV-1a 64 published test vectors
        let mut h = Fnv1a(FNV_OFFSET);
        h.write(b"");
        assert_eq!(h.0, 0xcbf29ce484222325);
        let mut h = Fnv1a(FNV_OFFSET);
        h.write(b"a");
        assert_eq!(h.0, 0xaf63dc4c8601ec8c);
        let mut h = Fnv1a(FNV_OFFSET);
        h.write(b"foobar");
        assert_eq!(h.0, 0x85944171f73967e8);
        // SplitMix64 seeded with 1234567
        let mut g = SplitMix64(1234567);
        assert_eq!(g.next(), 6457827717110365317);
        assert_eq!(g.next(), 3203168211198807973);
    }

    #[test]
    fn exponent_tracks_vocabulary_size() {
        assert_eq!(HashStub::new(0, 2).unwrap().exponent(), 1);
        assert_eq!(HashStub::new(0, 8).unwrap().exponent(), 2);
        assert_eq!(HashStub::new(0, 868).unwrap().exponent(), 256);
        assert_eq!(HashStub::new(0, 28996).unwrap().exponent(), 8192);
        assert!(HashStub::new(0, 1).is_err());
    }

    #[test]
    fn deterministic_and_normalized() {
        let stub = HashStub::new(7, 500).unwrap();
        let input = masked(&["She", "will", "[MASK]", "him"], &[2]);
        let a = stub.predict(&input).unwrap();
        let b = stub.predict(&input).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].entries().len(), 500);
        assert!((a[0].total() - 1.0).abs() < 1e-9);
        let other_seed = HashStub::new(8, 500).unwrap().predict(&input).unwrap();
        assert_ne!(a, other_seed);
    }

    #[test]
    fn positions_give_distinct_distributions() {
        let stub = HashStub::new(42, 64).unwrap();
        let pieces: Vec<String> = (0..20).map(|i| format!("w{i}")).collect();
        let input = MaskedSentence {
            key: SentenceKey::new(None, 0),
            pieces,
            positions: (0..10_000).collect(),
        };
        let dists = stub.predict(&input).unwrap();
        let mut seen = std::collections::HashSet::new();
        for d in &dists {
            let bits: Vec<u64> = d.entries().iter().map(|&(_, p)| p.to_bits()).collect();
            assert!(seen.insert(bits), "two positions share a distribution");
        }
    }
}
