use std::cmp::Ordering;

use crate::backend::Distribution;
use crate::config::StegoConfig;
use crate::error::{Error, Result};
use crate::tokenizer::{classify, EligibilityClass, StopwordList, TokenId, Vocab};

/// Number of bits a position with `c` candidates carries: the largest `n`
/// with `2^n <= c`, or zero when `c <= 1`.
pub fn chunk_size(c: usize) -> u32 {
    if c <= 1 {
        0
    } else {
        usize::BITS - 1 - c.leading_zeros()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub id: TokenId,
    pub piece: String,
    pub prob: f64,
}

/// Probability descending, then vocabulary index ascending.
pub fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    b.prob.total_cmp(&a.prob).then(a.id.cmp(&b.id))
}

/// Ordered substitution candidates for one masked position.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateSet {
    entries: Vec<Candidate>,
}

impl CandidateSet {
    /// Sorts `entries` into protocol order.
    pub fn from_entries(mut entries: Vec<Candidate>) -> Self {
        entries.sort_by(candidate_order);
        Self { entries }
    }

    /// Tokens whose probability exceeds the threshold, that classify as
    /// eligible, are not special symbols and pass `accept`.
    pub fn build(
        dist: &Distribution,
        vocab: &Vocab,
        config: &StegoConfig,
        stopwords: &StopwordList,
        mut accept: impl FnMut(&str) -> bool,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        for &(id, prob) in dist.entries() {
            if prob <= config.threshold {
                continue;
            }
            let piece = vocab.piece(id).ok_or_else(|| {
                Error::Vocabulary(format!(
                    "backend produced token id {id} outside the {}-entry vocabulary",
                    vocab.len()
                ))
            })?;
            if vocab.is_special(id)
                || classify(piece, &config.skip, stopwords) != EligibilityClass::Eligible
                || !accept(piece)
            {
                continue;
            }
            entries.push(Candidate {
                id,
                piece: piece.to_owned(),
                prob,
            });
        }
        Ok(Self::from_entries(entries))
    }

    pub fn entries(&self) -> &[Candidate] {
        &self.entries
    }

    /// `c`, the number of candidates.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `n`, the number of bits this position carries.
    pub fn chunk_bits(&self) -> u32 {
        chunk_size(self.entries.len())
    }

    /// The candidate that encodes `chunk`, an `n`-bit value.
    pub fn get(&self, chunk: u64) -> Option<&Candidate> {
        usize::try_from(chunk).ok().and_then(|i| self.entries.get(i))
    }

    /// Rank of `piece` among the `2^n` candidates that carry bits.
    pub fn rank_of(&self, piece: &str) -> Option<u64> {
        let usable = if self.entries.len() <= 1 { 0 } else { 1usize << self.chunk_bits() };
        self.entries[..usable]
            .iter()
            .position(|c| c.piece == piece)
            .map(|i| i as u64)
    }

    pub fn pieces(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|c| c.piece.as_str())
    }
}
