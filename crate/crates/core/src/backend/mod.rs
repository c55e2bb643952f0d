//! Sources of per-mask vocabulary distributions.

mod hash;
mod table;

use std::fmt;

pub use hash::HashStub;
pub use table::TableStub;

use crate::error::{Error, Result};
use crate::tokenizer::TokenId;

/// Slack allowed on the total probability mass.
pub const MASS_TOLERANCE: f64 = 1e-4;

/// Probabilities over vocabulary ids, sorted by id.
///
/// Ids that are not listed have probability zero. A distribution may list
/// only part of the vocabulary, in which case its entries sum to less than
/// one; dense distributions from a model sum to one within
/// [`MASS_TOLERANCE`].
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    entries: Vec<(TokenId, f64)>,
}

impl Distribution {
    pub fn new(mut entries: Vec<(TokenId, f64)>) -> Result<Self> {
        entries.sort_by_key(|&(id, _)| id);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution(format!("token id {} listed twice", w[0].0)));
        }
        let mut total = 0.0;
        for &(id, prob) in &entries {
            if !(0.0..=1.0).contains(&prob) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {prob} of token {id} outside [0, 1]"
                )));
            }
            total += prob;
        }
        if total > 1.0 + MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("total mass {total} exceeds 1")));
        }
        Ok(Self { entries })
    }

    /// A distribution over ids `0..probs.len()`.
    pub fn from_dense(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs.into_iter().enumerate().map(|(i, p)| (i as TokenId, p)).collect())
    }

    pub fn entries(&self) -> &[(TokenId, f64)] {
        &self.entries
    }

    pub fn prob(&self, id: TokenId) -> f64 {
        self.entries
            .binary_search_by_key(&id, |&(i, _)| i)
            .map_or(0.0, |at| self.entries[at].1)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    pub fn max_id(&self) -> Option<TokenId> {
        self.entries.last().map(|&(id, _)| id)
    }
}

/// Identifies a sentence for backends keyed by location: `s<k>` for the
/// k-th sentence (1-based) of a single text, `d<j>.s<k>` for the k-th
/// sentence of the j-th corpus document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SentenceKey {
    pub document: Option<usize>,
    /// 0-based sentence index.
    pub sentence: usize,
}

impl SentenceKey {
    pub fn new(document: Option<usize>, sentence: usize) -> Self {
        Self { document, sentence }
    }
}

impl fmt::Display for SentenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(doc) = self.document {
            write!(f, "d{}.", doc + 1)?;
        }
        write!(f, "s{}", self.sentence + 1)
    }
}

/// One sentence with every planned position replaced by the mask symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskedSentence {
    pub key: SentenceKey,
    pub pieces: Vec<String>,
    pub positions: Vec<usize>,
}

/// A masked language model, or a stand-in for one.
///
/// Implementations must be observably pure: the same input always yields
/// bit-identical distributions.
pub trait LanguageModel: Send + Sync {
    /// One distribution per masked position, in plan order.
    fn predict(&self, input: &MaskedSentence) -> Result<Vec<Distribution>>;

    /// Stable identifier of the model and its parameters, recorded in the
    /// protocol descriptor.
    fn identity(&self) -> String;

    /// Output vocabulary size, when the backend knows it.
    fn vocab_size(&self) -> Option<usize> {
        None
    }
}

impl<T: LanguageModel + ?Sized> LanguageModel for &T {
    fn predict(&self, input: &MaskedSentence) -> Result<Vec<Distribution>> {
        (**self).predict(input)
    }

    fn identity(&self) -> String {
        (**self).identity()
    }

    fn vocab_size(&self) -> Option<usize> {
        (**self).vocab_size()
    }
}

impl<T: LanguageModel + ?Sized> LanguageModel for Box<T> {
    fn predict(&self, input: &MaskedSentence) -> Result<Vec<Distribution>> {
        (**self).predict(input)
    }

    fn identity(&self) -> String {
        (**self).identity()
    }

    fn vocab_size(&self) -> Option<usize> {
        (**self).vocab_size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_probabilities() {
        assert!(Distribution::new(vec![(0, 1.2)]).is_err());
        assert!(Distribution::new(vec![(0, -0.1)]).is_err());
        assert!(Distribution::new(vec![(0, f64::NAN)]).is_err());
        assert!(Distribution::new(vec![(0, 0.7), (1, 0.7)]).is_err());
        assert!(Distribution::new(vec![(3, 0.1), (3, 0.2)]).is_err());
    }

    #[test]
    fn lookup_and_partial_mass() {
        let d = Distribution::new(vec![(5, 0.3), (2, 0.5)]).unwrap();
        assert_eq!(d.entries(), &[(2, 0.5), (5, 0.3)]);
        assert_eq!(d.prob(5), 0.3);
        assert_eq!(d.prob(4), 0.0);
        assert!((d.total() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn sentence_keys() {
        assert_eq!(SentenceKey::new(None, 0).to_string(), "s1");
        assert_eq!(SentenceKey::new(Some(2), 4).to_string(), "d3.s5");
    }
}
