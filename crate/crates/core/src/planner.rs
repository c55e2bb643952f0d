//! Selection of the token positions to mask.
//!
//! The counter advances on eligible tokens only: eligible tokens are numbered
//! 1, 2, 3, ... from the left and those numbered `f`, `2f`, `3f`, ... are
//! masked. Skipped tokens never move the counter, so substituting any
//! eligible token at a planned position leaves the plan unchanged.

use crate::config::SkipRules;
use crate::tokenizer::{classify, EligibilityClass, StopwordList, TokenSeq};

/// Strictly increasing token indices within one sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MaskPlan {
    positions: Vec<usize>,
}

impl MaskPlan {
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.positions.binary_search(&position).is_ok()
    }
}

pub fn compute_mask_plan(
    tokens: &TokenSeq,
    interval: usize,
    skip: &SkipRules,
    stopwords: &StopwordList,
) -> MaskPlan {
    assert!(interval > 0, "masking interval must be positive");
    let mut eligible_seen = 0usize;
    let mut positions = Vec::new();
    for (index, token) in tokens.iter().enumerate() {
        if classify(token.class_form(), skip, stopwords) != EligibilityClass::Eligible {
            continue;
        }
        eligible_seen += 1;
        if eligible_seen.is_multiple_of(interval) {
            positions.push(index);
        }
    }
    MaskPlan { positions }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(pieces: &[&str], interval: usize, skip: SkipRules) -> Vec<usize> {
        compute_mask_plan(
            &TokenSeq::from_pieces(pieces),
            interval,
            &skip,
            &StopwordList::english(),
        )
        .positions
    }

    #[test]
    fn every_token_when_interval_is_one() {
        assert_eq!(plan(&["cat", "sat", "mats", "dog"], 1, SkipRules::all()), [0, 1, 2, 3]);
    }

    #[test]
    fn counter_skips_ineligible_tokens() {
        // eligible subsequence is [cat, sat, mats]; the second one is masked
        assert_eq!(plan(&["the", "cat", "sat", "on", "mats"], 2, SkipRules::all()), [2]);
    }

    #[test]
    fn all_stopwords_yield_empty_plan() {
        assert!(plan(&["she", "will", "not", "be", "there"], 1, SkipRules::all()).is_empty());
        assert!(plan(&[], 1, SkipRules::all()).is_empty());
    }

    #[test]
    fn respects_disabled_skip_rules() {
        let pieces = ["the", "cat", ",", "un", "##break", "##able"];
        assert_eq!(plan(&pieces, 1, SkipRules::all()), [1, 3]);
        assert_eq!(plan(&pieces, 1, SkipRules::none()), [0, 1, 2, 3, 4, 5]);
        assert_eq!(plan(&pieces, 2, SkipRules::none()), [1, 3, 5]);
    }
}
