//! Substitution checks that keep encoder and decoder in lockstep.
//!
//! [`check_retokenization_safe`] catches substitutions whose text segments
//! differently when tokenized again. [`Guard`] extends it into the safe-mode
//! filter: besides the token check it keeps each candidate's token class,
//! refuses to edit a word that still contains a later planned position, and
//! refuses edits that could create or remove a sentence boundary.
//!
//! The encoder evaluates the guard with earlier planned positions already
//! holding stego tokens and later ones still holding cover tokens; the
//! decoder sees stego tokens everywhere. Every predicate that depends on a
//! later planned position is treated as unknown, so both sides reach the
//! same verdict.

use std::ops::Range;

use crate::tokenizer::{
    chunk_ends_sentence, chunk_starts_sentence, detokenize, is_continuation, is_punct_only,
    TokenSeq, WordPiece, CONTINUATION_PREFIX,
};

/// True iff tokenizing the detokenized text of `tokens` with `candidate` at
/// `position` gives back exactly that edited sequence.
pub fn check_retokenization_safe(
    tokenizer: &WordPiece,
    tokens: &TokenSeq,
    position: usize,
    candidate: &str,
) -> bool {
    let edited = tokens.with_replacement(position, candidate);
    let again = tokenizer.tokenize(&detokenize(&edited));
    again.len() == edited.len() && again.pieces().eq(edited.pieces())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    fn known(value: bool) -> Self {
        if value {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }
}

/// Safe-mode filter for the candidates of one planned position.
pub struct Guard<'a> {
    tokenizer: &'a WordPiece,
    tokens: &'a TokenSeq,
    position: usize,
    pending: &'a [usize],
    chunks: Vec<Range<usize>>,
    chunk: usize,
    word_open: bool,
}

impl<'a> Guard<'a> {
    /// `pending` lists the planned positions after `position`.
    pub fn new(
        tokenizer: &'a WordPiece,
        tokens: &'a TokenSeq,
        position: usize,
        pending: &'a [usize],
    ) -> Self {
        let chunks = chunk_ranges(tokens);
        let chunk = chunks
            .iter()
            .position(|c| c.contains(&position))
            .expect("position lies inside the sentence");
        let word_open = tokens.get(position).is_some_and(|t| !t.is_punct()) && {
            let mut end = position + 1;
            while tokens
                .get(end)
                .is_some_and(|t| !t.space_before() && !t.is_punct())
            {
                end += 1;
            }
            pending.iter().any(|&p| p < end)
        };
        Self {
            tokenizer,
            tokens,
            position,
            pending,
            chunks,
            chunk,
            word_open,
        }
    }

    pub fn admits(&self, candidate: &str) -> bool {
        let original = &self.tokens.tokens()[self.position];
        let surface = candidate.strip_prefix(CONTINUATION_PREFIX).unwrap_or(candidate);
        if self.word_open
            || is_continuation(candidate) != original.is_continuation()
            || is_punct_only(surface) != original.is_punct()
        {
            return false;
        }
        let edited = self.tokens.with_replacement(self.position, candidate);
        self.boundaries_hold(&edited)
            && check_retokenization_safe(self.tokenizer, self.tokens, self.position, candidate)
    }

    fn boundaries_hold(&self, edited: &TokenSeq) -> bool {
        let i = self.chunk;
        let last = self.chunks.len() - 1;
        if self.head(i).contains(&self.position) {
            let before = if i == 0 {
                self.starts(edited, 0) == Tri::True
            } else {
                self.ends(edited, i - 1).and(self.starts(edited, i)) == Tri::False
            };
            if !before {
                return false;
            }
        }
        if i == last {
            self.ends(edited, i) == Tri::True
        } else {
            self.ends(edited, i).and(self.starts(edited, i + 1)) == Tri::False
        }
    }

    /// Leading punctuation tokens of a chunk plus its first word token.
    fn head(&self, chunk: usize) -> Range<usize> {
        let range = self.chunks[chunk].clone();
        let first_word = range
            .clone()
            .find(|&k| !self.tokens.tokens()[k].is_punct())
            .unwrap_or(range.end - 1);
        range.start..first_word + 1
    }

    fn is_pending(&self, range: &Range<usize>) -> bool {
        self.pending.iter().any(|p| range.contains(p))
    }

    fn ends(&self, edited: &TokenSeq, chunk: usize) -> Tri {
        let range = &self.chunks[chunk];
        if self.is_pending(range) {
            Tri::Unknown
        } else {
            Tri::known(chunk_ends_sentence(&chunk_text(edited, range.clone())))
        }
    }

    fn starts(&self, edited: &TokenSeq, chunk: usize) -> Tri {
        if self.is_pending(&self.head(chunk)) {
            Tri::Unknown
        } else {
            Tri::known(chunk_starts_sentence(&chunk_text(edited, self.chunks[chunk].clone())))
        }
    }
}

/// Token ranges of the whitespace-delimited chunks of a sentence.
fn chunk_ranges(tokens: &TokenSeq) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (k, token) in tokens.iter().enumerate().skip(1) {
        if token.space_before() && !token.is_continuation() {
            out.push(start..k);
            start = k;
        }
    }
    if !tokens.is_empty() {
        out.push(start..tokens.len());
    }
    out
}

fn chunk_text(tokens: &TokenSeq, range: Range<usize>) -> String {
    tokens.tokens()[range].iter().map(|t| t.surface()).collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::tokenizer::Vocab;

    fn demo() -> WordPiece {
        WordPiece::new(Arc::new(Vocab::demo()))
    }

    #[test]
    fn token_check_examples() {
        let wp = demo();
        let seq = wp.tokenize("unbreakable");
        assert!(!check_retokenization_safe(&wp, &seq, 1, "##us"));
        let seq = wp.tokenize("She will marry him");
        assert!(check_retokenization_safe(&wp, &seq, 2, "wed"));
        assert!(check_retokenization_safe(&wp, &seq, 2, "book"));
    }

    #[test]
    fn guard_keeps_token_class() {
        let wp = demo();
        let seq = wp.tokenize("She will marry him.");
        let guard = Guard::new(&wp, &seq, 2, &[]);
        assert!(guard.admits("wed"));
        assert!(!guard.admits("##s"));
        assert!(!guard.admits(","));
    }

    #[test]
    fn guard_blocks_words_with_later_positions() {
        let wp = demo();
        let seq = wp.tokenize("We saw plays.");
        assert_eq!(seq.pieces().collect::<Vec<_>>(), ["We", "saw", "play", "##s", "."]);
        assert!(Guard::new(&wp, &seq, 2, &[]).admits("run"));
        assert!(!Guard::new(&wp, &seq, 2, &[3]).admits("run"));
        // "note" + "s" would merge into the whole word "notes"
        assert!(!Guard::new(&wp, &seq, 2, &[]).admits("note"));
    }

    #[test]
    fn guard_preserves_sentence_boundaries() {
        let wp = demo();
        let seq = wp.tokenize("Mary saw dogs.");
        // sentence-initial head must stay capitalized
        let guard = Guard::new(&wp, &seq, 0, &[]);
        assert!(!guard.admits("cats"));
        assert!(guard.admits("Basel"));
        // the final chunk must still end the sentence
        let seq = wp.tokenize("We saw Geneva.");
        let guard = Guard::new(&wp, &seq, 2, &[]);
        assert!(guard.admits("Basel"));
        assert!(!guard.admits("Dr"));
    }

    #[test]
    fn pending_chunks_make_boundaries_unknown() {
        let wp = demo();
        let seq = wp.tokenize("We saw Mr. Smith there.");
        assert_eq!(seq.pieces().nth(2), Some("Mr"));
        // "cats." followed by "Smith" would split the sentence; with "Smith"
        // still pending the outcome is unknown
        assert!(!Guard::new(&wp, &seq, 2, &[4]).admits("cats"));
        assert!(!Guard::new(&wp, &seq, 2, &[]).admits("cats"));
        assert!(Guard::new(&wp, &seq, 2, &[4]).admits("Dr"));
    }
}
