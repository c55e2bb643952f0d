//! Subword tokenization shared bit-exactly by sender and receiver.
//!
//! Text is first split on whitespace and on every character that is neither
//! alphanumeric nor whitespace (each such character becomes its own token).
//! Each remaining word is segmented by greedy longest-match against the
//! vocabulary, continuation pieces carrying the `##` marker. Text is not
//! lowercased; the vocabulary is assumed to be cased.
//!
//! Every token remembers whether whitespace preceded it, so
//! [`detokenize`] reproduces the source text up to whitespace normalization
//! (runs collapse to one space, leading and trailing whitespace is dropped).
//! Unknown words keep their original spelling for the same reason.

mod classify;
mod sentence;
mod vocab;

use std::sync::Arc;

pub use classify::{classify, EligibilityClass, StopwordList};
pub use sentence::{
    chunk_starts_sentence, chunk_ends_sentence, sentence_spans, split_sentences, ABBREVIATIONS,
    SPLITTER_VERSION,
};
pub use vocab::{is_special_piece, TokenId, Vocab, CLS, MASK, PAD, SEP, UNK};

pub const CONTINUATION_PREFIX: &str = "##";

/// Words longer than this many characters map to the unknown token.
pub const MAX_WORD_CHARS: usize = 100;

/// Characters that always form a token of their own.
pub fn is_split_char(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}

/// True when every character of `s` is a split character.
pub fn is_punct_only(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_split_char)
}

pub fn is_continuation(piece: &str) -> bool {
    piece.starts_with(CONTINUATION_PREFIX)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    piece: String,
    space_before: bool,
    /// Original spelling of a word that mapped to the unknown token.
    original: Option<String>,
}

impl Token {
    pub fn new(piece: impl Into<String>, space_before: bool) -> Self {
        Self {
            piece: piece.into(),
            space_before,
            original: None,
        }
    }

    fn unknown(original: &str, space_before: bool) -> Self {
        Self {
            piece: UNK.to_owned(),
            space_before,
            original: Some(original.to_owned()),
        }
    }

    /// The vocabulary entry.
    pub fn piece(&self) -> &str {
        &self.piece
    }

    pub fn space_before(&self) -> bool {
        self.space_before
    }

    pub fn is_continuation(&self) -> bool {
        is_continuation(&self.piece)
    }

    /// Text this token contributes to the detokenized output.
    pub fn surface(&self) -> &str {
        match &self.original {
            Some(original) => original,
            None => self.piece.strip_prefix(CONTINUATION_PREFIX).unwrap_or(&self.piece),
        }
    }

    /// The surface form eligibility is judged on: the piece itself, or the
    /// original spelling for unknown words.
    pub fn class_form(&self) -> &str {
        self.original.as_deref().unwrap_or(&self.piece)
    }

    /// Whether this token came from a single split character.
    pub fn is_punct(&self) -> bool {
        is_punct_only(self.surface())
    }
}

/// An ordered sequence of subword tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSeq {
    tokens: Vec<Token>,
}

impl TokenSeq {
    pub fn new(tokens: Vec<Token>) -> Self {
        Self { tokens }
    }

    /// Builds a sequence from bare pieces with default attachment: continuation
    /// pieces and the closing marks `. , ; : ! ? ) ] } %` attach to the left,
    /// a token following `( [ { $` attaches to its opener, everything else is
    /// preceded by a space.
    pub fn from_pieces<S: AsRef<str>>(pieces: &[S]) -> Self {
        const CLOSING: &[&str] = &[".", ",", ";", ":", "!", "?", ")", "]", "}", "%"];
        const OPENING: &[&str] = &["(", "[", "{", "$"];
        let mut tokens: Vec<Token> = Vec::with_capacity(pieces.len());
        for piece in pieces {
            let piece = piece.as_ref();
            let space_before = match tokens.last() {
                None => false,
                Some(prev) => {
                    !is_continuation(piece)
                        && !CLOSING.contains(&piece)
                        && !OPENING.contains(&prev.piece())
                }
            };
            tokens.push(Token::new(piece, space_before));
        }
        Self { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Token> {
        self.tokens.get(index)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.tokens.iter()
    }

    pub fn pieces(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.tokens.iter().map(Token::piece)
    }

    pub fn continuation_flags(&self) -> Vec<bool> {
        self.tokens.iter().map(Token::is_continuation).collect()
    }

    /// Replaces the token at `index` with `piece`.
    ///
    /// A continuation piece attaches to its left neighbour; a word-initial
    /// piece replacing a continuation starts a new word; otherwise the
    /// original spacing is kept.
    pub fn replace(&mut self, index: usize, piece: &str) {
        let old = &self.tokens[index];
        let space_before = if is_continuation(piece) {
            false
        } else if old.is_continuation() {
            true
        } else {
            old.space_before
        };
        self.tokens[index] = Token::new(piece, space_before);
    }

    pub fn with_replacement(&self, index: usize, piece: &str) -> Self {
        let mut out = self.clone();
        out.replace(index, piece);
        out
    }
}

impl<'a> IntoIterator for &'a TokenSeq {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.tokens.iter()
    }
}

/// Joins tokens back into text: continuation pieces are glued to their left
/// neighbour, other tokens are preceded by one space iff they were preceded
/// by whitespace when tokenized.
pub fn detokenize(tokens: &TokenSeq) -> String {
    let mut out = String::new();
    for (i, token) in tokens.iter().enumerate() {
        if i > 0 && token.space_before && !token.is_continuation() {
            out.push(' ');
        }
        out.push_str(token.surface());
    }
    out
}

/// Greedy longest-match WordPiece tokenizer over a fixed vocabulary.
#[derive(Clone, Debug)]
pub struct WordPiece {
    vocab: Arc<Vocab>,
}

impl WordPiece {
    pub fn new(vocab: Arc<Vocab>) -> Self {
        Self { vocab }
    }

    pub fn vocab(&self) -> &Arc<Vocab> {
        &self.vocab
    }

    pub fn tokenize(&self, text: &str) -> TokenSeq {
        let mut tokens = Vec::new();
        let mut word_start: Option<usize> = None;
        let mut space_pending = false;

        for (at, c) in text.char_indices() {
            if c.is_whitespace() || is_split_char(c) {
                if let Some(start) = word_start.take() {
                    self.push_word(&text[start..at], space_pending, &mut tokens);
                    space_pending = false;
                }
                if c.is_whitespace() {
                    space_pending = true;
                } else {
                    let punct = &text[at..at + c.len_utf8()];
                    let space = space_pending && !tokens.is_empty();
                    tokens.push(if self.vocab.contains(punct) {
                        Token::new(punct, space)
                    } else {
                        Token::unknown(punct, space)
                    });
                    space_pending = false;
                }
            } else if word_start.is_none() {
                word_start = Some(at);
            }
        }
        if let Some(start) = word_start {
            self.push_word(&text[start..], space_pending, &mut tokens);
        }
        TokenSeq { tokens }
    }

    fn push_word(&self, word: &str, space_pending: bool, tokens: &mut Vec<Token>) {
        let space = space_pending && !tokens.is_empty();
        match self.segment(word) {
            Some(pieces) => {
                for (i, piece) in pieces.into_iter().enumerate() {
                    tokens.push(Token::new(piece, space && i == 0));
                }
            }
            None => tokens.push(Token::unknown(word, space)),
        }
    }

    /// Greedy longest-match segmentation, or `None` when some suffix of the
    /// word has no matching piece.
    fn segment(&self, word: &str) -> Option<Vec<String>> {
        let bounds: Vec<usize> = word
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(word.len()))
            .collect();
        if bounds.len() - 1 > MAX_WORD_CHARS {
            return None;
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        let mut candidate = String::with_capacity(word.len() + CONTINUATION_PREFIX.len());
        while start < bounds.len() - 1 {
            let mut found = None;
            for end in (start + 1..bounds.len()).rev() {
                candidate.clear();
                if start > 0 {
                    candidate.push_str(CONTINUATION_PREFIX);
                }
                candidate.push_str(&word[bounds[start]..bounds[end]]);
                if self.vocab.contains(&candidate) {
                    found = Some(end);
                    break;
                }
            }
            let end = found?;
            pieces.push(candidate.clone());
            start = end;
        }
        Some(pieces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> WordPiece {
        WordPiece::new(Arc::new(Vocab::demo()))
    }

    fn pieces(seq: &TokenSeq) -> Vec<&str> {
        seq.pieces().collect()
    }

    #[test]
    fn segments_into_continuation_pieces() {
        let wp = demo();
        assert_eq!(pieces(&wp.tokenize("unbreakable")), ["un", "##break", "##able"]);
        assert_eq!(pieces(&wp.tokenize("unusable")), ["un", "##usable"]);
        assert!(wp.tokenize("").is_empty());
        assert!(wp.tokenize("   \n ").is_empty());
    }

    #[test]
    fn splits_punctuation_and_keeps_spacing() {
        let wp = demo();
        let text = "Hello (world), it's 1990!";
        let seq = wp.tokenize(text);
        assert_eq!(
            pieces(&seq),
            ["He", "##l", "##l", "##o", "(", "world", ")", ",", "it", "'", "s", "1990", "!"]
        );
        assert_eq!(detokenize(&seq), text);
    }

    #[test]
    fn unknown_words_keep_their_spelling() {
        let wp = demo();
        let seq = wp.tokenize("caf\u{e9} ~ ok");
        assert_eq!(pieces(&seq), ["[UNK]", "[UNK]", "o", "##k"]);
        assert_eq!(seq.get(0).unwrap().class_form(), "caf\u{e9}");
        assert_eq!(detokenize(&seq), "caf\u{e9} ~ ok");
        assert_eq!(wp.tokenize(&detokenize(&seq)), seq);
    }

    #[test]
    fn overlong_words_are_unknown() {
        let wp = demo();
        let long = "a".repeat(MAX_WORD_CHARS + 1);
        assert_eq!(pieces(&wp.tokenize(&long)), ["[UNK]"]);
    }

    #[test]
    fn detokenize_hand_built_sequences() {
        assert_eq!(detokenize(&TokenSeq::from_pieces(&["un", "##break", "##able"])), "unbreakable");
        assert_eq!(detokenize(&TokenSeq::from_pieces::<&str>(&[])), "");
        assert_eq!(
            detokenize(&TokenSeq::from_pieces(&["She", "will", "wed", "him"])),
            "She will wed him"
        );
        assert_eq!(
            detokenize(&TokenSeq::from_pieces(&["a", "(", "b", ")", "."])),
            "a (b)."
        );
    }

    #[test]
    fn distorting_substitution_resegments() {
        let wp = demo();
        let seq = wp.tokenize("unbreakable");
        let edited = seq.with_replacement(1, "##us");
        assert_eq!(detokenize(&edited), "unusable");
        assert_eq!(pieces(&wp.tokenize(&detokenize(&edited))), ["un", "##usable"]);
    }

    #[test]
    fn replacement_spacing() {
        let mut seq = TokenSeq::from_pieces(&["un", "##break", "##able"]);
        seq.replace(1, "cat");
        assert_eq!(detokenize(&seq), "un catable");
        seq.replace(0, "##x");
        assert_eq!(detokenize(&seq), "x catable");
    }
}
