//! Generated corpora and table stubs for experiments without a real model.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stego_core::{split_sentences, WordPiece};

use crate::corpus::Corpus;

const STARTERS: &[&str] = &["The", "A", "She", "They", "We", "Mary", "John", "In", "After", "This"];
const CONTENT: &[&str] = &[
    "found", "book", "river", "garden", "music", "village", "bridge", "cold", "green",
    "notebook", "letter", "coffee", "bread", "castle", "kitchen", "heard", "wrote", "moved",
    "market", "teacher", "family", "story", "window", "forest", "mountain", "strong", "small",
    "old", "new", "played", "house", "city", "road", "dogs", "cats", "quickly", "often",
    "morning", "water", "notes", "handbook",
];
const FUNCTION: &[&str] = &["the", "a", "of", "and", "to", "in", "was", "with", "from", "it"];
const TERMINATORS: &[&str] = &[".", ".", ".", "!", "?"];

fn sentence(rng: &mut impl Rng) -> String {
    let mut words = vec![STARTERS.choose(rng).unwrap().to_string()];
    for _ in 0..rng.gen_range(6..16) {
        let pool = if rng.gen_bool(0.35) { FUNCTION } else { CONTENT };
        words.push(pool.choose(rng).unwrap().to_string());
        if rng.gen_bool(0.06) {
            words.last_mut().unwrap().push(',');
        }
    }
    let mut text = words.join(" ");
    text.push_str(TERMINATORS.choose(rng).unwrap());
    text
}

/// `documents` documents of at least `min_words` whitespace words each.
pub fn synthetic_corpus(seed: u64, documents: usize, min_words: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let docs = (0..documents)
        .map(|_| {
            let mut sentences = Vec::new();
            let mut words = 0;
            while words < min_words {
                let s = sentence(&mut rng);
                words += s.split_whitespace().count();
                sentences.push(s);
            }
            sentences.join(" ")
        })
        .collect();
    Corpus::new(docs)
}

/// A table stub with a row for every token of every sentence in `corpus`.
///
/// Tokens that are content words get several content-word candidates with
/// decreasing probability. Every other token, stopwords included, is
/// predicted to stay as it is: it gets 0.9 itself plus one tail entry of
/// probability 0.005, so it never offers more than one candidate at the
/// usual thresholds.
pub fn slot_table(corpus: &Corpus, tokenizer: &WordPiece, seed: u64) -> String {
    const WEIGHTS: [f64; 6] = [0.3, 0.2, 0.15, 0.1, 0.08, 0.05];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for (j, doc) in corpus.documents().iter().enumerate() {
        for (k, text) in split_sentences(doc).into_iter().enumerate() {
            let tokens = tokenizer.tokenize(text);
            for (i, token) in tokens.iter().enumerate() {
                let piece = token.piece();
                write!(out, "d{}.s{}\t{i}\t", j + 1, k + 1).unwrap();
                if CONTENT.contains(&piece) {
                    let picks: Vec<&&str> = CONTENT.choose_multiple(&mut rng, WEIGHTS.len()).collect();
                    let entries: Vec<String> = picks
                        .iter()
                        .zip(WEIGHTS)
                        .map(|(word, w)| format!("{word}:{w}"))
                        .collect();
                    out.push_str(&entries.join(","));
                } else {
                    let tail = if piece == "of" { "and" } else { "of" };
                    write!(out, "{piece}:0.9,{tail}:0.005").unwrap();
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use stego_core::{TableStub, Vocab};

    use super::*;

    #[test]
    fn corpus_is_deterministic_and_long_enough() {
        let a = synthetic_corpus(9, 5, 120);
        assert_eq!(a, synthetic_corpus(9, 5, 120));
        assert_ne!(a, synthetic_corpus(10, 5, 120));
        assert_eq!(a.len(), 5);
        assert!(a.documents().iter().all(|d| d.split_whitespace().count() >= 120));
    }

    #[test]
    fn table_covers_every_token() {
        let vocab = Arc::new(Vocab::demo());
        let tokenizer = WordPiece::new(vocab.clone());
        let corpus = synthetic_corpus(3, 4, 60);
        let text = slot_table(&corpus, &tokenizer, 1);
        let rows: usize = corpus
            .documents()
            .iter()
            .flat_map(|d| split_sentences(d))
            .map(|s| tokenizer.tokenize(s).len())
            .sum();
        assert_eq!(text.lines().count(), rows);
        let table = TableStub::parse(&text, &vocab).unwrap();
        assert_eq!(table.len(), rows);
    }
}
