#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use stego_core::{StegoConfig, Stegosystem, StopwordList, Vocab, WordPiece};

pub const STARTERS: &[&str] = &["The", "A", "She", "They", "We", "Mary", "John", "In", "After", "This"];
pub const CONTENT: &[&str] = &[
    "found", "book", "river", "garden", "music", "village", "bridge", "cold", "green", "quiet",
    "notebook", "letter", "coffee", "bread", "castle", "kitchen", "heard", "wrote", "moved",
    "market", "teacher", "family", "story", "window", "forest", "mountain", "strong", "small",
    "old", "new", "played", "plays", "unbreakable", "notes", "handbook", "runs", "Geneva",
    "Paris", "morning", "water", "house", "city", "road", "dogs", "cats", "quickly", "often",
];
pub const FUNCTION: &[&str] = &["the", "a", "of", "and", "to", "in", "was", "with", "near", "from", "it"];
pub const TERMINATORS: &[&str] = &[".", ".", ".", "!", "?"];

pub fn system(config: StegoConfig) -> Stegosystem {
    Stegosystem::new(
        config,
        WordPiece::new(Arc::new(Vocab::demo())),
        Arc::new(StopwordList::english()),
    )
    .unwrap()
}

pub fn sentence(rng: &mut impl Rng) -> String {
    let mut words = vec![STARTERS.choose(rng).unwrap().to_string()];
    for _ in 0..rng.gen_range(5..14) {
        let word = if rng.gen_bool(0.35) {
            FUNCTION.choose(rng).unwrap()
        } else {
            CONTENT.choose(rng).unwrap()
        };
        words.push(word.to_string());
        if rng.gen_bool(0.08) {
            words.last_mut().unwrap().push(',');
        }
    }
    let mut text = words.join(" ");
    text.push_str(TERMINATORS.choose(rng).unwrap());
    text
}

pub fn cover(rng: &mut impl Rng, sentences: usize) -> String {
    (0..sentences).map(|_| sentence(rng)).collect::<Vec<_>>().join(" ")
}
