//! Rule-based sentence splitting.
//!
//! The text is viewed as whitespace-delimited chunks. A sentence ends after a
//! chunk when [`chunk_ends_sentence`] holds for it and the following chunk
//! satisfies [`chunk_starts_sentence`] (or there is no following chunk).
//! The codec evaluates the same two predicates on token chunks, so sender
//! and receiver agree on every boundary.

use std::ops::Range;

/// Version tag of the splitting rules, recorded in protocol descriptors.
pub const SPLITTER_VERSION: &str = "chunk-rules-1";

/// Words that do not end a sentence when followed by a single period.
/// Matched case-sensitively against the chunk with its period, trailing
/// closing marks and leading opening marks removed.
pub const ABBREVIATIONS: &[&str] = &[
    "Mr", "Mrs", "Ms", "Dr", "Prof", "Sr", "Jr", "St", "Mt", "Gen", "Col", "Lt", "Sgt", "Capt",
    "Rev", "Hon", "Gov", "Sen", "Rep", "Inc", "Ltd", "Co", "Corp", "Bros", "vs", "etc", "approx",
    "e.g", "i.e", "cf", "al", "No", "Nos", "Fig", "Figs", "Vol", "pp", "Jan", "Feb", "Mar", "Apr",
    "Jun", "Jul", "Aug", "Sep", "Sept", "Oct", "Nov", "Dec", "U.S", "U.K", "U.N", "a.m", "p.m",
];

const OPENERS: &[char] = &['"', '\'', '(', '[', '{', '\u{201c}', '\u{2018}'];
const CLOSERS: &[char] = &['"', '\'', ')', ']', '}', '\u{201d}', '\u{2019}'];
const TERMINATORS: &[char] = &['.', '!', '?'];

/// True when the chunk closes a sentence on its own side: it ends with
/// `.`, `!` or `?` (optionally followed by closing quotes or brackets) and,
/// when the terminator is a lone period, the preceding word is not a listed
/// abbreviation.
pub fn chunk_ends_sentence(chunk: &str) -> bool {
    let body = chunk.trim_end_matches(CLOSERS);
    let word = body.trim_end_matches(TERMINATORS);
    let terminators = &body[word.len()..];
    if terminators.is_empty() {
        return false;
    }
    if terminators == "." {
        let word = word.trim_start_matches(OPENERS);
        if ABBREVIATIONS.contains(&word) {
            return false;
        }
    }
    true
}

/// True when the chunk, after any opening quotes or brackets, starts with an
/// uppercase letter.
pub fn chunk_starts_sentence(chunk: &str) -> bool {
    chunk
        .trim_start_matches(OPENERS)
        .chars()
        .next()
        .is_some_and(char::is_uppercase)
}

fn chunks(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for (at, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(s..at);
                start = None;
            }
            (false, None) => start = Some(at),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(s..text.len());
    }
    out
}

/// Byte ranges of the sentences in `text`. Everything outside the ranges is
/// whitespace.
pub fn sentence_spans(text: &str) -> Vec<Range<usize>> {
    let chunks = chunks(text);
    let mut spans = Vec::new();
    let mut start = None;
    for (i, chunk) in chunks.iter().enumerate() {
        let begin = *start.get_or_insert(chunk.start);
        let ends = chunk_ends_sentence(&text[chunk.clone()])
            && chunks
                .get(i + 1)
                .is_none_or(|next| chunk_starts_sentence(&text[next.clone()]));
        if ends || i + 1 == chunks.len() {
            spans.push(begin..chunk.end);
            start = None;
        }
    }
    spans
}

pub fn split_sentences(text: &str) -> Vec<&str> {
    sentence_spans(text).into_iter().map(|r| &text[r]).collect()
}
