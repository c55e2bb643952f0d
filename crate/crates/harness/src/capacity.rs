use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stego_core::{BitString, Error, Framing, LanguageModel, Result, Stegosystem};

use crate::corpus::Corpus;

pub const DEFAULT_MESSAGE_BITS: usize = 32;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CapacityReport {
    /// Message bits per whitespace-delimited word of the stego text.
    pub bits_per_word: f64,
    pub message_bits: usize,
    pub words: usize,
    /// Planned positions visited while embedding.
    pub positions_total: usize,
    pub positions_zero_capacity: usize,
    pub documents_processed: usize,
    /// Documents whose cover ran out before the message was embedded.
    pub documents_skipped: usize,
}

impl CapacityReport {
    pub fn zero_capacity_fraction(&self) -> f64 {
        ratio(self.positions_zero_capacity, self.positions_total)
    }
}

pub(crate) fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// The random message embedded into document `index`.
pub fn document_message(seed: u64, index: usize, bits: usize) -> BitString {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    BitString::from_bits((0..bits).map(|_| rng.gen::<bool>()))
}

struct DocumentOutcome {
    words: usize,
    visited: usize,
    zero: usize,
}

/// Embeds a fresh `message_bits`-bit random message into every document,
/// with fixed framing of that length, and aggregates over the documents
/// that had enough room.
pub fn measure_capacity(
    corpus: &Corpus,
    system: &Stegosystem,
    model: &dyn LanguageModel,
    message_bits: usize,
    seed: u64,
) -> Result<CapacityReport> {
    let system = system.with_config(system.config().with_framing(Framing::Fixed(message_bits)))?;
    let outcomes: Vec<Result<Option<DocumentOutcome>>> = corpus
        .documents()
        .par_iter()
        .enumerate()
        .map(|(index, doc)| {
            let message = document_message(seed, index, message_bits);
            match system.encode_document(doc, &message, model, Some(index)) {
                Ok(result) => Ok(Some(DocumentOutcome {
                    words: result.stego_text.split_whitespace().count(),
                    visited: result.positions_visited,
                    zero: result.positions_zero_capacity,
                })),
                Err(Error::CapacityExhausted { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut report = CapacityReport::default();
    for outcome in outcomes {
        match outcome? {
            Some(doc) => {
                report.documents_processed += 1;
                report.message_bits += message_bits;
                report.words += doc.words;
                report.positions_total += doc.visited;
                report.positions_zero_capacity += doc.zero;
            }
            None => report.documents_skipped += 1,
        }
    }
    report.bits_per_word = ratio(report.message_bits, report.words);
    Ok(report)
}
