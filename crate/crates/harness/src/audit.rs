use rayon::prelude::*;
use stego_core::{split_sentences, LanguageModel, Result, SentenceAudit, SentenceKey, Stegosystem};

use crate::capacity::ratio;
use crate::corpus::Corpus;

/// How often a fast-mode candidate list would contain a token that breaks
/// retokenization.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DistortionReport {
    pub masked_positions: usize,
    pub positions_with_unsafe_candidate: usize,
    pub rate: f64,
}

pub fn audit_distortion(
    corpus: &Corpus,
    system: &Stegosystem,
    model: &dyn LanguageModel,
) -> Result<DistortionReport> {
    let per_doc: Vec<Result<SentenceAudit>> = corpus
        .documents()
        .par_iter()
        .enumerate()
        .map(|(doc, text)| {
            let mut total = SentenceAudit::default();
            for (k, sentence) in split_sentences(text).into_iter().enumerate() {
                let tokens = system.tokenizer().tokenize(sentence);
                let audit = system.audit_sentence(&tokens, SentenceKey::new(Some(doc), k), model)?;
                total.masked_positions += audit.masked_positions;
                total.unsafe_positions += audit.unsafe_positions;
            }
            Ok(total)
        })
        .collect();

    let mut report = DistortionReport::default();
    for audit in per_doc {
        let audit = audit?;
        report.masked_positions += audit.masked_positions;
        report.positions_with_unsafe_candidate += audit.unsafe_positions;
    }
    report.rate = ratio(report.positions_with_unsafe_candidate, report.masked_positions);
    Ok(report)
}
