//! Encoding and decoding of bit strings as token substitutions.

mod candidates;
mod safety;

use std::sync::Arc;

pub use candidates::{candidate_order, chunk_size, Candidate, CandidateSet};
pub use safety::{check_retokenization_safe, Guard};

use crate::backend::{Distribution, LanguageModel, MaskedSentence, SentenceKey};
use crate::bits::{BitCursor, BitString, HEADER_BITS};
use crate::config::{Framing, StegoConfig};
use crate::error::{Error, Result};
use crate::planner::{compute_mask_plan, MaskPlan};
use crate::tokenizer::{detokenize, sentence_spans, StopwordList, TokenSeq, WordPiece, MASK};

/// Outcome of a successful encode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StegoResult {
    pub stego_text: String,
    /// Bits placed into the text, padding and any length header included.
    pub bits_embedded: usize,
    /// Zero bits appended to complete the final chunk.
    pub padding_bits: usize,
    pub sentences_used: usize,
    /// Planned positions that carried at least one bit.
    pub positions_edited: usize,
    /// Planned positions reached before the message ran out.
    pub positions_visited: usize,
    /// Visited positions with fewer than two candidates.
    pub positions_zero_capacity: usize,
}

/// One sentence after encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceEncoding {
    pub tokens: TokenSeq,
    pub positions_edited: usize,
    pub positions_visited: usize,
    pub positions_zero_capacity: usize,
}

/// Planned positions of one cover sentence and how many of them offer an
/// above-threshold eligible candidate that fails the token check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SentenceAudit {
    pub masked_positions: usize,
    pub unsafe_positions: usize,
}

/// The shared protocol: configuration, tokenizer and stopword list.
#[derive(Clone, Debug)]
pub struct Stegosystem {
    config: StegoConfig,
    tokenizer: WordPiece,
    stopwords: Arc<StopwordList>,
}

impl Stegosystem {
    pub fn new(config: StegoConfig, tokenizer: WordPiece, stopwords: Arc<StopwordList>) -> Result<Self> {
        Ok(Self {
            config: config.validate()?,
            tokenizer,
            stopwords,
        })
    }

    /// The same tokenizer and stopwords under another configuration.
    pub fn with_config(&self, config: StegoConfig) -> Result<Self> {
        Self::new(config, self.tokenizer.clone(), Arc::clone(&self.stopwords))
    }

    pub fn config(&self) -> &StegoConfig {
        &self.config
    }

    pub fn tokenizer(&self) -> &WordPiece {
        &self.tokenizer
    }

    pub fn stopwords(&self) -> &StopwordList {
        &self.stopwords
    }

    pub fn plan(&self, tokens: &TokenSeq) -> MaskPlan {
        compute_mask_plan(tokens, self.config.interval, &self.config.skip, &self.stopwords)
    }

    /// The message as it is laid out in the text.
    pub fn frame(&self, message: &BitString) -> Result<BitString> {
        if message.is_empty() {
            return Err(Error::MessageLength {
                expected: 1,
                actual: 0,
            });
        }
        match self.config.framing {
            Framing::Fixed(expected) if message.len() != expected => Err(Error::MessageLength {
                expected,
                actual: message.len(),
            }),
            Framing::Fixed(_) => Ok(message.clone()),
            Framing::Header => {
                let len = u32::try_from(message.len()).map_err(|_| Error::MessageLength {
                    expected: u32::MAX as usize,
                    actual: message.len(),
                })?;
                let mut framed = BitString::from_uint(u64::from(len), HEADER_BITS);
                framed.extend_from(message);
                Ok(framed)
            }
        }
    }

    pub fn encode(&self, cover: &str, message: &BitString, model: &dyn LanguageModel) -> Result<StegoResult> {
        self.encode_document(cover, message, model, None)
    }

    /// Encodes with sentence keys scoped to a corpus document.
    pub fn encode_document(
        &self,
        cover: &str,
        message: &BitString,
        model: &dyn LanguageModel,
        document: Option<usize>,
    ) -> Result<StegoResult> {
        self.check_model(model)?;
        let framed = self.frame(message)?;
        let required = framed.len();
        let mut cursor = BitCursor::new(framed);
        let mut result = StegoResult {
            stego_text: String::new(),
            bits_embedded: 0,
            padding_bits: 0,
            sentences_used: 0,
            positions_edited: 0,
            positions_visited: 0,
            positions_zero_capacity: 0,
        };
        let mut previous_end = None;
        for (index, span) in sentence_spans(cover).into_iter().enumerate() {
            if cursor.is_exhausted() {
                break;
            }
            let tokens = self.tokenizer.tokenize(&cover[span.clone()]);
            let key = SentenceKey::new(document, index);
            let sentence = self.encode_sentence(&tokens, key, &mut cursor, model)?;
            if let Some(end) = previous_end {
                result.stego_text.push_str(&cover[end..span.start]);
            }
            result.stego_text.push_str(&detokenize(&sentence.tokens));
            previous_end = Some(span.end);
            result.sentences_used += 1;
            result.positions_edited += sentence.positions_edited;
            result.positions_visited += sentence.positions_visited;
            result.positions_zero_capacity += sentence.positions_zero_capacity;
        }
        if !cursor.is_exhausted() {
            return Err(Error::CapacityExhausted {
                bits_embedded: cursor.offset(),
                required,
            });
        }
        result.bits_embedded = cursor.offset();
        result.padding_bits = cursor.padding();
        Ok(result)
    }

    /// Substitutes tokens at the planned positions of one sentence, reading
    /// chunks from `cursor`. Positions after the cursor is exhausted keep
    /// their cover token.
    pub fn encode_sentence(
        &self,
        tokens: &TokenSeq,
        key: SentenceKey,
        cursor: &mut BitCursor,
        model: &dyn LanguageModel,
    ) -> Result<SentenceEncoding> {
        let mut out = SentenceEncoding {
            tokens: tokens.clone(),
            positions_edited: 0,
            positions_visited: 0,
            positions_zero_capacity: 0,
        };
        let plan = self.plan(tokens);
        if plan.is_empty() || cursor.is_exhausted() {
            return Ok(out);
        }
        let dists = self.predict(tokens, &plan, key, model)?;
        let positions = plan.positions();
        for (i, (&position, dist)) in positions.iter().zip(&dists).enumerate() {
            if cursor.is_exhausted() {
                break;
            }
            out.positions_visited += 1;
            let set = self.candidates(dist, &out.tokens, position, &positions[i + 1..])?;
            let bits = set.chunk_bits();
            if bits == 0 {
                out.positions_zero_capacity += 1;
                continue;
            }
            let chunk = cursor.read(bits as usize);
            let chosen = set.get(chunk).expect("chunk value below 2^n indexes the set");
            out.tokens.replace(position, &chosen.piece);
            out.positions_edited += 1;
        }
        Ok(out)
    }

    pub fn decode(&self, stego: &str, model: &dyn LanguageModel) -> Result<BitString> {
        self.decode_document(stego, model, None)
    }

    pub fn decode_document(
        &self,
        stego: &str,
        model: &dyn LanguageModel,
        document: Option<usize>,
    ) -> Result<BitString> {
        self.check_model(model)?;
        let fixed = match self.config.framing {
            Framing::Fixed(bits) => Some(bits),
            Framing::Header => None,
        };
        let mut bits = BitString::new();
        let mut target = fixed;
        'sentences: for (index, span) in sentence_spans(stego).into_iter().enumerate() {
            let tokens = self.tokenizer.tokenize(&stego[span]);
            let plan = self.plan(&tokens);
            if plan.is_empty() {
                continue;
            }
            let key = SentenceKey::new(document, index);
            let dists = self.predict(&tokens, &plan, key, model)?;
            let positions = plan.positions();
            for (i, (&position, dist)) in positions.iter().zip(&dists).enumerate() {
                let set = self.candidates(dist, &tokens, position, &positions[i + 1..])?;
                let width = set.chunk_bits();
                if width == 0 {
                    continue;
                }
                let token = &tokens.tokens()[position];
                let rank = set.rank_of(token.piece()).ok_or_else(|| Error::DecodeMismatch {
                    sentence: index,
                    position,
                    token: token.class_form().to_owned(),
                })?;
                bits.push_uint(rank, width as usize);
                if target.is_none() && bits.len() >= HEADER_BITS {
                    let declared = bits.read_uint(0, HEADER_BITS).expect("header bits present");
                    target = Some(HEADER_BITS + declared as usize);
                }
                if target.is_some_and(|t| bits.len() >= t) {
                    break 'sentences;
                }
            }
        }
        match (fixed, target) {
            (Some(expected), _) if bits.len() < expected => Err(Error::MessageUnderflow {
                expected,
                recovered: bits.len(),
            }),
            (Some(expected), _) => Ok(bits.prefix(expected)),
            (None, Some(total)) if bits.len() >= total => {
                Ok(BitString::from_bits(bits.iter().skip(HEADER_BITS).take(total - HEADER_BITS)))
            }
            (None, Some(total)) => Err(Error::HeaderUnderflow {
                declared: total - HEADER_BITS,
                recovered: bits.len().saturating_sub(HEADER_BITS),
            }),
            (None, None) => Err(Error::TruncatedHeader {
                width: HEADER_BITS,
                recovered: bits.len(),
            }),
        }
    }

    /// Counts, in fast mode on cover text, the planned positions that offer
    /// at least one candidate failing the token check.
    pub fn audit_sentence(
        &self,
        tokens: &TokenSeq,
        key: SentenceKey,
        model: &dyn LanguageModel,
    ) -> Result<SentenceAudit> {
        let plan = self.plan(tokens);
        if plan.is_empty() {
            return Ok(SentenceAudit::default());
        }
        let dists = self.predict(tokens, &plan, key, model)?;
        let mut audit = SentenceAudit {
            masked_positions: plan.len(),
            unsafe_positions: 0,
        };
        for (&position, dist) in plan.positions().iter().zip(&dists) {
            let set = self.candidate_set(dist, tokens, position, &[], false)?;
            if set
                .pieces()
                .any(|piece| !check_retokenization_safe(&self.tokenizer, tokens, position, piece))
            {
                audit.unsafe_positions += 1;
            }
        }
        Ok(audit)
    }

    /// Candidates for `position` of `tokens`; `pending` lists the planned
    /// positions after it. The safe-mode guard applies when `safe` is set.
    pub fn candidate_set(
        &self,
        dist: &Distribution,
        tokens: &TokenSeq,
        position: usize,
        pending: &[usize],
        safe: bool,
    ) -> Result<CandidateSet> {
        let vocab = self.tokenizer.vocab();
        if safe {
            let guard = Guard::new(&self.tokenizer, tokens, position, pending);
            CandidateSet::build(dist, vocab, &self.config, &self.stopwords, |piece| guard.admits(piece))
        } else {
            CandidateSet::build(dist, vocab, &self.config, &self.stopwords, |_| true)
        }
    }

    fn candidates(
        &self,
        dist: &Distribution,
        tokens: &TokenSeq,
        position: usize,
        pending: &[usize],
    ) -> Result<CandidateSet> {
        self.candidate_set(dist, tokens, position, pending, self.config.safe_mode)
    }

    fn predict(
        &self,
        tokens: &TokenSeq,
        plan: &MaskPlan,
        key: SentenceKey,
        model: &dyn LanguageModel,
    ) -> Result<Vec<Distribution>> {
        let dists = model.predict(&masked_sentence(tokens, plan, key))?;
        if dists.len() != plan.len() {
            return Err(Error::Backend(format!(
                "expected {} distributions for sentence {key}, got {}",
                plan.len(),
                dists.len()
            )));
        }
        Ok(dists)
    }

    fn check_model(&self, model: &dyn LanguageModel) -> Result<()> {
        let expected = self.tokenizer.vocab().len();
        match model.vocab_size() {
            Some(size) if size != expected => Err(Error::Vocabulary(format!(
                "backend vocabulary has {size} entries, tokenizer has {expected}"
            ))),
            _ => Ok(()),
        }
    }
}

/// The model input for one sentence: every planned position replaced by the
/// mask symbol.
pub fn masked_sentence(tokens: &TokenSeq, plan: &MaskPlan, key: SentenceKey) -> MaskedSentence {
    let pieces = tokens
        .pieces()
        .enumerate()
        .map(|(i, piece)| if plan.contains(i) { MASK } else { piece }.to_owned())
        .collect();
    MaskedSentence {
        key,
        pieces,
        positions: plan.positions().to_vec(),
    }
}
