//! Edit-based linguistic steganography with a masked language model.
//!
//! A secret bit string is hidden in a cover text by replacing every `f`-th
//! eligible token with one of the model's high-probability alternatives. The
//! receiver recomputes the same positions and candidate lists from the stego
//! text alone and reads the bits back from the rank of each token.
//!
//! ```
//! use std::sync::Arc;
//! use stego_core::{BitString, HashStub, StegoConfig, Stegosystem, StopwordList, Vocab, WordPiece};
//!
//! let vocab = Arc::new(Vocab::demo());
//! let system = Stegosystem::new(
//!     StegoConfig::default().with_interval(1),
//!     WordPiece::new(vocab.clone()),
//!     Arc::new(StopwordList::english()),
//! )
//! .unwrap();
//! let model = HashStub::new(7, vocab.len()).unwrap();
//! let cover = "Mary found a notebook near the river. The garden was green and quiet. \
//!              They heard music from the village bridge. Paris felt cold that morning.";
//! let message = BitString::from_hex("A", 4).unwrap();
//! if let Ok(result) = system.encode(cover, &message, &model) {
//!     assert_eq!(system.decode(&result.stego_text, &model).unwrap(), message);
//! }
//! ```

pub mod backend;
pub mod bits;
pub mod codec;
pub mod config;
mod digest;
pub mod error;
pub mod planner;
pub mod protocol;
pub mod tokenizer;

pub use backend::{Distribution, HashStub, LanguageModel, MaskedSentence, SentenceKey, TableStub};
pub use bits::{BitCursor, BitString, HEADER_BITS};
pub use codec::{
    check_retokenization_safe, chunk_size, CandidateSet, SentenceAudit, StegoResult, Stegosystem,
};
pub use config::{Framing, SkipRules, StegoConfig};
pub use digest::sha256_hex;
pub use error::{Error, Result};
pub use planner::{compute_mask_plan, MaskPlan};
pub use protocol::ProtocolDescriptor;
pub use tokenizer::{
    classify, detokenize, split_sentences, EligibilityClass, StopwordList, Token, TokenSeq, Vocab,
    WordPiece,
};
