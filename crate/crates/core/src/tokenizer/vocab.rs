use std::collections::HashMap;
use std::path::Path;

use crate::digest::sha256_hex;
use crate::error::{Error, Result};

pub type TokenId = u32;

pub const UNK: &str = "[UNK]";
pub const MASK: &str = "[MASK]";
pub const CLS: &str = "[CLS]";
pub const SEP: &str = "[SEP]";
pub const PAD: &str = "[PAD]";

const DEMO_VOCAB: &str = include_str!("../../data/vocab_demo.txt");

/// Line-indexed token vocabulary: the token on line `i` (0-based) has id `i`.
#[derive(Clone, Debug)]
pub struct Vocab {
    pieces: Vec<String>,
    index: HashMap<String, TokenId>,
    unk: TokenId,
    mask: TokenId,
    digest: String,
}

impl Vocab {
    pub fn from_text(text: &str) -> Result<Self> {
        let pieces: Vec<String> = text.lines().map(|l| l.trim_end_matches('\r').to_owned()).collect();
        let mut index = HashMap::with_capacity(pieces.len());
        for (i, piece) in pieces.iter().enumerate() {
            if piece.is_empty() {
                return Err(Error::Vocabulary(format!("empty token on line {}", i + 1)));
            }
            if index.insert(piece.clone(), i as TokenId).is_some() {
                return Err(Error::Vocabulary(format!("duplicate token {piece:?} on line {}", i + 1)));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Vocabulary(format!("missing special token {name}")))
        };
        let unk = lookup(UNK)?;
        let mask = lookup(MASK)?;
        Ok(Self {
            pieces,
            index,
            unk,
            mask,
            digest: sha256_hex(text.as_bytes()),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = String::from_utf8(bytes)
            .map_err(|e| Error::Vocabulary(format!("{} is not UTF-8: {e}", path.display())))?;
        Self::from_text(&text)
    }

    /// Small English vocabulary shipped for demos and tests.
    pub fn demo() -> Self {
        Self::from_text(DEMO_VOCAB).expect("bundled vocabulary is well formed")
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn id(&self, piece: &str) -> Option<TokenId> {
        self.index.get(piece).copied()
    }

    pub fn contains(&self, piece: &str) -> bool {
        self.index.contains_key(piece)
    }

    pub fn piece(&self, id: TokenId) -> Option<&str> {
        self.pieces.get(id as usize).map(String::as_str)
    }

    pub fn pieces(&self) -> impl Iterator<Item = &str> {
        self.pieces.iter().map(String::as_str)
    }

    pub fn unk_id(&self) -> TokenId {
        self.unk
    }

    pub fn mask_id(&self) -> TokenId {
        self.mask
    }

    /// Bracketed control symbols such as `[CLS]` or `[unused3]`; never
    /// offered as substitution candidates.
    pub fn is_special(&self, id: TokenId) -> bool {
        self.piece(id).is_some_and(is_special_piece)
    }

    /// SHA-256 of the vocabulary file bytes, lowercase hex.
    pub fn digest(&self) -> &str {
        &self.digest
    }
}

pub fn is_special_piece(piece: &str) -> bool {
    piece.len() > 2 && piece.starts_with('[') && piece.ends_with(']')
}
