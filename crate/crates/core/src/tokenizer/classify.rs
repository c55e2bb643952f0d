use std::collections::HashSet;
use std::path::Path;

use crate::config::SkipRules;
use crate::digest::sha256_hex;
use crate::error::{Error, Result};

use super::is_continuation;

const ENGLISH_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

/// Why a token may or may not be masked or offered as a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EligibilityClass {
    Eligible,
    PunctOrNumber,
    Stopword,
    ContinuationSubword,
    Capitalized,
}

/// Lowercase stopword forms plus the digest of the file they came from.
#[derive(Clone, Debug)]
pub struct StopwordList {
    entries: HashSet<String>,
    digest: String,
}

impl StopwordList {
    /// One word per line; blank lines are ignored and entries are lowercased.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes)
            .map_err(|e| Error::Stopwords(format!("not UTF-8: {e}")))?;
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        Ok(Self {
            entries,
            digest: sha256_hex(bytes),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// The bundled 179-word English list.
    pub fn english() -> Self {
        Self::from_bytes(ENGLISH_STOPWORDS.as_bytes()).expect("bundled stopword list is UTF-8")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// SHA-256 of the raw file bytes, lowercase hex.
    pub fn digest(&self) -> &str {
        &self.digest
    }
}

/// Classifies a token surface form. Checks run in the order continuation
/// subword, punctuation or number, stopword, capitalized; a class is only
/// reported when its skip rule is enabled.
pub fn classify(token: &str, skip: &SkipRules, stopwords: &StopwordList) -> EligibilityClass {
    if skip.subwords && is_continuation(token) {
        EligibilityClass::ContinuationSubword
    } else if skip.punct_or_number && !token.chars().any(char::is_alphabetic) {
        EligibilityClass::PunctOrNumber
    } else if skip.stopwords && stopwords.contains(token) {
        EligibilityClass::Stopword
    } else if skip.capitalized && token.chars().any(char::is_uppercase) {
        EligibilityClass::Capitalized
    } else {
        EligibilityClass::Eligible
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_list_has_179_entries() {
        let list = StopwordList::english();
        assert_eq!(list.len(), 179);
        assert!(list.contains("the"));
        assert!(list.contains("The"));
        assert!(list.contains("don't"));
        assert!(!list.contains("marry"));
    }

    #[test]
    fn digest_tracks_content() {
        let a = StopwordList::from_bytes(b"the\nand\n").unwrap();
        let b = StopwordList::from_bytes(b"the\nand\n").unwrap();
        let c = StopwordList::from_bytes(b"the\nor\n").unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), c.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn precedence_and_flags() {
        let stop = StopwordList::english();
        let all = SkipRules::all();
        assert_eq!(classify("##able", &all, &stop), EligibilityClass::ContinuationSubword);
        assert_eq!(classify("the", &all, &stop), EligibilityClass::Stopword);
        assert_eq!(classify("Geneva", &all, &stop), EligibilityClass::Capitalized);
        assert_eq!(classify("1990", &all, &stop), EligibilityClass::PunctOrNumber);
        assert_eq!(classify(",", &all, &stop), EligibilityClass::PunctOrNumber);
        assert_eq!(classify("3rd", &all, &stop), EligibilityClass::Eligible);
        assert_eq!(classify("The", &all, &stop), EligibilityClass::Stopword);
        // "##1" is a continuation first, even though it is also numeric
        assert_eq!(classify("##1", &all, &stop), EligibilityClass::ContinuationSubword);

        let none = SkipRules::none();
        for token in ["##able", "the", "Geneva", "1990", ","] {
            assert_eq!(classify(token, &none, &stop), EligibilityClass::Eligible);
        }
    }
}
