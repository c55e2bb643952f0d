//! The protocol descriptor: everything sender and receiver must agree on,
//! as a `key=value` text file.

use std::fmt;
use std::path::Path;

use crate::backend::LanguageModel;
use crate::codec::Stegosystem;
use crate::config::{Framing, SkipRules, StegoConfig};
use crate::error::{Error, Result};
use crate::tokenizer::SPLITTER_VERSION;

pub const DESCRIPTOR_FORMAT: &str = "stego-protocol-1";

const KEYS: &[&str] = &[
    "format",
    "model",
    "vocab_sha256",
    "stopwords_sha256",
    "f",
    "p",
    "skip_punct_or_number",
    "skip_stopwords",
    "skip_subwords",
    "skip_capitalized",
    "safe_mode",
    "framing",
    "splitter",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolDescriptor {
    /// Backend identity, which embeds the model or table digest.
    pub model: String,
    pub vocab_digest: String,
    pub stopwords_digest: String,
    pub config: StegoConfig,
    pub splitter: String,
}

impl ProtocolDescriptor {
    pub fn new(system: &Stegosystem, model: &dyn LanguageModel) -> Self {
        Self {
            model: model.identity(),
            vocab_digest: system.tokenizer().vocab().digest().to_owned(),
            stopwords_digest: system.stopwords().digest().to_owned(),
            config: *system.config(),
            splitter: SPLITTER_VERSION.to_owned(),
        }
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let c = &self.config;
        let values = [
            DESCRIPTOR_FORMAT.to_owned(),
            self.model.clone(),
            self.vocab_digest.clone(),
            self.stopwords_digest.clone(),
            c.interval.to_string(),
            c.threshold.to_string(),
            c.skip.punct_or_number.to_string(),
            c.skip.stopwords.to_string(),
            c.skip.subwords.to_string(),
            c.skip.capitalized.to_string(),
            c.safe_mode.to_string(),
            c.framing.to_string(),
            self.splitter.clone(),
        ];
        KEYS.iter().copied().zip(values).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values: Vec<Option<&str>> = vec![None; KEYS.len()];
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Descriptor(format!("expected key=value, got {line:?}")))?;
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::Descriptor(format!("unknown key {key:?}")))?;
            if values[slot].replace(value).is_some() {
                return Err(Error::Descriptor(format!("key {key:?} given twice")));
            }
        }
        let get = |key: &str| -> Result<&str> {
            let slot = KEYS.iter().position(|k| *k == key).expect("known key");
            values[slot].ok_or_else(|| Error::Descriptor(format!("missing key {key:?}")))
        };
        let flag = |key: &str| -> Result<bool> {
            get(key)?
                .parse()
                .map_err(|_| Error::Descriptor(format!("{key} must be true or false")))
        };
        let format = get("format")?;
        if format != DESCRIPTOR_FORMAT {
            return Err(Error::Descriptor(format!("unsupported format {format:?}")));
        }
        let config = StegoConfig {
            interval: get("f")?
                .parse()
                .map_err(|e| Error::Descriptor(format!("bad f: {e}")))?,
            threshold: get("p")?
                .parse()
                .map_err(|e| Error::Descriptor(format!("bad p: {e}")))?,
            skip: SkipRules {
                punct_or_number: flag("skip_punct_or_number")?,
                stopwords: flag("skip_stopwords")?,
                subwords: flag("skip_subwords")?,
                capitalized: flag("skip_capitalized")?,
            },
            safe_mode: flag("safe_mode")?,
            framing: get("framing")?.parse::<Framing>()?,
        }
        .validate()?;
        Ok(Self {
            model: get("model")?.to_owned(),
            vocab_digest: get("vocab_sha256")?.to_owned(),
            stopwords_digest: get("stopwords_sha256")?.to_owned(),
            config,
            splitter: get("splitter")?.to_owned(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Fails with the first field where `actual` differs from `self`.
    pub fn verify(&self, actual: &ProtocolDescriptor) -> Result<()> {
        for ((field, expected), (_, found)) in self.fields().into_iter().zip(actual.fields()) {
            if expected != found {
                return Err(Error::ProtocolMismatch {
                    field: field.to_owned(),
                    expected,
                    actual: found,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for ProtocolDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, value) in self.fields() {
            writeln!(f, "{key}={value}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::backend::HashStub;
    use crate::tokenizer::{StopwordList, Vocab, WordPiece};

    fn descriptor(config: StegoConfig) -> ProtocolDescriptor {
        let vocab = Arc::new(Vocab::demo());
        let system = Stegosystem::new(
            config,
            WordPiece::new(Arc::clone(&vocab)),
            Arc::new(StopwordList::english()),
        )
        .unwrap();
        ProtocolDescriptor::new(&system, &HashStub::new(5, vocab.len()).unwrap())
    }

    #[test]
    fn text_round_trip() {
        let d = descriptor(StegoConfig::default().with_framing(Framing::Fixed(45)));
        let text = d.to_string();
        assert!(text.contains("framing=fixed:45\n"));
        assert!(text.contains("p=0.02\n"));
        assert_eq!(ProtocolDescriptor::parse(&text).unwrap(), d);
    }

    #[test]
    fn reports_first_mismatch() {
        let a = descriptor(StegoConfig::default());
        let mut b = a.clone();
        b.stopwords_digest = "0".repeat(64);
        assert!(a.verify(&a.clone()).is_ok());
        match a.verify(&b) {
            Err(Error::ProtocolMismatch { field, .. }) => assert_eq!(field, "stopwords_sha256"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_files() {
        let text = descriptor(StegoConfig::default()).to_string();
        assert!(ProtocolDescriptor::parse(&text.replace("f=3", "f=0")).is_err());
        assert!(ProtocolDescriptor::parse(&text.replace("safe_mode=true", "safe_mode=yes")).is_err());
        assert!(ProtocolDescriptor::parse(&format!("{text}f=3\n")).is_err());
        assert!(ProtocolDescriptor::parse(&format!("{text}colour=red\n")).is_err());
        assert!(ProtocolDescriptor::parse("format=stego-protocol-1\n").is_err());
    }
}
