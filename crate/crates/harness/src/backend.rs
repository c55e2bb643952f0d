use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use stego_core::{Error, HashStub, LanguageModel, Result, TableStub, Vocab};
use stego_onnx::OnnxMaskedLm;

/// Where distributions come from: `table:<path>`, `hash:<seed>` or
/// `model:<dir>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendSpec {
    Table(PathBuf),
    Hash(u64),
    Model(PathBuf),
}

impl FromStr for BackendSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidConfig(format!("backend {s:?}: {why}"));
        match s.split_once(':') {
            Some(("table", path)) if !path.is_empty() => Ok(BackendSpec::Table(path.into())),
            Some(("model", dir)) if !dir.is_empty() => Ok(BackendSpec::Model(dir.into())),
            Some(("hash", seed)) => seed
                .parse()
                .map(BackendSpec::Hash)
                .map_err(|_| bad("seed must be an unsigned integer")),
            _ => Err(bad("expected table:<path>, hash:<seed> or model:<dir>")),
        }
    }
}

pub struct LoadedBackend {
    pub model: Box<dyn LanguageModel>,
    pub vocab: Arc<Vocab>,
}

/// Loads the backend and the vocabulary it is paired with. An explicit
/// `vocab` path wins, then the model directory's own vocabulary, then the
/// built-in demo vocabulary.
pub fn load_backend(spec: &BackendSpec, vocab: Option<&Path>) -> Result<LoadedBackend> {
    let explicit = vocab.map(Vocab::load).transpose()?.map(Arc::new);
    match spec {
        BackendSpec::Model(dir) => {
            let model = OnnxMaskedLm::load(dir)?;
            let own = model.vocab().clone();
            if let Some(v) = &explicit {
                if v.digest() != own.digest() {
                    return Err(Error::Vocabulary(format!(
                        "vocabulary {} does not match the one in {}",
                        v.digest(),
                        dir.display()
                    )));
                }
            }
            Ok(LoadedBackend {
                model: Box::new(model),
                vocab: own,
            })
        }
        BackendSpec::Table(path) => {
            let vocab = explicit.unwrap_or_else(|| Arc::new(Vocab::demo()));
            Ok(LoadedBackend {
                model: Box::new(TableStub::load(path, &vocab)?),
                vocab,
            })
        }
        BackendSpec::Hash(seed) => {
            let vocab = explicit.unwrap_or_else(|| Arc::new(Vocab::demo()));
            Ok(LoadedBackend {
                model: Box::new(HashStub::new(*seed, vocab.len())?),
                vocab,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!("hash:42".parse::<BackendSpec>().unwrap(), BackendSpec::Hash(42));
        assert_eq!(
            "table:a:b.tsv".parse::<BackendSpec>().unwrap(),
            BackendSpec::Table("a:b.tsv".into())
        );
        assert_eq!("model:/m".parse::<BackendSpec>().unwrap(), BackendSpec::Model("/m".into()));
        for bad in ["hash:x", "hash:-1", "table:", "gpt:1", "hash"] {
            assert!(bad.parse::<BackendSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn hash_backend_uses_demo_vocab() {
        let loaded = load_backend(&BackendSpec::Hash(3), None).unwrap();
        assert_eq!(loaded.vocab.len(), Vocab::demo().len());
        assert_eq!(loaded.model.identity(), format!("hash:seed=3:vocab={}", loaded.vocab.len()));
    }
}
