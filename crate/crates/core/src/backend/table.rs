use std::collections::HashMap;
use std::path::Path;

use crate::digest::sha256_hex;
use crate::error::{Error, Result};
use crate::tokenizer::{TokenId, Vocab};

use super::{Distribution, LanguageModel, MaskedSentence};

/// Backend answering from a fixed table keyed by `(sentence id, position)`.
///
/// File format, one record per line:
///
/// ```text
/// sentence_id<TAB>position<TAB>token:prob,token:prob,...
/// ```
///
/// Tokens must exist in the vocabulary. A token may itself be `,` or `:`;
/// each entry is split at the first colon after its first character that is
/// followed by a valid decimal. Blank lines and lines starting with `#` are
/// ignored.
#[derive(Clone, Debug)]
pub struct TableStub {
    entries: HashMap<(String, usize), Distribution>,
    digest: String,
}

impl TableStub {
    pub fn parse(text: &str, vocab: &Vocab) -> Result<Self> {
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::TableParse {
                line: line_no,
                message,
            };
            let mut fields = line.splitn(3, '\t');
            let (Some(key), Some(position), Some(list)) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(err("expected three tab-separated fields".into()));
            };
            let position: usize = position
                .parse()
                .map_err(|e| err(format!("bad position {position:?}: {e}")))?;
            let pairs = parse_entries(list).map_err(err)?;
            let mut ids: Vec<(TokenId, f64)> = Vec::with_capacity(pairs.len());
            for (token, prob) in pairs {
                let id = vocab
                    .id(token)
                    .ok_or_else(|| err(format!("token {token:?} is not in the vocabulary")))?;
                ids.push((id, prob));
            }
            let dist = Distribution::new(ids).map_err(|e| err(e.to_string()))?;
            if entries.insert((key.to_owned(), position), dist).is_some() {
                return Err(err(format!("duplicate entry for {key} position {position}")));
            }
        }
        Ok(Self {
            entries,
            digest: sha256_hex(text.as_bytes()),
        })
    }

    pub fn load(path: impl AsRef<Path>, vocab: &Vocab) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, vocab)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn parse_entries(list: &str) -> std::result::Result<Vec<(&str, f64)>, String> {
    let mut out = Vec::new();
    let mut rest = list.trim();
    while !rest.is_empty() {
        let first = rest.chars().next().map_or(0, char::len_utf8);
        let mut parsed = None;
        for (colon, _) in rest.match_indices(':').filter(|&(at, _)| at >= first) {
            let after = &rest[colon + 1..];
            let prob_len = after.find(',').unwrap_or(after.len());
            if let Ok(prob) = after[..prob_len].trim().parse::<f64>() {
                parsed = Some((&rest[..colon], prob, &after[prob_len..]));
                break;
            }
        }
        let (token, prob, tail) =
            parsed.ok_or_else(|| format!("malformed entry near {rest:?}"))?;
        out.push((token, prob));
        rest = match tail.strip_prefix(',') {
            Some("") => return Err("trailing comma".into()),
            Some(next) => next,
            None => tail,
        };
    }
    Ok(out)
}

impl LanguageModel for TableStub {
    fn predict(&self, input: &MaskedSentence) -> Result<Vec<Distribution>> {
        let key = input.key.to_string();
        input
            .positions
            .iter()
            .map(|&position| {
                self.entries
                    .get(&(key.clone(), position))
                    .cloned()
                    .ok_or_else(|| Error::MissingTableEntry {
                        key: key.clone(),
                        position,
                    })
            })
            .collect()
    }

    fn identity(&self) -> String {
        format!("table:sha256={}", self.digest)
    }
}
