//! Masked-LM backend running an exported ONNX graph with `tract`.
//!
//! A model directory holds
//!
//! - `model.onnx`: inputs `input_ids` and optionally `attention_mask` and
//!   `token_type_ids`, all `int64[batch, seq]`; first output raw logits
//!   `[batch, seq, vocab]`;
//! - `vocab.txt`: one piece per line, line number = token id;
//! - `digests.txt` (optional): `sha256sum` style lines, verified on load.
//!
//! Each sentence is run as `[CLS] pieces [SEP]`. Softmax is applied here in
//! `f64` so the exported graph only has to produce logits.

use std::path::Path;
use std::sync::Arc;

use stego_core::backend::{Distribution, LanguageModel, MaskedSentence};
use stego_core::tokenizer::{TokenId, Vocab, CLS, SEP};
use stego_core::{sha256_hex, Error, Result};
use tract_onnx::prelude::*;

pub const MODEL_FILE: &str = "model.onnx";
pub const VOCAB_FILE: &str = "vocab.txt";
pub const DIGESTS_FILE: &str = "digests.txt";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Input {
    Ids,
    AttentionMask,
    TokenTypes,
}

pub struct OnnxMaskedLm {
    plan: Arc<TypedRunnableModel>,
    inputs: Vec<Input>,
    vocab: Arc<Vocab>,
    cls: TokenId,
    sep: TokenId,
    model_digest: String,
}

impl std::fmt::Debug for OnnxMaskedLm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OnnxMaskedLm")
            .field("inputs", &self.inputs)
            .field("vocab_size", &self.vocab.len())
            .field("model_digest", &self.model_digest)
            .finish()
    }
}

fn backend_err(context: &str, e: impl std::fmt::Display) -> Error {
    Error::Backend(format!("{context}: {e}"))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Backend(format!("cannot read {}: {e}", path.display())))
}

impl OnnxMaskedLm {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let model_path = dir.join(MODEL_FILE);
        let vocab_path = dir.join(VOCAB_FILE);
        let model_bytes = read(&model_path)?;
        let vocab_bytes = read(&vocab_path)?;
        let model_digest = sha256_hex(&model_bytes);
        let digests_path = dir.join(DIGESTS_FILE);
        if digests_path.exists() {
            verify_digests(&digests_path, &[
                (MODEL_FILE, &model_digest),
                (VOCAB_FILE, &sha256_hex(&vocab_bytes)),
            ])?;
        }
        let text = String::from_utf8(vocab_bytes)
            .map_err(|e| Error::Vocabulary(format!("{} is not UTF-8: {e}", vocab_path.display())))?;
        let vocab = Arc::new(Vocab::from_text(&text)?);
        Self::from_bytes(&model_bytes, vocab, model_digest)
    }

    fn from_bytes(bytes: &[u8], vocab: Arc<Vocab>, model_digest: String) -> Result<Self> {
        let missing = |piece: &str| Error::Vocabulary(format!("vocabulary lacks {piece}"));
        let cls = vocab.id(CLS).ok_or_else(|| missing(CLS))?;
        let sep = vocab.id(SEP).ok_or_else(|| missing(SEP))?;

        let mut model = tract_onnx::onnx()
            .model_for_read(&mut std::io::Cursor::new(bytes))
            .map_err(|e| backend_err("cannot parse ONNX graph", e))?;
        let outlets = model
            .input_outlets()
            .map_err(|e| backend_err("graph inputs", e))?
            .to_vec();
        let mut inputs = Vec::with_capacity(outlets.len());
        for outlet in &outlets {
            let name = model.node(outlet.node).name.as_str();
            inputs.push(match name {
                "input_ids" => Input::Ids,
                "attention_mask" => Input::AttentionMask,
                "token_type_ids" => Input::TokenTypes,
                other => return Err(Error::Backend(format!("unsupported graph input {other:?}"))),
            });
        }
        if !inputs.contains(&Input::Ids) {
            return Err(Error::Backend("graph has no input_ids input".into()));
        }
        let seq = model.symbols.sym("S");
        for i in 0..outlets.len() {
            let fact = InferenceFact::dt_shape(i64::datum_type(), tvec![TDim::from(1), TDim::from(seq.clone())]);
            model
                .set_input_fact(i, fact)
                .map_err(|e| backend_err("cannot set input shape", e))?;
        }
        let typed = model
            .into_optimized()
            .map_err(|e| backend_err("cannot optimize graph", e))?;
        let width = typed
            .output_fact(0)
            .ok()
            .and_then(|f| f.shape.last().and_then(|d| d.to_i64().ok()));
        if let Some(width) = width {
            if width as usize != vocab.len() {
                return Err(Error::Vocabulary(format!(
                    "graph emits {width} logits per position, vocabulary has {} entries",
                    vocab.len()
                )));
            }
        }
        let plan = typed
            .into_runnable()
            .map_err(|e| backend_err("cannot prepare graph", e))?;
        Ok(Self {
            plan,
            inputs,
            vocab,
            cls,
            sep,
            model_digest,
        })
    }

    pub fn vocab(&self) -> &Arc<Vocab> {
        &self.vocab
    }

    pub fn model_digest(&self) -> &str {
        &self.model_digest
    }

    fn token_ids(&self, input: &MaskedSentence) -> Vec<i64> {
        let unk = self.vocab.unk_id();
        std::iter::once(self.cls)
            .chain(input.pieces.iter().map(|p| self.vocab.id(p).unwrap_or(unk)))
            .chain(std::iter::once(self.sep))
            .map(i64::from)
            .collect()
    }
}

/// Checks `sha256sum`-style lines for the listed files.
fn verify_digests(path: &Path, expected: &[(&str, &str)]) -> Result<()> {
    let text = String::from_utf8(read(path)?)
        .map_err(|e| Error::Backend(format!("{} is not UTF-8: {e}", path.display())))?;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (digest, name) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::Backend(format!("malformed digest line {line:?}")))?;
        let name = name.trim().trim_start_matches('*');
        if let Some((_, actual)) = expected.iter().find(|(file, _)| *file == name) {
            if !digest.eq_ignore_ascii_case(actual) {
                return Err(Error::ProtocolMismatch {
                    field: format!("{name} sha256"),
                    expected: digest.to_owned(),
                    actual: (*actual).to_owned(),
                });
            }
        }
    }
    Ok(())
}

fn softmax(logits: &[f32]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f32::NEG_INFINITY, f32::max) as f64;
    let exps: Vec<f64> = logits.iter().map(|&l| (l as f64 - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

impl LanguageModel for OnnxMaskedLm {
    fn predict(&self, input: &MaskedSentence) -> Result<Vec<Distribution>> {
        let ids = self.token_ids(input);
        let len = ids.len();
        let tensors: TVec<TValue> = self
            .inputs
            .iter()
            .map(|kind| {
                let data = match kind {
                    Input::Ids => ids.clone(),
                    Input::AttentionMask => vec![1; len],
                    Input::TokenTypes => vec![0; len],
                };
                Tensor::from_shape(&[1, len], &data).map(|t| t.into_tvalue())
            })
            .collect::<TractResult<_>>()
            .map_err(|e| backend_err("cannot build input tensors", e))?;
        let outputs = self.plan.run(tensors).map_err(|e| backend_err("inference failed", e))?;
        let logits = outputs[0]
            .to_plain_array_view::<f32>()
            .map_err(|e| backend_err("unexpected output type", e))?;
        let shape = logits.shape().to_vec();
        if shape.len() != 3 || shape[1] != len || shape[2] != self.vocab.len() {
            return Err(Error::Backend(format!(
                "output shape {shape:?} does not match [1, {len}, {}]",
                self.vocab.len()
            )));
        }
        input
            .positions
            .iter()
            .map(|&position| {
                let row: Vec<f32> = logits
                    .index_axis(tract_ndarray::Axis(1), position + 1)
                    .iter()
                    .copied()
                    .collect();
                Distribution::from_dense(softmax(&row))
            })
            .collect()
    }

    fn identity(&self) -> String {
        format!("onnx:sha256={}", self.model_digest)
    }

    fn vocab_size(&self) -> Option<usize> {
        Some(self.vocab.len())
    }
}
