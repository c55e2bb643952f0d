use std::path::Path;

use stego_core::{Error, Result};

/// Plain-text documents; in files they are separated by blank lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<String>,
}

impl Corpus {
    pub fn new(documents: Vec<String>) -> Self {
        Self { documents }
    }

    pub fn parse(text: &str) -> Self {
        let mut documents = Vec::new();
        let mut current: Vec<&str> = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                if !current.is_empty() {
                    documents.push(current.join("\n"));
                    current.clear();
                }
            } else {
                current.push(line.trim_end());
            }
        }
        if !current.is_empty() {
            documents.push(current.join("\n"));
        }
        Self { documents }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        })?;
        Ok(Self::parse(&text))
    }

    pub fn documents(&self) -> &[String] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Documents joined by blank lines, the inverse of [`Corpus::parse`].
    pub fn to_text(&self) -> String {
        let mut out = self.documents.join("\n\n");
        out.push('\n');
        out
    }
}
