use std::fmt;

use crate::bits::HEADER_BITS;
use crate::error::{Error, Result};

/// How the receiver learns where the message ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Framing {
    /// Both sides agree on the message length out of band.
    Fixed(usize),
    /// A 32-bit big-endian length header precedes the message bits.
    Header,
}

impl fmt::Display for Framing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Framing::Fixed(bits) => write!(f, "fixed:{bits}"),
            Framing::Header => write!(f, "header:{HEADER_BITS}"),
        }
    }
}

impl std::str::FromStr for Framing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("fixed", bits)) => bits
                .parse()
                .map(Framing::Fixed)
                .map_err(|e| Error::InvalidConfig(format!("bad fixed framing length {bits:?}: {e}"))),
            Some(("header", width)) if width == HEADER_BITS.to_string() => Ok(Framing::Header),
            Some(("header", width)) => Err(Error::InvalidConfig(format!(
                "header framing must be {HEADER_BITS} bits wide, got {width}"
            ))),
            _ => Err(Error::InvalidConfig(format!("unknown framing {s:?}"))),
        }
    }
}

/// Which token classes are excluded from masking and from candidate sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkipRules {
    pub punct_or_number: bool,
    pub stopwords: bool,
    pub subwords: bool,
    pub capitalized: bool,
}

impl Default for SkipRules {
    fn default() -> Self {
        Self {
            punct_or_number: true,
            stopwords: true,
            subwords: true,
            capitalized: false,
        }
    }
}

impl SkipRules {
    pub fn all() -> Self {
        Self {
            punct_or_number: true,
            stopwords: true,
            subwords: true,
            capitalized: true,
        }
    }

    pub fn none() -> Self {
        Self {
            punct_or_number: false,
            stopwords: false,
            subwords: false,
            capitalized: false,
        }
    }
}

/// Parameters shared by sender and receiver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StegoConfig {
    /// Every `interval`-th eligible token is masked.
    pub interval: usize,
    /// Candidates need a probability strictly greater than this.
    pub threshold: f64,
    pub skip: SkipRules,
    /// Drop candidates whose substitution would not survive retokenization
    /// or sentence re-splitting.
    pub safe_mode: bool,
    pub framing: Framing,
}

impl Default for StegoConfig {
    fn default() -> Self {
        Self {
            interval: 3,
            threshold: 0.02,
            skip: SkipRules::default(),
            safe_mode: true,
            framing: Framing::Header,
        }
    }
}

impl StegoConfig {
    pub fn validate(self) -> Result<Self> {
        if self.interval == 0 {
            return Err(Error::InvalidConfig("masking interval must be at least 1".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "probability threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        if self.framing == Framing::Fixed(0) {
            return Err(Error::InvalidConfig("fixed framing needs a positive length".into()));
        }
        Ok(self)
    }

    pub fn with_interval(mut self, interval: usize) -> Self {
        self.interval = interval;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_framing(mut self, framing: Framing) -> Self {
        self.framing = framing;
        self
    }

    pub fn with_skip(mut self, skip: SkipRules) -> Self {
        self.skip = skip;
        self
    }

    pub fn with_safe_mode(mut self, safe_mode: bool) -> Self {
        self.safe_mode = safe_mode;
        self
    }
}
