//! Bit strings carrying the secret message and the cursor that feeds them to
//! the encoder chunk by chunk.
//!
//! Bits are ordered most-significant first: a chunk of `n` bits read from the
//! cursor is the big-endian integer formed by the next `n` bits.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Width of the length header used by header framing.
pub const HEADER_BITS: usize = 32;

/// An ordered sequence of bits with an explicit length.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }

    /// The `width` low bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        assert!(width <= 64, "width {width} exceeds 64 bits");
        Self::from_bits((0..width).rev().map(|i| (value >> i) & 1 == 1))
    }

    /// Parses `hex` as the first `len` bits of its big-endian bit expansion.
    ///
    /// The hex string must contain exactly `ceil(len / 4)` digits and any bits
    /// past `len` in the final digit must be zero.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let digits = hex.trim();
        let expected = len.div_ceil(4);
        if digits.len() != expected {
            return Err(Error::BitString(format!(
                "{len} bits need {expected} hex digits, got {}",
                digits.len()
            )));
        }
        let mut bits = Vec::with_capacity(expected * 4);
        for c in digits.chars() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::BitString(format!("invalid hex digit {c:?}")))?;
            bits.extend((0..4).rev().map(|i| (nibble >> i) & 1 == 1));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(Error::BitString(format!(
                "hex digits carry nonzero bits beyond bit {len}"
            )));
        }
        bits.truncate(len);
        Ok(Self { bits })
    }

    /// Uppercase hex of the bits, zero-filled to a whole number of digits.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|nibble| {
                let value = nibble
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << (3 - i)));
                char::from_digit(value, 16)
                    .expect("nibble below 16")
                    .to_ascii_uppercase()
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    /// Appends the `width` low bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: usize) {
        self.bits
            .extend((0..width).rev().map(|i| (value >> i) & 1 == 1));
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// The first `len` bits (or all of them when shorter).
    pub fn prefix(&self, len: usize) -> BitString {
        Self {
            bits: self.bits[..len.min(self.bits.len())].to_vec(),
        }
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    /// Zero-pads to the next multiple of `boundary`, returning the number of
    /// bits added.
    pub fn pad_to_multiple(&mut self, boundary: usize) -> usize {
        assert!(boundary > 0, "boundary must be positive");
        let added = (boundary - self.bits.len() % boundary) % boundary;
        self.bits.resize(self.bits.len() + added, false);
        added
    }

    /// Interprets up to 64 bits starting at `start` as a big-endian integer.
    pub fn read_uint(&self, start: usize, width: usize) -> Option<u64> {
        if width > 64 || start + width > self.bits.len() {
            return None;
        }
        Some(
            self.bits[start..start + width]
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | u64::from(b)),
        )
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(")?;
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

/// `len=<bits> hex=<digits>`, the interchange form used on the command line.
impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "len={} hex={}", self.len(), self.to_hex())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut len = None;
        let mut hex = None;
        for field in s.split_whitespace() {
            match field.split_once('=') {
                Some(("len", v)) => {
                    len = Some(v.parse::<usize>().map_err(|e| {
                        Error::BitString(format!("bad length {v:?}: {e}"))
                    })?)
                }
                Some(("hex", v)) => hex = Some(v),
                _ => return Err(Error::BitString(format!("unexpected field {field:?}"))),
            }
        }
        match (len, hex) {
            (Some(len), Some(hex)) => Self::from_hex(hex, len),
            (Some(0), None) => Ok(Self::new()),
            _ => Err(Error::BitString("expected `len=<n> hex=<digits>`".into())),
        }
    }
}

/// Sequential reader over the framed message.
///
/// Reads past the end of the message yield zero bits and are counted as
/// padding.
#[derive(Clone, Debug)]
pub struct BitCursor {
    message: BitString,
    offset: usize,
    padding: usize,
}

impl BitCursor {
    pub fn new(message: BitString) -> Self {
        Self {
            message,
            offset: 0,
            padding: 0,
        }
    }

    /// Reads `width` bits (at most 64) as a big-endian chunk value.
    pub fn read(&mut self, width: usize) -> u64 {
        assert!(width <= 64, "chunk width {width} exceeds 64 bits");
        let mut value = 0u64;
        for _ in 0..width {
            let bit = match self.message.get(self.offset) {
                Some(bit) => bit,
                None => {
                    self.padding += 1;
                    false
                }
            };
            value = (value << 1) | u64::from(bit);
            self.offset += 1;
        }
        value
    }

    /// Bits consumed so far, padding included.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    pub fn message_len(&self) -> usize {
        self.message.len()
    }

    pub fn is_exhausted(&self) -> bool {
        self.offset >= self.message.len()
    }

    pub fn message(&self) -> &BitString {
        &self.message
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_with_partial_nibble() {
        let bits = BitString::from_bits([true, false, true, true, true]);
        assert_eq!(bits.to_hex(), "B8");
        assert_eq!(BitString::from_hex("B8", 5).unwrap(), bits);
        assert_eq!(bits.to_string(), "len=5 hex=B8");
        assert_eq!("len=5 hex=B8".parse::<BitString>().unwrap(), bits);
    }

    #[test]
    fn hex_rejects_wrong_digit_count_and_dirty_padding() {
        assert!(BitString::from_hex("DEADBEEF", 30).is_err());
        assert!(BitString::from_hex("DEADBEEF", 33).is_err());
        assert!(BitString::from_hex("DEADBEE", 32).is_err());
        assert!(BitString::from_hex("B9", 5).is_err());
        assert!(BitString::from_hex("XY", 8).is_err());
    }

    #[test]
    fn deadbeef() {
        let bits = BitString::from_hex("DEADBEEF", 32).unwrap();
        assert_eq!(bits.read_uint(0, 32), Some(0xDEAD_BEEF));
        assert_eq!(BitString::from_uint(0xDEAD_BEEF, 32), bits);
    }

    #[test]
    fn cursor_pads_with_zeros() {
        let mut cursor = BitCursor::new(BitString::from_bits([true, true, false, true, true]));
        assert_eq!(cursor.read(3), 0b110);
        assert!(!cursor.is_exhausted());
        assert_eq!(cursor.read(3), 0b110);
        assert_eq!(cursor.padding(), 1);
        assert_eq!(cursor.offset(), 6);
        assert!(cursor.is_exhausted());
        assert_eq!(cursor.read(0), 0);
    }

    #[test]
    fn pad_to_multiple_counts_added_bits() {
        let mut bits = BitString::from_uint(0b101, 3);
        assert_eq!(bits.pad_to_multiple(4), 1);
        assert_eq!(bits.len(), 4);
        assert_eq!(bits.pad_to_multiple(4), 0);
    }
}
