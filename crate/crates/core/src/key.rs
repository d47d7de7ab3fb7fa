//! Key bit vectors and their hex text form.
//!
//! Bit `i` drives `keyinput<i>`. Hex text is `0x`-prefixed with bit `k-1`
//! as the most significant bit.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeyError {
    #[error("key text must start with `0x`")]
    MissingPrefix,
    #[error("invalid hex digit `{0}`")]
    Digit(char),
    #[error("key value does not fit in {0} bits")]
    TooWide(usize),
    #[error("empty key")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeyBits(pub Vec<bool>);

impl KeyBits {
    pub fn zeros(len: usize) -> Self {
        KeyBits(vec![false; len])
    }

    pub fn random(len: usize, rng: &mut impl Rng) -> Self {
        KeyBits((0..len).map(|_| rng.gen()).collect())
    }

    /// Low `len` bits of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        KeyBits((0..len).map(|i| i < 64 && (value >> i) & 1 == 1).collect())
    }

    /// Panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.0.len() <= 64, "key wider than 64 bits");
        self.0.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        let digits = self.0.len().div_ceil(4).max(1);
        let mut s = String::with_capacity(digits + 2);
        s.push_str("0x");
        for d in (0..digits).rev() {
            let mut v = 0u32;
            for b in 0..4 {
                if self.0.get(d * 4 + b).copied().unwrap_or(false) {
                    v |= 1 << b;
                }
            }
            s.push(char::from_digit(v, 16).expect("nibble"));
        }
        s
    }

    /// Parses `0x...`. With `width`, the value must fit and the result has
    /// exactly `width` bits; otherwise four bits per digit.
    pub fn from_hex(text: &str, width: Option<usize>) -> Result<Self, KeyError> {
        let t = text.trim();
        let body = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).ok_or(KeyError::MissingPrefix)?;
        if body.is_empty() {
            return Err(KeyError::Empty);
        }
        let mut bits = Vec::with_capacity(body.len() * 4);
        for c in body.chars().rev() {
            let v = c.to_digit(16).ok_or(KeyError::Digit(c))?;
            for b in 0..4 {
                bits.push((v >> b) & 1 == 1);
            }
        }
        if let Some(w) = width {
            if bits[w.min(bits.len())..].iter().any(|&b| b) {
                return Err(KeyError::TooWide(w));
            }
            bits.resize(w, false);
        }
        Ok(KeyBits(bits))
    }

    pub fn hamming(&self, other: &KeyBits) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for KeyBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl From<Vec<bool>> for KeyBits {
    fn from(v: Vec<bool>) -> Self {
        KeyBits(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_is_last_key_bit() {
        let k = KeyBits(vec![true, false, false, false, true]);
        assert_eq!(k.to_hex(), "0x11");
        assert_eq!(KeyBits::from_hex("0x11", Some(5)).unwrap(), k);
        assert_eq!(KeyBits::from_u64(0b10001, 5), k);
        assert_eq!(k.to_u64(), 17);
    }

    #[test]
    fn hex_errors() {
        assert_eq!(KeyBits::from_hex("11", None), Err(KeyError::MissingPrefix));
        assert_eq!(KeyBits::from_hex("0xg", None), Err(KeyError::Digit('g')));
        assert_eq!(KeyBits::from_hex("0x10", Some(4)), Err(KeyError::TooWide(4)));
        assert_eq!(KeyBits::from_hex("0x", None), Err(KeyError::Empty));
    }

    #[test]
    fn round_trip_widths() {
        for len in 1..40 {
            let k = KeyBits((0..len).map(|i| (i * 7 + 3) % 5 < 2).collect());
            assert_eq!(KeyBits::from_hex(&format!("{k}\n"), Some(len)).unwrap(), k);
        }
    }
}
