//! Fixed-width bit vectors and integer conversions.
//!
//! All integer encodings in this crate are big-endian: index 0 of a bit
//! slice is the most significant bit. Where a construction needs a
//! different layout (one does), it says so at the use site.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("bit string `{0}` contains a character other than 0 or 1")]
    BadDigit(String),
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u128, width: usize },
    #[error("state has width {actual}, expected {expected}")]
    Width { expected: usize, actual: usize },
}

/// Smallest `w` such that `2^w >= n`. `ceil_log2(0) == ceil_log2(1) == 0`.
pub fn ceil_log2(n: u128) -> usize {
    let mut w = 0;
    while (1u128 << w) < n {
        w += 1;
    }
    w
}

/// Input width of a circuit indexing `count` items: at least one wire.
pub fn index_width(count: u128) -> usize {
    ceil_log2(count).max(1)
}

pub fn bits_from_u128_be(value: u128, width: usize) -> Result<Vec<bool>, BitsError> {
    if width < 128 && value >> width != 0 {
        return Err(BitsError::Overflow { value, width });
    }
    Ok((0..width).map(|i| value >> (width - 1 - i) & 1 == 1).collect())
}

pub fn u128_from_bits_be(bits: &[bool]) -> u128 {
    assert!(bits.len() <= 128, "bit vector too wide for u128");
    bits.iter().fold(0u128, |acc, &b| acc << 1 | b as u128)
}

/// A fixed-width bit vector; the unit of every state space in this crate.
///
/// Variable names are kept by the surrounding representation, not by the
/// state itself; bit `i` of a state corresponds to variable `i` of the
/// owner's variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(Vec<bool>);

impl State {
    pub fn new(bits: Vec<bool>) -> Self {
        State(bits)
    }

    pub fn zeros(width: usize) -> Self {
        State(vec![false; width])
    }

    pub fn ones(width: usize) -> Self {
        State(vec![true; width])
    }

    /// Big-endian encoding of `value` in `width` bits.
    pub fn from_u128(value: u128, width: usize) -> Result<Self, BitsError> {
        Ok(State(bits_from_u128_be(value, width)?))
    }

    pub fn to_u128(&self) -> u128 {
        u128_from_bits_be(&self.0)
    }

    pub fn parse(text: &str) -> Result<Self, BitsError> {
        let mut bits = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(BitsError::BadDigit(text.to_string())),
            }
        }
        Ok(State(bits))
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn expect_width(&self, expected: usize) -> Result<(), BitsError> {
        if self.width() == expected {
            Ok(())
        } else {
            Err(BitsError::Width { expected, actual: self.width() })
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl From<Vec<bool>> for State {
    fn from(bits: Vec<bool>) -> Self {
        State(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_round_trip() {
        let s = State::from_u128(0b0110, 4).unwrap();
        assert_eq!(s.to_string(), "0110");
        assert_eq!(s.to_u128(), 6);
        assert_eq!(State::parse("0110").unwrap(), s);
    }

    #[test]
    fn ceil_log2_anchors() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(129), 8);
        assert_eq!(index_width(1), 1);
    }

    #[test]
    fn overflow_rejected() {
        assert!(State::from_u128(4, 2).is_err());
        assert!(State::parse("01x").is_err());
    }
}
