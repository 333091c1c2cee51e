//! Byte format for storing vectors: a fixed header plus a packed payload.
//!
//! Layout: 4-byte magic `BGV1`, 1-byte type tag, 4-byte little-endian
//! dimension, then the payload. Float payloads are `dim` little-endian
//! IEEE-754 singles (4 bytes each); bit payloads are `ceil(dim/8)` bytes,
//! LSB-first within each byte, so a bit vector costs 1/32 the bytes of the
//! float vector at the same dimension (dim divisible by 8). Everything is
//! byte-exact across platforms.

use alloc::vec;
use alloc::vec::Vec;

use crate::vector::words_for;
use crate::{BitVector, FeatureVector};

/// File/record magic; identifies the format regardless of extension.
pub const MAGIC: [u8; 4] = *b"BGV1";
/// Type tag for float payloads.
pub const TAG_FLOAT: u8 = 0x01;
/// Type tag for packed-bit payloads.
pub const TAG_BIT: u8 = 0x02;
/// Bytes before the payload: magic, tag, dimension.
pub const HEADER_LEN: usize = 9;

/// Payload bytes for a float vector of length `dim`.
pub fn float_payload_len(dim: usize) -> usize {
    dim * 4
}

/// Payload bytes for a bit vector of length `dim`.
pub fn bit_payload_len(dim: usize) -> usize {
    dim.div_ceil(8)
}

/// Either vector kind, as identified by the decoded tag.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyVector {
    Float(FeatureVector),
    Bit(BitVector),
}

/// Why a byte stream failed to decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeError {
    /// The first four bytes are not the expected magic.
    BadMagic,
    /// The type tag byte is not a known vector kind.
    UnknownTag(u8),
    /// The stream ends before `expected` bytes.
    Truncated { expected: usize, got: usize },
    /// The stream continues past the declared payload.
    TrailingBytes { expected: usize, got: usize },
    /// The header declares a zero dimension.
    ZeroDim,
}

impl core::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DecodeError::BadMagic => write!(f, "bad magic (not a vector record)"),
            DecodeError::UnknownTag(t) => write!(f, "unknown vector type tag 0x{t:02X}"),
            DecodeError::Truncated { expected, got } => {
                write!(f, "truncated record: expected {expected} bytes, got {got}")
            }
            DecodeError::TrailingBytes { expected, got } => {
                write!(f, "trailing bytes: expected {expected} bytes, got {got}")
            }
            DecodeError::ZeroDim => write!(f, "record declares dimension 0"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DecodeError {}

fn header(tag: u8, dim: usize, payload_len: usize) -> Vec<u8> {
    assert!(dim > 0 && dim <= u32::MAX as usize, "dimension {dim} not encodable");
    let mut out = Vec::with_capacity(HEADER_LEN + payload_len);
    out.extend_from_slice(&MAGIC);
    out.push(tag);
    out.extend_from_slice(&(dim as u32).to_le_bytes());
    out
}

/// Encodes a float vector: header plus `dim` little-endian f32 values.
pub fn encode_float(v: &FeatureVector) -> Vec<u8> {
    let mut out = header(TAG_FLOAT, v.dim(), float_payload_len(v.dim()));
    for x in v.values() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

/// Encodes a bit vector: header plus `ceil(dim/8)` LSB-first bytes.
///
/// Little-endian word bytes are exactly the LSB-first byte order, so the
/// packed words are written out directly and cut at the payload length.
pub fn encode_bits(v: &BitVector) -> Vec<u8> {
    let payload = bit_payload_len(v.dim());
    let mut out = header(TAG_BIT, v.dim(), payload);
    for w in v.words() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out.truncate(HEADER_LEN + payload);
    out
}

/// Decodes one vector record, checking magic, tag, dimension, and exact
/// length. Padding bits past `dim` in the final payload byte are cleared.
pub fn decode(bytes: &[u8]) -> Result<AnyVector, DecodeError> {
    if bytes.len() >= 4 && bytes[..4] != MAGIC {
        return Err(DecodeError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(DecodeError::Truncated { expected: HEADER_LEN, got: bytes.len() });
    }
    let tag = bytes[4];
    let dim = u32::from_le_bytes(bytes[5..9].try_into().unwrap()) as usize;
    let payload_len = match tag {
        TAG_FLOAT => float_payload_len(dim),
        TAG_BIT => bit_payload_len(dim),
        t => return Err(DecodeError::UnknownTag(t)),
    };
    if dim == 0 {
        return Err(DecodeError::ZeroDim);
    }
    let expected = HEADER_LEN + payload_len;
    if bytes.len() < expected {
        return Err(DecodeError::Truncated { expected, got: bytes.len() });
    }
    if bytes.len() > expected {
        return Err(DecodeError::TrailingBytes { expected, got: bytes.len() });
    }
    let payload = &bytes[HEADER_LEN..];
    match tag {
        TAG_FLOAT => {
            let values: Vec<f32> = payload
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            Ok(AnyVector::Float(FeatureVector::from_values(values)))
        }
        _ => {
            let mut words = vec![0u64; words_for(dim)];
            for (i, byte) in payload.iter().enumerate() {
                words[i / 8] |= (*byte as u64) << (8 * (i % 8));
            }
            Ok(AnyVector::Bit(BitVector::from_raw_words(dim, words)))
        }
    }
}
