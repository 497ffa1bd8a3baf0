//! Byte strings to and from blocks of field symbols.
//!
//! The payload is prefixed with its length as a big-endian `u16`, read as a
//! big-endian bit stream, and cut into `bits`-wide symbols with
//! `bits = floor(log2 q)`, so every symbol is a valid field element. Symbols are
//! grouped `k` to a block; the last block is zero-padded.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MessageError {
    #[error("symbol width must be between 1 and 16 bits, got {0}")]
    BadWidth(u32),
    #[error("message of {0} bytes is too long")]
    TooLong(usize),
    #[error("decoded stream is too short for its length prefix")]
    Truncated,
    #[error("block {block} has length {got}, expected {expected}")]
    BlockLength { block: usize, expected: usize, got: usize },
    #[error("symbol {0} does not fit the symbol width")]
    BadSymbol(u16),
}

const PREFIX: usize = 2;

/// Number of `k`-symbol blocks needed for `len` payload bytes.
pub fn block_count(len: usize, bits: u32, k: usize) -> usize {
    let total_bits = (PREFIX + len) * 8;
    let symbols = total_bits.div_ceil(bits as usize);
    symbols.div_ceil(k).max(1)
}

pub fn pack(data: &[u8], bits: u32, k: usize) -> Result<Vec<Vec<u16>>, MessageError> {
    if !(1..=16).contains(&bits) {
        return Err(MessageError::BadWidth(bits));
    }
    let len = u16::try_from(data.len()).map_err(|_| MessageError::TooLong(data.len()))?;
    let mut stream = len.to_be_bytes().to_vec();
    stream.extend_from_slice(data);

    let blocks = block_count(data.len(), bits, k);
    let mut symbols = Vec::with_capacity(blocks * k);
    let mut acc: u32 = 0;
    let mut have = 0u32;
    for byte in stream {
        acc = (acc << 8) | u32::from(byte);
        have += 8;
        while have >= bits {
            have -= bits;
            symbols.push(((acc >> have) & ((1 << bits) - 1)) as u16);
        }
        acc &= (1 << have) - 1;
    }
    if have > 0 {
        symbols.push(((acc << (bits - have)) & ((1 << bits) - 1)) as u16);
    }
    symbols.resize(blocks * k, 0);
    Ok(symbols.chunks(k).map(<[u16]>::to_vec).collect())
}

pub fn unpack(blocks: &[Vec<u16>], bits: u32, k: usize) -> Result<Vec<u8>, MessageError> {
    if !(1..=16).contains(&bits) {
        return Err(MessageError::BadWidth(bits));
    }
    let mut bytes = Vec::new();
    let mut acc: u32 = 0;
    let mut have = 0u32;
    for (i, block) in blocks.iter().enumerate() {
        if block.len() != k {
            return Err(MessageError::BlockLength { block: i, expected: k, got: block.len() });
        }
        for &s in block {
            if u32::from(s) >> bits != 0 {
                return Err(MessageError::BadSymbol(s));
            }
            acc = (acc << bits) | u32::from(s);
            have += bits;
            while have >= 8 {
                have -= 8;
                bytes.push((acc >> have) as u8);
            }
            acc &= (1 << have) - 1;
        }
    }
    if bytes.len() < PREFIX {
        return Err(MessageError::Truncated);
    }
    let len = usize::from(u16::from_be_bytes([bytes[0], bytes[1]]));
    let body = &bytes[PREFIX..];
    if body.len() < len {
        return Err(MessageError::Truncated);
    }
    Ok(body[..len].to_vec())
}
