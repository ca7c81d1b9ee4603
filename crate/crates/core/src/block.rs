use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::Error;

/// A 128-bit cipher state. Byte 0 is the most significant byte, so the
/// 64-bit lanes are `lane(0)` (left half) and `lane(1)` (right half).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block128(pub [u8; 16]);

impl Block128 {
    pub const ZERO: Block128 = Block128([0; 16]);

    pub fn from_u128(v: u128) -> Self {
        Block128(v.to_be_bytes())
    }

    pub fn to_u128(self) -> u128 {
        u128::from_be_bytes(self.0)
    }

    pub fn from_lanes(left: u64, right: u64) -> Self {
        Self::from_u128(((left as u128) << 64) | right as u128)
    }

    pub fn lanes(self) -> (u64, u64) {
        let v = self.to_u128();
        ((v >> 64) as u64, v as u64)
    }

    /// The 32-bit word `j` (0..4), word 0 being leftmost.
    pub fn word(self, j: usize) -> u32 {
        u32::from_be_bytes(self.0[4 * j..4 * j + 4].try_into().unwrap())
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self, Error> {
        let arr: [u8; 16] = bytes
            .try_into()
            .map_err(|_| Error::Usage(format!("expected 16 bytes, got {}", bytes.len())))?;
        Ok(Block128(arr))
    }

    /// Parses 32 hex digits, case-insensitively.
    pub fn from_hex(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.len() != 32 {
            return Err(Error::Usage(format!(
                "expected 32 hex digits, got {} characters",
                s.len()
            )));
        }
        let bytes = hex::decode(s).map_err(|e| Error::Usage(format!("bad hex `{s}`: {e}")))?;
        Self::from_slice(&bytes)
    }

    pub fn to_hex(self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for Block128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block128({})", self.to_hex())
    }
}

impl fmt::Display for Block128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for Block128 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::from_hex(s)
    }
}

impl BitXor for Block128 {
    type Output = Block128;

    fn bitxor(mut self, rhs: Block128) -> Block128 {
        self ^= rhs;
        self
    }
}

impl BitXorAssign for Block128 {
    fn bitxor_assign(&mut self, rhs: Block128) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a ^= b;
        }
    }
}

impl From<[u8; 16]> for Block128 {
    fn from(b: [u8; 16]) -> Self {
        Block128(b)
    }
}

impl From<Block128> for [u8; 16] {
    fn from(b: Block128) -> Self {
        b.0
    }
}
