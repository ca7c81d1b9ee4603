use super::{Hc3, RoundKey256};
use crate::block::Block128;
use crate::gf256::{gf_mul, GfByte, HC3_FIELD, MDS_L};

/// Sbox fused with the lower-level MDS multiplications.
///
/// `classes[c][x]` packs `MDS_L[r][c] * S[x]` for rows `r = 0..4`, row 0
/// in the top byte. Column `c` of a word always meets class `c`, and each
/// class yields four 8-bit bijections per byte position; with four byte
/// positions per class that makes sixteen fused sboxes per class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MergedSboxTables {
    pub classes: [[u32; 256]; 4],
}

impl MergedSboxTables {
    pub const CLASS_COUNT: usize = 4;

    pub fn build(sbox: &[u8; 256]) -> Self {
        let mut classes = [[0u32; 256]; 4];
        for (c, class) in classes.iter_mut().enumerate() {
            for (x, v) in class.iter_mut().enumerate() {
                let s = GfByte(sbox[x]);
                *v = (0..4).fold(0u32, |acc, r| {
                    acc | (gf_mul(GfByte(MDS_L.entries[r][c]), s, HC3_FIELD).0 as u32) << (24 - 8 * r)
                });
            }
        }
        MergedSboxTables { classes }
    }

    /// Output byte `r` of class `c` as a plain 256-entry table.
    pub fn column(&self, c: usize, r: usize) -> [u8; 256] {
        std::array::from_fn(|x| (self.classes[c][x] >> (24 - 8 * r)) as u8)
    }

    /// `MDS_L(S(.))` on one 32-bit word by four lookups.
    pub fn word(&self, bytes: [u8; 4]) -> u32 {
        (0..4).fold(0, |acc, c| acc ^ self.classes[c][bytes[c] as usize])
    }
}

impl Hc3 {
    /// `xs` with the first sbox layer and MDS_L replaced by table lookups.
    pub fn merged_xs(&self, x: Block128, k: &RoundKey256) -> Block128 {
        let y = x ^ k.first_half();
        let mut u = [0u8; 16];
        for j in 0..4 {
            let w = self.merged.word(y.0[4 * j..4 * j + 4].try_into().unwrap());
            u[4 * j..4 * j + 4].copy_from_slice(&w.to_be_bytes());
        }
        self.sub_bytes(Block128(u) ^ k.second_half())
    }

    pub fn merged_rho(&self, x: Block128, k: &RoundKey256) -> Block128 {
        self.mds_h(self.merged_xs(x, k))
    }
}
