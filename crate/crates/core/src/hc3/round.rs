use std::ops::BitXor;

use super::{Hc3, IntermediateKey, RoundKey256};
use crate::bitmatrix::BitMatrix;
use crate::block::Block128;
use crate::gf256::{self, GfByte, MdsMatrix4, HC3_FIELD};

/// P(n): XOR-selection of four n-bit words by `pattern`.
pub fn p_n<W>(pattern: &BitMatrix, x: [W; 4]) -> [W; 4]
where
    W: Copy + Default + BitXor<Output = W>,
{
    let mut out = [W::default(); 4];
    pattern.apply(&x, &mut out);
    out
}

/// Column tables for a 4x4 field matrix: `t[c][x]` packs `m[r][c] * x`
/// for rows 0..4, row 0 in the top byte.
pub(super) fn column_tables(m: &MdsMatrix4) -> [[u32; 256]; 4] {
    let mut t = [[0u32; 256]; 4];
    for (c, col) in t.iter_mut().enumerate() {
        for (x, v) in col.iter_mut().enumerate() {
            *v = (0..4).fold(0u32, |acc, r| {
                let p = gf256::gf_mul(GfByte(m.entries[r][c]), GfByte(x as u8), HC3_FIELD).0;
                acc | (p as u32) << (24 - 8 * r)
            });
        }
    }
    t
}

fn split_bytes8(x: u64) -> [u8; 8] {
    x.to_be_bytes()
}

impl Hc3 {
    /// Sixteen parallel sboxes.
    pub fn sub_bytes(&self, x: Block128) -> Block128 {
        Block128(x.0.map(|b| self.consts.sbox[b as usize]))
    }

    pub fn sub_bytes_inv(&self, x: Block128) -> Block128 {
        Block128(x.0.map(|b| self.consts.sbox_inv[b as usize]))
    }

    /// MDS_L applied independently to each 32-bit word.
    pub fn mds_l_layer(&self, x: Block128) -> Block128 {
        let mut out = [0u8; 16];
        for j in 0..4 {
            let word: [GfByte; 4] = std::array::from_fn(|i| GfByte(x.0[4 * j + i]));
            for (i, y) in gf256::mds_l_apply(word).into_iter().enumerate() {
                out[4 * j + i] = y.0;
            }
        }
        Block128(out)
    }

    pub fn mds_l_inv_layer(&self, x: Block128) -> Block128 {
        let mut out = [0u8; 16];
        for j in 0..4 {
            let w = (0..4).fold(0u32, |acc, c| acc ^ self.mds_l_inv_tables[c][x.0[4 * j + c] as usize]);
            out[4 * j..4 * j + 4].copy_from_slice(&w.to_be_bytes());
        }
        Block128(out)
    }

    pub fn mds_h(&self, x: Block128) -> Block128 {
        let mut out = [0u8; 16];
        self.consts.mds_h.apply(&x.0, &mut out);
        Block128(out)
    }

    pub fn mds_h_inv(&self, x: Block128) -> Block128 {
        let mut out = [0u8; 16];
        self.mds_h_inv.apply(&x.0, &mut out);
        Block128(out)
    }

    /// `S(MDS_L(S(x ^ (K1||K2))) ^ (K3||K4))`.
    pub fn xs(&self, x: Block128, k: &RoundKey256) -> Block128 {
        let u = self.mds_l_layer(self.sub_bytes(x ^ k.first_half()));
        self.sub_bytes(u ^ k.second_half())
    }

    pub fn xs_inv(&self, y: Block128, k: &RoundKey256) -> Block128 {
        let u = self.sub_bytes_inv(y) ^ k.second_half();
        self.sub_bytes_inv(self.mds_l_inv_layer(u)) ^ k.first_half()
    }

    pub fn rho(&self, x: Block128, k: &RoundKey256) -> Block128 {
        self.mds_h(self.xs(x, k))
    }

    pub fn rho_inv(&self, y: Block128, k: &RoundKey256) -> Block128 {
        self.xs_inv(self.mds_h_inv(y), k)
    }

    /// P(32) over `a || b`, viewed as four 32-bit words.
    pub fn p32(&self, a: u64, b: u64) -> (u64, u64) {
        self.p32_with(&self.consts.p32, a, b)
    }

    pub fn p32_inv(&self, a: u64, b: u64) -> (u64, u64) {
        self.p32_with(&self.consts.p32_inv, a, b)
    }

    fn p32_with(&self, m: &BitMatrix, a: u64, b: u64) -> (u64, u64) {
        let words = [(a >> 32) as u32, a as u32, (b >> 32) as u32, b as u32];
        let w = p_n(m, words);
        (
            (w[0] as u64) << 32 | w[1] as u64,
            (w[2] as u64) << 32 | w[3] as u64,
        )
    }

    /// P(16) over a 64-bit word viewed as four 16-bit words.
    pub fn p16(&self, x: u64) -> u64 {
        let words: [u16; 4] = std::array::from_fn(|i| (x >> (48 - 16 * i)) as u16);
        p_n(&self.consts.p16, words)
            .iter()
            .fold(0u64, |acc, &w| acc << 16 | w as u64)
    }

    fn byte_layer(m: &BitMatrix, x: u64) -> u64 {
        let mut out = [0u8; 8];
        m.apply(&split_bytes8(x), &mut out);
        u64::from_be_bytes(out)
    }

    pub fn m5e(&self, x: u64) -> u64 {
        Self::byte_layer(&self.consts.m5e, x)
    }

    pub fn mb3(&self, x: u64) -> u64 {
        Self::byte_layer(&self.consts.mb3, x)
    }

    /// Eight sboxes followed by P(16).
    pub fn f_sigma(&self, x: u64) -> u64 {
        let s = u64::from_be_bytes(split_bytes8(x).map(|b| self.consts.sbox[b as usize]));
        self.p16(s)
    }

    /// Forward intermediate-key update.
    ///
    /// `W1 || W2 = P(32)(Z3 || Z4)`, `Z3' = M_5E(W1) ^ G`, `Z4' = M_5E(W2)`,
    /// `Z1' = Z2`, `Z2' = Z1 ^ F_sigma(Z2 ^ Z3')`. P(32) reads the Z3/Z4
    /// lanes so that [`Hc3::sigma_inv`] is an exact inverse; the Z2' update
    /// reads the new Z3'.
    pub fn sigma(&self, z: &IntermediateKey, g: u64) -> IntermediateKey {
        let (w1, w2) = self.p32(z.z3(), z.z4());
        let z3 = self.m5e(w1) ^ g;
        let z4 = self.m5e(w2);
        let z1 = z.z2();
        let z2 = z.z1() ^ self.f_sigma(z.z2() ^ z3);
        IntermediateKey { lanes: [z1, z2, z3, z4] }
    }

    /// Backward intermediate-key update; see [`Hc3::sigma_inv_with_w`].
    pub fn sigma_inv(&self, z: &IntermediateKey, g: u64) -> IntermediateKey {
        self.sigma_inv_with_w(z, g).0
    }

    /// `Z1' = Z2 ^ F_sigma(Z1 ^ Z3)`, `Z2' = Z1`, `W1 = M_B3(Z3 ^ G)`,
    /// `W2 = M_B3(Z4)`, `Z3' || Z4' = P(32)^-1(W1 || W2)`. Also returns the
    /// `W` words, which feed the backward round-key equations.
    pub fn sigma_inv_with_w(&self, z: &IntermediateKey, g: u64) -> (IntermediateKey, [u64; 2]) {
        let z1 = z.z2() ^ self.f_sigma(z.z1() ^ z.z3());
        let z2 = z.z1();
        let w1 = self.mb3(z.z3() ^ g);
        let w2 = self.mb3(z.z4());
        let (z3, z4) = self.p32_inv(w1, w2);
        (IntermediateKey { lanes: [z1, z2, z3, z4] }, [w1, w2])
    }

    /// Forward-regime round key (`t <= t_turn`) from `Z(t-1)` and `Z(t)`.
    /// Returns the key and the F_sigma output `V(t)`.
    pub fn round_keys_fwd(&self, prev: &IntermediateKey, next: &IntermediateKey) -> (RoundKey256, u64) {
        let v = self.f_sigma(prev.z2() ^ prev.z3());
        (Self::fwd_lanes(prev, next, v), v)
    }

    pub(super) fn fwd_lanes(prev: &IntermediateKey, next: &IntermediateKey, v: u64) -> RoundKey256 {
        RoundKey256 {
            lanes: [
                prev.z1() ^ v,
                next.z3() ^ v,
                next.z4() ^ v,
                prev.z2() ^ next.z4(),
            ],
        }
    }

    /// Backward-regime round key (`t > t_turn`) from `Z(t-1)`, `Z(t)` and
    /// the `W(t)` words of the step. Returns the key and `V(t)`.
    pub fn round_keys_bwd(
        &self,
        prev: &IntermediateKey,
        next: &IntermediateKey,
        w: [u64; 2],
    ) -> (RoundKey256, u64) {
        let v = self.f_sigma(prev.z1() ^ next.z3());
        (Self::bwd_lanes(prev, next, w, v), v)
    }

    pub(super) fn bwd_lanes(prev: &IntermediateKey, next: &IntermediateKey, w: [u64; 2], v: u64) -> RoundKey256 {
        RoundKey256 {
            lanes: [
                next.z1() ^ prev.z3(),
                w[0] ^ v,
                w[1] ^ v,
                prev.z1() ^ w[1],
            ],
        }
    }
}
