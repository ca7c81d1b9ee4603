use super::Camellia;
use crate::block::Block128;

/// Key-schedule constants Sigma1..Sigma6.
pub const SIGMA: [u64; 6] = [
    0xA09E667F3BCC908B,
    0xB67AE8584CAA73B2,
    0xC6EF372FE94F82BE,
    0x54FF53A5F1D36F1C,
    0x10E527FADE682D1D,
    0xB05688C2B3E6C1FD,
];

/// Distinct rotation amounts used by the 128-bit subkey table.
pub const ROTATIONS: [u32; 8] = [0, 15, 30, 45, 60, 77, 94, 111];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KeySource {
    KL,
    KA,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Half {
    L,
    R,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubkeySlot {
    Kw(u8),
    K(u8),
    Kl(u8),
}

/// One row of the subkey table: `slot = (source <<< rotation)_half`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SubkeyRule {
    pub slot: SubkeySlot,
    pub source: KeySource,
    pub rotation: u32,
    pub half: Half,
}

const fn rule(slot: SubkeySlot, source: KeySource, rotation: u32, half: Half) -> SubkeyRule {
    SubkeyRule { slot, source, rotation, half }
}

pub const SUBKEY_TABLE: [SubkeyRule; 26] = {
    use Half::*;
    use KeySource::*;
    use SubkeySlot::*;
    [
        rule(Kw(1), KL, 0, L),
        rule(Kw(2), KL, 0, R),
        rule(K(1), KA, 0, L),
        rule(K(2), KA, 0, R),
        rule(K(3), KL, 15, L),
        rule(K(4), KL, 15, R),
        rule(K(5), KA, 15, L),
        rule(K(6), KA, 15, R),
        rule(Kl(1), KA, 30, L),
        rule(Kl(2), KA, 30, R),
        rule(K(7), KL, 45, L),
        rule(K(8), KL, 45, R),
        rule(K(9), KA, 45, L),
        rule(K(10), KL, 60, R),
        rule(K(11), KA, 60, L),
        rule(K(12), KA, 60, R),
        rule(Kl(3), KL, 77, L),
        rule(Kl(4), KL, 77, R),
        rule(K(13), KL, 94, L),
        rule(K(14), KL, 94, R),
        rule(K(15), KA, 94, L),
        rule(K(16), KA, 94, R),
        rule(K(17), KL, 111, L),
        rule(K(18), KL, 111, R),
        rule(Kw(3), KA, 111, L),
        rule(Kw(4), KA, 111, R),
    ]
};

/// The 128-bit key variables. `kr` is zero for 128-bit keys.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct KeyVars {
    pub kl: u128,
    pub kr: u128,
    pub ka: u128,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CamelliaSubkeys {
    pub kw: [u64; 4],
    pub k: [u64; 18],
    pub kl: [u64; 4],
}

impl CamelliaSubkeys {
    pub fn from_vars(vars: &KeyVars) -> Self {
        let mut sk = CamelliaSubkeys::default();
        for r in &SUBKEY_TABLE {
            let src = match r.source {
                KeySource::KL => vars.kl,
                KeySource::KA => vars.ka,
            };
            let rotated = src.rotate_left(r.rotation);
            let v = match r.half {
                Half::L => (rotated >> 64) as u64,
                Half::R => rotated as u64,
            };
            match r.slot {
                SubkeySlot::Kw(i) => sk.kw[i as usize - 1] = v,
                SubkeySlot::K(i) => sk.k[i as usize - 1] = v,
                SubkeySlot::Kl(i) => sk.kl[i as usize - 1] = v,
            }
        }
        sk
    }

    /// Subkeys in decryption order.
    pub fn reversed(&self) -> Self {
        let mut k = self.k;
        k.reverse();
        CamelliaSubkeys {
            kw: [self.kw[2], self.kw[3], self.kw[0], self.kw[1]],
            k,
            kl: [self.kl[3], self.kl[2], self.kl[1], self.kl[0]],
        }
    }
}

impl Camellia {
    /// First half of K_A: two rounds keyed Sigma1, Sigma2, then XOR with K_L.
    pub fn ka_part1(&self, kl: u128, kr: u128) -> u128 {
        let d = kl ^ kr;
        let (l, r) = self.rounds((d >> 64) as u64, d as u64, &SIGMA[..2]);
        Block128::from_lanes(l, r).to_u128() ^ kl
    }

    /// Second half of K_A: two more rounds keyed Sigma3, Sigma4.
    pub fn ka_part2(&self, mid: u128) -> u128 {
        let (l, r) = self.rounds((mid >> 64) as u64, mid as u64, &SIGMA[2..4]);
        Block128::from_lanes(l, r).to_u128()
    }

    pub fn key_vars(&self, key: Block128) -> KeyVars {
        let kl = key.to_u128();
        let kr = 0;
        let ka = self.ka_part2(self.ka_part1(kl, kr));
        KeyVars { kl, kr, ka }
    }
}
