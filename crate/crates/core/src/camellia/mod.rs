//! CAMELLIA with a 128-bit key: 18 Feistel rounds, FL/FL^-1 layers after
//! rounds 6 and 12, and 128-bit whitening on both ends.

mod keyschedule;

use crate::block::Block128;
use crate::constants::{CamelliaConstants, Constants};
use crate::error::Error;

pub use keyschedule::{
    CamelliaSubkeys, Half, KeySource, KeyVars, SubkeyRule, SubkeySlot, ROTATIONS, SIGMA, SUBKEY_TABLE,
};

pub const ROUNDS: usize = 18;

/// Rounds after which an FL/FL^-1 layer runs.
pub const FL_AFTER: [usize; 2] = [6, 12];

/// Events reported by [`Camellia::encrypt_observed`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CamelliaEvent {
    PreWhitening,
    Round(u8),
    /// FL/FL^-1 layer following round `r`.
    FlLayer(u8),
    PostWhitening,
}

/// `FL`: `Y_R = ((X_L & kl_L) <<< 1) ^ X_R`, `Y_L = (Y_R | kl_R) ^ X_L`.
pub fn fl(x: u64, kl: u64) -> u64 {
    let (xl, xr) = ((x >> 32) as u32, x as u32);
    let (kll, klr) = ((kl >> 32) as u32, kl as u32);
    let yr = (xl & kll).rotate_left(1) ^ xr;
    let yl = (yr | klr) ^ xl;
    (yl as u64) << 32 | yr as u64
}

/// Inverse of [`fl`] under the same subkey.
pub fn fl_inv(y: u64, kl: u64) -> u64 {
    let (yl, yr) = ((y >> 32) as u32, y as u32);
    let (kll, klr) = ((kl >> 32) as u32, kl as u32);
    let xl = (yr | klr) ^ yl;
    let xr = (xl & kll).rotate_left(1) ^ yr;
    (xl as u64) << 32 | xr as u64
}

#[derive(Clone, Debug)]
pub struct Camellia {
    consts: CamelliaConstants,
}

impl Camellia {
    pub fn new(consts: &CamelliaConstants) -> Self {
        Camellia {
            consts: consts.clone(),
        }
    }

    pub fn builtin() -> &'static Camellia {
        static BUILTIN: std::sync::OnceLock<Camellia> = std::sync::OnceLock::new();
        BUILTIN.get_or_init(|| Camellia::new(&Constants::builtin().camellia))
    }

    pub fn constants(&self) -> &CamelliaConstants {
        &self.consts
    }

    /// The P-function: byte-level XOR diffusion over eight bytes.
    pub fn p(&self, x: u64) -> u64 {
        let mut out = [0u8; 8];
        self.consts.p.apply(&x.to_be_bytes(), &mut out);
        u64::from_be_bytes(out)
    }

    /// Key addition, s1 s2 s3 s4 s2 s3 s4 s1 substitution, then P.
    pub fn f_function(&self, x: u64, k: u64) -> u64 {
        const ORDER: [usize; 8] = [0, 1, 2, 3, 1, 2, 3, 0];
        let mut bytes = (x ^ k).to_be_bytes();
        for (b, &s) in bytes.iter_mut().zip(&ORDER) {
            *b = self.consts.sbox[s][*b as usize];
        }
        self.p(u64::from_be_bytes(bytes))
    }

    /// Plain Feistel rounds `L' = R ^ F(L, k)`, `R' = L`, one per key.
    pub fn rounds(&self, mut l: u64, mut r: u64, keys: &[u64]) -> (u64, u64) {
        for &k in keys {
            let next = r ^ self.f_function(l, k);
            r = l;
            l = next;
        }
        (l, r)
    }

    pub fn key_schedule(&self, key: &[u8]) -> Result<CamelliaSubkeys, Error> {
        if key.len() != 16 {
            return Err(Error::Usage(format!(
                "CAMELLIA-128 takes a 128-bit key, got {} bytes",
                key.len()
            )));
        }
        let vars = self.key_vars(Block128::from_slice(key)?);
        Ok(CamelliaSubkeys::from_vars(&vars))
    }

    pub fn encrypt(&self, sk: &CamelliaSubkeys, m: Block128) -> Block128 {
        self.encrypt_observed(sk, m, &mut |_| {})
    }

    pub fn encrypt_observed(
        &self,
        sk: &CamelliaSubkeys,
        m: Block128,
        observe: &mut dyn FnMut(CamelliaEvent),
    ) -> Block128 {
        let (mut l, mut r) = (m ^ Block128::from_lanes(sk.kw[0], sk.kw[1])).lanes();
        observe(CamelliaEvent::PreWhitening);
        for round in 1..=ROUNDS {
            (l, r) = self.rounds(l, r, &sk.k[round - 1..round]);
            observe(CamelliaEvent::Round(round as u8));
            if FL_AFTER.contains(&round) {
                let layer = round / 6;
                l = fl(l, sk.kl[2 * layer - 2]);
                r = fl_inv(r, sk.kl[2 * layer - 1]);
                observe(CamelliaEvent::FlLayer(round as u8));
            }
        }
        let c = Block128::from_lanes(r, l) ^ Block128::from_lanes(sk.kw[2], sk.kw[3]);
        observe(CamelliaEvent::PostWhitening);
        c
    }

    /// The same network run with the subkey order reversed.
    pub fn decrypt(&self, sk: &CamelliaSubkeys, c: Block128) -> Block128 {
        self.encrypt(&sk.reversed(), c)
    }
}
