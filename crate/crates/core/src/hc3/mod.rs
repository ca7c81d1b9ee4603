//! HIEROCRYPT-3 with a 128-bit key (six rounds).
//!
//! Encryption is five applications of the round function `rho`, one `xs`
//! and a final key addition with the first half of the seventh round key:
//!
//! ```text
//! P -> rho(K1) -> ... -> rho(K5) -> xs(K6) -> ^ (K7_1 || K7_2) -> C
//! ```

mod keyschedule;
mod merged;
mod round;

use crate::block::Block128;
use crate::constants::{Constants, Hc3Constants};
use crate::error::Error;
use crate::gf256::{self, MdsMatrix4};
use crate::bitmatrix::BitMatrix;

pub use keyschedule::{
    Hc3KeySchedule, IntermediateCache, KeySetupMode, RetainedMaterial, RoundKeyGenerator,
    ScheduleConst, ScheduleOp, ScheduleStep, CACHE_BITS, SCHEDULE_TABLE, T_TURN,
};
pub use merged::MergedSboxTables;
pub use round::p_n;

/// Number of rounds for the 128-bit key.
pub const ROUNDS: usize = 6;
/// Round keys K(1)..K(7).
pub const ROUND_KEYS: usize = ROUNDS + 1;

/// A 256-bit round key `K1 || K2 || K3 || K4`. `K1 || K2` is added before
/// the first sbox layer of a round, `K3 || K4` before the second.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Hash)]
pub struct RoundKey256 {
    pub lanes: [u64; 4],
}

impl RoundKey256 {
    pub fn first_half(&self) -> Block128 {
        Block128::from_lanes(self.lanes[0], self.lanes[1])
    }

    pub fn second_half(&self) -> Block128 {
        Block128::from_lanes(self.lanes[2], self.lanes[3])
    }
}

/// The 256-bit intermediate key `Z1 || Z2 || Z3 || Z4`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Hash)]
pub struct IntermediateKey {
    pub lanes: [u64; 4],
}

impl IntermediateKey {
    pub fn z1(&self) -> u64 {
        self.lanes[0]
    }
    pub fn z2(&self) -> u64 {
        self.lanes[1]
    }
    pub fn z3(&self) -> u64 {
        self.lanes[2]
    }
    pub fn z4(&self) -> u64 {
        self.lanes[3]
    }
}

/// One stage of the encryption chain, reported to observers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Hc3Stage {
    /// `rho` keyed with `K(t)`.
    Rho(u8),
    /// `xs` keyed with `K(t)`.
    Xs(u8),
    /// Final key addition with the first half of `K(t)`.
    Ak(u8),
}

/// HIEROCRYPT-3 bound to one validated constants set.
#[derive(Clone, Debug)]
pub struct Hc3 {
    consts: Hc3Constants,
    mds_l_inv: MdsMatrix4,
    mds_l_inv_tables: [[u32; 256]; 4],
    mds_h_inv: BitMatrix,
    merged: MergedSboxTables,
}

impl Hc3 {
    pub fn new(consts: &Hc3Constants) -> Self {
        let mds_l_inv = gf256::mds_l_inverse();
        let mds_l_inv_tables = round::column_tables(&mds_l_inv);
        let mds_h_inv = consts.mds_h.inverse().expect("validated constants have an invertible MDS_H");
        let merged = MergedSboxTables::build(&consts.sbox);
        Hc3 {
            consts: consts.clone(),
            mds_l_inv,
            mds_l_inv_tables,
            mds_h_inv,
            merged,
        }
    }

    /// Instance over the built-in constants.
    pub fn builtin() -> &'static Hc3 {
        static BUILTIN: std::sync::OnceLock<Hc3> = std::sync::OnceLock::new();
        BUILTIN.get_or_init(|| Hc3::new(&Constants::builtin().hc3))
    }

    pub fn constants(&self) -> &Hc3Constants {
        &self.consts
    }

    pub fn mds_l_inverse(&self) -> &MdsMatrix4 {
        &self.mds_l_inv
    }

    pub fn merged_tables(&self) -> &MergedSboxTables {
        &self.merged
    }

    pub fn encrypt(&self, ks: &Hc3KeySchedule, p: Block128) -> Block128 {
        self.encrypt_observed(ks, p, &mut |_| {})
    }

    /// Encrypts while reporting each stage, in order, to `observe`.
    pub fn encrypt_observed(
        &self,
        ks: &Hc3KeySchedule,
        p: Block128,
        observe: &mut dyn FnMut(Hc3Stage),
    ) -> Block128 {
        let keys = ks.round_keys();
        let mut x = p;
        for t in 1..ROUNDS {
            x = self.rho(x, &keys[t - 1]);
            observe(Hc3Stage::Rho(t as u8));
        }
        x = self.xs(x, &keys[ROUNDS - 1]);
        observe(Hc3Stage::Xs(ROUNDS as u8));
        x ^= keys[ROUNDS].first_half();
        observe(Hc3Stage::Ak(ROUND_KEYS as u8));
        x
    }

    pub fn decrypt(&self, ks: &Hc3KeySchedule, c: Block128) -> Block128 {
        let keys = ks.round_keys();
        let mut x = c ^ keys[ROUNDS].first_half();
        x = self.xs_inv(x, &keys[ROUNDS - 1]);
        for t in (1..ROUNDS).rev() {
            x = self.rho_inv(x, &keys[t - 1]);
        }
        x
    }

    /// Builds the key schedule for a 16-byte key.
    pub fn key_schedule(&self, key: &[u8], mode: KeySetupMode) -> Result<Hc3KeySchedule, Error> {
        if key.len() != 16 {
            return Err(Error::Usage(format!(
                "HIEROCRYPT-3 takes a 128-bit key, got {} bytes",
                key.len()
            )));
        }
        Ok(self.schedule(Block128::from_slice(key)?, mode))
    }
}
