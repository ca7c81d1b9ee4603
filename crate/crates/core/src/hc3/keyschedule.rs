use super::{Hc3, IntermediateKey, RoundKey256, ROUND_KEYS};
use crate::block::Block128;

/// Last step that uses the forward update for a 128-bit key.
pub const T_TURN: usize = 4;

/// Size of the long-setup intermediate storage: five 256-bit states plus
/// five 64-bit F_sigma outputs.
pub const CACHE_BITS: usize = 5 * 256 + 5 * 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScheduleOp {
    Pad,
    Sigma0,
    Sigma,
    SigmaInv,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScheduleConst {
    /// Key padding with `H3 || H2`.
    H3H2,
    /// `G0(i)`.
    G0(u8),
}

/// One row of the 128-bit key-schedule sequence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ScheduleStep {
    pub t: i8,
    pub op: ScheduleOp,
    pub constant: ScheduleConst,
    /// Round key produced by this step, if any.
    pub round_key: Option<u8>,
}

const fn row(t: i8, op: ScheduleOp, constant: ScheduleConst, round_key: Option<u8>) -> ScheduleStep {
    ScheduleStep { t, op, constant, round_key }
}

pub const SCHEDULE_TABLE: [ScheduleStep; 9] = {
    use ScheduleConst::*;
    use ScheduleOp::*;
    [
        row(-1, Pad, H3H2, None),
        row(0, Sigma0, G0(5), None),
        row(1, Sigma, G0(0), Some(1)),
        row(2, Sigma, G0(1), Some(2)),
        row(3, Sigma, G0(2), Some(3)),
        row(4, Sigma, G0(3), Some(4)),
        row(5, SigmaInv, G0(3), Some(5)),
        row(6, SigmaInv, G0(2), Some(6)),
        row(7, SigmaInv, G0(1), Some(7)),
    ]
};

/// Which key material a schedule keeps, mirroring the three hardware setups.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KeySetupMode {
    /// Only what round one needs; later keys are generated alongside the rounds.
    OnTheFlyReady,
    /// All seven round keys.
    FullPrecompute,
    /// The 1600-bit intermediate storage from which every round key is a
    /// few XORs away.
    Cached1600,
}

impl KeySetupMode {
    pub const ALL: [KeySetupMode; 3] = [
        KeySetupMode::OnTheFlyReady,
        KeySetupMode::FullPrecompute,
        KeySetupMode::Cached1600,
    ];
}

/// Intermediate storage of the long setup: `Z(0)..Z(4)` and
/// `F_sigma(Z2(j) ^ Z3(j))` for each of them.
///
/// Because `sigma_inv` undoes `sigma`, the backward half of the schedule
/// revisits these states (`Z(8 - t) == Z(t)` for `t >= 4`), so every round
/// key can be formed without running `sigma_inv` or F_sigma again.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct IntermediateCache {
    pub states: [IntermediateKey; 5],
    /// The fifth word belongs to `Z(4)`; the 128-bit schedule never reads it.
    pub f_outputs: [u64; 5],
}

impl IntermediateCache {
    pub fn bit_len(&self) -> usize {
        self.states.len() * 256 + self.f_outputs.len() * 64
    }

    /// `K(t)` for `t` in 1..=7 using only stored words and linear layers.
    pub fn round_key(&self, hc3: &Hc3, t: usize) -> RoundKey256 {
        assert!((1..=ROUND_KEYS).contains(&t), "round key index {t} out of range");
        if t <= T_TURN {
            Hc3::fwd_lanes(&self.states[t - 1], &self.states[t], self.f_outputs[t - 1])
        } else {
            let prev = &self.states[9 - t];
            let next = &self.states[8 - t];
            let (w1, w2) = hc3.p32(next.z3(), next.z4());
            Hc3::bwd_lanes(prev, next, [w1, w2], self.f_outputs[8 - t])
        }
    }
}

/// Steps the intermediate key one round at a time, as the short-setup
/// datapath does while rounds execute.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RoundKeyGenerator {
    z: IntermediateKey,
    t: u8,
}

impl RoundKeyGenerator {
    /// Positioned at `Z(0)`, before `K(1)`.
    pub fn new(hc3: &Hc3, key: Block128) -> Self {
        RoundKeyGenerator {
            z: hc3.prewhiten(&hc3.pad(key)),
            t: 0,
        }
    }

    pub fn from_state(z: IntermediateKey, t: u8) -> Self {
        RoundKeyGenerator { z, t }
    }

    pub fn state(&self) -> &IntermediateKey {
        &self.z
    }

    /// Index of the last round key produced (0 before the first).
    pub fn position(&self) -> u8 {
        self.t
    }

    /// Produces the next round key, or `None` after `K(7)`.
    pub fn advance(&mut self, hc3: &Hc3) -> Option<RoundKey256> {
        let t = self.t as usize + 1;
        if t > ROUND_KEYS {
            return None;
        }
        let g = hc3.g_constant(t);
        let key = if t <= T_TURN {
            let next = hc3.sigma(&self.z, g);
            let (k, _) = hc3.round_keys_fwd(&self.z, &next);
            self.z = next;
            k
        } else {
            let (next, w) = hc3.sigma_inv_with_w(&self.z, g);
            let (k, _) = hc3.round_keys_bwd(&self.z, &next, w);
            self.z = next;
            k
        };
        self.t = t as u8;
        Some(key)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RetainedMaterial {
    /// Generator positioned just after `K(1)`, plus `K(1)` itself.
    RoundOne {
        generator: RoundKeyGenerator,
        k1: RoundKey256,
    },
    AllRoundKeys,
    Cache(IntermediateCache),
}

/// Round keys `K(1)..K(7)` and whatever setup material the mode keeps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Hc3KeySchedule {
    mode: KeySetupMode,
    round_keys: [RoundKey256; ROUND_KEYS],
    retained: RetainedMaterial,
}

impl Hc3KeySchedule {
    pub fn mode(&self) -> KeySetupMode {
        self.mode
    }

    pub fn round_keys(&self) -> &[RoundKey256; ROUND_KEYS] {
        &self.round_keys
    }

    /// `K(t)`, 1-based.
    pub fn round_key(&self, t: usize) -> &RoundKey256 {
        &self.round_keys[t - 1]
    }

    pub fn retained(&self) -> &RetainedMaterial {
        &self.retained
    }

    pub fn cache(&self) -> Option<&IntermediateCache> {
        match &self.retained {
            RetainedMaterial::Cache(c) => Some(c),
            _ => None,
        }
    }

    pub fn schedule_table(&self) -> &'static [ScheduleStep] {
        &SCHEDULE_TABLE
    }
}

impl Hc3 {
    /// `K || H3 || H2`.
    pub fn pad(&self, key: Block128) -> IntermediateKey {
        let (k1, k2) = key.lanes();
        let [h3, h2] = self.consts.pad;
        IntermediateKey { lanes: [k1, k2, h3, h2] }
    }

    /// Key pre-whitening: one forward update with `G0(5)`.
    pub fn prewhiten(&self, z: &IntermediateKey) -> IntermediateKey {
        self.sigma(z, self.consts.g0[5])
    }

    /// The `G` constant used by step `t` of the schedule (0..=7).
    pub fn g_constant(&self, t: usize) -> u64 {
        match SCHEDULE_TABLE.iter().find(|s| s.t as isize == t as isize).map(|s| s.constant) {
            Some(ScheduleConst::G0(i)) => self.consts.g0[i as usize],
            _ => panic!("schedule step {t} has no G constant"),
        }
    }

    pub fn build_cache(&self, key: Block128) -> IntermediateCache {
        let mut states = [IntermediateKey::default(); 5];
        states[0] = self.prewhiten(&self.pad(key));
        for t in 1..=T_TURN {
            states[t] = self.sigma(&states[t - 1], self.g_constant(t));
        }
        let f_outputs = states.map(|z| self.f_sigma(z.z2() ^ z.z3()));
        IntermediateCache { states, f_outputs }
    }

    /// Walks the sequence table row by row with explicit sigma/sigma_inv.
    fn precompute_all(&self, key: Block128) -> [RoundKey256; ROUND_KEYS] {
        let mut keys = [RoundKey256::default(); ROUND_KEYS];
        let mut z = IntermediateKey::default();
        for step in &SCHEDULE_TABLE {
            let g = match step.constant {
                ScheduleConst::G0(i) => self.consts.g0[i as usize],
                ScheduleConst::H3H2 => 0,
            };
            match step.op {
                ScheduleOp::Pad => z = self.pad(key),
                ScheduleOp::Sigma0 => z = self.sigma(&z, g),
                ScheduleOp::Sigma => {
                    let next = self.sigma(&z, g);
                    keys[step.t as usize - 1] = self.round_keys_fwd(&z, &next).0;
                    z = next;
                }
                ScheduleOp::SigmaInv => {
                    let (next, w) = self.sigma_inv_with_w(&z, g);
                    keys[step.t as usize - 1] = self.round_keys_bwd(&z, &next, w).0;
                    z = next;
                }
            }
        }
        keys
    }

    pub(super) fn schedule(&self, key: Block128, mode: KeySetupMode) -> Hc3KeySchedule {
        let (round_keys, retained) = match mode {
            KeySetupMode::OnTheFlyReady => {
                let mut generator = RoundKeyGenerator::new(self, key);
                let k1 = generator.advance(self).unwrap();
                let mut rolling = generator;
                let mut keys = [k1; ROUND_KEYS];
                for k in keys.iter_mut().skip(1) {
                    *k = rolling.advance(self).unwrap();
                }
                (keys, RetainedMaterial::RoundOne { generator, k1 })
            }
            KeySetupMode::FullPrecompute => (self.precompute_all(key), RetainedMaterial::AllRoundKeys),
            KeySetupMode::Cached1600 => {
                let cache = self.build_cache(key);
                let keys = std::array::from_fn(|i| cache.round_key(self, i + 1));
                (keys, RetainedMaterial::Cache(cache))
            }
        };
        Hc3KeySchedule {
            mode,
            round_keys,
            retained,
        }
    }
}
