//! Shared fixtures for the cipher benchmarks.

use hcam_core::{Block128, Camellia, CamelliaSubkeys, Hc3, Hc3KeySchedule, KeySetupMode};

pub const KEY: [u8; 16] = *b"bench-key-000001";

pub fn hc3_schedule(mode: KeySetupMode) -> (&'static Hc3, Hc3KeySchedule) {
    let h = Hc3::builtin();
    (h, h.key_schedule(&KEY, mode).expect("16-byte key"))
}

pub fn camellia_schedule() -> (&'static Camellia, CamelliaSubkeys) {
    let c = Camellia::builtin();
    (c, c.key_schedule(&KEY).expect("16-byte key"))
}

pub fn blocks(seed: impl Into<u128>, n: usize) -> Vec<Block128> {
    let mut x = seed.into() | 1;
    (0..n)
        .map(|_| {
            x = x.wrapping_mul(0x2360_ED05_1FC6_5DA4_4385_DF64_9FCC_F645).wrapping_add(1);
            Block128::from_u128(x)
        })
        .collect()
}
