use hcam_core::archsim::throughput_model;
use hcam_core::camellia::{fl, fl_inv};
use hcam_core::gf256::{gf_inv, gf_mul, mds_l_apply, mds_l_inverse, GfByte, HC3_FIELD};
use hcam_core::{Block128, Camellia, Hc3, IntermediateKey, KeySetupMode, RoundKey256};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn gf_mul_is_commutative_and_distributive(a: u8, b: u8, c: u8) {
        let (a, b, c) = (GfByte(a), GfByte(b), GfByte(c));
        prop_assert_eq!(gf_mul(a, b, HC3_FIELD), gf_mul(b, a, HC3_FIELD));
        prop_assert_eq!(
            gf_mul(a, GfByte(b.0 ^ c.0), HC3_FIELD).0,
            gf_mul(a, b, HC3_FIELD).0 ^ gf_mul(a, c, HC3_FIELD).0
        );
    }

    #[test]
    fn gf_inverse(a in 1u8..) {
        prop_assert_eq!(gf_mul(GfByte(a), gf_inv(GfByte(a), HC3_FIELD), HC3_FIELD), GfByte(1));
    }

    #[test]
    fn mds_l_inverts(x: [u8; 4]) {
        let v = x.map(GfByte);
        prop_assert_eq!(mds_l_inverse().apply(mds_l_apply(v)), v);
    }

    #[test]
    fn hc3_round_trip_every_mode(key: [u8; 16], p: [u8; 16], mode in 0usize..3) {
        let h = Hc3::builtin();
        let ks = h.key_schedule(&key, KeySetupMode::ALL[mode]).unwrap();
        prop_assert_eq!(h.decrypt(&ks, h.encrypt(&ks, Block128(p))), Block128(p));
    }

    #[test]
    fn hc3_sigma_round_trip(lanes: [u64; 4], g: u64) {
        let h = Hc3::builtin();
        let z = IntermediateKey { lanes };
        prop_assert_eq!(h.sigma_inv(&h.sigma(&z, g), g), z);
        prop_assert_eq!(h.sigma(&h.sigma_inv(&z, g), g), z);
    }

    #[test]
    fn hc3_merged_rho_matches(x: [u8; 16], lanes: [u64; 4]) {
        let h = Hc3::builtin();
        let k = RoundKey256 { lanes };
        prop_assert_eq!(h.merged_rho(Block128(x), &k), h.rho(Block128(x), &k));
    }

    #[test]
    fn camellia_round_trip(key: [u8; 16], p: [u8; 16]) {
        let c = Camellia::builtin();
        let sk = c.key_schedule(&key).unwrap();
        prop_assert_eq!(c.decrypt(&sk, c.encrypt(&sk, Block128(p))), Block128(p));
    }

    #[test]
    fn fl_layers_invert(x: u64, k: u64) {
        prop_assert_eq!(fl_inv(fl(x, k), k), x);
    }

    #[test]
    fn throughput_is_linear_in_clock(f in 1e3f64..1e9, c in 1u32..64, k in 1u32..16) {
        let base = throughput_model(f, c as f64).unwrap();
        let scaled = throughput_model(k as f64 * f, c as f64).unwrap();
        prop_assert!((scaled - k as f64 * base).abs() <= 1e-9 * scaled);
        let slower = throughput_model(f, (k * c) as f64).unwrap();
        prop_assert!((slower * k as f64 - base).abs() <= 1e-9 * base);
    }
}
