//! End-to-end acceptance checks. Run with
//! `cargo test -p hcam-core --test acceptance -- --nocapture` to see one
//! PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use hcam_core::archsim::{
    builtin_profiles, profile, report, simulate, CipherHooks, Device, Inputs, ReportOptions, DISCREPANCY_THRESHOLD,
};
use hcam_core::camellia::{Half, KeySource, SubkeySlot, ROTATIONS, SIGMA, SUBKEY_TABLE};
use hcam_core::gf256::{gf_mul, mds_check, mul_const_network, GfByte, MdsConst, MdsMatrix4, HC3_FIELD, MDS_L};
use hcam_core::hc3::Hc3Stage;
use hcam_core::kat::{parse_kat, verify};
use hcam_core::{Block128, Camellia, CipherId, Constants, Error, Hc3, IntermediateKey, KeySetupMode};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

/// HC3 under the active constants (`HCAM_CONSTANTS` or the built-in file).
fn hc3() -> Hc3 {
    let c = Constants::from_env_or_builtin().expect("constants load");
    Hc3::new(&c.hc3)
}

fn c1_gf_networks() -> Check {
    let t = Instant::now();
    let mut n = 0;
    for c in MdsConst::ALL {
        for x in 0..=255u8 {
            let net = mul_const_network(c.value(), GfByte(x)).map_err(|e| e.to_string())?;
            let oracle = gf_mul(GfByte(x), GfByte(c.value()), HC3_FIELD);
            ensure(net == oracle, || format!("{:02x} * {x:02x}: network {net:?}, oracle {oracle:?}", c.value()))?;
            n += 1;
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(1), || format!("took {dt:?}"))?;
    Ok(format!("{n} products exact in {:.1} ms", dt.as_secs_f64() * 1e3))
}

fn c2_mds() -> Check {
    let t = Instant::now();
    ensure(mds_check(&MDS_L), || "mds_check(MDS_L) returned false".into())?;
    let singular = MdsMatrix4 {
        entries: [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    };
    ensure(!mds_check(&singular), || "mds_check accepts a singular matrix".into())?;
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(1), || format!("took {dt:?}"))?;
    Ok(format!("all 69 square submatrices nonsingular ({:.1} ms)", dt.as_secs_f64() * 1e3))
}

fn c3_linear_layers() -> Check {
    let h = hc3();
    for bit in 0..64 {
        let e = 1u64 << bit;
        ensure(h.mb3(h.m5e(e)) == e, || format!("M_B3(M_5E(e_{bit})) != e_{bit}"))?;
    }
    for bit in 0..128 {
        let x = 1u128 << bit;
        let (a, b) = ((x >> 64) as u64, x as u64);
        let (w1, w2) = h.p32(a, b);
        ensure(h.p32_inv(w1, w2) == (a, b), || format!("P32^-1(P32(e_{bit})) != e_{bit}"))?;
    }
    Ok("M_B3 . M_5E = I on 64 basis vectors, P32^-1 . P32 = I on 128".into())
}

fn c4_sigma_inversion() -> Check {
    let h = hc3();
    let mut r = rng(4);
    for i in 0..1000 {
        let z = IntermediateKey { lanes: r.gen() };
        let g: u64 = r.gen();
        let back = h.sigma_inv(&h.sigma(&z, g), g);
        ensure((back.z1(), back.z2()) == (z.z1(), z.z2()), || format!("case {i}: z1/z2 not restored"))?;
    }
    Ok("z1, z2 restored on 1000 random (Z, G)".into())
}

fn c5_hc3_functional() -> Check {
    let h = hc3();
    let mut r = rng(5);
    for i in 0..10_000 {
        let key: [u8; 16] = r.gen();
        let ks = h.key_schedule(&key, KeySetupMode::FullPrecompute).map_err(|e| e.to_string())?;
        let p = Block128(r.gen());
        ensure(h.decrypt(&ks, h.encrypt(&ks, p)) == p, || format!("round trip {i} failed"))?;
    }
    let kat_note = match std::env::var_os("HCAM_HC3_KAT") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.to_string_lossy()))?;
            let recs = parse_kat(&text).map_err(|e| e.to_string())?;
            let bad = verify(
                &recs,
                |k, p| Ok(h.encrypt(&h.key_schedule(&k.0, KeySetupMode::FullPrecompute)?, p)),
                |k, c| Ok(h.decrypt(&h.key_schedule(&k.0, KeySetupMode::FullPrecompute)?, c)),
            )
            .map_err(|e| e.to_string())?;
            ensure(bad.is_empty(), || bad.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n"))?;
            format!("{} official vectors bit-exact", recs.len())
        }
        None => {
            let ks = h.key_schedule(&[0x3c; 16], KeySetupMode::FullPrecompute).unwrap();
            let mut stages = Vec::new();
            h.encrypt_observed(&ks, Block128::ZERO, &mut |s| stages.push(s));
            let rho = stages.iter().filter(|s| matches!(s, Hc3Stage::Rho(_))).count();
            ensure(
                rho == 5 && stages[5..] == [Hc3Stage::Xs(6), Hc3Stage::Ak(7)] && stages.len() == 7,
                || format!("stage sequence {stages:?}"),
            )?;
            for i in 0..1000 {
                let key: [u8; 16] = r.gen();
                let keys: Vec<_> = KeySetupMode::ALL
                    .iter()
                    .map(|&m| *h.key_schedule(&key, m).unwrap().round_keys())
                    .collect();
                ensure(keys.windows(2).all(|w| w[0] == w[1]), || format!("setup modes disagree on key {i}"))?;
            }
            "official vectors unavailable (set HCAM_CONSTANTS and HCAM_HC3_KAT to run them); \
             fallback: structure 5 rho + XS + AK, 3 setup modes agree on 1000 keys"
                .into()
        }
    };
    Ok(format!("10000 round trips; {kat_note}"))
}

fn c6_merged() -> Check {
    let h = hc3();
    let mut r = rng(6);
    for i in 0..10_000 {
        let x = Block128(r.gen());
        let k = hcam_core::RoundKey256 { lanes: r.gen() };
        ensure(h.merged_xs(x, &k) == h.xs(x, &k), || format!("random case {i}"))?;
    }
    let k = hcam_core::RoundKey256 { lanes: r.gen() };
    for pos in 0..16 {
        for v in 0..=255u8 {
            let mut x = [0u8; 16];
            x[pos] = v;
            ensure(h.merged_xs(Block128(x), &k) == h.xs(Block128(x), &k), || {
                format!("byte {pos} = {v:02x}")
            })?;
        }
    }
    Ok("10000 random inputs + 16 x 256 byte sweeps".into())
}

/// Subkey generation table transcribed for comparison: slot, source,
/// rotation, half.
const SUBKEY_TABLE_TEXT: &str = "\
kw1 KL 0 L
kw2 KL 0 R
k1 KA 0 L
k2 KA 0 R
k3 KL 15 L
k4 KL 15 R
k5 KA 15 L
k6 KA 15 R
kl1 KA 30 L
kl2 KA 30 R
k7 KL 45 L
k8 KL 45 R
k9 KA 45 L
k10 KL 60 R
k11 KA 60 L
k12 KA 60 R
kl3 KL 77 L
kl4 KL 77 R
k13 KL 94 L
k14 KL 94 R
k15 KA 94 L
k16 KA 94 R
k17 KL 111 L
k18 KL 111 R
kw3 KA 111 L
kw4 KA 111 R";

fn c7_camellia() -> Check {
    let c = Camellia::builtin();
    let mut r = rng(7);
    for i in 0..10_000 {
        let key: [u8; 16] = r.gen();
        let sk = c.key_schedule(&key).map_err(|e| e.to_string())?;
        let p = Block128(r.gen());
        ensure(c.decrypt(&sk, c.encrypt(&sk, p)) == p, || format!("round trip {i} failed"))?;
    }
    let printed = [
        "A09E667F3BCC908B",
        "B67AE8584CAA73B2",
        "C6EF372FE94F82BE",
        "54FF53A5F1D36F1C",
        "10E527FADE682D1D",
        "B05688C2B3E6C1FD",
    ];
    for (i, (s, p)) in SIGMA.iter().zip(printed).enumerate() {
        ensure(format!("{s:016X}") == p, || format!("Sigma{} = {s:016X}, table {p}", i + 1))?;
    }
    for (rule, line) in SUBKEY_TABLE.iter().zip(SUBKEY_TABLE_TEXT.lines()) {
        let f: Vec<&str> = line.split(' ').collect();
        let slot = match f[0] {
            s if s.starts_with("kw") => SubkeySlot::Kw(s[2..].parse().unwrap()),
            s if s.starts_with("kl") => SubkeySlot::Kl(s[2..].parse().unwrap()),
            s => SubkeySlot::K(s[1..].parse().unwrap()),
        };
        let source = if f[1] == "KL" { KeySource::KL } else { KeySource::KA };
        let half = if f[3] == "L" { Half::L } else { Half::R };
        let want = (slot, source, f[2].parse::<u32>().unwrap(), half);
        ensure((rule.slot, rule.source, rule.rotation, rule.half) == want, || format!("{rule:?} vs `{line}`"))?;
    }
    ensure(SUBKEY_TABLE.len() == SUBKEY_TABLE_TEXT.lines().count(), || "subkey table length".into())?;
    ensure(ROTATIONS == [0, 15, 30, 45, 60, 77, 94, 111], || format!("{ROTATIONS:?}"))?;

    let key = Block128::from_hex("0123456789abcdeffedcba9876543210").unwrap();
    let sk = c.key_schedule(&key.0).unwrap();
    ensure(c.encrypt(&sk, key).to_hex() == "67673138549669730857065648eabe43", || {
        "published 128-bit vector".into()
    })?;
    let path = repo_file("vectors/camellia.kat");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let recs = parse_kat(&text).map_err(|e| e.to_string())?;
    let bad = verify(
        &recs,
        |k, p| Ok(c.encrypt(&c.key_schedule(&k.0)?, p)),
        |k, x| Ok(c.decrypt(&c.key_schedule(&k.0)?, x)),
    )
    .map_err(|e| e.to_string())?;
    ensure(bad.is_empty(), || bad.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n"))?;
    Ok(format!(
        "10000 round trips; Sigma1..6 and 26 subkey rules match the tables; {} vectors pass both ways",
        recs.len()
    ))
}

fn functional(cipher: CipherId, h: &Hc3, key: &[u8; 16], p: Block128) -> Result<Block128, Error> {
    Ok(match cipher {
        CipherId::Hc3 => h.encrypt(&h.key_schedule(key, KeySetupMode::FullPrecompute)?, p),
        CipherId::Camellia => {
            let c = Camellia::builtin();
            c.encrypt(&c.key_schedule(key)?, p)
        }
    })
}

fn c8_sim_agreement() -> Check {
    let h = Hc3::builtin();
    let mut r = rng(8);
    let mut total = 0;
    for p in builtin_profiles() {
        let hooks = CipherHooks::builtin(p.cipher);
        for i in 0..1000 {
            let key: [u8; 16] = r.gen();
            let b = Block128(r.gen());
            let run = simulate(p, hooks, &key, &[b]).map_err(|e| format!("{}: {e}", p.id))?;
            let want = functional(p.cipher, h, &key, b).map_err(|e| e.to_string())?;
            ensure(run.ciphertexts == [want], || format!("{} case {i}", p.id))?;
            total += 1;
        }
    }
    Ok(format!("{total} simulated blocks equal the functional ciphers"))
}

fn c9_cycle_counts() -> Check {
    let want = [
        ("hc3-short", None, 8),
        ("hc3-long", None, 8),
        ("hc3-verylong", None, 7),
        ("hc3-extensive", None, 7),
        ("camellia-lu3", Some(2), 6),
    ];
    let mut seen = Vec::new();
    for (id, setup, work) in want {
        let p = profile(id).map_err(|e| e.to_string())?;
        let run = simulate(p, CipherHooks::builtin(p.cipher), &[0; 16], &[Block128::ZERO; 3]).map_err(|e| e.to_string())?;
        ensure(run.work_cycles_per_block == work, || format!("{id}: {} work cycles", run.work_cycles_per_block))?;
        if let Some(s) = setup {
            ensure(run.setup_cycles == s, || format!("{id}: {} setup cycles", run.setup_cycles))?;
        }
        seen.push(format!("{id} {}", run.work_cycles_per_block));
    }
    Ok(format!("{}; camellia-lu3 setup 2", seen.join(", ")))
}

fn c10_throughput() -> Check {
    let rep = report(builtin_profiles(), &ReportOptions::default()).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for row in &rep.rows {
        let Some(s) = &row.sim else { continue };
        parts.push(format!(
            "{} {:.2} vs {:.0} Mb/s{}",
            row.name,
            s.modeled_mbps,
            row.reported_mbps,
            if s.discrepancy { " [flagged]" } else { "" }
        ));
        match row.name.as_str() {
            "hc3-long" | "hc3-extensive" => ensure(s.deviation <= DISCREPANCY_THRESHOLD && !s.discrepancy, || {
                format!("{}: deviation {:.4}", row.name, s.deviation)
            })?,
            _ => ensure(s.discrepancy, || format!("{}: discrepancy flag not set", row.name))?,
        }
    }
    Ok(parts.join("; "))
}

fn c11_handshake() -> Check {
    let mut r = rng(11);
    let mut blocks = 0;
    for p in builtin_profiles() {
        let key: [u8; 16] = r.gen();
        let h = Hc3::builtin();
        let mut dev = Device::new(p, CipherHooks::builtin(p.cipher), &key).map_err(|e| e.to_string())?;
        let work_len = p.work_cycles_per_block();
        let (mut ready_reached, mut pulse, mut current) = (false, 0usize, Block128::ZERO);
        for step in 0..10_000 {
            let inputs = Inputs {
                reset_edge: r.gen_bool(0.005),
                start_edge: r.gen_bool(0.2),
            };
            let before = dev.state;
            if before.ready && !before.work && inputs.start_edge {
                current = Block128(r.gen());
                dev.datapath.set_input(current);
            }
            let out = dev.tick(inputs).map_err(|e| format!("{} step {step}: {e}", p.id))?;
            let s = dev.state;
            let at = || format!("{} step {step}", p.id);
            if !before.ready {
                ensure(!s.work && s.blocks_done == before.blocks_done, || format!("{}: START not ignored", at()))?;
            }
            if before.ready && !inputs.reset_edge {
                ensure(s.ready, || format!("{}: READY fell without RESET", at()))?;
            }
            if inputs.reset_edge {
                ensure(!s.ready && !s.work, || format!("{}: RESET did not drop READY", at()))?;
            }
            ensure(!s.work || ready_reached, || format!("{}: WORK before READY", at()))?;
            if s.work {
                pulse += 1;
            }
            if let Some(c) = out {
                ensure(pulse == work_len, || format!("{}: WORK pulse {pulse} cycles", at()))?;
                let want = functional(p.cipher, h, &key, current).map_err(|e| e.to_string())?;
                ensure(c == want, || format!("{}: wrong ciphertext", at()))?;
                pulse = 0;
                blocks += 1;
            } else if !s.work {
                pulse = 0;
            }
            ready_reached |= s.ready;
        }
    }
    Ok(format!("5 x 10000 random edge steps, {blocks} blocks completed, invariants held"))
}

#[test]
fn acceptance() {
    let suite_start = Instant::now();
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 11] = [
        ("GF network equivalence", c1_gf_networks),
        ("MDS property", c2_mds),
        ("linear-layer composition", c3_linear_layers),
        ("sigma inversion", c4_sigma_inversion),
        ("HC3 functional correctness", c5_hc3_functional),
        ("merged-path equivalence", c6_merged),
        ("CAMELLIA functional correctness", c7_camellia),
        ("simulator/functional agreement", c8_sim_agreement),
        ("cycle counts", c9_cycle_counts),
        ("throughput reproduction", c10_throughput),
        ("handshake properties", c11_handshake),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    let total = suite_start.elapsed();
    if total < Duration::from_secs(300) {
        println!("criterion 12 PASS  desk-scale runtime: {:.2} s < 300 s", total.as_secs_f64());
    } else {
        println!("criterion 12 FAIL  desk-scale runtime: {:.2} s", total.as_secs_f64());
        failed.push(12);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
