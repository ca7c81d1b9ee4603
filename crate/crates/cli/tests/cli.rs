use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};

const KEY: &str = "000102030405060708090A0B0C0D0E0F";

fn hcam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcam"))
        .args(args)
        .env_remove("HCAM_CONSTANTS")
        .output()
        .expect("run hcam")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn vectors(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../vectors").join(name)
}

fn crypt(op: &str, cipher: &str, key: &str, input: &Path, output: &Path) -> Output {
    hcam(&[
        op,
        "--cipher",
        cipher,
        "--key",
        key,
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ])
}

#[test]
fn one_mib_round_trip_both_ciphers() {
    let dir = tempfile::tempdir().unwrap();
    let mut data = vec![0u8; 1 << 20];
    rand::rngs::StdRng::seed_from_u64(1).fill(&mut data[..]);
    let (plain, enc, dec) = (dir.path().join("p"), dir.path().join("c"), dir.path().join("d"));
    fs::write(&plain, &data).unwrap();
    for cipher in ["hc3", "camellia"] {
        let o = crypt("encrypt", cipher, KEY, &plain, &enc);
        assert!(o.status.success(), "{}", stderr(&o));
        let c = fs::read(&enc).unwrap();
        assert_eq!(c.len(), data.len());
        assert_ne!(c, data);
        // lower-case key gives the same result
        let o = crypt("decrypt", cipher, &KEY.to_lowercase(), &enc, &dec);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(fs::read(&dec).unwrap(), data, "{cipher}");
    }
}

#[test]
fn camellia_file_matches_published_vector() {
    let dir = tempfile::tempdir().unwrap();
    let (p, c) = (dir.path().join("p"), dir.path().join("c"));
    let k = "0123456789abcdeffedcba9876543210";
    fs::write(&p, hex_bytes(k)).unwrap();
    assert!(crypt("encrypt", "camellia", k, &p, &c).status.success());
    assert_eq!(fs::read(&c).unwrap(), hex_bytes("67673138549669730857065648eabe43"));
}

fn hex_bytes(s: &str) -> Vec<u8> {
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap()).collect()
}

#[test]
fn partial_block_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (p, c) = (dir.path().join("p"), dir.path().join("c"));
    fs::write(&p, [7u8; 17]).unwrap();
    let o = crypt("encrypt", "hc3", KEY, &p, &c);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("17 bytes"), "{}", stderr(&o));
}

#[test]
fn empty_input_gives_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let (p, c) = (dir.path().join("p"), dir.path().join("c"));
    fs::write(&p, []).unwrap();
    let o = crypt("encrypt", "camellia", KEY, &p, &c);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read(&c).unwrap().is_empty());
}

#[test]
fn bad_key_hex_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (p, c) = (dir.path().join("p"), dir.path().join("c"));
    fs::write(&p, [0u8; 16]).unwrap();
    for key in ["00", "zz0102030405060708090a0b0c0d0e0f", "000102030405060708090a0b0c0d0e0f00"] {
        assert_eq!(crypt("encrypt", "hc3", key, &p, &c).status.code(), Some(2), "{key}");
    }
    assert_eq!(hcam(&["encrypt", "--cipher", "des"]).status.code(), Some(2));
}

#[test]
fn kat_files_pass() {
    for (cipher, file) in [("camellia", "camellia.kat"), ("hc3", "hc3-standin.kat")] {
        let o = hcam(&["kat", "--cipher", cipher, "--vectors", vectors(file).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("pass"));
    }
}

#[test]
fn corrupted_nibble_names_the_record() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(vectors("camellia.kat")).unwrap();
    let target = "CT=232eccf46e8e23c486d5ad47f7bd8166";
    assert!(text.contains(target));
    let bad = dir.path().join("bad.kat");
    fs::write(&bad, text.replace(target, "CT=232eccf46e8e23c486d5ad47f7bd8167")).unwrap();
    let o = hcam(&["kat", "--cipher", "camellia", "--vectors", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("record 4 `cross-3`"), "{out}");
    assert!(out.contains("encrypt mismatch") && out.contains("decrypt mismatch"), "{out}");
    assert!(stderr(&o).contains("cross-3"));
}

#[test]
fn malformed_kat_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.kat");
    fs::write(&bad, "KEY=00\n").unwrap();
    let o = hcam(&["kat", "--cipher", "hc3", "--vectors", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

fn bench_row(cipher: &str, blocks: u64) -> (u64, f64, f64) {
    let o = hcam(&["bench", "--cipher", cipher, "--blocks", &blocks.to_string()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "cipher,blocks,seconds,mbps");
    let f: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(f.len(), 4);
    assert_eq!(f[0], cipher);
    (f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
}

#[test]
fn bench_prints_a_csv_row() {
    let (n, secs, mbps) = bench_row("hc3", 1);
    assert_eq!(n, 1);
    assert!(secs > 0.0 && mbps > 0.0);
    let (_, t1, _) = bench_row("camellia", 20_000);
    let (_, t2, _) = bench_row("camellia", 40_000);
    assert!(t2 < 3.0 * 2.0 * t1 + 0.05, "{t1} {t2}");
    assert_eq!(hcam(&["bench", "--cipher", "hc3", "--blocks", "0"]).status.code(), Some(2));
}

#[test]
fn simulate_extensive() {
    let o = hcam(&["simulate", "--variant", "hc3-extensive"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("7 cycles/block") && out.contains("397.35") && out.contains("reported 397"), "{out}");
    assert!(!out.lines().next().unwrap().contains("DISCREPANCY"));
}

#[test]
fn simulate_camellia() {
    let o = hcam(&["simulate", "--variant", "camellia-lu3", "--trace"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("2 setup cycles, 6 cycles/block"), "{out}");
    assert!(out.contains("work   2: rounds 4-6 | fl 1"), "{out}");
}

#[test]
fn simulate_short_is_flagged() {
    let o = hcam(&["simulate", "--variant", "hc3-short"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("128.80") && out.contains("DISCREPANCY"), "{out}");
}

#[test]
fn simulate_all_as_csv_with_clock_override() {
    let o = hcam(&["simulate", "--variant", "all", "--format", "csv", "--clock-mhz", "10", "--blocks", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("cipher,variant,"));
    assert_eq!(out.lines().count(), 1 + 5 + 7);
    let long = out.lines().find(|l| l.contains(",hc3-long,")).unwrap();
    assert!(long.contains(",160.00,"), "{long}");
}

#[test]
fn simulate_unknown_variant_lists_ids() {
    let o = hcam(&["simulate", "--variant", "hc3-medium"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for id in ["hc3-short", "hc3-long", "hc3-verylong", "hc3-extensive", "camellia-lu3"] {
        assert!(err.contains(id), "{err}");
    }
    assert_eq!(hcam(&["simulate", "--variant", "hc3-long", "--clock-mhz", "0"]).status.code(), Some(2));
}

#[test]
fn constants_override_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("c.txt");
    fs::write(&bad, "hcam-constants 1\n").unwrap();
    let p = dir.path().join("p");
    fs::write(&p, [0u8; 16]).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hcam"))
        .args(["encrypt", "--cipher", "hc3", "--key", KEY, "--in", p.to_str().unwrap(), "--out"])
        .arg(dir.path().join("c"))
        .env("HCAM_CONSTANTS", &bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("constants"), "{}", stderr(&o));
}
