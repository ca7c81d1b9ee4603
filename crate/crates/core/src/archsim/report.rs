use std::fmt::Write as _;

use super::datapath::{simulate, CipherHooks};
use super::profile::ArchProfile;
use crate::block::Block128;
use crate::camellia::Camellia;
use crate::error::Error;
use crate::hc3::{Hc3, KeySetupMode};
use crate::CipherId;

/// Relative deviation above which a row is flagged.
pub const DISCREPANCY_THRESHOLD: f64 = 0.01;

/// `128 * clock_hz / cycles_per_block`, in bits per second.
pub fn throughput_model(clock_hz: f64, cycles_per_block: f64) -> Result<f64, Error> {
    if !(clock_hz.is_finite() && clock_hz > 0.0) || !(cycles_per_block.is_finite() && cycles_per_block > 0.0) {
        return Err(Error::Usage(format!(
            "throughput needs a positive clock and cycle count, got {clock_hz} Hz and {cycles_per_block} cycles"
        )));
    }
    Ok(128.0 * clock_hz / cycles_per_block)
}

pub fn relative_deviation(model: f64, reported: f64) -> f64 {
    (model - reported).abs() / reported
}

/// Published results of other implementations, kept for comparison.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ReferenceRow {
    pub cipher: CipherId,
    pub label: &'static str,
    pub logic_elements: u32,
    pub mbps: f64,
}

pub const REFERENCE_ROWS: [ReferenceRow; 7] = [
    ReferenceRow { cipher: CipherId::Hc3, label: "TOSHIBA high speed (5 devices)", logic_elements: 22700, mbps: 52.6 },
    ReferenceRow { cipher: CipherId::Hc3, label: "TOSHIBA small area", logic_elements: 6300, mbps: 4.1 },
    ReferenceRow { cipher: CipherId::Camellia, label: "NTT & Mitsubishi loop (XC4000XL)", logic_elements: 1296, mbps: 77.34 },
    ReferenceRow { cipher: CipherId::Camellia, label: "NTT & Mitsubishi loop (VirtexE)", logic_elements: 1816, mbps: 199.46 },
    ReferenceRow { cipher: CipherId::Camellia, label: "NTT & Mitsubishi loop (VirtexE)", logic_elements: 1816, mbps: 211.90 },
    ReferenceRow { cipher: CipherId::Camellia, label: "NTT & Mitsubishi loop (VirtexE)", logic_elements: 1780, mbps: 227.42 },
    ReferenceRow { cipher: CipherId::Camellia, label: "NTT & Mitsubishi unrolled (VirtexE)", logic_elements: 9426, mbps: 401.89 },
];

/// Measured figures for one simulated variant.
#[derive(Clone, PartialEq, Debug)]
pub struct VariantResult {
    pub setup_cycles: u64,
    pub cycles_per_block: u64,
    pub blocks: u64,
    pub total_cycles: u64,
    pub clock_mhz: f64,
    pub clock_bound_mhz: Option<f64>,
    pub modeled_mbps: f64,
    pub deviation: f64,
    pub discrepancy: bool,
    /// Every simulated ciphertext equalled the functional model.
    pub verified: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ReportRow {
    pub cipher: CipherId,
    /// Profile id, or a label for reference rows.
    pub name: String,
    pub logic_elements: u32,
    pub memory_bits: Option<u32>,
    pub reported_mbps: f64,
    /// `None` for reference rows.
    pub sim: Option<VariantResult>,
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct SimReport {
    pub rows: Vec<ReportRow>,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub blocks: u64,
    /// Replaces every profile's clock when set.
    pub clock_mhz: Option<f64>,
    pub key: [u8; 16],
    pub include_reference: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            blocks: 16,
            clock_mhz: None,
            key: *b"0123456789abcdef",
            include_reference: true,
        }
    }
}

fn functional_encrypt(cipher: CipherId, key: &[u8; 16], blocks: &[Block128]) -> Result<Vec<Block128>, Error> {
    Ok(match cipher {
        CipherId::Hc3 => {
            let h = Hc3::builtin();
            let ks = h.key_schedule(key, KeySetupMode::FullPrecompute)?;
            blocks.iter().map(|&b| h.encrypt(&ks, b)).collect()
        }
        CipherId::Camellia => {
            let c = Camellia::builtin();
            let sk = c.key_schedule(key)?;
            blocks.iter().map(|&b| c.encrypt(&sk, b)).collect()
        }
    })
}

/// Simulates one profile and derives its throughput row.
pub fn evaluate(profile: &ArchProfile, opts: &ReportOptions) -> Result<ReportRow, Error> {
    let blocks: Vec<Block128> = (0..opts.blocks).map(|i| Block128::from_u128(i as u128 * 0x0101_0101)).collect();
    let run = simulate(profile, CipherHooks::builtin(profile.cipher), &opts.key, &blocks)?;
    let expected = functional_encrypt(profile.cipher, &opts.key, &blocks)?;
    let clock_mhz = opts.clock_mhz.unwrap_or(profile.clock_mhz);
    let modeled_mbps = throughput_model(clock_mhz * 1e6, run.work_cycles_per_block as f64)? / 1e6;
    let deviation = relative_deviation(modeled_mbps, profile.reported_mbps);
    Ok(ReportRow {
        cipher: profile.cipher,
        name: profile.id.clone(),
        logic_elements: profile.logic_elements,
        memory_bits: profile.memory_bits,
        reported_mbps: profile.reported_mbps,
        sim: Some(VariantResult {
            setup_cycles: run.setup_cycles,
            cycles_per_block: run.work_cycles_per_block,
            blocks: opts.blocks,
            total_cycles: run.total_cycles,
            clock_mhz,
            clock_bound_mhz: profile.clock_bound_mhz(),
            modeled_mbps,
            deviation,
            discrepancy: deviation > DISCREPANCY_THRESHOLD,
            verified: run.ciphertexts == expected,
        }),
    })
}

/// One row per profile, grouped by cipher, each group followed by its
/// reference rows.
pub fn report(profiles: &[ArchProfile], opts: &ReportOptions) -> Result<SimReport, Error> {
    let mut rows = Vec::new();
    for cipher in [CipherId::Hc3, CipherId::Camellia] {
        let mut any = false;
        for p in profiles.iter().filter(|p| p.cipher == cipher) {
            rows.push(evaluate(p, opts)?);
            any = true;
        }
        if any && opts.include_reference {
            rows.extend(REFERENCE_ROWS.iter().filter(|r| r.cipher == cipher).map(|r| ReportRow {
                cipher,
                name: r.label.to_string(),
                logic_elements: r.logic_elements,
                memory_bits: None,
                reported_mbps: r.mbps,
                sim: None,
            }));
        }
    }
    Ok(SimReport { rows })
}

const COLUMNS: [&str; 15] = [
    "cipher",
    "variant",
    "logic_elements",
    "memory_bits",
    "setup_cycles",
    "cycles_per_block",
    "blocks",
    "total_cycles",
    "clock_mhz",
    "clock_bound_mhz",
    "modeled_mbps",
    "reported_mbps",
    "deviation",
    "discrepancy",
    "verified",
];

fn fields(row: &ReportRow) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    let s = row.sim.as_ref();
    vec![
        row.cipher.to_string(),
        row.name.clone(),
        row.logic_elements.to_string(),
        opt(row.memory_bits.map(|m| m.to_string())),
        opt(s.map(|s| s.setup_cycles.to_string())),
        opt(s.map(|s| s.cycles_per_block.to_string())),
        opt(s.map(|s| s.blocks.to_string())),
        opt(s.map(|s| s.total_cycles.to_string())),
        opt(s.map(|s| format!("{:.2}", s.clock_mhz))),
        opt(s.and_then(|s| s.clock_bound_mhz).map(|b| format!("{b:.2}"))),
        opt(s.map(|s| format!("{:.2}", s.modeled_mbps))),
        format!("{:.2}", row.reported_mbps),
        opt(s.map(|s| format!("{:.4}", s.deviation))),
        opt(s.map(|s| s.discrepancy.to_string())),
        opt(s.map(|s| s.verified.to_string())),
    ]
}

impl SimReport {
    pub fn to_csv(&self) -> Result<String, Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(e.to_string());
        w.write_record(COLUMNS).map_err(io)?;
        for row in &self.rows {
            w.write_record(fields(row)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    /// Aligned table; flagged rows are marked `DISCREPANCY`.
    pub fn to_text(&self) -> String {
        let header = [
            "variant", "LE", "mem bits", "setup", "cyc/blk", "clock MHz", "bound MHz", "model Mb/s", "reported Mb/s",
            "dev %", "flag",
        ];
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let s = r.sim.as_ref();
                let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
                let flag = match s {
                    None => "reference".to_string(),
                    Some(s) if !s.verified => "CIPHERTEXT MISMATCH".to_string(),
                    Some(s) if s.discrepancy => "DISCREPANCY".to_string(),
                    Some(_) => "ok".to_string(),
                };
                vec![
                    r.name.clone(),
                    r.logic_elements.to_string(),
                    opt(r.memory_bits.map(|m| m.to_string())),
                    opt(s.map(|s| s.setup_cycles.to_string())),
                    opt(s.map(|s| s.cycles_per_block.to_string())),
                    opt(s.map(|s| format!("{:.2}", s.clock_mhz))),
                    opt(s.and_then(|s| s.clock_bound_mhz).map(|b| format!("{b:.2}"))),
                    opt(s.map(|s| format!("{:.2}", s.modeled_mbps))),
                    format!("{:.2}", r.reported_mbps),
                    opt(s.map(|s| format!("{:.2}", 100.0 * s.deviation))),
                    flag,
                ]
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: Vec<&str>| {
            let mut l = String::new();
            for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
                if i == 0 {
                    let _ = write!(l, "{c:<w$}");
                } else {
                    let _ = write!(l, "  {c:>w$}");
                }
            }
            out.push_str(l.trim_end());
            out.push('\n');
        };
        line(header.to_vec());
        for r in &rows {
            line(r.iter().map(String::as_str).collect());
        }
        out
    }
}
