//! Command-line front end for the HIEROCRYPT-3 / CAMELLIA toolkit.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or format error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hcam_core::archsim::{self, ArchProfile, ReportOptions};
use hcam_core::kat::{parse_kat, verify};
use hcam_core::{
    Block128, Camellia, CamelliaSubkeys, CipherId, Constants, Error, Hc3, Hc3KeySchedule, KeySetupMode,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<hcam_core::ConstantsError> for CliError {
    fn from(e: hcam_core::ConstantsError) -> Self {
        CliError::Usage(format!("constants: {e}"))
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CipherArg {
    Hc3,
    Camellia,
}

impl From<CipherArg> for CipherId {
    fn from(c: CipherArg) -> Self {
        match c {
            CipherArg::Hc3 => CipherId::Hc3,
            CipherArg::Camellia => CipherId::Camellia,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hcam", version, about = "HIEROCRYPT-3 and CAMELLIA block ciphers, test vectors and datapath simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt a file block by block (raw ECB, no padding)
    Encrypt(CryptArgs),
    /// Decrypt a file block by block (raw ECB, no padding)
    Decrypt(CryptArgs),
    /// Check a known-answer vector file in both directions
    Kat {
        #[arg(long, value_enum)]
        cipher: CipherArg,
        #[arg(long)]
        vectors: PathBuf,
    },
    /// Time N block encryptions under a fixed key; prints one CSV row
    Bench {
        #[arg(long, value_enum)]
        cipher: CipherArg,
        #[arg(long, default_value_t = 100_000)]
        blocks: u64,
    },
    /// Run the cycle-level model of a hardware variant (or `all`)
    Simulate {
        #[arg(long)]
        variant: String,
        #[arg(long, default_value_t = 16)]
        blocks: u64,
        /// Override the variant's clock frequency
        #[arg(long)]
        clock_mhz: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print the per-cycle micro-op schedule
        #[arg(long)]
        trace: bool,
        /// Profile file to use instead of the built-in variants
        #[arg(long)]
        profiles: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
pub struct CryptArgs {
    #[arg(long, value_enum)]
    pub cipher: CipherArg,
    /// 128-bit key as 32 hex digits
    #[arg(long)]
    pub key: String,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub output: PathBuf,
}

/// A keyed cipher instance under the active constants.
#[allow(clippy::large_enum_variant)]
pub enum Keyed {
    Hc3(Hc3, Hc3KeySchedule),
    Camellia(Camellia, CamelliaSubkeys),
}

impl Keyed {
    pub fn new(cipher: CipherId, consts: &Constants, key: &Block128) -> Result<Keyed, Error> {
        Ok(match cipher {
            CipherId::Hc3 => {
                let h = Hc3::new(&consts.hc3);
                let ks = h.key_schedule(&key.0, KeySetupMode::FullPrecompute)?;
                Keyed::Hc3(h, ks)
            }
            CipherId::Camellia => {
                let c = Camellia::new(&consts.camellia);
                let sk = c.key_schedule(&key.0)?;
                Keyed::Camellia(c, sk)
            }
        })
    }

    pub fn encrypt(&self, b: Block128) -> Block128 {
        match self {
            Keyed::Hc3(h, ks) => h.encrypt(ks, b),
            Keyed::Camellia(c, sk) => c.encrypt(sk, b),
        }
    }

    pub fn decrypt(&self, b: Block128) -> Block128 {
        match self {
            Keyed::Hc3(h, ks) => h.decrypt(ks, b),
            Keyed::Camellia(c, sk) => c.decrypt(sk, b),
        }
    }
}

fn parse_key(hex: &str) -> Result<Block128, CliError> {
    Block128::from_hex(hex.trim()).map_err(|e| CliError::Usage(format!("--key: {e}")))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Encrypt(a) => cmd_crypt(&a, false),
        Command::Decrypt(a) => cmd_crypt(&a, true),
        Command::Kat { cipher, vectors } => cmd_kat(cipher.into(), &vectors, out),
        Command::Bench { cipher, blocks } => cmd_bench(cipher.into(), blocks, out),
        Command::Simulate {
            variant,
            blocks,
            clock_mhz,
            format,
            trace,
            profiles,
        } => cmd_simulate(&variant, blocks, clock_mhz, format, trace, profiles.as_deref(), out),
    }
}

fn w(r: std::io::Result<()>) -> Result<(), CliError> {
    r.map_err(|e| CliError::Usage(format!("write: {e}")))
}

pub fn cmd_crypt(a: &CryptArgs, decrypt: bool) -> Result<(), CliError> {
    let key = parse_key(&a.key)?;
    let data = fs::read(&a.input).map_err(|e| io_err(&a.input, e))?;
    if data.len() % 16 != 0 {
        return Err(CliError::Usage(format!(
            "{}: {} bytes is not a whole number of 16-byte blocks (raw ECB, no padding)",
            a.input.display(),
            data.len()
        )));
    }
    let consts = Constants::from_env_or_builtin()?;
    let keyed = Keyed::new(a.cipher.into(), &consts, &key)?;
    let mut out = Vec::with_capacity(data.len());
    for chunk in data.chunks_exact(16) {
        let b = Block128::from_slice(chunk)?;
        let r = if decrypt { keyed.decrypt(b) } else { keyed.encrypt(b) };
        out.extend_from_slice(&r.0);
    }
    fs::write(&a.output, out).map_err(|e| io_err(&a.output, e))
}

pub fn cmd_kat(cipher: CipherId, path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let records = parse_kat(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let consts = Constants::from_env_or_builtin()?;
    let keyed = |k: &Block128| Keyed::new(cipher, &consts, k);
    let bad = verify(
        &records,
        |k, p| Ok(keyed(k)?.encrypt(p)),
        |k, c| Ok(keyed(k)?.decrypt(c)),
    )?;
    for m in &bad {
        w(writeln!(out, "FAIL {m}"))?;
    }
    let failed_records = {
        let mut idx: Vec<usize> = bad.iter().map(|m| m.record.index).collect();
        idx.dedup();
        idx.len()
    };
    w(writeln!(
        out,
        "{cipher}: {} of {} records pass (encrypt and decrypt)",
        records.len() - failed_records,
        records.len()
    ))?;
    if bad.is_empty() {
        Ok(())
    } else {
        let mut names: Vec<String> = bad.iter().map(|m| m.record.label()).collect();
        names.dedup();
        Err(CliError::Mismatch(format!("known-answer mismatch in {}", names.join(", "))))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchResult {
    pub cipher: CipherId,
    pub blocks: u64,
    pub seconds: f64,
    pub mbps: f64,
}

pub fn bench(cipher: CipherId, blocks: u64) -> Result<BenchResult, CliError> {
    if blocks == 0 {
        return Err(CliError::Usage("--blocks must be positive".into()));
    }
    let consts = Constants::from_env_or_builtin()?;
    let keyed = Keyed::new(cipher, &consts, &Block128::from_u128(0x000102030405060708090a0b0c0d0e0f))?;
    let mut b = Block128::ZERO;
    let t = Instant::now();
    for _ in 0..blocks {
        b = keyed.encrypt(b);
    }
    let seconds = t.elapsed().as_secs_f64().max(1e-9);
    std::hint::black_box(b);
    Ok(BenchResult {
        cipher,
        blocks,
        seconds,
        mbps: blocks as f64 * 128.0 / seconds / 1e6,
    })
}

pub fn cmd_bench(cipher: CipherId, blocks: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let r = bench(cipher, blocks)?;
    w(writeln!(out, "cipher,blocks,seconds,mbps"))?;
    w(writeln!(out, "{},{},{:.6},{:.3}", r.cipher, r.blocks, r.seconds, r.mbps))
}

fn load_profiles(path: Option<&Path>) -> Result<Vec<ArchProfile>, CliError> {
    match path {
        None => Ok(archsim::builtin_profiles().to_vec()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            Ok(archsim::parse_profiles(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?)
        }
    }
}

fn print_trace(p: &ArchProfile, out: &mut dyn Write) -> Result<(), CliError> {
    w(writeln!(out, "{} schedule:", p.id))?;
    for c in archsim::setup_trace(p).iter().chain(&archsim::work_trace(p)) {
        let ops: Vec<String> = c.ops.iter().map(|o| o.to_string()).collect();
        let phase = match c.phase {
            archsim::TracePhase::Setup => "setup",
            archsim::TracePhase::Work => "work",
        };
        let lat = c.latency_ns.map(|ns| format!("  ({ns} ns)")).unwrap_or_default();
        w(writeln!(out, "  {phase:<5} {:>2}: {}{lat}", c.index, ops.join(" | ")))?;
    }
    Ok(())
}

pub fn cmd_simulate(
    variant: &str,
    blocks: u64,
    clock_mhz: Option<f64>,
    format: Format,
    trace: bool,
    profiles: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(f) = clock_mhz {
        if !(f.is_finite() && f > 0.0) {
            return Err(CliError::Usage(format!("--clock-mhz must be positive, got {f}")));
        }
    }
    if blocks == 0 {
        return Err(CliError::Usage("--blocks must be positive".into()));
    }
    let all = load_profiles(profiles)?;
    let selected: Vec<ArchProfile> = if variant == "all" {
        all.clone()
    } else {
        match all.iter().find(|p| p.id == variant) {
            Some(p) => vec![p.clone()],
            None => {
                let ids: Vec<&str> = all.iter().map(|p| p.id.as_str()).collect();
                return Err(CliError::Usage(format!(
                    "unknown variant `{variant}`; valid variants: {}, all",
                    ids.join(", ")
                )));
            }
        }
    };
    let opts = ReportOptions {
        blocks,
        clock_mhz,
        include_reference: variant == "all",
        ..ReportOptions::default()
    };
    let rep = archsim::report(&selected, &opts)?;
    match format {
        Format::Csv => w(write!(out, "{}", rep.to_csv()?))?,
        Format::Text => {
            if trace {
                for p in &selected {
                    print_trace(p, out)?;
                }
            }
            for row in &rep.rows {
                let Some(s) = &row.sim else { continue };
                w(writeln!(
                    out,
                    "{}: {} setup cycles, {} cycles/block, {:.2} MHz, modeled {:.2} Mb/s, reported {} Mb/s, deviation {:.2}%{}",
                    row.name,
                    s.setup_cycles,
                    s.cycles_per_block,
                    s.clock_mhz,
                    s.modeled_mbps,
                    row.reported_mbps,
                    100.0 * s.deviation,
                    if s.discrepancy { " DISCREPANCY" } else { "" }
                ))?;
            }
            w(writeln!(out))?;
            w(write!(out, "{}", rep.to_text()))?;
        }
    }
    let unverified: Vec<&str> = rep
        .rows
        .iter()
        .filter(|r| r.sim.as_ref().is_some_and(|s| !s.verified))
        .map(|r| r.name.as_str())
        .collect();
    if unverified.is_empty() {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!(
            "simulated ciphertext differs from the functional cipher for {}",
            unverified.join(", ")
        )))
    }
}
