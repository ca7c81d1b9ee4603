use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::CipherId;

/// One datapath operation. Operations listed in the same cycle run in order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MicroOp {
    /// Latch the input block.
    Load,
    // HIEROCRYPT-3 key side
    Pad,
    /// Whole sigma update for step `t` (`t = 0` is the pre-whitening update).
    Sigma(u8),
    SigmaP32(u8),
    SigmaM5e(u8),
    SigmaFsigma(u8),
    /// Store the current intermediate key and its F_sigma output as cache entry `j`.
    Cache(u8),
    /// Next on-the-fly round key `K(t)` from the intermediate key register.
    KeyGen(u8),
    /// `K(t)` from the 1600-bit cache.
    CacheKey(u8),
    /// Reload the post-setup key registers.
    Restore,
    // HIEROCRYPT-3 data side
    Rho(u8),
    Xs(u8),
    Ak(u8),
    MergedRho(u8),
    MergedXs(u8),
    // CAMELLIA
    KaPart1,
    KaPart2,
    PreWhiten,
    Rounds(u8, u8),
    Fl(u8),
    PostWhiten,
}

impl MicroOp {
    /// `None` for operations shared by both ciphers.
    pub fn cipher(self) -> Option<CipherId> {
        use MicroOp::*;
        match self {
            Load => None,
            KaPart1 | KaPart2 | PreWhiten | Rounds(..) | Fl(_) | PostWhiten => Some(CipherId::Camellia),
            _ => Some(CipherId::Hc3),
        }
    }

    fn check_range(self) -> Result<Self, String> {
        use MicroOp::*;
        let ok = match self {
            Sigma(t) | SigmaP32(t) | SigmaM5e(t) | SigmaFsigma(t) | Cache(t) => t <= 4,
            KeyGen(t) | CacheKey(t) => (1..=7).contains(&t),
            Rho(t) | MergedRho(t) => (1..=5).contains(&t),
            Xs(t) | MergedXs(t) => t == 6,
            Ak(t) => t == 7,
            Rounds(a, b) => 1 <= a && a <= b && b <= 18,
            Fl(n) => n == 1 || n == 2,
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(format!("operand out of range in `{self}`"))
        }
    }
}

impl fmt::Display for MicroOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MicroOp::*;
        match self {
            Load => write!(f, "load"),
            Pad => write!(f, "pad"),
            Sigma(t) => write!(f, "sigma {t}"),
            SigmaP32(t) => write!(f, "sigma.p32 {t}"),
            SigmaM5e(t) => write!(f, "sigma.m5e {t}"),
            SigmaFsigma(t) => write!(f, "sigma.fsigma {t}"),
            Cache(j) => write!(f, "cache {j}"),
            KeyGen(t) => write!(f, "keygen {t}"),
            CacheKey(t) => write!(f, "cachekey {t}"),
            Restore => write!(f, "restore"),
            Rho(t) => write!(f, "rho {t}"),
            Xs(t) => write!(f, "xs {t}"),
            Ak(t) => write!(f, "ak {t}"),
            MergedRho(t) => write!(f, "merged-rho {t}"),
            MergedXs(t) => write!(f, "merged-xs {t}"),
            KaPart1 => write!(f, "ka.part1"),
            KaPart2 => write!(f, "ka.part2"),
            PreWhiten => write!(f, "prewhiten"),
            Rounds(a, b) => write!(f, "rounds {a}-{b}"),
            Fl(n) => write!(f, "fl {n}"),
            PostWhiten => write!(f, "postwhiten"),
        }
    }
}

impl FromStr for MicroOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        use MicroOp::*;
        let mut parts = s.split_whitespace();
        let name = parts.next().ok_or("empty micro-op")?;
        let arg = parts.next();
        if parts.next().is_some() {
            return Err(format!("trailing input in micro-op `{s}`"));
        }
        let num = |a: Option<&str>| -> Result<u8, String> {
            let a = a.ok_or_else(|| format!("`{name}` needs an operand"))?;
            a.parse().map_err(|_| format!("bad operand `{a}` for `{name}`"))
        };
        let none = |op: MicroOp| match arg {
            None => Ok(op),
            Some(a) => Err(format!("`{name}` takes no operand, got `{a}`")),
        };
        let op = match name {
            "load" => none(Load)?,
            "pad" => none(Pad)?,
            "restore" => none(Restore)?,
            "ka.part1" => none(KaPart1)?,
            "ka.part2" => none(KaPart2)?,
            "prewhiten" => none(PreWhiten)?,
            "postwhiten" => none(PostWhiten)?,
            "sigma" => Sigma(num(arg)?),
            "sigma.p32" => SigmaP32(num(arg)?),
            "sigma.m5e" => SigmaM5e(num(arg)?),
            "sigma.fsigma" => SigmaFsigma(num(arg)?),
            "cache" => Cache(num(arg)?),
            "keygen" => KeyGen(num(arg)?),
            "cachekey" => CacheKey(num(arg)?),
            "rho" => Rho(num(arg)?),
            "xs" => Xs(num(arg)?),
            "ak" => Ak(num(arg)?),
            "merged-rho" => MergedRho(num(arg)?),
            "merged-xs" => MergedXs(num(arg)?),
            "fl" => Fl(num(arg)?),
            "rounds" => {
                let a = arg.ok_or("`rounds` needs a range like 1-3")?;
                let (lo, hi) = a.split_once('-').ok_or_else(|| format!("bad round range `{a}`"))?;
                let p = |v: &str| v.parse::<u8>().map_err(|_| format!("bad round range `{a}`"));
                Rounds(p(lo)?, p(hi)?)
            }
            other => return Err(format!("unknown micro-op `{other}`")),
        };
        op.check_range()
    }
}

/// One clock cycle of a schedule.
#[derive(Clone, PartialEq, Debug)]
pub struct CycleSpec {
    pub ops: Vec<MicroOp>,
    /// Combinational delay of the cycle, where known.
    pub latency_ns: Option<f64>,
}

impl fmt::Display for CycleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops: Vec<String> = self.ops.iter().map(|o| o.to_string()).collect();
        write!(f, "{}", ops.join(" | "))?;
        if let Some(ns) = self.latency_ns {
            write!(f, " @ {ns}")?;
        }
        Ok(())
    }
}

impl FromStr for CycleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (ops, latency_ns) = match s.split_once('@') {
            Some((ops, ns)) => {
                let ns: f64 = ns.trim().parse().map_err(|_| format!("bad latency `{}`", ns.trim()))?;
                if !(ns.is_finite() && ns > 0.0) {
                    return Err(format!("latency must be positive, got {ns}"));
                }
                (ops, Some(ns))
            }
            None => (s, None),
        };
        let ops = ops.split('|').map(|o| o.trim().parse()).collect::<Result<Vec<_>, _>>()?;
        Ok(CycleSpec { ops, latency_ns })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ArchProfile {
    pub id: String,
    pub cipher: CipherId,
    pub title: String,
    pub device: String,
    pub setup: Vec<CycleSpec>,
    pub work: Vec<CycleSpec>,
    /// Clock frequency reported for the design.
    pub clock_mhz: f64,
    /// Throughput reported for the design.
    pub reported_mbps: f64,
    pub logic_elements: u32,
    pub memory_bits: Option<u32>,
    pub critical_path: String,
}

impl ArchProfile {
    pub fn setup_cycles(&self) -> usize {
        self.setup.len()
    }

    pub fn work_cycles_per_block(&self) -> usize {
        self.work.len()
    }

    /// Upper bound on the clock implied by the slowest annotated cycle.
    pub fn clock_bound_mhz(&self) -> Option<f64> {
        self.setup
            .iter()
            .chain(&self.work)
            .filter_map(|c| c.latency_ns)
            .reduce(f64::max)
            .map(|ns| 1000.0 / ns)
    }

    fn validate(&self) -> Result<(), String> {
        if self.work.is_empty() {
            return Err("no work cycles".into());
        }
        if !(self.clock_mhz > 0.0 && self.reported_mbps > 0.0) {
            return Err("clock_mhz and reported_mbps must be positive".into());
        }
        for c in self.setup.iter().chain(&self.work) {
            for op in &c.ops {
                if let Some(cipher) = op.cipher() {
                    if cipher != self.cipher {
                        return Err(format!("`{op}` is not a {} operation", self.cipher));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ArchProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.id)?;
        writeln!(f, "cipher = {}", self.cipher)?;
        writeln!(f, "title = {}", self.title)?;
        writeln!(f, "device = {}", self.device)?;
        writeln!(f, "clock_mhz = {}", self.clock_mhz)?;
        writeln!(f, "reported_mbps = {}", self.reported_mbps)?;
        writeln!(f, "logic_elements = {}", self.logic_elements)?;
        if let Some(m) = self.memory_bits {
            writeln!(f, "memory_bits = {m}")?;
        }
        writeln!(f, "critical_path = {}", self.critical_path)?;
        for c in &self.setup {
            writeln!(f, "setup = {c}")?;
        }
        for c in &self.work {
            writeln!(f, "work = {c}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Draft {
    id: String,
    line: usize,
    cipher: Option<CipherId>,
    title: Option<String>,
    device: Option<String>,
    clock_mhz: Option<f64>,
    reported_mbps: Option<f64>,
    logic_elements: Option<u32>,
    memory_bits: Option<u32>,
    critical_path: Option<String>,
    setup: Vec<CycleSpec>,
    work: Vec<CycleSpec>,
}

impl Draft {
    fn finish(self) -> Result<ArchProfile, Error> {
        let err = |m: String| Error::Config(format!("profile `{}` (line {}): {m}", self.id, self.line));
        let need = |name: &str| err(format!("missing `{name}`"));
        let p = ArchProfile {
            cipher: self.cipher.ok_or_else(|| need("cipher"))?,
            title: self.title.clone().unwrap_or_else(|| self.id.clone()),
            device: self.device.clone().unwrap_or_default(),
            clock_mhz: self.clock_mhz.ok_or_else(|| need("clock_mhz"))?,
            reported_mbps: self.reported_mbps.ok_or_else(|| need("reported_mbps"))?,
            logic_elements: self.logic_elements.ok_or_else(|| need("logic_elements"))?,
            memory_bits: self.memory_bits,
            critical_path: self.critical_path.clone().unwrap_or_default(),
            setup: self.setup.clone(),
            work: self.work.clone(),
            id: self.id.clone(),
        };
        p.validate().map_err(err)?;
        Ok(p)
    }
}

/// Parses a profile file. See `docs/formats.md` for the grammar.
pub fn parse_profiles(text: &str) -> Result<Vec<ArchProfile>, Error> {
    let mut out: Vec<ArchProfile> = Vec::new();
    let mut cur: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let err = |m: String| Error::Config(format!("profiles line {n}: {m}"));
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(id) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if let Some(d) = cur.take() {
                out.push(d.finish()?);
            }
            let id = id.trim();
            if id.is_empty() || out.iter().any(|p| p.id == id) {
                return Err(err(format!("empty or duplicate profile id `{id}`")));
            }
            cur = Some(Draft {
                id: id.to_string(),
                line: n,
                ..Draft::default()
            });
            continue;
        }
        let d = cur.as_mut().ok_or_else(|| err("entry before the first [profile] header".into()))?;
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| v.parse::<f64>().map_err(|_| err(format!("bad number `{v}`")));
        let int = |v: &str| v.parse::<u32>().map_err(|_| err(format!("bad integer `{v}`")));
        let dup = |set: bool| if set { Err(err(format!("`{key}` given twice"))) } else { Ok(()) };
        match key {
            "cipher" => {
                dup(d.cipher.is_some())?;
                d.cipher = Some(value.parse().map_err(|e: Error| err(e.to_string()))?);
            }
            "title" => {
                dup(d.title.is_some())?;
                d.title = Some(value.to_string());
            }
            "device" => {
                dup(d.device.is_some())?;
                d.device = Some(value.to_string());
            }
            "critical_path" => {
                dup(d.critical_path.is_some())?;
                d.critical_path = Some(value.to_string());
            }
            "clock_mhz" => {
                dup(d.clock_mhz.is_some())?;
                d.clock_mhz = Some(num(value)?);
            }
            "reported_mbps" => {
                dup(d.reported_mbps.is_some())?;
                d.reported_mbps = Some(num(value)?);
            }
            "logic_elements" => {
                dup(d.logic_elements.is_some())?;
                d.logic_elements = Some(int(value)?);
            }
            "memory_bits" => {
                dup(d.memory_bits.is_some())?;
                d.memory_bits = Some(int(value)?);
            }
            "setup" => d.setup.push(value.parse().map_err(err)?),
            "work" => d.work.push(value.parse().map_err(err)?),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    if let Some(d) = cur.take() {
        out.push(d.finish()?);
    }
    if out.is_empty() {
        return Err(Error::Config("profile file defines no profiles".into()));
    }
    Ok(out)
}

pub fn builtin_profiles_text() -> &'static str {
    include_str!("../../data/profiles.txt")
}

pub fn builtin_profiles() -> &'static [ArchProfile] {
    static BUILTIN: std::sync::OnceLock<Vec<ArchProfile>> = std::sync::OnceLock::new();
    BUILTIN.get_or_init(|| parse_profiles(builtin_profiles_text()).expect("built-in profiles parse"))
}

/// Looks up a built-in profile; the error lists the valid ids.
pub fn profile(id: &str) -> Result<&'static ArchProfile, Error> {
    let all = builtin_profiles();
    all.iter().find(|p| p.id == id).ok_or_else(|| {
        let ids: Vec<&str> = all.iter().map(|p| p.id.as_str()).collect();
        Error::Usage(format!("unknown variant `{id}`; valid variants: {}", ids.join(", ")))
    })
}
