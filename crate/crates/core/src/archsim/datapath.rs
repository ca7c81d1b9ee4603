use super::device::{Activity, DeviceState, Inputs, Phase};
use super::profile::{ArchProfile, CycleSpec, MicroOp};
use crate::block::Block128;
use crate::camellia::{fl, fl_inv, Camellia, CamelliaSubkeys, KeyVars};
use crate::error::Error;
use crate::hc3::{Hc3, IntermediateCache, IntermediateKey, RoundKey256, ROUND_KEYS, T_TURN};
use crate::CipherId;

/// Functional models the datapath dispatches to.
#[derive(Clone, Copy)]
pub enum CipherHooks<'a> {
    Hc3(&'a Hc3),
    Camellia(&'a Camellia),
}

impl<'a> CipherHooks<'a> {
    pub fn cipher(&self) -> CipherId {
        match self {
            CipherHooks::Hc3(_) => CipherId::Hc3,
            CipherHooks::Camellia(_) => CipherId::Camellia,
        }
    }

    pub fn builtin(cipher: CipherId) -> CipherHooks<'static> {
        match cipher {
            CipherId::Hc3 => CipherHooks::Hc3(Hc3::builtin()),
            CipherId::Camellia => CipherHooks::Camellia(Camellia::builtin()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TracePhase {
    Setup,
    Work,
}

#[derive(Clone, PartialEq, Debug)]
pub struct TraceCycle {
    pub phase: TracePhase,
    /// 1-based within its phase.
    pub index: usize,
    pub ops: Vec<MicroOp>,
    pub latency_ns: Option<f64>,
}

pub type CycleTrace = Vec<TraceCycle>;

fn trace(phase: TracePhase, cycles: &[CycleSpec]) -> CycleTrace {
    cycles
        .iter()
        .enumerate()
        .map(|(i, c)| TraceCycle {
            phase,
            index: i + 1,
            ops: c.ops.clone(),
            latency_ns: c.latency_ns,
        })
        .collect()
}

/// Setup micro-ops of a variant, one entry per clock cycle.
pub fn setup_trace(profile: &ArchProfile) -> CycleTrace {
    trace(TracePhase::Setup, &profile.setup)
}

pub fn work_trace(profile: &ArchProfile) -> CycleTrace {
    trace(TracePhase::Work, &profile.work)
}

#[derive(Clone, Copy, Debug, Default)]
struct Hc3Regs {
    z: IntermediateKey,
    /// `W` from the first third of a split sigma.
    w: Option<[u64; 2]>,
    /// New `Z3 || Z4` from the second third.
    z34: Option<[u64; 2]>,
    /// Index of the last round key produced by `keygen`.
    gen_pos: u8,
    cache: IntermediateCache,
    cached: [bool; 5],
    subkeys: [Option<RoundKey256>; ROUND_KEYS + 1],
}

#[derive(Clone, Copy, Debug, Default)]
struct CamelliaRegs {
    ka_mid: Option<u128>,
    subkeys: Option<CamelliaSubkeys>,
    l: u64,
    r: u64,
}

#[derive(Clone, Copy, Debug)]
#[allow(clippy::large_enum_variant)]
enum Regs {
    Hc3(Hc3Regs),
    Camellia(CamelliaRegs),
}

/// Registers of one encryption unit plus the functional models that its
/// micro-ops call into. Only the encryption direction is modelled.
pub struct Datapath<'a> {
    profile: &'a ArchProfile,
    hooks: CipherHooks<'a>,
    key: Block128,
    input: Block128,
    state: Block128,
    regs: Regs,
    /// Registers as they stood when setup completed.
    snapshot: Option<Regs>,
}

fn sim_err(msg: String) -> Error {
    Error::Simulation(msg)
}

impl<'a> Datapath<'a> {
    pub fn new(profile: &'a ArchProfile, hooks: CipherHooks<'a>, key: &[u8]) -> Result<Self, Error> {
        if profile.cipher != hooks.cipher() {
            return Err(Error::Usage(format!(
                "profile `{}` is a {} design, got {} hooks",
                profile.id,
                profile.cipher,
                hooks.cipher()
            )));
        }
        let key = Block128::from_slice(key)
            .map_err(|_| Error::Usage(format!("{} takes a 128-bit key, got {} bytes", profile.cipher, key.len())))?;
        let regs = match hooks {
            CipherHooks::Hc3(_) => Regs::Hc3(Hc3Regs::default()),
            CipherHooks::Camellia(_) => Regs::Camellia(CamelliaRegs::default()),
        };
        Ok(Datapath {
            profile,
            hooks,
            key,
            input: Block128::ZERO,
            state: Block128::ZERO,
            regs,
            snapshot: None,
        })
    }

    pub fn profile(&self) -> &ArchProfile {
        self.profile
    }

    /// Value on the data output register.
    pub fn output(&self) -> Block128 {
        self.state
    }

    pub fn set_input(&mut self, block: Block128) {
        self.input = block;
    }

    pub fn run_setup(&mut self) -> Result<CycleTrace, Error> {
        for c in &self.profile.setup {
            self.exec_cycle(&c.ops)?;
        }
        self.finish_setup();
        Ok(setup_trace(self.profile))
    }

    /// Encrypts one block through the work schedule.
    pub fn run_block(&mut self, p: Block128) -> Result<(Block128, CycleTrace), Error> {
        self.set_input(p);
        for c in &self.profile.work {
            self.exec_cycle(&c.ops)?;
        }
        Ok((self.state, work_trace(self.profile)))
    }

    pub(crate) fn finish_setup(&mut self) {
        self.snapshot = Some(self.regs);
    }

    /// Back to the post-setup registers, as after a RESET edge.
    pub fn reload_setup(&mut self) {
        if let Some(s) = self.snapshot {
            self.regs = s;
        }
    }

    pub fn exec_cycle(&mut self, ops: &[MicroOp]) -> Result<(), Error> {
        for &op in ops {
            self.exec(op)?;
        }
        Ok(())
    }

    fn exec(&mut self, op: MicroOp) -> Result<(), Error> {
        if op == MicroOp::Load {
            self.state = self.input;
            return Ok(());
        }
        match (self.hooks, &mut self.regs) {
            (CipherHooks::Hc3(h), Regs::Hc3(r)) => {
                let snapshot = match &self.snapshot {
                    Some(Regs::Hc3(s)) => Some(*s),
                    _ => None,
                };
                exec_hc3(h, r, snapshot, self.key, &mut self.state, op)
            }
            (CipherHooks::Camellia(c), Regs::Camellia(r)) => exec_camellia(c, r, self.key, &mut self.state, op),
            _ => Err(Error::Internal("register file does not match hooks".into())),
        }
    }
}

/// `G` for sigma step `t`; step 0 is the pre-whitening update.
fn sigma_g(h: &Hc3, t: u8) -> u64 {
    if t == 0 {
        h.constants().g0[5]
    } else {
        h.g_constant(t as usize)
    }
}

fn subkey(r: &Hc3Regs, t: u8) -> Result<RoundKey256, Error> {
    r.subkeys[t as usize].ok_or_else(|| sim_err(format!("round key K({t}) is not in the subkey buffer")))
}

fn exec_hc3(
    h: &Hc3,
    r: &mut Hc3Regs,
    snapshot: Option<Hc3Regs>,
    key: Block128,
    state: &mut Block128,
    op: MicroOp,
) -> Result<(), Error> {
    use MicroOp::*;
    match op {
        Pad => r.z = h.pad(key),
        Sigma(t) => r.z = h.sigma(&r.z, sigma_g(h, t)),
        SigmaP32(_) => {
            let (w1, w2) = h.p32(r.z.z3(), r.z.z4());
            r.w = Some([w1, w2]);
        }
        SigmaM5e(t) => {
            let [w1, w2] = r.w.take().ok_or_else(|| sim_err(format!("`{op}` before sigma.p32 {t}")))?;
            r.z34 = Some([h.m5e(w1) ^ sigma_g(h, t), h.m5e(w2)]);
        }
        SigmaFsigma(t) => {
            let [z3, z4] = r.z34.take().ok_or_else(|| sim_err(format!("`{op}` before sigma.m5e {t}")))?;
            let z2 = r.z.z1() ^ h.f_sigma(r.z.z2() ^ z3);
            r.z = IntermediateKey {
                lanes: [r.z.z2(), z2, z3, z4],
            };
        }
        Cache(j) => {
            r.cache.states[j as usize] = r.z;
            r.cache.f_outputs[j as usize] = h.f_sigma(r.z.z2() ^ r.z.z3());
            r.cached[j as usize] = true;
        }
        KeyGen(t) => {
            if t != r.gen_pos + 1 {
                return Err(sim_err(format!("`{op}` out of order: last round key generated was K({})", r.gen_pos)));
            }
            let g = h.g_constant(t as usize);
            let k = if t as usize <= T_TURN {
                let next = h.sigma(&r.z, g);
                let (k, _) = h.round_keys_fwd(&r.z, &next);
                r.z = next;
                k
            } else {
                let (next, w) = h.sigma_inv_with_w(&r.z, g);
                let (k, _) = h.round_keys_bwd(&r.z, &next, w);
                r.z = next;
                k
            };
            r.subkeys[t as usize] = Some(k);
            r.gen_pos = t;
        }
        CacheKey(t) => {
            let needed = if t as usize <= T_TURN { [t - 1, t] } else { [9 - t, 8 - t] };
            if let Some(j) = needed.iter().find(|&&j| !r.cached[j as usize]) {
                return Err(sim_err(format!("`{op}` needs cache entry {j}, which was never stored")));
            }
            r.subkeys[t as usize] = Some(r.cache.round_key(h, t as usize));
        }
        Restore => {
            let s = snapshot.ok_or_else(|| sim_err("`restore` before setup completed".into()))?;
            *r = s;
        }
        Rho(t) => *state = h.rho(*state, &subkey(r, t)?),
        Xs(t) => *state = h.xs(*state, &subkey(r, t)?),
        MergedRho(t) => *state = h.merged_rho(*state, &subkey(r, t)?),
        MergedXs(t) => *state = h.merged_xs(*state, &subkey(r, t)?),
        Ak(t) => *state ^= subkey(r, t)?.first_half(),
        other => return Err(Error::Internal(format!("`{other}` reached the HC3 datapath"))),
    }
    Ok(())
}

fn exec_camellia(
    c: &Camellia,
    r: &mut CamelliaRegs,
    key: Block128,
    state: &mut Block128,
    op: MicroOp,
) -> Result<(), Error> {
    use MicroOp::*;
    let sk = |r: &CamelliaRegs| r.subkeys.ok_or_else(|| sim_err(format!("`{op}` before the subkeys exist")));
    match op {
        KaPart1 => r.ka_mid = Some(c.ka_part1(key.to_u128(), 0)),
        KaPart2 => {
            let mid = r.ka_mid.ok_or_else(|| sim_err("`ka.part2` before `ka.part1`".into()))?;
            let vars = KeyVars {
                kl: key.to_u128(),
                kr: 0,
                ka: c.ka_part2(mid),
            };
            r.subkeys = Some(CamelliaSubkeys::from_vars(&vars));
        }
        PreWhiten => {
            let k = sk(r)?;
            (r.l, r.r) = (*state ^ Block128::from_lanes(k.kw[0], k.kw[1])).lanes();
        }
        Rounds(a, b) => {
            let k = sk(r)?;
            (r.l, r.r) = c.rounds(r.l, r.r, &k.k[a as usize - 1..b as usize]);
        }
        Fl(n) => {
            let k = sk(r)?;
            let n = n as usize;
            r.l = fl(r.l, k.kl[2 * n - 2]);
            r.r = fl_inv(r.r, k.kl[2 * n - 1]);
        }
        PostWhiten => {
            let k = sk(r)?;
            *state = Block128::from_lanes(r.r, r.l) ^ Block128::from_lanes(k.kw[2], k.kw[3]);
        }
        other => return Err(Error::Internal(format!("`{other}` reached the CAMELLIA datapath"))),
    }
    Ok(())
}

/// Result of driving a device through the handshake.
#[derive(Clone, PartialEq, Debug)]
pub struct SimRun {
    pub variant: String,
    pub setup_cycles: u64,
    /// Ticks with WORK high, per block.
    pub work_cycles_per_block: u64,
    pub total_cycles: u64,
    pub ciphertexts: Vec<Block128>,
}

/// An encryption unit: handshake state machine driving a datapath.
pub struct Device<'a> {
    pub state: DeviceState,
    pub datapath: Datapath<'a>,
}

impl<'a> Device<'a> {
    pub fn new(profile: &'a ArchProfile, hooks: CipherHooks<'a>, key: &[u8]) -> Result<Self, Error> {
        Ok(Device {
            state: DeviceState::new(profile.setup_cycles(), profile.work_cycles_per_block()),
            datapath: Datapath::new(profile, hooks, key)?,
        })
    }

    /// One clock tick. A finished block is returned on the tick WORK drops.
    pub fn tick(&mut self, inputs: Inputs) -> Result<Option<Block128>, Error> {
        let (next, act) = self.state.step(inputs);
        let profile = self.datapath.profile;
        match act {
            Activity::Idle => {}
            Activity::Aborted => self.datapath.reload_setup(),
            Activity::SetupCycle(i) => self.datapath.exec_cycle(&profile.setup[i].ops)?,
            Activity::WorkCycle(i) => self.datapath.exec_cycle(&profile.work[i].ops)?,
        }
        if self.state.phase == Phase::Setup && next.phase == Phase::Ready && self.datapath.snapshot.is_none() {
            self.datapath.finish_setup();
        }
        let done = next.blocks_done > self.state.blocks_done;
        self.state = next;
        Ok(done.then(|| self.datapath.output()))
    }
}

/// Runs setup, then encrypts `blocks` back to back, one START edge per block.
pub fn simulate(
    profile: &ArchProfile,
    hooks: CipherHooks<'_>,
    key: &[u8],
    blocks: &[Block128],
) -> Result<SimRun, Error> {
    let mut dev = Device::new(profile, hooks, key)?;
    let idle = Inputs::default();
    while !dev.state.ready {
        dev.tick(idle)?;
    }
    let setup_cycles = dev.state.cycle_counter;
    let mut ciphertexts = Vec::with_capacity(blocks.len());
    let mut work_ticks = 0u64;
    for &p in blocks {
        dev.datapath.set_input(p);
        let mut inputs = Inputs {
            reset_edge: false,
            start_edge: true,
        };
        loop {
            let out = dev.tick(inputs)?;
            inputs = idle;
            if dev.state.work {
                work_ticks += 1;
            }
            if let Some(c) = out {
                ciphertexts.push(c);
                break;
            }
            if !dev.state.work {
                return Err(Error::Internal("device dropped WORK without finishing the block".into()));
            }
        }
    }
    let n = blocks.len().max(1) as u64;
    Ok(SimRun {
        variant: profile.id.clone(),
        setup_cycles,
        work_cycles_per_block: if blocks.is_empty() {
            profile.work_cycles_per_block() as u64
        } else {
            work_ticks / n
        },
        total_cycles: dev.state.cycle_counter,
        ciphertexts,
    })
}
