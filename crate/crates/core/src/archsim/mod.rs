//! Cycle-level model of the iterative encryption units: per-variant setup
//! and work schedules, the READY/START/WORK handshake, and the throughput
//! report.

mod datapath;
mod device;
mod profile;
mod report;

pub use datapath::{
    setup_trace, simulate, work_trace, CipherHooks, CycleTrace, Datapath, Device, SimRun, TraceCycle, TracePhase,
};
pub use device::{Activity, DeviceState, Inputs, Phase};
pub use profile::{builtin_profiles, builtin_profiles_text, parse_profiles, profile, ArchProfile, CycleSpec, MicroOp};
pub use report::{
    evaluate, relative_deviation, report, throughput_model, ReferenceRow, ReportOptions, ReportRow, SimReport,
    VariantResult, DISCREPANCY_THRESHOLD, REFERENCE_ROWS,
};
