//! HIEROCRYPT-3 and CAMELLIA (128-bit block, 128-bit key) over a shared
//! GF(2^8) core, plus a cycle-level model of five iterative hardware
//! datapaths for the two ciphers.
//!
//! The crate is split into:
//!
//! - [`gf256`]: field arithmetic, the constant-multiplier XOR networks and
//!   the lower-level MDS matrix of HIEROCRYPT-3.
//! - [`constants`]: the validated constants file that carries every table
//!   the ciphers need.
//! - [`hc3`]: HIEROCRYPT-3 round functions, key schedule (three setup modes)
//!   and the merged sbox/MDS tables.
//! - [`camellia`](crate::camellia): CAMELLIA-128.
//! - [`archsim`]: device handshake, per-cycle datapath execution and the
//!   throughput model/report.

pub mod archsim;
pub mod bitmatrix;
pub mod block;
pub mod camellia;
pub mod constants;
pub mod error;
pub mod gf256;
pub mod hc3;
pub mod kat;

pub use block::Block128;
pub use camellia::{Camellia, CamelliaSubkeys};
pub use constants::{CamelliaConstants, Constants, Hc3Constants};
pub use error::{ConstantsError, Error};
pub use hc3::{Hc3, Hc3KeySchedule, IntermediateKey, KeySetupMode, RoundKey256};

/// Environment variable that overrides the built-in constants file.
pub const CONSTANTS_ENV: &str = "HCAM_CONSTANTS";

/// The two ciphers the crate implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CipherId {
    Hc3,
    Camellia,
}

impl CipherId {
    pub fn name(self) -> &'static str {
        match self {
            CipherId::Hc3 => "hc3",
            CipherId::Camellia => "camellia",
        }
    }
}

impl std::fmt::Display for CipherId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CipherId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "hc3" | "hierocrypt-3" | "hierocrypt3" => Ok(CipherId::Hc3),
            "camellia" => Ok(CipherId::Camellia),
            other => Err(Error::Usage(format!("unknown cipher `{other}` (expected hc3 or camellia)"))),
        }
    }
}
