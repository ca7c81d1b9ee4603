//! The constants file: every table the two ciphers need, in a small
//! self-describing text format (see `docs/formats.md`).
//!
//! ```text
//! hcam-constants 1
//! [hc3.sbox]
//! 07 18 2f ...
//! checksum sha256 <64 hex digits>
//! ```
//!
//! Loading validates both integrity (checksum) and the algebraic properties
//! the ciphers depend on; a file that fails either is refused.

use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::bitmatrix::BitMatrix;
use crate::error::ConstantsError;

pub const FORMAT_VERSION: u32 = 1;
const HEADER: &str = "hcam-constants";

static BUILTIN_TEXT: &str = include_str!("../data/constants.txt");

/// Tables for HIEROCRYPT-3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hc3Constants {
    pub sbox: [u8; 256],
    pub sbox_inv: [u8; 256],
    /// `G0(0)` .. `G0(5)`.
    pub g0: [u64; 6],
    /// Key padding words `H3`, `H2`, in that order.
    pub pad: [u64; 2],
    /// P(32) over four 32-bit words.
    pub p32: BitMatrix,
    pub p32_inv: BitMatrix,
    /// P(16) over four 16-bit words, used inside F_sigma.
    pub p16: BitMatrix,
    /// M_5E over eight bytes.
    pub m5e: BitMatrix,
    /// M_B3 over eight bytes; must invert M_5E.
    pub mb3: BitMatrix,
    /// MDS_H over sixteen bytes.
    pub mds_h: BitMatrix,
}

/// Tables for CAMELLIA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CamelliaConstants {
    /// `s1` .. `s4`.
    pub sbox: [[u8; 256]; 4],
    /// The P-function over eight bytes.
    pub p: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constants {
    pub hc3: Hc3Constants,
    pub camellia: CamelliaConstants,
    pub checksum: String,
}

struct Section {
    name: &'static str,
    len: usize,
}

const SECTIONS: &[Section] = &[
    Section { name: "hc3.sbox", len: 256 },
    Section { name: "hc3.g0", len: 48 },
    Section { name: "hc3.pad", len: 16 },
    Section { name: "hc3.p32", len: 4 },
    Section { name: "hc3.p32_inv", len: 4 },
    Section { name: "hc3.p16", len: 4 },
    Section { name: "hc3.m5e", len: 8 },
    Section { name: "hc3.mb3", len: 8 },
    Section { name: "hc3.mds_h", len: 32 },
    Section { name: "camellia.s1", len: 256 },
    Section { name: "camellia.s2", len: 256 },
    Section { name: "camellia.s3", len: 256 },
    Section { name: "camellia.s4", len: 256 },
    Section { name: "camellia.p", len: 8 },
];

/// Raw section payloads in file order.
#[derive(Clone, Debug, Default)]
pub struct RawSections {
    entries: Vec<(String, Vec<u8>)>,
}

impl RawSections {
    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn set(&mut self, name: &str, payload: Vec<u8>) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some(e) => e.1 = payload,
            None => self.entries.push((name.to_string(), payload)),
        }
    }

    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for (name, payload) in &self.entries {
            h.update(name.as_bytes());
            h.update([0u8]);
            h.update(payload);
        }
        hex::encode(h.finalize())
    }

    /// Canonical file text, checksum included.
    pub fn render(&self) -> String {
        let mut out = format!("{HEADER} {FORMAT_VERSION}\n");
        for (name, payload) in &self.entries {
            out.push_str(&format!("\n[{name}]\n"));
            for chunk in payload.chunks(16) {
                let line: Vec<String> = chunk.iter().map(|b| format!("{b:02x}")).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out.push_str(&format!("\nchecksum sha256 {}\n", self.checksum()));
        out
    }

    /// Parses the text without checking the checksum or table contents.
    pub fn parse(text: &str) -> Result<(RawSections, Option<String>), ConstantsError> {
        let mut raw = RawSections::default();
        let mut current: Option<(String, String)> = None;
        let mut seen_header = false;
        let mut checksum = None;

        let flush = |raw: &mut RawSections, cur: Option<(String, String)>, line: usize| {
            if let Some((name, hexbuf)) = cur {
                let bytes = hex::decode(&hexbuf).map_err(|e| ConstantsError::Syntax {
                    line,
                    msg: format!("section [{name}]: {e}"),
                })?;
                raw.entries.push((name, bytes));
            }
            Ok::<_, ConstantsError>(())
        };

        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if !seen_header {
                let mut parts = line.split_whitespace();
                if parts.next() != Some(HEADER) {
                    return Err(ConstantsError::MissingHeader);
                }
                let version: u32 = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or(ConstantsError::Syntax { line: lineno, msg: "bad version".into() })?;
                if version != FORMAT_VERSION {
                    return Err(ConstantsError::Version(version));
                }
                seen_header = true;
                continue;
            }
            if checksum.is_some() {
                return Err(ConstantsError::Syntax {
                    line: lineno,
                    msg: "content after checksum line".into(),
                });
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                flush(&mut raw, current.take(), lineno)?;
                let name = name.trim();
                if raw.get(name).is_some() {
                    return Err(ConstantsError::Syntax {
                        line: lineno,
                        msg: format!("duplicate section [{name}]"),
                    });
                }
                current = Some((name.to_string(), String::new()));
            } else if let Some(rest) = line.strip_prefix("checksum") {
                flush(&mut raw, current.take(), lineno)?;
                let mut parts = rest.split_whitespace();
                match (parts.next(), parts.next(), parts.next()) {
                    (Some("sha256"), Some(digest), None) if digest.len() == 64 => {
                        checksum = Some(digest.to_ascii_lowercase());
                    }
                    _ => {
                        return Err(ConstantsError::Syntax {
                            line: lineno,
                            msg: "expected `checksum sha256 <64 hex digits>`".into(),
                        })
                    }
                }
            } else if let Some((_, buf)) = current.as_mut() {
                buf.extend(line.chars().filter(|c| !c.is_whitespace()));
            } else {
                return Err(ConstantsError::Syntax {
                    line: lineno,
                    msg: "payload outside of a section".into(),
                });
            }
        }
        if !seen_header {
            return Err(ConstantsError::MissingHeader);
        }
        flush(&mut raw, current.take(), text.lines().count())?;
        Ok((raw, checksum))
    }
}

fn section<'a>(raw: &'a RawSections, s: &Section) -> Result<&'a [u8], ConstantsError> {
    let payload = raw.get(s.name).ok_or(ConstantsError::MissingSection(s.name))?;
    if payload.len() != s.len {
        return Err(ConstantsError::Length {
            name: s.name.to_string(),
            got: payload.len(),
            expected: s.len,
        });
    }
    Ok(payload)
}

fn layout(name: &str) -> &'static Section {
    SECTIONS.iter().find(|s| s.name == name).unwrap()
}

fn table(raw: &RawSections, name: &'static str) -> Result<[u8; 256], ConstantsError> {
    Ok(section(raw, layout(name))?.try_into().unwrap())
}

fn invert_permutation(name: &'static str, t: &[u8; 256]) -> Result<[u8; 256], ConstantsError> {
    let mut inv = [0u8; 256];
    let mut seen = [false; 256];
    for (x, &y) in t.iter().enumerate() {
        if seen[y as usize] {
            return Err(ConstantsError::Invalid {
                name,
                reason: format!("value {y:#04x} appears twice; not a permutation"),
            });
        }
        seen[y as usize] = true;
        inv[y as usize] = x as u8;
    }
    Ok(inv)
}

fn matrix_u8(raw: &RawSections, name: &'static str, n: usize) -> Result<BitMatrix, ConstantsError> {
    let rows = section(raw, layout(name))?.iter().map(|&b| b as u32).collect();
    BitMatrix::new(n, rows).ok_or(ConstantsError::Invalid {
        name,
        reason: format!("rows do not fit a {n}x{n} matrix"),
    })
}

fn invertible(name: &'static str, m: &BitMatrix) -> Result<(), ConstantsError> {
    if m.inverse().is_none() {
        return Err(ConstantsError::Invalid {
            name,
            reason: "linear layer is singular over GF(2)".into(),
        });
    }
    Ok(())
}

fn words64(bytes: &[u8]) -> Vec<u64> {
    bytes.chunks(8).map(|c| u64::from_be_bytes(c.try_into().unwrap())).collect()
}

impl Constants {
    /// Parses and validates constants text.
    pub fn parse(text: &str) -> Result<Constants, ConstantsError> {
        let (raw, stated) = RawSections::parse(text)?;
        let stated = stated.ok_or(ConstantsError::MissingChecksum)?;
        let computed = raw.checksum();
        if stated != computed {
            return Err(ConstantsError::Checksum { stated, computed });
        }
        Self::from_sections(&raw, computed)
    }

    fn from_sections(raw: &RawSections, checksum: String) -> Result<Constants, ConstantsError> {
        let sbox = table(raw, "hc3.sbox")?;
        let sbox_inv = invert_permutation("hc3.sbox", &sbox)?;
        let g0: [u64; 6] = words64(section(raw, layout("hc3.g0"))?).try_into().unwrap();
        let pad: [u64; 2] = words64(section(raw, layout("hc3.pad"))?).try_into().unwrap();

        let p32 = matrix_u8(raw, "hc3.p32", 4)?;
        let p32_inv = matrix_u8(raw, "hc3.p32_inv", 4)?;
        if !p32_inv.mul(&p32).is_identity() {
            return Err(ConstantsError::Invalid {
                name: "hc3.p32_inv",
                reason: "P(32)^-1 * P(32) is not the identity".into(),
            });
        }
        let p16 = matrix_u8(raw, "hc3.p16", 4)?;
        invertible("hc3.p16", &p16)?;
        let m5e = matrix_u8(raw, "hc3.m5e", 8)?;
        let mb3 = matrix_u8(raw, "hc3.mb3", 8)?;
        if !mb3.mul(&m5e).is_identity() {
            return Err(ConstantsError::Invalid {
                name: "hc3.mb3",
                reason: "M_B3 * M_5E is not the identity".into(),
            });
        }
        let mds_rows = section(raw, layout("hc3.mds_h"))?
            .chunks(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as u32)
            .collect();
        let mds_h = BitMatrix::new(16, mds_rows).unwrap();
        invertible("hc3.mds_h", &mds_h)?;

        let names = ["camellia.s1", "camellia.s2", "camellia.s3", "camellia.s4"];
        let mut cam = [[0u8; 256]; 4];
        for (dst, name) in cam.iter_mut().zip(names) {
            *dst = table(raw, name)?;
            invert_permutation(name, dst)?;
        }
        // s2 = s1 <<< 1, s3 = s1 >>> 1, s4(x) = s1(x <<< 1)
        for x in 0..=255u8 {
            let s1 = cam[0][x as usize];
            let derived = [s1.rotate_left(1), s1.rotate_right(1), cam[0][x.rotate_left(1) as usize]];
            for (k, d) in derived.into_iter().enumerate() {
                if cam[k + 1][x as usize] != d {
                    return Err(ConstantsError::Invalid {
                        name: names[k + 1],
                        reason: format!("entry {x:#04x} is inconsistent with camellia.s1"),
                    });
                }
            }
        }
        let cam_p = matrix_u8(raw, "camellia.p", 8)?;
        invertible("camellia.p", &cam_p)?;

        Ok(Constants {
            hc3: Hc3Constants {
                sbox,
                sbox_inv,
                g0,
                pad,
                p32,
                p32_inv,
                p16,
                m5e,
                mb3,
                mds_h,
            },
            camellia: CamelliaConstants { sbox: cam, p: cam_p },
            checksum,
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Constants, ConstantsError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ConstantsError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// The constants file compiled into the crate.
    pub fn builtin() -> &'static Constants {
        static BUILTIN: OnceLock<Constants> = OnceLock::new();
        BUILTIN.get_or_init(|| Constants::parse(BUILTIN_TEXT).expect("built-in constants are valid"))
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN_TEXT
    }

    /// Loads the file named by `HCAM_CONSTANTS` if set, else the built-in set.
    pub fn from_env_or_builtin() -> Result<Constants, ConstantsError> {
        match std::env::var_os(crate::CONSTANTS_ENV) {
            Some(path) if !path.is_empty() => Self::from_path(path),
            _ => Ok(Self::builtin().clone()),
        }
    }

    /// Splits back into raw sections, for re-rendering edited tables.
    pub fn to_sections(&self) -> RawSections {
        let mut raw = RawSections::default();
        let h = &self.hc3;
        let rows8 = |m: &BitMatrix| m.rows().iter().map(|&r| r as u8).collect::<Vec<u8>>();
        raw.set("hc3.sbox", h.sbox.to_vec());
        raw.set("hc3.g0", h.g0.iter().flat_map(|g| g.to_be_bytes()).collect());
        raw.set("hc3.pad", h.pad.iter().flat_map(|g| g.to_be_bytes()).collect());
        raw.set("hc3.p32", rows8(&h.p32));
        raw.set("hc3.p32_inv", rows8(&h.p32_inv));
        raw.set("hc3.p16", rows8(&h.p16));
        raw.set("hc3.m5e", rows8(&h.m5e));
        raw.set("hc3.mb3", rows8(&h.mb3));
        raw.set(
            "hc3.mds_h",
            h.mds_h.rows().iter().flat_map(|&r| (r as u16).to_be_bytes()).collect(),
        );
        for (k, s) in self.camellia.sbox.iter().enumerate() {
            raw.set(&format!("camellia.s{}", k + 1), s.to_vec());
        }
        raw.set("camellia.p", rows8(&self.camellia.p));
        raw
    }
}
