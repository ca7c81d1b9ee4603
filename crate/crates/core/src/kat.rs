//! Known-answer vector files: `KEY=`, `PT=`, `CT=` lines (any order within a
//! record, optional `NAME=`), `#` comments, blank lines ignored.

use std::fmt;

use crate::block::Block128;
use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KatRecord {
    /// 1-based position in the file.
    pub index: usize,
    /// Line of the record's first field.
    pub line: usize,
    pub name: Option<String>,
    pub key: Block128,
    pub pt: Block128,
    pub ct: Block128,
}

impl KatRecord {
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => format!("record {} `{n}` (line {})", self.index, self.line),
            None => format!("record {} (line {})", self.index, self.line),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Encrypt,
    Decrypt,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KatMismatch {
    pub record: KatRecord,
    pub direction: Direction,
    pub expected: Block128,
    pub got: Block128,
}

impl fmt::Display for KatMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (what, input) = match self.direction {
            Direction::Encrypt => ("encrypt", self.record.pt),
            Direction::Decrypt => ("decrypt", self.record.ct),
        };
        let diff: String = self
            .expected
            .to_hex()
            .chars()
            .zip(self.got.to_hex().chars())
            .map(|(a, b)| if a == b { '.' } else { '^' })
            .collect();
        write!(
            f,
            "{} {what} mismatch\n  key      {}\n  input    {input}\n  expected {}\n  got      {}\n  diff     {diff}",
            self.record.label(),
            self.record.key,
            self.expected,
            self.got
        )
    }
}

#[derive(Default)]
struct Partial {
    line: usize,
    name: Option<String>,
    key: Option<Block128>,
    pt: Option<Block128>,
    ct: Option<Block128>,
}

pub fn parse_kat(text: &str) -> Result<Vec<KatRecord>, Error> {
    let mut out = Vec::new();
    let mut cur = Partial::default();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let err = |m: String| Error::Usage(format!("vectors line {n}: {m}"));
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (field, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected FIELD=value, got `{line}`")))?;
        let (field, value) = (field.trim().to_ascii_uppercase(), value.trim());
        if cur.line == 0 {
            cur.line = n;
        }
        let hex = |slot: &Option<Block128>| -> Result<Block128, Error> {
            if slot.is_some() {
                return Err(err(format!("{field} repeated within one record")));
            }
            Block128::from_hex(value).map_err(|e| err(format!("{field}: {e}")))
        };
        match field.as_str() {
            "NAME" => {
                if cur.name.is_some() {
                    return Err(err("NAME repeated within one record".into()));
                }
                cur.name = Some(value.to_string());
            }
            "KEY" => cur.key = Some(hex(&cur.key)?),
            "PT" => cur.pt = Some(hex(&cur.pt)?),
            "CT" => cur.ct = Some(hex(&cur.ct)?),
            other => return Err(err(format!("unknown field `{other}`"))),
        }
        if let (Some(key), Some(pt), Some(ct)) = (cur.key, cur.pt, cur.ct) {
            out.push(KatRecord {
                index: out.len() + 1,
                line: cur.line,
                name: cur.name.take(),
                key,
                pt,
                ct,
            });
            cur = Partial::default();
        }
    }
    if cur.line != 0 {
        return Err(Error::Usage(format!("vectors line {}: incomplete record at end of file", cur.line)));
    }
    Ok(out)
}

pub fn render_kat(records: &[KatRecord]) -> String {
    let mut s = String::new();
    for r in records {
        if let Some(n) = &r.name {
            s.push_str(&format!("NAME={n}\n"));
        }
        s.push_str(&format!("KEY={}\nPT={}\nCT={}\n\n", r.key, r.pt, r.ct));
    }
    s
}

/// Checks both directions of every record.
pub fn verify<E, D>(records: &[KatRecord], mut encrypt: E, mut decrypt: D) -> Result<Vec<KatMismatch>, Error>
where
    E: FnMut(&Block128, Block128) -> Result<Block128, Error>,
    D: FnMut(&Block128, Block128) -> Result<Block128, Error>,
{
    let mut bad = Vec::new();
    for r in records {
        let c = encrypt(&r.key, r.pt)?;
        if c != r.ct {
            bad.push(KatMismatch {
                record: r.clone(),
                direction: Direction::Encrypt,
                expected: r.ct,
                got: c,
            });
        }
        let p = decrypt(&r.key, r.ct)?;
        if p != r.pt {
            bad.push(KatMismatch {
                record: r.clone(),
                direction: Direction::Decrypt,
                expected: r.pt,
                got: p,
            });
        }
    }
    Ok(bad)
}
