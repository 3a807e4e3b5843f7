//! Binary cache of computed sequence prefixes.
//!
//! Layout (all integers big-endian):
//!
//! ```text
//! magic    b"FTSQ"            4 bytes
//! version  u8 = 1
//! sections u8 = 4             S, B, A11, D in that order
//! per section:
//!   name_len u8, name bytes (ASCII)
//!   count    u64
//!   per value: sign u8 (0 = non-negative, 1 = negative),
//!              len u32, magnitude bytes (big-endian, empty for zero)
//! sha256   32 bytes over everything above
//! ```
//!
//! Loading checks the digest, then recomputes the last entry of every section
//! one step from its predecessors before accepting the table.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::{BigInt, Sign};
use num_traits::One;
use sha2::{Digest, Sha256};

use super::sequences::{binomial, exact_div, SeqName, Sequences};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"FTSQ";
const VERSION: u8 = 1;
const NAMES: [&str; 4] = ["S", "B", "A11", "D"];

pub fn encode(seqs: &Sequences) -> Vec<u8> {
    let top = seqs.top();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(NAMES.len() as u8);
    let sections = [
        (SeqName::S, top + 2),
        (SeqName::B, top + 2),
        (SeqName::A11, top + 1),
        (SeqName::D, top + 1),
    ];
    for (name, count) in sections {
        let name_str = name.to_string();
        let values = &seqs.seq(name).expect("stored sequence").values()[..count];
        out.push(name_str.len() as u8);
        out.extend_from_slice(name_str.as_bytes());
        out.extend_from_slice(&(count as u64).to_be_bytes());
        for v in values {
            let (sign, mag) = v.to_bytes_be();
            out.push(u8::from(sign == Sign::Minus));
            let mag: &[u8] = if sign == Sign::NoSign { &[] } else { &mag };
            out.extend_from_slice(&(mag.len() as u32).to_be_bytes());
            out.extend_from_slice(mag);
        }
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Cache("truncated file".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Sequences> {
    if bytes.len() < MAGIC.len() + 2 + 32 {
        return Err(Error::Cache("file too short".into()));
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let mut r = Reader { buf: body, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    if r.u8()? != VERSION {
        return Err(Error::Cache("unsupported version".into()));
    }
    if usize::from(r.u8()?) != NAMES.len() {
        return Err(Error::Cache("unexpected section count".into()));
    }
    let mut sections: Vec<Vec<BigInt>> = Vec::with_capacity(NAMES.len());
    for expected in NAMES {
        let len = usize::from(r.u8()?);
        let name = r.take(len)?;
        if name != expected.as_bytes() {
            return Err(Error::Cache(format!("expected section {expected}")));
        }
        let count = r.u64()? as usize;
        let mut values = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let sign = match r.u8()? {
                0 => Sign::Plus,
                1 => Sign::Minus,
                other => return Err(Error::Cache(format!("bad sign byte {other}"))),
            };
            let len = r.u32()? as usize;
            values.push(BigInt::from_bytes_be(sign, r.take(len)?));
        }
        sections.push(values);
    }
    if r.pos != body.len() {
        return Err(Error::Cache("trailing bytes".into()));
    }
    let d = sections.pop().expect("4 sections");
    let a11 = sections.pop().expect("4 sections");
    let b = sections.pop().expect("4 sections");
    let s = sections.pop().expect("4 sections");
    if a11.is_empty() || d.len() != a11.len() || s.len() != a11.len() + 1 || b.len() != s.len() {
        return Err(Error::Cache("inconsistent section lengths".into()));
    }
    verify_tail(&s, &b, &a11, &d)?;
    Ok(Sequences::from_parts(s, b, a11, d))
}

/// Recomputes the last stored value of each section from scratch or from one
/// recurrence step.
fn verify_tail(s: &[BigInt], b: &[BigInt], a11: &[BigInt], d: &[BigInt]) -> Result<()> {
    let m = b.len() - 1;
    let binom = binomial(3 * m, m);
    if b[m] != exact_div(&binom, &BigInt::from(2 * m + 1), "B(n)") {
        return Err(Error::Cache(format!(
            "B({m}) does not match its closed form"
        )));
    }
    let s_expected = match m {
        0 => BigInt::from(0),
        1 => BigInt::from(5),
        _ => exact_div(&(binom * 2), &BigInt::from(3 * (3 * m - 1)), "S(n)"),
    };
    if s[m] != s_expected {
        return Err(Error::Cache(format!(
            "S({m}) does not match its closed form"
        )));
    }
    let top = a11.len() - 1;
    if top == 0 {
        if a11[0] != BigInt::one() || d[0] != BigInt::from(-3) {
            return Err(Error::Cache("bad initial values".into()));
        }
        return Ok(());
    }
    if a11[top] != &a11[top - 1] * 8 + &d[top - 1] {
        return Err(Error::Cache(format!("A11({top}) fails its recurrence")));
    }
    if d[top] != &d[top - 1] * 8 + &b[top + 1] + &s[top + 1] * 4 {
        return Err(Error::Cache(format!("D({top}) fails its recurrence")));
    }
    Ok(())
}

pub fn save(seqs: &Sequences, path: &Path) -> Result<()> {
    let bytes = encode(seqs);
    let mut f = fs::File::create(path).map_err(|e| Error::Cache(e.to_string()))?;
    f.write_all(&bytes).map_err(|e| Error::Cache(e.to_string()))
}

pub fn load(path: &Path) -> Result<Sequences> {
    let bytes = fs::read(path).map_err(|e| Error::Cache(e.to_string()))?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_values() {
        let seqs = Sequences::with_len(40);
        let back = decode(&encode(&seqs)).unwrap();
        assert_eq!(back.top(), 40);
        for n in 0..=40 {
            assert_eq!(back.a11(n), seqs.a11(n));
            assert_eq!(back.d(n), seqs.d(n));
            assert_eq!(back.s(n + 1), seqs.s(n + 1));
        }
    }

    #[test]
    fn loaded_table_keeps_extending() {
        let mut back = decode(&encode(&Sequences::with_len(10))).unwrap();
        back.ensure(30);
        let fresh = Sequences::with_len(30);
        assert_eq!(back.a11(30), fresh.a11(30));
        assert_eq!(back.s(31), fresh.s(31));
    }

    #[test]
    fn corruption_is_detected() {
        let mut bytes = encode(&Sequences::with_len(5));
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        assert!(matches!(decode(&bytes), Err(Error::Cache(m)) if m.contains("checksum")));
    }

    #[test]
    fn consistent_checksum_but_wrong_value_is_rejected() {
        let seqs = Sequences::with_len(6);
        let mut a11: Vec<BigInt> = (0..=6).map(|n| seqs.a11(n).clone()).collect();
        a11[6] += 1;
        let s: Vec<BigInt> = (0..=7).map(|n| seqs.s(n).clone()).collect();
        let b: Vec<BigInt> = (0..=7).map(|n| seqs.b(n).clone()).collect();
        let d: Vec<BigInt> = (0..=6).map(|n| seqs.d(n).clone()).collect();
        let forged = Sequences::from_parts(s, b, a11, d);
        assert!(matches!(decode(&encode(&forged)), Err(Error::Cache(m)) if m.contains("A11(6)")));
    }

    #[test]
    fn save_and_load_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.bin");
        save(&Sequences::with_len(12), &path).unwrap();
        assert_eq!(
            load(&path).unwrap().a11(12),
            Sequences::with_len(12).a11(12)
        );
    }
}
