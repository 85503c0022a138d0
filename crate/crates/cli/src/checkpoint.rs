//! Binary checkpoints of Sade level databases.
//!
//! Layout, all integers big-endian:
//!
//! ```text
//! "SADE"  version:u16  r:u16 s:u16 n:u16  level:u16  records:u64
//! per record:  sade_number:u64  weight:u16  len:u32  multiplier[len]
//! ```
//!
//! Representatives are not stored; they are rebuilt from the Sade number
//! on load.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use plr_core::sade::{record_from_number, SadeRecord};
use plr_core::{BigCount, Shape};

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 4] = b"SADE";
pub const VERSION: u16 = 1;

/// A level database read back from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub shape: Shape,
    pub level: usize,
    pub records: Vec<SadeRecord>,
}

fn u16_of(x: usize, what: &str) -> CliResult<[u8; 2]> {
    u16::try_from(x)
        .map(u16::to_be_bytes)
        .map_err(|_| CliError::Format(format!("{what} {x} does not fit a checkpoint")))
}

pub fn encode(shape: Shape, level: usize, records: &[SadeRecord]) -> CliResult<Vec<u8>> {
    let mut out = Vec::with_capacity(20 + records.len() * 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_be_bytes());
    for d in shape.dims() {
        out.extend_from_slice(&u16_of(d, "dimension")?);
    }
    out.extend_from_slice(&u16_of(level, "level")?);
    out.extend_from_slice(&(records.len() as u64).to_be_bytes());
    for rec in records {
        out.extend_from_slice(&rec.sade_number.to_be_bytes());
        out.extend_from_slice(&u16_of(rec.weight, "weight")?);
        let bytes = rec.multiplier.to_bytes_be();
        let len = u32::try_from(bytes.len()).map_err(|_| CliError::Format("multiplier too large".into()))?;
        out.extend_from_slice(&len.to_be_bytes());
        out.extend_from_slice(&bytes);
    }
    Ok(out)
}

struct Cursor<'a> {
    buf: &'a [u8],
    at: usize,
}

impl Cursor<'_> {
    fn take(&mut self, k: usize) -> CliResult<&[u8]> {
        let end = self.at.checked_add(k).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| CliError::Format("truncated checkpoint".into()))?;
        let s = &self.buf[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u16(&mut self) -> CliResult<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> CliResult<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> CliResult<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn decode(buf: &[u8]) -> CliResult<Checkpoint> {
    let mut c = Cursor { buf, at: 0 };
    if c.take(4)? != MAGIC {
        return Err(CliError::Format("not a Sade checkpoint".into()));
    }
    let version = c.u16()?;
    if version != VERSION {
        return Err(CliError::Format(format!("unsupported checkpoint version {version}")));
    }
    let r = c.u16()? as usize;
    let s = c.u16()? as usize;
    let n = c.u16()? as usize;
    let shape = Shape::new(r, s, n)?;
    let level = c.u16()? as usize;
    if level > r {
        return Err(CliError::Format(format!("level {level} beyond {r} rows")));
    }
    let count = c.u64()?;
    let mut records = Vec::new();
    for _ in 0..count {
        let number = c.u64()?;
        let weight = c.u16()? as usize;
        let len = c.u32()? as usize;
        let multiplier = BigCount::from_bytes_be(c.take(len)?);
        let rec = record_from_number(shape, level, number, multiplier)?;
        if rec.weight != weight {
            return Err(CliError::Format(format!("record {number}: stored weight {weight}, rebuilt {}", rec.weight)));
        }
        records.push(rec);
    }
    if c.at != buf.len() {
        return Err(CliError::Format("trailing bytes after checkpoint records".into()));
    }
    Ok(Checkpoint { shape, level, records })
}

pub fn file_name(shape: Shape, level: usize) -> String {
    let [r, s, n] = shape.dims();
    format!("sade-{r}-{s}-{n}-L{level}.bin")
}

pub fn write(dir: &Path, shape: Shape, level: usize, records: &[SadeRecord]) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(file_name(shape, level));
    let tmp = path.with_extension("tmp");
    let bytes = encode(shape, level, records)?;
    {
        let f = File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
        let mut w = BufWriter::new(f);
        w.write_all(&bytes).map_err(|e| CliError::io(&tmp, e))?;
        w.flush().map_err(|e| CliError::io(&tmp, e))?;
    }
    fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn read(path: &Path) -> CliResult<Checkpoint> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut buf = Vec::new();
    BufReader::new(f).read_to_end(&mut buf).map_err(|e| CliError::io(path, e))?;
    decode(&buf)
}

/// The deepest checkpoint of `shape` in `dir` not beyond `max_level`.
pub fn latest(dir: &Path, shape: Shape, max_level: usize) -> CliResult<Option<Checkpoint>> {
    for level in (1..=max_level).rev() {
        let path = dir.join(file_name(shape, level));
        if path.exists() {
            let cp = read(&path)?;
            if cp.shape != shape || cp.level != level {
                return Err(CliError::Format(format!("{} holds another level", path.display())));
            }
            return Ok(Some(cp));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use plr_core::sade::{extend_chunk, initial_level};

    #[test]
    fn encode_decode_round_trip() {
        let shape = Shape::new(3, 3, 4).unwrap();
        let mut level = initial_level(shape).unwrap();
        for i in 0..2 {
            level = extend_chunk(shape, i, &level).unwrap();
            let back = decode(&encode(shape, i + 1, &level).unwrap()).unwrap();
            assert_eq!(back.shape, shape);
            assert_eq!(back.level, i + 1);
            assert_eq!(back.records.len(), level.len());
            for (a, b) in back.records.iter().zip(&level) {
                assert_eq!((a.sade_number, a.weight, &a.multiplier), (b.sade_number, b.weight, &b.multiplier));
            }
        }
    }

    #[test]
    fn rejects_damage() {
        let shape = Shape::new(2, 2, 2).unwrap();
        let level = extend_chunk(shape, 0, &initial_level(shape).unwrap()).unwrap();
        let bytes = encode(shape, 1, &level).unwrap();
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(decode(&extra).is_err());
    }
}
