//! Block tables on disk, so large tables are generated once.
//!
//! The first line records the generation limits, then one block per line
//! in the format of [`plr_core::chromatic::block_to_line`]:
//!
//! ```text
//! # plr block table ones=16 rows=4 cols=4
//! 1 1 1 1 0,1
//! ```

use std::fs;
use std::path::Path;

use plr_core::chromatic::{block_from_line, block_to_line, generate_blocks_within, Block};

use crate::error::{CliError, CliResult};

const HEADER: &str = "# plr block table";

/// Limits a table was generated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub ones: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Limits {
    pub fn new(ones: usize, rows: usize, cols: usize) -> Self {
        Limits { ones, rows: rows.min(cols), cols: rows.max(cols) }
    }

    pub fn covers(&self, other: &Limits) -> bool {
        self.ones >= other.ones && self.rows >= other.rows && self.cols >= other.cols
    }
}

pub fn render(limits: Limits, blocks: &[Block]) -> String {
    let mut out = format!("{HEADER} ones={} rows={} cols={}\n", limits.ones, limits.rows, limits.cols);
    for b in blocks {
        out.push_str(&block_to_line(b));
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> CliResult<(Limits, Vec<Block>)> {
    let mut lines = text.lines();
    let head = lines.next().unwrap_or_default();
    let rest = head.strip_prefix(HEADER).ok_or_else(|| CliError::Format("missing block table header".into()))?;
    let mut vals = [None; 3];
    for field in rest.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| CliError::Format(format!("bad header field {field:?}")))?;
        let slot = match k {
            "ones" => 0,
            "rows" => 1,
            "cols" => 2,
            _ => return Err(CliError::Format(format!("unknown header field {k:?}"))),
        };
        vals[slot] = Some(v.parse::<usize>().map_err(|_| CliError::Format(format!("bad value {v:?}")))?);
    }
    let [Some(ones), Some(rows), Some(cols)] = vals else {
        return Err(CliError::Format("incomplete block table header".into()));
    };
    let blocks = lines.filter(|l| !l.trim().is_empty()).map(block_from_line).collect::<Result<Vec<_>, _>>()?;
    Ok((Limits { ones, rows, cols }, blocks))
}

/// Reads the table at `path` if it covers `need`, otherwise generates one
/// and writes it there.
pub fn load_or_build(path: &Path, need: Limits) -> CliResult<Vec<Block>> {
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let (have, blocks) = parse(&text)?;
        if have.covers(&need) {
            return Ok(blocks);
        }
    }
    let blocks = generate_blocks_within(need.ones, need.rows, need.cols);
    fs::write(path, render(need, &blocks)).map_err(|e| CliError::io(path, e))?;
    Ok(blocks)
}
