//! Shapes, entries and partial Latin rectangles.
//!
//! Indices are 0-based throughout. A cell holds `0` when empty and a
//! symbol `1..=n` otherwise.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest symbol count supported by the bitmask based routines.
pub const MAX_SYMBOLS: usize = 64;

/// Dimensions `(r, s, n)`: rows, columns and symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    r: usize,
    s: usize,
    n: usize,
}

impl Shape {
    pub fn new(r: usize, s: usize, n: usize) -> Result<Self> {
        if r == 0 || s == 0 || n == 0 {
            return Err(Error::InvalidShape { r, s, n });
        }
        Ok(Shape { r, s, n })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.r, self.s, self.n]
    }

    pub fn from_dims(d: [usize; 3]) -> Result<Self> {
        Shape::new(d[0], d[1], d[2])
    }

    /// Number of cells, which is also the largest possible weight.
    pub fn cells(&self) -> usize {
        self.r * self.s
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.r, self.s, self.n)
    }
}

/// A filled cell `(row, col, symbol)`, all 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub symbol: usize,
}

impl Entry {
    pub fn new(row: usize, col: usize, symbol: usize) -> Self {
        Entry { row, col, symbol }
    }

    pub fn coords(&self) -> [usize; 3] {
        [self.row, self.col, self.symbol]
    }

    pub fn from_coords(c: [usize; 3]) -> Self {
        Entry::new(c[0], c[1], c[2])
    }
}

/// A partial Latin rectangle: an `r x s` grid over `n` symbols in which no
/// symbol repeats within a row or a column.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Plr {
    shape: Shape,
    cells: Vec<u8>,
}

impl Plr {
    pub fn empty(shape: Shape) -> Result<Self> {
        if shape.n > MAX_SYMBOLS {
            return Err(Error::SizeLimit(format!("at most {MAX_SYMBOLS} symbols are supported, got {}", shape.n)));
        }
        Ok(Plr { shape, cells: vec![0; shape.cells()] })
    }

    /// Builds a rectangle from row-major cell values (`0` = empty, else `1..=n`).
    pub fn from_cells(shape: Shape, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != shape.cells() {
            return Err(Error::ShapeMismatch(format!("expected {} cells, got {}", shape.cells(), cells.len())));
        }
        let mut p = Plr::empty(shape)?;
        for (idx, &v) in cells.iter().enumerate() {
            if v != 0 {
                p.place(idx / shape.s, idx % shape.s, v as usize - 1)?;
            }
        }
        Ok(p)
    }

    /// Builds a rectangle from 0-based entries.
    pub fn from_entries(shape: Shape, entries: &[Entry]) -> Result<Self> {
        let mut p = Plr::empty(shape)?;
        for e in entries {
            p.place(e.row, e.col, e.symbol)?;
        }
        Ok(p)
    }

    /// Parses rows separated by `/` with cells separated by spaces or commas;
    /// `.` or `0` marks an empty cell and symbols are 1-based.
    pub fn parse(shape: Shape, text: &str) -> Result<Self> {
        let mut cells = Vec::with_capacity(shape.cells());
        for row in text.split('/') {
            let before = cells.len();
            for tok in row.split([' ', ',']).filter(|t| !t.is_empty()) {
                if tok == "." {
                    cells.push(0);
                } else {
                    let v: u8 = tok.parse().map_err(|_| Error::Invalid(format!("bad cell {tok:?}")))?;
                    cells.push(v);
                }
            }
            if cells.len() - before != shape.s {
                return Err(Error::ShapeMismatch(format!("row {row:?} needs {} cells", shape.s)));
            }
        }
        Plr::from_cells(shape, cells)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// The symbol in cell `(row, col)`, 0-based, or `None` when empty.
    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        match self.cells[row * self.shape.s + col] {
            0 => None,
            v => Some(v as usize - 1),
        }
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn weight(&self) -> usize {
        self.cells.iter().filter(|&&c| c != 0).count()
    }

    pub fn entries(&self) -> Vec<Entry> {
        let s = self.shape.s;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(idx, &v)| Entry::new(idx / s, idx % s, v as usize - 1))
            .collect()
    }

    /// Fills cell `(row, col)` with `symbol`, checking the Latin property.
    pub fn place(&mut self, row: usize, col: usize, symbol: usize) -> Result<()> {
        let Shape { r, s, n } = self.shape;
        if row >= r || col >= s || symbol >= n {
            return Err(Error::ShapeMismatch(format!("entry ({row},{col},{symbol}) outside {}", self.shape)));
        }
        if self.cells[row * s + col] != 0 {
            return Err(Error::Invalid(format!("cell ({row},{col}) already filled")));
        }
        let v = (symbol + 1) as u8;
        if (0..s).any(|j| self.cells[row * s + j] == v) {
            return Err(Error::Invalid(format!("symbol {} repeated in row {row}", symbol + 1)));
        }
        if (0..r).any(|i| self.cells[i * s + col] == v) {
            return Err(Error::Invalid(format!("symbol {} repeated in column {col}", symbol + 1)));
        }
        self.cells[row * s + col] = v;
        Ok(())
    }

    /// Bitmask of the symbols used in each column.
    pub fn column_masks(&self) -> Vec<u64> {
        let s = self.shape.s;
        let mut masks = vec![0u64; s];
        for (idx, &v) in self.cells.iter().enumerate() {
            if v != 0 {
                masks[idx % s] |= 1 << (v - 1);
            }
        }
        masks
    }

    /// Returns the first `rows` rows as a rectangle of `rows` rows.
    pub fn prefix(&self, rows: usize) -> Result<Plr> {
        let shape = Shape::new(rows, self.shape.s, self.shape.n)?;
        Plr::from_cells(shape, self.cells[..rows * self.shape.s].to_vec())
    }
}

impl fmt::Display for Plr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.cells.chunks(self.shape.s).enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            for (j, &v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                if v == 0 {
                    f.write_str(".")?;
                } else {
                    write!(f, "{v}")?;
                }
            }
        }
        Ok(())
    }
}
