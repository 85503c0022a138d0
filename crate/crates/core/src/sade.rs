//! Row-by-row counting over equivalent prefixes.
//!
//! Two `i`-row prefixes extend in the same number of ways, weight by weight,
//! whenever their column-symbol incidence graphs are isomorphic under
//! column and symbol permutations. Each level keeps one representative per
//! isomorphism class, keyed by its Sade number (the canonical biadjacency
//! matrix read as a binary number), together with a multiplier counting the
//! prefixes it stands for.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::canon::{bits, canonical_form, ColoredGraph, MAX_VERTICES};
use crate::dist::WeightDistribution;
use crate::error::{Error, Result};
use crate::plr::{Plr, Shape};

/// One class of prefixes at a level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SadeRecord {
    /// A member of the class: the first `level` rows are filled, the rest empty.
    pub representative: Plr,
    pub sade_number: u64,
    pub weight: usize,
    pub multiplier: BigUint,
}

/// Tuning knobs for [`sade_count_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SadeConfig {
    /// Number of final rows counted by plain backtracking instead of merging.
    pub plain_tail_rows: usize,
}

/// The rearrangement of `shape` that is actually run: columns never exceed
/// symbols.
pub fn orient_shape(shape: Shape) -> Shape {
    let [r, s, n] = shape.dims();
    Shape::new(r, s.min(n), s.max(n)).expect("dimensions stay positive")
}

/// Checks that Sade numbers of `shape` fit in 64 bits.
pub fn check_shape(shape: Shape) -> Result<()> {
    let (s, n) = (shape.s(), shape.n());
    if s * n > 64 || s + n > MAX_VERTICES {
        return Err(Error::SizeLimit(format!("Sade numbers need s*n <= 64, got {s}x{n}")));
    }
    Ok(())
}

/// Sade number of the column-symbol structure given by column masks.
pub fn sade_number_of_columns(cols: &[u64], n: usize) -> u64 {
    let s = cols.len();
    let mut colors = vec![1u32; s];
    colors.extend(core::iter::repeat_n(2u32, n));
    let mut g = ColoredGraph::new(colors).expect("column-symbol graph fits");
    for (j, &m) in cols.iter().enumerate() {
        for k in bits(m) {
            g.add_edge(j, s + k).expect("valid edge");
        }
    }
    let cf = canonical_form(&g);
    let mut lab = vec![0usize; s + n];
    for v in 0..s + n {
        lab[cf.relabeling.apply(v)] = v;
    }
    let mut num = 0u64;
    for a in 0..s {
        for b in 0..n {
            num <<= 1;
            if g.has_edge(lab[a], lab[s + b]) {
                num |= 1;
            }
        }
    }
    num
}

/// Sade number of a prefix: the canonical column-symbol biadjacency matrix
/// read row-major with the first bit most significant.
pub fn sade_number(l: &Plr) -> Result<u64> {
    check_shape(l.shape())?;
    Ok(sade_number_of_columns(&l.column_masks(), l.shape().n()))
}

/// Column masks encoded by a Sade number.
pub fn decode_columns(number: u64, s: usize, n: usize) -> Vec<u64> {
    (0..s)
        .map(|a| {
            (0..n).fold(0u64, |m, b| {
                let bit = s * n - 1 - (a * n + b);
                m | ((number >> bit) & 1) << b
            })
        })
        .collect()
}

/// The level-0 database: the empty prefix.
pub fn initial_level(shape: Shape) -> Result<Vec<SadeRecord>> {
    check_shape(shape)?;
    Ok(vec![SadeRecord { representative: Plr::empty(shape)?, sade_number: 0, weight: 0, multiplier: BigUint::one() }])
}

/// Calls `f(row, weight)` for every row compatible with the column masks.
fn for_each_row(cols: &[u64], n: usize, f: &mut impl FnMut(&[u8], usize)) {
    fn go(j: usize, used: u64, w: usize, cols: &[u64], full: u64, row: &mut [u8], f: &mut impl FnMut(&[u8], usize)) {
        if j == row.len() {
            f(row, w);
            return;
        }
        row[j] = 0;
        go(j + 1, used, w, cols, full, row, f);
        for k in bits(full & !used & !cols[j]) {
            row[j] = k as u8 + 1;
            go(j + 1, used | 1 << k, w + 1, cols, full, row, f);
        }
        row[j] = 0;
    }
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut row = vec![0u8; cols.len()];
    go(0, 0, 0, cols, full, &mut row, f);
}

/// Extends records of `level` by one row, returning a run sorted by Sade
/// number with equal numbers merged.
pub fn extend_chunk(shape: Shape, level: usize, records: &[SadeRecord]) -> Result<Vec<SadeRecord>> {
    check_shape(shape)?;
    if level >= shape.r() {
        return Err(Error::Invalid(format!("level {level} cannot be extended in {shape}")));
    }
    let (s, n) = (shape.s(), shape.n());
    let mut db: BTreeMap<u64, SadeRecord> = BTreeMap::new();
    for rec in records {
        let cols = rec.representative.column_masks();
        let mut next = cols.clone();
        for_each_row(&cols, n, &mut |row, w| {
            for j in 0..s {
                next[j] = cols[j] | if row[j] == 0 { 0 } else { 1 << (row[j] - 1) };
            }
            let number = sade_number_of_columns(&next, n);
            let weight = rec.weight + w;
            match db.get_mut(&number) {
                Some(existing) => {
                    assert_eq!(existing.weight, weight, "equivalent prefixes differ in weight");
                    existing.multiplier += &rec.multiplier;
                }
                None => {
                    let mut cells = rec.representative.cells().to_vec();
                    cells[level * s..(level + 1) * s].copy_from_slice(row);
                    let representative = Plr::from_cells(shape, cells).expect("extension stays Latin");
                    db.insert(
                        number,
                        SadeRecord { representative, sade_number: number, weight, multiplier: rec.multiplier.clone() },
                    );
                }
            }
        });
    }
    Ok(db.into_values().collect())
}

/// Merges sorted runs, adding multipliers of records with equal numbers.
pub fn merge_runs(runs: Vec<Vec<SadeRecord>>) -> Vec<SadeRecord> {
    let mut all: Vec<SadeRecord> = runs.into_iter().flatten().collect();
    all.sort_by_key(|r| r.sade_number);
    let mut out: Vec<SadeRecord> = Vec::with_capacity(all.len());
    for rec in all {
        match out.last_mut() {
            Some(last) if last.sade_number == rec.sade_number => {
                assert_eq!(last.weight, rec.weight, "equivalent prefixes differ in weight");
                last.multiplier += rec.multiplier;
            }
            _ => out.push(rec),
        }
    }
    out
}

/// Adds to `dist` the weights of all completions of `records` by the
/// remaining `rows` rows, found by plain backtracking.
pub fn tally_tail(shape: Shape, level: usize, records: &[SadeRecord], dist: &mut WeightDistribution) {
    let rows = shape.r() - level;
    let n = shape.n();
    for rec in records {
        let mut hist = vec![0u64; shape.cells() + 1];
        let mut cols = rec.representative.column_masks();
        tail(&mut cols, n, rows, rec.weight, &mut hist);
        for (m, &c) in hist.iter().enumerate() {
            if c != 0 {
                dist.add_at(m, &(&rec.multiplier * c));
            }
        }
    }
}

fn tail(cols: &mut Vec<u64>, n: usize, rows: usize, weight: usize, hist: &mut [u64]) {
    if rows == 0 {
        hist[weight] += 1;
        return;
    }
    if rows == 1 {
        for_each_row(cols, n, &mut |_, w| hist[weight + w] += 1);
        return;
    }
    let snapshot = cols.clone();
    let mut rows_seen: Vec<(Vec<u8>, usize)> = Vec::new();
    for_each_row(&snapshot, n, &mut |row, w| rows_seen.push((row.to_vec(), w)));
    for (row, w) in rows_seen {
        for (j, &v) in row.iter().enumerate() {
            if v != 0 {
                cols[j] |= 1 << (v - 1);
            }
        }
        tail(cols, n, rows - 1, weight + w, hist);
        cols.copy_from_slice(&snapshot);
    }
}

/// Builds a level-`level` record from its Sade number alone, realizing the
/// column-symbol structure as `level` rows by bipartite edge coloring.
pub fn record_from_number(shape: Shape, level: usize, number: u64, multiplier: BigUint) -> Result<SadeRecord> {
    check_shape(shape)?;
    let (s, n) = (shape.s(), shape.n());
    let cols = decode_columns(number, s, n);
    const FREE: usize = usize::MAX;
    let mut at_col = vec![vec![FREE; level]; s];
    let mut at_sym = vec![vec![FREE; level]; n];
    for (c, &m) in cols.iter().enumerate() {
        for k in bits(m) {
            let a = (0..level).find(|&x| at_col[c][x] == FREE);
            let b = (0..level).find(|&x| at_sym[k][x] == FREE);
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::Invalid(format!("Sade number {number} needs more than {level} rows")));
            };
            if at_sym[k][a] != FREE {
                // Swap colors a and b along the alternating path from symbol k.
                let mut path = Vec::new();
                let mut sym = k;
                while at_sym[sym][a] != FREE {
                    let col = at_sym[sym][a];
                    path.push((col, sym, a));
                    let next = at_col[col][b];
                    if next == FREE {
                        break;
                    }
                    path.push((col, next, b));
                    sym = next;
                }
                for &(c2, k2, x) in &path {
                    at_col[c2][x] = FREE;
                    at_sym[k2][x] = FREE;
                }
                for &(c2, k2, x) in &path {
                    let y = if x == a { b } else { a };
                    at_col[c2][y] = k2;
                    at_sym[k2][y] = c2;
                }
            }
            at_col[c][a] = k;
            at_sym[k][a] = c;
        }
    }
    let mut cells = vec![0u8; shape.cells()];
    for c in 0..s {
        for (row, &k) in at_col[c].iter().enumerate() {
            if k != FREE {
                cells[row * s + c] = k as u8 + 1;
            }
        }
    }
    let representative = Plr::from_cells(shape, cells)?;
    let weight = representative.weight();
    Ok(SadeRecord { representative, sade_number: number, weight, multiplier })
}

/// Weight distribution of `shape` computed level by level.
pub fn sade_count(shape: Shape) -> Result<WeightDistribution> {
    sade_count_with(shape, SadeConfig::default())
}

pub fn sade_count_with(shape: Shape, config: SadeConfig) -> Result<WeightDistribution> {
    let run = orient_shape(shape);
    check_shape(run)?;
    let merged_levels = run.r().saturating_sub(config.plain_tail_rows.max(1));
    let mut level = initial_level(run)?;
    for i in 0..merged_levels {
        level = extend_chunk(run, i, &level)?;
    }
    let mut dist = WeightDistribution::zeros(run);
    tally_tail(run, merged_levels, &level, &mut dist);
    dist.with_shape(shape)
}

/// Sizes of the level databases, level 0 first; for diagnostics.
pub fn level_sizes(shape: Shape) -> Result<Vec<usize>> {
    let run = orient_shape(shape);
    let mut level = initial_level(run)?;
    let mut sizes = vec![level.len()];
    for i in 0..run.r() {
        level = extend_chunk(run, i, &level)?;
        sizes.push(level.len());
    }
    Ok(sizes)
}

/// Sum of multipliers, which counts all prefixes of the level.
pub fn level_population(records: &[SadeRecord]) -> BigUint {
    records.iter().fold(BigUint::zero(), |acc, r| acc + &r.multiplier)
}
