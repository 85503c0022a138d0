//! Method dispatch with feasibility limits, threading and checkpoints.

use std::path::PathBuf;
use std::thread;

use plr_core::chromatic::{count_from_table, count_via_blocks, generate_blocks_within, Block};
use plr_core::oracle::{count_all, count_with_first_row, legal_rows};
use plr_core::sade::{check_shape, extend_chunk, initial_level, merge_runs, orient_shape, tally_tail, SadeRecord};
use plr_core::{BigCount, Shape, WeightDistribution};

use crate::blocktable::{self, Limits};
use crate::checkpoint;
use crate::error::{CliError, CliResult};

/// Counting method for weight distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Oracle,
    Sade,
    Blocks,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Sade => "sade",
            Method::Blocks => "blocks",
        }
    }
}

/// Refuse oracle runs whose row-product bound exceeds this.
pub const ORACLE_LIMIT: u128 = 10_000_000_000;

/// Largest block size generated unless `--max-ones` says otherwise.
pub const BLOCKS_DEFAULT_MAX_ONES: usize = 16;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `0` means one per available core.
    pub threads: usize,
    pub plain_tail_rows: usize,
    pub max_ones: Option<usize>,
    pub checkpoint_dir: Option<PathBuf>,
    pub block_table: Option<PathBuf>,
}

impl RunOptions {
    pub fn worker_count(&self) -> usize {
        match self.threads {
            0 => thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            t => t,
        }
    }
}

/// Number of legal rows of length `s` over `n` symbols.
pub fn legal_row_count(s: usize, n: usize) -> u128 {
    let mut total = 0u128;
    let mut choose = 1u128;
    let mut falling = 1u128;
    for k in 0..=s.min(n) {
        total = total.saturating_add(choose.saturating_mul(falling));
        choose = choose * (s - k) as u128 / (k + 1) as u128;
        falling = falling.saturating_mul((n - k) as u128);
    }
    total
}

/// Upper bound on the rectangles the oracle visits: every row chosen
/// independently.
pub fn oracle_bound(shape: Shape) -> u128 {
    let per_row = legal_row_count(shape.s(), shape.n());
    (0..shape.r()).fold(1u128, |acc, _| acc.saturating_mul(per_row))
}

pub fn check_oracle(shape: Shape) -> CliResult<()> {
    let b = oracle_bound(shape);
    if b > ORACLE_LIMIT {
        let approx = (legal_row_count(shape.s(), shape.n()) as f64).powi(shape.r() as i32);
        return Err(CliError::infeasible(
            "oracle",
            format!("{shape} may visit up to {approx:.1e} rectangles (limit {ORACLE_LIMIT:.0e}); use --method sade"),
        ));
    }
    Ok(())
}

/// Largest block size the blocks method needs for the whole distribution.
pub fn blocks_needed(shape: Shape) -> usize {
    let [r, s, n] = shape.dims();
    (r * s).min(r * n).min(s * n)
}

pub fn check_blocks(needed: usize, opts: &RunOptions) -> CliResult<()> {
    let cap = opts.max_ones.unwrap_or(BLOCKS_DEFAULT_MAX_ONES);
    if needed > cap {
        return Err(CliError::infeasible(
            "blocks",
            format!("needs blocks with up to {needed} ones, limit is {cap} (raise with --max-ones)"),
        ));
    }
    Ok(())
}

pub fn check(shape: Shape, method: Method, opts: &RunOptions) -> CliResult<()> {
    match method {
        Method::Oracle => check_oracle(shape),
        Method::Sade => check_shape(orient_shape(shape)).map_err(|e| CliError::infeasible("sade", e.to_string())),
        Method::Blocks => check_blocks(blocks_needed(shape), opts),
    }
}

/// The full weight distribution of `shape`. `progress` receives one line
/// per completed stage of long runs.
pub fn count(
    shape: Shape,
    method: Method,
    opts: &RunOptions,
    progress: &mut dyn FnMut(&str),
) -> CliResult<WeightDistribution> {
    check(shape, method, opts)?;
    match method {
        Method::Oracle => Ok(oracle_parallel(shape, opts.worker_count())),
        Method::Sade => sade_run(shape, opts, progress),
        Method::Blocks => blocks_distribution(shape, opts),
    }
}

/// `#PLR(shape; m)` alone; the blocks method then only needs blocks of
/// size `m`.
pub fn count_at(
    shape: Shape,
    method: Method,
    m: usize,
    opts: &RunOptions,
    progress: &mut dyn FnMut(&str),
) -> CliResult<BigCount> {
    if method != Method::Blocks {
        return Ok(count(shape, method, opts, progress)?.get(m));
    }
    if m > blocks_needed(shape) {
        return Ok(BigCount::from(0u32));
    }
    check_blocks(m, opts)?;
    match &opts.block_table {
        Some(path) => {
            let blocks = blocktable::load_or_build(path, Limits::new(m, shape.r(), shape.s()))?;
            Ok(count_from_table(&blocks, shape, m))
        }
        None => Ok(count_via_blocks(shape, m)?),
    }
}

pub fn oracle_parallel(shape: Shape, threads: usize) -> WeightDistribution {
    if threads <= 1 {
        return count_all(shape);
    }
    let rows = legal_rows(shape.s(), shape.n());
    let parts: Vec<WeightDistribution> = thread::scope(|sc| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let rows = &rows;
                sc.spawn(move || {
                    let mut acc = WeightDistribution::zeros(shape);
                    for row in rows.iter().skip(t).step_by(threads) {
                        acc += &count_with_first_row(shape, row).expect("legal row");
                    }
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
    });
    parts.into_iter().fold(WeightDistribution::zeros(shape), |mut a, p| {
        a += &p;
        a
    })
}

fn chunks<T>(items: &[T], parts: usize) -> impl Iterator<Item = &[T]> {
    let size = items.len().div_ceil(parts.max(1)).max(1);
    items.chunks(size)
}

fn extend_parallel(shape: Shape, level: usize, records: &[SadeRecord], threads: usize) -> CliResult<Vec<SadeRecord>> {
    if threads <= 1 || records.len() < 2 {
        return Ok(extend_chunk(shape, level, records)?);
    }
    let runs: Vec<plr_core::Result<Vec<SadeRecord>>> = thread::scope(|sc| {
        let handles: Vec<_> =
            chunks(records, threads).map(|c| sc.spawn(move || extend_chunk(shape, level, c))).collect();
        handles.into_iter().map(|h| h.join().expect("sade worker panicked")).collect()
    });
    Ok(merge_runs(runs.into_iter().collect::<Result<_, _>>()?))
}

fn tally_parallel(shape: Shape, level: usize, records: &[SadeRecord], threads: usize) -> WeightDistribution {
    let mut dist = WeightDistribution::zeros(shape);
    if threads <= 1 {
        tally_tail(shape, level, records, &mut dist);
        return dist;
    }
    let parts: Vec<WeightDistribution> = thread::scope(|sc| {
        let handles: Vec<_> = chunks(records, threads)
            .map(|c| {
                sc.spawn(move || {
                    let mut d = WeightDistribution::zeros(shape);
                    tally_tail(shape, level, c, &mut d);
                    d
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sade worker panicked")).collect()
    });
    for p in &parts {
        dist += p;
    }
    dist
}

/// Sade's method with parallel level extension and optional checkpoints:
/// with a checkpoint directory each merged level is saved, and a rerun
/// resumes from the deepest saved level.
pub fn sade_run(shape: Shape, opts: &RunOptions, progress: &mut dyn FnMut(&str)) -> CliResult<WeightDistribution> {
    let run = orient_shape(shape);
    check_shape(run)?;
    let threads = opts.worker_count();
    let merged = run.r().saturating_sub(opts.plain_tail_rows.max(1));
    let resumed = match &opts.checkpoint_dir {
        Some(dir) => checkpoint::latest(dir, run, merged)?,
        None => None,
    };
    let (mut level, start) = match resumed {
        Some(cp) => {
            progress(&format!("resumed {run} at level {} ({} records)", cp.level, cp.records.len()));
            (cp.records, cp.level)
        }
        None => (initial_level(run)?, 0),
    };
    for i in start..merged {
        level = extend_parallel(run, i, &level, threads)?;
        if let Some(dir) = &opts.checkpoint_dir {
            checkpoint::write(dir, run, i + 1, &level)?;
        }
        progress(&format!("{run}: level {} has {} classes", i + 1, level.len()));
    }
    let dist = tally_parallel(run, merged, &level, threads);
    progress(&format!("{run}: tallied {} remaining rows", run.r() - merged));
    Ok(dist.with_shape(shape)?)
}

pub fn blocks_distribution(shape: Shape, opts: &RunOptions) -> CliResult<WeightDistribution> {
    let top = blocks_needed(shape);
    check_blocks(top, opts)?;
    let need = Limits::new(top, shape.r(), shape.s());
    let blocks: Vec<Block> = match &opts.block_table {
        Some(path) => blocktable::load_or_build(path, need)?,
        None => generate_blocks_within(need.ones, need.rows, need.cols),
    };
    let mut dist = WeightDistribution::zeros(shape);
    for m in 0..=top {
        dist.add_at(m, &count_from_table(&blocks, shape, m));
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(r: usize, s: usize, n: usize) -> Shape {
        Shape::new(r, s, n).unwrap()
    }

    #[test]
    fn legal_rows_counted() {
        for (s, n) in [(1, 1), (2, 3), (3, 2), (4, 4), (3, 7)] {
            assert_eq!(legal_row_count(s, n), legal_rows(s, n).len() as u128, "{s} {n}");
        }
    }

    #[test]
    fn limits_refuse_large_requests() {
        let opts = RunOptions::default();
        assert!(check(sh(4, 4, 4), Method::Oracle, &opts).is_ok());
        assert!(matches!(
            check(sh(4, 4, 7), Method::Oracle, &opts),
            Err(CliError::Infeasible { module: "oracle", .. })
        ));
        assert!(matches!(
            check(sh(5, 5, 7), Method::Blocks, &opts),
            Err(CliError::Infeasible { module: "blocks", .. })
        ));
        let raised = RunOptions { max_ones: Some(25), ..Default::default() };
        assert!(check(sh(5, 5, 7), Method::Blocks, &raised).is_ok());
        assert!(matches!(check(sh(2, 9, 9), Method::Sade, &opts), Err(CliError::Infeasible { module: "sade", .. })));
    }

    #[test]
    fn threaded_runs_match_single() {
        let shape = sh(3, 3, 4);
        let single = count_all(shape);
        assert_eq!(oracle_parallel(shape, 3), single);
        for t in [1, 2, 5] {
            for tail in [0, 1, 2] {
                let opts = RunOptions { threads: t, plain_tail_rows: tail, ..Default::default() };
                assert_eq!(sade_run(shape, &opts, &mut |_| {}).unwrap(), single);
            }
        }
    }

    #[test]
    fn single_weight_blocks() {
        let shape = sh(3, 3, 7);
        let opts = RunOptions::default();
        let v = count_at(shape, Method::Blocks, 9, &opts, &mut |_| {}).unwrap();
        assert_eq!(v, 2212980u32.into());
        assert_eq!(count_at(shape, Method::Blocks, 40, &opts, &mut |_| {}).unwrap(), 0u32.into());
    }

    #[test]
    fn resume_from_checkpoint() {
        let dir = std::env::temp_dir().join(format!("plr-engine-{}", std::process::id()));
        let shape = sh(4, 3, 4);
        let opts = RunOptions { checkpoint_dir: Some(dir.clone()), ..Default::default() };
        let mut lines = Vec::new();
        let first = sade_run(shape, &opts, &mut |l| lines.push(l.to_string())).unwrap();
        assert!(!lines.iter().any(|l| l.starts_with("resumed")));
        lines.clear();
        let second = sade_run(shape, &opts, &mut |l| lines.push(l.to_string())).unwrap();
        assert!(lines[0].starts_with("resumed"));
        assert_eq!(first, second);
        assert_eq!(first, count_all(shape));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
