//! Consistency battery: divisibility congruences, agreement between
//! methods, and invariance under permuting the roles of rows, columns and
//! symbols.
//!
//! For `d` one of `r, s, n` and `0 <= k < d`, `#PLR(r, s, n; m)` agrees
//! modulo `d - k` with the count where `d` is replaced by `k`. A cyclic
//! shift of `d - k` rows (columns, symbols) acts on the rectangles; orbits
//! are full except for rectangles whose shifted lines are empty, and those
//! are counted by the smaller shape. With `k = 0` the smaller count is
//! `[m = 0]`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use plr_core::chromatic::f_m_polynomial;
use plr_core::perm::factorial;
use plr_core::{BigCount, Shape, TriPoly, WeightDistribution};

use crate::cache::{ResultCache, Table};
use crate::engine::{self, Method, RunOptions};
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub outcome: Outcome,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "PASS     {} {}", self.group, self.name),
            Outcome::Fail(why) => write!(f, "FAIL     {} {}: {why}", self.group, self.name),
            Outcome::Skipped(why) => write!(f, "SKIPPED  {} {}: {why}", self.group, self.name),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, group: &'static str, name: String, outcome: Outcome) {
        self.checks.push(Check { group, name, outcome });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn ok(&self) -> bool {
        self.failures().next().is_none()
    }

    /// `(pass, fail, skipped)` per group, in first-seen order.
    pub fn tally(&self) -> Vec<(&'static str, [usize; 3])> {
        let mut out: Vec<(&'static str, [usize; 3])> = Vec::new();
        for c in &self.checks {
            let i = match out.iter().position(|(g, _)| *g == c.group) {
                Some(i) => i,
                None => {
                    out.push((c.group, [0; 3]));
                    out.len() - 1
                }
            };
            let slot = match c.outcome {
                Outcome::Pass => 0,
                Outcome::Fail(_) => 1,
                Outcome::Skipped(_) => 2,
            };
            out[i].1[slot] += 1;
        }
        out
    }

    /// Per-group counts followed by every failed or skipped check; with
    /// `verbose`, every check.
    pub fn render(&self, verbose: bool) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if verbose || c.outcome != Outcome::Pass {
                out.push_str(&format!("{c}\n"));
            }
        }
        for (g, [p, f, s]) in self.tally() {
            out.push_str(&format!("{g}: {p} passed, {f} failed, {s} skipped\n"));
        }
        out.push_str(if self.ok() { "verify: OK\n" } else { "verify: FAILED\n" });
        out
    }
}

/// Weight distributions by shape: memo, then cache, then a Sade run.
pub struct CountStore<'a> {
    cache: &'a mut ResultCache,
    memo: HashMap<[usize; 3], Option<WeightDistribution>>,
    opts: RunOptions,
}

impl<'a> CountStore<'a> {
    pub fn new(cache: &'a mut ResultCache, opts: RunOptions) -> Self {
        CountStore { cache, memo: HashMap::new(), opts }
    }

    pub fn get(&mut self, shape: Shape) -> CliResult<Option<WeightDistribution>> {
        if let Some(d) = self.memo.get(&shape.dims()) {
            return Ok(d.clone());
        }
        let found = match self.cache.distribution(Table::Plr, shape) {
            Some(d) => Some(d),
            None => match engine::check(shape, Method::Sade, &self.opts) {
                Ok(()) => {
                    let d = engine::sade_run(shape, &self.opts, &mut |_| {})?;
                    self.cache.record_distribution(Table::Plr, &d)?;
                    Some(d)
                }
                Err(_) => None,
            },
        };
        self.memo.insert(shape.dims(), found.clone());
        Ok(found)
    }
}

const AXES: [char; 3] = ['r', 's', 'n'];

fn indicator(shape: Shape) -> WeightDistribution {
    let mut d = WeightDistribution::zeros(shape);
    d.add_at(0, &BigCount::from(1u32));
    d
}

/// First weight where `a` and `b` differ modulo `modulus`.
fn congruence_violation(a: &WeightDistribution, b: &WeightDistribution, modulus: usize) -> Option<usize> {
    let md = BigCount::from(modulus);
    let top = a.counts().len().max(b.counts().len());
    (0..top).find(|&m| a.get(m) % &md != b.get(m) % &md)
}

fn congruences(shape: Shape, k: Option<usize>, store: &mut CountStore, report: &mut Report) -> CliResult<()> {
    let Some(full) = store.get(shape)? else {
        report.push("congruence", format!("{shape}"), Outcome::Skipped("counts unavailable".into()));
        return Ok(());
    };
    for axis in 0..3 {
        let d = shape.dims()[axis];
        let ks: Vec<usize> = match k {
            Some(k) if k < d => vec![k],
            Some(_) => vec![],
            None => (0..d).collect(),
        };
        for k in ks {
            let name = format!("{shape} {}->{k} mod {}", AXES[axis], d - k);
            let smaller = if k == 0 {
                Some(indicator(shape))
            } else {
                let mut dims = shape.dims();
                dims[axis] = k;
                store.get(Shape::from_dims(dims)?)?
            };
            let outcome = match smaller {
                None => Outcome::Skipped("smaller shape unavailable".into()),
                Some(b) => match congruence_violation(&full, &b, d - k) {
                    None => Outcome::Pass,
                    Some(m) => Outcome::Fail(format!("m={m}: {} vs {}", full.get(m), b.get(m))),
                },
            };
            report.push("congruence", name, outcome);
        }
    }
    Ok(())
}

fn cross_methods(shape: Shape, store: &mut CountStore, report: &mut Report) -> CliResult<()> {
    let mut results: Vec<(&str, WeightDistribution)> = Vec::new();
    if let Some(d) = store.get(shape)? {
        results.push(("sade", d));
    }
    for method in [Method::Oracle, Method::Blocks] {
        if engine::check(shape, method, &store.opts).is_ok() {
            results.push((method.name(), engine::count(shape, method, &store.opts, &mut |_| {})?));
        }
    }
    let name = format!("{shape} {}", results.iter().map(|r| r.0).collect::<Vec<_>>().join("="));
    let outcome = if results.len() < 2 {
        Outcome::Skipped("fewer than two feasible methods".into())
    } else {
        match results.iter().find(|r| r.1 != results[0].1) {
            None => Outcome::Pass,
            Some((method, d)) => {
                let m = (0..=shape.cells()).find(|&m| d.get(m) != results[0].1.get(m)).unwrap_or(0);
                Outcome::Fail(format!("{method} differs at m={m}: {} vs {}", d.get(m), results[0].1.get(m)))
            }
        }
    };
    report.push("cross-method", name, outcome);
    Ok(())
}

fn parastrophes(shape: Shape, store: &mut CountStore, report: &mut Report) -> CliResult<()> {
    let Some(base) = store.get(shape)? else {
        report.push("parastrophe", format!("{shape}"), Outcome::Skipped("counts unavailable".into()));
        return Ok(());
    };
    let [r, s, n] = shape.dims();
    let mut seen = vec![shape.dims()];
    for dims in [[r, n, s], [s, r, n], [s, n, r], [n, r, s], [n, s, r]] {
        if seen.contains(&dims) {
            continue;
        }
        seen.push(dims);
        let other = Shape::from_dims(dims)?;
        let outcome = match store.get(other)? {
            None => Outcome::Skipped("counts unavailable".into()),
            Some(d) => match (0..=shape.cells().max(other.cells())).find(|&m| d.get(m) != base.get(m)) {
                None => Outcome::Pass,
                Some(m) => Outcome::Fail(format!("m={m}: {} vs {}", base.get(m), d.get(m))),
            },
        };
        report.push("parastrophe", format!("{shape} ~ {other}"), outcome);
    }
    Ok(())
}

/// `f_m(r, s, n) / m!` at a point, or `None` if the division is inexact.
fn count_from_poly(f: &TriPoly, m: usize, p: [usize; 3]) -> Option<BigInt> {
    let v = f.eval_i64(p[0] as i64, p[1] as i64, p[2] as i64);
    let (q, rem) = v.div_rem(&BigInt::from(factorial(m)));
    rem.is_zero().then_some(q)
}

/// The congruences for `f_m`, `m = 1..=max_m`, at `k = 1..=max_k` and every
/// `r, s, n` in `k+1..=k+5`.
pub fn polynomial_congruences(max_m: usize, max_k: usize, report: &mut Report) {
    for m in 1..=max_m {
        let f = f_m_polynomial(m);
        for k in 1..=max_k {
            let mut bad: Option<String> = None;
            let range = k + 1..=k + 5;
            'points: for r in range.clone() {
                for s in range.clone() {
                    for n in range.clone() {
                        let p = [r, s, n];
                        let Some(full) = count_from_poly(&f, m, p) else {
                            bad = Some(format!("f_{m}{p:?} not divisible by {m}!"));
                            break 'points;
                        };
                        for axis in 0..3 {
                            let mut q = p;
                            q[axis] = k;
                            let Some(small) = count_from_poly(&f, m, q) else {
                                bad = Some(format!("f_{m}{q:?} not divisible by {m}!"));
                                break 'points;
                            };
                            let md = BigInt::from(p[axis] - k);
                            if !(&full - &small).mod_floor(&md).is_zero() {
                                bad = Some(format!("at {p:?}, {}->{k}: {full} vs {small}", AXES[axis]));
                                break 'points;
                            }
                        }
                    }
                }
            }
            let outcome = bad.map_or(Outcome::Pass, Outcome::Fail);
            report.push("polynomial", format!("f_{m} k={k}"), outcome);
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Shapes to check; every shape with dimensions up to `max_dim` if empty.
    pub shapes: Vec<Shape>,
    pub max_dim: usize,
    pub k: Option<usize>,
    pub cross_methods: bool,
    pub poly_max_m: usize,
    pub poly_max_k: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { shapes: Vec::new(), max_dim: 4, k: None, cross_methods: true, poly_max_m: 6, poly_max_k: 4 }
    }
}

impl VerifyConfig {
    pub fn shape_list(&self) -> Vec<Shape> {
        if !self.shapes.is_empty() {
            return self.shapes.clone();
        }
        let d = self.max_dim;
        let mut out = Vec::new();
        for r in 1..=d {
            for s in 1..=d {
                for n in 1..=d {
                    out.push(Shape::new(r, s, n).expect("positive"));
                }
            }
        }
        out
    }
}

pub fn run(cfg: &VerifyConfig, cache: &mut ResultCache, opts: RunOptions) -> CliResult<Report> {
    let mut report = Report::default();
    let mut store = CountStore::new(cache, opts);
    for shape in cfg.shape_list() {
        congruences(shape, cfg.k, &mut store, &mut report)?;
        if cfg.cross_methods {
            cross_methods(shape, &mut store, &mut report)?;
        }
        parastrophes(shape, &mut store, &mut report)?;
    }
    polynomial_congruences(cfg.poly_max_m, cfg.poly_max_k, &mut report);
    Ok(report)
}
