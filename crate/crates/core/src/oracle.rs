//! Exhaustive counting used as ground truth by every other method.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::canon::bits;
use crate::dist::WeightDistribution;
use crate::error::{Error, Result};
use crate::paratopism::{parastrophe, stabilizing_permutations, Isotopism, Paratopism};
use crate::perm::factorial;
use crate::plr::{Entry, Plr, Shape, MAX_SYMBOLS};

/// Above this many isotopisms `count_isotopisms` stops trying them one by one.
pub const BRUTE_FORCE_ISOTOPISMS: u64 = 1_000_000;

fn check_symbols(shape: Shape) -> Result<()> {
    if shape.n() > MAX_SYMBOLS {
        return Err(Error::SizeLimit(alloc::format!("at most {MAX_SYMBOLS} symbols")));
    }
    Ok(())
}

/// Weight distribution of all partial Latin rectangles of `shape`, by
/// backtracking over cells in row-major order.
pub fn count_all(shape: Shape) -> WeightDistribution {
    let mut hist = vec![0u64; shape.cells() + 1];
    if check_symbols(shape).is_ok() {
        let mut st = Backtrack {
            s: shape.s(),
            cells: shape.cells(),
            full: low_bits(shape.n()),
            rows: vec![0; shape.r()],
            cols: vec![0; shape.s()],
        };
        st.run(0, 0, &mut hist);
    }
    to_distribution(shape, &hist)
}

/// Counts for the rectangles whose first row is `first_row` (1-based
/// symbols, `0` empty). Summing over every valid first row gives
/// [`count_all`]; this is the unit of work for parallel drivers.
pub fn count_with_first_row(shape: Shape, first_row: &[u8]) -> Result<WeightDistribution> {
    check_symbols(shape)?;
    let mut prefix = vec![0u8; shape.cells()];
    prefix[..shape.s()].copy_from_slice(first_row);
    let p = Plr::from_cells(shape, prefix)?;
    let mut st = Backtrack {
        s: shape.s(),
        cells: shape.cells(),
        full: low_bits(shape.n()),
        rows: vec![0; shape.r()],
        cols: p.column_masks(),
    };
    st.rows[0] = st.cols.iter().fold(0, |a, b| a | b);
    let mut hist = vec![0u64; shape.cells() + 1];
    st.run(shape.s(), p.weight(), &mut hist);
    Ok(to_distribution(shape, &hist))
}

/// Every legal row of `s` cells over `n` symbols (1-based, `0` empty).
pub fn legal_rows(s: usize, n: usize) -> Vec<Vec<u8>> {
    fn go(j: usize, used: u64, row: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
        if j == row.len() {
            out.push(row.clone());
            return;
        }
        row[j] = 0;
        go(j + 1, used, row, n, out);
        for k in bits(low_bits(n) & !used) {
            row[j] = k as u8 + 1;
            go(j + 1, used | 1 << k, row, n, out);
        }
        row[j] = 0;
    }
    let mut out = Vec::new();
    go(0, 0, &mut vec![0; s], n, &mut out);
    out
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn to_distribution(shape: Shape, hist: &[u64]) -> WeightDistribution {
    WeightDistribution::from_u64(shape, hist).expect("histogram sized to shape")
}

struct Backtrack {
    s: usize,
    cells: usize,
    full: u64,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl Backtrack {
    fn run(&mut self, start: usize, weight: usize, hist: &mut [u64]) {
        hist[weight] += 1;
        for c in start..self.cells {
            let (i, j) = (c / self.s, c % self.s);
            let avail = self.full & !self.rows[i] & !self.cols[j];
            for k in bits(avail) {
                let b = 1u64 << k;
                self.rows[i] |= b;
                self.cols[j] |= b;
                self.run(c + 1, weight + 1, hist);
                self.rows[i] &= !b;
                self.cols[j] &= !b;
            }
        }
    }
}

/// Every partial Latin rectangle of `shape`; only sensible for tiny shapes.
pub fn all_plrs(shape: Shape) -> Vec<Plr> {
    fn go(c: usize, cur: &mut Plr, out: &mut Vec<Plr>) {
        let shape = cur.shape();
        if c == shape.cells() {
            out.push(cur.clone());
            return;
        }
        go(c + 1, cur, out);
        for k in 0..shape.n() {
            let mut next = cur.clone();
            if next.place(c / shape.s(), c % shape.s(), k).is_ok() {
                go(c + 1, &mut next, out);
            }
        }
    }
    let mut out = Vec::new();
    if let Ok(mut p) = Plr::empty(shape) {
        go(0, &mut p, &mut out);
    }
    out
}

/// Weight distribution of the rectangles fixed by the paratopism `p`.
///
/// The paratopism permutes the triple space `[r] x [s] x [n]`; a fixed
/// rectangle is a union of its orbits. Orbits whose own triples clash are
/// discarded, and the remaining ones are combined by backtracking.
pub fn count_fixed_by(p: &Paratopism, shape: Shape) -> Result<WeightDistribution> {
    p.check(shape)?;
    let [r, s, n] = shape.dims();
    let idx = |c: [usize; 3]| (c[0] * s + c[1]) * n + c[2];
    let total = r * s * n;
    let mut seen = vec![false; total];
    let keys = r * s + r * n + s * n;
    let kw = keys.div_ceil(64);
    let mut orbit_keys: Vec<Vec<u64>> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for i in 0..r {
        for j in 0..s {
            for k in 0..n {
                let start = [i, j, k];
                if seen[idx(start)] {
                    continue;
                }
                let mut key = vec![0u64; kw];
                let mut clash = false;
                let mut size = 0;
                let mut cur = start;
                loop {
                    seen[idx(cur)] = true;
                    size += 1;
                    let [a, b, c] = cur;
                    for slot in [a * s + b, r * s + a * n + c, r * s + r * n + b * n + c] {
                        let (w, bit) = (slot / 64, 1u64 << (slot % 64));
                        clash |= key[w] & bit != 0;
                        key[w] |= bit;
                    }
                    cur = p.map_coords(cur);
                    if cur == start {
                        break;
                    }
                }
                if !clash {
                    orbit_keys.push(key);
                    sizes.push(size);
                }
            }
        }
    }
    let m = sizes.len();
    let w = m.div_ceil(64).max(1);
    let mut compat = vec![0u64; m * w];
    for a in 0..m {
        for b in a + 1..m {
            if orbit_keys[a].iter().zip(&orbit_keys[b]).all(|(x, y)| x & y == 0) {
                compat[a * w + b / 64] |= 1 << (b % 64);
            }
        }
    }
    let mut stack = vec![0u64; (shape.cells() + 2) * w];
    for b in 0..m {
        stack[b / 64] |= 1 << (b % 64);
    }
    let mut hist = vec![0u64; shape.cells() + 1];
    let mut st = OrbitSearch { w, compat: &compat, sizes: &sizes, stack };
    st.run(0, 0, &mut hist);
    Ok(to_distribution(shape, &hist))
}

struct OrbitSearch<'a> {
    w: usize,
    compat: &'a [u64],
    sizes: &'a [usize],
    stack: Vec<u64>,
}

impl OrbitSearch<'_> {
    /// `stack[depth]` holds the orbits still compatible with the chosen ones;
    /// only orbits after the last chosen are ever set.
    fn run(&mut self, depth: usize, weight: usize, hist: &mut [u64]) {
        hist[weight] += 1;
        let w = self.w;
        for word in 0..w {
            let mut m = self.stack[depth * w + word];
            while m != 0 {
                let o = word * 64 + m.trailing_zeros() as usize;
                m &= m - 1;
                for x in 0..w {
                    self.stack[(depth + 1) * w + x] = self.stack[depth * w + x] & self.compat[o * w + x];
                }
                self.run(depth + 1, weight + self.sizes[o], hist);
            }
        }
    }
}

fn same_shape(p: &Plr, q: &Plr) -> Result<()> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch(alloc::format!("{} vs {}", p.shape(), q.shape())));
    }
    Ok(())
}

/// Number of isotopisms `theta` with `p^theta = q`.
pub fn count_isotopisms(p: &Plr, q: &Plr) -> Result<BigUint> {
    same_shape(p, q)?;
    let [r, s, n] = p.shape().dims();
    let group = factorial(r) * factorial(s) * factorial(n);
    if group.to_u64().is_some_and(|g| g <= BRUTE_FORCE_ISOTOPISMS) {
        count_isotopisms_brute(p, q)
    } else {
        count_isotopisms_propagate(p, q)
    }
}

/// Tries every isotopism in turn.
pub fn count_isotopisms_brute(p: &Plr, q: &Plr) -> Result<BigUint> {
    same_shape(p, q)?;
    if p.weight() != q.weight() {
        return Ok(BigUint::zero());
    }
    let entries = p.entries();
    let hits = Isotopism::all(p.shape())
        .into_iter()
        .filter(|t| {
            let para = Paratopism::isotopism(t.clone());
            entries.iter().all(|&e| {
                let f = para.map_entry(e);
                q.get(f.row, f.col) == Some(f.symbol)
            })
        })
        .count();
    Ok(BigUint::from(hits))
}

/// Backtracks over row images, forcing column and symbol images from
/// matched entries and multiplying in the factorials of unconstrained points.
pub fn count_isotopisms_propagate(p: &Plr, q: &Plr) -> Result<BigUint> {
    same_shape(p, q)?;
    if p.weight() != q.weight() {
        return Ok(BigUint::zero());
    }
    let [r, s, n] = p.shape().dims();
    let rows_of = |x: &Plr| -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); r];
        for Entry { row, col, symbol } in x.entries() {
            out[row].push((col, symbol));
        }
        out
    };
    let prow = rows_of(p);
    let qrow = rows_of(q);
    let mut order: Vec<usize> = (0..r).filter(|&i| !prow[i].is_empty()).collect();
    order.sort_by_key(|&i| core::cmp::Reverse(prow[i].len()));
    let empty_rows = r - order.len();
    let mut st = IsoSearch {
        q,
        prow: &prow,
        qrow: &qrow,
        order: &order,
        row_used: vec![false; r],
        beta: vec![usize::MAX; s],
        beta_used: vec![false; s],
        gamma: vec![usize::MAX; n],
        gamma_used: vec![false; n],
        total: BigUint::zero(),
    };
    st.rows(0);
    Ok(st.total * factorial(empty_rows))
}

struct IsoSearch<'a> {
    q: &'a Plr,
    prow: &'a [Vec<(usize, usize)>],
    qrow: &'a [Vec<(usize, usize)>],
    order: &'a [usize],
    row_used: Vec<bool>,
    beta: Vec<usize>,
    beta_used: Vec<bool>,
    gamma: Vec<usize>,
    gamma_used: Vec<bool>,
    total: BigUint,
}

impl IsoSearch<'_> {
    fn rows(&mut self, idx: usize) {
        if idx == self.order.len() {
            let free_cols = self.beta_used.iter().filter(|&&u| !u).count();
            let free_syms = self.gamma_used.iter().filter(|&&u| !u).count();
            self.total += factorial(free_cols) * factorial(free_syms);
            return;
        }
        let i = self.order[idx];
        for i2 in 0..self.row_used.len() {
            if self.row_used[i2] || self.qrow[i2].len() != self.prow[i].len() {
                continue;
            }
            self.row_used[i2] = true;
            self.entries(idx, i2, 0);
            self.row_used[i2] = false;
        }
    }

    fn entries(&mut self, idx: usize, i2: usize, k: usize) {
        let i = self.order[idx];
        if k == self.prow[i].len() {
            self.rows(idx + 1);
            return;
        }
        let (j, sym) = self.prow[i][k];
        let (bj, gs) = (self.beta[j], self.gamma[sym]);
        if bj != usize::MAX {
            let Some(t) = self.q.get(i2, bj) else { return };
            if gs == t {
                self.entries(idx, i2, k + 1);
            } else if gs == usize::MAX && !self.gamma_used[t] {
                self.bind_symbol(sym, t, |st| st.entries(idx, i2, k + 1));
            }
        } else if gs != usize::MAX {
            let Some(&(c, _)) = self.qrow[i2].iter().find(|&&(_, t)| t == gs) else { return };
            if !self.beta_used[c] {
                self.bind_col(j, c, |st| st.entries(idx, i2, k + 1));
            }
        } else {
            let qrow = self.qrow;
            for &(c, t) in qrow[i2].iter() {
                if !self.beta_used[c] && !self.gamma_used[t] {
                    self.bind_col(j, c, |st| st.bind_symbol(sym, t, |st| st.entries(idx, i2, k + 1)));
                }
            }
        }
    }

    fn bind_col(&mut self, j: usize, c: usize, f: impl FnOnce(&mut Self)) {
        self.beta[j] = c;
        self.beta_used[c] = true;
        f(self);
        self.beta[j] = usize::MAX;
        self.beta_used[c] = false;
    }

    fn bind_symbol(&mut self, k: usize, t: usize, f: impl FnOnce(&mut Self)) {
        self.gamma[k] = t;
        self.gamma_used[t] = true;
        f(self);
        self.gamma[k] = usize::MAX;
        self.gamma_used[t] = false;
    }
}

/// Sizes related to the classes of `p`: its isotopism class, its main class,
/// and the number of isotopism classes inside that main class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSizes {
    pub isotopism_class: BigUint,
    pub main_class: BigUint,
    pub isotopism_classes_in_main: BigUint,
}

fn exact_div(a: &BigUint, b: &BigUint, what: &str) -> BigUint {
    let (q, rem) = a.div_rem(b);
    assert!(rem.is_zero(), "inexact division computing {what}");
    q
}

pub fn class_sizes(p: &Plr) -> Result<ClassSizes> {
    let shape = p.shape();
    let [r, s, n] = shape.dims();
    let group = factorial(r) * factorial(s) * factorial(n);
    let auto = count_isotopisms(p, p)?;
    let pis = stabilizing_permutations(shape);
    let mut autopara = BigUint::zero();
    for pi in &pis {
        autopara += count_isotopisms(&parastrophe(p, pi)?, p)?;
    }
    let stab = BigUint::from(pis.len());
    Ok(ClassSizes {
        isotopism_class: exact_div(&group, &auto, "isotopism class size"),
        main_class: exact_div(&(&stab * &group), &autopara, "main class size"),
        isotopism_classes_in_main: exact_div(&(&stab * &auto), &autopara, "classes per main class"),
    })
}
