//! Counting through blocks and chromatic polynomials.
//!
//! The filled cells of a weight-`m` rectangle form an `m`-vertex induced
//! subgraph of the rook's graph, and filling them is a proper coloring with
//! `n` colors. The cell set splits into blocks (connected components), so
//! counts follow from a table of blocks with their automorphism group
//! orders and chromatic polynomials.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::canon::{automorphism_count, bits, canonical_form, ColoredGraph};
use crate::dist::{BigCount, WeightDistribution};
use crate::error::{Error, Result};
use crate::perm::factorial;
use crate::plr::Shape;
use crate::poly::{TriPoly, UniPoly};

/// A 0/1 matrix with at most 64 columns, stored as row bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    row_masks: Vec<u64>,
}

impl BinMatrix {
    pub fn new(rows: usize, cols: usize, row_masks: Vec<u64>) -> Result<Self> {
        if cols > 64 || row_masks.len() != rows {
            return Err(Error::ShapeMismatch(format!("bad {rows}x{cols} matrix")));
        }
        let full = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
        if row_masks.iter().any(|&m| m & !full != 0) {
            return Err(Error::ShapeMismatch("row mask exceeds column count".into()));
        }
        Ok(BinMatrix { rows, cols, row_masks })
    }

    /// Parses rows of `0`/`1` separated by `/`, e.g. `"111/100"`.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.split('/').collect();
        let cols = rows[0].len();
        let mut masks = Vec::with_capacity(rows.len());
        for row in &rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!("ragged matrix {text:?}")));
            }
            let mut m = 0u64;
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '1' => m |= 1 << j,
                    '0' => {}
                    _ => return Err(Error::Invalid(format!("bad matrix {text:?}"))),
                }
            }
            masks.push(m);
        }
        BinMatrix::new(rows.len(), cols, masks)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_masks(&self) -> &[u64] {
        &self.row_masks
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row_masks[i] >> j & 1 == 1
    }

    pub fn ones(&self) -> usize {
        self.row_masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Positions of the ones, row by row.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &m) in self.row_masks.iter().enumerate() {
            out.extend(bits(m).map(|j| (i, j)));
        }
        out
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut masks = vec![0u64; self.cols];
        for (i, j) in self.cells() {
            masks[j] |= 1 << i;
        }
        BinMatrix { rows: self.cols, cols: self.rows, row_masks: masks }
    }

    /// Bipartite graph with row vertices (color 1) then column vertices (color 2).
    pub fn bipartite_graph(&self) -> ColoredGraph {
        let mut colors = vec![1u32; self.rows];
        colors.extend(core::iter::repeat_n(2u32, self.cols));
        let mut g = ColoredGraph::new(colors).expect("matrix graph fits");
        for (i, j) in self.cells() {
            g.add_edge(i, self.rows + j).expect("valid edge");
        }
        g
    }

    /// Canonical representative under row and column permutations, with the
    /// code identifying its class.
    pub fn canonical(&self) -> (BinMatrix, Vec<u8>) {
        let g = self.bipartite_graph();
        let cf = canonical_form(&g);
        let mut masks = vec![0u64; self.rows];
        for (i, j) in self.cells() {
            let ci = cf.relabeling.apply(i);
            let cj = cf.relabeling.apply(self.rows + j) - self.rows;
            masks[ci] |= 1 << cj;
        }
        (BinMatrix { rows: self.rows, cols: self.cols, row_masks: masks }, cf.code)
    }

    /// Order of the group of row and column permutations fixing the matrix.
    pub fn stabilizer_order(&self) -> BigCount {
        automorphism_count(&self.bipartite_graph())
    }

    /// Removes all-zero rows and columns.
    pub fn trimmed(&self) -> BinMatrix {
        let used_cols = self.row_masks.iter().fold(0u64, |a, &m| a | m);
        let col_index: Vec<usize> = bits(used_cols).collect();
        let masks: Vec<u64> = self
            .row_masks
            .iter()
            .filter(|&&m| m != 0)
            .map(|&m| col_index.iter().enumerate().fold(0u64, |a, (k, &j)| a | ((m >> j) & 1) << k))
            .collect();
        BinMatrix { rows: masks.len(), cols: col_index.len(), row_masks: masks }
    }

    /// The connected components of the ones, each trimmed to its own rows and columns.
    pub fn components(&self) -> Vec<BinMatrix> {
        let mut left: Vec<u64> = self.row_masks.clone();
        let mut out = Vec::new();
        while let Some(start) = left.iter().position(|&m| m != 0) {
            let mut rows_in = 1u64 << start;
            let mut cols_in = left[start];
            loop {
                let mut grow_rows = rows_in;
                for (i, &m) in left.iter().enumerate() {
                    if m & cols_in != 0 {
                        grow_rows |= 1 << i;
                    }
                }
                let grow_cols = bits(grow_rows).fold(cols_in, |a, i| a | left[i]);
                if grow_rows == rows_in && grow_cols == cols_in {
                    break;
                }
                rows_in = grow_rows;
                cols_in = grow_cols;
            }
            let masks: Vec<u64> = bits(rows_in).map(|i| left[i]).collect();
            for i in bits(rows_in) {
                left[i] = 0;
            }
            let part = BinMatrix { rows: masks.len(), cols: self.cols, row_masks: masks };
            out.push(part.trimmed());
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.ones() > 0
            && self.row_masks.iter().all(|&m| m != 0)
            && self.row_masks.iter().fold(0u64, |a, &m| a | m).count_ones() as usize == self.cols
            && self.components().len() == 1
    }

    /// Adjacency bitmasks of the rook's-graph subgraph induced by the ones,
    /// vertices numbered as in [`BinMatrix::cells`].
    pub fn rook_graph(&self) -> Vec<u64> {
        let cells = self.cells();
        assert!(cells.len() <= 64, "rook graph limited to 64 cells");
        let mut adj = vec![0u64; cells.len()];
        for (a, &(i, j)) in cells.iter().enumerate() {
            for (b, &(k, l)) in cells.iter().enumerate() {
                if a != b && (i == k || j == l) {
                    adj[a] |= 1 << b;
                }
            }
        }
        adj
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("/")?;
            }
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// A connected block in canonical form with its group order and
/// chromatic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub matrix: BinMatrix,
    pub ones: usize,
    pub aut_size: BigCount,
    pub chromatic: UniPoly,
    /// For square blocks: whether the transpose lies in the same class.
    pub transpose_symmetric: bool,
}

/// Memo table for chromatic polynomials keyed by canonical graph code.
#[derive(Debug, Clone)]
pub struct ChromaticCache {
    map: BTreeMap<Vec<u8>, (UniPoly, u64)>,
    cap: usize,
    tick: u64,
}

/// Default number of memo entries kept.
pub const DEFAULT_CACHE_CAP: usize = 1 << 16;

impl Default for ChromaticCache {
    fn default() -> Self {
        ChromaticCache::with_capacity(DEFAULT_CACHE_CAP)
    }
}

impl ChromaticCache {
    pub fn with_capacity(cap: usize) -> Self {
        ChromaticCache { map: BTreeMap::new(), cap: cap.max(1), tick: 0 }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn get(&mut self, key: &[u8]) -> Option<UniPoly> {
        self.tick += 1;
        let tick = self.tick;
        self.map.get_mut(key).map(|e| {
            e.1 = tick;
            e.0.clone()
        })
    }

    fn put(&mut self, key: Vec<u8>, p: UniPoly) {
        self.tick += 1;
        if self.map.len() >= self.cap {
            // Drop the least recently used half.
            let mut ticks: Vec<u64> = self.map.values().map(|e| e.1).collect();
            ticks.sort_unstable();
            let cut = ticks[ticks.len() / 2];
            self.map.retain(|_, e| e.1 > cut);
        }
        self.map.insert(key, (p, self.tick));
    }

    /// Chromatic polynomial of the graph with the given adjacency bitmasks.
    pub fn graph_chromatic(&mut self, adj: &[u64]) -> UniPoly {
        chromatic_rec(adj.to_vec(), self)
    }

    pub fn rook_chromatic(&mut self, m: &BinMatrix) -> UniPoly {
        self.graph_chromatic(&m.rook_graph())
    }
}

/// Chromatic polynomial of the rook's-graph subgraph induced by the ones of
/// `m`, by deletion and contraction.
pub fn rook_chromatic(m: &BinMatrix) -> UniPoly {
    ChromaticCache::default().rook_chromatic(m)
}

fn remove_vertex(adj: &mut Vec<u64>, v: usize) {
    adj.remove(v);
    let low = (1u64 << v) - 1;
    for a in adj.iter_mut() {
        *a = (*a & low) | ((*a >> 1) & !low);
    }
}

fn component_of(adj: &[u64], start: usize) -> u64 {
    let mut comp = 1u64 << start;
    let mut frontier = comp;
    while frontier != 0 {
        let next = bits(frontier).fold(0u64, |a, v| a | adj[v]);
        frontier = next & !comp;
        comp |= next;
    }
    comp
}

fn induced(adj: &[u64], set: u64) -> Vec<u64> {
    let idx: Vec<usize> = bits(set).collect();
    idx.iter().map(|&v| idx.iter().enumerate().fold(0u64, |a, (k, &u)| a | ((adj[v] >> u) & 1) << k)).collect()
}

fn chromatic_rec(mut adj: Vec<u64>, cache: &mut ChromaticCache) -> UniPoly {
    let mut factor = UniPoly::constant(1);
    // Strip simplicial vertices: a vertex whose neighbors form a clique of
    // size d contributes the factor (x - d).
    'strip: loop {
        for v in 0..adj.len() {
            let nb = adj[v];
            if bits(nb).all(|u| (adj[u] | 1 << u) & nb == nb) {
                let d = nb.count_ones() as i64;
                factor = &factor * &UniPoly::from_i64(&[-d, 1]);
                remove_vertex(&mut adj, v);
                continue 'strip;
            }
        }
        break;
    }
    let n = adj.len();
    if n == 0 {
        return factor;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let first = component_of(&adj, 0);
    if first != full {
        let rest = induced(&adj, full & !first);
        let a = chromatic_rec(induced(&adj, first), cache);
        let b = chromatic_rec(rest, cache);
        return &factor * &(&a * &b);
    }
    let mut g = ColoredGraph::uniform(n).expect("at most 64 vertices");
    for (v, &m) in adj.iter().enumerate() {
        for u in bits(m) {
            if u > v {
                g.add_edge(v, u).expect("valid edge");
            }
        }
    }
    let key = canonical_form(&g).code;
    if let Some(p) = cache.get(&key) {
        return &factor * &p;
    }
    let u = (0..n).min_by_key(|&v| adj[v].count_ones()).expect("non-empty");
    let v = bits(adj[u]).max_by_key(|&w| adj[w].count_ones()).expect("u has a neighbor");
    let mut deleted = adj.clone();
    deleted[u] &= !(1 << v);
    deleted[v] &= !(1 << u);
    let mut contracted = adj;
    let merged = (contracted[u] | contracted[v]) & !(1 << u) & !(1 << v);
    contracted[u] = merged;
    for w in bits(merged) {
        contracted[w] |= 1 << u;
    }
    remove_vertex(&mut contracted, v);
    let p = &chromatic_rec(deleted, cache) - &chromatic_rec(contracted, cache);
    cache.put(key, p.clone());
    &factor * &p
}

/// Chromatic polynomial as `sum_k a_k [x]_k`, where `a_k` counts partitions
/// of the vertices into `k` independent sets. Exponential in the vertex
/// count; used to cross-check deletion and contraction.
pub fn chromatic_by_partitions(adj: &[u64]) -> UniPoly {
    let n = adj.len();
    assert!(n <= 20, "partition count limited to 20 vertices");
    let size = 1usize << n;
    let mut independent = vec![false; size];
    independent[0] = true;
    for set in 1..size {
        let v = set.trailing_zeros() as usize;
        let rest = set & (set - 1);
        independent[set] = independent[rest] && (adj[v] as usize & rest) == 0;
    }
    // parts[k][set]: partitions of `set` into k independent sets.
    let mut parts = vec![vec![BigUint::zero(); size]; n + 1];
    parts[0][0] = BigUint::one();
    for k in 1..=n {
        for set in 1..size {
            let low = set & set.wrapping_neg();
            let rest = set ^ low;
            let mut sub = rest;
            let mut acc = BigUint::zero();
            loop {
                let part = sub | low;
                if independent[part] {
                    acc += &parts[k - 1][set ^ part];
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            parts[k][set] = acc;
        }
    }
    let mut p = UniPoly::zero();
    for (k, part) in parts.iter().enumerate() {
        let a = &part[size - 1];
        if !a.is_zero() {
            p = &p + &UniPoly::falling_factorial(k).scale(&BigInt::from(a.clone()));
        }
    }
    p
}

/// Blocks with at most `max_ones` ones, rows never exceeding columns.
/// Square blocks appear once per class; a square block and its transpose
/// are both listed when they are not equivalent.
pub fn generate_blocks(max_ones: usize) -> Vec<Block> {
    generate_blocks_within(max_ones, max_ones, max_ones)
}

/// As [`generate_blocks`], restricted to blocks with at most `max_rows`
/// rows and `max_cols` columns (`max_rows <= max_cols`).
pub fn generate_blocks_within(max_ones: usize, max_rows: usize, max_cols: usize) -> Vec<Block> {
    let mut cache = ChromaticCache::default();
    generate_blocks_with_cache(max_ones, max_rows, max_cols, &mut cache)
}

pub fn generate_blocks_with_cache(
    max_ones: usize,
    max_rows: usize,
    max_cols: usize,
    cache: &mut ChromaticCache,
) -> Vec<Block> {
    let (max_rows, max_cols) = (max_rows.min(max_cols), max_rows.max(max_cols));
    let mut classes: Vec<BinMatrix> = Vec::new();
    if max_ones == 0 || max_rows == 0 {
        return Vec::new();
    }
    let mut layer: BTreeMap<Vec<u8>, BinMatrix> = BTreeMap::new();
    let single = BinMatrix::new(1, 1, vec![1]).expect("1x1");
    let (c, code) = single.canonical();
    layer.insert(code, c);
    for ones in 1..=max_ones {
        classes.extend(layer.values().cloned());
        if ones == max_ones {
            break;
        }
        let mut next: BTreeMap<Vec<u8>, BinMatrix> = BTreeMap::new();
        for m in layer.values() {
            for grown in grow(m) {
                let fits = (grown.rows <= max_rows && grown.cols <= max_cols)
                    || (grown.rows <= max_cols && grown.cols <= max_rows);
                if fits {
                    let (c, code) = grown.canonical();
                    next.entry(code).or_insert(c);
                }
            }
        }
        layer = next;
    }
    let mut blocks = Vec::new();
    for m in classes {
        if m.rows > m.cols || m.rows > max_rows || m.cols > max_cols {
            continue;
        }
        let transpose_symmetric = m.is_square() && m.transpose().canonical().1 == m.canonical().1;
        blocks.push(Block {
            ones: m.ones(),
            aut_size: m.stabilizer_order(),
            chromatic: cache.rook_chromatic(&m),
            transpose_symmetric,
            matrix: m,
        });
    }
    blocks
}

/// Every connected matrix obtained by adding one 1 that shares a row or a
/// column with an existing 1.
fn grow(m: &BinMatrix) -> Vec<BinMatrix> {
    let mut out = Vec::new();
    for i in 0..m.rows {
        for j in 0..m.cols {
            if !m.get(i, j) {
                let mut masks = m.row_masks.clone();
                masks[i] |= 1 << j;
                out.push(BinMatrix::new(m.rows, m.cols, masks).expect("same size"));
            }
        }
        if m.cols < 64 {
            let mut masks = m.row_masks.clone();
            masks[i] |= 1 << m.cols;
            out.push(BinMatrix::new(m.rows, m.cols + 1, masks).expect("one more column"));
        }
    }
    for j in 0..m.cols {
        let mut masks = m.row_masks.clone();
        masks.push(1 << j);
        out.push(BinMatrix::new(m.rows + 1, m.cols, masks).expect("one more row"));
    }
    out
}

/// A block placed in a fixed orientation.
#[derive(Debug, Clone)]
struct Oriented {
    rows: usize,
    cols: usize,
    ones: usize,
    aut: BigUint,
    chromatic: UniPoly,
}

fn orientations(blocks: &[Block], max_rows: usize, max_cols: usize) -> Vec<Oriented> {
    let mut out = Vec::new();
    for b in blocks {
        let (r, c) = (b.matrix.rows(), b.matrix.cols());
        if r <= max_rows && c <= max_cols {
            out.push(Oriented {
                rows: r,
                cols: c,
                ones: b.ones,
                aut: b.aut_size.clone(),
                chromatic: b.chromatic.clone(),
            });
        }
        if r != c && c <= max_rows && r <= max_cols {
            out.push(Oriented {
                rows: c,
                cols: r,
                ones: b.ones,
                aut: b.aut_size.clone(),
                chromatic: b.chromatic.clone(),
            });
        }
    }
    out
}

/// One multiset of oriented blocks: its extents, the product of the block
/// polynomials, and the stabilizer denominator.
struct Assembly {
    e_row: usize,
    e_col: usize,
    product: UniPoly,
    denominator: BigUint,
}

/// Visits every multiset of oriented blocks with exactly `m` ones spanning
/// at most `max_rows` rows and `max_cols` columns.
fn for_each_multiset(blocks: &[Oriented], m: usize, max_rows: usize, max_cols: usize, f: &mut impl FnMut(&Assembly)) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        blocks: &[Oriented],
        idx: usize,
        left: usize,
        rows: usize,
        cols: usize,
        limits: (usize, usize),
        product: &UniPoly,
        den: &BigUint,
        f: &mut impl FnMut(&Assembly),
    ) {
        if left == 0 {
            f(&Assembly { e_row: rows, e_col: cols, product: product.clone(), denominator: den.clone() });
            return;
        }
        for i in idx..blocks.len() {
            let b = &blocks[i];
            let mut k = 1;
            let mut p = product.clone();
            let mut d = den.clone();
            while b.ones * k <= left && rows + b.rows * k <= limits.0 && cols + b.cols * k <= limits.1 {
                p = &p * &b.chromatic;
                d = d * &b.aut * k;
                go(blocks, i + 1, left - b.ones * k, rows + b.rows * k, cols + b.cols * k, limits, &p, &d, f);
                k += 1;
            }
        }
    }
    go(blocks, 0, m, 0, 0, (max_rows, max_cols), &UniPoly::constant(1), &BigUint::one(), f);
}

fn falling(x: usize, k: usize) -> BigUint {
    if k > x {
        return BigUint::zero();
    }
    ((x - k + 1)..=x).fold(BigUint::one(), |a, v| a * v)
}

fn to_count(v: BigInt) -> BigCount {
    assert!(!v.is_negative(), "block assembly produced a negative count");
    v.to_biguint().expect("non-negative")
}

/// `#PLR(r, s, n; m)` assembled from a block table.
pub fn count_via_blocks(shape: Shape, m: usize) -> Result<BigCount> {
    let [r, s, _] = shape.dims();
    if m > r * s {
        return Ok(BigCount::zero());
    }
    let blocks = generate_blocks_within(m, r.min(s), r.max(s));
    Ok(count_from_table(&blocks, shape, m))
}

/// Weight distribution of `shape` from a single block table.
pub fn distribution_via_blocks(shape: Shape) -> Result<WeightDistribution> {
    let [r, s, _] = shape.dims();
    let n = shape.n();
    let top = (r * s).min(r * n).min(s * n);
    let blocks = generate_blocks_within(top, r.min(s), r.max(s));
    let mut dist = WeightDistribution::zeros(shape);
    for m in 0..=top {
        dist.add_at(m, &count_from_table(&blocks, shape, m));
    }
    Ok(dist)
}

/// Assembles `#PLR(r, s, n; m)` from blocks covering at least weight `m`
/// within the shape.
pub fn count_from_table(blocks: &[Block], shape: Shape, m: usize) -> BigCount {
    let [r, s, n] = shape.dims();
    if m == 0 {
        return BigCount::one();
    }
    let oriented = orientations(blocks, r, s);
    let mut lcm = BigUint::one();
    for_each_multiset(&oriented, m, r, s, &mut |a| lcm = lcm.lcm(&a.denominator));
    let mut total = BigInt::zero();
    let n = BigInt::from(n);
    for_each_multiset(&oriented, m, r, s, &mut |a| {
        let weight = falling(r, a.e_row) * falling(s, a.e_col) * (&lcm / &a.denominator);
        total += a.product.eval(&n) * BigInt::from(weight);
    });
    let (q, rem) = total.div_rem(&BigInt::from(lcm));
    assert!(rem.is_zero(), "block assembly is not integral");
    to_count(q)
}

/// `f_m(r, s, n) = m! #PLR(r, s, n; m)` as a polynomial.
pub fn f_m_polynomial(m: usize) -> TriPoly {
    let blocks = generate_blocks(m);
    f_m_from_table(&blocks, m)
}

/// As [`f_m_polynomial`] from a table holding every block with at most `m` ones.
pub fn f_m_from_table(blocks: &[Block], m: usize) -> TriPoly {
    if m == 0 {
        return TriPoly::constant(1);
    }
    let oriented = orientations(blocks, m, m);
    let mut lcm = BigUint::one();
    for_each_multiset(&oriented, m, m, m, &mut |a| lcm = lcm.lcm(&a.denominator));
    let mut groups: BTreeMap<(usize, usize), UniPoly> = BTreeMap::new();
    for_each_multiset(&oriented, m, m, m, &mut |a| {
        let scaled = a.product.scale(&BigInt::from(&lcm / &a.denominator));
        let slot = groups.entry((a.e_row, a.e_col)).or_insert_with(UniPoly::zero);
        *slot = &*slot + &scaled;
    });
    let mut total = TriPoly::zero();
    for ((er, ec), q) in groups {
        let term = &(&UniPoly::falling_factorial(er).in_variable(0) * &UniPoly::falling_factorial(ec).in_variable(1))
            * &q.in_variable(2);
        total = &total + &term;
    }
    let scaled = total.scale(&BigInt::from(factorial(m)));
    scaled.div_exact(&BigInt::from(lcm)).expect("block assembly is not integral")
}

/// Order of the stabilizer of `m` under row and column permutations,
/// computed from its components.
pub fn stabilizer_from_blocks(m: &BinMatrix) -> BigCount {
    let comps = m.components();
    let e_row: usize = comps.iter().map(|c| c.rows()).sum();
    let e_col: usize = comps.iter().map(|c| c.cols()).sum();
    let mut g = factorial(m.rows() - e_row) * factorial(m.cols() - e_col);
    let mut classes: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for c in &comps {
        g *= c.stabilizer_order();
        *classes.entry(c.canonical().1).or_insert(0) += 1;
    }
    for k in classes.values() {
        g *= factorial(*k);
    }
    g
}

/// A line of a block table: `rows cols masks aut coeffs`, masks and
/// coefficients comma separated.
pub fn block_to_line(b: &Block) -> String {
    let masks: Vec<String> = b.matrix.row_masks().iter().map(|m| format!("{m}")).collect();
    let coeffs: Vec<String> = b.chromatic.coeffs().iter().map(|c| format!("{c}")).collect();
    format!("{} {} {} {} {}", b.matrix.rows(), b.matrix.cols(), masks.join(","), b.aut_size, coeffs.join(","))
}

pub fn block_from_line(line: &str) -> Result<Block> {
    let bad = || Error::Invalid(format!("bad block line {line:?}"));
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != 5 {
        return Err(bad());
    }
    let rows: usize = f[0].parse().map_err(|_| bad())?;
    let cols: usize = f[1].parse().map_err(|_| bad())?;
    let masks = f[2].split(',').map(|x| x.parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    let matrix = BinMatrix::new(rows, cols, masks)?;
    let aut_size: BigUint = f[3].parse().map_err(|_| bad())?;
    let coeffs = f[4].split(',').map(|x| x.parse::<BigInt>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    let transpose_symmetric = matrix.is_square() && matrix.transpose().canonical().1 == matrix.canonical().1;
    Ok(Block { ones: matrix.ones(), matrix, aut_size, chromatic: UniPoly::from_coeffs(coeffs), transpose_symmetric })
}
