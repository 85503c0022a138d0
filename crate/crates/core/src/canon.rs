//! Canonical labeling and automorphism groups of small vertex-colored graphs.
//!
//! The search refines an ordered partition of the vertices to an equitable
//! one, then individualizes vertices of the first non-singleton cell in
//! increasing index order. Leaves are compared by their refinement trace and
//! relabeled adjacency; the least one defines the canonical form. Leaves with
//! equal adjacency yield automorphisms, which prune sibling branches and give
//! the group order through the orbit-stabilizer theorem along the first path.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// Simple undirected graph with a color per vertex, at most 64 vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    colors: Vec<u32>,
    adj: Vec<u64>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<u32>) -> Result<Self> {
        if colors.len() > MAX_VERTICES {
            return Err(Error::SizeLimit(format!(
                "graphs are limited to {MAX_VERTICES} vertices, got {}",
                colors.len()
            )));
        }
        let n = colors.len();
        Ok(ColoredGraph { colors, adj: vec![0; n] })
    }

    /// Graph with `n` vertices of one color.
    pub fn uniform(n: usize) -> Result<Self> {
        ColoredGraph::new(vec![0; n])
    }

    pub fn from_edges(colors: Vec<u32>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = ColoredGraph::new(colors)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n || u == v {
            return Err(Error::Invalid(format!("bad edge ({u},{v}) on {n} vertices")));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Neighbor bitmask of `v`.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            for v in bits(self.adj[u]) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// The graph in which vertex `v` is renamed `p(v)`.
    pub fn relabel(&self, p: &Permutation) -> ColoredGraph {
        let n = self.vertex_count();
        let mut colors = vec![0; n];
        let mut adj = vec![0u64; n];
        for v in 0..n {
            colors[p.apply(v)] = self.colors[v];
            for u in bits(self.adj[v]) {
                adj[p.apply(v)] |= 1 << p.apply(u);
            }
        }
        ColoredGraph { colors, adj }
    }
}

/// Canonical relabeling together with the code it produces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    /// Sends each vertex to its canonical position.
    pub relabeling: Permutation,
    /// Vertex count, colors in canonical order, then adjacency rows.
    pub code: Vec<u8>,
}

/// Iterates the set bits of `m` in increasing order.
pub fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn mix(h: u64, x: u64) -> u64 {
    let h = (h ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    h ^ (h >> 29)
}

/// Refines `cells` to the coarsest equitable refinement, returning a hash of
/// the label-independent refinement trace.
fn refine(g: &ColoredGraph, cells: &mut Vec<u64>) -> u64 {
    let mut h = 0x51_7cc1_b727_220a;
    let mut counts = [0u32; MAX_VERTICES];
    loop {
        let mut changed = false;
        let mut w = 0;
        while w < cells.len() {
            let splitter = cells[w];
            let mut i = 0;
            while i < cells.len() {
                let cell = cells[i];
                if cell & (cell - 1) == 0 {
                    i += 1;
                    continue;
                }
                let mut lo = u32::MAX;
                let mut hi = 0;
                for v in bits(cell) {
                    let c = (g.adj[v] & splitter).count_ones();
                    counts[v] = c;
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                if lo == hi {
                    i += 1;
                    continue;
                }
                let mut parts: Vec<(u32, u64)> = Vec::new();
                for v in bits(cell) {
                    match parts.iter_mut().find(|p| p.0 == counts[v]) {
                        Some(p) => p.1 |= 1 << v,
                        None => parts.push((counts[v], 1 << v)),
                    }
                }
                parts.sort_unstable_by_key(|p| p.0);
                h = mix(h, (w as u64) << 40 | (i as u64) << 20 | parts.len() as u64);
                for p in &parts {
                    h = mix(h, (p.0 as u64) << 32 | p.1.count_ones() as u64);
                }
                let k = parts.len();
                cells.splice(i..=i, parts.into_iter().map(|p| p.1));
                i += k;
                changed = true;
            }
            w += 1;
        }
        if !changed {
            break;
        }
    }
    h = mix(h, cells.len() as u64);
    for c in cells.iter() {
        h = mix(h, c.count_ones() as u64);
    }
    h
}

struct Leaf {
    trace: Vec<u64>,
    rows: Vec<u64>,
    lab: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a ColoredGraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<usize>>,
}

fn prefix_cmp(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

fn divergence(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn search(&mut self, cells: &[u64], trace: &mut Vec<u64>, prefix: &mut Vec<usize>) -> Option<usize> {
        let eq_first =
            self.first.as_ref().is_none_or(|f| f.trace.len() >= trace.len() && f.trace[..trace.len()] == trace[..]);
        if !eq_first {
            if let Some(b) = &self.best {
                if prefix_cmp(trace, &b.trace) == Ordering::Greater {
                    return None;
                }
            }
        }
        let n = self.g.vertex_count();
        if cells.len() == n {
            return self.leaf(cells, trace, prefix);
        }
        let target = cells.iter().position(|c| c & (c - 1) != 0).expect("non-discrete");
        let cell = cells[target];
        let mut tried = 0u64;
        for w in bits(cell) {
            if tried != 0 && self.known_equivalent(prefix, w, tried) {
                continue;
            }
            tried |= 1 << w;
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << w);
            child.push(cell & !(1 << w));
            child.extend_from_slice(&cells[target + 1..]);
            let h = refine(self.g, &mut child);
            trace.push(h);
            prefix.push(w);
            let jump = self.search(&child, trace, prefix);
            trace.pop();
            prefix.pop();
            if let Some(level) = jump {
                if level < prefix.len() {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u64], trace: &[u64], prefix: &[usize]) -> Option<usize> {
        let n = self.g.vertex_count();
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let mut pos = vec![0usize; n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        let rows: Vec<u64> = lab.iter().map(|&v| bits(self.g.adj[v]).fold(0u64, |acc, u| acc | 1 << pos[u])).collect();
        let leaf = Leaf { trace: trace.to_vec(), rows, lab, path: prefix.to_vec() };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                trace: leaf.trace.clone(),
                rows: leaf.rows.clone(),
                lab: leaf.lab.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.rows == leaf.rows {
            let gamma = automorphism(&first.lab, &leaf.lab);
            let level = divergence(&first.path, &leaf.path);
            self.gens.push(gamma);
            return Some(level);
        }
        let best = self.best.as_ref().expect("best leaf");
        let ord = leaf.trace.cmp(&best.trace).then_with(|| leaf.rows.cmp(&best.rows));
        match ord {
            Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            Ordering::Equal => {
                let gamma = automorphism(&best.lab, &leaf.lab);
                let level = divergence(&best.path, &leaf.path);
                self.gens.push(gamma);
                Some(level)
            }
            Ordering::Greater => None,
        }
    }

    /// Whether `w` lies in the orbit of a vertex in `tried` under the stored
    /// automorphisms that fix `prefix` pointwise.
    fn known_equivalent(&self, prefix: &[usize], w: usize, tried: u64) -> bool {
        let orbit = orbit_of(&self.gens, prefix, w, self.g.vertex_count());
        orbit & tried != 0
    }
}

/// Maps the vertex at each position of leaf `a` to the vertex at the same
/// position of leaf `b`.
fn automorphism(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut gamma = vec![0; a.len()];
    for (x, y) in a.iter().zip(b) {
        gamma[*x] = *y;
    }
    gamma
}

/// Orbit of `w` under the generators that fix every vertex of `prefix`.
fn orbit_of(gens: &[Vec<usize>], prefix: &[usize], w: usize, n: usize) -> u64 {
    let active: Vec<&Vec<usize>> = gens.iter().filter(|g| prefix.iter().all(|&p| g[p] == p)).collect();
    let mut orbit = 1u64 << w;
    let mut frontier = orbit;
    while frontier != 0 {
        let mut next = 0u64;
        for v in bits(frontier) {
            for g in &active {
                next |= 1 << g[v];
            }
        }
        frontier = next & !orbit;
        orbit |= next;
    }
    debug_assert!(n == 64 || orbit >> n == 0);
    orbit
}

struct Outcome {
    lab: Vec<usize>,
    rows: Vec<u64>,
    first_path: Vec<usize>,
    gens: Vec<Vec<usize>>,
}

fn run(g: &ColoredGraph) -> Outcome {
    let n = g.vertex_count();
    let mut palette: Vec<u32> = g.colors.clone();
    palette.sort_unstable();
    palette.dedup();
    let mut cells: Vec<u64> =
        palette.iter().map(|&c| (0..n).filter(|&v| g.colors[v] == c).fold(0u64, |m, v| m | 1 << v)).collect();
    let mut trace = vec![refine(g, &mut cells)];
    let mut search = Search { g, first: None, best: None, gens: Vec::new() };
    if n > 0 {
        search.search(&cells, &mut trace, &mut Vec::new());
    }
    let first_path = search.first.map(|f| f.path).unwrap_or_default();
    let best = search.best;
    Outcome {
        lab: best.as_ref().map(|b| b.lab.clone()).unwrap_or_default(),
        rows: best.map(|b| b.rows).unwrap_or_default(),
        first_path,
        gens: search.gens,
    }
}

/// Canonical form of `g`: isomorphic colored graphs receive equal codes.
pub fn canonical_form(g: &ColoredGraph) -> CanonicalForm {
    let out = run(g);
    let n = g.vertex_count();
    let mut pos = vec![0usize; n];
    for (i, &v) in out.lab.iter().enumerate() {
        pos[v] = i;
    }
    let mut code = Vec::with_capacity(1 + 4 * n + 8 * n);
    code.push(n as u8);
    for &v in &out.lab {
        code.extend_from_slice(&g.colors[v].to_be_bytes());
    }
    for row in &out.rows {
        code.extend_from_slice(&row.to_be_bytes());
    }
    CanonicalForm { relabeling: Permutation::from_images(pos).expect("canonical labeling is a bijection"), code }
}

/// Order of the color-preserving automorphism group of `g`.
pub fn automorphism_count(g: &ColoredGraph) -> BigUint {
    let out = run(g);
    let n = g.vertex_count();
    let mut order = BigUint::one();
    for k in 0..out.first_path.len() {
        let orbit = orbit_of(&out.gens, &out.first_path[..k], out.first_path[k], n);
        order *= orbit.count_ones();
    }
    order
}

/// Number of connected components; isolated vertices count individually.
pub fn connected_components(g: &ColoredGraph) -> usize {
    let n = g.vertex_count();
    let mut unseen: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut comps = 0;
    while unseen != 0 {
        let start = unseen.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0u64;
            for v in bits(frontier) {
                next |= g.adj[v];
            }
            frontier = next & !comp;
            comp |= next;
        }
        unseen &= !comp;
        comps += 1;
    }
    comps
}
