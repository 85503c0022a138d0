//! Inclusion-exclusion over clash graphs.
//!
//! `f_m = m! #PLR(r,s,n;m)` is a signed sum over graphs without isolated
//! vertices, each weighted by `P(G)`, a sum over 4-edge-colorings. A graph
//! with `v` vertices and `c` components only reaches degree `3m - 2(v - c)`,
//! so the graphs with `v - c` at most `k` give every monomial of degree at
//! least `3m - 2k - 1`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::canon::{automorphism_count, canonical_form, connected_components, ColoredGraph};
use crate::error::{Error, Result};
use crate::perm::factorial;
use crate::poly::TriPoly;

/// Largest vertex count for labeled enumeration.
pub const MAX_LABELED_VERTICES: usize = 7;
/// Largest edge count for which `P(G)` is summed directly.
pub const MAX_COLORED_EDGES: usize = 12;

/// Edge colors of a coloring: deleting red, blue or green edges gives
/// `H1`, `H2` or `H3`; black edges stay in all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeColor {
    Red,
    Blue,
    Green,
    Black,
}

/// A color for every edge of a graph, in the order of [`ColoredGraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    pub assignment: Vec<EdgeColor>,
}

impl EdgeColoring {
    /// The coloring numbered `index` in base 4, first edge least significant.
    pub fn from_index(edges: usize, mut index: u64) -> Self {
        let mut assignment = Vec::with_capacity(edges);
        for _ in 0..edges {
            assignment.push(match index & 3 {
                0 => EdgeColor::Red,
                1 => EdgeColor::Blue,
                2 => EdgeColor::Green,
                _ => EdgeColor::Black,
            });
            index >>= 2;
        }
        EdgeColoring { assignment }
    }

    pub fn black_edges(&self) -> usize {
        self.assignment.iter().filter(|&&c| c == EdgeColor::Black).count()
    }
}

/// An unlabeled graph without isolated vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphClass {
    pub graph: ColoredGraph,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub aut_size: BigUint,
}

impl GraphClass {
    fn new(graph: ColoredGraph, aut_size: BigUint) -> Self {
        let vertices = graph.vertex_count();
        GraphClass {
            vertices,
            edges: graph.edge_count(),
            components: if vertices == 0 { 0 } else { connected_components(&graph) },
            aut_size,
            graph,
        }
    }

    /// `v - c(G)`, which controls the degree reached by the graph.
    pub fn rank(&self) -> usize {
        self.vertices - self.components
    }
}

/// One graph per isomorphism class without isolated vertices, for 0 and
/// 2..=`max_vertices` vertices, by enumerating labeled graphs.
pub fn graphs_no_isolated(max_vertices: usize) -> Result<Vec<GraphClass>> {
    if max_vertices > MAX_LABELED_VERTICES {
        return Err(Error::SizeLimit(format!("labeled enumeration is limited to {MAX_LABELED_VERTICES} vertices")));
    }
    let mut out = vec![GraphClass::new(ColoredGraph::uniform(0)?, BigUint::one())];
    for v in 2..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let mut seen: BTreeMap<Vec<u8>, ColoredGraph> = BTreeMap::new();
        for mask in 1u64..1 << pairs.len() {
            let mut deg = vec![0u8; v];
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    deg[a] += 1;
                    deg[b] += 1;
                }
            }
            if deg.contains(&0) {
                continue;
            }
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            let g = ColoredGraph::from_edges(vec![0; v], &edges)?;
            let code = canonical_form(&g).code;
            seen.entry(code).or_insert(g);
        }
        for g in seen.into_values() {
            let aut = automorphism_count(&g);
            out.push(GraphClass::new(g, aut));
        }
    }
    Ok(out)
}

/// Every graph without isolated vertices and with `v - c(G) <= max_rank`,
/// empty graph first, built as disjoint unions of connected graphs.
pub fn graphs_by_rank(max_rank: usize) -> Result<Vec<GraphClass>> {
    let connected: Vec<GraphClass> = graphs_no_isolated((max_rank + 1).min(MAX_LABELED_VERTICES))?
        .into_iter()
        .filter(|g| g.components == 1)
        .collect();
    if max_rank + 1 > MAX_LABELED_VERTICES {
        return Err(Error::SizeLimit(format!("rank {max_rank} needs larger connected graphs")));
    }
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    unions(&connected, 0, max_rank, &mut chosen, &mut out)?;
    Ok(out)
}

fn unions(
    parts: &[GraphClass],
    from: usize,
    budget: usize,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<GraphClass>,
) -> Result<()> {
    out.push(disjoint_union(parts, chosen)?);
    for i in from..parts.len() {
        let cost = parts[i].rank();
        let mut k = 1;
        while cost * k <= budget {
            chosen.push((i, k));
            unions(parts, i + 1, budget - cost * k, chosen, out)?;
            chosen.pop();
            k += 1;
        }
    }
    Ok(())
}

fn disjoint_union(parts: &[GraphClass], chosen: &[(usize, usize)]) -> Result<GraphClass> {
    let total: usize = chosen.iter().map(|&(i, k)| parts[i].vertices * k).sum();
    let mut g = ColoredGraph::uniform(total)?;
    let mut aut = BigUint::one();
    let mut offset = 0;
    for &(i, k) in chosen {
        let p = &parts[i];
        for _ in 0..k {
            for (a, b) in p.graph.edges() {
                g.add_edge(offset + a, offset + b)?;
            }
            offset += p.vertices;
            aut *= &p.aut_size;
        }
        aut *= factorial(k);
    }
    Ok(GraphClass::new(g, aut))
}

fn find(parent: &mut [u8], mut x: u8) -> u8 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

/// `P(G) = sum over colorings of (-2)^b r^(c(H1)-1) s^(c(H2)-1) n^(c(H3)-1)`.
pub fn p_of_g(g: &ColoredGraph) -> Result<TriPoly> {
    let edges = g.edges();
    let e = edges.len();
    let v = g.vertex_count();
    if e > MAX_COLORED_EDGES {
        return Err(Error::SizeLimit(format!("P(G) enumerates 4^e colorings; at most {MAX_COLORED_EDGES} edges")));
    }
    if v == 0 {
        return Ok(TriPoly::zero());
    }
    let dim = v;
    let mut acc = vec![0i64; dim * dim * dim];
    let mut parents = [vec![0u8; v], vec![0u8; v], vec![0u8; v]];
    for index in 0..1u64 << (2 * e) {
        let mut comps = [v; 3];
        for (h, parent) in parents.iter_mut().enumerate() {
            for (x, p) in parent.iter_mut().enumerate() {
                *p = x as u8;
            }
            for (k, &(a, b)) in edges.iter().enumerate() {
                // H_h loses the edges of color h.
                if (index >> (2 * k)) & 3 == h as u64 {
                    continue;
                }
                let ra = find(parent, a as u8);
                let rb = find(parent, b as u8);
                if ra != rb {
                    parent[ra as usize] = rb;
                    comps[h] -= 1;
                }
            }
        }
        let black = (0..e).filter(|&k| (index >> (2 * k)) & 3 == 3).count() as u32;
        let term = (-2i64).pow(black);
        acc[((comps[0] - 1) * dim + comps[1] - 1) * dim + comps[2] - 1] += term;
    }
    let mut p = TriPoly::zero();
    for (idx, &c) in acc.iter().enumerate() {
        if c != 0 {
            let e = [(idx / (dim * dim)) as u32, (idx / dim % dim) as u32, (idx % dim) as u32];
            p.add_term(e, BigInt::from(c));
        }
    }
    Ok(p)
}

/// The summand of a single coloring, for inspection and testing.
pub fn coloring_term(g: &ColoredGraph, coloring: &EdgeColoring) -> TriPoly {
    let v = g.vertex_count();
    let edges = g.edges();
    let mut exps = [0u32; 3];
    for (h, color) in [EdgeColor::Red, EdgeColor::Blue, EdgeColor::Green].iter().enumerate() {
        let kept: Vec<(usize, usize)> =
            edges.iter().zip(&coloring.assignment).filter(|(_, c)| *c != color).map(|(&e, _)| e).collect();
        let h_graph = ColoredGraph::from_edges(vec![0; v], &kept).expect("subgraph fits");
        exps[h] = connected_components(&h_graph) as u32 - 1;
    }
    TriPoly::monomial(exps, BigInt::from(-2).pow(coloring.black_edges() as u32))
}

/// `sum over G with v vertices of (-1)^e v!/|Aut(G)| P(G)`: the bracket
/// multiplying `C(m,v) (rsn)^(m-v+1)`.
pub fn vertex_block(classes: &[GraphClass], v: usize) -> Result<TriPoly> {
    let mut total = TriPoly::zero();
    for g in classes.iter().filter(|g| g.vertices == v && v > 0) {
        let weight = BigInt::from(factorial(v)) / BigInt::from(g.aut_size.clone());
        let sign = if g.edges % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        total = &total + &p_of_g(&g.graph)?.scale(&(weight * sign));
    }
    Ok(total)
}

fn binomial(m: usize, v: usize) -> BigInt {
    if v > m {
        return BigInt::zero();
    }
    BigInt::from(factorial(m) / (factorial(v) * factorial(m - v)))
}

/// The inclusion-exclusion sum over the given graph classes.
pub fn f_m_from_classes(m: usize, classes: &[GraphClass]) -> Result<TriPoly> {
    let mut total = TriPoly::rsn_pow(m as u32);
    let max_v = classes.iter().map(|g| g.vertices).max().unwrap_or(0);
    for v in 2..=max_v.min(m) {
        let block = vertex_block(classes, v)?;
        let lift = TriPoly::rsn_pow((m - v + 1) as u32).scale(&binomial(m, v));
        total = &total + &(&lift * &block);
    }
    Ok(total)
}

/// `f_m` truncated to the graphs with `v - c(G) <= max_vertices - 1`: every
/// graph whose components all fit within `max_vertices` vertices and that
/// reaches degree `3m - 2 max_vertices + 1`. Exact in all monomials of that
/// degree or more, and exact in full when `m <= max_vertices`.
pub fn f_m_truncated(m: usize, max_vertices: usize) -> Result<TriPoly> {
    if max_vertices < 1 {
        return Ok(TriPoly::rsn_pow(m as u32));
    }
    let classes = graphs_by_rank(max_vertices - 1)?;
    f_m_from_classes(m, &classes)
}

/// Lowest degree at which [`f_m_truncated`] is guaranteed exact.
pub fn exact_degree_floor(m: usize, max_vertices: usize) -> usize {
    (3 * m + 1).saturating_sub(2 * max_vertices)
}
