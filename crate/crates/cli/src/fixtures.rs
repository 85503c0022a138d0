//! Published reference tables, embedded from `fixtures/*.csv`.
//!
//! Count tables use long format `r,s,n,m,count,note`, with `m = total`
//! for column totals. Where a printed cell is wrong or missing, the file
//! holds the arithmetic value and the `note` column says so.

use std::collections::BTreeMap;

use serde::Deserialize;

use plr_core::chromatic::BinMatrix;
use plr_core::{BigCount, Shape, TriPoly, UniPoly, WeightDistribution};

use crate::error::{CliError, CliResult};

pub const PLR_COUNTS: &str = include_str!("../fixtures/plr_counts.csv");
pub const ISOM: &str = include_str!("../fixtures/isom.csv");
pub const ISOT: &str = include_str!("../fixtures/isot.csv");
pub const MAIN_CLASSES: &str = include_str!("../fixtures/main_classes.csv");
pub const UNBOUNDED: &str = include_str!("../fixtures/unbounded.csv");
pub const BLOCKS: &str = include_str!("../fixtures/blocks.csv");
pub const GRAPH_POLYS: &str = include_str!("../fixtures/graph_polys.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountTable {
    Plr,
    Isom,
    Isot,
    MainClasses,
}

impl CountTable {
    fn source(self) -> &'static str {
        match self {
            CountTable::Plr => PLR_COUNTS,
            CountTable::Isom => ISOM,
            CountTable::Isot => ISOT,
            CountTable::MainClasses => MAIN_CLASSES,
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawCount {
    r: usize,
    s: usize,
    n: usize,
    m: String,
    count: String,
    note: String,
}

/// One cell of a count table; `m = None` is the column total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub dims: [usize; 3],
    pub m: Option<usize>,
    pub count: BigCount,
    pub note: String,
}

fn bad(what: impl Into<String>) -> CliError {
    CliError::Format(what.into())
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes())
}

pub fn count_rows(table: CountTable) -> CliResult<Vec<CountRow>> {
    let mut out = Vec::new();
    for rec in reader(table.source()).deserialize::<RawCount>() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let m = match rec.m.as_str() {
            "total" => None,
            t => Some(t.parse().map_err(|_| bad(format!("bad weight {t:?}")))?),
        };
        let count = rec.count.parse().map_err(|_| bad(format!("bad count {:?}", rec.count)))?;
        out.push(CountRow { dims: [rec.r, rec.s, rec.n], m, count, note: rec.note });
    }
    Ok(out)
}

/// A tabulated column: the distribution (blank cells are zero) and the
/// printed total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub distribution: WeightDistribution,
    pub total: BigCount,
}

pub fn columns(table: CountTable) -> CliResult<BTreeMap<[usize; 3], Column>> {
    type Cells = (BTreeMap<usize, BigCount>, Option<BigCount>);
    let mut cells: BTreeMap<[usize; 3], Cells> = BTreeMap::new();
    for row in count_rows(table)? {
        let slot = cells.entry(row.dims).or_default();
        match row.m {
            Some(m) => {
                slot.0.insert(m, row.count);
            }
            None => slot.1 = Some(row.count),
        }
    }
    let mut out = BTreeMap::new();
    for (dims, (by_m, total)) in cells {
        let shape = Shape::from_dims(dims)?;
        let mut dist = WeightDistribution::zeros(shape);
        for (m, c) in by_m {
            if m > shape.cells() {
                return Err(bad(format!("weight {m} beyond {shape}")));
            }
            dist.add_at(m, &c);
        }
        let total = total.ok_or_else(|| bad(format!("no total for {shape}")))?;
        out.insert(dims, Column { distribution: dist, total });
    }
    Ok(out)
}

pub fn column(table: CountTable, dims: [usize; 3]) -> CliResult<Column> {
    columns(table)?.remove(&dims).ok_or_else(|| bad(format!("no column {dims:?} in fixture")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnboundedRow {
    pub m: usize,
    /// Blank where the value is unknown.
    pub isotopism: Option<BigCount>,
    pub main: BigCount,
}

pub fn unbounded() -> CliResult<Vec<UnboundedRow>> {
    #[derive(Deserialize)]
    struct Raw {
        m: usize,
        isotopism: String,
        main: String,
    }
    let mut out = Vec::new();
    for rec in reader(UNBOUNDED).deserialize::<Raw>() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let isotopism = match rec.isotopism.as_str() {
            "" => None,
            t => Some(t.parse().map_err(|_| bad(format!("bad count {t:?}")))?),
        };
        let main = rec.main.parse().map_err(|_| bad(format!("bad count {:?}", rec.main)))?;
        out.push(UnboundedRow { m: rec.m, isotopism, main });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BlockRow {
    pub text: String,
    pub matrix: BinMatrix,
    pub aut: BigCount,
    pub chromatic: UniPoly,
}

pub fn blocks() -> CliResult<Vec<BlockRow>> {
    #[derive(Deserialize)]
    struct Raw {
        matrix: String,
        aut: String,
        chromatic: String,
    }
    let mut out = Vec::new();
    for rec in reader(BLOCKS).deserialize::<Raw>() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        out.push(BlockRow {
            matrix: BinMatrix::parse(&rec.matrix)?,
            aut: rec.aut.parse().map_err(|_| bad(format!("bad order {:?}", rec.aut)))?,
            chromatic: parse_chromatic(&rec.chromatic)?,
            text: rec.matrix,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GraphRow {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub aut: BigCount,
    /// The printed expression, e.g. `[111]*P(K2)^2`.
    pub expression: String,
    /// Edges of the accompanying drawing.
    pub drawing: Vec<(usize, usize)>,
    pub note: String,
}

pub fn graph_rows() -> CliResult<Vec<GraphRow>> {
    #[derive(Deserialize)]
    struct Raw {
        name: String,
        v: usize,
        e: usize,
        c: usize,
        aut: String,
        p: String,
        edges: String,
        note: String,
    }
    let mut out = Vec::new();
    for rec in reader(GRAPH_POLYS).deserialize::<Raw>() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let drawing = rec
            .edges
            .split_whitespace()
            .map(|p| {
                let (a, b) = p.split_once('-').ok_or_else(|| bad(format!("bad edge {p:?}")))?;
                let num = |x: &str| x.parse::<usize>().map_err(|_| bad(format!("bad edge {p:?}")));
                Ok((num(a)?, num(b)?))
            })
            .collect::<CliResult<Vec<_>>>()?;
        out.push(GraphRow {
            name: rec.name,
            vertices: rec.v,
            edges: rec.e,
            components: rec.c,
            aut: rec.aut.parse().map_err(|_| bad(format!("bad order {:?}", rec.aut)))?,
            expression: rec.p,
            drawing,
            note: rec.note,
        });
    }
    Ok(out)
}

/// Expands the printed expression of every row, resolving `P(name)`
/// references to other rows.
pub fn graph_polynomials(rows: &[GraphRow]) -> CliResult<BTreeMap<String, TriPoly>> {
    fn resolve(
        name: &str,
        rows: &[GraphRow],
        done: &mut BTreeMap<String, TriPoly>,
        depth: usize,
    ) -> CliResult<TriPoly> {
        if let Some(p) = done.get(name) {
            return Ok(p.clone());
        }
        if depth > rows.len() {
            return Err(bad(format!("cyclic reference through {name}")));
        }
        let row = rows.iter().find(|r| r.name == name).ok_or_else(|| bad(format!("unknown graph {name:?}")))?;
        let mut refs = BTreeMap::new();
        for dep in references(&row.expression) {
            refs.insert(dep.clone(), resolve(&dep, rows, done, depth + 1)?);
        }
        let p = parse_expression(&row.expression, &|d| {
            refs.get(d).cloned().ok_or_else(|| bad(format!("unknown graph {d:?}")))
        })?;
        done.insert(name.to_string(), p.clone());
        Ok(p)
    }
    let mut done = BTreeMap::new();
    for row in rows {
        resolve(&row.name, rows, &mut done, 0)?;
    }
    Ok(done)
}

fn references(expr: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = expr;
    while let Some(i) = rest.find("P(") {
        let tail = &rest[i + 2..];
        match tail.find(')') {
            Some(j) => {
                out.push(tail[..j].to_string());
                rest = &tail[j + 1..];
            }
            None => break,
        }
    }
    out
}

struct Lexer<'a> {
    s: &'a [u8],
    at: usize,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.at).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        std::str::from_utf8(&self.s[start..self.at]).ok()?.parse().ok()
    }

    fn power(&mut self) -> CliResult<usize> {
        if self.eat(b'^') {
            self.number().map(|k| k as usize).ok_or_else(|| bad("missing exponent"))
        } else {
            Ok(1)
        }
    }

    fn done(&self) -> bool {
        self.at == self.s.len()
    }
}

/// Parses sums of products of integers, bar monomials `[abc]` and graph
/// references `P(name)`, each factor optionally raised to `^k`.
pub fn parse_expression(text: &str, lookup: &dyn Fn(&str) -> CliResult<TriPoly>) -> CliResult<TriPoly> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut lx = Lexer { s: compact.as_bytes(), at: 0 };
    let mut total = TriPoly::zero();
    let mut first = true;
    while !lx.done() {
        let negative = if lx.eat(b'-') {
            true
        } else if lx.eat(b'+') || first {
            false
        } else {
            return Err(bad(format!("expected + or - in {text:?}")));
        };
        first = false;
        let mut term = TriPoly::constant(if negative { -1 } else { 1 });
        loop {
            let factor = if let Some(k) = lx.number() {
                TriPoly::constant(k as i64)
            } else if lx.eat(b'[') {
                let start = lx.at;
                let mut e = [0u32; 3];
                for slot in &mut e {
                    let d = lx.peek().filter(u8::is_ascii_digit).ok_or_else(|| bad(format!("bad bar in {text:?}")))?;
                    *slot = (d - b'0') as u32;
                    lx.at += 1;
                }
                if !lx.eat(b']') {
                    return Err(bad(format!("bad bar at {start} in {text:?}")));
                }
                TriPoly::bar(e)
            } else if lx.eat(b'P') && lx.eat(b'(') {
                let start = lx.at;
                while lx.peek().is_some_and(|c| c != b')') {
                    lx.at += 1;
                }
                let name = std::str::from_utf8(&lx.s[start..lx.at]).expect("ascii");
                if !lx.eat(b')') {
                    return Err(bad(format!("unclosed reference in {text:?}")));
                }
                lookup(name)?
            } else {
                return Err(bad(format!("unexpected input at {} in {text:?}", lx.at)));
            };
            let k = lx.power()?;
            term = &term * &factor.pow(k);
            if !lx.eat(b'*') {
                break;
            }
        }
        total = &total + &term;
    }
    Ok(total)
}

/// Parses products such as `n(n-1)^2(n^2-3n+3)`.
pub fn parse_chromatic(text: &str) -> CliResult<UniPoly> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut lx = Lexer { s: compact.as_bytes(), at: 0 };
    let mut out = UniPoly::constant(1);
    while !lx.done() {
        let factor = if lx.eat(b'n') {
            UniPoly::x()
        } else if lx.eat(b'(') {
            let mut inner = UniPoly::zero();
            let mut first = true;
            while !lx.eat(b')') {
                let sign = if lx.eat(b'-') {
                    -1
                } else if lx.eat(b'+') || first {
                    1
                } else {
                    return Err(bad(format!("bad factor in {text:?}")));
                };
                first = false;
                let coeff = lx.number();
                let (c, e) = if lx.eat(b'n') {
                    (coeff.unwrap_or(1), lx.power()?)
                } else {
                    (coeff.ok_or_else(|| bad(format!("bad term in {text:?}")))?, 0)
                };
                let mut coeffs = vec![0i64; e + 1];
                coeffs[e] = sign * c as i64;
                inner = &inner + &UniPoly::from_i64(&coeffs);
            }
            inner
        } else {
            return Err(bad(format!("unexpected input at {} in {text:?}", lx.at)));
        };
        out = &out * &factor.pow(lx.power()?);
    }
    Ok(out)
}
