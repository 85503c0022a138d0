//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits non-zero on any unexpected failure.
//!
//! Long-running checks (5x5x7 Sade, class counts at 5x5x5) run only with
//! `--long` or `PLR_ACCEPTANCE_LONG=1`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use plr::cache::ResultCache;
use plr::engine::{self, Method, RunOptions};
use plr::fixtures::{self, CountTable};
use plr::verify::{self, Outcome, VerifyConfig};
use plr_core::canon::{automorphism_count, canonical_form, ColoredGraph};
use plr_core::chromatic::{self, f_m_polynomial};
use plr_core::classes::{self, ClassKind};
use plr_core::incexc::{self, exact_degree_floor, f_m_truncated, p_of_g};
use plr_core::{oracle, sade, BigCount, Permutation, Shape, TriPoly, WeightDistribution};

/// Printed rows known to be misprinted; criterion 5 reports them as FAIL
/// without failing the run.
const MISPRINTED_GRAPH_ROWS: [&str; 4] = ["house", "K1_1_3", "K2+C4", "K2_3"];

struct Verdict {
    pass: bool,
    detail: String,
    /// A FAIL that is understood and does not fail the run.
    expected: bool,
}

impl Verdict {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into(), expected: false }
    }
}

fn sh(r: usize, s: usize, n: usize) -> Shape {
    Shape::new(r, s, n).unwrap()
}

fn first_difference(a: &WeightDistribution, b: &WeightDistribution) -> Option<usize> {
    let top = a.counts().len().max(b.counts().len());
    (0..top).find(|&m| a.get(m) != b.get(m))
}

// ---------------------------------------------------------------- 1

/// Every assignment of a symbol or blank to each cell, kept if no symbol
/// repeats in a row or column.
fn naive_count(shape: Shape) -> Vec<u64> {
    let [r, s, n] = shape.dims();
    let cells = r * s;
    let mut counts = vec![0u64; cells + 1];
    let mut grid = vec![0usize; cells];
    loop {
        let ok = (0..cells).all(|i| {
            let v = grid[i];
            v == 0 || (0..cells).all(|j| j == i || grid[j] != v || (j / s != i / s && j % s != i % s))
        });
        if ok {
            counts[grid.iter().filter(|&&v| v != 0).count()] += 1;
        }
        let mut k = 0;
        loop {
            if k == cells {
                return counts;
            }
            grid[k] += 1;
            if grid[k] <= n {
                break;
            }
            grid[k] = 0;
            k += 1;
        }
    }
}

fn criterion_1() -> Verdict {
    let mut shapes = 0;
    for r in 1..=6 {
        for s in 1..=6 / r {
            for n in 1..=3 {
                let shape = sh(r, s, n);
                let naive = WeightDistribution::from_u64(shape, &naive_count(shape)).unwrap();
                let fast = oracle::count_all(shape);
                if let Some(m) = first_difference(&naive, &fast) {
                    return Verdict::check(
                        false,
                        format!("{shape} m={m}: naive {} oracle {}", naive.get(m), fast.get(m)),
                    );
                }
                shapes += 1;
            }
        }
    }
    Verdict::check(true, format!("{shapes} shapes with r*s <= 6, n <= 3"))
}

// ---------------------------------------------------------------- 2

fn criterion_2(long: bool) -> Verdict {
    let cols = fixtures::columns(CountTable::Plr).unwrap();
    let mut done = Vec::new();
    for dims in [[2, 2, 7], [2, 3, 7], [3, 3, 7]] {
        let shape = Shape::from_dims(dims).unwrap();
        let want = &cols[&dims].distribution;
        let s = sade::sade_count(shape).unwrap();
        let b = chromatic::distribution_via_blocks(shape).unwrap();
        for (name, got) in [("sade", &s), ("blocks", &b)] {
            if let Some(m) = first_difference(want, got) {
                return Verdict::check(false, format!("{name} {shape} m={m}: {} vs table {}", got.get(m), want.get(m)));
            }
        }
        done.push(format!("{shape} total {}", s.total()));
    }
    let mut big = vec![[4, 4, 7]];
    if long {
        big.push([5, 5, 7]);
    }
    for dims in big {
        let shape = Shape::from_dims(dims).unwrap();
        let col = &cols[&dims];
        let s = sade::sade_count(shape).unwrap();
        if let Some(m) = first_difference(&col.distribution, &s) {
            return Verdict::check(
                false,
                format!("sade {shape} m={m}: {} vs table {}", s.get(m), col.distribution.get(m)),
            );
        }
        if s.total() != col.total {
            return Verdict::check(false, format!("sade {shape} total {} vs {}", s.total(), col.total));
        }
        done.push(format!("{shape} total {} (sade)", s.total()));
    }
    if !long {
        done.push("5.5.7 needs --long".into());
    }
    Verdict::check(true, done.join("; "))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Verdict {
    let opts = RunOptions::default();
    let mut cells = 0;
    for r in 1..=4 {
        for s in 1..=4 {
            for n in 1..=4 {
                let shape = sh(r, s, n);
                let o = engine::count(shape, Method::Oracle, &opts, &mut |_| {}).unwrap();
                let s_ = engine::count(shape, Method::Sade, &opts, &mut |_| {}).unwrap();
                let b = engine::count(shape, Method::Blocks, &opts, &mut |_| {}).unwrap();
                for (name, d) in [("sade", &s_), ("blocks", &b)] {
                    if let Some(m) = first_difference(&o, d) {
                        return Verdict::check(
                            false,
                            format!("{name} {shape} m={m}: {} vs oracle {}", d.get(m), o.get(m)),
                        );
                    }
                }
                cells += shape.cells() + 1;
            }
        }
    }
    Verdict::check(true, format!("64 shapes, {cells} (shape, m) cells"))
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Verdict {
    let rows = fixtures::blocks().unwrap();
    let generated = chromatic::generate_blocks(5);
    if generated.len() != rows.len() {
        return Verdict::check(false, format!("{} blocks generated, {} listed", generated.len(), rows.len()));
    }
    let codes: Vec<Vec<u8>> = generated.iter().map(|b| b.matrix.canonical().1).collect();
    let mut used = BTreeSet::new();
    for row in &rows {
        let code = row.matrix.canonical().1;
        let Some(i) = codes.iter().position(|c| *c == code) else {
            return Verdict::check(false, format!("listed block {} not generated", row.text));
        };
        let b = &generated[i];
        if b.aut_size != row.aut || b.chromatic != row.chromatic {
            return Verdict::check(
                false,
                format!("block {}: order {} or chromatic polynomial differs", row.text, b.aut_size),
            );
        }
        used.insert(i);
    }
    if used.len() != generated.len() {
        return Verdict::check(false, "listed blocks do not cover every generated block");
    }
    Verdict::check(true, format!("{} blocks, orders and chromatic polynomials", rows.len()))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Verdict {
    let rows = fixtures::graph_rows().unwrap();
    let printed = fixtures::graph_polynomials(&rows).unwrap();
    let classes = incexc::graphs_by_rank(4).unwrap();
    let mut computed: Vec<(&incexc::GraphClass, TriPoly)> = Vec::new();
    for g in classes.iter().filter(|g| g.vertices > 0) {
        computed.push((g, p_of_g(&g.graph).unwrap()));
    }
    let mut mismatched = BTreeSet::new();
    let mut drawing_notes = Vec::new();
    for row in &rows {
        let want = &printed[&row.name];
        let aut = row.aut.clone();
        let hit = computed.iter().any(|(g, p)| {
            g.vertices == row.vertices
                && g.edges == row.edges
                && g.components == row.components
                && g.aut_size == aut
                && p == want
        });
        if !hit {
            mismatched.insert(row.name.clone());
        }
        let drawn = ColoredGraph::from_edges(vec![0; row.vertices], &row.drawing).unwrap();
        let drawn_ok =
            drawn.edge_count() == row.edges && automorphism_count(&drawn) == aut && p_of_g(&drawn).unwrap() == *want;
        if hit && !drawn_ok {
            drawing_notes.push(row.name.clone());
        }
    }
    let known: BTreeSet<String> = MISPRINTED_GRAPH_ROWS.iter().map(|s| s.to_string()).collect();
    let drawings = if drawing_notes.is_empty() {
        String::new()
    } else {
        format!("; drawing disagrees with its row for {}", drawing_notes.join(", "))
    };
    if mismatched.is_empty() {
        return Verdict::check(true, format!("{} rows{drawings}", rows.len()));
    }
    let list = mismatched.iter().cloned().collect::<Vec<_>>().join(", ");
    let expected = mismatched == known;
    Verdict {
        pass: false,
        expected,
        detail: format!(
            "{} of {} rows match; no graph with the row's invariants has the printed polynomial for {list}{}{drawings}",
            rows.len() - mismatched.len(),
            rows.len(),
            if expected { " (known misprints)" } else { "" }
        ),
    }
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Verdict {
    for m in 0..=8 {
        let exact = f_m_polynomial(m);
        let trunc = f_m_truncated(m, 5).unwrap();
        let floor = exact_degree_floor(m, 5) as u32;
        let (a, b) = if m <= 5 { (exact, trunc) } else { (exact.degree_at_least(floor), trunc.degree_at_least(floor)) };
        if a != b {
            let term = a
                .terms()
                .iter()
                .find(|(e, c)| b.coeff(**e) != **c)
                .map(|(e, _)| *e)
                .or_else(|| b.terms().keys().find(|e| a.coeff(**e).is_zero()).copied());
            return Verdict::check(false, format!("m={m}: terms differ at {term:?}"));
        }
    }
    Verdict::check(true, "exact for m <= 5, degree >= 3m-9 for m = 6, 7, 8")
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Verdict {
    for m in 1..=8 {
        let f = f_m_polynomial(m);
        let mu = m as u32;
        let problems = [
            (!f.is_symmetric(), "not symmetric"),
            (f.degree() != Some(3 * mu), "degree is not 3m"),
            (f.coeff([mu, mu, mu]) != BigInt::from(1), "leading coefficient is not 1"),
            (
                f.terms().iter().any(|(e, c)| e.iter().sum::<u32>() == 3 * mu && *e != [mu, mu, mu] && !c.is_zero()),
                "other top-degree terms",
            ),
            (!f.divisible_by_rsn(), "not divisible by rsn"),
        ];
        if let Some((_, why)) = problems.iter().find(|p| p.0) {
            return Verdict::check(false, format!("f_{m}: {why}"));
        }
    }
    Verdict::check(true, "m = 1..8")
}

// ---------------------------------------------------------------- 8

fn criterion_8(long: bool) -> Verdict {
    let mut done = Vec::new();
    let isom = fixtures::columns(CountTable::Isom).unwrap();
    let top = if long { 5 } else { 4 };
    for n in 1..=top {
        let want = &isom[&[n, n, n]];
        let got = classes::isom_count(n).unwrap();
        if first_difference(&want.distribution, &got).is_some() || got.total() != want.total {
            return Verdict::check(false, format!("isom n={n}: total {} vs {}", got.total(), want.total));
        }
        done.push(format!("isom {n}: {}", got.total()));
    }
    type Counter = fn(Shape) -> plr_core::Result<WeightDistribution>;
    let tables: [(&str, CountTable, Counter); 2] =
        [("isot", CountTable::Isot, classes::isot_count), ("mc", CountTable::MainClasses, classes::mc_count)];
    for (name, table, count) in tables {
        let mut cols = 0;
        for (dims, want) in fixtures::columns(table).unwrap() {
            if dims.iter().any(|&d| d > 4) && !(long && dims == [5, 5, 5]) {
                continue;
            }
            let got = count(Shape::from_dims(dims).unwrap()).unwrap();
            if first_difference(&want.distribution, &got).is_some() || got.total() != want.total {
                return Verdict::check(false, format!("{name} {dims:?}: total {} vs {}", got.total(), want.total));
            }
            cols += 1;
        }
        let cubes: Vec<String> = (2..=top).map(|n| count(sh(n, n, n)).unwrap().total().to_string()).collect();
        done.push(format!("{name} {cols} columns, cubes {}", cubes.join("/")));
    }
    Verdict::check(true, done.join("; "))
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Verdict {
    for r in 1..=3 {
        for s in 1..=3 {
            for n in 1..=3 {
                let shape = sh(r, s, n);
                let pairs = [
                    ("isot", classes::isot_count(shape), classes::isot_count_full_group(shape)),
                    ("mc", classes::mc_count(shape), classes::mc_count_full_group(shape)),
                ];
                for (name, reduced, full) in pairs {
                    let (a, b) = (reduced.unwrap(), full.unwrap());
                    if let Some(m) = first_difference(&a, &b) {
                        return Verdict::check(false, format!("{name} {shape} m={m}: {} vs {}", a.get(m), b.get(m)));
                    }
                }
            }
        }
    }
    Verdict::check(true, "isotopism and main classes, 27 shapes")
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Verdict {
    let rows = fixtures::unbounded().unwrap();
    let max_m = 8;
    let iso = classes::unbounded_class_counts(max_m, ClassKind::Isotopism).unwrap();
    let main = classes::unbounded_class_counts(max_m, ClassKind::Main).unwrap();
    for row in rows.iter().filter(|r| r.m <= max_m) {
        let want_iso = row.isotopism.clone().unwrap();
        if iso[row.m] != want_iso || main[row.m] != row.main {
            return Verdict::check(
                false,
                format!("m={}: {} / {} vs {} / {}", row.m, iso[row.m], main[row.m], want_iso, row.main),
            );
        }
    }
    Verdict::check(true, format!("m <= {max_m}: {} / {}", iso[max_m], main[max_m]))
}

// ---------------------------------------------------------------- 11

/// Congruences between tabulated columns that differ in one dimension.
fn table_congruences() -> Result<usize, String> {
    let cols = fixtures::columns(CountTable::Plr).unwrap();
    let mut checked = 0;
    for (dims, col) in &cols {
        for axis in 0..3 {
            for k in 0..dims[axis] {
                let modulus = BigCount::from(dims[axis] - k);
                let small = if k == 0 {
                    let mut d = WeightDistribution::zeros(col.distribution.shape());
                    d.add_at(0, &BigCount::from(1u32));
                    d
                } else {
                    let mut other = *dims;
                    other[axis] = k;
                    match cols.get(&other) {
                        Some(c) => c.distribution.clone(),
                        None => continue,
                    }
                };
                let top = col.distribution.counts().len();
                if let Some(m) = (0..top).find(|&m| col.distribution.get(m) % &modulus != small.get(m) % &modulus) {
                    return Err(format!("table {dims:?} axis {axis} k={k} m={m}"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn criterion_11() -> Verdict {
    let cfg = VerifyConfig { max_dim: 5, cross_methods: false, poly_max_m: 6, poly_max_k: 4, ..Default::default() };
    let mut cache = ResultCache::in_memory();
    let report = verify::run(&cfg, &mut cache, RunOptions::default()).unwrap();
    if let Some(c) = report.failures().next() {
        return Verdict::check(false, c.to_string());
    }
    if let Some(c) = report.checks.iter().find(|c| matches!(c.outcome, Outcome::Skipped(_))) {
        return Verdict::check(false, format!("not computed: {c}"));
    }
    let congruences = report.checks.iter().filter(|c| c.group == "congruence").count();
    let polys = report.checks.iter().filter(|c| c.group == "polynomial").count();
    match table_congruences() {
        Ok(t) => Verdict::check(
            true,
            format!(
                "{congruences} congruences for r,s,n <= 5, {polys} polynomial cases, {t} between tabulated columns"
            ),
        ),
        Err(e) => Verdict::check(false, e),
    }
}

// ---------------------------------------------------------------- 12

/// Lexicographically least relabeled (colors, adjacency), by trying every
/// permutation.
fn brute_canonical(g: &ColoredGraph, perms: &[Permutation]) -> (Vec<u32>, Vec<u64>) {
    perms
        .iter()
        .map(|p| {
            let h = g.relabel(p);
            let n = h.vertex_count();
            (h.colors().to_vec(), (0..n).map(|v| h.neighbors(v)).collect())
        })
        .min()
        .unwrap()
}

fn brute_aut(g: &ColoredGraph, perms: &[Permutation]) -> BigUint {
    BigUint::from(perms.iter().filter(|p| g.relabel(p) == *g).count())
}

/// Checks invariance under a relabeling, the automorphism count, and that
/// equal codes mean isomorphic graphs.
struct CanonAudit {
    codes: BTreeMap<Vec<u8>, (Vec<u32>, Vec<u64>)>,
    cases: usize,
}

impl CanonAudit {
    fn audit(&mut self, g: &ColoredGraph, relabel: &Permutation, perms: &[Permutation]) -> Result<(), String> {
        self.cases += 1;
        let code = canonical_form(g).code;
        if canonical_form(&g.relabel(relabel)).code != code {
            return Err(format!("relabeling changes the code of {:?}", g.edges()));
        }
        if automorphism_count(g) != brute_aut(g, perms) {
            return Err(format!("automorphism count of {:?} colors {:?}", g.edges(), g.colors()));
        }
        let brute = brute_canonical(g, perms);
        if let Some(prev) = self.codes.insert(code, brute.clone()) {
            if prev != brute {
                return Err(format!("non-isomorphic graphs share a code, e.g. {:?}", g.edges()));
            }
        }
        Ok(())
    }
}

fn criterion_12() -> Verdict {
    let mut audit = CanonAudit { codes: BTreeMap::new(), cases: 0 };
    let mut rng = StdRng::seed_from_u64(0x5eed_1234);
    for v in 0..=4usize {
        let perms: Vec<Permutation> = Permutation::all(v).collect();
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            for colouring in 0u32..1 << v {
                let colors = (0..v).map(|i| colouring >> i & 1).collect();
                let g = ColoredGraph::from_edges(colors, &edges).unwrap();
                for p in &perms {
                    if canonical_form(&g.relabel(p)).code != canonical_form(&g).code {
                        return Verdict::check(false, format!("relabeling changes the code of {edges:?}"));
                    }
                }
                if let Err(e) = audit.audit(&g, &perms[rng.gen_range(0..perms.len())], &perms) {
                    return Verdict::check(false, e);
                }
            }
        }
    }
    let exhaustive = audit.cases;
    audit.codes.clear();
    let perms_by_size: Vec<Vec<Permutation>> = (0..=6).map(|v| Permutation::all(v).collect()).collect();
    for _ in 0..10_000 {
        let v = rng.gen_range(1..=6usize);
        let density = rng.gen_range(0.1..0.9);
        let palette = rng.gen_range(1..=3u32);
        let colors = (0..v).map(|_| rng.gen_range(0..palette)).collect();
        let mut g = ColoredGraph::new(colors).unwrap();
        for a in 0..v {
            for b in a + 1..v {
                if rng.gen_bool(density) {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        let perms = &perms_by_size[v];
        let p = &perms[rng.gen_range(0..perms.len())];
        if let Err(e) = audit.audit(&g, p, perms) {
            return Verdict::check(false, e);
        }
    }
    Verdict::check(true, format!("{exhaustive} exhaustive graphs on <= 4 vertices, 10000 random on <= 6"))
}

// ----------------------------------------------------------------

fn main() -> ExitCode {
    let long = std::env::args().any(|a| a == "--long") || std::env::var_os("PLR_ACCEPTANCE_LONG").is_some();
    let minutes = |m: u64| Duration::from_secs(60 * m);
    type Criterion = (usize, Duration, Box<dyn Fn() -> Verdict>);
    let criteria: Vec<Criterion> = vec![
        (1, minutes(1), Box::new(criterion_1)),
        (2, if long { minutes(120) } else { minutes(5) }, Box::new(move || criterion_2(long))),
        (3, minutes(10), Box::new(criterion_3)),
        (4, minutes(1), Box::new(criterion_4)),
        (5, minutes(5), Box::new(criterion_5)),
        (6, minutes(10), Box::new(criterion_6)),
        (7, minutes(30), Box::new(criterion_7)),
        (8, minutes(30), Box::new(move || criterion_8(long))),
        (9, minutes(10), Box::new(criterion_9)),
        (10, minutes(30), Box::new(criterion_10)),
        (11, minutes(30), Box::new(criterion_11)),
        (12, minutes(10), Box::new(criterion_12)),
    ];
    let only: Option<Vec<usize>> =
        std::env::var("PLR_ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    let mut expected = Vec::new();
    for (id, budget, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let mut v = run();
        let took = start.elapsed();
        if took > budget {
            v.pass = false;
            v.expected = false;
            v.detail = format!("{} (over the {}s budget)", v.detail, budget.as_secs());
        }
        let word = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {word} [{:.1}s] {}", took.as_secs_f64(), v.detail);
        if !v.pass {
            if v.expected {
                expected.push(id);
            } else {
                failed.push(id);
            }
        }
    }
    if !expected.is_empty() {
        println!("acceptance: known failures {expected:?}");
    }
    if failed.is_empty() {
        println!("acceptance: OK");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED {failed:?}");
        ExitCode::FAILURE
    }
}
