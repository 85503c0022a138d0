use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plr::cache::{CacheKey, Conflict, ResultCache, Table};
use plr::engine::{self, Method, RunOptions};
use plr::error::{CliError, CliResult};
use plr::format::{self, OutputFormat};
use plr::verify::{self, VerifyConfig};
use plr_core::chromatic::f_m_polynomial;
use plr_core::classes::{self, ClassKind};
use plr_core::incexc::{exact_degree_floor, f_m_truncated};
use plr_core::{Shape, TriPoly};

/// Largest `m` accepted by `poly --method blocks`.
const POLY_BLOCKS_MAX_M: usize = 13;

#[derive(Parser)]
#[command(name = "plr", version, about = "Count partial Latin rectangles and their equivalence classes")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Result cache file.
    #[arg(long, global = true, env = "PLR_CACHE")]
    cache: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Final rows Sade counts by plain backtracking.
    #[arg(long, global = true, default_value_t = 1)]
    plain_tail_rows: usize,
    /// Largest block size the blocks method may generate.
    #[arg(long, global = true)]
    max_ones: Option<usize>,
    /// Report progress of long runs on stderr.
    #[arg(long, global = true)]
    progress: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ShapeArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    n: usize,
}

impl ShapeArgs {
    fn shape(self) -> CliResult<Shape> {
        Ok(Shape::new(self.r, self.s, self.n)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyMethod {
    Blocks,
    IncexcTruncated,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassesKind {
    Isom,
    Isot,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnboundedKind {
    Isotopism,
    Main,
}

#[derive(Subcommand)]
enum Command {
    /// Weight distribution of #PLR(r,s,n;m), or one weight with --m.
    Count {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Method::Sade)]
        method: Method,
        #[arg(long)]
        m: Option<usize>,
        /// Save and resume Sade levels in this directory.
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
        /// Block table file to reuse or create.
        #[arg(long)]
        block_table: Option<PathBuf>,
    },
    /// The polynomial f_m(r,s,n) = m! #PLR(r,s,n;m).
    Poly {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = PolyMethod::Blocks)]
        method: PolyMethod,
        /// Component size bound for incexc-truncated.
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        /// Also print the expanded monomial form.
        #[arg(long)]
        expanded: bool,
        /// Evaluate at r,s,n.
        #[arg(long, value_delimiter = ',', value_name = "R,S,N")]
        eval: Option<Vec<i64>>,
    },
    /// Isomorphism, isotopism or main class counts by weight.
    Classes {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum)]
        kind: ClassesKind,
    },
    /// Class counts for weights m <= max-m when every dimension is at least m.
    ClassesUnbounded {
        #[arg(long)]
        max_m: usize,
        #[arg(long, value_enum)]
        kind: UnboundedKind,
    },
    /// Divisibility, cross-method and parastrophe checks.
    Verify {
        #[arg(long, requires_all = ["s", "n"])]
        r: Option<usize>,
        #[arg(long, requires_all = ["r", "n"])]
        s: Option<usize>,
        #[arg(long, requires_all = ["r", "s"])]
        n: Option<usize>,
        /// Only this k in the congruences.
        #[arg(long)]
        k: Option<usize>,
        /// Without a shape, check every shape up to this dimension.
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        /// Polynomials f_1..f_M enter the congruence check.
        #[arg(long, default_value_t = 6)]
        poly_m: usize,
        #[arg(long, default_value_t = 4)]
        poly_k: usize,
        /// Skip recomputing with every feasible method.
        #[arg(long)]
        no_cross: bool,
        /// List passing checks too.
        #[arg(long)]
        verbose: bool,
    },
}

struct Ctx {
    format: OutputFormat,
    cache: ResultCache,
    opts: RunOptions,
    progress: bool,
}

impl Ctx {
    fn warn(conflicts: &[Conflict]) {
        for c in conflicts {
            eprintln!("warning: {c}");
        }
    }

    fn record(&mut self, table: Table, dist: &plr_core::WeightDistribution) -> CliResult<()> {
        let c = self.cache.record_distribution(table, dist)?;
        Ctx::warn(&c);
        Ok(())
    }

    fn reporter(&self) -> impl FnMut(&str) {
        let on = self.progress;
        move |line: &str| {
            if on {
                eprintln!("{line}");
            }
        }
    }
}

#[derive(Serialize)]
struct PolyJson {
    m: usize,
    method: &'static str,
    polynomial: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    expanded: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_from_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eval: Option<EvalJson>,
}

#[derive(Serialize)]
struct EvalJson {
    point: [i64; 3],
    value: String,
}

fn cmd_count(
    ctx: &mut Ctx,
    shape: Shape,
    method: Method,
    m: Option<usize>,
    checkpoint_dir: Option<PathBuf>,
    block_table: Option<PathBuf>,
) -> CliResult<String> {
    let opts = RunOptions { checkpoint_dir, block_table, ..ctx.opts.clone() };
    let mut report = ctx.reporter();
    match m {
        Some(m) => {
            let v = engine::count_at(shape, method, m, &opts, &mut report)?;
            if m <= shape.cells() {
                if let Some(c) = ctx.cache.record(CacheKey::new(Table::Plr, shape, m), v.clone())? {
                    Ctx::warn(&[c]);
                }
                ctx.cache.flush()?;
            }
            Ok(format::single(shape.dims(), m, &v, method.name(), ctx.format))
        }
        None => {
            let d = engine::count(shape, method, &opts, &mut report)?;
            ctx.record(Table::Plr, &d)?;
            Ok(format::distribution(&d, method.name(), ctx.format))
        }
    }
}

fn cmd_poly(
    ctx: &Ctx,
    m: usize,
    method: PolyMethod,
    max_vertices: usize,
    expanded: bool,
    eval: Option<Vec<i64>>,
) -> CliResult<String> {
    let (poly, name, floor): (TriPoly, &str, Option<usize>) = match method {
        PolyMethod::Blocks => {
            if m > POLY_BLOCKS_MAX_M {
                return Err(CliError::infeasible("chromatic", format!("m = {m} exceeds {POLY_BLOCKS_MAX_M}")));
            }
            (f_m_polynomial(m), "blocks", None)
        }
        PolyMethod::IncexcTruncated => {
            let p = f_m_truncated(m, max_vertices).map_err(|e| CliError::infeasible("incexc", e.to_string()))?;
            let floor = (m > max_vertices).then(|| exact_degree_floor(m, max_vertices));
            (p, "incexc-truncated", floor)
        }
    };
    let point = match eval {
        Some(v) if v.len() != 3 || v.iter().any(|&x| x < 0) => {
            return Err(CliError::Format("evaluation point must be three non-negative integers r,s,n".into()));
        }
        Some(v) => Some([v[0], v[1], v[2]]),
        None => None,
    };
    let value = point.map(|p| poly.eval_i64(p[0], p[1], p[2]));
    Ok(match ctx.format {
        OutputFormat::Json => format::json(&PolyJson {
            m,
            method: name,
            polynomial: poly.to_bar_string(),
            expanded: expanded.then(|| poly.to_expanded_string()),
            exact_from_degree: floor,
            eval: point.zip(value).map(|(point, v)| EvalJson { point, value: v.to_string() }),
        }),
        OutputFormat::Csv => {
            let mut out = String::from("r_exp,s_exp,n_exp,coefficient\n");
            for (e, c) in poly.terms().iter().rev() {
                out.push_str(&format!("{},{},{},{c}\n", e[0], e[1], e[2]));
            }
            out
        }
        OutputFormat::Table => {
            let mut out = format!("{}\n", poly.to_bar_string());
            if expanded {
                out.push_str(&format!("{}\n", poly.to_expanded_string()));
            }
            if let Some(f) = floor {
                out.push_str(&format!("exact in monomials of degree >= {f}\n"));
            }
            if let (Some(p), Some(v)) = (point, value) {
                out.push_str(&format!("f_{m}({},{},{}) = {v}\n", p[0], p[1], p[2]));
            }
            out
        }
    })
}

fn cmd_classes(ctx: &mut Ctx, shape: Shape, kind: ClassesKind) -> CliResult<String> {
    let (d, table, label) = match kind {
        ClassesKind::Isom => {
            let [r, s, n] = shape.dims();
            if r != s || s != n {
                return Err(CliError::infeasible("classes", "isomorphism classes need r = s = n"));
            }
            (classes::isom_count(n)?, Table::Isom, "isom")
        }
        ClassesKind::Isot => (classes::isot_count(shape)?, Table::Isot, "isot"),
        ClassesKind::Mc => (classes::mc_count(shape)?, Table::Mc, "mc"),
    };
    ctx.record(table, &d)?;
    Ok(format::distribution(&d, label, ctx.format))
}

fn cmd_unbounded(ctx: &Ctx, max_m: usize, kind: UnboundedKind) -> CliResult<String> {
    let (k, label) = match kind {
        UnboundedKind::Isotopism => (ClassKind::Isotopism, "isotopism"),
        UnboundedKind::Main => (ClassKind::Main, "main"),
    };
    let counts =
        classes::unbounded_class_counts(max_m, k).map_err(|e| CliError::infeasible("classes", e.to_string()))?;
    Ok(format::sequence(&counts, label, ctx.format))
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let cache = match &cli.cache {
        Some(path) => {
            let (c, conflicts) = ResultCache::open(path)?;
            Ctx::warn(&conflicts);
            c
        }
        None => ResultCache::in_memory(),
    };
    let mut ctx = Ctx {
        format: cli.format,
        cache,
        opts: RunOptions {
            threads: cli.threads,
            plain_tail_rows: cli.plain_tail_rows,
            max_ones: cli.max_ones,
            ..Default::default()
        },
        progress: cli.progress,
    };
    let out = match cli.command {
        Command::Count { shape, method, m, checkpoint_dir, block_table } => {
            cmd_count(&mut ctx, shape.shape()?, method, m, checkpoint_dir, block_table)?
        }
        Command::Poly { m, method, max_vertices, expanded, eval } => {
            cmd_poly(&ctx, m, method, max_vertices, expanded, eval)?
        }
        Command::Classes { shape, kind } => cmd_classes(&mut ctx, shape.shape()?, kind)?,
        Command::ClassesUnbounded { max_m, kind } => cmd_unbounded(&ctx, max_m, kind)?,
        Command::Verify { r, s, n, k, max_dim, poly_m, poly_k, no_cross, verbose } => {
            let shapes = match (r, s, n) {
                (Some(r), Some(s), Some(n)) => vec![Shape::new(r, s, n)?],
                _ => Vec::new(),
            };
            let cfg =
                VerifyConfig { shapes, max_dim, k, cross_methods: !no_cross, poly_max_m: poly_m, poly_max_k: poly_k };
            let report = verify::run(&cfg, &mut ctx.cache, ctx.opts.clone())?;
            print!("{}", report.render(verbose));
            return Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
