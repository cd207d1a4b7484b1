//! Command line front end for the lpsnake engine.

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lpsnake::counting::{count_matchings, count_matrix};
use lpsnake::export::{
    matchings_to_json, planar_snake_to_tikz, polygon_to_tikz, snake_to_dot, snake_to_json,
    snake_to_tikz, tpath_from_json, tpath_to_dot, tpath_to_json, tpath_to_tikz, ContextInput,
};
use lpsnake::gen::{connected_subsets, random_context};
use lpsnake::matcher::{brute_force, chi, enumerate_admissible, weight, ConditionMask, Matching};
use lpsnake::oracle::{verify_with, Oracle};
use lpsnake::snake::{build_snake_graph, SnakeGraph};
use lpsnake::tpath::{matching_to_tpath, validate_against, TPathReport, ValidationOptions};
use lpsnake::typea::{
    build_ms_snake_graph, expand_graph, path_lp_bridge, perfect_matchings, polygon_count,
    polygon_f_values, FkConvention, PolyArc, Polygon, Triangulation,
};
use lpsnake::{fixtures, validate_nested_collection, ClusterContext, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::{self, Write as _};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "lpsnake",
    version,
    about = "Snake graph expansions for graph LP algebras on trees"
)]
struct Cli {
    #[command(flatten)]
    input: InputArgs,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Context as inline JSON or a path to a JSON file.
    #[arg(long, global = true)]
    context: Option<String>,
    /// A built-in context instead of `--context`: ctx0, path3, condition1, condition2, condition4.
    #[arg(long, global = true, conflicts_with = "context")]
    fixture: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Tikz,
}

#[derive(Args, Debug, Clone)]
struct SetArg {
    /// The vertex set S, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    set: Vec<Vertex>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the context's family is a maximal nested collection.
    Validate,
    /// Expand Y_S through admissible matchings of its snake graph.
    Expand(SetArg),
    /// Count admissible matchings by determinant.
    Count {
        #[command(flatten)]
        set: SetArg,
        /// Compare the determinant with the enumeration.
        #[arg(long)]
        check: bool,
    },
    /// Compare the snake graph expansion with the closed-form oracle.
    Verify {
        /// A single set; every weakly rooted set when omitted.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<Vertex>>,
        /// Sweep this many random contexts instead of the given one.
        #[arg(long)]
        random: Option<usize>,
        /// Largest tree size in a random sweep.
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Print the oracle's Y_S in cluster variables.
    Oracle(SetArg),
    /// List admissible matchings.
    Enumerate {
        #[command(flatten)]
        set: SetArg,
        /// Filter every edge subset instead of searching.
        #[arg(long)]
        brute_force: bool,
    },
    /// Convert matchings to hyper T-paths and validate them.
    Tpath {
        #[command(flatten)]
        set: SetArg,
        /// Also check the path-label items.
        #[arg(long)]
        strict: bool,
        /// Path limit per boundary pair in strict mode.
        #[arg(long, default_value_t = 10_000)]
        path_cap: usize,
        /// Validate a T-path read from this JSON file instead.
        #[arg(long)]
        load: Option<String>,
    },
    /// Triangulated polygons and their snake graphs.
    Typea {
        #[command(subcommand)]
        command: TypeaCommand,
    },
    /// Render a context, snake graph, matchings or T-paths.
    Export {
        /// What to render.
        #[arg(long, value_enum, default_value_t = ExportItem::Snake)]
        what: ExportItem,
        /// The vertex set S (not needed for `context`).
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<Vertex>>,
        /// Index of the matching to highlight or convert.
        #[arg(long)]
        matching: Option<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ExportItem {
    Context,
    Snake,
    Matchings,
    Tpath,
}

#[derive(Args, Debug, Clone)]
struct PolygonArgs {
    /// Number of polygon vertices.
    #[arg(long)]
    n: usize,
    /// Triangulation arcs as a-b pairs, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_arc)]
    arcs: Vec<PolyArc>,
    /// The arc to expand, as a-b.
    #[arg(long, value_parser = parse_arc)]
    gamma: PolyArc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Convention {
    Triangles,
    CrossingArcs,
    CrossingArcsPlusOne,
}

#[derive(Subcommand, Debug)]
enum TypeaCommand {
    /// Expand an arc through perfect matchings of its snake graph.
    Expand(PolygonArgs),
    /// Count perfect matchings and compare with a continuant.
    Count {
        #[command(flatten)]
        polygon: PolygonArgs,
        /// Sequence fed to the continuant.
        #[arg(long, value_enum, default_value_t = Convention::Triangles)]
        convention: Convention,
        /// Fail when the continuant differs from the matching count.
        #[arg(long)]
        check: bool,
    },
    /// Expand [x,y] on a path context through its triangulated polygon.
    Bridge {
        /// First endpoint in the extended path.
        #[arg(long)]
        x: Vertex,
        /// Second endpoint in the extended path.
        #[arg(long)]
        y: Vertex,
    },
}

fn parse_arc(s: &str) -> Result<PolyArc, String> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| format!("expected a-b, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Failures with their exit codes.
#[derive(Debug)]
enum Failure {
    /// Unreadable input: exit 2.
    Parse(String),
    /// Input that the engine rejects: exit 3.
    Domain(String),
    /// A check that came out false; the payload is the full report: exit 4.
    Mismatch(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) | Failure::Domain(m) | Failure::Mismatch(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

fn domain(e: lpsnake::Error) -> anyhow::Error {
    match e {
        lpsnake::Error::Parse(m) => Failure::Parse(m).into(),
        other => Failure::Domain(other.to_string()).into(),
    }
}

fn load_input(args: &InputArgs) -> Result<ContextInput> {
    if let Some(name) = &args.fixture {
        let ctx = match name.as_str() {
            "ctx0" => fixtures::ctx0(),
            "path3" => fixtures::path3(),
            "condition1" => fixtures::condition1_context(),
            "condition2" => fixtures::condition2_context(),
            "condition4" => fixtures::condition4_context(),
            other => return Err(Failure::Parse(format!("unknown fixture {other:?}")).into()),
        };
        return Ok(ContextInput::from_context(&ctx));
    }
    let raw = args
        .context
        .as_deref()
        .ok_or_else(|| Failure::Parse("no context given: pass --context or --fixture".into()))?;
    let text = if raw.trim_start().starts_with('{') {
        raw.to_string()
    } else {
        std::fs::read_to_string(raw)
            .map_err(|e| Failure::Parse(format!("cannot read {raw}: {e}")))?
    };
    ContextInput::from_json(&text).map_err(domain)
}

fn load_context(args: &InputArgs) -> Result<ClusterContext> {
    load_input(args)?.to_context().map_err(domain)
}

fn render_set(s: &[Vertex]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn text_only(format: Format, command: &str) -> Result<()> {
    match format {
        Format::Text | Format::Json => Ok(()),
        other => {
            Err(Failure::Parse(format!("{command} does not support --format {other:?}")).into())
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let mut out = String::new();
    match &cli.command {
        Command::Validate => {
            let input = load_input(&cli.input)?;
            let tree = input.tree().map_err(domain)?;
            let report = validate_nested_collection(&tree, &input.nested_collection);
            if cli.format == Format::Json {
                out = serde_json::to_string_pretty(&report)?;
            } else if report.violations.is_empty() && report.maximal {
                writeln!(
                    out,
                    "ok: maximal nested collection with {} members",
                    input.nested_collection.len()
                )?;
            } else {
                for v in &report.violations {
                    writeln!(out, "violation: {v}")?;
                }
                if report.violations.is_empty() {
                    writeln!(out, "violation: nested but not maximal")?;
                }
            }
            if !(report.violations.is_empty() && report.maximal) {
                let msg = out.trim_end().to_string();
                return Err(Failure::Domain(msg).into());
            }
        }
        Command::Expand(SetArg { set }) => {
            text_only(cli.format, "expand")?;
            let ctx = load_context(&cli.input)?;
            let g = build_snake_graph(&ctx, set).map_err(domain)?;
            let ms = enumerate_admissible(&g);
            let value = chi(&g);
            if cli.format == Format::Json {
                let terms: Vec<String> = ms
                    .iter()
                    .map(|m| weight(&g, m).to_expr().to_string())
                    .collect();
                out = serde_json::to_string_pretty(&serde_json::json!({
                    "set": set,
                    "matchings": ms.len(),
                    "terms": terms,
                    "ell": g.ell().to_expr().to_string(),
                    "expansion": value.to_string(),
                }))?;
            } else {
                writeln!(out, "S = {}", render_set(set))?;
                writeln!(out, "admissible matchings: {}", ms.len())?;
                for m in &ms {
                    writeln!(out, "  {}", weight(&g, m).to_expr())?;
                }
                writeln!(out, "ell = {}", g.ell().to_expr())?;
                writeln!(out, "Y_S = {value}")?;
            }
        }
        Command::Count {
            set: SetArg { set },
            check,
        } => {
            text_only(cli.format, "count")?;
            let ctx = load_context(&cli.input)?;
            let det = count_matchings(&ctx, set).map_err(domain)?;
            if *check {
                let g = build_snake_graph(&ctx, set).map_err(domain)?;
                let n = enumerate_admissible(&g).len();
                let ok = det.to_string() == n.to_string();
                let line = format!("det={det} enum={n} {}", if ok { "ok" } else { "mismatch" });
                if !ok {
                    return Err(Failure::Mismatch(line).into());
                }
                writeln!(out, "{line}")?;
            } else if cli.format == Format::Json {
                let m = count_matrix(&ctx, set).ok();
                out = serde_json::to_string_pretty(&serde_json::json!({
                    "set": set,
                    "det": det.to_string(),
                    "matrix": m,
                }))?;
            } else {
                writeln!(out, "det={det}")?;
            }
        }
        Command::Verify { set, random, max_n } => {
            text_only(cli.format, "verify")?;
            let contexts: Vec<ClusterContext> = match random {
                Some(count) => {
                    if *max_n < 2 {
                        return Err(Failure::Parse("--max-n must be at least 2".into()).into());
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..*count)
                        .map(|k| random_context(2 + k % (max_n - 1), &mut rng))
                        .collect()
                }
                None => vec![load_context(&cli.input)?],
            };
            let (mut checked, mut bad) = (0usize, Vec::new());
            for ctx in &contexts {
                let oracle = Oracle::new(ctx);
                let sets: Vec<Vec<Vertex>> = match set {
                    Some(s) if random.is_none() => vec![s.clone()],
                    _ => connected_subsets(ctx.tree())
                        .into_iter()
                        .filter(|s| ctx.is_weakly_rooted(s))
                        .collect(),
                };
                for s in sets {
                    let r = verify_with(&oracle, &s).map_err(domain)?;
                    checked += 1;
                    if !r.ok {
                        bad.push(format!(
                            "mismatch on edges {:?}, S={}: chi = {}, oracle = {}",
                            ctx.tree().edges(),
                            render_set(&s),
                            r.chi_reduced,
                            r.oracle
                        ));
                    }
                }
            }
            let summary = format!(
                "verified {checked} sets on {} contexts, {} mismatches",
                contexts.len(),
                bad.len()
            );
            if cli.format == Format::Json {
                out = serde_json::to_string_pretty(&serde_json::json!({
                    "checked": checked, "contexts": contexts.len(), "mismatches": bad,
                }))?;
            } else {
                for b in &bad {
                    writeln!(out, "{b}")?;
                }
                writeln!(out, "{summary}")?;
            }
            if !bad.is_empty() {
                return Err(Failure::Mismatch(out.trim_end().to_string()).into());
            }
        }
        Command::Oracle(SetArg { set }) => {
            text_only(cli.format, "oracle")?;
            let ctx = load_context(&cli.input)?;
            let y = Oracle::new(&ctx).y_set(set).map_err(domain)?;
            if cli.format == Format::Json {
                out = serde_json::to_string_pretty(
                    &serde_json::json!({ "set": set, "value": y.to_string() }),
                )?;
            } else {
                writeln!(out, "Y_{} = {y}", render_set(set))?;
            }
        }
        Command::Enumerate {
            set: SetArg { set },
            brute_force: brute,
        } => {
            text_only(cli.format, "enumerate")?;
            let ctx = load_context(&cli.input)?;
            let g = build_snake_graph(&ctx, set).map_err(domain)?;
            let ms = if *brute {
                if g.edges.len() > 24 {
                    return Err(Failure::Domain(format!(
                        "{} edges is too many for brute force",
                        g.edges.len()
                    ))
                    .into());
                }
                brute_force(&g, ConditionMask::ALL)
            } else {
                enumerate_admissible(&g)
            };
            if cli.format == Format::Json {
                out = matchings_to_json(&g, &ms);
            } else {
                for (k, m) in ms.iter().enumerate() {
                    writeln!(
                        out,
                        "{k}: edges {:?} weight {}",
                        m.edges,
                        weight(&g, m).to_expr()
                    )?;
                }
                writeln!(out, "{} admissible matchings", ms.len())?;
            }
        }
        Command::Tpath {
            set: SetArg { set },
            strict,
            path_cap,
            load,
        } => {
            text_only(cli.format, "tpath")?;
            let ctx = load_context(&cli.input)?;
            let g = build_snake_graph(&ctx, set).map_err(domain)?;
            let opts = ValidationOptions {
                strict: *strict,
                path_cap: *path_cap,
            };
            let paths = match load {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("cannot read {path}"))
                        .map_err(|e| Failure::Parse(format!("{e:#}")))?;
                    vec![tpath_from_json(&text).map_err(domain)?]
                }
                None => enumerate_admissible(&g)
                    .iter()
                    .map(|m| matching_to_tpath(&g, m))
                    .collect::<lpsnake::Result<Vec<_>>>()
                    .map_err(domain)?,
            };
            let reports: Vec<TPathReport> = paths
                .iter()
                .map(|a| validate_against(&ctx, &g, a, opts))
                .collect();
            if cli.format == Format::Json {
                let rows: Vec<serde_json::Value> = paths
                    .iter()
                    .zip(&reports)
                    .map(|(a, r)| serde_json::json!({ "weight": a.weight().to_string(), "report": r }))
                    .collect();
                out = serde_json::to_string_pretty(&rows)?;
            } else {
                for (k, (a, r)) in paths.iter().zip(&reports).enumerate() {
                    let status = if r.valid {
                        "valid".to_string()
                    } else {
                        format!("invalid, items {:?}", r.failed_items())
                    };
                    writeln!(out, "{k}: {status}; weight {}", a.weight())?;
                    for f in &r.failures {
                        writeln!(
                            out,
                            "    item {}: {} (nodes {:?})",
                            f.item, f.detail, f.nodes
                        )?;
                    }
                }
                writeln!(
                    out,
                    "{} T-paths, {} valid",
                    paths.len(),
                    reports.iter().filter(|r| r.valid).count()
                )?;
            }
            if reports.iter().any(|r| !r.valid) {
                return Err(Failure::Mismatch(out.trim_end().to_string()).into());
            }
        }
        Command::Typea { command } => out = run_typea(cli, command)?,
        Command::Export {
            what,
            set,
            matching,
        } => out = run_export(cli, *what, set.as_deref(), *matching)?,
    }
    Ok(out)
}

fn triangulation(p: &PolygonArgs) -> Result<Triangulation> {
    let polygon = Polygon::new(p.n).map_err(domain)?;
    Triangulation::new(polygon, &p.arcs).map_err(domain)
}

fn run_typea(cli: &Cli, command: &TypeaCommand) -> Result<String> {
    let mut out = String::new();
    match command {
        TypeaCommand::Expand(p) => {
            let t = triangulation(p)?;
            let g = build_ms_snake_graph(&t, p.gamma).map_err(domain)?;
            match cli.format {
                Format::Tikz => out = planar_snake_to_tikz(&g),
                Format::Dot => {
                    return Err(
                        Failure::Parse("typea expand supports text, json and tikz".into()).into(),
                    )
                }
                Format::Json => {
                    let value = expand_graph(&g).map_err(domain)?;
                    out = serde_json::to_string_pretty(&serde_json::json!({
                        "gamma": p.gamma, "tiles": g.tiles.len(), "matchings": perfect_matchings(&g).len(),
                        "expansion": value.to_string(),
                    }))?;
                }
                Format::Text => {
                    let value = expand_graph(&g).map_err(domain)?;
                    writeln!(out, "tiles: {}", g.tiles.len())?;
                    writeln!(out, "perfect matchings: {}", perfect_matchings(&g).len())?;
                    writeln!(out, "x_gamma = {value}")?;
                }
            }
        }
        TypeaCommand::Count {
            polygon: p,
            convention,
            check,
        } => {
            text_only(cli.format, "typea count")?;
            let t = triangulation(p)?;
            let g = build_ms_snake_graph(&t, p.gamma).map_err(domain)?;
            let conv = match convention {
                Convention::Triangles => FkConvention::Triangles,
                Convention::CrossingArcs => FkConvention::CrossingArcs,
                Convention::CrossingArcsPlusOne => FkConvention::CrossingArcsPlusOne,
            };
            let fs = polygon_f_values(&t, p.gamma, conv).map_err(domain)?;
            let k = polygon_count(&t, p.gamma, conv).map_err(domain)?;
            let n = perfect_matchings(&g).len();
            let ok = k.to_string() == n.to_string();
            if cli.format == Format::Json {
                out = serde_json::to_string_pretty(&serde_json::json!({
                    "f": fs, "continuant": k.to_string(), "matchings": n, "agree": ok,
                }))?;
            } else {
                writeln!(out, "f = {fs:?}")?;
                writeln!(
                    out,
                    "continuant={k} matchings={n} {}",
                    if ok { "ok" } else { "mismatch" }
                )?;
            }
            if *check && !ok {
                return Err(Failure::Mismatch(out.trim_end().to_string()).into());
            }
        }
        TypeaCommand::Bridge { x, y } => {
            let ctx = load_context(&cli.input)?;
            let bridge = path_lp_bridge(&ctx).map_err(domain)?;
            let gamma = bridge.gamma(*x, *y).map_err(domain)?;
            match cli.format {
                Format::Tikz => out = polygon_to_tikz(&bridge.triangulation, Some(gamma)),
                Format::Dot => {
                    return Err(
                        Failure::Parse("typea bridge supports text, json and tikz".into()).into(),
                    )
                }
                Format::Json | Format::Text => {
                    let set = bridge.set_for(*x, *y).map_err(domain)?;
                    let value = bridge.expand(*x, *y).map_err(domain)?;
                    if cli.format == Format::Json {
                        out = serde_json::to_string_pretty(&serde_json::json!({
                            "gamma": gamma, "set": set, "expansion": value.to_string(),
                        }))?;
                    } else {
                        writeln!(out, "gamma = {gamma:?}, S = {}", render_set(&set))?;
                        writeln!(out, "Y_S = {value}")?;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn pick(ms: &[Matching], k: Option<usize>) -> Result<Option<&Matching>> {
    match k {
        None => Ok(None),
        Some(k) => ms.get(k).map(Some).ok_or_else(|| {
            Failure::Domain(format!(
                "matching {k} out of range, {} admissible",
                ms.len()
            ))
            .into()
        }),
    }
}

fn snake_for(cli: &Cli, set: Option<&[Vertex]>) -> Result<(ClusterContext, SnakeGraph)> {
    let set = set.ok_or_else(|| Failure::Parse("--set is required".into()))?;
    let ctx = load_context(&cli.input)?;
    let g = build_snake_graph(&ctx, set).map_err(domain)?;
    Ok((ctx, g))
}

fn run_export(
    cli: &Cli,
    what: ExportItem,
    set: Option<&[Vertex]>,
    matching: Option<usize>,
) -> Result<String> {
    let unsupported = || -> anyhow::Error {
        Failure::Parse(format!(
            "export {what:?} does not support --format {:?}",
            cli.format
        ))
        .into()
    };
    Ok(match what {
        ExportItem::Context => {
            let ctx = load_context(&cli.input)?;
            let input = ContextInput::from_context(&ctx);
            match cli.format {
                Format::Json => input.to_json(),
                Format::Text => format!(
                    "vertices {:?}\nedges {:?}\nnested collection {:?}\n",
                    input.vertices, input.edges, input.nested_collection
                ),
                _ => return Err(unsupported()),
            }
        }
        ExportItem::Snake => {
            let (ctx, g) = snake_for(cli, set)?;
            let ms = enumerate_admissible(&g);
            let hl = pick(&ms, matching)?;
            match cli.format {
                Format::Json => snake_to_json(&g),
                Format::Dot => snake_to_dot(&ctx, &g, hl),
                Format::Tikz => snake_to_tikz(&ctx, &g, hl),
                Format::Text => g.signature().join("\n") + "\n",
            }
        }
        ExportItem::Matchings => {
            let (_, g) = snake_for(cli, set)?;
            let ms = enumerate_admissible(&g);
            match cli.format {
                Format::Json => matchings_to_json(&g, &ms),
                Format::Text => ms
                    .iter()
                    .map(|m| format!("{:?} {}\n", m.edges, weight(&g, m).to_expr()))
                    .collect(),
                _ => return Err(unsupported()),
            }
        }
        ExportItem::Tpath => {
            let (ctx, g) = snake_for(cli, set)?;
            let ms = enumerate_admissible(&g);
            let m = pick(&ms, Some(matching.unwrap_or(0)))?.expect("an index was given");
            let alpha = matching_to_tpath(&g, m).map_err(domain)?;
            match cli.format {
                Format::Json => tpath_to_json(&alpha),
                Format::Dot => tpath_to_dot(&ctx, &alpha),
                Format::Tikz => tpath_to_tikz(&ctx, &alpha),
                Format::Text => {
                    format!("weight {}\nodd {:?}\n", alpha.weight(), alpha.odd_sources())
                }
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.is_empty() && !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => match e.downcast_ref::<Failure>() {
            Some(Failure::Mismatch(report)) => {
                println!("{report}");
                ExitCode::from(4)
            }
            Some(Failure::Domain(m)) => {
                eprintln!("error: {m}");
                ExitCode::from(3)
            }
            Some(Failure::Parse(m)) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
