//! Command-line interface: build and verify quotient veering triangulations,
//! inspect hulls, layerings, and staircases, and draw loom windows as SVG.

mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use loomweaver::geodesy::{hull, hull_convexity_check, PathNode, Quadrant, staircase_cusps};
use loomweaver::layering::{certified_exhaustion, certify_ball, layer, FlipPolicy};
use loomweaver::loom::{Cusp, LatticeLoom, Monodromy, Rect};
use loomweaver::skeletal::{enumerate_edges, enumerate_face_connected, EdgeRect};
use loomweaver::triangulate::{
    check_locally_veering, check_taut, check_veering, quotient, read_json, write_json,
    CheckReport, CheckStatus, SymmetryGroup,
};

#[derive(Parser)]
#[command(name = "loomweaver", version, about = "Veering triangulations of punctured-torus bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the quotient triangulation of a mapping torus and write it as JSON.
    Build(BuildArgs),
    /// Re-run structure checks on a triangulation file.
    Verify { file: PathBuf },
    /// Hull of a face-connected tetrahedron enumeration, with convexity spot checks.
    Hull(HullArgs),
    /// Layer a hull and certify that its content is a three-ball.
    Layer(LayerArgs),
    /// Exterior cusps of a staircase with their axis projections.
    Staircase(StairArgs),
    /// Draw a window of the loom as SVG.
    Draw(DrawArgs),
}

#[derive(Args)]
struct MonodromyArgs {
    /// Monodromy matrix entries "a,b,c,d" (row major).
    #[arg(long, value_name = "a,b,c,d", conflicts_with = "word")]
    matrix: Option<String>,
    /// Monodromy word over R and L, multiplied left to right.
    #[arg(long)]
    word: Option<String>,
}

impl MonodromyArgs {
    fn monodromy(&self) -> Result<Monodromy> {
        if let Some(m) = &self.matrix {
            let parts: Vec<i64> = m
                .split(',')
                .map(|p| p.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("parsing matrix {m:?}"))?;
            if parts.len() != 4 {
                bail!("--matrix needs exactly four entries");
            }
            Ok(Monodromy::from_entries(parts[0], parts[1], parts[2], parts[3])?)
        } else if let Some(w) = &self.word {
            Ok(Monodromy::from_word(w)?)
        } else {
            bail!("one of --matrix or --word is required");
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    monodromy: MonodromyArgs,
    /// Initial window half-size for orbit enumeration.
    #[arg(long, default_value_t = 8)]
    window: i64,
    /// Output path for the triangulation JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HullArgs {
    #[command(flatten)]
    monodromy: MonodromyArgs,
    /// Number of tetrahedra to enumerate.
    #[arg(long, default_value_t = 5)]
    tets: usize,
    /// Convexity spot-check sample count.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Seed for sampled property checks.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct LayerArgs {
    #[command(flatten)]
    monodromy: MonodromyArgs,
    /// Number of tetrahedra to enumerate before hulling.
    #[arg(long, default_value_t = 1)]
    tets: usize,
    /// Output path for the flip sequence JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StairArgs {
    #[command(flatten)]
    monodromy: MonodromyArgs,
    /// Staircase quadrant: NE, NW, SW, or SE.
    #[arg(long, default_value = "NE")]
    quadrant: String,
    /// Window half-size.
    #[arg(long, default_value_t = 8)]
    window: i64,
    /// Base cusp "x,y" in lattice coordinates.
    #[arg(long, default_value = "0,0")]
    base: String,
}

#[derive(Args)]
struct DrawArgs {
    #[command(flatten)]
    monodromy: MonodromyArgs,
    /// Window half-size.
    #[arg(long, default_value_t = 4)]
    window: i64,
    /// Output SVG path.
    #[arg(long)]
    svg: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Verify { file } => cmd_verify(&file),
        Command::Hull(args) => cmd_hull(args),
        Command::Layer(args) => cmd_layer(args),
        Command::Staircase(args) => cmd_staircase(args),
        Command::Draw(args) => cmd_draw(args),
    }
}

fn status_mark(r: &CheckReport) -> &'static str {
    match r.status() {
        CheckStatus::Pass => "ok",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Indeterminate => "indeterminate",
    }
}

fn cmd_build(args: BuildArgs) -> Result<bool> {
    let m = args.monodromy.monodromy()?;
    let loom = LatticeLoom::new(m)?;
    let group = SymmetryGroup::mapping_torus(loom.monodromy());
    let mut q = quotient(&loom, &group, args.window)?;
    q.tri.meta.word = args.monodromy.word.clone().map(|w| w.to_uppercase());
    println!("monodromy: {:?} (trace {}, det {})", m.matrix().0, m.trace(), m.det());
    println!("tetrahedra: {}", q.tri.tets.len());
    let classes = q.tri.edge_classes();
    let degrees: Vec<String> = classes
        .iter()
        .map(|c| {
            let colour = c
                .colour(&q.tri)
                .map(|c| c.to_string())
                .unwrap_or_else(|| "mixed".to_string());
            format!("{} ({colour})", c.degree())
        })
        .collect();
    println!("edge classes: {} with degrees {}", classes.len(), degrees.join(", "));
    let taut = check_taut(&q.tri);
    let veering = check_veering(&q.tri);
    let locally = check_locally_veering(&q.tri);
    println!("taut: {}", status_mark(&taut));
    println!("veering: {}", status_mark(&veering));
    println!("locally veering: {}", status_mark(&locally));
    if let Some(path) = &args.out {
        std::fs::write(path, write_json(&q.tri))
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    // Veering may legitimately fail for non-orientable quotients; the
    // contract there is the local check.
    Ok(taut.passed() && locally.passed() && (veering.passed() || m.det() == -1))
}

fn cmd_verify(file: &PathBuf) -> Result<bool> {
    let text = std::fs::read_to_string(file)
        .with_context(|| format!("reading {}", file.display()))?;
    let tri = read_json(&text)?;
    println!("tetrahedra: {}", tri.tets.len());
    let violations = tri.manifold_violations();
    if violations.is_empty() {
        println!("pairings: ok");
    } else {
        for v in &violations {
            println!("pairings: {v}");
        }
    }
    let taut = check_taut(&tri);
    let veering = check_veering(&tri);
    let locally = check_locally_veering(&tri);
    for r in [&taut, &veering, &locally] {
        println!("{}: {}", r.name, status_mark(r));
        for v in &r.violations {
            println!("  {v}");
        }
    }
    Ok(violations.is_empty() && taut.passed() && locally.passed())
}

/// A deterministic starting edge: the least edge of the smallest window
/// containing one.
fn default_seed_edge(loom: &LatticeLoom) -> Result<EdgeRect> {
    for half in [2i64, 4, 8, 16, 32] {
        let edges = enumerate_edges(loom, &Rect::window(half, loom.field()));
        if let Some(e) = edges.into_iter().next() {
            return Ok(e);
        }
    }
    Err(anyhow!("no edge rectangle found in any window"))
}

fn cmd_hull(args: HullArgs) -> Result<bool> {
    let loom = LatticeLoom::new(args.monodromy.monodromy()?)?;
    let seed = default_seed_edge(&loom)?;
    let tets = enumerate_face_connected(&loom, &seed, args.tets);
    let cusps: std::collections::BTreeSet<Cusp> = tets.iter().flat_map(|t| t.cusps()).collect();
    let cusps: Vec<Cusp> = cusps.into_iter().collect();
    let h = hull(&loom, &cusps);
    println!("tetrahedra enumerated: {}", tets.len());
    println!("hull cusps: {}", h.cusps.len());
    println!("components: {}", h.components.len());
    for (i, comp) in h.components.iter().enumerate() {
        let ring: Vec<String> = comp
            .boundary_cusps
            .iter()
            .map(|c| format!("({},{})", c.x, c.y))
            .collect();
        println!("component {i}: boundary [{}]", ring.join(" "));
        if !comp.interior_cusps.is_empty() {
            let inner: Vec<String> = comp
                .interior_cusps
                .iter()
                .map(|c| format!("({},{})", c.x, c.y))
                .collect();
            println!("component {i}: interior [{}]", inner.join(" "));
        }
    }
    let convexity = hull_convexity_check(&loom, &cusps, args.samples, args.seed);
    println!(
        "convexity: {} ({} samples)",
        if convexity.passed() { "ok" } else { "FAIL" },
        convexity.samples
    );
    Ok(convexity.passed())
}

fn cmd_layer(args: LayerArgs) -> Result<bool> {
    let loom = LatticeLoom::new(args.monodromy.monodromy()?)?;
    let seed = default_seed_edge(&loom)?;
    let tets = certified_exhaustion(&loom, &seed, args.tets)?;
    let cusps: std::collections::BTreeSet<Cusp> = tets.iter().flat_map(|t| t.cusps()).collect();
    let cusps: Vec<Cusp> = cusps.into_iter().collect();
    let h = hull(&loom, &cusps);
    let run = layer(&loom, &h, FlipPolicy::LexMin)?;
    let report = certify_ball(&loom, &run.flips, &run.content)?;
    println!(
        "{} flips over {} content tetrahedra, ball {}",
        run.flips.steps.len(),
        run.content.len(),
        if report.passed() { "ok" } else { "FAIL" }
    );
    for c in &report.checks {
        println!(
            "  {}: {}{}",
            c.name,
            if c.ok { "ok" } else { "FAIL" },
            if c.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", c.detail)
            }
        );
    }
    if let Some(path) = &args.out {
        std::fs::write(path, run.flips.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(report.passed())
}

fn cmd_staircase(args: StairArgs) -> Result<bool> {
    let loom = LatticeLoom::new(args.monodromy.monodromy()?)?;
    let quadrant = match args.quadrant.to_uppercase().as_str() {
        "NE" => Quadrant::NE,
        "NW" => Quadrant::NW,
        "SW" => Quadrant::SW,
        "SE" => Quadrant::SE,
        other => bail!("unknown quadrant {other:?}"),
    };
    let base: Vec<i64> = args
        .base
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .context("parsing --base")?;
    if base.len() != 2 {
        bail!("--base needs two lattice coordinates");
    }
    if args.window < 2 {
        bail!("window half-size must be at least 2");
    }
    let window = Rect::window(args.window, loom.field());
    let stair = staircase_cusps(
        &loom,
        &PathNode::Cusp(Cusp::new(base[0], base[1])),
        quadrant,
        &window,
    );
    println!(
        "staircase at ({},{}) towards {} in window {}:",
        base[0], base[1], quadrant, args.window
    );
    println!("exterior cusps: {}", stair.exterior.len());
    for e in &stair.exterior {
        println!(
            "  ({},{})  pi_m = {}  pi_ell = {}",
            e.cusp.x,
            e.cusp.y,
            e.proj_m.to_decimal(6),
            e.proj_ell.to_decimal(6)
        );
    }
    // Monotonicity: along the rays, m projections move away from the base
    // while ell projections move towards it.
    let (sx, sy) = quadrant.signs();
    let monotone = stair.exterior.windows(2).all(|w| {
        let dm = w[1].proj_m.cmp(&w[0].proj_m);
        let dl = w[1].proj_ell.cmp(&w[0].proj_ell);
        let away = if sx > 0 { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
        let toward = if sy > 0 { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater };
        dm == away && dl == toward
    });
    println!("projections monotone opposite: {}", if monotone { "ok" } else { "FAIL" });
    Ok(monotone)
}

fn cmd_draw(args: DrawArgs) -> Result<bool> {
    let loom = LatticeLoom::new(args.monodromy.monodromy()?)?;
    if args.window < 2 {
        bail!("window half-size must be at least 2");
    }
    let seed = default_seed_edge(&loom)?;
    let text = svg::draw_window(&loom, args.window, &seed);
    std::fs::write(&args.svg, text).with_context(|| format!("writing {}", args.svg.display()))?;
    println!("wrote {}", args.svg.display());
    Ok(true)
}
