use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use visguard::arrangement::{build_dual, decompose, Decomposition, DualGraph};
use visguard::epsnet::{bg_solve_from, kk::KkNetFinder, Eps, RandomNetFinder};
use visguard::io::{parse_guards, parse_polygon, write_rat};
use visguard::rangespace::{build_range_space, range_space_from};
use visguard::solvers::{
    exact_guards_capped, greedy_guards, verify_guard_set, GuardSet, DEFAULT_ORACLE_CAP,
};
use visguard::visibility::WindowKind;
use visguard::{stats, svg, PolygonWithHoles, VertexSet};

#[derive(Parser)]
#[command(name = "visguard", version, about = "Vertex guards for polygons with holes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed for the randomized solvers and audits. The VISGUARD_SEED
    /// environment variable, when set, overrides this flag.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Interior sample count for coverage audits.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,

    /// First epsilon guess for the net solvers, written 1 or 1/2^k.
    #[arg(long, global = true, default_value = "1/2")]
    epsilon_start: String,

    /// Largest vertex count the exact solver will accept.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Greedy,
    Bg,
    Kk,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Print window, crossing, and cell counts for a polygon file.
    Decompose {
        file: PathBuf,
        /// Also list every cell with its visible vertex set.
        #[arg(long)]
        cells: bool,
    },
    /// List the sink cells and their visible vertex sets.
    Sinks { file: PathBuf },
    /// Compute a guard set; ids go to stdout, the size to stderr.
    Guard {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Greedy)]
        method: MethodArg,
    },
    /// Print decomposition and solver statistics for one or more files.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Emit CSV instead of the aligned table.
        #[arg(long)]
        csv: bool,
    },
    /// Render the decomposition, sinks, and guards as an SVG file.
    Render {
        file: PathBuf,
        /// Output path for the SVG document.
        #[arg(long)]
        svg: PathBuf,
        /// Guard ids to mark, one per line; greedy guards when omitted.
        #[arg(long)]
        guards: Option<PathBuf>,
    },
    /// Check a guard file: sink-range cover plus a sampled interior audit.
    Verify {
        file: PathBuf,
        /// Guard ids, one per line.
        #[arg(long)]
        guards: PathBuf,
    },
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<std::process::ExitCode> {
    let seed = match std::env::var("VISGUARD_SEED") {
        Ok(text) => text
            .parse::<u64>()
            .with_context(|| format!("VISGUARD_SEED is not a u64: {text:?}"))?,
        Err(_) => cli.seed,
    };
    let eps_start = Eps::from_str(&cli.epsilon_start)?;

    let ok = std::process::ExitCode::SUCCESS;
    match cli.command {
        Command::Decompose { file, cells } => cmd_decompose(&file, cells).map(|_| ok),
        Command::Sinks { file } => cmd_sinks(&file).map(|_| ok),
        Command::Guard { file, method } => {
            cmd_guard(&file, method, seed, eps_start, cli.oracle_cap).map(|_| ok)
        }
        Command::Stats { files, csv } => {
            cmd_stats(&files, csv, seed, eps_start, cli.oracle_cap).map(|_| ok)
        }
        Command::Render { file, svg, guards } => {
            cmd_render(&file, &svg, guards.as_deref()).map(|_| ok)
        }
        Command::Verify { file, guards } => {
            cmd_verify(&file, &guards, cli.samples, seed, cli.oracle_cap)
        }
    }
}

fn load_polygon(path: &Path) -> anyhow::Result<PolygonWithHoles> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let poly = parse_polygon(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(poly)
}

fn point_text(p: &visguard::Point) -> String {
    format!("({}, {})", write_rat(&p.x), write_rat(&p.y))
}

fn ids_text(set: &VertexSet) -> String {
    set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn decompose_with_dual(poly: &PolygonWithHoles) -> anyhow::Result<(Decomposition, DualGraph)> {
    let decomp = decompose(poly)?;
    let dual = build_dual(&decomp)?;
    Ok((decomp, dual))
}

fn cmd_decompose(file: &Path, cells: bool) -> anyhow::Result<()> {
    let poly = load_polygon(file)?;
    let decomp = decompose(&poly)?;
    let mut by_kind = [0usize; 3];
    for w in decomp.windows() {
        let slot = match w.kind {
            WindowKind::Left => 0,
            WindowKind::Right => 1,
            WindowKind::Trans => 2,
        };
        by_kind[slot] += 1;
    }
    println!("n: {}", poly.vertex_count());
    println!("holes: {}", poly.hole_count());
    println!(
        "windows: {} (left {}, right {}, trans {})",
        decomp.windows().len(),
        by_kind[0],
        by_kind[1],
        by_kind[2]
    );
    println!("crossings: {}", decomp.crossing_count());
    println!("cells: {}", decomp.cell_count());
    if cells {
        for (i, cell) in decomp.cells().iter().enumerate() {
            println!("cell {}: rep {} sees {}", i, point_text(&cell.rep), ids_text(&cell.visible));
        }
    }
    Ok(())
}

fn cmd_sinks(file: &Path) -> anyhow::Result<()> {
    let poly = load_polygon(file)?;
    let (decomp, dual) = decompose_with_dual(&poly)?;
    let sinks = dual.sinks();
    println!("sinks: {}", sinks.len());
    for &s in &sinks {
        let cell = &decomp.cells()[s];
        println!("sink {}: rep {} sees {}", s, point_text(&cell.rep), ids_text(&cell.visible));
    }
    Ok(())
}

fn kk_start(eps_start: Eps) -> Eps {
    if eps_start.neg_log2() < 2 {
        Eps::pow2(2)
    } else {
        eps_start
    }
}

fn cmd_guard(
    file: &Path,
    method: MethodArg,
    seed: u64,
    eps_start: Eps,
    oracle_cap: usize,
) -> anyhow::Result<()> {
    let poly = load_polygon(file)?;
    let rs = build_range_space(&poly)?;
    let gs: GuardSet = match method {
        MethodArg::Greedy => greedy_guards(&rs),
        MethodArg::Exact => exact_guards_capped(&rs, oracle_cap)?,
        MethodArg::Bg => {
            let mut finder = RandomNetFinder::new(poly.hole_count());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            bg_solve_from(&rs, &mut finder, eps_start, &mut rng)?.guards
        }
        MethodArg::Kk => {
            let mut finder = KkNetFinder::new(&poly)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            bg_solve_from(&rs, &mut finder, kk_start(eps_start), &mut rng)?.guards
        }
    };
    for id in gs.guards.iter() {
        println!("{id}");
    }
    eprintln!("{} guards ({})", gs.guards.len(), gs.method);
    Ok(())
}

fn cmd_stats(
    files: &[PathBuf],
    csv: bool,
    seed: u64,
    eps_start: Eps,
    oracle_cap: usize,
) -> anyhow::Result<()> {
    let mut reports = Vec::new();
    for file in files {
        let poly = load_polygon(file)?;
        let name = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        let report = stats::compute_stats(&name, &poly, seed, oracle_cap, eps_start)
            .with_context(|| format!("computing stats for {}", file.display()))?;
        reports.push(report);
    }
    if csv {
        print!("{}", stats::csv(&reports));
    } else {
        print!("{}", stats::table(&reports));
    }
    Ok(())
}

fn cmd_render(file: &Path, out: &Path, guards: Option<&Path>) -> anyhow::Result<()> {
    let poly = load_polygon(file)?;
    let (decomp, dual) = decompose_with_dual(&poly)?;
    let guard_set = match guards {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_guards(&text, poly.vertex_count())?
        }
        None => {
            let rs = range_space_from(&decomp, &dual)?;
            greedy_guards(&rs).guards
        }
    };
    let doc = svg::render_svg(&decomp, &dual.sinks(), &guard_set);
    fs::write(out, doc).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn cmd_verify(
    file: &Path,
    guards: &Path,
    samples: usize,
    seed: u64,
    oracle_cap: usize,
) -> anyhow::Result<std::process::ExitCode> {
    let poly = load_polygon(file)?;
    let text =
        fs::read_to_string(guards).with_context(|| format!("reading {}", guards.display()))?;
    let guard_set = parse_guards(&text, poly.vertex_count())?;
    let report = verify_guard_set(&poly, &guard_set, samples, seed, oracle_cap)?;

    println!("guards: {}", guard_set.len());
    println!("covers: {}", report.covers);
    println!("audit: {} failures out of {} samples", report.audit_failures.len(), samples);
    match (report.opt, report.ratio) {
        (Some(opt), Some(ratio)) => println!("opt: {opt} (ratio {ratio:.2})"),
        _ => println!("opt: not computed (above oracle cap)"),
    }
    for p in report.audit_failures.iter().take(5) {
        println!("unseen: {}", point_text(p));
    }
    if !report.covers {
        eprintln!("error: guard set leaves at least one sink range unhit");
        return Ok(std::process::ExitCode::FAILURE);
    }
    if !report.audit_failures.is_empty() {
        eprintln!("error: guard set misses {} sampled points", report.audit_failures.len());
        return Ok(std::process::ExitCode::FAILURE);
    }
    Ok(std::process::ExitCode::SUCCESS)
}
