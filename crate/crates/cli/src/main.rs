//! `twostep`: build graphs, colourings, covers and regions, and run the exact
//! verifications from the command line.

mod manifest;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twostep_core::constructions::{
    cycle_alternating, cycle_half, cycle_three_quarters, half_split, half_split_target, linf,
    tile_deviation_bound, tile_torus, unordered_deviation, weighted_average,
};
use twostep_core::covers::{
    cover_hamming, cover_r1, cover_r2, cover_r2m, cover_rm, lift_cover, Prefilter,
};
use twostep_core::frac::{self, q};
use twostep_core::region::{d_region, torus2_region, x_region};
use twostep_core::torus2::{min_margin, t2_batch, t2_rows_csv};
use twostep_core::*;

use manifest::Run;

const EXIT_PARAMETER: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "twostep",
    version,
    about = "Exact two-step transit probabilities of balanced colourings"
)]
struct Cli {
    /// Worker threads for enumeration (overrides TWOSTEP_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Where to write the run manifest.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write it as JSON.
    Graph {
        #[command(subcommand)]
        kind: GraphKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Exact P_t pair of a colouring.
    Prob {
        #[arg(long)]
        graph: PathBuf,
        /// File holding an R/B string, one character per vertex.
        #[arg(long)]
        colouring: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a reference region as JSON.
    Region {
        #[command(flatten)]
        which: RegionChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate or sample balanced colourings and collect their P_2 pairs.
    Enumerate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
        /// Also overlay X_{2m} for this m.
        #[arg(long)]
        x_m: Option<usize>,
    },
    /// Build, verify or search for independent exact r-covers.
    Cover {
        #[command(subcommand)]
        action: CoverAction,
    },
    /// Build a colouring and report its P_2 pair.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Where to write the colouring string.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        /// Where to write the JSON report (stdout otherwise).
        #[arg(long, global = true)]
        report: Option<PathBuf>,
    },
    /// Check the local claims and the lower bound on sampled colourings of [k]^2.
    Claims {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV with one row per colouring.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphKind {
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Torus {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    C4union {
        #[arg(long)]
        copies: usize,
    },
    /// The 40-vertex cubic graph: two 20-cycles joined by a doubled matching.
    #[command(alias = "paper40")]
    Cubic40,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct RegionChoice {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    x_m: Option<usize>,
    #[arg(long)]
    t2: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Family {
    Linear,
    Hamming,
    R1,
    R2,
    Rm,
    R2m,
}

#[derive(Args)]
struct CoverSpec {
    /// Read the predicate from a JSON file instead of the family flags.
    #[arg(long)]
    cover: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<i64>>,
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long)]
    l: Option<u32>,
    /// Sum blocks of this many coordinates.
    #[arg(long)]
    lift: Option<usize>,
}

#[derive(Subcommand)]
enum CoverAction {
    Build {
        #[command(flatten)]
        spec: CoverSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[command(flatten)]
        spec: CoverSpec,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        max_points: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CycleKind {
    Half,
    Alternating,
    ThreeQuarters,
}

#[derive(Subcommand)]
enum ConstructKind {
    Halfsplit {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        /// Cover JSON; defaults to the standard construction for r.
        #[arg(long)]
        cover: Option<PathBuf>,
    },
    Cycle {
        #[arg(long, value_enum)]
        kind: CycleKind,
        #[arg(long)]
        n: usize,
    },
    /// Tile [kt]^m with blocks coloured by two colourings of [k]^m.
    Tile {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        /// R/B string file for the first s blocks.
        #[arg(long)]
        c1: PathBuf,
        /// R/B string file for the remaining blocks.
        #[arg(long)]
        c2: PathBuf,
    },
}

/// A verification that ran to completion but did not hold.
#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn workers(flag: Option<usize>) -> Result<usize> {
    if let Some(w) = flag {
        return Ok(w.max(1));
    }
    match std::env::var("TWOSTEP_WORKERS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|w| w.max(1))
            .with_context(|| format!("TWOSTEP_WORKERS={v:?} is not a number")),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn pair_json(p: &RationalPair) -> Value {
    json!({ "x": frac::to_string(&p.x), "y": frac::to_string(&p.y) })
}

fn load_graph(run: &mut Run, path: &Path) -> Result<Arc<Graph>> {
    let text = run.read(path)?;
    Ok(Arc::new(Graph::from_json(&text)?))
}

fn load_colouring(run: &mut Run, g: Arc<Graph>, path: &Path) -> Result<Colouring> {
    let text = run.read(path)?;
    Ok(Colouring::parse(g, text.trim())?)
}

fn cmd_graph(run: &mut Run, kind: GraphKind, out: Option<PathBuf>) -> Result<()> {
    let g = match kind {
        GraphKind::Cycle { n } => Graph::cycle(n)?,
        GraphKind::Torus { m, k } => Graph::torus(m, k)?,
        GraphKind::C4union { copies } => Graph::c4_union(copies)?,
        GraphKind::Cubic40 => Graph::cubic40(),
    };
    run.emit(out.as_deref(), &(g.to_json() + "\n"))?;
    if out.is_some() {
        eprintln!(
            "{}: {} vertices, degree {}, {} edges",
            g.label(),
            g.n(),
            g.d(),
            g.edge_count()
        );
    }
    Ok(())
}

fn cmd_prob(
    run: &mut Run,
    graph: &Path,
    colouring: &Path,
    t: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let g = load_graph(run, graph)?;
    let c = load_colouring(run, g, colouring)?;
    let pair = pt(&c, t)?;
    let v = json!({ "t": t, "x": frac::to_string(&pair.x), "y": frac::to_string(&pair.y) });
    run.emit(out.as_deref(), &pretty(&v))
}

fn cmd_region(run: &mut Run, which: RegionChoice, out: Option<PathBuf>) -> Result<()> {
    let region = match (which.d, which.x_m, which.t2) {
        (Some(d), _, _) => d_region(d)?,
        (_, Some(m), _) => x_region(m)?,
        _ => torus2_region(),
    };
    run.emit(out.as_deref(), &(region.to_json() + "\n"))
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    run: &mut Run,
    graph: &Path,
    mode: Mode,
    samples: usize,
    seed: u64,
    out: &Path,
    svg_flag: bool,
    x_m: Option<usize>,
) -> Result<PathBuf> {
    let g = load_graph(run, graph)?;
    let mode = match mode {
        Mode::Exhaustive => EnumerationMode::Exhaustive,
        Mode::Sample => {
            run.seed = Some(seed);
            EnumerationMode::Sample {
                count: samples,
                seed,
            }
        }
    };
    let cloud = enumerate_region(&g, mode, run.workers)?;
    let d_reg = d_region(g.d())?;
    let x_reg = x_m.map(x_region).transpose()?;
    let violations = check_containment(&cloud, &d_reg);

    run.emit(Some(&out.join("cloud.csv")), &cloud.to_csv())?;
    let mut hull = cloud.to_json_value();
    let mut overlays = vec![json!({"role": "container", "region": d_reg.to_file()})];
    if let Some(x) = &x_reg {
        overlays.push(json!({"role": "inner", "region": x.to_file()}));
    }
    hull["overlays"] = Value::Array(overlays);
    hull["outside_container"] = json!(violations.len());
    run.emit(Some(&out.join("hull.json")), &pretty(&hull))?;

    if svg_flag {
        let points: Vec<RationalPair> = cloud
            .distinct_points()
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        let mut layers = vec![
            svg::Overlay {
                region: &cloud.hull,
                stroke: svg::Stroke::Solid,
                colour: "black",
            },
            svg::Overlay {
                region: &d_reg,
                stroke: svg::Stroke::Dashed,
                colour: "blue",
            },
        ];
        if let Some(x) = &x_reg {
            layers.push(svg::Overlay {
                region: x,
                stroke: svg::Stroke::Dotted,
                colour: "red",
            });
        }
        run.emit(Some(&out.join("cloud.svg")), &svg::render(&points, &layers))?;
    }
    eprintln!(
        "{}: {} colourings, {} distinct pairs, {} hull vertices",
        cloud.label,
        cloud.colourings_enumerated,
        cloud.distinct_points().len(),
        cloud.hull.vertices().len()
    );
    if !violations.is_empty() {
        return Err(VerificationFailed(format!(
            "{} colourings fall outside D_{}",
            violations.len(),
            g.d()
        ))
        .into());
    }
    Ok(out.join("manifest.json"))
}

fn build_cover(run: &mut Run, spec: &CoverSpec) -> Result<CoverPredicate> {
    let base = if let Some(path) = &spec.cover {
        CoverPredicate::from_json(&run.read(path)?)?
    } else {
        let family = spec
            .family
            .ok_or_else(|| anyhow!("give --cover FILE or --family"))?;
        let need_m = || {
            spec.m
                .ok_or_else(|| anyhow!("--m is required for this family"))
        };
        match family {
            Family::Linear => {
                let weights = spec
                    .weights
                    .clone()
                    .ok_or_else(|| anyhow!("--weights is required"))?;
                let modulus = spec
                    .modulus
                    .ok_or_else(|| anyhow!("--modulus is required"))?;
                let pred = CoverPredicate::linear(weights, modulus)?;
                if let Some(m) = spec.m {
                    if m != pred.m() {
                        return Err(Error::InvalidParameter(format!(
                            "--m {m} but {} weights were given",
                            pred.m()
                        ))
                        .into());
                    }
                }
                pred
            }
            Family::Hamming => {
                let l = spec.l.ok_or_else(|| anyhow!("--l is required"))?;
                cover_hamming(l)?
            }
            Family::R1 => cover_r1(need_m()?)?,
            Family::R2 => cover_r2(need_m()?)?,
            Family::Rm => cover_rm(need_m()?)?,
            Family::R2m => cover_r2m(need_m()?)?,
        }
    };
    Ok(match spec.lift {
        Some(lambda) => lift_cover(&base, lambda)?,
        None => base,
    })
}

fn cmd_cover(run: &mut Run, action: CoverAction) -> Result<()> {
    match action {
        CoverAction::Build { spec, out } => {
            let pred = build_cover(run, &spec)?;
            eprintln!(
                "cover in Z^{} with period {:?}, period density {}",
                pred.m(),
                pred.period(),
                frac::to_string(&pred.period_density()?)
            );
            run.emit(out.as_deref(), &(pred.to_json() + "\n"))
        }
        CoverAction::Verify { spec, k, r, out } => {
            let pred = build_cover(run, &spec)?;
            let report = verify_on_torus(&pred, k, r)?;
            let mut v = report.to_json_value();
            v["k"] = json!(k);
            v["m"] = json!(pred.m());
            v["cover"] = serde_json::to_value(pred.to_file())?;
            run.emit(out.as_deref(), &pretty(&v))?;
            eprintln!(
                "[{k}]^{}: {} members, density {}: {}",
                pred.m(),
                report.members,
                frac::to_string(&report.density),
                if report.passes() { "pass" } else { "FAIL" }
            );
            if report.passes() {
                Ok(())
            } else {
                Err(VerificationFailed(format!("not an independent exact {r}-cover")).into())
            }
        }
        CoverAction::Search {
            m,
            k,
            r,
            max_nodes,
            max_points,
            out,
        } => {
            let defaults = SearchLimits::default();
            let limits = SearchLimits {
                max_nodes: max_nodes.unwrap_or(defaults.max_nodes),
                max_points: max_points.unwrap_or(defaults.max_points),
            };
            let outcome = exhaustive_cover_search(m, k, r, limits)?;
            let v = match &outcome {
                SearchOutcome::Found {
                    members,
                    report,
                    nodes_explored,
                } => {
                    eprintln!(
                        "found a cover with {} points after {nodes_explored} nodes",
                        members.len()
                    );
                    json!({
                        "outcome": "found",
                        "m": m, "k": k, "r": r,
                        "nodes_explored": nodes_explored,
                        "members": members,
                        "report": report.to_json_value(),
                    })
                }
                SearchOutcome::NonExistent(cert) => {
                    match cert.prefilter {
                        Prefilter::Failed {
                            numerator,
                            denominator,
                        } => eprintln!(
                            "no cover: {numerator}/{denominator} points is not an integer"
                        ),
                        Prefilter::Passed { target } => eprintln!(
                            "no cover of size {target}: search tree exhausted after {} nodes",
                            cert.nodes_explored
                        ),
                    }
                    json!({ "outcome": "non-existent", "certificate": cert })
                }
            };
            run.emit(out.as_deref(), &pretty(&v))
        }
    }
}

fn default_cover(m: usize, r: usize) -> Result<CoverPredicate> {
    Ok(match r {
        1 => cover_r1(m)?,
        2 => cover_r2(m)?,
        _ if r == m => cover_rm(m)?,
        _ if r == 2 * m => cover_r2m(m)?,
        _ => bail!(Error::InvalidParameter(format!(
            "no built-in cover for m = {m}, r = {r}; pass --cover"
        ))),
    })
}

fn cmd_construct(
    run: &mut Run,
    kind: ConstructKind,
    out: Option<PathBuf>,
    report_path: Option<PathBuf>,
) -> Result<()> {
    let (colouring, report) = match kind {
        ConstructKind::Halfsplit { m, r, k, cover } => {
            let pred = match cover {
                Some(path) => CoverPredicate::from_json(&run.read(&path)?)?,
                None => default_cover(m, r)?,
            };
            let (c, spec) = half_split(m, k, r, &pred)?;
            let actual = p2(&c);
            let target = half_split_target(m, r);
            let deviation = unordered_deviation(&actual, &target);
            let tolerance = q(4, k as i64);
            let face = c.graph().n() / k;
            let report = json!({
                "construction": "halfsplit",
                "m": m, "k": k, "r": r,
                "a": spec.a,
                "adjust_size": spec.adjust.len(),
                "adjust_bound": spec.c * face,
                "c": spec.c,
                "cover": serde_json::to_value(spec.cover.to_file())?,
                "target": pair_json(&target),
                "actual": pair_json(&actual),
                "deviation": frac::to_string(&deviation),
                "tolerance": frac::to_string(&tolerance),
                "within_tolerance": deviation <= tolerance,
            });
            (c, report)
        }
        ConstructKind::Cycle { kind, n } => {
            let (c, extra) = match kind {
                CycleKind::Half => (cycle_half(n)?, json!({"kind": "half"})),
                CycleKind::Alternating => (cycle_alternating(n)?, json!({"kind": "alternating"})),
                CycleKind::ThreeQuarters => {
                    let tq = cycle_three_quarters(n)?;
                    let extra = json!({
                        "kind": "three-quarters",
                        "seamless": tq.seamless,
                        "adjusted": tq.adjusted,
                    });
                    (tq.colouring, extra)
                }
            };
            let mut report =
                json!({ "construction": "cycle", "n": n, "actual": pair_json(&p2(&c)) });
            if let (Value::Object(dst), Value::Object(src)) = (&mut report, extra) {
                dst.extend(src);
            }
            (c, report)
        }
        ConstructKind::Tile { m, k, s, t, c1, c2 } => {
            let g = Arc::new(Graph::torus(m, k)?);
            let a = load_colouring(run, g.clone(), &c1)?;
            let b = load_colouring(run, g, &c2)?;
            let c = tile_torus(&a, &b, s, t)?;
            let blocks = (t as u64).pow(m as u32);
            let average = weighted_average(&[(p2(&a), s as u64), (p2(&b), blocks - s as u64)]);
            let actual = p2(&c);
            let deviation = linf(&actual, &average);
            let bound = tile_deviation_bound(m, k);
            let report = json!({
                "construction": "tile",
                "m": m, "k": k, "s": s, "t": t,
                "c1": pair_json(&p2(&a)),
                "c2": pair_json(&p2(&b)),
                "weighted_average": pair_json(&average),
                "actual": pair_json(&actual),
                "deviation": frac::to_string(&deviation),
                "bound": frac::to_string(&bound),
                "within_bound": deviation <= bound,
            });
            (c, report)
        }
    };
    run.emit(out.as_deref(), &(colouring.to_rb_string() + "\n"))?;
    run.emit(report_path.as_deref(), &pretty(&report))
}

fn cmd_claims(
    run: &mut Run,
    k: usize,
    samples: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<()> {
    run.seed = Some(seed);
    let rows = t2_batch(k, samples, seed, run.workers)?;
    let failures = rows
        .iter()
        .filter(|r| !(r.claims.passes() && r.inequality.passes()))
        .count();
    let csv = t2_rows_csv(&rows);
    match &out {
        Some(path) => run.emit(Some(path), &csv)?,
        None => print!("{csv}"),
    }
    let margin = min_margin(&rows).map_or_else(|| "none".to_string(), |m| frac::to_string(&m));
    eprintln!(
        "[{k}]^2: {} colourings, {failures} failing, smallest margin {margin}",
        rows.len()
    );
    if failures > 0 {
        return Err(VerificationFailed(format!(
            "{failures} colourings break a claim or the bound"
        ))
        .into());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut run = Run::new(workers(cli.workers)?, cli.manifest);
    let manifest_default = match cli.command {
        Command::Graph { kind, out } => cmd_graph(&mut run, kind, out).map(|_| None)?,
        Command::Prob {
            graph,
            colouring,
            t,
            out,
        } => cmd_prob(&mut run, &graph, &colouring, t, out).map(|_| None)?,
        Command::Region { which, out } => cmd_region(&mut run, which, out).map(|_| None)?,
        Command::Enumerate {
            graph,
            mode,
            samples,
            seed,
            out,
            svg,
            x_m,
        } => {
            // Write the manifest even when containment fails.
            let result = cmd_enumerate(&mut run, &graph, mode, samples, seed, &out, svg, x_m);
            let path = out.join("manifest.json");
            match result {
                Ok(p) => Some(p),
                Err(e) => {
                    run.finish(Some(path))?;
                    return Err(e);
                }
            }
        }
        Command::Cover { action } => cmd_cover(&mut run, action).map(|_| None)?,
        Command::Construct { kind, out, report } => {
            cmd_construct(&mut run, kind, out, report).map(|_| None)?
        }
        Command::Claims {
            k,
            samples,
            seed,
            out,
        } => cmd_claims(&mut run, k, samples, seed, out).map(|_| None)?,
    };
    run.finish(manifest_default)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerificationFailed>().is_some() {
        return EXIT_VERIFICATION;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::ResourceLimit(_)) => EXIT_RESOURCE,
        Some(Error::InvariantViolation(_)) => EXIT_VERIFICATION,
        _ => EXIT_PARAMETER,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
