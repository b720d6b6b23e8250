//! delpack: exact packing densities, moduli distances, and polygon
//! surgery for Delzant polygons, over the rationals end to end.
//!
//! Exit codes: 0 success, 1 domain violation (not a valid Delzant
//! polygon), 2 parse failure (bad JSON, bad rational, bad arguments),
//! 3 precondition failure (legal input, illegal operation, such as a
//! chop scale beyond its corner).

mod doc;
mod svg;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use delpack::delzant::{self, DelzantError, DelzantPolygon};
use delpack::exactgeom::Rational;
use delpack::moduli::{
    self, continuity_probe, discontinuity_probe, neighborhood_classifier, Classification,
    ProbeReport, ProbeVerdict,
};
use delpack::packing::{optimal_density_with_cap, DEFAULT_REFINE_CAP};

use doc::{
    decimal_12, parse_document, parse_rational, polygon_to_document, rational_to_string, CliError,
    ResultDocument, ResultEntry,
};

#[derive(Parser)]
#[command(
    name = "delpack",
    version,
    about = "Exact simplex packing densities and moduli metrics for Delzant polygons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ProbeMode {
    /// Chop every corner at each scale and watch the optimum drop.
    Chop,
    /// Slide one side parallel to itself and watch the optimum move.
    Support,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a polygon document is a valid Delzant polygon.
    Validate { path: PathBuf },
    /// Compute certified bounds on the optimal packing density.
    Density {
        path: PathBuf,
        /// Vertex indices whose simplices are forbidden (repeatable).
        #[arg(long)]
        avoid: Vec<usize>,
        /// Densest refinement grid denominator for the lower bound.
        #[arg(long, default_value_t = DEFAULT_REFINE_CAP)]
        refine_cap: u64,
    },
    /// Area of the symmetric difference of two polygons.
    Distance { path_a: PathBuf, path_b: PathBuf },
    /// Cut one corner, replacing a vertex by a short edge.
    Chop {
        path: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, allow_hyphen_values = true)]
        scale: String,
        /// Write the resulting document here instead of stdout.
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Slide one side parallel to itself, keeping the normal fan.
    Perturb {
        path: PathBuf,
        #[arg(long)]
        side: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Deform the polygon stepwise and report densities as JSON lines.
    Probe {
        path: PathBuf,
        #[arg(long, value_enum)]
        mode: ProbeMode,
        /// Comma-separated scales (chop) or deltas (support).
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// Side to slide (support mode only).
        #[arg(long)]
        side: Option<usize>,
        /// Density gap that certifies a discontinuity (chop mode),
        /// default 9/10.
        #[arg(long)]
        gap: Option<String>,
        /// Square-root modulus bound (support mode), default 10.
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Compare the optimum against every avoid-one-corner optimum.
    Classify { path: PathBuf },
    /// Emit a catalog polygon: square | rectangle A B | simplex L |
    /// hirzebruch K A B.
    Gen {
        name: String,
        params: Vec<String>,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Draw the polygon, and optionally a packing, as SVG.
    Render {
        path: PathBuf,
        /// Comma-separated radii, one per vertex.
        #[arg(long)]
        packing: Option<String>,
        #[arg(long, short = 'o')]
        out: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e);
            std::process::exit(e.exit_code());
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

fn load_polygon(path: &Path) -> Result<DelzantPolygon, CliError> {
    let doc = parse_document(&read_text(path)?)?;
    doc::document_to_delzant(&doc)
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

/// Precondition-level failures: the operation was legal JSON over a
/// valid polygon, but the requested surgery is impossible.
fn surgery_error(e: DelzantError) -> CliError {
    CliError::Precondition(e.to_string())
}

fn check_index(what: &str, i: usize, n: usize) -> Result<(), CliError> {
    if i >= n {
        return Err(CliError::Precondition(format!(
            "{} {} out of range for {} vertices",
            what, i, n
        )));
    }
    Ok(())
}

fn parse_rational_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(|part| parse_rational(part.trim())).collect()
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Density { path, avoid, refine_cap } => cmd_density(&path, &avoid, refine_cap),
        Command::Distance { path_a, path_b } => cmd_distance(&path_a, &path_b),
        Command::Chop { path, vertex, scale, out } => cmd_chop(&path, vertex, &scale, out.as_deref()),
        Command::Perturb { path, side, delta, out } => cmd_perturb(&path, side, &delta, out.as_deref()),
        Command::Probe { path, mode, params, side, gap, modulus } => {
            cmd_probe(&path, mode, &params, side, gap.as_deref(), modulus.as_deref())
        }
        Command::Classify { path } => cmd_classify(&path),
        Command::Gen { name, params, out } => cmd_gen(&name, &params, out.as_deref()),
        Command::Render { path, packing, out } => cmd_render(&path, packing.as_deref(), &out),
    }
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let document = parse_document(&read_text(path)?)?;
    let points = doc::document_to_points(&document)?;
    let poly = delpack::exactgeom::ConvexPolygon::new(points)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    match DelzantPolygon::validate(poly) {
        Ok(d) => {
            println!("valid Delzant polygon {}", moduli::polygon_id(&d));
            Ok(())
        }
        Err(report) => {
            println!("{}", report);
            Err(CliError::Domain("polygon is not smooth".to_string()))
        }
    }
}

fn cmd_density(path: &Path, avoid: &[usize], refine_cap: u64) -> Result<(), CliError> {
    let d = load_polygon(path)?;
    let n = d.vertex_count();
    let mut avoid_set = BTreeSet::new();
    for &i in avoid {
        check_index("avoided vertex", i, n)?;
        avoid_set.insert(i);
    }
    if refine_cap == 0 {
        return Err(CliError::Precondition("refine cap must be positive".to_string()));
    }
    let bounds = optimal_density_with_cap(&d, &avoid_set, refine_cap);
    let mut inputs = BTreeMap::new();
    inputs.insert("path".to_string(), path.display().to_string());
    if !avoid_set.is_empty() {
        let labels: Vec<String> = avoid_set.iter().map(|i| i.to_string()).collect();
        inputs.insert("avoid".to_string(), labels.join(","));
    }
    inputs.insert("refine_cap".to_string(), refine_cap.to_string());
    let result = ResultDocument {
        operation: "density".to_string(),
        inputs,
        results: vec![
            ResultEntry::new("lower", &bounds.lower),
            ResultEntry::new("upper", &bounds.upper),
        ],
        certified: Some(bounds.certified),
        witness: Some(bounds.witness.radii.iter().map(rational_to_string).collect()),
    };
    print!("{}", doc::result_to_json(&result));
    Ok(())
}

fn cmd_distance(path_a: &Path, path_b: &Path) -> Result<(), CliError> {
    let a = load_polygon(path_a)?;
    let b = load_polygon(path_b)?;
    let dist = moduli::distance(&a, &b);
    let mut inputs = BTreeMap::new();
    inputs.insert("path_a".to_string(), path_a.display().to_string());
    inputs.insert("path_b".to_string(), path_b.display().to_string());
    let result = ResultDocument {
        operation: "distance".to_string(),
        inputs,
        results: vec![ResultEntry::new("distance", &dist)],
        certified: None,
        witness: None,
    };
    print!("{}", doc::result_to_json(&result));
    Ok(())
}

fn cmd_chop(path: &Path, vertex: usize, scale: &str, out: Option<&Path>) -> Result<(), CliError> {
    let d = load_polygon(path)?;
    check_index("vertex", vertex, d.vertex_count())?;
    let s = parse_rational(scale)?;
    let chopped = d.chop(vertex, &s).map_err(surgery_error)?;
    write_or_print(&doc::document_to_json(&polygon_to_document(&chopped)), out)
}

fn cmd_perturb(path: &Path, side: usize, delta: &str, out: Option<&Path>) -> Result<(), CliError> {
    let d = load_polygon(path)?;
    check_index("side", side, d.vertex_count())?;
    let q = parse_rational(delta)?;
    let moved = d.perturb_support(side, &q).map_err(surgery_error)?;
    write_or_print(&doc::document_to_json(&polygon_to_document(&moved)), out)
}

fn bounds_fields(b: &delpack::packing::DensityBounds) -> serde_json::Value {
    json!({
        "lower": rational_to_string(&b.lower),
        "lower_decimal": decimal_12(&b.lower),
        "upper": rational_to_string(&b.upper),
        "upper_decimal": decimal_12(&b.upper),
        "certified": b.certified,
    })
}

fn emit_probe_jsonl(report: &ProbeReport) {
    let mut base = bounds_fields(&report.base);
    base["record"] = json!("base");
    base["polygon"] = json!(report.polygon_id);
    println!("{}", base);
    for (k, step) in report.steps.iter().enumerate() {
        let mut line = bounds_fields(&step.bounds);
        line["record"] = json!("step");
        line["index"] = json!(k);
        line["descriptor"] = json!(step.descriptor);
        line["distance"] = json!(rational_to_string(&step.distance));
        line["distance_decimal"] = json!(decimal_12(&step.distance));
        if let Some(c) = &step.ceiling {
            line["ceiling"] = json!(rational_to_string(c));
        }
        println!("{}", line);
    }
    let verdict = match &report.verdict {
        ProbeVerdict::DiscontinuityWitnessed { gap_achieved, required_gap }
        | ProbeVerdict::DiscontinuityNotWitnessed { gap_achieved, required_gap } => json!({
            "record": "verdict",
            "kind": report.verdict.kind(),
            "gap_achieved": rational_to_string(gap_achieved),
            "required_gap": rational_to_string(required_gap),
        }),
        ProbeVerdict::ContinuityConsistent { modulus } => json!({
            "record": "verdict",
            "kind": report.verdict.kind(),
            "modulus": rational_to_string(modulus),
        }),
        ProbeVerdict::ContinuityInconsistent { modulus, failing_step } => json!({
            "record": "verdict",
            "kind": report.verdict.kind(),
            "modulus": rational_to_string(modulus),
            "failing_step": failing_step,
        }),
    };
    println!("{}", verdict);
}

fn cmd_probe(
    path: &Path,
    mode: ProbeMode,
    params: &str,
    side: Option<usize>,
    gap: Option<&str>,
    modulus: Option<&str>,
) -> Result<(), CliError> {
    let d = load_polygon(path)?;
    let values = parse_rational_list(params)?;
    if values.is_empty() {
        return Err(CliError::Parse("empty parameter list".to_string()));
    }
    let report = match mode {
        ProbeMode::Chop => {
            let required = match gap {
                Some(g) => parse_rational(g)?,
                None => parse_rational("9/10").expect("literal"),
            };
            discontinuity_probe(&d, &values, &required).map_err(surgery_error)?
        }
        ProbeMode::Support => {
            let side = side.ok_or_else(|| {
                CliError::Parse("--side is required for --mode support".to_string())
            })?;
            check_index("side", side, d.vertex_count())?;
            let m = match modulus {
                Some(m) => parse_rational(m)?,
                None => parse_rational("10").expect("literal"),
            };
            continuity_probe(&d, side, &values, &m).map_err(surgery_error)?
        }
    };
    emit_probe_jsonl(&report);
    Ok(())
}

fn cmd_classify(path: &Path) -> Result<(), CliError> {
    let d = load_polygon(path)?;
    let report = neighborhood_classifier(&d);
    let classification = match &report.classification {
        Classification::Inconclusive => "inconclusive",
        Classification::ConfinedToStratum => "confined to stratum",
        Classification::ExtendsAtVertices(_) => "extends at vertices",
    };
    let per_vertex: Vec<serde_json::Value> = report
        .per_vertex
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut v = bounds_fields(b);
            v["vertex"] = json!(i);
            v
        })
        .collect();
    let witnesses: Vec<serde_json::Value> = report
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "vertex": w.vertex_index,
                "steps": w.steps.iter().map(|s| json!({
                    "scale": rational_to_string(&s.scale),
                    "distance": rational_to_string(&s.distance),
                    "density": rational_to_string(&s.density),
                    "density_decimal": decimal_12(&s.density),
                    "radii": s.radii.iter().map(rational_to_string).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let out = json!({
        "polygon": report.polygon_id,
        "bounds": bounds_fields(&report.bounds),
        "per_vertex": per_vertex,
        "equal_set": report.equal_set,
        "classification": classification,
        "witnesses": witnesses,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serialization is infallible"));
    Ok(())
}

fn cmd_gen(name: &str, params: &[String], out: Option<&Path>) -> Result<(), CliError> {
    let arity = |expected: usize| -> Result<(), CliError> {
        if params.len() != expected {
            return Err(CliError::Parse(format!(
                "{} takes {} parameter(s), got {}",
                name,
                expected,
                params.len()
            )));
        }
        Ok(())
    };
    let polygon = match name {
        "square" => {
            arity(0)?;
            delzant::unit_square()
        }
        "rectangle" => {
            arity(2)?;
            let a = parse_rational(&params[0])?;
            let b = parse_rational(&params[1])?;
            delzant::rectangle(&a, &b).map_err(surgery_error)?
        }
        "simplex" => {
            arity(1)?;
            let l = parse_rational(&params[0])?;
            delzant::standard_simplex(&l).map_err(surgery_error)?
        }
        "hirzebruch" => {
            arity(3)?;
            let k: u64 = params[0]
                .parse()
                .map_err(|_| CliError::Parse(format!("not a nonnegative integer: {:?}", params[0])))?;
            let a = parse_rational(&params[1])?;
            let b = parse_rational(&params[2])?;
            delzant::hirzebruch(k, &a, &b).map_err(surgery_error)?
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown generator {:?} (square, rectangle, simplex, hirzebruch)",
                other
            )));
        }
    };
    write_or_print(&doc::document_to_json(&polygon_to_document(&polygon)), out)
}

fn cmd_render(path: &Path, packing: Option<&str>, out: &Path) -> Result<(), CliError> {
    let d = load_polygon(path)?;
    let radii = match packing {
        Some(list) => Some(parse_rational_list(list)?),
        None => None,
    };
    let image = svg::render(&d, radii.as_deref())?;
    fs::write(out, image).map_err(|e| CliError::Parse(format!("{}: {}", out.display(), e)))
}
