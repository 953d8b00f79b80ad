//! Command-line driver: stacky-fan ingestion, the Chow/orbifold pipeline,
//! graded tables and presentation comparison, emitted as text, JSON or
//! LaTeX.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};

use toric_chow::chowring::engine::{GradedEngine, GroupClass};
use toric_chow::chowring::{chow_ring, eliminate_linear, ChowRouting, GradedPresentation};
use toric_chow::fgab::{self, FgAbGroup};
use toric_chow::io as tio;
use toric_chow::orbifold::{
    enumerate_boxes, inertia, orbifold_ring_routed, Inertia, OrbifoldRouting,
};
use toric_chow::stacky::{decompose, gerbe_data, StackyFan};
use toric_chow::Error;

#[derive(Parser)]
#[command(name = "toric-chow", version, about = "Integral Chow rings of toric Deligne-Mumford stacks from stacky fans")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized self-checks (used by `validate`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on the number of basis monomials per graded piece.
    #[arg(long = "limit-monomials", global = true, default_value_t = 200_000)]
    limit_monomials: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum RingKind {
    Chow,
    Orbifold,
}

#[derive(Args)]
struct DegreeArg {
    /// Maximum degree, as an integer or fraction like 5/2.
    #[arg(long = "max-degree", value_parser = parse_degree)]
    max_degree: Option<BigRational>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a stacky-fan file against the fan and map axioms.
    Validate { file: PathBuf },
    /// Gale dual: the dual group, the dual map, and its cokernel.
    Gale { file: PathBuf },
    /// Decompose the stack as a gerbe core times a classifying stack.
    Decompose { file: PathBuf },
    /// Enumerate the nonzero box elements with cones, coordinates, ages.
    Boxes { file: PathBuf },
    /// Inertia components (order 1) or 3-twisted sectors (order 2).
    Inertia {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: u8,
    },
    /// Integral Chow ring presentation.
    Chow {
        file: PathBuf,
        /// Eliminate generators along the degree-1 linear relations.
        #[arg(long)]
        eliminate: bool,
        #[command(flatten)]
        degree: DegreeArg,
    },
    /// Integral orbifold Chow ring presentation.
    Orbifold {
        file: PathBuf,
        #[command(flatten)]
        degree: DegreeArg,
    },
    /// Graded pieces of the chosen ring up to a degree bound.
    Graded {
        file: PathBuf,
        #[arg(long, value_enum)]
        ring: RingKind,
        #[arg(long = "max-degree", value_parser = parse_degree)]
        max_degree: BigRational,
    },
    /// Compare two rings degree by degree. Inputs may be stacky-fan files
    /// (built with --ring) or presentation files.
    Compare {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, value_enum, default_value_t = RingKind::Chow)]
        ring: RingKind,
        #[arg(long = "max-degree", value_parser = parse_degree)]
        max_degree: BigRational,
    },
}

fn parse_degree(s: &str) -> Result<BigRational, String> {
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|e| e.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == BigInt::from(0) {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::Invalid(_) | Error::Diagnostics(_) | Error::Dimension(_) => 1,
        Error::HypothesisNotSatisfied(_)
        | Error::Unsupported(_)
        | Error::NotAFace(_)
        | Error::Integrity(_) => 2,
        Error::ResourceLimit(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => {
            let rendered = render::render(&doc, cli.format.into());
            match write_out(&cli.out, &rendered) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())
        }
    }
}

impl From<Format> for render::Format {
    fn from(f: Format) -> render::Format {
        match f {
            Format::Text => render::Format::Text,
            Format::Json => render::Format::Json,
            Format::Latex => render::Format::Latex,
        }
    }
}

fn load_stacky_fan(path: &PathBuf) -> Result<tio::StackyFanFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    let file = tio::parse_stacky_fan(&text)?;
    let v = file.stacky_fan.validate();
    if !v.is_ok() {
        return Err(Error::Diagnostics(v.diagnostics));
    }
    Ok(file)
}

/// A stacky-fan file or a presentation file, told apart by shape.
enum AnyInput {
    Fan(tio::StackyFanFile),
    Presentation(GradedPresentation),
}

fn load_any(path: &PathBuf) -> Result<AnyInput, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid JSON: {}", e)))?;
    if v.get("generators").is_some() {
        Ok(AnyInput::Presentation(tio::presentation_from_value(&v)?))
    } else {
        let file = tio::stacky_fan_from_value(&v)?;
        let val = file.stacky_fan.validate();
        if !val.is_ok() {
            return Err(Error::Diagnostics(val.diagnostics));
        }
        Ok(AnyInput::Fan(file))
    }
}

fn group_value(g: &FgAbGroup) -> Value {
    json!({
        "rank": g.rank(),
        "torsion": g.torsion().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "pretty": g.to_string(),
    })
}

fn class_value(c: &GroupClass) -> Value {
    json!({
        "free_rank": c.free_rank,
        "torsion": c.torsion.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "pretty": c.to_string(),
    })
}

fn degree_value(d: &BigRational) -> Value {
    json!({"num": d.numer().to_string(), "den": d.denom().to_string(), "pretty": d.to_string()})
}

fn ring_of(kind: RingKind, sf: &StackyFan) -> Result<(GradedPresentation, Value), Error> {
    match kind {
        RingKind::Chow => {
            let (p, routing) = chow_ring(sf)?;
            let meta = match routing {
                ChowRouting::Direct => json!({"routing": "direct"}),
                ChowRouting::ViaDecomposition { mu } => json!({
                    "routing": "decompose+bmu",
                    "note": "torsion-generation hypothesis failed; ring computed on the gerbe core and extended by the classifying stack of mu",
                    "mu": group_value(&mu),
                }),
            };
            Ok((p, meta))
        }
        RingKind::Orbifold => {
            let (ring, routing) = orbifold_ring_routed(sf)?;
            let meta = match routing {
                OrbifoldRouting::Direct => json!({"routing": "direct"}),
                OrbifoldRouting::ViaDecomposition { mu } => json!({
                    "routing": "decompose+bmu",
                    "note": "torsion-generation hypothesis failed; ring computed on the gerbe core and extended by the classifying stack of mu",
                    "mu": group_value(&mu),
                }),
            };
            Ok((ring.presentation, meta))
        }
    }
}

fn graded_table_value(p: &GradedPresentation, max: &BigRational, limit: usize) -> Result<Value, Error> {
    let engine = GradedEngine::new(p, limit)?;
    let table = engine.graded_pieces(max)?;
    let pieces: Vec<Value> = table
        .iter()
        .map(|(d, c)| json!({"degree": degree_value(d), "group": class_value(c)}))
        .collect();
    Ok(Value::Array(pieces))
}

fn presentation_doc(
    kind: &str,
    p: &GradedPresentation,
    meta: Value,
    degree: &Option<BigRational>,
    limit: usize,
) -> Result<Value, Error> {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::String(kind.into()));
    obj.insert("presentation".into(), tio::presentation_to_value(p));
    obj.insert("pretty".into(), Value::String(p.display()));
    obj.insert("metadata".into(), meta);
    if let Some(max) = degree {
        obj.insert("graded_pieces".into(), graded_table_value(p, max, limit)?);
    }
    Ok(Value::Object(obj))
}

fn run(cli: &Cli) -> Result<Value, Error> {
    let limit = cli.limit_monomials;
    match &cli.command {
        Command::Validate { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Parse(format!("cannot read {}: {}", file.display(), e)))?;
            let parsed = tio::parse_stacky_fan(&text)?;
            let v = parsed.stacky_fan.validate();
            if !v.is_ok() {
                return Err(Error::Diagnostics(v.diagnostics));
            }
            let self_check = match cli.seed {
                Some(seed) if v.torsion_generated => {
                    Some(self_check_twisted_classes(&parsed.stacky_fan, seed)?)
                }
                _ => None,
            };
            let mut obj = Map::new();
            obj.insert("kind".into(), Value::String("validate".into()));
            obj.insert("ok".into(), Value::Bool(true));
            obj.insert("name".into(), parsed.name.map(Value::String).unwrap_or(Value::Null));
            obj.insert("torsion_generated".into(), Value::Bool(v.torsion_generated));
            obj.insert("group".into(), group_value(parsed.stacky_fan.group()));
            obj.insert("rays".into(), Value::Number(parsed.stacky_fan.fan().ray_count().into()));
            if let Some(sc) = self_check {
                obj.insert("self_check".into(), sc);
            }
            Ok(Value::Object(obj))
        }
        Command::Gale { file } => {
            let parsed = load_stacky_fan(file)?;
            let sf = &parsed.stacky_fan;
            let (ndual, map) = fgab::gale_dual(sf.beta())?;
            let cols: Vec<Vec<BigInt>> = (0..map.matrix.cols()).map(|j| map.matrix.col(j)).collect();
            let (mu, _) = fgab::quotient(&ndual, &cols)?;
            let matrix: Vec<Vec<String>> = (0..map.matrix.rows())
                .map(|i| map.matrix.row(i).iter().map(|x| x.to_string()).collect())
                .collect();
            Ok(json!({
                "kind": "gale",
                "dual_group": group_value(&ndual),
                "dual_map": matrix,
                "cokernel": group_value(&mu),
            }))
        }
        Command::Decompose { file } => {
            let parsed = load_stacky_fan(file)?;
            let (core, mu) = decompose(&parsed.stacky_fan)?;
            let core_file = tio::StackyFanFile { name: None, stacky_fan: core };
            Ok(json!({
                "kind": "decompose",
                "core": tio::stacky_fan_to_value(&core_file),
                "mu": group_value(&mu),
            }))
        }
        Command::Boxes { file } => {
            let parsed = load_stacky_fan(file)?;
            let boxes = enumerate_boxes(&parsed.stacky_fan)?;
            let records: Vec<Value> = boxes
                .iter()
                .filter(|b| !b.is_zero())
                .enumerate()
                .map(|(k, b)| {
                    json!({
                        "label": format!("y{}", k + 1),
                        "element": b.element.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "cone": b.cone.iter().copied().collect::<Vec<_>>(),
                        "fractions": b.fracs.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "age": degree_value(&b.age),
                    })
                })
                .collect();
            Ok(json!({
                "kind": "boxes",
                "nonzero_count": records.len(),
                "boxes": records,
                "metadata": {"note": "the zero box element is implicit and acts as the ring unit"},
            }))
        }
        Command::Inertia { file, order } => {
            let parsed = load_stacky_fan(file)?;
            match inertia(&parsed.stacky_fan, *order)? {
                Inertia::Components(cs) => {
                    let comps: Vec<Value> = cs
                        .iter()
                        .map(|c| {
                            json!({
                                "box": c.box_element.element.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "age": degree_value(&c.box_element.age),
                                "cone": c.box_element.cone.iter().copied().collect::<Vec<_>>(),
                                "local_group": group_value(&c.local_group),
                                "sector_rays": c.sector.fan().ray_count(),
                            })
                        })
                        .collect();
                    Ok(json!({"kind": "inertia", "order": 1, "components": comps}))
                }
                Inertia::Triples(ts) => {
                    let triples: Vec<Value> = ts
                        .iter()
                        .map(|t| {
                            json!({
                                "v1": t.v1.element.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "v2": t.v2.element.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "v3": t.v3.element.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "sector_group": group_value(t.sector.group()),
                            })
                        })
                        .collect();
                    Ok(json!({"kind": "inertia", "order": 2, "triples": triples}))
                }
            }
        }
        Command::Chow { file, eliminate, degree } => {
            let parsed = load_stacky_fan(file)?;
            let (p, meta) = ring_of(RingKind::Chow, &parsed.stacky_fan)?;
            let p = if *eliminate { eliminate_linear(&p)?.0 } else { p };
            presentation_doc("chow", &p, meta, &degree.max_degree, limit)
        }
        Command::Orbifold { file, degree } => {
            let parsed = load_stacky_fan(file)?;
            let (p, meta) = ring_of(RingKind::Orbifold, &parsed.stacky_fan)?;
            presentation_doc("orbifold", &p, meta, &degree.max_degree, limit)
        }
        Command::Graded { file, ring, max_degree } => {
            let (p, meta) = match load_any(file)? {
                AnyInput::Fan(f) => ring_of(*ring, &f.stacky_fan)?,
                AnyInput::Presentation(p) => (p, json!({"routing": "presentation file"})),
            };
            Ok(json!({
                "kind": "graded",
                "max_degree": degree_value(max_degree),
                "pieces": graded_table_value(&p, max_degree, limit)?,
                "metadata": meta,
            }))
        }
        Command::Compare { file_a, file_b, ring, max_degree } => {
            let load = |path: &PathBuf| -> Result<GradedPresentation, Error> {
                match load_any(path)? {
                    AnyInput::Fan(f) => Ok(ring_of(*ring, &f.stacky_fan)?.0),
                    AnyInput::Presentation(p) => Ok(p),
                }
            };
            let pa = load(file_a)?;
            let pb = load(file_b)?;
            let (equal, mismatches) = GradedEngine::equal(&pa, &pb, max_degree, limit)?;
            let mm: Vec<Value> = mismatches
                .iter()
                .map(|(d, a, b)| {
                    json!({"degree": degree_value(d), "left": class_value(a), "right": class_value(b)})
                })
                .collect();
            Ok(json!({
                "kind": "compare",
                "max_degree": degree_value(max_degree),
                "verdict": if equal { "EQUAL" } else { "NOT-EQUAL" },
                "equal": equal,
                "mismatches": mm,
                "note": "NOT-EQUAL certifies non-isomorphism of the graded groups; EQUAL is necessary, not sufficient, for ring isomorphism",
            }))
        }
    }
}

/// Randomized well-definedness self-check of the twisted ray classes: the
/// matrix E is recomputed with perturbed integral solutions C' = C + K
/// (rows of K in the kernel of the class map) and every difference of
/// rows must lie in the circuit lattice.
fn self_check_twisted_classes(sf: &StackyFan, seed: u64) -> Result<Value, Error> {
    use toric_chow::intlin::{self, IntMatrix};
    let gd = gerbe_data(sf)?;
    if gd.dual_torsion_caveat {
        return Ok(json!({"twisted_class_well_defined": "skipped (dual group has torsion)"}));
    }
    let n = sf.fan().ray_count();
    let d = sf.group().rank();
    let s = gd.c.rows();
    // Kernel of the class map Z^n -> Pic(reduced) equals the circuit row
    // lattice; perturb C by deterministic pseudo-random combinations.
    let free_rows: Vec<usize> = (0..d).collect();
    let circuits = sf.beta().matrix.select_rows(&free_rows); // d x n
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 7) as i64 - 3
    };
    let mut checks = 0usize;
    for _ in 0..5 {
        let mut c2 = gd.c.clone();
        for r in 0..s {
            for j in 0..d {
                let coeff = BigInt::from(next());
                for i in 0..n {
                    let v = c2.get(r, i) + &coeff * circuits.get(j, i);
                    c2.set(r, i, v);
                }
            }
        }
        let e2 = gd.a.mul(&gd.m).mul(&c2);
        for i in 0..n {
            let mut diff = Vec::with_capacity(n);
            for j in 0..n {
                diff.push(e2.get(i, j) - gd.e.get(i, j));
            }
            let circ_t = circuits.transpose(); // n x d
            if intlin::solve(&circ_t, &diff)?.is_none() {
                return Err(Error::Integrity(
                    "twisted classes changed outside the circuit lattice".into(),
                ));
            }
            checks += 1;
        }
    }
    let _ = IntMatrix::identity(0);
    let one = BigRational::one();
    let _ = one;
    Ok(json!({"twisted_class_well_defined": true, "alternative_solutions": 5, "rows_checked": checks}))
}
