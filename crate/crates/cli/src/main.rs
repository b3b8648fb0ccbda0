//! `tropex`: reads JSON definitions, runs computations and verifications and
//! writes a JSON result to standard output.

mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use tropex_core::atlas::{trop_closure, tropical_part, verify_immersion, TropicalComplex};
use tropex_core::curves::{
    is_universal, moduli_polytope, realize, universal_family, CurveFamily, CurveType, ExternalEdge, InternalEdge,
};
use tropex_core::gluing::{cut_edge_monoids, glue, interior_point, local_fan};
use tropex_core::json::{
    atlas_from_json, complex_from_json, complex_to_json, func_from_json, map_from_json, map_to_json, matrix_from_json,
    matrix_to_json, polytope_from_json, polytope_to_json, rat_vec_to_json, subdivision_from_json, subdivision_to_json,
};
use tropex_core::lattice::{cokernel_torsion, smith_normal_form};
use tropex_core::monoid::{dual_hilbert_basis, hilbert_basis, strata};
use tropex_core::polytope::{IntAffineMap, Polytope};
use tropex_core::refinement::{induced_type_refinement, validate_subdivision, DEFAULT_MAX_TYPES};
use tropex_core::scalar::parse_rational;
use tropex_core::{Error, Int, RatVec};

#[derive(Parser)]
#[command(name = "tropex", version, about = "Exact polytope, monoid and tropical-curve computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write an SVG drawing of the 2-dimensional complex or realized curve.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Write a DOT rendering of the face lattice or curve graph.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Integer 2 x n matrix (JSON, inline or a file) projecting cells for SVG.
    #[arg(long, global = true)]
    project: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, faces, closure and lineality of a polytope.
    Polytope { file: PathBuf },
    /// Strata of the local model of a polytope.
    Strata { file: PathBuf },
    /// Hilbert basis of the nonnegative integral functions on a cone, or of
    /// its lattice points with --primal.
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        primal: bool,
    },
    /// Smith normal form of an integer matrix.
    Snf { file: PathBuf },
    /// Tropical part of an atlas.
    Trop {
        file: PathBuf,
        #[arg(long)]
        closure: bool,
    },
    /// Checks a per-cell map of a complex to R^N.
    Immersion {
        complex: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
    },
    /// Moduli polytope of a curve type in a complex.
    Moduli { gamma: PathBuf, complex: PathBuf },
    /// Universal family of a curve type.
    Universal { gamma: PathBuf, complex: PathBuf },
    /// Is a family of curves of the given type basic (universal)?
    BasicCheck {
        gamma: PathBuf,
        complex: PathBuf,
        /// Candidate family; defaults to the universal family itself.
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Validates a subdivision, or refines a curve type along it.
    Refine {
        subdivision: PathBuf,
        #[arg(long)]
        verify: bool,
        #[arg(long, value_name = "GAMMA")]
        induce_moduli: Option<PathBuf>,
    },
    /// Cuts a curve type at its internal edges and glues the pieces back.
    Glue {
        gamma: Option<PathBuf>,
        complex: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        /// Glue this many random trees in the plane instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Local fan of a complex at a point of a cell.
    LocalFan {
        complex: PathBuf,
        #[arg(long)]
        cell: usize,
        /// Comma-separated rationals; defaults to a point of the cell.
        #[arg(long)]
        point: Option<String>,
    },
    /// Monoids of a cut edge.
    CutEdgeMonoids {
        #[arg(long)]
        selftest: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    InvalidInput,
    VerificationFailed,
    ResourceBound,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InvalidInput => "invalid-input",
            Status::VerificationFailed => "verification-failed",
            Status::ResourceBound => "resource-bound",
        }
    }

    fn code(self) -> u8 {
        self as u8
    }
}

struct Outcome {
    status: Status,
    payload: Value,
    diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(payload: Value) -> Outcome {
        Outcome { status: Status::Ok, payload, diagnostics: Vec::new() }
    }

    /// `ok` if `passed`, otherwise a verification failure.
    fn checked(passed: bool, payload: Value, diagnostics: Vec<String>) -> Outcome {
        let status = if passed { Status::Ok } else { Status::VerificationFailed };
        Outcome { status, payload, diagnostics }
    }

    fn failure(status: Status, diagnostics: Vec<String>) -> Outcome {
        Outcome { status, payload: Value::Null, diagnostics }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Outcome {
        let status = match e {
            Error::ResourceBound { .. } => Status::ResourceBound,
            _ => Status::InvalidInput,
        };
        Outcome::failure(status, vec![e.to_string()])
    }
}

type Run = std::result::Result<Outcome, Outcome>;

fn invalid(msg: impl Into<String>) -> Outcome {
    Outcome::failure(Status::InvalidInput, vec![msg.into()])
}

fn read_json(path: &Path) -> std::result::Result<Value, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| invalid(format!("{}: malformed JSON at line {}, column {}: {e}", path.display(), e.line(), e.column())))
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Outcome> {
    std::fs::write(path, contents).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> std::result::Result<Polytope, Outcome> {
    Ok(polytope_from_json(&read_json(path)?)?)
}

fn load_complex(path: &Path) -> std::result::Result<TropicalComplex, Outcome> {
    Ok(complex_from_json(&read_json(path)?)?)
}

fn load_type(path: &Path) -> std::result::Result<CurveType, Outcome> {
    Ok(CurveType::from_json(&read_json(path)?)?)
}

fn parse_point(s: &str) -> std::result::Result<RatVec, Outcome> {
    s.split(',')
        .map(|x| parse_rational(x.trim()).ok_or_else(|| invalid(format!("bad rational {x:?} in --point"))))
        .collect()
}

fn faces_json(p: &Polytope) -> Value {
    let faces: Vec<Value> = p
        .faces()
        .iter()
        .map(|f| json!({"dim": f.dimension(), "tight": f.tight, "witness": rat_vec_to_json(&f.polytope.witness())}))
        .collect();
    Value::Array(faces)
}

struct Ctx {
    svg: Option<PathBuf>,
    dot: Option<PathBuf>,
    seed: u64,
    project: Option<String>,
}

impl Ctx {
    fn plane(&self, ambient: usize) -> std::result::Result<render::Plane, Outcome> {
        let project = match &self.project {
            Some(s) => {
                let v = match serde_json::from_str::<Value>(s) {
                    Ok(v) => v,
                    Err(_) => read_json(Path::new(s))?,
                };
                let m = match v.get("matrix") {
                    Some(_) => map_from_json(&v)?,
                    None => IntAffineMap::linear(matrix_from_json(&v, Some(ambient))?),
                };
                Some(m)
            }
            None => None,
        };
        Ok(render::Plane::new(ambient, project)?)
    }

    fn draw_complex(&self, cells: &[Polytope], ambient: usize) -> std::result::Result<(), Outcome> {
        if let Some(path) = &self.svg {
            let svg = render::complex_svg(cells, &self.plane(ambient)?)?;
            write_file(path, &svg)?;
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Run {
    let ctx = Ctx { svg: cli.svg, dot: cli.dot, seed: cli.seed, project: cli.project };
    match cli.command {
        Command::Polytope { file } => {
            let p = load_polytope(&file)?;
            if let Some(path) = &ctx.dot {
                write_file(path, &render::face_lattice_dot(&p))?;
            }
            ctx.draw_complex(std::slice::from_ref(&p), p.ambient_dim())?;
            Ok(Outcome::ok(json!({
                "ambient_dim": p.ambient_dim(),
                "dim": p.dimension(),
                "closed": p.is_closed(),
                "contains_line": p.contains_line(),
                "lineality": p.lineality_basis(),
                "closure": polytope_to_json(&p.closure()),
                "faces": faces_json(&p),
            })))
        }
        Command::Strata { file } => {
            let p = load_polytope(&file)?;
            let records = strata(&p)?;
            let dims: Vec<usize> = records.iter().map(|r| r.stratum_dim).collect();
            let list: Vec<Value> = records
                .iter()
                .map(|r| json!({"dim": r.stratum_dim, "face_dim": r.face.dimension(), "tight": r.face.tight}))
                .collect();
            Ok(Outcome::ok(json!({"count": records.len(), "dims": dims, "strata": list})))
        }
        Command::Hilbert { file, primal } => {
            let p = load_polytope(&file)?;
            if primal {
                let h = hilbert_basis(&p)?;
                Ok(Outcome::ok(json!({"generators": h.generators, "units": h.units})))
            } else {
                let h = dual_hilbert_basis(&p)?;
                Ok(Outcome::ok(json!({"generators": h.generators, "units": h.units, "lineality": h.lineality})))
            }
        }
        Command::Snf { file } => {
            let v = read_json(&file)?;
            let m = matrix_from_json(v.get("matrix").unwrap_or(&v), None)?;
            let s = smith_normal_form(&m);
            Ok(Outcome::ok(json!({
                "u": matrix_to_json(&s.u),
                "d": matrix_to_json(&s.d),
                "v": matrix_to_json(&s.v),
                "elementary_divisors": s.elementary_divisors(),
                "rank": s.rank(),
                "torsion": cokernel_torsion(&m),
            })))
        }
        Command::Trop { file, closure } => {
            let a = atlas_from_json(&read_json(&file)?)?;
            let mut c = tropical_part(&a)?;
            if closure {
                c = trop_closure(&c);
            }
            if let Some(n) = c.ambient_dim() {
                ctx.draw_complex(c.cells(), n)?;
            }
            Ok(Outcome::ok(complex_to_json(&c)))
        }
        Command::Immersion { complex, candidate } => {
            let c = load_complex(&complex)?;
            let v = read_json(&candidate)?;
            let maps: Vec<IntAffineMap> = v
                .as_array()
                .ok_or_else(|| invalid("candidate: expected an array of maps"))?
                .iter()
                .map(map_from_json)
                .collect::<tropex_core::Result<_>>()?;
            let check = verify_immersion(&c, &maps)?;
            let payload = json!({"quasi_generated": check.quasi_generated, "almost_generated": check.almost_generated});
            let diagnostics = if check.quasi_generated { Vec::new() } else { vec!["the candidate is not injective on every cell".into()] };
            Ok(Outcome::checked(check.quasi_generated, payload, diagnostics))
        }
        Command::Moduli { gamma, complex } => {
            let t = load_type(&gamma)?;
            let c = load_complex(&complex)?;
            if let Some(path) = &ctx.dot {
                write_file(path, &render::curve_graph_dot(&t))?;
            }
            let m = moduli_polytope(&t, &c)?;
            let Some(p) = &m.polytope else {
                return Ok(Outcome::ok(json!({"empty": true, "coordinates": m.dim()})));
            };
            let curve = realize(&t, &m, &p.witness())?;
            if let Some(path) = &ctx.svg {
                let svg = render::curve_svg(c.cells(), &curve, &ctx.plane(m.n)?)?;
                write_file(path, &svg)?;
            }
            let positions: Vec<Value> = curve.positions.iter().map(|x| rat_vec_to_json(x)).collect();
            Ok(Outcome::ok(json!({
                "empty": false,
                "dim": p.dimension(),
                "coordinates": m.dim(),
                "polytope": polytope_to_json(p),
                "sample": {"positions": positions, "lengths": rat_vec_to_json(&curve.lengths)},
            })))
        }
        Command::Universal { gamma, complex } => {
            let t = load_type(&gamma)?;
            let c = load_complex(&complex)?;
            let u = universal_family(&t, &c)?;
            let universal = is_universal(&u.as_candidate(), &t, &c)?;
            Ok(Outcome::checked(
                universal,
                json!({
                    "base": polytope_to_json(u.base()),
                    "total": complex_to_json(&u.total),
                    "projection": u.projection.iter().map(map_to_json).collect::<Vec<_>>(),
                    "evaluation": u.evaluation.iter().map(map_to_json).collect::<Vec<_>>(),
                    "universal": universal,
                }),
                Vec::new(),
            ))
        }
        Command::BasicCheck { gamma, complex, candidate } => {
            let t = load_type(&gamma)?;
            let c = load_complex(&complex)?;
            let family = match candidate {
                Some(path) => family_from_json(&read_json(&path)?)?,
                None => universal_family(&t, &c)?.as_candidate(),
            };
            let basic = is_universal(&family, &t, &c)?;
            let diagnostics = if basic { Vec::new() } else { vec!["the family is not universal for the type".into()] };
            Ok(Outcome::checked(basic, json!({"basic": basic, "basic_space": c.is_basic_space()}), diagnostics))
        }
        Command::Refine { subdivision, verify, induce_moduli } => {
            let s = subdivision_from_json(&read_json(&subdivision)?)?;
            match (verify, induce_moduli) {
                (true, None) => {
                    let check = validate_subdivision(&s)?;
                    ctx.draw_complex(s.refined.cells(), s.refined.ambient_dim().unwrap_or(0))?;
                    Ok(Outcome::checked(check.valid, json!({"valid": check.valid}), check.diagnostics))
                }
                (false, Some(gamma)) => {
                    let t = load_type(&gamma)?;
                    let bound = match std::env::var("TROPEX_MAX_TYPES") {
                        Ok(v) => v.parse().map_err(|_| invalid(format!("TROPEX_MAX_TYPES={v:?} is not a count")))?,
                        Err(_) => DEFAULT_MAX_TYPES,
                    };
                    let r = induced_type_refinement(&t, &s, bound)?;
                    let check = validate_subdivision(&r.subdivision)?;
                    let pieces: Vec<Value> = r
                        .types
                        .iter()
                        .zip(&r.moduli)
                        .map(|(ty, m)| json!({"type": ty.to_json(), "dim": m.polytope.as_ref().map_or(0, Polytope::dimension)}))
                        .collect();
                    Ok(Outcome::checked(
                        check.valid,
                        json!({
                            "count": r.types.len(),
                            "pieces": pieces,
                            "strata": complex_to_json(&r.complex),
                            "subdivision": subdivision_to_json(&r.subdivision),
                            "valid": check.valid,
                        }),
                        check.diagnostics,
                    ))
                }
                _ => Err(invalid("refine needs exactly one of --verify and --induce-moduli")),
            }
        }
        Command::Glue { gamma, complex, verify, random } => {
            if let Some(count) = random {
                return glue_random(count, ctx.seed, verify);
            }
            let (Some(gamma), Some(complex)) = (gamma, complex) else {
                return Err(invalid("glue needs a curve type and a complex, or --random N"));
            };
            let t = load_type(&gamma)?;
            let c = load_complex(&complex)?;
            let g = glue(&t, &c)?;
            let payload = json!({
                "verified": g.verified,
                "dim": g.dims.marked,
                "dims": g.dims,
                "dictionary": map_to_json(&g.dictionary),
            });
            let diagnostics = if g.verified { Vec::new() } else { vec!["the fiber product and the marked moduli differ".into()] };
            Ok(Outcome::checked(g.verified || !verify, payload, diagnostics))
        }
        Command::LocalFan { complex, cell, point } => {
            let c = load_complex(&complex)?;
            let x = match point {
                Some(s) => parse_point(&s)?,
                None => interior_point(c.cells().get(cell).ok_or_else(|| invalid(format!("no cell {cell}")))?),
            };
            let f = local_fan(&c, cell, &x)?;
            if let Some(n) = f.ambient_dim() {
                ctx.draw_complex(f.cells(), n)?;
            }
            Ok(Outcome::ok(complex_to_json(&f)))
        }
        Command::CutEdgeMonoids { selftest } => {
            let m = cut_edge_monoids()?;
            let payload = json!({
                "inclusion": matrix_to_json(&m.inclusion),
                "checks": m.checks,
                "passed": m.passed(),
            });
            let diagnostics = m.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
            Ok(Outcome::checked(m.passed() || !selftest, payload, diagnostics))
        }
    }
}

/// `{"type": gamma, "base": polytope, "positions": [map], "lengths": [func]}`.
fn family_from_json(v: &Value) -> tropex_core::Result<CurveFamily> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Invalid(format!("family: missing field {k:?}")));
    let list = |k: &str| -> tropex_core::Result<Vec<Value>> {
        get(k)?.as_array().cloned().ok_or_else(|| Error::Invalid(format!("family: {k} must be an array")))
    };
    Ok(CurveFamily {
        ty: CurveType::from_json(get("type")?)?,
        base: polytope_from_json(get("base")?)?,
        positions: list("positions")?.iter().map(map_from_json).collect::<tropex_core::Result<_>>()?,
        lengths: list("lengths")?.iter().map(func_from_json).collect::<tropex_core::Result<_>>()?,
    })
}

/// A tree with up to five vertices in the plane, random directions and one
/// balancing end per unbalanced vertex.
fn random_tree(rng: &mut ChaCha8Rng) -> tropex_core::Result<CurveType> {
    let nv = rng.gen_range(1..=5);
    let mut internal = Vec::new();
    let mut balance = vec![[0 as Int; 2]; nv];
    for v in 1..nv {
        let p = rng.gen_range(0..v);
        let u = loop {
            let u = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
            if num_integer::gcd(u[0], u[1]) == 1 {
                break u;
            }
        };
        let (tail, head) = if rng.gen_bool(0.5) { (p, v) } else { (v, p) };
        for i in 0..2 {
            balance[tail][i] -= u[i];
            balance[head][i] += u[i];
        }
        internal.push(InternalEdge { tail, head, cell: 0, u: u.to_vec() });
    }
    let external = (0..nv).filter(|&v| balance[v] != [0, 0]).map(|v| ExternalEdge { vertex: v, cell: 0, u: balance[v].to_vec() }).collect();
    CurveType::new(vec![0; nv], internal, external)
}

fn glue_random(count: usize, seed: u64, verify: bool) -> Run {
    let plane = TropicalComplex::embedded(2, vec![Polytope::whole_space(2)])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut results = Vec::new();
    for i in 0..count {
        let t = random_tree(&mut rng)?;
        let g = glue(&t, &plane)?;
        if !g.verified {
            failures.push(format!("tree {i}: {}", t.to_json()));
        }
        results.push(json!({"vertices": t.vertices().len(), "verified": g.verified, "dim": g.dims.marked}));
    }
    let all = failures.is_empty();
    Ok(Outcome::checked(all || !verify, json!({"seed": seed, "count": count, "verified": all, "trees": results}), failures))
}

fn main() -> ExitCode {
    let outcome = match Cli::try_parse() {
        Ok(cli) => run(cli).unwrap_or_else(|e| e),
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => invalid(e.to_string()),
    };
    let out = json!({"status": outcome.status.name(), "payload": outcome.payload, "diagnostics": outcome.diagnostics});
    let text = serde_json::to_string_pretty(&out).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(outcome.status.code())
}
