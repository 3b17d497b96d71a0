//! Command-line front end for `medcube-core`.
//!
//! [`run`] executes one invocation in-process and returns the exit code and
//! both output streams, so the binary and the golden tests share one path.
//! Exit codes: 0 success, 1 a validation or checked property failed, 2 the
//! command line or an input file could not be parsed.

pub mod file;
pub mod presets;
pub mod render;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use medcube_core::median::{verify_axioms, verify_axioms_by_wall, IntervalIntersection};
use medcube_core::metric::{
    build_exhaustion, cauchy_gap_check, floyd, format_ratio, retract_layer, verify_median_metric, Growth,
    LayeredExhaustion, WeightedWallspace,
};
use medcube_core::wallspace::{check_local_cubulation, sageev_cubulation, CubeComplexSkeleton, HalfspaceSystem};
use medcube_core::{Error, MedianModel, VertexId, VertexSet};

use crate::file::WallspaceFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// The result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "medcube",
    version,
    about = "Finite median algebras, their cube complexes and weighted wall metrics",
    after_help = "Vertices are given by name, by bit string, or as `center`.\n\
Sets are `all`, `center`, `box:A:B` (the interval [A,B]) or vertices joined by `+`.\n\
Exit status: 0 success, 1 a check or validation failed, 2 bad arguments or input."
)]
struct Cli {
    /// Read the model from a named preset instead of a file.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Positional arguments: the model file (unless `--preset` is given),
/// followed by the command's own operands.
#[derive(Args, Debug)]
struct Inputs {
    #[arg(value_name = "FILE|ARGS")]
    inputs: Vec<String>,
}

#[derive(Args, Debug)]
struct LayerArgs {
    /// Seed set of the exhaustion.
    #[arg(long, value_name = "SET")]
    seed: String,
    #[arg(long, default_value_t = 3)]
    layers: usize,
    /// Extension set L_i for layers 2, 3, … in order; omit for onion growth.
    #[arg(long = "grow", value_name = "SET")]
    grow: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check closure, the median laws and wall structure.
    Validate {
        #[command(flatten)]
        inputs: Inputs,
        /// RNG seed for sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check the explicit median table.
        #[arg(long)]
        table: bool,
        /// Sampled tuples per law for tables above 32 elements.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// The median of three vertices.
    Median(Inputs),
    /// The interval between two vertices.
    Interval(Inputs),
    /// Convex hull of vertices, with the number of joins needed.
    Hull(Inputs),
    /// Rank of the model, or of the interval between two vertices.
    Rank(Inputs),
    /// Intersection of the intervals [a,b] and [c,d].
    Intersect(Inputs),
    /// A median square at a inside [a,b], if [a,b] minus a is not convex.
    SquareIn(Inputs),
    /// The median cube spanned by a corner and tips.
    FlagSpan(Inputs),
    /// All consistent orientations of the wall system (accepts raw point sets).
    Cubulate(Inputs),
    /// Cube counts and maximal cubes (accepts raw point sets).
    Complex(Inputs),
    /// Local cubulation conditions at a vertex (accepts raw point sets).
    CheckLocal {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_name = "VERTEX")]
        vertex: String,
        #[arg(long)]
        dim: usize,
    },
    /// Weighted distance between two vertices.
    Dist(Inputs),
    /// Unique-betweenness check of the weighted metric.
    VerifyMetric(Inputs),
    /// Replace a wall by parallel copies; prints the new file.
    Subdivide {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        wall: String,
        #[arg(long = "copies", short = 'n')]
        copies: usize,
    },
    /// 1-thickening of a convex set.
    Thicken {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_name = "SET")]
        set: String,
    },
    /// Layered exhaustion by repeated 1-thickening.
    Exhaust {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        layers: LayerArgs,
    },
    /// Layered exhaustion with layer-i walls weighted 2^-i.
    Floyd {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        layers: LayerArgs,
    },
    /// Gate retraction from layer i+1 onto layer i.
    Retract {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        layers: LayerArgs,
        #[arg(long)]
        layer: usize,
        /// Use Floyd weights.
        #[arg(long)]
        floyd: bool,
    },
    /// The 1-skeleton as DOT, or SVG for two-family models.
    ExportDot {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        svg: bool,
    },
    /// Print a preset in file form, or list presets.
    Preset {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_FAILED,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownVertex(_)
            | Error::UnknownWall(_)
            | Error::BadBitString(_)
            | Error::InvalidCount(_)
            | Error::ArityMismatch { .. } => EXIT_USAGE,
            _ => EXIT_FAILED,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// A finished command: text and JSON renderings and the exit code.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            code: EXIT_OK,
            text,
            json,
        }
    }

    fn checked(passed: bool, text: String, json: Value) -> Self {
        Report {
            code: if passed { EXIT_OK } else { EXIT_FAILED },
            text,
            json,
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Outcome { code, stdout, stderr };
        }
    };
    match dispatch(&cli) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: if cli.json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("reports serialize");
                s.push('\n');
                s
            } else {
                report.text
            },
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

/// The model source: a builtin preset's model, or a parsed file.
struct Source {
    file: WallspaceFile,
    model: Option<MedianModel>,
}

fn load<'a>(preset: &Option<String>, inputs: &'a [String]) -> CliResult<(Source, &'a [String])> {
    if let Some(name) = preset {
        if let Some(model) = presets::builtin(name) {
            let model = model?;
            return Ok((
                Source {
                    file: WallspaceFile::from_model(&model),
                    model: Some(model),
                },
                inputs,
            ));
        }
        let path = presets::preset_file(name).ok_or_else(|| {
            CliError::usage(format!(
                "unknown preset `{name}` (not builtin and not found via {})",
                presets::PRESET_DIR_VAR
            ))
        })?;
        let file = read_file(&path.to_string_lossy())?;
        return Ok((Source { file, model: None }, inputs));
    }
    let (path, rest) = inputs
        .split_first()
        .ok_or_else(|| CliError::usage("missing model FILE (or --preset NAME)"))?;
    Ok((
        Source {
            file: read_file(path)?,
            model: None,
        },
        rest,
    ))
}

fn read_file(path: &str) -> CliResult<WallspaceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}")))?;
    file::parse(&text).map_err(|e| CliError::usage(format!("{path}:{e}")))
}

impl Source {
    fn model(&self, seed: u64) -> CliResult<MedianModel> {
        if let Some(m) = &self.model {
            return Ok(m.clone());
        }
        let f = &self.file;
        Ok(MedianModel::with_options(f.walls.clone(), f.rows(), f.parallel_walls, seed)?)
    }

    fn wallspace(&self) -> CliResult<WeightedWallspace> {
        Ok(WeightedWallspace::new(self.model(0)?, self.file.weight_vector())?)
    }

    /// The skeleton on the raw points, with no closure requirement.
    fn skeleton(&self) -> CliResult<CubeComplexSkeleton> {
        if let Some(m) = &self.model {
            return Ok(m.build_complex());
        }
        Ok(CubeComplexSkeleton::from_points(self.file.walls.clone(), self.file.rows())?)
    }
}

fn operands<'a>(rest: &'a [String], expected: usize, what: &str) -> CliResult<&'a [String]> {
    if rest.len() != expected {
        return Err(CliError::usage(format!(
            "expected {expected} operand(s) ({what}), found {}",
            rest.len()
        )));
    }
    Ok(rest)
}

/// A vertex reference: a name, a bit string, or `center`.
fn vertex(m: &MedianModel, r: &str) -> CliResult<VertexId> {
    if r == "center" {
        return Ok(m.center());
    }
    Ok(m.resolve(r)?)
}

fn skeleton_vertex(skel: &CubeComplexSkeleton, r: &str) -> CliResult<VertexId> {
    if r != "center" {
        return Ok(skel.resolve(r)?);
    }
    let n = skel.vertex_count();
    (0..n)
        .map(VertexId)
        .min_by_key(|&v| {
            let ecc = (0..n).map(|u| skel.vertex(VertexId(u)).hamming(skel.vertex(v))).max();
            (ecc, v)
        })
        .ok_or_else(|| CliError::usage("empty skeleton"))
}

/// A vertex set: `all`, `center`, `box:A:B` for the interval, or
/// references joined by `+`.
fn vertex_set(m: &MedianModel, spec: &str) -> CliResult<VertexSet> {
    if spec == "all" {
        return Ok(m.full_set());
    }
    if let Some(rest) = spec.strip_prefix("box:") {
        let (a, b) = rest
            .split_once(':')
            .ok_or_else(|| CliError::usage(format!("`{spec}`: expected box:A:B")))?;
        return Ok(m.interval(vertex(m, a)?, vertex(m, b)?)?.members);
    }
    let ids = spec
        .split('+')
        .map(|r| vertex(m, r))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(m.set_of(ids))
}

fn labels(m: &MedianModel, s: &VertexSet) -> Vec<String> {
    s.iter().map(|v| m.label(v)).collect()
}

fn wall_names(m: &MedianModel, walls: &[usize]) -> Vec<String> {
    walls.iter().map(|&w| m.walls()[w].clone()).collect()
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    let preset = &cli.preset;
    match &cli.command {
        Command::Validate {
            inputs,
            seed,
            table,
            budget,
        } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            validate(&src.model(*seed)?, *seed, *table, *budget)
        }
        Command::Median(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let m = src.model(0)?;
            let r = operands(rest, 3, "a b c")?;
            let v = m.median(vertex(&m, &r[0])?, vertex(&m, &r[1])?, vertex(&m, &r[2])?)?;
            Ok(Report::ok(format!("{}\n", m.label(v)), json!({ "median": m.label(v) })))
        }
        Command::Interval(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let m = src.model(0)?;
            let r = operands(rest, 2, "a b")?;
            let iv = m.interval(vertex(&m, &r[0])?, vertex(&m, &r[1])?)?;
            let members = labels(&m, &iv.members);
            Ok(Report::ok(
                format!("{}\n", members.join(" ")),
                json!({ "a": m.label(iv.a), "b": m.label(iv.b), "members": members }),
            ))
        }
        Command::Hull(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let m = src.model(0)?;
            if rest.is_empty() {
                return Err(CliError::usage("hull needs at least one vertex"));
            }
            let ids = rest.iter().map(|r| vertex(&m, r)).collect::<CliResult<Vec<_>>>()?;
            let (hull, depth) = m.hull(&m.set_of(ids))?;
            let members = labels(&m, &hull);
            Ok(Report::ok(
                format!("members {}\ndepth {depth}\n", members.join(" ")),
                json!({ "members": members, "depth": depth }),
            ))
        }
        Command::Rank(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let m = src.model(0)?;
            match rest.len() {
                0 => {
                    let r = m.rank();
                    Ok(Report::ok(format!("{r}\n"), json!({ "rank": r })))
                }
                2 => {
                    let (a, b) = (vertex(&m, &rest[0])?, vertex(&m, &rest[1])?);
                    let r = m.rank_interval(a, b)?;
                    let additive = m.is_additive(a, b)?;
                    Ok(Report::ok(
                        format!("rank {r}\nadditive {additive}\n"),
                        json!({ "a": m.label(a), "b": m.label(b), "rank": r, "additive": additive }),
                    ))
                }
                _ => Err(CliError::usage("rank takes no operands or two vertices")),
            }
        }
        Command::Intersect(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let m = src.model(0)?;
            let r = operands(rest, 4, "a b c d")?;
            let ids = r.iter().map(|x| vertex(&m, x)).collect::<CliResult<Vec<_>>>()?;
            Ok(match m.interval_intersection((ids[0], ids[1]), (ids[2], ids[3]))? {
                IntervalIntersection::Empty => {
                    Report::ok("empty\n".into(), json!({ "empty": true, "endpoints": null, "members": [] }))
                }
                IntervalIntersection::Interval(iv) => {
                    let members = labels(&m, &iv.members);
                    Report::ok(
                        format!("[{}, {}] = {}\n", m.label(iv.a), m.label(iv.b), members.join(" ")),
                        json!({ "empty": false, "endpoints": [m.label(iv.a), m.label(iv.b)], "members": members }),
                    )
                }
            })
        }
        Command::SquareIn(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let m = src.model(0)?;
            let r = operands(rest, 2, "a b")?;
            let (a, b) = (vertex(&m, &r[0])?, vertex(&m, &r[1])?);
            Ok(match m.find_square_in_interval(a, b)? {
                Some(q) => {
                    let quad: Vec<String> = q.iter().map(|&v| m.label(v)).collect();
                    Report::ok(format!("square {}\n", quad.join(" ")), json!({ "square": quad }))
                }
                None => Report::ok(
                    format!("none: [{0}, {1}] minus {0} is convex\n", m.label(a), m.label(b)),
                    json!({ "square": null }),
                ),
            })
        }
        Command::FlagSpan(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let m = src.model(0)?;
            if rest.len() < 2 {
                return Err(CliError::usage("flag-span needs a corner and at least one tip"));
            }
            let a = vertex(&m, &rest[0])?;
            let tips = rest[1..].iter().map(|r| vertex(&m, r)).collect::<CliResult<Vec<_>>>()?;
            let cube = m.flag_span(a, &tips, |i, j| m.square_face(a, tips[i], tips[j]))?;
            m.check_cube_embedding(&cube)?;
            let k = cube.dimension();
            let mut text = String::new();
            let mut map = Vec::new();
            for (mask, &v) in cube.vertex_map.iter().enumerate() {
                let coords: String = (0..k).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect();
                let _ = writeln!(text, "{coords} -> {}", m.label(v));
                map.push(json!({ "coords": coords, "vertex": m.label(v) }));
            }
            Ok(Report::ok(
                text,
                json!({
                    "corner": m.label(a),
                    "tips": tips.iter().map(|&t| m.label(t)).collect::<Vec<_>>(),
                    "dimension": k,
                    "vertex_map": map,
                }),
            ))
        }
        Command::Cubulate(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            operands(rest, 0, "none")?;
            cubulate(&src)
        }
        Command::Complex(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            operands(rest, 0, "none")?;
            complex(&src.skeleton()?)
        }
        Command::CheckLocal { inputs, vertex: v, dim } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            let skel = src.skeleton()?;
            let id = skeleton_vertex(&skel, v)?;
            let r = check_local_cubulation(&skel, id, *dim)?;
            let names = |dirs: &[usize]| dirs.iter().map(|&d| skel.walls()[d].clone()).collect::<Vec<_>>();
            let mut text = format!(
                "vertex {}\ncontained-in-n-cube {}\ntwo-cofacets {}\nflag {}\n",
                skel.label(id),
                r.contained_in_n_cube,
                r.two_cofacets,
                r.flag
            );
            if let Some(w) = &r.containment_witness {
                let _ = writeln!(text, "not in an {}-cube: [{}]", dim, names(w).join(" "));
            }
            if let Some((w, c)) = &r.cofacet_witness {
                let _ = writeln!(text, "cofacets of [{}]: {c}", names(w).join(" "));
            }
            if let Some(w) = &r.flag_witness {
                let _ = writeln!(text, "clique without a cube: [{}]", names(w).join(" "));
            }
            let json = json!({
                "vertex": skel.label(id),
                "dim": dim,
                "contained_in_n_cube": r.contained_in_n_cube,
                "two_cofacets": r.two_cofacets,
                "flag": r.flag,
                "containment_witness": r.containment_witness.as_deref().map(names),
                "cofacet_witness": r.cofacet_witness.as_ref().map(|(w, c)| json!({ "cube": names(w), "cofacets": c })),
                "flag_witness": r.flag_witness.as_deref().map(names),
            });
            Ok(Report::checked(r.passed(), text, json))
        }
        Command::Dist(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            let ws = src.wallspace()?;
            let m = ws.model();
            let r = operands(rest, 2, "u v")?;
            let d = ws.distance(vertex(m, &r[0])?, vertex(m, &r[1])?)?;
            Ok(Report::ok(format!("{}\n", format_ratio(&d)), json!({ "distance": format_ratio(&d) })))
        }
        Command::VerifyMetric(i) => {
            let (src, rest) = load(preset, &i.inputs)?;
            operands(rest, 0, "none")?;
            let ws = src.wallspace()?;
            let m = ws.model();
            let r = verify_median_metric(&ws)?;
            let mut text = format!(
                "triples {}\nviolations {}\ninterval-mismatches {}\n",
                r.triples_checked, r.violation_count, r.interval_mismatches
            );
            let lbl = |i: usize| m.label(VertexId(i));
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "triple": v.triple.iter().map(|&i| lbl(i)).collect::<Vec<_>>(),
                        "between": v.between.iter().map(|&i| lbl(i)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            if let Some(v) = r.violations.first() {
                let t: Vec<String> = v.triple.iter().map(|&i| lbl(i)).collect();
                let _ = writeln!(text, "witness {}", t.join(" "));
            }
            Ok(Report::checked(
                r.passed(),
                text,
                json!({
                    "triples": r.triples_checked,
                    "violations": r.violation_count,
                    "interval_mismatches": r.interval_mismatches,
                    "witnesses": violations,
                    "passed": r.passed(),
                }),
            ))
        }
        Command::Subdivide { inputs, wall, copies } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            let ws = src.wallspace()?.subdivide_wall(wall, *copies)?;
            let text = WallspaceFile::from_wallspace(&ws).serialize();
            let parent = ws.parent(ws.model().wall_index(&format!("{wall}#1")).unwrap_or(0)).to_string();
            let copies_json: Vec<Value> = ws
                .copies_of(&parent)
                .into_iter()
                .map(|w| json!({ "wall": ws.model().walls()[w], "weight": format_ratio(ws.weight(w)) }))
                .collect();
            Ok(Report::ok(
                text.clone(),
                json!({
                    "vertices": ws.model().len(),
                    "walls": ws.model().walls(),
                    "copies": copies_json,
                    "file": text,
                }),
            ))
        }
        Command::Thicken { inputs, set } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            let ws = src.wallspace()?;
            let m = ws.model();
            let k = vertex_set(m, set)?;
            let t = ws.thicken(&k)?;
            let gap = t.gap.as_ref().map(format_ratio);
            let text = format!(
                "K {}\nN {}\nfrontier {}\nnew-walls {}\ngap {}\n",
                labels(m, &t.k).join(" "),
                labels(m, &t.n).join(" "),
                labels(m, &t.frontier).join(" "),
                wall_names(m, &t.new_walls).join(" "),
                gap.as_deref().unwrap_or("none")
            );
            Ok(Report::ok(
                text,
                json!({
                    "k": labels(m, &t.k),
                    "n": labels(m, &t.n),
                    "frontier": labels(m, &t.frontier),
                    "new_walls": wall_names(m, &t.new_walls),
                    "gap": gap,
                }),
            ))
        }
        Command::Exhaust { inputs, layers } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            let ws = src.wallspace()?;
            let exh = exhaustion(&ws, layers, false)?;
            let gaps = cauchy_gap_check(&exh);
            let (mut text, mut json) = layer_report(&exh);
            let _ = writeln!(
                text,
                "cauchy {} ({} checked)",
                if gaps.passed() { "pass" } else { "fail" },
                gaps.checked
            );
            json["cauchy"] = json!({
                "passed": gaps.passed(),
                "checked": gaps.checked,
                "min_gap": gaps.min_gap.as_ref().map(format_ratio),
            });
            Ok(Report::checked(gaps.passed(), text, json))
        }
        Command::Floyd { inputs, layers } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            let ws = src.wallspace()?;
            let f = floyd(&ws, &vertex_set(ws.model(), &layers.seed)?, layers.layers, &growth(&ws, layers)?)?;
            let (mut text, mut json) = layer_report(&f.exhaustion);
            let crossings: Vec<String> = f.max_crossings.iter().map(usize::to_string).collect();
            let _ = writeln!(text, "max-crossings {}", crossings.join(" "));
            let _ = writeln!(text, "max-seed-distance {}", format_ratio(&f.max_seed_distance));
            json["max_crossings"] = json!(f.max_crossings);
            json["max_seed_distance"] = json!(format_ratio(&f.max_seed_distance));
            Ok(Report::ok(text, json))
        }
        Command::Retract {
            inputs,
            layers,
            layer,
            floyd,
        } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            let ws = src.wallspace()?;
            let exh = exhaustion(&ws, layers, *floyd)?;
            let m = exh.ws.model();
            let r = retract_layer(&exh, *layer)?;
            let mut text = String::new();
            let mut map = Vec::new();
            for &(v, g) in &r.map {
                let _ = writeln!(text, "{} -> {}", m.label(v), m.label(g));
                map.push(json!({ "vertex": m.label(v), "image": m.label(g) }));
            }
            Ok(Report::ok(text, json!({ "layer": layer, "map": map })))
        }
        Command::ExportDot { inputs, svg } => {
            let (src, rest) = load(preset, &inputs.inputs)?;
            operands(rest, 0, "none")?;
            let m = src.model(0)?;
            let skel = m.build_complex();
            if *svg {
                let drawing = render::svg(&m, &skel).ok_or_else(|| {
                    CliError::failed("SVG needs the walls to split into two crossing families; use DOT")
                })?;
                Ok(Report::ok(drawing.clone(), json!({ "format": "svg", "content": drawing })))
            } else {
                let dot = render::dot(&m, &skel);
                Ok(Report::ok(dot.clone(), json!({ "format": "dot", "content": dot })))
            }
        }
        Command::Preset { name, list } => match (name, list) {
            (_, true) => {
                let mut text = String::new();
                for (n, about) in presets::BUILTIN {
                    let _ = writeln!(text, "{n:<8} {about}");
                }
                let entries: Vec<Value> = presets::BUILTIN
                    .iter()
                    .map(|(n, about)| json!({ "name": n, "description": about }))
                    .collect();
                Ok(Report::ok(text, json!({ "presets": entries })))
            }
            (Some(name), false) => {
                let (src, _) = load(&Some(name.clone()), &[])?;
                let m = src.model(0)?;
                let text = WallspaceFile::from_model(&m).serialize();
                Ok(Report::ok(
                    text.clone(),
                    json!({ "name": name, "vertices": m.len(), "walls": m.wall_count(), "file": text }),
                ))
            }
            (None, false) => Err(CliError::usage("preset needs a NAME or --list")),
        },
    }
}

#[derive(Serialize)]
struct ClosureJson {
    exhaustive: bool,
    triples_checked: u64,
}

#[derive(Serialize)]
struct AxiomJson {
    method: &'static str,
    exhaustive: bool,
    checked: [u64; 5],
    violations: u64,
}

fn validate(m: &MedianModel, seed: u64, table: bool, budget: u64) -> CliResult<Report> {
    let closure = m.closure_report(seed);
    let by_wall = verify_axioms_by_wall(m);
    let mut passed = closure.passed() && by_wall.passed();
    let mut text = format!(
        "vertices {}\nwalls {}\nrank {}\nclosure {} ({} triples)\naxioms {} (wall projections)\n",
        m.len(),
        m.wall_count(),
        m.rank(),
        if closure.exhaustive { "exhaustive" } else { "sampled" },
        closure.triples_checked,
        if by_wall.passed() { "hold" } else { "fail" },
    );
    let mut json = json!({
        "vertices": m.len(),
        "walls": m.wall_count(),
        "rank": m.rank(),
        "closure": ClosureJson { exhaustive: closure.exhaustive, triples_checked: closure.triples_checked },
        "axioms": AxiomJson {
            method: "wall-projection",
            exhaustive: by_wall.exhaustive,
            checked: by_wall.checked,
            violations: by_wall.violation_count,
        },
        "table": null,
    });
    if table {
        let r = verify_axioms(&m.to_table(), budget, seed);
        passed &= r.passed();
        let _ = writeln!(
            text,
            "table {} ({}, {} violations)",
            if r.passed() { "holds" } else { "fails" },
            if r.exhaustive { "exhaustive" } else { "sampled" },
            r.violation_count
        );
        json["table"] = serde_json::to_value(AxiomJson {
            method: "table",
            exhaustive: r.exhaustive,
            checked: r.checked,
            violations: r.violation_count,
        })
        .expect("serializable");
    }
    Ok(Report::checked(passed, text, json))
}

fn cubulate(src: &Source) -> CliResult<Report> {
    let system = match &src.model {
        Some(m) => HalfspaceSystem::from_model(m),
        None => HalfspaceSystem::from_points(src.file.walls.clone(), src.file.rows())?,
    };
    let c = sageev_cubulation(&system)?;
    let m = &c.model;
    let principal: VertexSet = m.set_of(c.principal.iter().copied());
    let added: Vec<String> = m.ids().filter(|&v| !principal.contains(v)).map(|v| m.label(v)).collect();
    let text = format!(
        "orientations {}\nprincipal {}\nadded {}\nclosure {}\nstrict {}\n",
        m.len(),
        principal.len(),
        if added.is_empty() { "none".to_string() } else { added.join(" ") },
        c.closure_size,
        c.strict
    );
    Ok(Report::ok(
        text,
        json!({
            "orientations": m.len(),
            "principal": principal.len(),
            "added": added,
            "closure": c.closure_size,
            "strict": c.strict,
        }),
    ))
}

fn complex(skel: &CubeComplexSkeleton) -> CliResult<Report> {
    let counts = skel.cube_counts();
    let mut text = format!(
        "dimension {}\ncubes {}\nmaximal\n",
        skel.dimension(),
        counts.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    );
    let mut maximal = Vec::new();
    for cube in skel.maximal_cubes() {
        let dirs: Vec<String> = cube.dirs.iter().map(|&d| skel.walls()[d].clone()).collect();
        let _ = writeln!(text, "  {} [{}]", skel.label(cube.base), dirs.join(" "));
        maximal.push(json!({ "base": skel.label(cube.base), "walls": dirs }));
    }
    Ok(Report::ok(
        text,
        json!({ "dimension": skel.dimension(), "counts": counts, "maximal": maximal }),
    ))
}

fn growth(ws: &WeightedWallspace, args: &LayerArgs) -> CliResult<Growth> {
    if args.grow.is_empty() {
        return Ok(Growth::Onion);
    }
    let sets = args
        .grow
        .iter()
        .map(|s| vertex_set(ws.model(), s))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Growth::Supplied(sets))
}

fn exhaustion(ws: &WeightedWallspace, args: &LayerArgs, floyd_weights: bool) -> CliResult<LayeredExhaustion> {
    let seed = vertex_set(ws.model(), &args.seed)?;
    let g = growth(ws, args)?;
    Ok(if floyd_weights {
        floyd(ws, &seed, args.layers, &g)?.exhaustion
    } else {
        build_exhaustion(ws, &seed, args.layers, &g)?
    })
}

fn layer_report(exh: &LayeredExhaustion) -> (String, Value) {
    let m = exh.ws.model();
    let mut text = String::new();
    let mut layers = Vec::new();
    for i in 1..=exh.len() {
        let walls = exh.walls_of_layer(i);
        let names = wall_names(m, &walls);
        let weight = walls.first().map(|&w| format_ratio(exh.ws.weight(w)));
        let gap = if i > 1 { exh.gaps[i - 2].as_ref().map(format_ratio) } else { None };
        let _ = writeln!(
            text,
            "layer {i}: {} vertices, walls [{}], weight {}, gap {}",
            exh.layer(i).len(),
            names.join(" "),
            weight.as_deref().unwrap_or("-"),
            gap.as_deref().unwrap_or("-")
        );
        layers.push(json!({
            "index": i,
            "size": exh.layer(i).len(),
            "walls": names,
            "weight": weight,
            "gap": gap,
        }));
    }
    let min_gap = exh.min_gap().as_ref().map(format_ratio);
    let unregistered = wall_names(m, &exh.unregistered_walls());
    let _ = writeln!(text, "min-gap {}", min_gap.as_deref().unwrap_or("-"));
    let _ = writeln!(text, "unregistered [{}]", unregistered.join(" "));
    (
        text,
        json!({ "layers": layers, "min_gap": min_gap, "unregistered_walls": unregistered }),
    )
}
