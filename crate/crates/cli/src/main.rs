use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use uvh_core::complex::{entourage_complex, vietoris_pair, SimplicialComplex, SimplicialComplexPair};
use uvh_core::connect::{connectivity_profile, hu_bound};
use uvh_core::experiment::{default_scales, run_experiment, ExperimentSpec, LadderSpec, EXPERIMENTS};
use uvh_core::generate::GeneratorSpec;
use uvh_core::homology::{PairHomology, Ring};
use uvh_core::homotopy::{homotopy_axiom_check, induced_f_v, ScaledMap, UniformPair};
use uvh_core::io;
use uvh_core::space::{entourage_from_metric, full_set, Entourage, EntourageLadder, MetricCloud, PointSet};
use uvh_core::tower::{
    build_tower, excision_verify, plateau_estimate, resolution_check, tower_csv, ResolutionSystem, PLATEAU_MIN_SPAN,
};
use uvh_core::Error;

#[derive(Parser)]
#[command(name = "uvh", version, about = "Uniform Vietoris homology of finite metric and uniform spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a sample space as CSV coordinates or a distance matrix.
    Generate(GenerateArgs),
    /// Vietoris complex of an entourage, with simplex counts.
    Complex(ComplexArgs),
    /// Homology of a complex or of a space at one scale.
    Homology(SpaceArgs),
    /// Homology tower over a ladder with bonding maps and plateaus.
    Tower(TowerArgs),
    /// Chain components and Hu bounds at every rung.
    Components(ComponentsArgs),
    /// Hu bound of a subset at one scale.
    Bounded(BoundedArgs),
    /// Excision verifier for a pair of subsets.
    Excise(ExciseArgs),
    /// Induced maps and the homotopy-axiom pipeline.
    Homotopy(HomotopyArgs),
    /// Uniform-resolution conditions for an inverse system.
    Resolution(ResolutionArgs),
    /// Run a named experiment.
    Experiment(ExperimentArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Input file; format from extension: .csv points, .matrix distances,
    /// .relation pairs, .complex simplices.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generated space instead of an input file, e.g. circle:60.
    #[arg(long, conflicts_with = "input")]
    generator: Option<String>,
    /// Geometric ladder start:ratio:count.
    #[arg(long, conflicts_with = "scales")]
    ladder: Option<String>,
    /// Explicit strictly decreasing scales a,b,c.
    #[arg(long)]
    scales: Option<String>,
    #[arg(long, default_value = "z2")]
    ring: Ring,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Degrees such as 0,1 or 0-2.
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit scale,degree,betti CSV instead of JSON where supported.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// kind:arg[:arg], e.g. circle:6, torus:4:5, line:11:0.5.
    spec: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write a distance matrix even when coordinates exist.
    #[arg(long)]
    matrix: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComplexArgs {
    #[command(flatten)]
    common: Common,
    /// Single scale; defaults to the coarsest scale of the ladder.
    #[arg(long)]
    scale: Option<f64>,
    /// Subset file for the subcomplex A_U.
    #[arg(long)]
    subset: Option<PathBuf>,
    /// Print maximal simplices in the complex format.
    #[arg(long)]
    export: bool,
}

#[derive(Args)]
struct SpaceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    subset: Option<PathBuf>,
}

#[derive(Args)]
struct TowerArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    subset: Option<PathBuf>,
    #[arg(long, default_value_t = PLATEAU_MIN_SPAN)]
    min_span: usize,
}

#[derive(Args)]
struct ComponentsArgs {
    #[command(flatten)]
    common: Common,
    /// Include the pairwise chain-length tables.
    #[arg(long)]
    lengths: bool,
}

#[derive(Args)]
struct BoundedArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    subset: Option<PathBuf>,
}

#[derive(Args)]
struct ExciseArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args)]
struct HomotopyArgs {
    #[command(flatten)]
    common: Common,
    /// Target space; defaults to the source.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Vertex map file for f ("i j" per line).
    #[arg(long)]
    f: PathBuf,
    /// Vertex map file for g; without it only f_V is computed.
    #[arg(long)]
    g: Option<PathBuf>,
    /// Homotopy steps, one line of images per step.
    #[arg(long)]
    steps: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    v_rung: usize,
    #[arg(long)]
    subset: Option<PathBuf>,
    #[arg(long)]
    target_subset: Option<PathBuf>,
}

#[derive(Args)]
struct ResolutionArgs {
    /// JSON description of the system.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment name, or "list".
    name: String,
    #[command(flatten)]
    common: Common,
}

/// An error with a chosen exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.chain().find_map(|c| c.downcast_ref::<Error>()) {
            Some(Error::Internal(_)) | Some(Error::Overflow) => 3,
            _ => 2,
        };
        Failure { code, err }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        anyhow::Error::new(err).into()
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

/// Returns whether the command's checks passed.
fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Complex(a) => complex(a),
        Command::Homology(a) => homology(a),
        Command::Tower(a) => tower(a),
        Command::Components(a) => components(a),
        Command::Bounded(a) => bounded(a),
        Command::Excise(a) => excise(a),
        Command::Homotopy(a) => homotopy(a),
        Command::Resolution(a) => resolution(a),
        Command::Experiment(a) => experiment(a),
    }
}

fn read(path: &Path) -> CliResult<String> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, v: &impl serde::Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| anyhow!(e))?;
    text.push('\n');
    emit(out, &text)
}

/// A loaded input.
enum Space {
    Cloud(MetricCloud),
    Relation(Entourage, Vec<String>),
    Complex(SimplicialComplex),
}

impl Space {
    fn len(&self) -> usize {
        match self {
            Space::Cloud(c) => c.len(),
            Space::Relation(e, _) => e.carrier_size(),
            Space::Complex(c) => c.vertex_count(),
        }
    }

    fn warnings(&self) -> Vec<String> {
        match self {
            Space::Relation(_, w) => w.clone(),
            _ => Vec::new(),
        }
    }
}

fn load_path(path: &Path, max_dim: usize) -> CliResult<Space> {
    let text = read(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let ctx = |e: Error| Failure::from(anyhow::Error::new(e).context(format!("parsing {}", path.display())));
    Ok(match ext.as_str() {
        "csv" => Space::Cloud(io::parse_points_csv(&text).map_err(ctx)?),
        "matrix" | "dist" => Space::Cloud(io::parse_distance_matrix(&text).map_err(ctx)?),
        "relation" | "rel" => {
            let r = io::parse_relation(&text, None).map_err(ctx)?;
            Space::Relation(r.entourage, r.warnings)
        }
        "complex" | "cx" => Space::Complex(io::parse_complex(&text, None, max_dim).map_err(ctx)?),
        _ => return Err(anyhow!("cannot infer the format of {}; use .csv, .matrix, .relation or .complex", path.display()).into()),
    })
}

fn load(c: &Common, max_dim: usize) -> CliResult<Space> {
    match (&c.input, &c.generator) {
        (Some(p), _) => load_path(p, max_dim),
        (None, Some(g)) => Ok(Space::Cloud(g.parse::<GeneratorSpec>()?.generate(c.seed)?)),
        (None, None) => Err(anyhow!("give --input or --generator").into()),
    }
}

fn degrees(c: &Common, default: &[usize]) -> CliResult<Vec<usize>> {
    Ok(match &c.degrees {
        Some(s) => io::parse_degrees(s)?,
        None => default.to_vec(),
    })
}

/// Scales from --scales, --ladder or the default geometric ladder.
fn scales_for(c: &Common, cloud: &MetricCloud) -> CliResult<Vec<f64>> {
    Ok(match (&c.scales, &c.ladder) {
        (Some(s), _) => io::parse_scales(s)?,
        (None, Some(l)) => io::parse_ladder_spec(l)?,
        (None, None) => default_scales(cloud)?,
    })
}

fn ladder_for(c: &Common, space: &Space) -> CliResult<EntourageLadder> {
    match space {
        Space::Cloud(cloud) => Ok(EntourageLadder::from_metric(cloud, &scales_for(c, cloud)?)?),
        Space::Relation(e, _) => {
            if c.scales.is_some() || c.ladder.is_some() {
                return Err(anyhow!("a relation input is a single entourage; drop --scales/--ladder").into());
            }
            Ok(EntourageLadder::single(e.clone()))
        }
        Space::Complex(_) => Err(anyhow!("this command needs a point cloud or relation, not a complex").into()),
    }
}

/// Entourage at `scale` (or the coarsest ladder scale).
fn entourage_for(c: &Common, space: &Space, scale: Option<f64>) -> CliResult<(Entourage, Option<f64>)> {
    match (space, scale) {
        (Space::Cloud(cloud), Some(s)) => Ok((entourage_from_metric(cloud, s)?, Some(s))),
        (Space::Cloud(cloud), None) => {
            let s = scales_for(c, cloud)?[0];
            Ok((entourage_from_metric(cloud, s)?, Some(s)))
        }
        (Space::Relation(e, _), None) => Ok((e.clone(), None)),
        (Space::Relation(..), Some(_)) => Err(anyhow!("--scale does not apply to a relation input").into()),
        (Space::Complex(_), _) => Err(anyhow!("this command needs a point cloud or relation, not a complex").into()),
    }
}

fn subset(path: Option<&PathBuf>, n: usize) -> CliResult<Option<PointSet>> {
    path.map(|p| Ok(io::parse_subset(&read(p)?, n)?)).transpose()
}

fn generate(a: GenerateArgs) -> CliResult<bool> {
    let cloud = a.spec.parse::<GeneratorSpec>()?.generate(a.seed)?;
    let rows: Vec<Vec<f64>> = match cloud.coordinates() {
        Some(c) if !a.matrix => c.to_vec(),
        _ => cloud.distance_rows(),
    };
    let mut text = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:?}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    emit(a.out.as_deref(), &text)?;
    Ok(true)
}

fn pair_for(space: &Space, c: &Common, scale: Option<f64>, sub: Option<&PathBuf>, max_dim: usize) -> CliResult<(SimplicialComplexPair, Option<f64>)> {
    let n = space.len();
    let a = subset(sub, n)?;
    if let Space::Complex(cx) = space {
        if a.is_some() {
            return Err(anyhow!("--subset is not supported for complex inputs").into());
        }
        return Ok((SimplicialComplexPair::absolute(cx.clone()), None));
    }
    let (u, s) = entourage_for(c, space, scale)?;
    let pair = match a {
        Some(a) => vietoris_pair(&a, &u, max_dim)?,
        None => SimplicialComplexPair::absolute(entourage_complex(&u, max_dim)),
    };
    Ok((pair, s))
}

fn complex(a: ComplexArgs) -> CliResult<bool> {
    let max_dim = a.common.max_dim.unwrap_or(uvh_core::complex::DEFAULT_MAX_DIM);
    let space = load(&a.common, max_dim)?;
    let (pair, scale) = pair_for(&space, &a.common, a.scale, a.subset.as_ref(), max_dim)?;
    if a.export {
        emit(a.common.out.as_deref(), &io::export_complex(pair.total()))?;
        return Ok(true);
    }
    let counts = |cx: &SimplicialComplex| (0..=cx.max_dim()).map(|d| cx.count(d)).collect::<Vec<_>>();
    emit_json(
        a.common.out.as_deref(),
        &json!({
            "vertices": pair.total().vertex_count(),
            "scale": scale,
            "max_dim": max_dim,
            "truncated": pair.total().is_truncated(),
            "simplex_counts": counts(pair.total()),
            "sub_simplex_counts": counts(pair.sub()),
            "euler_characteristic": pair.total().euler_characteristic(),
            "maximal_simplices": pair.total().maximal_simplices(),
            "warnings": space.warnings(),
        }),
    )?;
    Ok(true)
}

fn homology(a: SpaceArgs) -> CliResult<bool> {
    let degs = degrees(&a.common, &[0, 1])?;
    let top = degs.iter().copied().max().unwrap_or(0);
    let max_dim = a.common.max_dim.unwrap_or(top + 1);
    let space = load(&a.common, max_dim)?;
    let (pair, scale) = pair_for(&space, &a.common, a.scale, a.subset.as_ref(), max_dim)?;
    let h = PairHomology::compute(&pair, a.common.ring, &degs)?;
    if a.common.csv {
        let mut text = String::from("scale,degree,betti\n");
        for g in h.groups() {
            text.push_str(&format!("{},{},{}\n", scale.map_or(String::new(), |s| s.to_string()), g.degree, g.betti));
        }
        emit(a.common.out.as_deref(), &text)?;
    } else {
        let groups: Vec<_> = h.groups().collect();
        emit_json(
            a.common.out.as_deref(),
            &json!({ "ring": a.common.ring, "scale": scale, "max_dim": max_dim, "groups": groups, "warnings": space.warnings() }),
        )?;
    }
    Ok(true)
}

fn uniform_pair(c: &Common, space: &Space, sub: Option<&PathBuf>) -> CliResult<UniformPair> {
    let ladder = ladder_for(c, space)?;
    Ok(match subset(sub, space.len())? {
        Some(a) => UniformPair::new(ladder, a)?,
        None => UniformPair::absolute(ladder),
    })
}

fn tower(a: TowerArgs) -> CliResult<bool> {
    let degs = degrees(&a.common, &[0, 1])?;
    let top = degs.iter().copied().max().unwrap_or(0);
    let max_dim = a.common.max_dim.unwrap_or(top + 1).max(top + 1);
    let space = load(&a.common, max_dim)?;
    let pair = uniform_pair(&a.common, &space, a.subset.as_ref())?;
    let t = build_tower(&pair, max_dim, a.common.ring)?;
    if a.common.csv {
        emit(a.common.out.as_deref(), &tower_csv(&t))?;
        return Ok(true);
    }
    let mut plateaus = serde_json::Map::new();
    let mut betti = serde_json::Map::new();
    for &d in &degs {
        plateaus.insert(d.to_string(), serde_json::to_value(plateau_estimate(&t, d, a.min_span)?).map_err(|e| anyhow!(e))?);
        betti.insert(d.to_string(), json!(t.betti_sequence(d)?));
    }
    emit_json(
        a.common.out.as_deref(),
        &json!({ "betti": betti, "plateaus": plateaus, "tower": t, "warnings": space.warnings() }),
    )?;
    Ok(true)
}

fn components(a: ComponentsArgs) -> CliResult<bool> {
    let space = load(&a.common, 1)?;
    let ladder = ladder_for(&a.common, &space)?;
    let p = connectivity_profile(&ladder, a.lengths);
    emit_json(a.common.out.as_deref(), &p)?;
    Ok(true)
}

fn bounded(a: BoundedArgs) -> CliResult<bool> {
    let space = load(&a.common, 1)?;
    let (u, scale) = entourage_for(&a.common, &space, a.scale)?;
    let b = subset(a.subset.as_ref(), space.len())?.unwrap_or_else(|| full_set(space.len()));
    let bound = hu_bound(&b, &u)?;
    emit_json(
        a.common.out.as_deref(),
        &json!({
            "scale": scale,
            "points": b.count_ones(..),
            "hu_bound": bound.map_or(json!("infinity"), |n| json!(n)),
            "hu_bound_steps": bound.map_or(json!("infinity"), |n| json!(n - 1)),
            "bounded": bound.is_some(),
        }),
    )?;
    Ok(true)
}

fn excise(a: ExciseArgs) -> CliResult<bool> {
    let space = load(&a.common, 1)?;
    let ladder = ladder_for(&a.common, &space)?;
    let n = space.len();
    let sa = io::parse_subset(&read(&a.a)?, n)?;
    let sb = io::parse_subset(&read(&a.b)?, n)?;
    let degs = degrees(&a.common, &[0, 1])?;
    match excision_verify(&ladder, &sa, &sb, a.common.ring, &degs) {
        Ok(v) => {
            let passed = v.passed();
            emit_json(a.common.out.as_deref(), &json!({ "stage1_passed": true, "passed": passed, "verdict": v }))?;
            Ok(passed)
        }
        Err(Error::HypothesisNotSatisfied { witness }) => {
            emit_json(
                a.common.out.as_deref(),
                &json!({ "stage1_passed": false, "passed": false, "witness": witness }),
            )?;
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

/// One map per non-comment line, listing the images of 0, 1, 2, ...
fn parse_steps(text: &str, source: usize, target: usize) -> CliResult<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (k, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let row: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line: k + 1, message: format!("bad image {t:?}") }))
            .collect::<Result<_, _>>()?;
        if row.len() != source || row.iter().any(|&y| y >= target) {
            return Err(Error::Parse { line: k + 1, message: format!("expected {source} images below {target}") }.into());
        }
        out.push(row);
    }
    Ok(out)
}

fn homotopy(a: HomotopyArgs) -> CliResult<bool> {
    let degs = degrees(&a.common, &[1])?;
    let source_space = load(&a.common, 1)?;
    let target_space = match &a.target {
        Some(p) => load_path(p, 1)?,
        None => load(&a.common, 1)?,
    };
    let source = uniform_pair(&a.common, &source_space, a.subset.as_ref())?;
    let target = uniform_pair(&a.common, &target_space, a.target_subset.as_ref())?;
    let (n, m) = (source.carrier_size(), target.carrier_size());
    let f = ScaledMap::new(io::parse_vertex_map(&read(&a.f)?, n, m)?, &source, &target)?;
    let Some(gp) = &a.g else {
        let reports = degs.iter().map(|&d| induced_f_v(&f, a.v_rung, a.common.ring, d)).collect::<Result<Vec<_>, _>>()?;
        emit_json(a.common.out.as_deref(), &json!({ "induced": reports }))?;
        return Ok(true);
    };
    let g = ScaledMap::new(io::parse_vertex_map(&read(gp)?, n, m)?, &source, &target)?;
    let steps = match &a.steps {
        Some(p) => parse_steps(&read(p)?, n, m)?,
        None => Vec::new(),
    };
    let v = homotopy_axiom_check(&f, &g, &steps, a.v_rung, a.common.ring, &degs)?;
    let holds = v.holds;
    emit_json(a.common.out.as_deref(), &v)?;
    Ok(holds)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceJson {
    #[serde(default)]
    points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    matrix: Option<Vec<Vec<f64>>>,
    scales: Vec<f64>,
}

impl SpaceJson {
    fn ladder(self) -> CliResult<EntourageLadder> {
        let cloud = match (self.points, self.matrix) {
            (Some(p), None) => MetricCloud::from_coordinates(p)?,
            (None, Some(m)) => MetricCloud::from_distance_matrix(m)?,
            _ => return Err(anyhow!("each space needs exactly one of \"points\" or \"matrix\"").into()),
        };
        Ok(EntourageLadder::from_metric(&cloud, &self.scales)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolutionJson {
    base: SpaceJson,
    levels: Vec<SpaceJson>,
    cones: Vec<Vec<usize>>,
    bonds: Vec<Vec<usize>>,
}

fn resolution(a: ResolutionArgs) -> CliResult<bool> {
    let spec: ResolutionJson = serde_json::from_str(&read(&a.input)?)
        .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    let levels = spec.levels.into_iter().map(SpaceJson::ladder).collect::<CliResult<Vec<_>>>()?;
    let system = ResolutionSystem::new(spec.base.ladder()?, levels, spec.cones, spec.bonds)?;
    let v = resolution_check(&system)?;
    let ok = v.commutes && v.condition1_holds && v.condition2_holds;
    emit_json(a.out.as_deref(), &json!({ "passed": ok, "verdict": v }))?;
    Ok(ok)
}

fn experiment(a: ExperimentArgs) -> CliResult<bool> {
    if a.name == "list" {
        emit(a.common.out.as_deref(), &(EXPERIMENTS.join("\n") + "\n"))?;
        return Ok(true);
    }
    let c = &a.common;
    if c.input.is_some() {
        bail_input("experiments use --generator, not --input")?;
    }
    let mut spec = ExperimentSpec::named(&a.name)?;
    spec.generator = c.generator.clone();
    spec.ring = c.ring;
    spec.seed = c.seed;
    if let Some(d) = c.max_dim {
        spec.max_dim = d;
    }
    if let Some(d) = &c.degrees {
        spec.degrees = io::parse_degrees(d)?;
    }
    spec.ladder = match (&c.scales, &c.ladder) {
        (Some(s), _) => LadderSpec::Explicit(io::parse_scales(s)?),
        (None, Some(l)) => LadderSpec::Explicit(io::parse_ladder_spec(l)?),
        (None, None) => LadderSpec::Default,
    };
    let report = run_experiment(&spec).map_err(|e| anyhow::Error::new(e).context(format!("experiment {}", a.name)))?;
    if c.csv {
        let rows = csv_from_report(&report.data);
        emit(c.out.as_deref(), &rows)?;
    } else {
        emit_json(c.out.as_deref(), &report)?;
    }
    for e in report.expectations.iter().filter(|e| !e.passed) {
        eprintln!("expectation failed: {} {}", e.description, e.detail);
    }
    Ok(report.passed)
}

fn bail_input(msg: &str) -> CliResult<()> {
    Err(anyhow::Error::new(Error::InvalidInput(msg.to_string())).into())
}

/// `scale,degree,betti` rows from the betti sequences in a report.
fn csv_from_report(data: &Value) -> String {
    let mut out = String::from("scale,degree,betti\n");
    let Some(scales) = data.get("scales").and_then(Value::as_array) else {
        return out;
    };
    for d in 0..4 {
        let Some(b) = data.get(format!("betti{d}")).and_then(Value::as_array) else { continue };
        for (s, v) in scales.iter().zip(b) {
            out.push_str(&format!("{s},{d},{v}\n"));
        }
    }
    out
}
