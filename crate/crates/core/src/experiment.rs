//! Named experiments with programmatic expectations and JSON reports.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::connect::hu_bound;
use crate::error::{Error, Result};
use crate::generate::{circle, line, subsample, GeneratorSpec};
use crate::homology::Ring;
use crate::homotopy::{homotopy_axiom_check, ScaledMap, UniformPair};
use crate::space::{entourage_from_metric, full_set, geometric_scales, point_set, EntourageLadder, MetricCloud};
use crate::tower::{build_tower, excision_verify, persistent_rank, plateau_estimate, HomologyTower, PLATEAU_MIN_SPAN};

pub const DEFAULT_RATIO: f64 = 0.8;
pub const DEFAULT_RUNGS: usize = 12;

/// How the scales of a ladder are chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LadderSpec {
    /// Start at the cloud's diameter, ratio 0.8, 12 rungs.
    #[default]
    Default,
    Geometric { start: f64, ratio: f64, count: usize },
    Explicit(Vec<f64>),
}

impl LadderSpec {
    pub fn scales(&self, cloud: &MetricCloud) -> Result<Vec<f64>> {
        match self {
            LadderSpec::Default => default_scales(cloud),
            LadderSpec::Geometric { start, ratio, count } => geometric_scales(*start, *ratio, *count),
            LadderSpec::Explicit(s) => Ok(s.clone()),
        }
    }
}

/// Default geometric scales for a cloud (start 1 for a single point).
pub fn default_scales(cloud: &MetricCloud) -> Result<Vec<f64>> {
    let d = cloud.diameter();
    geometric_scales(if d > 0.0 { d } else { 1.0 }, DEFAULT_RATIO, DEFAULT_RUNGS)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    /// Overrides the experiment's default space.
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default)]
    pub ladder: LadderSpec,
    #[serde(default)]
    pub ring: Ring,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default)]
    pub degrees: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_max_dim() -> usize {
    2
}

pub const EXPERIMENTS: &[&str] = &[
    "discrete_additivity",
    "circle_h1",
    "interval_contractible",
    "rational_circle",
    "sampling_stability",
    "excision",
    "homotopy_axiom",
    "line_boundedness",
];

impl ExperimentSpec {
    pub fn named(name: &str) -> Result<Self> {
        if !EXPERIMENTS.contains(&name) {
            return Err(Error::invalid(format!("unknown experiment {name:?}; known: {}", EXPERIMENTS.join(", "))));
        }
        Ok(ExperimentSpec {
            name: name.to_string(),
            generator: None,
            ladder: LadderSpec::Default,
            ring: Ring::Z2,
            max_dim: 2,
            degrees: vec![0, 1],
            seed: 0,
        })
    }

    fn generator_or(&self, default: &str) -> Result<GeneratorSpec> {
        self.generator.as_deref().unwrap_or(default).parse()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub spec: ExperimentSpec,
    pub expectations: Vec<Expectation>,
    pub passed: bool,
    pub data: Value,
}

struct Recorder(Vec<Expectation>);

impl Recorder {
    fn check(&mut self, description: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Expectation { description: description.into(), passed, detail: detail.into() });
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let mut rec = Recorder(Vec::new());
    let data = match spec.name.as_str() {
        "discrete_additivity" => discrete_additivity(spec, &mut rec)?,
        "circle_h1" => circle_h1(spec, &mut rec)?,
        "interval_contractible" => interval_contractible(spec, &mut rec)?,
        "rational_circle" => rational_circle_exp(spec, &mut rec)?,
        "sampling_stability" => sampling_stability(spec, &mut rec)?,
        "excision" => excision_exp(spec, &mut rec)?,
        "homotopy_axiom" => homotopy_axiom(spec, &mut rec)?,
        "line_boundedness" => line_boundedness(spec, &mut rec)?,
        other => return Err(Error::invalid(format!("unknown experiment {other:?}"))),
    };
    let passed = rec.0.iter().all(|e| e.passed);
    Ok(ExperimentReport { name: spec.name.clone(), spec: spec.clone(), expectations: rec.0, passed, data })
}

fn tower_for(cloud: &MetricCloud, scales: &[f64], max_dim: usize, ring: Ring) -> Result<HomologyTower> {
    let ladder = EntourageLadder::from_metric(cloud, scales)?;
    build_tower(&UniformPair::absolute(ladder), max_dim, ring)
}

fn max_dim_for(spec: &ExperimentSpec, top_degree: usize) -> usize {
    spec.max_dim.max(top_degree + 1)
}

fn discrete_additivity(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let gen = spec.generator_or("discrete:5")?;
    let n = match gen {
        GeneratorSpec::Discrete(n) => n,
        _ => return Err(Error::invalid("discrete_additivity needs a discrete:N generator")),
    };
    let cloud = gen.generate(spec.seed)?;
    let scales = spec.ladder.scales(&cloud)?;
    let tower = tower_for(&cloud, &scales, 1, spec.ring)?;
    let betti = tower.betti_sequence(0)?;
    let below: Vec<(f64, usize)> = scales.iter().copied().zip(betti.iter().copied()).filter(|(s, _)| *s < 1.0).collect();
    rec.check(
        format!("degree-0 betti = {n} at every rung with scale < 1"),
        !below.is_empty() && below.iter().all(|&(_, b)| b == n),
        format!("{below:?}"),
    );
    Ok(json!({ "points": n, "scales": scales, "betti0": betti, "tower": tower }))
}

/// Longest degree-`d` plateau of the given rank.
fn longest_window(tower: &HomologyTower, degree: usize, rank: usize) -> Result<Option<crate::tower::PlateauWindow>> {
    Ok(plateau_estimate(tower, degree, PLATEAU_MIN_SPAN)?
        .into_iter()
        .filter(|w| w.rank == rank)
        .max_by_key(|w| (w.span(), std::cmp::Reverse(w.coarse_rung))))
}

fn circle_h1(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let cloud = spec.generator_or("circle:60")?.generate(spec.seed)?;
    let scales = spec.ladder.scales(&cloud)?;
    let tower = tower_for(&cloud, &scales, max_dim_for(spec, 1), spec.ring)?;
    let window = longest_window(&tower, 1, 1)?;
    let span = window.as_ref().map_or(0, |w| w.span());
    rec.check("degree-1 plateau of rank 1 spanning at least 3 rungs", span >= 3, format!("{window:?}"));
    let h0 = match &window {
        Some(w) => {
            let flat = (w.coarse_rung..=w.fine_rung).all(|k| tower.betti(k, 0).ok() == Some(1));
            flat && persistent_rank(&tower, 0, w.fine_rung, w.coarse_rung)?.rank == 1
        }
        None => false,
    };
    rec.check("degree-0 stable rank 1 on the same window", h0, "");
    Ok(json!({
        "scales": scales,
        "betti0": tower.betti_sequence(0)?,
        "betti1": tower.betti_sequence(1)?,
        "plateaus1": plateau_estimate(&tower, 1, PLATEAU_MIN_SPAN)?,
        "tower": tower,
    }))
}

fn interval_contractible(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let cloud = spec.generator_or("interval:50")?.generate(spec.seed)?;
    let scales = spec.ladder.scales(&cloud)?;
    let tower = tower_for(&cloud, &scales, max_dim_for(spec, 1), spec.ring)?;
    let betti1 = tower.betti_sequence(1)?;
    rec.check("degree-1 betti 0 at every rung", betti1.iter().all(|&b| b == 0), format!("{betti1:?}"));
    Ok(json!({ "scales": scales, "betti0": tower.betti_sequence(0)?, "betti1": betti1 }))
}

/// Covering radius (chord) of a finite set of angles inside the unit circle.
pub fn circle_covering_radius(angles: &[f64]) -> Result<f64> {
    if angles.is_empty() {
        return Err(Error::invalid("covering radius of an empty sample"));
    }
    let mut a: Vec<f64> = angles.iter().map(|t| t.rem_euclid(TAU)).collect();
    a.sort_by(f64::total_cmp);
    let mut gap = a[0] + TAU - a[a.len() - 1];
    for w in a.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    Ok(2.0 * (gap / 4.0).sin())
}

fn angles_of(cloud: &MetricCloud) -> Result<Vec<f64>> {
    let coords = cloud.coordinates().ok_or_else(|| Error::invalid("circle sample needs coordinates"))?;
    Ok(coords.iter().map(|p| p[1].atan2(p[0])).collect())
}

fn rational_circle_exp(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let rational = spec.generator_or("rational_circle:12")?.generate(spec.seed)?;
    let uniform = circle(rational.len())?;
    let scales = spec.ladder.scales(&rational)?;
    let max_dim = max_dim_for(spec, 1);
    let tr = tower_for(&rational, &scales, max_dim, spec.ring)?;
    let tu = tower_for(&uniform, &scales, max_dim, spec.ring)?;
    let radius = circle_covering_radius(&angles_of(&rational)?)?;
    let wr = longest_window(&tr, 1, 1)?;
    let wu = longest_window(&tu, 1, 1)?;
    rec.check(
        "rational sample has a degree-1 plateau of rank 1 spanning at least 3 rungs",
        wr.as_ref().is_some_and(|w| w.span() >= 3),
        format!("{wr:?}"),
    );
    rec.check(
        "matched uniform sample has a degree-1 plateau of rank 1 spanning at least 3 rungs",
        wu.as_ref().is_some_and(|w| w.span() >= 3),
        format!("{wu:?}"),
    );
    let coarse: Vec<usize> = (0..scales.len()).filter(|&k| scales[k] > 4.0 * radius).collect();
    let mut mismatch = Vec::new();
    for &k in &coarse {
        for d in 0..=1 {
            let (a, b) = (tr.betti(k, d)?, tu.betti(k, d)?);
            if a != b {
                mismatch.push(format!("rung {k} degree {d}: {a} vs {b}"));
            }
        }
    }
    rec.check(
        format!("betti sequences agree on the {} rungs coarser than 4x covering radius {radius:.4}", coarse.len()),
        mismatch.is_empty(),
        mismatch.join("; "),
    );
    Ok(json!({
        "points": rational.len(),
        "covering_radius": radius,
        "scales": scales,
        "rational": { "betti0": tr.betti_sequence(0)?, "betti1": tr.betti_sequence(1)? },
        "uniform": { "betti0": tu.betti_sequence(0)?, "betti1": tu.betti_sequence(1)? },
    }))
}

fn bonding_ranks(t: &HomologyTower, degree: usize, rungs: &[usize]) -> Result<Vec<usize>> {
    rungs.windows(2).map(|w| Ok(persistent_rank(t, degree, w[1], w[0])?.rank)).collect()
}

fn sampling_stability(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let cloud = spec.generator_or("circle:100")?.generate(spec.seed)?;
    let k = cloud.len() / 2;
    let idx = subsample(cloud.len(), k.max(1), spec.seed)?;
    let sub = cloud.subcloud(&idx)?;
    let radius = cloud.covering_radius(&idx)?;
    let scales = spec.ladder.scales(&cloud)?;
    let max_dim = max_dim_for(spec, 1);
    let tf = tower_for(&cloud, &scales, max_dim, spec.ring)?;
    let ts = tower_for(&sub, &scales, max_dim, spec.ring)?;
    let coarse: Vec<usize> = (0..scales.len()).filter(|&r| scales[r] > 4.0 * radius).collect();
    let mut mismatch = Vec::new();
    for d in 0..=1 {
        for &r in &coarse {
            let (a, b) = (tf.betti(r, d)?, ts.betti(r, d)?);
            if a != b {
                mismatch.push(format!("betti rung {r} degree {d}: {a} vs {b}"));
            }
        }
        let (ra, rb) = (bonding_ranks(&tf, d, &coarse)?, bonding_ranks(&ts, d, &coarse)?);
        if ra != rb {
            mismatch.push(format!("bonding ranks degree {d}: {ra:?} vs {rb:?}"));
        }
    }
    rec.check(
        format!("towers agree on the {} rungs coarser than 4x covering radius {radius:.4}", coarse.len()),
        !coarse.is_empty() && mismatch.is_empty(),
        mismatch.join("; "),
    );
    Ok(json!({
        "points": cloud.len(),
        "subsample": idx,
        "covering_radius": radius,
        "scales": scales,
        "compared_rungs": coarse,
        "full": { "betti0": tf.betti_sequence(0)?, "betti1": tf.betti_sequence(1)? },
        "sub": { "betti0": ts.betti_sequence(0)?, "betti1": ts.betti_sequence(1)? },
    }))
}

/// Upper and lower arcs of an even circle sample, each widened by `collar`
/// points on both ends.
pub fn collared_arcs(n: usize, collar: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < 4 || !n.is_multiple_of(2) || 2 * collar >= n / 2 {
        return Err(Error::invalid("collared arcs need an even sample with collars under a quarter turn"));
    }
    let h = n / 2;
    let arc = |from: usize, len: usize| -> Vec<usize> {
        let mut v: Vec<usize> = (0..len).map(|k| (from + k) % n).collect();
        v.sort_unstable();
        v
    };
    Ok((arc(n - collar, h + 1 + 2 * collar), arc(h - collar, h + 1 + 2 * collar)))
}

fn excision_exp(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let cloud = spec.generator_or("circle:40")?.generate(spec.seed)?;
    let n = cloud.len();
    let (a, b) = collared_arcs(n, 3)?;
    let scales = spec.ladder.scales(&cloud)?;
    let ladder = EntourageLadder::from_metric(&cloud, &scales)?;
    let degrees = if spec.degrees.is_empty() { vec![0, 1] } else { spec.degrees.clone() };
    let v = excision_verify(&ladder, &point_set(n, a.clone())?, &point_set(n, b.clone())?, spec.ring, &degrees)?;
    rec.check("stage 1: X \\ A strongly contained in B at some rung", true, format!("rung {}", v.certifying_rung));
    rec.check(
        "stage 2: every simplex lies in A or in B at every rung from the certifying one down",
        v.stage2_passed,
        "",
    );
    rec.check("stage 3: induced map invertible in every requested degree", v.stage3_passed, "");
    Ok(json!({ "a": a, "b": b, "scales": scales, "verdict": v }))
}

/// `h_k` moves the first `k` hexagon vertices one step forward.
pub fn single_vertex_rotation_steps(n: usize) -> Vec<Vec<usize>> {
    (0..=n).map(|k| (0..n).map(|x| if x < k { (x + 1) % n } else { x }).collect()).collect()
}

fn homotopy_axiom(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let cloud = spec.generator_or("circle:6")?.generate(spec.seed)?;
    let n = cloud.len();
    let edge = cloud.distance(0, 1);
    let scales = match &spec.ladder {
        LadderSpec::Default => vec![2.0 * edge, edge, 0.5 * edge],
        other => other.scales(&cloud)?,
    };
    let pair = UniformPair::absolute(EntourageLadder::from_metric(&cloud, &scales)?);
    let id = ScaledMap::identity(&pair);
    let rot = ScaledMap::new((0..n).map(|i| (i + 1) % n).collect(), &pair, &pair)?;
    let steps = single_vertex_rotation_steps(n);
    let degrees = if spec.degrees.is_empty() { vec![1] } else { spec.degrees.clone() };
    let v = homotopy_axiom_check(&id, &rot, &steps, 0, spec.ring, &degrees)?;
    let contiguity = v.stages.iter().any(|s| s.stage == "contiguity" && s.passed);
    rec.check("consecutive steps are contiguous at the chosen rungs", contiguity, format!("{:?}", v.failed_stage()));
    rec.check(
        "induced matrices of f and g agree in every requested degree",
        v.holds && v.comparisons.iter().all(|c| c.equal),
        "",
    );
    Ok(json!({ "scales": scales, "steps": steps, "verdict": v }))
}

fn line_boundedness(spec: &ExperimentSpec, rec: &mut Recorder) -> Result<Value> {
    let sizes: Vec<usize> = match spec.generator.as_deref().map(str::parse::<GeneratorSpec>).transpose()? {
        Some(GeneratorSpec::Line(points, _)) => vec![points.saturating_sub(1)],
        Some(_) => return Err(Error::invalid("line_boundedness needs a line:N generator")),
        None => vec![5, 10, 50],
    };
    let mut bounds = Vec::new();
    for &n in &sizes {
        let cloud = line(n + 1, 1.0)?;
        let u = entourage_from_metric(&cloud, 1.0)?;
        let b = hu_bound(&full_set(n + 1), &u)?;
        rec.check(format!("Hu bound of 0..{n} at eps 1 is {}", n + 1), b == Some(n + 1), format!("{b:?}"));
        bounds.push(b);
    }
    rec.check("bounds strictly increase with n", bounds.windows(2).all(|w| w[0] < w[1]), format!("{bounds:?}"));
    Ok(json!({ "n": sizes, "hu_bounds": bounds }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_radius_of_rational_circle() {
        let r = crate::generate::rational_circle(12).unwrap();
        let rad = circle_covering_radius(&angles_of(&r).unwrap()).unwrap();
        assert!((rad - 2.0 * (TAU / 48.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn arcs_overlap_in_collars() {
        let (a, b) = collared_arcs(40, 3).unwrap();
        assert_eq!(a.len(), 27);
        assert!(a.contains(&37) && a.contains(&23) && !a.contains(&24));
        assert!(b.contains(&17) && b.contains(&3) && !b.contains(&4));
    }

    #[test]
    fn steps_move_one_vertex_at_a_time() {
        let s = single_vertex_rotation_steps(6);
        assert_eq!(s.len(), 7);
        assert_eq!(s[0], vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(s[6], vec![1, 2, 3, 4, 5, 0]);
        assert!(s.windows(2).all(|w| w[0].iter().zip(&w[1]).filter(|(a, b)| a != b).count() == 1));
    }

    #[test]
    fn small_experiments_pass() {
        for name in ["discrete_additivity", "interval_contractible", "homotopy_axiom", "line_boundedness"] {
            let r = run_experiment(&ExperimentSpec::named(name).unwrap()).unwrap();
            assert!(r.passed, "{name}: {:?}", r.expectations);
        }
        assert!(ExperimentSpec::named("nope").is_err());
    }
}
