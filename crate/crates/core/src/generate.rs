//! Sample spaces: circles, rational circles and intervals, discrete spaces,
//! flat tori and lines, plus seeded subsampling.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::MetricCloud;

/// Generators refuse more points than this.
pub const MAX_POINTS: usize = 5_000;

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("need at least one point"));
    }
    if n > MAX_POINTS {
        return Err(Error::invalid(format!("{n} points exceed the limit {MAX_POINTS}")));
    }
    Ok(())
}

fn on_circle(angles: impl Iterator<Item = f64>) -> Result<MetricCloud> {
    MetricCloud::from_coordinates(angles.map(|t| vec![t.cos(), t.sin()]).collect())
}

/// `n` equally spaced points on the unit circle, starting at angle 0.
pub fn circle(n: usize) -> Result<MetricCloud> {
    check_count(n)?;
    on_circle((0..n).map(|k| TAU * k as f64 / n as f64))
}

/// Reduced fractions `p/q` in `[0, 1)` with `q ≤ max_q`, sorted.
pub fn farey_fractions(max_q: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 1)];
    for q in 2..=max_q {
        for p in 1..q {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    out
}

/// Angles `2πp/q` with `q ≤ max_q` in lowest terms, sorted by angle.
pub fn rational_circle(max_q: usize) -> Result<MetricCloud> {
    if max_q == 0 {
        return Err(Error::invalid("rational circle needs a positive denominator bound"));
    }
    let f = farey_fractions(max_q);
    check_count(f.len())?;
    on_circle(f.into_iter().map(|(p, q)| TAU * p as f64 / q as f64))
}

fn on_line(xs: impl Iterator<Item = f64>) -> Result<MetricCloud> {
    MetricCloud::from_coordinates(xs.map(|x| vec![x]).collect())
}

/// `n` equally spaced points of `[0, 1]` (just `0` when `n = 1`).
pub fn interval(n: usize) -> Result<MetricCloud> {
    check_count(n)?;
    let d = (n.max(2) - 1) as f64;
    on_line((0..n).map(|k| k as f64 / d))
}

/// All reduced fractions in `[0, 1]` with denominator at most `max_q`.
pub fn rational_interval(max_q: usize) -> Result<MetricCloud> {
    if max_q == 0 {
        return Err(Error::invalid("rational interval needs a positive denominator bound"));
    }
    let mut f = farey_fractions(max_q);
    f.push((1, 1));
    check_count(f.len())?;
    on_line(f.into_iter().map(|(p, q)| p as f64 / q as f64))
}

/// `n` points with every distinct pair at distance 1.
pub fn discrete(n: usize) -> Result<MetricCloud> {
    check_count(n)?;
    MetricCloud::from_distance_matrix((0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect())
}

/// `n × m` grid on the flat unit torus with its quotient metric. Point
/// `i·m + j` sits at `(i/n, j/m)`.
pub fn torus(n: usize, m: usize) -> Result<MetricCloud> {
    check_count(n.saturating_mul(m))?;
    let wrap = |d: f64| d.min(1.0 - d);
    let pts: Vec<(f64, f64)> =
        (0..n).flat_map(|i| (0..m).map(move |j| (i as f64 / n as f64, j as f64 / m as f64))).collect();
    let rows = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| {
                    let dx = wrap((a.0 - b.0).abs());
                    let dy = wrap((a.1 - b.1).abs());
                    (dx * dx + dy * dy).sqrt()
                })
                .collect()
        })
        .collect();
    MetricCloud::from_distance_matrix(rows)
}

/// `n` points `0, step, 2·step, …` on the real line.
pub fn line(n: usize, step: f64) -> Result<MetricCloud> {
    check_count(n)?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid(format!("line step must be positive, got {step}")));
    }
    on_line((0..n).map(|k| k as f64 * step))
}

/// `n` uniform random points on the unit circle, sorted by angle.
pub fn random_circle(n: usize, seed: u64) -> Result<MetricCloud> {
    check_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    on_circle(angles.into_iter())
}

/// `k` distinct indices of `0..n`, sorted, drawn with a fixed seed.
pub fn subsample(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cannot draw {k} of {n} points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, n, k).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

/// A named generator with its parameters, written `kind:arg[:arg]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(into = "String")]
pub enum GeneratorSpec {
    Circle(usize),
    RationalCircle(usize),
    Interval(usize),
    RationalInterval(usize),
    Discrete(usize),
    Torus(usize, usize),
    Line(usize, f64),
    RandomCircle(usize),
}

impl GeneratorSpec {
    /// Build the cloud; only `random_circle` uses the seed.
    pub fn generate(&self, seed: u64) -> Result<MetricCloud> {
        match *self {
            GeneratorSpec::Circle(n) => circle(n),
            GeneratorSpec::RationalCircle(q) => rational_circle(q),
            GeneratorSpec::Interval(n) => interval(n),
            GeneratorSpec::RationalInterval(q) => rational_interval(q),
            GeneratorSpec::Discrete(n) => discrete(n),
            GeneratorSpec::Torus(n, m) => torus(n, m),
            GeneratorSpec::Line(n, step) => line(n, step),
            GeneratorSpec::RandomCircle(n) => random_circle(n, seed),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Circle(n) => write!(f, "circle:{n}"),
            GeneratorSpec::RationalCircle(q) => write!(f, "rational_circle:{q}"),
            GeneratorSpec::Interval(n) => write!(f, "interval:{n}"),
            GeneratorSpec::RationalInterval(q) => write!(f, "rational_interval:{q}"),
            GeneratorSpec::Discrete(n) => write!(f, "discrete:{n}"),
            GeneratorSpec::Torus(n, m) => write!(f, "torus:{n}:{m}"),
            GeneratorSpec::Line(n, s) => write!(f, "line:{n}:{s}"),
            GeneratorSpec::RandomCircle(n) => write!(f, "random_circle:{n}"),
        }
    }
}

impl From<GeneratorSpec> for String {
    fn from(g: GeneratorSpec) -> String {
        g.to_string()
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || Error::invalid(format!("bad generator spec {s:?}; expected kind:arg[:arg]"));
        let int = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(bad)?.trim().parse().map_err(|_| bad()) };
        let arity = |k: usize| if parts.len() == k + 1 { Ok(()) } else { Err(bad()) };
        let spec = match parts[0].trim() {
            "circle" => arity(1).and(int(1).map(GeneratorSpec::Circle)),
            "rational_circle" => arity(1).and(int(1).map(GeneratorSpec::RationalCircle)),
            "interval" => arity(1).and(int(1).map(GeneratorSpec::Interval)),
            "rational_interval" => arity(1).and(int(1).map(GeneratorSpec::RationalInterval)),
            "discrete" => arity(1).and(int(1).map(GeneratorSpec::Discrete)),
            "random_circle" => arity(1).and(int(1).map(GeneratorSpec::RandomCircle)),
            "torus" => arity(2).and_then(|_| Ok(GeneratorSpec::Torus(int(1)?, int(2)?))),
            "line" => match parts.len() {
                2 => Ok(GeneratorSpec::Line(int(1)?, 1.0)),
                3 => {
                    let step: f64 = parts[2].trim().parse().map_err(|_| bad())?;
                    Ok(GeneratorSpec::Line(int(1)?, step))
                }
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_has_unit_sides() {
        let c = circle(6).unwrap();
        assert!((c.distance(0, 1) - 1.0).abs() < 1e-12);
        assert!((c.distance(0, 3) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rational_points() {
        assert_eq!(farey_fractions(3), vec![(0, 1), (1, 3), (1, 2), (2, 3)]);
        assert_eq!(rational_circle(3).unwrap().len(), 4);
        assert_eq!(rational_circle(12).unwrap().len(), 46);
        assert_eq!(rational_interval(3).unwrap().len(), 5);
    }

    #[test]
    fn discrete_and_torus() {
        let d = discrete(3).unwrap();
        assert_eq!((d.distance(0, 1), d.distance(1, 2)), (1.0, 1.0));
        let t = torus(4, 4).unwrap();
        assert!((t.distance(0, 3) - 0.25).abs() < 1e-12);
        assert!((t.distance(0, 12) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        assert_eq!(subsample(100, 50, 7).unwrap(), subsample(100, 50, 7).unwrap());
        assert_ne!(subsample(100, 50, 7).unwrap(), subsample(100, 50, 8).unwrap());
        let a = random_circle(10, 3).unwrap();
        let b = random_circle(10, 3).unwrap();
        assert_eq!(a.coordinates(), b.coordinates());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["circle:60", "rational_circle:12", "torus:3:4", "line:11:0.5", "random_circle:5"] {
            assert_eq!(s.parse::<GeneratorSpec>().unwrap().to_string(), s);
        }
        assert_eq!("line:4".parse::<GeneratorSpec>().unwrap(), GeneratorSpec::Line(4, 1.0));
        assert!("circle".parse::<GeneratorSpec>().is_err());
        assert!("sphere:3".parse::<GeneratorSpec>().is_err());
        assert!("circle:0".parse::<GeneratorSpec>().unwrap().generate(0).is_err());
    }
}
