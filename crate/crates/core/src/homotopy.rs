//! V-continuity, uniform V-homotopies and the scale-indexed induced
//! homomorphism `f_V`, together with an end-to-end check of the homotopy
//! axiom at a fixed target scale.

use serde::Serialize;

use crate::complex::{vietoris_pair, SimplicialComplexPair};
use crate::error::{Error, Result};
use crate::homology::{check_simplicial, contiguity_check, induced_map, HomMatrix, PairHomology, Ring};
use crate::space::{Entourage, EntourageLadder, MetricCloud, PointSet};

/// A carrier with a ladder of entourages and a distinguished subset.
#[derive(Clone, Debug)]
pub struct UniformPair {
    ladder: EntourageLadder,
    sub: PointSet,
}

impl UniformPair {
    pub fn new(ladder: EntourageLadder, sub: PointSet) -> Result<Self> {
        let n = ladder.carrier_size();
        if sub.ones().any(|x| x >= n) {
            return Err(Error::invalid("subset is not contained in the carrier"));
        }
        let mut sub = sub;
        sub.grow(n);
        Ok(UniformPair { ladder, sub })
    }

    /// `(X, ∅)`.
    pub fn absolute(ladder: EntourageLadder) -> Self {
        let n = ladder.carrier_size();
        UniformPair { ladder, sub: PointSet::with_capacity(n) }
    }

    pub fn ladder(&self) -> &EntourageLadder {
        &self.ladder
    }

    pub fn sub(&self) -> &PointSet {
        &self.sub
    }

    pub fn carrier_size(&self) -> usize {
        self.ladder.carrier_size()
    }

    /// `(X_U, A_U)` at a rung.
    pub fn complex_pair(&self, rung: usize, max_dim: usize) -> Result<SimplicialComplexPair> {
        if rung >= self.ladder.len() {
            return Err(Error::invalid(format!("rung {rung} out of range ({} rungs)", self.ladder.len())));
        }
        vietoris_pair(&self.sub, self.ladder.entourage(rung), max_dim)
    }
}

/// A vertex function `(X, A) → (Y, B)` between two ladder-equipped pairs.
#[derive(Clone, Debug)]
pub struct ScaledMap<'a> {
    map: Vec<usize>,
    source: &'a UniformPair,
    target: &'a UniformPair,
}

impl<'a> ScaledMap<'a> {
    /// Checks totality, range and `f(A) ⊆ B`.
    pub fn new(map: Vec<usize>, source: &'a UniformPair, target: &'a UniformPair) -> Result<Self> {
        if map.len() != source.carrier_size() {
            return Err(Error::invalid(format!(
                "map has {} entries but the source carrier has {} points",
                map.len(),
                source.carrier_size()
            )));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= target.carrier_size()) {
            return Err(Error::invalid(format!("map sends a point to {y}, outside the target carrier")));
        }
        if let Some(a) = source.sub.ones().find(|&a| !target.sub.contains(map[a])) {
            return Err(Error::invalid(format!("map sends subset point {a} outside the target subset")));
        }
        Ok(ScaledMap { map, source, target })
    }

    pub fn identity(pair: &'a UniformPair) -> Self {
        ScaledMap { map: (0..pair.carrier_size()).collect(), source: pair, target: pair }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn source(&self) -> &'a UniformPair {
        self.source
    }

    pub fn target(&self) -> &'a UniformPair {
        self.target
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ScaledMap<'a>) -> Result<ScaledMap<'a>> {
        if !std::ptr::eq(self.target, other.source) {
            return Err(Error::invalid("maps are not composable"));
        }
        Ok(ScaledMap { map: self.map.iter().map(|&y| other.map[y]).collect(), source: self.source, target: other.target })
    }
}

/// Result of a V-continuity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub continuous: bool,
    /// Lowest `(x, y)` with `(x, y) ∈ U` but `(f(x), f(y)) ∉ V`.
    pub witness: Option<(usize, usize)>,
    /// Per point: whether `f(U[x]) ⊆ V[f(x)]`. Filled only for pointwise checks.
    pub admitted: Option<Vec<bool>>,
}

/// Does `f(U[x]) ⊆ V[f(x)]` hold? With `uniform` the scan stops at the first
/// failure; otherwise every point is reported.
pub fn is_v_continuous(map: &[usize], u: &Entourage, v: &Entourage, uniform: bool) -> Result<ContinuityReport> {
    if map.len() != u.carrier_size() {
        return Err(Error::invalid("map length differs from the source carrier"));
    }
    if map.iter().any(|&y| y >= v.carrier_size()) {
        return Err(Error::invalid("map leaves the target carrier"));
    }
    let fails_at = |x: usize| u.ball(x).ok().and_then(|ball| ball.ones().find(|&y| !v.contains(map[x], map[y])));
    let mut witness = None;
    let mut admitted = Vec::new();
    for x in 0..map.len() {
        let bad = fails_at(x);
        if witness.is_none() {
            witness = bad.map(|y| (x, y));
        }
        if uniform {
            if witness.is_some() {
                break;
            }
        } else {
            admitted.push(bad.is_none());
        }
    }
    Ok(ContinuityReport { continuous: witness.is_none(), witness, admitted: (!uniform).then_some(admitted) })
}

/// Why a sequence of maps is not a uniform V-homotopy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomotopyFailure {
    /// Step `step` is not uniformly V-continuous with the supplied modulus.
    NotContinuous { step: usize, x: usize, y: usize },
    /// `(h_step(x), h_{step+1}(x)) ∉ V`.
    NotAdjacent { step: usize, x: usize },
}

impl HomotopyFailure {
    pub fn step(&self) -> usize {
        match *self {
            HomotopyFailure::NotContinuous { step, .. } | HomotopyFailure::NotAdjacent { step, .. } => step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyCheck {
    pub accepted: bool,
    pub failure: Option<HomotopyFailure>,
}

impl HomotopyCheck {
    pub fn failing_index(&self) -> Option<usize> {
        self.failure.as_ref().map(HomotopyFailure::step)
    }
}

fn adjacency_failure(a: &[usize], b: &[usize], v: &Entourage) -> Option<usize> {
    (0..a.len()).find(|&x| !v.contains(a[x], b[x]))
}

/// `{h_i}` is a uniform V-homotopy with shared modulus `U`: every step is
/// uniformly V-continuous at `(U, V)` and consecutive steps are V-close.
pub fn check_uniform_v_homotopy(steps: &[Vec<usize>], u: &Entourage, v: &Entourage) -> Result<HomotopyCheck> {
    if steps.is_empty() {
        return Err(Error::invalid("a homotopy needs at least one step"));
    }
    for (i, h) in steps.iter().enumerate() {
        if let Some((x, y)) = is_v_continuous(h, u, v, true)?.witness {
            return Ok(HomotopyCheck { accepted: false, failure: Some(HomotopyFailure::NotContinuous { step: i, x, y }) });
        }
        if let Some(next) = steps.get(i + 1) {
            if next.len() != h.len() {
                return Err(Error::invalid("homotopy steps have different lengths"));
            }
            if let Some(x) = adjacency_failure(h, next, v) {
                return Ok(HomotopyCheck { accepted: false, failure: Some(HomotopyFailure::NotAdjacent { step: i, x }) });
            }
        }
    }
    Ok(HomotopyCheck { accepted: true, failure: None })
}

/// The sequence `k_0 h_0, …, k_0 h_m, k_1 h_m, …, k_n h_m` joining `g∘f` to
/// `g'∘f'` for homotopies `h: f ≃ f'` and `k: g ≃ g'`.
pub fn splice_homotopies(h: &[Vec<usize>], k: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let (Some(h_last), Some(k_first)) = (h.last(), k.first()) else {
        return Err(Error::invalid("both homotopies need at least one step"));
    };
    let compose = |outer: &[usize], inner: &[usize]| -> Result<Vec<usize>> {
        inner
            .iter()
            .map(|&y| outer.get(y).copied().ok_or_else(|| Error::invalid("homotopies are not composable")))
            .collect()
    };
    let mut out = Vec::with_capacity(h.len() + k.len() - 1);
    for hi in h {
        out.push(compose(k_first, hi)?);
    }
    for kj in &k[1..] {
        out.push(compose(kj, h_last)?);
    }
    Ok(out)
}

/// Helper for building candidate homotopies: `steps + 1` maps moving each
/// `f(x)` towards `g(x)` along the straight segment in the target
/// coordinates, each intermediate point snapped to the nearest sample point
/// (lowest index on ties). Endpoints are exactly `f` and `g`.
pub fn interpolate_homotopy(f: &[usize], g: &[usize], target: &MetricCloud, steps: usize) -> Result<Vec<Vec<usize>>> {
    let coords = target.coordinates().ok_or_else(|| Error::invalid("interpolation needs target coordinates"))?;
    if f.len() != g.len() {
        return Err(Error::invalid("endpoint maps have different lengths"));
    }
    if f.iter().chain(g).any(|&y| y >= coords.len()) {
        return Err(Error::invalid("endpoint maps leave the target carrier"));
    }
    let steps = steps.max(1);
    let nearest = |p: &[f64]| -> usize {
        let mut best = (f64::INFINITY, 0);
        for (j, q) in coords.iter().enumerate() {
            let d: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best.0 {
                best = (d, j);
            }
        }
        best.1
    };
    let mut out = Vec::with_capacity(steps + 1);
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let h = if s == 0 {
            f.to_vec()
        } else if s == steps {
            g.to_vec()
        } else {
            f.iter()
                .zip(g)
                .map(|(&a, &b)| {
                    let p: Vec<f64> = coords[a].iter().zip(&coords[b]).map(|(x, y)| x + t * (y - x)).collect();
                    nearest(&p)
                })
                .collect()
        };
        out.push(h);
    }
    Ok(out)
}

/// `f_V` at a target rung: the matrix of `H(f): H(X_U, A_U) → H(Y_V, B_V)` at
/// the coarsest source rung `U` making `f` simplicial.
#[derive(Clone, Debug, Serialize)]
pub struct InducedReport {
    pub degree: usize,
    pub ring: Ring,
    pub source_rung: usize,
    pub source_scale: f64,
    pub target_rung: usize,
    pub target_scale: f64,
    pub matrix: HomMatrix,
    /// Rank of the bonding map `H(X_U', A_U') → H(X_U, A_U)` to the next finer rung.
    pub stability: Option<StabilityCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityCertificate {
    pub finer_rung: usize,
    /// `H(f)` computed at the finer rung.
    pub finer_matrix: HomMatrix,
    /// Whether it equals `H(f)` at the chosen rung composed with the bonding map.
    pub agrees: bool,
}

/// Coarsest source rung at which `f` is simplicial into `target_pair`.
fn find_modulus(f: &ScaledMap<'_>, target_pair: &SimplicialComplexPair, max_dim: usize) -> Result<Option<(usize, SimplicialComplexPair)>> {
    for rung in 0..f.source.ladder.len() {
        let sp = f.source.complex_pair(rung, max_dim)?;
        if check_simplicial(&f.map, &sp, target_pair).is_ok() {
            return Ok(Some((rung, sp)));
        }
    }
    Ok(None)
}

/// `H(f)` in one degree between two fixed pairs.
fn hom_matrix(map: &[usize], source: &SimplicialComplexPair, target: &SimplicialComplexPair, ring: Ring, degree: usize) -> Result<(HomMatrix, PairHomology, PairHomology)> {
    let f = check_simplicial(map, source, target)?;
    let hs = PairHomology::compute(source, ring, &[degree])?;
    let ht = PairHomology::compute(target, ring, &[degree])?;
    let m = induced_map(&f, &hs, &ht, degree)?;
    Ok((m, hs, ht))
}

/// Compute `f_V` at target rung `v_rung`, searching source rungs coarse to fine.
pub fn induced_f_v(f: &ScaledMap<'_>, v_rung: usize, ring: Ring, degree: usize) -> Result<InducedReport> {
    let max_dim = degree + 1;
    let tp = f.target.complex_pair(v_rung, max_dim)?;
    let (u, sp) = find_modulus(f, &tp, max_dim)?.ok_or(Error::ModulusNotFound)?;
    let (matrix, hs, ht) = hom_matrix(&f.map, &sp, &tp, ring, degree)?;

    let stability = if u + 1 < f.source.ladder.len() {
        let fine = f.source.complex_pair(u + 1, max_dim)?;
        let id: Vec<usize> = (0..f.source.carrier_size()).collect();
        let hf = PairHomology::compute(&fine, ring, &[degree])?;
        let bond = induced_map(&check_simplicial(&id, &fine, &sp)?, &hf, &hs, degree)?;
        let finer_matrix = induced_map(&check_simplicial(&f.map, &fine, &tp)?, &hf, &ht, degree)?;
        let agrees = matrix.mul(&bond)? == finer_matrix;
        Some(StabilityCertificate { finer_rung: u + 1, finer_matrix, agrees })
    } else {
        None
    };

    Ok(InducedReport {
        degree,
        ring,
        source_rung: u,
        source_scale: f.source.ladder.scale(u),
        target_rung: v_rung,
        target_scale: f.target.ladder.scale(v_rung),
        matrix,
        stability,
    })
}

/// Coarsest rung of `ladder` whose relational square lies inside rung `v`.
pub fn sqrt_rung(ladder: &EntourageLadder, v: usize) -> Result<usize> {
    let target = ladder.entourage(v);
    (0..ladder.len()).find(|&j| ladder.entourage(j).square().is_subset(target)).ok_or(Error::LadderTooSparse)
}

/// One stage of the homotopy-axiom pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub f_v: HomMatrix,
    pub g_v: HomMatrix,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomVerdict {
    pub ring: Ring,
    pub target_rung: usize,
    pub sqrt_rung: usize,
    pub source_rung: Option<usize>,
    pub stages: Vec<StageReport>,
    pub comparisons: Vec<DegreeComparison>,
    /// All stages passed and `f_V = g_V` in every requested degree.
    pub holds: bool,
}

impl AxiomVerdict {
    pub fn failed_stage(&self) -> Option<&StageReport> {
        self.stages.iter().find(|s| !s.passed)
    }
}

/// Run the homotopy-axiom pipeline for `f ≃ g` at target rung `v_rung`.
///
/// `homotopy` is the full step sequence from `f` to `g`; an empty list means
/// the two-step sequence `[f, g]`. Stages: adjacency at `√V`, a shared
/// source modulus for uniform `√V`-continuity, simplicial certification
/// into `(Y_V, B_V)`, contiguity of consecutive steps, and `f_V = g_V`.
pub fn homotopy_axiom_check(
    f: &ScaledMap<'_>,
    g: &ScaledMap<'_>,
    homotopy: &[Vec<usize>],
    v_rung: usize,
    ring: Ring,
    degrees: &[usize],
) -> Result<AxiomVerdict> {
    if !std::ptr::eq(f.source, g.source) || !std::ptr::eq(f.target, g.target) {
        return Err(Error::invalid("f and g must share source and target"));
    }
    let steps: Vec<Vec<usize>> = if homotopy.is_empty() { vec![f.map.clone(), g.map.clone()] } else { homotopy.to_vec() };
    if steps[0] != f.map || *steps.last().expect("non-empty") != g.map {
        return Err(Error::invalid("homotopy endpoints must be f and g"));
    }
    for h in &steps {
        ScaledMap::new(h.clone(), f.source, f.target)?;
    }
    if v_rung >= f.target.ladder.len() {
        return Err(Error::invalid(format!("target rung {v_rung} out of range")));
    }
    let root = sqrt_rung(&f.target.ladder, v_rung)?;
    let sqrt_v = f.target.ladder.entourage(root);
    let mut verdict = AxiomVerdict {
        ring,
        target_rung: v_rung,
        sqrt_rung: root,
        source_rung: None,
        stages: Vec::new(),
        comparisons: Vec::new(),
        holds: false,
    };
    let stage = |verdict: &mut AxiomVerdict, name: &'static str, witness: Option<String>| -> bool {
        let passed = witness.is_none();
        verdict.stages.push(StageReport { stage: name, passed, witness });
        passed
    };

    let adj = steps.windows(2).enumerate().find_map(|(i, w)| adjacency_failure(&w[0], &w[1], sqrt_v).map(|x| (i, x)));
    if !stage(&mut verdict, "adjacency", adj.map(|(i, x)| format!("step {i}, point {x}"))) {
        return Ok(verdict);
    }

    let mut last_failure = None;
    let mut modulus = None;
    for rung in 0..f.source.ladder.len() {
        let u = f.source.ladder.entourage(rung);
        match check_uniform_v_homotopy(&steps, u, sqrt_v)?.failure {
            None => {
                modulus = Some(rung);
                break;
            }
            Some(fail) => last_failure = Some(fail),
        }
    }
    let witness = match (modulus, &last_failure) {
        (Some(_), _) => None,
        (None, Some(HomotopyFailure::NotContinuous { step, x, y })) => {
            Some(format!("finest rung: step {step} sends related pair ({x}, {y}) apart"))
        }
        (None, other) => Some(format!("no modulus: {other:?}")),
    };
    if !stage(&mut verdict, "modulus", witness) {
        return Ok(verdict);
    }
    let u = modulus.expect("stage passed");
    verdict.source_rung = Some(u);

    let max_dim = degrees.iter().copied().max().unwrap_or(0) + 1;
    let sp = f.source.complex_pair(u, max_dim)?;
    let tp = f.target.complex_pair(v_rung, max_dim)?;
    let mut certified = Vec::with_capacity(steps.len());
    let mut simplicial_witness = None;
    for (i, h) in steps.iter().enumerate() {
        match check_simplicial(h, &sp, &tp) {
            Ok(c) => certified.push(c),
            Err(Error::NotSimplicial { simplex, in_sub }) => {
                simplicial_witness = Some(format!("step {i}, simplex {simplex:?}{}", if in_sub { " (sub)" } else { "" }));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if !stage(&mut verdict, "simplicial", simplicial_witness) {
        return Ok(verdict);
    }

    let mut contiguity_witness = None;
    for (i, w) in certified.windows(2).enumerate() {
        let c = contiguity_check(&w[0], &w[1])?;
        if !c.contiguous {
            contiguity_witness = Some(format!("steps {i}/{}, simplex {:?}", i + 1, c.witness.unwrap_or_default()));
            break;
        }
    }
    if !stage(&mut verdict, "contiguity", contiguity_witness) {
        return Ok(verdict);
    }

    let mut degrees: Vec<usize> = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let hs = PairHomology::compute(&sp, ring, &degrees)?;
    let ht = PairHomology::compute(&tp, ring, &degrees)?;
    let first = certified.first().expect("at least one step");
    let last = certified.last().expect("at least one step");
    let mut unequal = None;
    for &d in &degrees {
        let f_v = induced_map(first, &hs, &ht, d)?;
        let g_v = induced_map(last, &hs, &ht, d)?;
        let equal = f_v == g_v;
        if !equal && unequal.is_none() {
            unequal = Some(format!("degree {d}"));
        }
        verdict.comparisons.push(DegreeComparison { degree: d, f_v, g_v, equal });
    }
    verdict.holds = stage(&mut verdict, "equality", unequal);
    Ok(verdict)
}

/// Per-point coarsest source rung at which `f(U[x]) ⊆ V[f(x)]`, the finite
/// form of (non-uniform) V-continuity.
pub fn pointwise_moduli(f: &ScaledMap<'_>, v_rung: usize) -> Result<Vec<Option<usize>>> {
    let v = f.target.ladder.entourage(v_rung);
    let ladder = &f.source.ladder;
    let n = f.source.carrier_size();
    let mut out = vec![None; n];
    for (x, slot) in out.iter_mut().enumerate() {
        *slot = (0..ladder.len()).find(|&r| ladder.entourage(r).row(x).ones().all(|y| v.contains(f.map[x], f.map[y])));
    }
    Ok(out)
}
