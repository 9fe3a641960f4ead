//! Homology towers over entourage ladders, persistent ranks, plateau
//! windows, the excision verifier and the uniform-resolution checker.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{vietoris_complex, SimplicialComplexPair};
use crate::error::{Error, Result};
use crate::homology::{check_simplicial, induced_map, HomMatrix, HomologyGroup, PairHomology, Ring};
use crate::homotopy::UniformPair;
use crate::space::{ball_cover, full_set, is_refinement, star, strong_containment, EntourageLadder, PointSet};

/// Homology and simplex counts of one rung.
#[derive(Clone, Debug, Serialize)]
pub struct RungReport {
    pub rung: usize,
    pub scale: f64,
    /// Simplex counts of the total complex per dimension.
    pub simplex_counts: Vec<usize>,
    /// Whether simplices above the cap were cut off.
    pub truncated: bool,
    pub groups: Vec<HomologyGroup>,
}

/// Matrix of the inclusion-induced map from rung `finer` to rung `coarser`.
#[derive(Clone, Debug, Serialize)]
pub struct BondingMap {
    pub degree: usize,
    pub finer: usize,
    pub coarser: usize,
    pub matrix: HomMatrix,
}

/// The inverse system `H(X_U, A_U)` over the rungs of a ladder.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyTower {
    pub ring: Ring,
    pub max_dim: usize,
    pub degrees: Vec<usize>,
    pub rungs: Vec<RungReport>,
    /// Adjacent bonding maps `k+1 → k`, grouped by rung then degree.
    pub bonding: Vec<BondingMap>,
    #[serde(skip)]
    pairs: Vec<SimplicialComplexPair>,
    #[serde(skip)]
    homology: Vec<PairHomology>,
}

/// Build the tower of `(X_U, A_U)` with complexes capped at `max_dim`, homology
/// in degrees `0..max_dim`.
pub fn build_tower(pair: &UniformPair, max_dim: usize, ring: Ring) -> Result<HomologyTower> {
    if max_dim == 0 {
        return Err(Error::invalid("max_dim must be at least 1 to compute any homology"));
    }
    let degrees: Vec<usize> = (0..max_dim).collect();
    let ladder = pair.ladder();
    let built: Vec<(SimplicialComplexPair, PairHomology)> = (0..ladder.len())
        .into_par_iter()
        .map(|k| {
            let cx = pair.complex_pair(k, max_dim)?;
            let h = PairHomology::compute(&cx, ring, &degrees)?;
            Ok((cx, h))
        })
        .collect::<Result<Vec<_>>>()?;
    let (pairs, homology): (Vec<_>, Vec<_>) = built.into_iter().unzip();

    let rungs = (0..ladder.len())
        .map(|k| RungReport {
            rung: k,
            scale: ladder.scale(k),
            simplex_counts: (0..=max_dim).map(|d| pairs[k].total().count(d)).collect(),
            truncated: pairs[k].total().is_truncated(),
            groups: homology[k].groups().cloned().collect(),
        })
        .collect();

    let id: Vec<usize> = (0..pair.carrier_size()).collect();
    let bonding = (0..ladder.len().saturating_sub(1))
        .into_par_iter()
        .map(|k| {
            let map = check_simplicial(&id, &pairs[k + 1], &pairs[k])?;
            degrees
                .iter()
                .map(|&d| {
                    Ok(BondingMap {
                        degree: d,
                        finer: k + 1,
                        coarser: k,
                        matrix: induced_map(&map, &homology[k + 1], &homology[k], d)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(HomologyTower { ring, max_dim, degrees, rungs, bonding, pairs, homology })
}

impl HomologyTower {
    pub fn len(&self) -> usize {
        self.rungs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rungs.is_empty()
    }

    pub fn group(&self, rung: usize, degree: usize) -> Result<&HomologyGroup> {
        self.homology.get(rung).ok_or_else(|| Error::invalid(format!("rung {rung} out of range")))?.group(degree)
    }

    pub fn betti(&self, rung: usize, degree: usize) -> Result<usize> {
        Ok(self.group(rung, degree)?.betti)
    }

    pub fn betti_sequence(&self, degree: usize) -> Result<Vec<usize>> {
        (0..self.len()).map(|k| self.betti(k, degree)).collect()
    }

    pub fn complex_pair(&self, rung: usize) -> &SimplicialComplexPair {
        &self.pairs[rung]
    }

    fn adjacent(&self, degree: usize, finer: usize) -> Result<&HomMatrix> {
        self.bonding
            .iter()
            .find(|b| b.degree == degree && b.finer == finer)
            .map(|b| &b.matrix)
            .ok_or_else(|| Error::invalid(format!("no bonding map in degree {degree} from rung {finer}")))
    }

    fn check_rungs(&self, finer: usize, coarser: usize) -> Result<()> {
        if finer >= self.len() || coarser > finer {
            return Err(Error::invalid(format!("need coarser ≤ finer < {}, got {coarser}, {finer}", self.len())));
        }
        Ok(())
    }

    /// Composite of adjacent bonding maps from `finer` to `coarser`.
    pub fn composite(&self, degree: usize, finer: usize, coarser: usize) -> Result<HomMatrix> {
        self.check_rungs(finer, coarser)?;
        let orders = self.homology[finer].group(degree)?.generator_orders.clone();
        let mut m = HomMatrix::identity(self.ring, &orders);
        for k in (coarser + 1..=finer).rev() {
            m = self.adjacent(degree, k)?.mul(&m)?;
        }
        Ok(m)
    }

    /// The map `finer → coarser` computed directly from the identity vertex map.
    pub fn direct_map(&self, degree: usize, finer: usize, coarser: usize) -> Result<HomMatrix> {
        self.check_rungs(finer, coarser)?;
        let id: Vec<usize> = (0..self.pairs[finer].total().vertex_count()).collect();
        let map = check_simplicial(&id, &self.pairs[finer], &self.pairs[coarser])?;
        induced_map(&map, &self.homology[finer], &self.homology[coarser], degree)
    }
}

/// Rank of a composite bonding map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PersistentRank {
    pub rank: usize,
    /// Over `Z` with torsion at either end the rank only sees the free part.
    pub torsion_caveat: bool,
}

pub fn persistent_rank(tower: &HomologyTower, degree: usize, finer: usize, coarser: usize) -> Result<PersistentRank> {
    let m = tower.composite(degree, finer, coarser)?;
    let torsion_caveat = tower.ring == Ring::Z
        && (!tower.group(finer, degree)?.torsion.is_empty() || !tower.group(coarser, degree)?.torsion.is_empty());
    Ok(PersistentRank { rank: m.rank(), torsion_caveat })
}

/// A run of rungs with constant Betti number `rank` whose composite bonding
/// maps all have full rank.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlateauWindow {
    /// Coarsest rung of the window.
    pub coarse_rung: usize,
    /// Finest rung of the window.
    pub fine_rung: usize,
    pub coarse_scale: f64,
    pub fine_scale: f64,
    pub rank: usize,
}

impl PlateauWindow {
    pub fn span(&self) -> usize {
        self.fine_rung - self.coarse_rung + 1
    }
}

/// Default minimum window length.
pub const PLATEAU_MIN_SPAN: usize = 2;

/// Maximal plateau windows of at least `min_span` rungs and non-zero rank.
///
/// Ranks of composites can only drop as a window widens, so a window is a
/// plateau iff its Betti numbers agree and its end-to-end composite has full
/// rank.
pub fn plateau_estimate(tower: &HomologyTower, degree: usize, min_span: usize) -> Result<Vec<PlateauWindow>> {
    let betti = tower.betti_sequence(degree)?;
    let n = betti.len();
    let mut reach = vec![0usize; n];
    for i in 0..n {
        let mut j = i;
        while j + 1 < n && betti[j + 1] == betti[i] && persistent_rank(tower, degree, j + 1, i)?.rank == betti[i] {
            j += 1;
        }
        reach[i] = j;
    }
    let mut out = Vec::new();
    for i in 0..n {
        let maximal = i == 0 || reach[i - 1] < reach[i];
        let span = reach[i] - i + 1;
        if maximal && span >= min_span.max(1) && betti[i] > 0 {
            out.push(PlateauWindow {
                coarse_rung: i,
                fine_rung: reach[i],
                coarse_scale: tower.rungs[i].scale,
                fine_scale: tower.rungs[reach[i]].scale,
                rank: betti[i],
            });
        }
    }
    Ok(out)
}

/// `scale,degree,betti` rows for plotting.
pub fn tower_csv(tower: &HomologyTower) -> String {
    let mut out = String::from("scale,degree,betti\n");
    for r in &tower.rungs {
        for g in &r.groups {
            out.push_str(&format!("{},{},{}\n", r.scale, g.degree, g.betti));
        }
    }
    out
}

/// One rung of the excision check.
#[derive(Clone, Debug, Serialize)]
pub struct ExcisionRung {
    pub rung: usize,
    pub scale: f64,
    /// A simplex of `X_U` inside neither `A` nor `B`.
    pub microsimplex_witness: Option<Vec<u32>>,
    /// Every relative cell of `(X_U, B_U)` is a relative cell of `(A_U, (A∩B)_U)`.
    pub chain_surjective: bool,
    pub degrees: Vec<ExcisionDegree>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcisionDegree {
    pub degree: usize,
    pub source_betti: usize,
    pub target_betti: usize,
    pub matrix: HomMatrix,
    pub invertible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcisionVerdict {
    pub ring: Ring,
    pub warnings: Vec<String>,
    pub certifying_rung: usize,
    pub certifying_scale: f64,
    pub rungs: Vec<ExcisionRung>,
    pub stage2_passed: bool,
    pub stage3_passed: bool,
}

impl ExcisionVerdict {
    pub fn passed(&self) -> bool {
        self.stage2_passed && self.stage3_passed
    }
}

/// Verify excision for `X ∖ A ⋐ B` on every rung at or below the coarsest
/// rung certifying the strong containment.
pub fn excision_verify(
    ladder: &EntourageLadder,
    a: &PointSet,
    b: &PointSet,
    ring: Ring,
    degrees: &[usize],
) -> Result<ExcisionVerdict> {
    let n = ladder.carrier_size();
    if a.ones().chain(b.ones()).any(|x| x >= n) {
        return Err(Error::invalid("subsets must lie in the carrier"));
    }
    let mut a = a.clone();
    let mut b = b.clone();
    a.grow(n);
    b.grow(n);
    let mut warnings = Vec::new();
    let mut union = a.clone();
    union.union_with(&b);
    if union.count_ones(..) != n {
        warnings.push(format!("A ∪ B misses {} carrier points", n - union.count_ones(..)));
    }
    let mut outside = full_set(n);
    outside.difference_with(&a);

    let Some(cert) = strong_containment(&outside, &b, ladder) else {
        let finest = ball_cover(ladder.entourage(ladder.len() - 1));
        let mut leak = star(&outside, &finest);
        leak.difference_with(&b);
        let witness = leak.ones().next().unwrap_or(0);
        return Err(Error::HypothesisNotSatisfied { witness });
    };

    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let max_dim = degrees.iter().copied().max().unwrap_or(0) + 1;
    let mut ab = a.clone();
    ab.intersect_with(&b);

    let rungs = (cert.rung..ladder.len())
        .into_par_iter()
        .map(|k| {
            let u = ladder.entourage(k);
            let related = |x: usize, w: usize| u.contains(x, w);
            let total = vietoris_complex(n, &full_set(n), n, related, max_dim);
            let a_u = vietoris_complex(n, &a, n, related, max_dim);
            let b_u = vietoris_complex(n, &b, n, related, max_dim);
            let ab_u = vietoris_complex(n, &ab, n, related, max_dim);

            let microsimplex_witness = total.generators().iter().find_map(|g| {
                (!g.is_subset(&a) && !g.is_subset(&b)).then(|| g.ones().map(|v| v as u32).collect::<Vec<u32>>())
            });
            let chain_surjective = (0..=max_dim).all(|d| {
                total
                    .simplices(d)
                    .iter()
                    .filter(|s| b_u.index_of(s).is_none())
                    .all(|s| a_u.index_of(s).is_some() && ab_u.index_of(s).is_none())
            });

            let source = SimplicialComplexPair::new(a_u, ab_u)?;
            let target = SimplicialComplexPair::new(total, b_u)?;
            let id: Vec<usize> = (0..n).collect();
            let inc = check_simplicial(&id, &source, &target)?;
            let hs = PairHomology::compute(&source, ring, &degrees)?;
            let ht = PairHomology::compute(&target, ring, &degrees)?;
            let degrees = degrees
                .iter()
                .map(|&d| {
                    let matrix = induced_map(&inc, &hs, &ht, d)?;
                    Ok(ExcisionDegree {
                        degree: d,
                        source_betti: hs.group(d)?.betti,
                        target_betti: ht.group(d)?.betti,
                        invertible: matrix.is_invertible()?,
                        matrix,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ExcisionRung { rung: k, scale: ladder.scale(k), microsimplex_witness, chain_surjective, degrees })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExcisionVerdict {
        ring,
        warnings,
        certifying_rung: cert.rung,
        certifying_scale: cert.scale,
        stage2_passed: rungs.iter().all(|r| r.microsimplex_witness.is_none()),
        stage3_passed: rungs.iter().all(|r| r.degrees.iter().all(|d| d.invertible)),
        rungs,
    })
}

/// A finite inverse system of ladder-equipped clouds `X_0 ← X_1 ← …` with a
/// cone of maps from a base cloud `X`.
#[derive(Clone, Debug)]
pub struct ResolutionSystem {
    pub base: EntourageLadder,
    pub levels: Vec<EntourageLadder>,
    /// `cones[i] = π_i : X → X_i`.
    pub cones: Vec<Vec<usize>>,
    /// `bonds[i] = π_{i+1,i} : X_{i+1} → X_i`.
    pub bonds: Vec<Vec<usize>>,
}

impl ResolutionSystem {
    pub fn new(
        base: EntourageLadder,
        levels: Vec<EntourageLadder>,
        cones: Vec<Vec<usize>>,
        bonds: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::invalid("a resolution needs at least one level"));
        }
        if cones.len() != levels.len() || bonds.len() + 1 != levels.len() {
            return Err(Error::invalid("need one cone map per level and one bonding map per adjacent pair"));
        }
        for (i, c) in cones.iter().enumerate() {
            check_map(c, base.carrier_size(), levels[i].carrier_size(), &format!("cone map {i}"))?;
        }
        for (i, b) in bonds.iter().enumerate() {
            check_map(b, levels[i + 1].carrier_size(), levels[i].carrier_size(), &format!("bonding map {}→{i}", i + 1))?;
        }
        Ok(ResolutionSystem { base, levels, cones, bonds })
    }

    /// `π_{j,i} : X_j → X_i` for `j ≥ i`.
    pub fn bond(&self, j: usize, i: usize) -> Vec<usize> {
        let mut map: Vec<usize> = (0..self.levels[j].carrier_size()).collect();
        for k in (i..j).rev() {
            for y in map.iter_mut() {
                *y = self.bonds[k][*y];
            }
        }
        map
    }

    /// Whether `π_{i+1,i} ∘ π_{i+1} = π_i` for every `i`.
    pub fn commutes(&self) -> bool {
        (0..self.bonds.len()).all(|i| self.cones[i + 1].iter().zip(&self.cones[i]).all(|(&y, &z)| self.bonds[i][y] == z))
    }
}

fn check_map(map: &[usize], source: usize, target: usize, what: &str) -> Result<()> {
    if map.len() != source || map.iter().any(|&y| y >= target) {
        return Err(Error::invalid(format!("{what} is not a total map {source} → {target} points")));
    }
    Ok(())
}

/// Condition (1) at one base rung: a level and rung whose pulled-back ball
/// cover refines the base ball cover.
#[derive(Clone, Debug, Serialize)]
pub struct RefinementWitness {
    pub base_rung: usize,
    pub base_scale: f64,
    /// `(level, rung)` found, coarse rungs and low levels first.
    pub found: Option<(usize, usize)>,
}

/// Condition (2) at one level and rung.
#[derive(Clone, Debug, Serialize)]
pub struct DensityWitness {
    pub level: usize,
    pub rung: usize,
    /// Smallest `j ≥ level` with `π_{j,level}(X_j) ⊆ St(π_level(X), 𝒱)`.
    pub found: Option<usize>,
    /// On failure: the lowest point of `X_level` outside the star.
    pub missing_point: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionVerdict {
    pub commutes: bool,
    pub condition1: Vec<RefinementWitness>,
    pub condition2: Vec<DensityWitness>,
    pub condition1_holds: bool,
    pub condition2_holds: bool,
}

/// Check both uniform-resolution conditions on the finite ladders.
pub fn resolution_check(system: &ResolutionSystem) -> Result<ResolutionVerdict> {
    let n = system.base.carrier_size();
    let condition1: Vec<RefinementWitness> = (0..system.base.len())
        .into_par_iter()
        .map(|r| {
            let target = ball_cover(system.base.entourage(r));
            let mut found = None;
            'search: for (i, level) in system.levels.iter().enumerate() {
                for s in 0..level.len() {
                    let pulled = ball_cover(level.entourage(s)).pullback(&system.cones[i])?;
                    if is_refinement(&target, &pulled)? {
                        found = Some((i, s));
                        break 'search;
                    }
                }
            }
            Ok(RefinementWitness { base_rung: r, base_scale: system.base.scale(r), found })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut condition2 = Vec::new();
    for (i, level) in system.levels.iter().enumerate() {
        let mut image = PointSet::with_capacity(level.carrier_size());
        for x in 0..n {
            image.insert(system.cones[i][x]);
        }
        for s in 0..level.len() {
            let st = star(&image, &ball_cover(level.entourage(s)));
            let mut found = None;
            for j in i..system.levels.len() {
                if system.bond(j, i).iter().all(|&y| st.contains(y)) {
                    found = Some(j);
                    break;
                }
            }
            let missing_point =
                if found.is_none() { (0..level.carrier_size()).find(|&y| !st.contains(y)) } else { None };
            condition2.push(DensityWitness { level: i, rung: s, found, missing_point });
        }
    }

    Ok(ResolutionVerdict {
        commutes: system.commutes(),
        condition1_holds: condition1.iter().all(|w| w.found.is_some()),
        condition2_holds: condition2.iter().all(|w| w.found.is_some()),
        condition1,
        condition2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{point_set, MetricCloud};

    fn circle(n: usize) -> MetricCloud {
        let r = 0.5 / (std::f64::consts::PI / n as f64).sin();
        let pts = (0..n)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / n as f64;
                vec![r * t.cos(), r * t.sin()]
            })
            .collect();
        MetricCloud::from_coordinates(pts).unwrap()
    }

    #[test]
    fn hexagon_tower() {
        let c = circle(6);
        let ladder = EntourageLadder::from_metric(&c, &[2.1, 1.0, 0.4]).unwrap();
        let t = build_tower(&UniformPair::absolute(ladder), 2, Ring::Z2).unwrap();
        assert_eq!(t.betti_sequence(1).unwrap(), vec![0, 1, 0]);
        assert_eq!(persistent_rank(&t, 1, 1, 0).unwrap().rank, 0);
        assert_eq!(persistent_rank(&t, 1, 2, 1).unwrap().rank, 0);
        assert_eq!(persistent_rank(&t, 1, 2, 0).unwrap().rank, 0);
        assert_eq!(persistent_rank(&t, 1, 1, 1).unwrap().rank, 1);
        assert!(plateau_estimate(&t, 1, PLATEAU_MIN_SPAN).unwrap().is_empty());
        let w = plateau_estimate(&t, 1, 1).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!((w[0].coarse_rung, w[0].fine_rung, w[0].rank), (1, 1, 1));
        assert!(tower_csv(&t).starts_with("scale,degree,betti\n2.1,0,1\n"));
    }

    #[test]
    fn single_rung_has_no_bonding() {
        let c = circle(6);
        let t = build_tower(&UniformPair::absolute(EntourageLadder::from_metric(&c, &[1.0]).unwrap()), 2, Ring::Z)
            .unwrap();
        assert!(t.bonding.is_empty());
        assert_eq!(t.betti(0, 1).unwrap(), 1);
    }

    #[test]
    fn composites_are_path_independent() {
        let c = circle(12);
        let ladder = EntourageLadder::from_metric(&c, &[3.0, 2.5, 1.8, 1.2, 1.0, 0.5]).unwrap();
        for ring in [Ring::Z2, Ring::Z] {
            let t = build_tower(&UniformPair::absolute(ladder.clone()), 2, ring).unwrap();
            for d in 0..2 {
                for fine in 0..t.len() {
                    for coarse in 0..=fine {
                        assert_eq!(t.composite(d, fine, coarse).unwrap(), t.direct_map(d, fine, coarse).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn constant_tower_is_one_window() {
        let c = MetricCloud::from_coordinates(vec![vec![0.0], vec![10.0]]).unwrap();
        let t = build_tower(&UniformPair::absolute(EntourageLadder::from_metric(&c, &[3.0, 2.0, 1.0]).unwrap()), 1, Ring::Z2)
            .unwrap();
        let w = plateau_estimate(&t, 0, PLATEAU_MIN_SPAN).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!((w[0].coarse_rung, w[0].fine_rung, w[0].rank), (0, 2, 2));
    }

    #[test]
    fn excision_trivial_and_failing() {
        let c = circle(12);
        let ladder = EntourageLadder::from_metric(&c, &[1.5, 1.0, 0.5]).unwrap();
        let all = full_set(12);
        let a = point_set(12, 0..6).unwrap();
        let v = excision_verify(&ladder, &a, &all, Ring::Z2, &[0, 1]).unwrap();
        assert_eq!(v.certifying_rung, 0);
        assert!(v.passed());
        assert!(v.rungs.iter().all(|r| r.degrees.iter().all(|d| d.source_betti == 0 && d.target_betti == 0)));

        // Above the sample gap the star of one half always reaches the other.
        let b = point_set(12, 6..12).unwrap();
        let coarse = EntourageLadder::from_metric(&c, &[1.5, 1.0]).unwrap();
        match excision_verify(&coarse, &a, &b, Ring::Z2, &[0, 1]) {
            Err(Error::HypothesisNotSatisfied { witness }) => assert!(witness < 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn excision_with_collars() {
        let c = circle(24);
        let ladder = EntourageLadder::from_metric(&c, &[3.0, 2.0, 1.0, 0.5]).unwrap();
        let a = point_set(24, (0..=14).chain(22..24)).unwrap();
        let b = point_set(24, 10..24).unwrap();
        let v = excision_verify(&ladder, &a, &b, Ring::Z, &[0, 1]).unwrap();
        assert!(v.passed(), "{v:?}");
        assert!(v.rungs.iter().all(|r| r.chain_surjective));
    }

    #[test]
    fn constant_resolution_passes() {
        let c = circle(8);
        let ladder = EntourageLadder::from_metric(&c, &[2.0, 1.0]).unwrap();
        let id: Vec<usize> = (0..8).collect();
        let sys = ResolutionSystem::new(ladder.clone(), vec![ladder.clone(), ladder], vec![id.clone(), id.clone()], vec![id])
            .unwrap();
        let v = resolution_check(&sys).unwrap();
        assert!(v.commutes && v.condition1_holds && v.condition2_holds);
        assert_eq!(v.condition1[1].found, Some((0, 1)));
    }
}
