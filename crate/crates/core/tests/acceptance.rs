//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uvh_core::complex::{entourage_complex, vietoris_pair, SimplicialComplex, SimplicialComplexPair};
use uvh_core::connect::hu_bound;
use uvh_core::experiment::{run_experiment, ExperimentSpec};
use uvh_core::generate::line;
use uvh_core::homology::{
    betti_numbers, boundary_matrix, check_simplicial, contiguity_check, induced_map_fresh, PairHomology, Ring,
};
use uvh_core::homotopy::UniformPair;
use uvh_core::space::{entourage_from_metric, full_set, point_set, EntourageLadder, MetricCloud, PointSet};
use uvh_core::tower::build_tower;

type Outcome = Result<String, String>;
type Property = fn(Vec<Vec<f64>>, [f64; 3], Vec<bool>) -> Result<(), TestCaseError>;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 circle degree-1 plateau", circle_plateau),
        ("2 rational circle against uniform sample", rational_circle),
        ("3 dense subsample stability", subsample_stability),
        ("4 homotopy pipeline and contiguity property", homotopy_pipeline),
        ("5 excision on a 40-point circle", excision),
        ("6 discrete additivity", discrete_additivity),
        ("7 boundedness growth on integer lines", boundedness_growth),
        ("8 engine against brute-force span oracle", oracle_equivalence),
        ("9 structural properties", structural_properties),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({secs:.2}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.2}s) {detail}");
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn experiment(name: &str, edit: impl FnOnce(&mut ExperimentSpec)) -> Result<uvh_core::experiment::ExperimentReport, String> {
    let mut spec = ExperimentSpec::named(name).map_err(|e| e.to_string())?;
    edit(&mut spec);
    run_experiment(&spec).map_err(|e| e.to_string())
}

fn expectations_hold(r: &uvh_core::experiment::ExperimentReport) -> Result<(), String> {
    match r.expectations.iter().find(|e| !e.passed) {
        None => Ok(()),
        Some(e) => Err(format!("{}: {}", e.description, e.detail)),
    }
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> Result<T, String>) -> Result<(T, Duration), String> {
    let start = Instant::now();
    let v = f()?;
    let t = start.elapsed();
    if t > limit {
        return Err(format!("took {t:?}, limit {limit:?}"));
    }
    Ok((v, t))
}

fn circle_plateau() -> Outcome {
    let (r, t) = timed(Duration::from_secs(10), || experiment("circle_h1", |_| {}))?;
    expectations_hold(&r)?;
    let w = &r.expectations[0].detail;
    Ok(format!("window {w} in {t:?}"))
}

fn rational_circle() -> Outcome {
    let (r, t) = timed(Duration::from_secs(30), || experiment("rational_circle", |_| {}))?;
    expectations_hold(&r)?;
    if r.data["points"] != 46 {
        return Err(format!("expected 46 rational points, found {}", r.data["points"]));
    }
    Ok(format!("covering radius {:.4} in {t:?}", r.data["covering_radius"].as_f64().unwrap_or(f64::NAN)))
}

fn subsample_stability() -> Outcome {
    let r = experiment("sampling_stability", |s| s.seed = 7)?;
    expectations_hold(&r)?;
    let again = experiment("sampling_stability", |s| s.seed = 7)?;
    if serde_json::to_string(&r).ok() != serde_json::to_string(&again).ok() {
        return Err("reports differ between identical runs".into());
    }
    Ok(format!("{} rungs compared", r.data["compared_rungs"].as_array().map_or(0, Vec::len)))
}

fn homotopy_pipeline() -> Outcome {
    let r = experiment("homotopy_axiom", |_| {})?;
    expectations_hold(&r)?;
    let (instances, attempts, nonzero) = random_contiguous_pairs(200)?;
    Ok(format!(
        "hexagon holds; {instances} contiguous random pairs from {attempts} draws agree ({nonzero} non-zero higher maps)"
    ))
}

/// Draw random simplicial map pairs until `want` contiguous ones have been
/// compared in degrees 0..=2 over three rings.
fn random_contiguous_pairs(want: usize) -> Result<(usize, usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rings = [Ring::Z2, Ring::zp(3).map_err(|e| e.to_string())?, Ring::Z];
    let (mut found, mut attempts, mut nonzero) = (0, 0, 0);
    while found < want {
        attempts += 1;
        if attempts > 100 * want {
            return Err(format!("only {found} contiguous pairs in {attempts} draws"));
        }
        // Odd draws are noisy circles, which keep a degree-1 class.
        let round = attempts % 2 == 1;
        let n = if round { rng.gen_range(6..=10) } else { rng.gen_range(4..=8) };
        let pts: Vec<Vec<f64>> = if round {
            (0..n)
                .map(|k| {
                    let t = std::f64::consts::TAU * (k as f64 + rng.gen_range(-0.1..0.1)) / n as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect()
        } else {
            (0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect()
        };
        let cloud = MetricCloud::from_coordinates(pts).map_err(|e| e.to_string())?;
        let chord = 2.0 * (std::f64::consts::PI / n as f64).sin();
        let fine = if round { chord * rng.gen_range(1.15..1.5) } else { rng.gen_range(0.2..0.5) };
        let coarse = fine * rng.gen_range(1.0..if round { 1.3 } else { 2.5 });
        let reach = rng.gen_range(fine * 0.5..=coarse);
        let shift = if round { rng.gen_range(0..n) } else { 0 };
        let jiggle = |rng: &mut ChaCha8Rng| -> Vec<usize> {
            (0..n)
                .map(|x| {
                    let x = (x + shift) % n;
                    let near: Vec<usize> = (0..n).filter(|&y| cloud.distance(x, y) <= reach).collect();
                    near[rng.gen_range(0..near.len())]
                })
                .collect()
        };
        let f = jiggle(&mut rng);
        let g = jiggle(&mut rng);
        let a: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        let mut a_img: Vec<usize> = a.iter().flat_map(|&x| [x, f[x], g[x]]).collect();
        a_img.sort_unstable();
        a_img.dedup();
        let us = entourage_from_metric(&cloud, fine).map_err(|e| e.to_string())?;
        let ut = entourage_from_metric(&cloud, coarse).map_err(|e| e.to_string())?;
        let src = vietoris_pair(&point_set(n, a).map_err(|e| e.to_string())?, &us, 3).map_err(|e| e.to_string())?;
        let tgt = vietoris_pair(&point_set(n, a_img).map_err(|e| e.to_string())?, &ut, 3).map_err(|e| e.to_string())?;
        let (Ok(fs), Ok(gs)) = (check_simplicial(&f, &src, &tgt), check_simplicial(&g, &src, &tgt)) else {
            continue;
        };
        if !contiguity_check(&fs, &gs).map_err(|e| e.to_string())?.contiguous {
            continue;
        }
        found += 1;
        for ring in rings {
            for d in 0..=2 {
                let mf = induced_map_fresh(&fs, d, ring).map_err(|e| e.to_string())?;
                let mg = induced_map_fresh(&gs, d, ring).map_err(|e| e.to_string())?;
                if mf != mg {
                    return Err(format!("contiguous maps {f:?}, {g:?} differ in degree {d} over {ring}"));
                }
                if d > 0 && !mf.is_zero() {
                    nonzero += 1;
                }
            }
        }
    }
    if nonzero == 0 {
        return Err("no instance had a non-zero map above degree 0".into());
    }
    Ok((found, attempts, nonzero))
}

fn excision() -> Outcome {
    let mut notes = Vec::new();
    for ring in [Ring::Z2, Ring::Z] {
        let r = experiment("excision", |s| {
            s.ring = ring;
            s.degrees = vec![0, 1];
        })?;
        expectations_hold(&r)?;
        let v = &r.data["verdict"];
        let rungs = v["rungs"].as_array().ok_or("missing rungs")?;
        let scales = r.data["scales"].as_array().ok_or("missing scales")?;
        let cert = v["certifying_rung"].as_u64().ok_or("missing certifying rung")? as usize;
        if rungs.len() != scales.len() - cert {
            return Err("stage 2 did not cover every rung below the certifying scale".into());
        }
        for rung in rungs {
            if !rung["microsimplex_witness"].is_null() {
                return Err(format!("microsimplex witness at rung {}", rung["rung"]));
            }
            for d in rung["degrees"].as_array().ok_or("missing degrees")? {
                if d["invertible"] != true {
                    return Err(format!("degree {} not invertible at rung {} over {ring}", d["degree"], rung["rung"]));
                }
            }
        }
        notes.push(format!("{ring}: certifying scale {:.3}, {} rungs", v["certifying_scale"].as_f64().unwrap_or(f64::NAN), rungs.len()));
    }
    Ok(notes.join("; "))
}

fn discrete_additivity() -> Outcome {
    for n in [1, 5, 25] {
        let r = experiment("discrete_additivity", |s| s.generator = Some(format!("discrete:{n}")))?;
        expectations_hold(&r).map_err(|e| format!("n = {n}: {e}"))?;
    }
    Ok("n = 1, 5, 25".into())
}

fn boundedness_growth() -> Outcome {
    let mut bounds = Vec::new();
    for n in [5usize, 10, 50] {
        let cloud = line(n + 1, 1.0).map_err(|e| e.to_string())?;
        let u = entourage_from_metric(&cloud, 1.0).map_err(|e| e.to_string())?;
        let b = hu_bound(&full_set(n + 1), &u).map_err(|e| e.to_string())?;
        if b != Some(n + 1) {
            return Err(format!("n = {n}: bound {b:?}"));
        }
        bounds.push(n + 1);
    }
    let r = experiment("line_boundedness", |_| {})?;
    expectations_hold(&r)?;
    Ok(format!("bounds {bounds:?}"))
}

/// Every downward-closed family of non-empty subsets of `0..n`, as bitmasks.
fn all_complexes(n: usize) -> Vec<Vec<u32>> {
    let mut subsets: Vec<u32> = (1..(1u32 << n)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(k: usize, subsets: &[u32], chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == subsets.len() {
            out.push(chosen.clone());
            return;
        }
        let s = subsets[k];
        go(k + 1, subsets, chosen, out);
        let faces_present = (0..32).filter(|b| s & (1 << b) != 0).all(|b| {
            let f = s & !(1 << b);
            f == 0 || chosen.contains(&f)
        });
        if faces_present {
            chosen.push(s);
            go(k + 1, subsets, chosen, out);
            chosen.pop();
        }
    }
    go(0, &subsets, &mut chosen, &mut out);
    out
}

/// Z/2 betti numbers by enumerating every chain: `log2 |ker| - log2 |im|`.
fn span_oracle(simplices: &[u32], top: usize) -> Vec<usize> {
    let by_dim = |d: usize| -> Vec<u32> { simplices.iter().copied().filter(|s| s.count_ones() as usize == d + 1).collect() };
    // Boundary of one simplex as a bitmask over the (d-1)-simplices.
    let boundary = |s: u32, faces: &[u32]| -> u64 {
        faces.iter().enumerate().filter(|(_, &f)| f & s == f && (s & !f).count_ones() == 1).fold(0u64, |m, (i, _)| m | 1 << i)
    };
    let chain_image = |chain: u64, cells: &[u32], faces: &[u32]| -> u64 {
        cells.iter().enumerate().filter(|(i, _)| chain & (1 << i) != 0).fold(0u64, |m, (_, &s)| m ^ boundary(s, faces))
    };
    (0..=top)
        .map(|d| {
            let cells = by_dim(d);
            let faces = if d == 0 { Vec::new() } else { by_dim(d - 1) };
            let kernel = (0u64..1 << cells.len()).filter(|&c| chain_image(c, &cells, &faces) == 0).count();
            let above = by_dim(d + 1);
            let mut image: Vec<u64> = (0u64..1 << above.len()).map(|c| chain_image(c, &above, &cells)).collect();
            image.sort_unstable();
            image.dedup();
            (kernel.trailing_zeros() - image.len().trailing_zeros()) as usize
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0;
    for n in 1..=5usize {
        for family in all_complexes(n) {
            let simplices: Vec<Vec<usize>> =
                family.iter().map(|&s| (0..n).filter(|&b| s & (1 << b) != 0).collect()).collect();
            let cx = SimplicialComplex::from_simplices(n, &simplices, n).map_err(|e| e.to_string())?;
            let top = n - 1;
            let engine = betti_numbers(&cx, Ring::Z2, top).map_err(|e| e.to_string())?;
            let oracle = span_oracle(&family, top);
            if engine != oracle {
                return Err(format!("{simplices:?}: engine {engine:?}, oracle {oracle:?}"));
            }
            checked += 1;
        }
    }
    let rp2 = projective_plane();
    let z = PairHomology::compute(&SimplicialComplexPair::absolute(rp2.clone()), Ring::Z, &[0, 1, 2])
        .map_err(|e| e.to_string())?;
    let zb: Vec<usize> = z.groups().map(|g| g.betti).collect();
    let torsion = z.group(1).map_err(|e| e.to_string())?.torsion.clone();
    let z2 = betti_numbers(&rp2, Ring::Z2, 2).map_err(|e| e.to_string())?;
    if zb != [1, 0, 0] || torsion != [2] || z2 != [1, 1, 1] {
        return Err(format!("projective plane: Z betti {zb:?} torsion {torsion:?}, Z/2 betti {z2:?}"));
    }
    Ok(format!("{checked} complexes; projective plane torsion {{2}}"))
}

fn projective_plane() -> SimplicialComplex {
    let t: [[usize; 3]; 10] = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
    ];
    SimplicialComplex::from_simplices(6, &t.iter().map(|s| s.to_vec()).collect::<Vec<_>>(), 3).expect("valid")
}

/// Small planar clouds with a three-rung ladder and a random subset.
fn instance() -> impl Strategy<Value = (Vec<Vec<f64>>, [f64; 3], Vec<bool>)> {
    (4usize..=9).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), n),
            (0.3f64..0.9, 0.5f64..0.9, 0.4f64..0.9).prop_map(|(a, r1, r2)| [a, a * r1, a * r1 * r2]),
            prop::collection::vec(any::<bool>(), n),
        )
    })
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(Config { cases: 128, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn structural_properties() -> Outcome {
    let mut done = Vec::new();
    let props: [(&str, Property); 5] = [
        ("boundary squared", boundary_squared),
        ("euler characteristic", euler_identity),
        ("functoriality", functoriality),
        ("path independence", path_independence),
        ("monotonicity", monotonicity),
    ];
    for (name, prop) in props {
        let mut r = runner();
        r.run(&instance(), |(p, s, a)| prop(p, s, a)).map_err(|e| format!("{name}: {e}"))?;
        done.push(format!("{name} x128"));
    }
    Ok(done.join(", "))
}

fn cloud(points: Vec<Vec<f64>>) -> Result<MetricCloud, TestCaseError> {
    MetricCloud::from_coordinates(points).map_err(|e| fail(e.to_string()))
}

fn subset(mask: &[bool]) -> PointSet {
    point_set(mask.len(), mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).expect("in range")
}

fn boundary_squared(points: Vec<Vec<f64>>, scales: [f64; 3], mask: Vec<bool>) -> Result<(), TestCaseError> {
    let c = cloud(points)?;
    let u = entourage_from_metric(&c, scales[0]).map_err(|e| fail(e.to_string()))?;
    let pair = vietoris_pair(&subset(&mask), &u, 3).map_err(|e| fail(e.to_string()))?;
    for d in 1..3 {
        let lo = boundary_matrix(&pair, d);
        let hi = boundary_matrix(&pair, d + 1);
        for row in &lo {
            for j in 0..hi.first().map_or(0, Vec::len) {
                let s: i64 = row.iter().zip(&hi).map(|(a, r)| a * r[j]).sum();
                prop_assert_eq!(s, 0, "degree {}", d);
            }
        }
    }
    Ok(())
}

fn euler_identity(points: Vec<Vec<f64>>, scales: [f64; 3], _: Vec<bool>) -> Result<(), TestCaseError> {
    let c = cloud(points)?;
    let n = c.len();
    let u = entourage_from_metric(&c, scales[1]).map_err(|e| fail(e.to_string()))?;
    let cx = entourage_complex(&u, n);
    prop_assert!(!cx.is_truncated());
    for ring in [Ring::Z2, Ring::Z] {
        let b = betti_numbers(&cx, ring, n - 1).map_err(|e| fail(e.to_string()))?;
        let alt: i64 = b.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(alt, cx.euler_characteristic());
    }
    Ok(())
}

fn functoriality(points: Vec<Vec<f64>>, scales: [f64; 3], _: Vec<bool>) -> Result<(), TestCaseError> {
    let c = cloud(points)?;
    let n = c.len();
    let cx = |s: f64| -> Result<SimplicialComplexPair, TestCaseError> {
        let u = entourage_from_metric(&c, s).map_err(|e| fail(e.to_string()))?;
        Ok(SimplicialComplexPair::absolute(entourage_complex(&u, 3)))
    };
    let (x2, x1, x0) = (cx(scales[2])?, cx(scales[1])?, cx(scales[0])?);
    // Nearest-point retraction onto the first point of each fine ball, then inclusions.
    let f: Vec<usize> = (0..n).map(|x| (0..n).find(|&y| c.distance(x, y) <= scales[2]).unwrap_or(x)).collect();
    let id: Vec<usize> = (0..n).collect();
    let (Ok(fs), Ok(gs)) = (check_simplicial(&f, &x2, &x1), check_simplicial(&id, &x1, &x0)) else {
        return Ok(());
    };
    let gf = fs.then(&gs).map_err(|e| fail(e.to_string()))?;
    for ring in [Ring::Z2, Ring::Z] {
        for d in 0..=2 {
            let lhs = induced_map_fresh(&gf, d, ring).map_err(|e| fail(e.to_string()))?;
            let mg = induced_map_fresh(&gs, d, ring).map_err(|e| fail(e.to_string()))?;
            let mf = induced_map_fresh(&fs, d, ring).map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(lhs, mg.mul(&mf).map_err(|e| fail(e.to_string()))?);
        }
    }
    Ok(())
}

fn ladder(c: &MetricCloud, scales: [f64; 3]) -> Result<EntourageLadder, TestCaseError> {
    EntourageLadder::from_metric(c, &scales).map_err(|e| fail(e.to_string()))
}

fn path_independence(points: Vec<Vec<f64>>, scales: [f64; 3], mask: Vec<bool>) -> Result<(), TestCaseError> {
    let c = cloud(points)?;
    let pair = UniformPair::new(ladder(&c, scales)?, subset(&mask)).map_err(|e| fail(e.to_string()))?;
    for ring in [Ring::Z2, Ring::Z] {
        let t = build_tower(&pair, 3, ring).map_err(|e| fail(e.to_string()))?;
        for d in 0..3 {
            let via = t.composite(d, 2, 0).map_err(|e| fail(e.to_string()))?;
            let direct = t.direct_map(d, 2, 0).map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(via, direct, "degree {} over {}", d, ring);
        }
    }
    Ok(())
}

fn monotonicity(points: Vec<Vec<f64>>, scales: [f64; 3], mask: Vec<bool>) -> Result<(), TestCaseError> {
    let c = cloud(points)?;
    let pair = UniformPair::new(ladder(&c, scales)?, subset(&mask)).map_err(|e| fail(e.to_string()))?;
    for k in 0..2 {
        let coarse = pair.complex_pair(k, 3).map_err(|e| fail(e.to_string()))?;
        let fine = pair.complex_pair(k + 1, 3).map_err(|e| fail(e.to_string()))?;
        prop_assert!(fine.total().is_subcomplex_of(coarse.total()));
        prop_assert!(fine.sub().is_subcomplex_of(coarse.sub()));
        prop_assert!(fine.sub().is_subcomplex_of(fine.total()));
    }
    Ok(())
}
