//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). A failing criterion prints
//! FAIL with its reason and the process still continues to the next one.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use polybary::decomposition::{
    check_certificate, decompose, decompose_prime, tuple_feasible, Certificate, SolverConfig, TupleResult,
};
use polybary::instances::random_polytope;
use polybary::numeric::{format_rational, rat, vec_ops, RVector, Rational};
use polybary::polytope::{FaceLattice, HPolytope};
use polybary::proof::{build_q, check_equivariance, perturb, run_proof, Equivariance, ProofConfig, QComplex};
use polybary::verifier::{
    check_counterexample, dyadic_combination, falsify_mixed_skeleton_simplex, falsify_weighted_prism,
    verify_minkowski, GridSearch, Sampler, Verdict,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Vertices, facet barycenters, then dyadic combinations of vertices.
fn targets(p: &HPolytope, seed: u64, count: usize, boundary: usize) -> Vec<RVector> {
    let mut out: Vec<RVector> = p.vertices().iter().take(boundary).cloned().collect();
    for k in 0..p.num_facets().min(boundary) {
        let verts: Vec<&RVector> = p.facet_vertices(k).ones().map(|v| &p.vertices()[v]).collect();
        out.push(vec_ops::centroid(verts));
    }
    let all: Vec<&RVector> = p.vertices().iter().collect();
    let mut rng = Sampler::new(seed, 0).stream(0);
    while out.len() < count {
        out.push(dyadic_combination(&mut rng, &all, 4));
    }
    out
}

fn certify(p: &HPolytope, cert: &Certificate, d: usize) -> Result<(), String> {
    let check = check_certificate(p, cert).map_err(|e| e.to_string())?;
    ensure(check.exact && check.face_dims.iter().all(|&k| k == d), || {
        format!("certificate faces {:?}, expected dimension {d}", check.face_dims)
    })
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let cfg = SolverConfig::default();
    let mut solved = 0;
    for (n, d) in [(2, 1), (2, 2), (3, 1)] {
        let dim = n * d;
        for seed in 0..50u64 {
            let facets = match dim {
                2 => 3 + seed as usize % 10,
                3 => 4 + seed as usize % 9,
                _ => 5 + seed as usize % 4,
            };
            let p = random_polytope(1000 + seed, dim, facets).map_err(|e| e.to_string())?;
            for x in targets(&p, seed, 20, 2) {
                let dec = decompose(&p, &x, n, &cfg).map_err(|e| format!("({n},{d}) seed {seed}: {e}"))?;
                certify(&p, &dec.to_certificate(), d)?;
                solved += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!("{solved}/3000 certified in {elapsed:.1?}"))
}

fn criterion_2() -> Check {
    let cfg = SolverConfig::default();
    let quarter = rat(1, 4);
    let mut solved = 0;
    for seed in 0..10u64 {
        let p = random_polytope(2000 + seed, 4, 5 + seed as usize % 4).map_err(|e| e.to_string())?;
        for x in targets(&p, seed, 20, 2) {
            let dec = decompose(&p, &x, 4, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(dec.weights.iter().all(|w| w == &quarter), || {
                "weights are not all 1/4".into()
            })?;
            certify(&p, &dec.to_certificate(), 1)?;
            solved += 1;
        }
    }
    Ok(format!("{solved}/200 certified, weights 1/4"))
}

/// Fifteen polygons and ten 4-polytopes, each with an interior dyadic target.
fn proof_instances() -> Vec<(HPolytope, RVector, usize)> {
    (0..25u64)
        .map(|i| {
            let (dim, facets) = if i < 15 {
                (2, 3 + i as usize % 8)
            } else {
                (4, 6 + i as usize % 3)
            };
            let p = random_polytope(3000 + i, dim, facets).expect("instance");
            let all: Vec<&RVector> = p.vertices().iter().collect();
            let mut rng = Sampler::new(i, 0).stream(1);
            let x = loop {
                let x = dyadic_combination(&mut rng, &all, 4);
                if p.contains_in_interior(&x) {
                    break x;
                }
            };
            (p, x, dim / 2)
        })
        .collect()
}

fn criterion_3() -> Check {
    let mut runs = 0;
    for (i, (p, x, d)) in proof_instances().into_iter().enumerate() {
        let cfg = ProofConfig {
            seed: i as u64,
            ..ProofConfig::default()
        };
        let run = run_proof(&p, &x, 2, d, &cfg).map_err(|e| format!("instance {i}: {e}"))?;
        certify(&p, &run.decomposition.to_certificate(), d)?;
        let mut e1 = vec![Rational::zero(); run.chain.t.len()];
        e1[0] = Rational::one();
        ensure(run.chain.t == e1, || {
            format!("instance {i}: t = {:?}", run.chain.t)
        })?;
        ensure(run.descent.r.is_zero(), || {
            format!("instance {i}: r = {}", run.descent.r)
        })?;
        let prime = decompose_prime(&p, &x, 2, d, &SolverConfig::default()).map_err(|e| e.to_string())?;
        certify(&p, &prime.to_certificate(), d)?;
        runs += 1;
    }
    Ok(format!("{runs}/25 runs agree, t = (1, 0, ..., 0) in each"))
}

fn phi_invariants(q: &QComplex) -> Result<(), String> {
    for value in q.phi().values() {
        ensure(value.iter().sum::<Rational>().is_zero(), || {
            "phi does not sum to zero".into()
        })?;
    }
    if q.is_generic() {
        for id in q.lattice().ids_of_dim(0) {
            let phi = q.phi().value(id);
            for (v, e) in phi.iter().zip(q.label_dims(id)) {
                ensure(v.is_integer() && v == &rat(e as i64 - q.d() as i64, 1), || {
                    format!("vertex value {} for label dimension {e}", format_rational(v))
                })?;
            }
        }
    }
    ensure(check_equivariance(q) == Equivariance::Pass, || {
        "equivariance fails".into()
    })
}

fn criterion_4() -> Check {
    let mut built = 0;
    let mut generic = 0;
    let square = polybary::instances::cube(2);
    let mut qs = vec![build_q(&square, 2).map_err(|e| e.to_string())?];
    for (i, (p, x, _)) in proof_instances().into_iter().enumerate() {
        let unit = p.normalize_to_unit_form(&x).map_err(|e| e.to_string())?.polytope;
        let pe = perturb(&unit, i as u64, &rat(1, 1024)).map_err(|e| e.to_string())?;
        qs.push(build_q(&pe, 2).map_err(|e| e.to_string())?);
    }
    for q in &qs {
        phi_invariants(q)?;
        built += 1;
        generic += usize::from(q.is_generic());
    }
    Ok(format!(
        "{built} complexes ({generic} generic): sums zero, vertex values integral, equivariant"
    ))
}

fn criterion_5() -> Check {
    let square = polybary::instances::cube(2);
    let q = build_q(&square, 2).map_err(|e| e.to_string())?;
    ensure(!q.is_generic(), || "centered square reported generic".into())?;
    let m = rat(1, 1024);
    let mut generic = 0;
    for seed in 0..100 {
        let pe = perturb(&square, seed, &m).map_err(|e| e.to_string())?;
        generic += usize::from(build_q(&pe, 2).map_err(|e| e.to_string())?.is_generic());
    }
    ensure(generic >= 95, || {
        format!("only {generic}/100 perturbations generic")
    })?;
    let mut worst = 0;
    for seed in 0..20 {
        let cfg = ProofConfig {
            seed,
            ..ProofConfig::default()
        };
        for x in [
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 3)],
            vec![rat(1, 1), rat(1, 1)],
        ] {
            let run = run_proof(&square, &x, 2, 1, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
            worst = worst.max(run.attempts);
        }
    }
    ensure(worst <= 20, || format!("{worst} attempts"))?;
    Ok(format!(
        "non-generic before, {generic}/100 generic after, at most {worst} attempts"
    ))
}

fn criterion_6() -> Check {
    let cfg = SolverConfig::default();
    let mut cases = Vec::new();
    for seed in 0..10u64 {
        cases.push((
            random_polytope(4000 + seed, 2, 4).map_err(|e| e.to_string())?,
            1,
            seed,
        ));
    }
    for seed in 0..5u64 {
        cases.push((
            random_polytope(5000 + seed, 4, 6 + seed as usize % 3).map_err(|e| e.to_string())?,
            2,
            seed,
        ));
    }
    for (p, d, seed) in &cases {
        let report =
            verify_minkowski(p, 2, *d, &Sampler::new(*seed, 100), &cfg).map_err(|e| e.to_string())?;
        ensure(report.verdict == Verdict::Verified, || {
            format!("{}: {:?}", report.instance, report.failures.first())
        })?;
        let subset = &report.directions[0];
        ensure(subset.attempted == subset.succeeded, || {
            "subset direction failed".into()
        })?;
    }
    Ok(format!(
        "{} instances, both directions on 100 samples each",
        cases.len()
    ))
}

fn criterion_7() -> Check {
    let simplex = falsify_mixed_skeleton_simplex(0, 3, 1, &Sampler::new(0, 100), &GridSearch::default())
        .map_err(|e| e.to_string())?;
    let ce = simplex
        .counterexample
        .as_ref()
        .ok_or("no simplex counterexample")?;
    ensure(ce.point.iter().all(|c| c == "0"), || {
        format!("counterexample {:?} is not the centroid", ce.point)
    })?;
    check_counterexample(&simplex).map_err(|e| e.to_string())?;

    let extension = falsify_mixed_skeleton_simplex(1, 2, 1, &Sampler::new(0, 100), &GridSearch::default())
        .map_err(|e| e.to_string())?;
    ensure(
        extension.verdict == Verdict::Verified && extension.samples_succeeded == 100,
        || format!("(1, 2) split: {:?}", extension.verdict),
    )?;

    let prism = falsify_weighted_prism(&rat(1, 10), &GridSearch::default()).map_err(|e| e.to_string())?;
    ensure(prism.verdict == Verdict::Counterexample, || {
        format!(
            "simplex parts pass; prism with eps = 1/10: {:?} after {} grid points",
            prism.verdict, prism.samples_attempted
        )
    })?;
    check_counterexample(&prism).map_err(|e| e.to_string())?;
    Ok("prism, (0, 3) and (1, 2) simplex checks certified".into())
}

/// Exact midpoint solve for edges `[a1, b1]`, `[a2, b2]`: is there
/// `s, t ∈ [0, 1]` with `a1 + s u + a2 + t v = 2 x`?
fn midpoint_oracle(e1: (&RVector, &RVector), e2: (&RVector, &RVector), x: &RVector) -> bool {
    let u = vec_ops::sub(e1.1, e1.0);
    let v = vec_ops::sub(e2.1, e2.0);
    let r = vec_ops::sub(&vec_ops::sub(&vec_ops::scale(x, &rat(2, 1)), e1.0), e2.0);
    let cross = |a: &RVector, b: &RVector| &a[0] * &b[1] - &a[1] * &b[0];
    let unit = |s: &Rational| !s.is_negative() && s <= &Rational::one();
    let det = cross(&u, &v);
    if !det.is_zero() {
        return unit(&(cross(&r, &v) / &det)) && unit(&(cross(&u, &r) / &det));
    }
    if !cross(&r, &u).is_zero() {
        return false;
    }
    // Parallel: r = alpha u and v = lambda u; need s + lambda t = alpha.
    let j = if u[0].is_zero() { 1 } else { 0 };
    let alpha = &r[j] / &u[j];
    let lambda = &v[j] / &u[j];
    let lo = Rational::zero().min(lambda.clone());
    let hi = Rational::one() + Rational::zero().max(lambda);
    lo <= alpha && alpha <= hi
}

/// Dense sweep over boundary points `y` of the first edge: the partner
/// `2x − y` must lie on the second edge.
fn sweep_hit(e1: (&RVector, &RVector), e2: (&RVector, &RVector), x: &RVector, steps: i64) -> bool {
    let u = vec_ops::sub(e1.1, e1.0);
    let v = vec_ops::sub(e2.1, e2.0);
    (0..=steps).any(|k| {
        let y = vec_ops::add(e1.0, &vec_ops::scale(&u, &rat(k, steps)));
        let z = vec_ops::sub(&vec_ops::sub(&vec_ops::scale(x, &rat(2, 1)), &y), e2.0);
        let j = if v[0].is_zero() { 1 } else { 0 };
        let t = &z[j] / &v[j];
        vec_ops::scale(&v, &t) == z && !t.is_negative() && t <= Rational::one()
    })
}

fn criterion_8() -> Check {
    let mut pairs = 0;
    for seed in 0..10u64 {
        let p = random_polytope(6000 + seed, 2, 3 + seed as usize % 10).map_err(|e| e.to_string())?;
        let lattice = FaceLattice::new(&p);
        let edges = lattice.faces_of_dim(1);
        let ends = |k: usize| {
            let vs = edges[k].vertices();
            (&p.vertices()[vs[0]], &p.vertices()[vs[1]])
        };
        let mut xs = targets(&p, seed, 16, 2);
        // Midpoints of vertex pairs sit exactly on sweep grids.
        for w in p.vertices().windows(2) {
            xs.push(vec_ops::centroid([&w[0], &w[1]]));
        }
        for x in &xs {
            for i in 0..edges.len() {
                for j in 0..edges.len() {
                    let oracle = midpoint_oracle(ends(i), ends(j), x);
                    let swept = sweep_hit(ends(i), ends(j), x, 64);
                    ensure(!swept || oracle, || {
                        format!("sweep hit missed by exact solve at seed {seed}")
                    })?;
                    let lp = matches!(
                        tuple_feasible(&p, &[&edges[i], &edges[j]], x).map_err(|e| e.to_string())?,
                        TupleResult::Feasible(_)
                    );
                    ensure(lp == oracle, || {
                        format!("seed {seed}, edges ({i}, {j}): LP says {lp}, oracle says {oracle}")
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} ordered edge pairs agree"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("theorem suite", criterion_1),
        ("composite n", criterion_2),
        ("proof pipeline agreement", criterion_3),
        ("phi invariants", criterion_4),
        ("genericity detector", criterion_5),
        ("Minkowski identity", criterion_6),
        ("counterexample suite", criterion_7),
        ("oracle equivalence", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let label = format!("criterion {} ({name})", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {label}: {detail} [{secs:.1}s]"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {label}: {reason} [{secs:.1}s]");
            }
        }
    }
    println!("{} failed", failed);
}
