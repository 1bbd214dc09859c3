use num_traits::{Signed, Zero};

use super::*;
use crate::decomposition::check_certificate;
use crate::instances::{cube, random_polytope};
use crate::numeric::{parse_vector, rat};

fn v(s: &str) -> RVector {
    parse_vector(s).unwrap()
}

fn perturbed_square(seed: u64) -> HPolytope {
    perturb(&cube(2), seed, &rat(1, 1024)).unwrap()
}

#[test]
fn square_q_is_the_square() {
    let q = build_q(&cube(2), 2).unwrap();
    assert_eq!(q.polytope().dim(), 2);
    assert_eq!(q.lattice().f_vector(), vec![4, 4, 1]);
    for y in [v("1/2,-1"), v("0,0"), v("1,1")] {
        let cols = q.columns(&y);
        assert_eq!(cols[1], vec_ops::scale(&cols[0], &rat(-1, 1)));
        assert!(q.polytope().contains(&y));
    }
    assert!(!q.polytope().contains(&v("3/2,0")));
}

#[test]
fn x_basis_spans_zero_sum_tuples() {
    let p = random_polytope(5, 2, 5).unwrap();
    let q = build_q(
        &p.normalize_to_unit_form(&p.vertex_centroid()).unwrap().polytope,
        2,
    )
    .unwrap();
    let basis = q.x_basis();
    assert_eq!(basis.len(), 2);
    for b in &basis {
        assert_eq!(b.len(), q.product_dim());
        assert!(b[..2].iter().zip(&b[2..]).all(|(x, y)| (x + y).is_zero()));
    }
    let y = v("1/7,-2/9");
    assert_eq!(q.from_columns(&q.columns(&y)).unwrap(), y);
}

#[test]
fn centered_square_is_not_generic() {
    let q = build_q(&cube(2), 2).unwrap();
    let Genericity::Violations(bad) = check_genericity(&q) else {
        panic!("central symmetry must be flagged");
    };
    let vertex_violations: Vec<_> = bad.iter().filter(|b| b.dim == 0).collect();
    assert_eq!(vertex_violations.len(), 4);
    for b in vertex_violations {
        assert_eq!(b.label_dims, vec![0, 0]);
        assert_eq!(b.expected, -2);
    }
    assert!(matches!(find_phi_zero(&q), Err(Error::NonGeneric)));
}

#[test]
fn perturbed_square_is_generic() {
    for seed in 0..10 {
        let q = build_q(&perturbed_square(seed), 2).unwrap();
        assert_eq!(check_genericity(&q), Genericity::Generic, "seed {seed}");
        for id in q.lattice().ids_of_dim(0) {
            assert_eq!(q.label_dims(id).iter().sum::<usize>(), 2);
        }
    }
}

#[test]
fn phi_sums_to_zero_and_is_integral_at_vertices() {
    for pe in [cube(2), perturbed_square(3)] {
        let q = build_q(&pe, 2).unwrap();
        for value in q.phi().values() {
            assert!(value.iter().sum::<Rational>().is_zero());
        }
        if q.is_generic() {
            for id in q.lattice().ids_of_dim(0) {
                let expected: Vec<Rational> = q
                    .label_dims(id)
                    .iter()
                    .map(|&e| rat(e as i64 - q.d() as i64, 1))
                    .collect();
                assert_eq!(q.phi().value(id), &expected);
            }
        }
    }
}

#[test]
fn column_swap_is_an_equivariance() {
    assert_eq!(
        check_equivariance(&build_q(&cube(2), 2).unwrap()),
        Equivariance::Pass
    );
    for seed in 0..4 {
        let q = build_q(&perturbed_square(seed), 2).unwrap();
        assert_eq!(check_equivariance(&q), Equivariance::Pass);
    }
}

#[test]
fn perturbation_is_bounded_and_deterministic() {
    let sq = cube(2);
    let same = perturb(&sq, 1, &Rational::zero()).unwrap();
    assert_eq!(same.a(), sq.a());
    assert_eq!(same.b(), sq.b());
    let m = rat(1, 1024);
    let a = perturb(&sq, 9, &m).unwrap();
    assert_eq!(a.a(), perturb(&sq, 9, &m).unwrap().a());
    assert_ne!(a.a(), perturb(&sq, 10, &m).unwrap().a());
    for k in 0..a.num_facets() {
        let src = a.source_rows()[k];
        for (x, y) in a.a().row(k).iter().zip(sq.a().row(src)) {
            assert!((x - y).abs() <= m);
        }
    }
    assert!(matches!(
        perturb(&sq, 0, &rat(4, 1)),
        Err(Error::PerturbationTooLarge(_)) | Ok(_)
    ));
    assert!(perturb(&sq.translated(&v("1/2,0")), 0, &m).is_err());
}

fn hausdorff_to(p: &HPolytope, pe: &HPolytope) -> Rational {
    pe.vertices()
        .iter()
        .map(|w| {
            p.vertices()
                .iter()
                .map(|u| w.iter().zip(u).map(|(a, b)| (a - b).abs()).max().unwrap())
                .min()
                .unwrap()
        })
        .max()
        .unwrap()
}

#[test]
fn perturbed_vertices_converge() {
    let sq = cube(2);
    let mut m = rat(1, 64);
    let mut last = None;
    for _ in 0..6 {
        let dist = hausdorff_to(&sq, &perturb(&sq, 4, &m).unwrap());
        assert!(dist <= &m * rat(4, 1));
        if let Some(prev) = last {
            assert!(dist < prev);
        }
        last = Some(dist);
        m /= rat(2, 1);
    }
}

#[test]
fn zero_of_phi_is_a_vertex() {
    for seed in 0..6 {
        let q = build_q(&perturbed_square(seed), 2).unwrap();
        let (chain, z) = find_phi_zero(&q).unwrap();
        assert_eq!(chain.faces.len(), 2);
        let descent = descend_to_vertex(&q, &chain).unwrap();
        assert!(descent.r.is_zero());
        assert_eq!(chain.t, vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(&z, q.lattice().face(descent.vertex).sample());
        assert_eq!(q.label_dims(descent.vertex), vec![1, 1]);
    }
}

#[test]
fn descent_rejects_a_tampered_chain() {
    let q = build_q(&perturbed_square(2), 2).unwrap();
    let (mut chain, _) = find_phi_zero(&q).unwrap();
    chain.t = vec![rat(1, 2), rat(1, 2)];
    assert!(matches!(descend_to_vertex(&q, &chain), Err(Error::Internal(_))));
    chain.faces.swap(0, 1);
    assert!(matches!(descend_to_vertex(&q, &chain), Err(Error::Internal(_))));
}

#[test]
fn vertex_with_all_d_labels_is_its_own_zero() {
    let q = build_q(&perturbed_square(1), 2).unwrap();
    let (chain, _) = find_phi_zero(&q).unwrap();
    assert!(q.phi().value(chain.faces[0]).iter().all(Zero::is_zero));
}

#[test]
fn proof_pipeline_on_squares() {
    let sq = cube(2);
    for (target, seed) in [(v("0,0"), 0), (v("1/4,1/3"), 1), (v("1,1/3"), 2), (v("1,1"), 3)] {
        let run = run_proof(
            &sq,
            &target,
            2,
            1,
            &ProofConfig {
                seed,
                ..ProofConfig::default()
            },
        )
        .unwrap();
        let check = check_certificate(&sq, &run.decomposition.to_certificate()).unwrap();
        assert_eq!(check.face_dims.len(), 2);
        assert!(run.descent.r.is_zero());
        assert!(run.attempts <= 20);
    }
}

#[test]
fn proof_pipeline_on_random_polygons() {
    for seed in 0..5 {
        let p = random_polytope(seed, 2, 6).unwrap();
        let t = vec_ops::centroid([&p.vertices()[0], &p.vertices()[1], &p.vertices()[3]]);
        let d = decompose_via_proof(&p, &t, 2, 1, seed).unwrap();
        check_certificate(&p, &d.to_certificate()).unwrap();
    }
}

#[test]
fn trace_is_json_lines() {
    let run = run_proof(&cube(2), &v("1/5,0"), 2, 1, &ProofConfig::default()).unwrap();
    let text = run.trace_jsonl();
    let stages: Vec<String> = text
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["stage"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(stages.first().map(String::as_str), Some("normalize"));
    assert_eq!(stages.last().map(String::as_str), Some("result"));
    for stage in ["perturb", "genericity", "chain", "descent", "recertify"] {
        assert!(stages.iter().any(|s| s == stage), "missing {stage}");
    }
}

#[test]
fn pipeline_input_errors() {
    let c = cube(4);
    let origin = v("0,0,0,0");
    assert!(matches!(
        decompose_via_proof(&c, &origin, 4, 1, 0),
        Err(Error::Input(_))
    ));
    assert!(matches!(
        decompose_via_proof(&c, &origin, 2, 1, 0),
        Err(Error::DimensionMismatch(_))
    ));
    assert!(matches!(
        decompose_via_proof(&cube(2), &v("2,0"), 2, 1, 0),
        Err(Error::Outside { .. })
    ));
    assert!(matches!(
        build_q(&cube(2).translated(&v("1,0")), 2),
        Err(Error::Input(_))
    ));
    assert!(matches!(build_q(&cube(3), 2), Err(Error::DimensionMismatch(_))));
}
