mod common;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use grover_pst::corpus::{circulant_corpus, random_noncirculant_graphs};
use grover_pst::cyclotomic::{cyclotomic_polynomial, is_algebraic_integer, BosmaBasis};
use grover_pst::pst::{search_min_pst_exhaustive, Instance};
use grover_pst::report::random_element;
use grover_pst::spectral::circulant_eigenvalues;
use grover_pst::walk::fidelity_trace;
use grover_pst::{Graph, Tolerances, WalkMatrices};

use common::{cdist, charpoly_integral, circulant_spectrum, cyclotomic_poly, ArcWalk};

#[test]
fn cyclotomic_polynomials_match() {
    for n in 1..=60u64 {
        let lib: Vec<i64> = cyclotomic_polynomial(n).unwrap().to_vec();
        let oracle: Vec<i64> = cyclotomic_poly(n).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(lib, oracle, "n = {n}");
    }
}

#[test]
fn integrality_matches_charpoly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..150 {
        let e = random_element(&mut rng).unwrap();
        let basis = BosmaBasis::new(e.conductor(), &BTreeMap::new()).unwrap();
        let lib = is_algebraic_integer(&e, &basis).unwrap();
        assert_eq!(lib, charpoly_integral(e.conductor(), e.coeffs()), "{e}");
        if lib {
            yes += 1
        } else {
            no += 1
        }
    }
    assert!(yes > 20 && no > 20, "unbalanced sample: {yes} integral, {no} not");
}

#[test]
fn circulant_eigenvalues_match_dft() {
    for spec in circulant_corpus(16) {
        let lib = circulant_eigenvalues(&spec).unwrap();
        let oracle = circulant_spectrum(spec.n(), spec.connection_set());
        for (e, o) in lib.iter().zip(&oracle) {
            assert!(o.im.abs() < 1e-12);
            assert!(cdist(Complex64::new(e.value, 0.0), *o) < 1e-12, "{spec} j = {}", e.j);
            assert!(cdist(e.tag.to_complex() / spec.valency() as f64, *o) < 1e-12);
        }
    }
}

#[test]
fn generic_spectrum_matches_circulant_formula() {
    let tol = Tolerances::default();
    for spec in circulant_corpus(10) {
        let generic = Instance::<f64>::from_graph(spec.build(), &tol).unwrap();
        let mut values: Vec<f64> = generic
            .spectral()
            .unwrap()
            .classes()
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity))
            .collect();
        let mut oracle: Vec<f64> = circulant_spectrum(spec.n(), spec.connection_set()).iter().map(|c| c.re).collect();
        values.sort_by(f64::total_cmp);
        oracle.sort_by(f64::total_cmp);
        for (v, o) in values.iter().zip(&oracle) {
            assert!((v - o).abs() < 1e-10, "{spec}");
        }
    }
}

fn overlaps_agree(g: &Graph, tau_max: usize) {
    let w = WalkMatrices::<f64>::new(g).unwrap();
    let oracle = ArcWalk::new(g.vertex_count(), g.edges());
    let tol = Tolerances::default();
    for x in 0..g.vertex_count() {
        for y in 0..g.vertex_count() {
            let tr =
                fidelity_trace(&w.u, &w.vertex_state(x).unwrap(), &w.vertex_state(y).unwrap(), tau_max, &tol).unwrap();
            let o = oracle.overlaps(x, y, tau_max);
            for (tau, lib) in tr.overlaps.iter().enumerate() {
                assert!((lib - o[tau + 1]).abs() < 1e-10, "x={x} y={y} tau={}", tau + 1);
            }
        }
    }
}

#[test]
fn walk_matches_direct_arc_simulation() {
    for spec in circulant_corpus(9) {
        overlaps_agree(&spec.build(), 30);
    }
    for g in random_noncirculant_graphs(5, 10, 8, &Tolerances::default()).graphs {
        overlaps_agree(&g, 30);
    }
}

#[test]
fn search_matches_direct_arc_simulation() {
    let tol = Tolerances::default();
    for spec in circulant_corpus(14) {
        let n = spec.n();
        let v = search_min_pst_exhaustive(&Instance::<f64>::from_circulant(&spec, &tol).unwrap(), 0, 4 * n).unwrap();
        let oracle = ArcWalk::new(n, spec.build().edges());
        let mut first: Option<(usize, usize)> = None;
        'outer: for tau in 1..=4 * n {
            for y in 1..n {
                if (oracle.overlaps(0, y, tau)[tau].abs() - 1.0).abs() < 1e-9 {
                    first = Some((tau, y));
                    break 'outer;
                }
            }
        }
        assert_eq!(first, v.tau_min.zip(v.target), "{spec}");
    }
}

#[test]
fn path_graph_transfer() {
    // P_3 has PST between its ends at time 2
    let tol = Tolerances::default();
    let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let v = search_min_pst_exhaustive(&Instance::<f64>::from_graph(p3.clone(), &tol).unwrap(), 0, 20).unwrap();
    assert_eq!((v.target, v.tau_min), (Some(2), Some(2)));
    let o = ArcWalk::new(3, p3.edges()).overlaps(0, 2, 2);
    assert!((o[2].abs() - 1.0).abs() < 1e-12);

    let p4 = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let v = search_min_pst_exhaustive(&Instance::<f64>::from_graph(p4.clone(), &tol).unwrap(), 0, 40).unwrap();
    let oracle = ArcWalk::new(4, p4.edges());
    let hit = (1..4).any(|y| oracle.overlaps(0, y, 40).iter().skip(1).any(|o| (o.abs() - 1.0).abs() < 1e-9));
    assert_eq!(v.occurs, hit);
}
