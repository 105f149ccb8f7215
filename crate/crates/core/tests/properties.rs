use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use grover_pst::chebyshev::chebyshev_scalar;
use grover_pst::cyclotomic::{crt_compose, crt_decompose, epsilon_map, totient, BosmaBasis, CycloElem};
use grover_pst::matrix::norm;
use grover_pst::pst::{criterion_b_from_vector, recognize_cos_angle, Instance};
use grover_pst::scalar::rational;
use grover_pst::symmetry::{circulant_inversion, circulant_rotation, verify_intertwining};
use grover_pst::{CirculantSpec, Graph, Matrix, RationalMatrix, Tolerances, WalkMatrices};

const CONDUCTORS: [u64; 10] = [1, 3, 4, 5, 7, 8, 9, 12, 15, 20];

fn elem(n: u64) -> impl Strategy<Value = CycloElem> {
    prop::collection::vec((-4i64..=4, 1i64..=3, 0i64..n as i64), 0..5).prop_map(move |terms| {
        CycloElem::from_terms(n, terms.into_iter().map(|(c, d, k)| (rational(c, d), k))).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (CycloElem, CycloElem, CycloElem)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| (elem(n), elem(n), elem(n)))
}

fn spec() -> impl Strategy<Value = CirculantSpec> {
    (3usize..=14)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(1i64..=(n as i64 / 2), 1..=2)))
        .prop_filter_map("disconnected", |(n, s)| CirculantSpec::symmetric(n, &s).ok().filter(|s| s.is_connected()))
}

fn graph() -> impl Strategy<Value = Graph> {
    (3usize..=8)
        .prop_flat_map(|n| {
            (Just(n), prop::collection::vec(any::<u16>(), n - 1), prop::collection::vec(any::<bool>(), n * n))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (parents[v - 1] as usize % v, v)).collect();
            for u in 0..n {
                for v in u + 1..n {
                    if extra[u * n + v] && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws((a, b, c) in triple()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&CycloElem::one(a.conductor()).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().conjugate(), a.conjugate().mul(&b.conjugate()).unwrap());
        let (za, zb) = (a.to_complex(), b.to_complex());
        prop_assert!((a.mul(&b).unwrap().to_complex() - za * zb).norm() < 1e-9);
    }

    #[test]
    fn lifting_is_a_homomorphism((a, b, _) in triple(), k in 1u64..=4) {
        let m = a.conductor() * k;
        prop_assume!(totient(m) <= 64);
        let lift = |e: &CycloElem| e.lift(m).unwrap();
        prop_assert_eq!(lift(&a.mul(&b).unwrap()), lift(&a).mul(&lift(&b)).unwrap());
        prop_assert_eq!(lift(&a.add(&b).unwrap()), lift(&a).add(&lift(&b)).unwrap());
        prop_assert!((lift(&a).to_complex() - a.to_complex()).norm() < 1e-9);
    }

    #[test]
    fn bosma_coordinates_reconstruct((a, _, _) in triple()) {
        let n = a.conductor();
        prop_assume!(n % 4 != 2 && n > 1);
        let basis = BosmaBasis::new(n, &BTreeMap::new()).unwrap();
        let coords = basis.coordinates(&a).unwrap();
        let back = CycloElem::from_terms(n, coords.into_iter().zip(basis.exponents().iter().map(|&e| e as i64))).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn crt_round_trip(n in prop::sample::select(vec![12u64, 20, 36, 45, 60, 84, 90]), x in -200i64..200) {
        let d = crt_decompose(n, x).unwrap();
        prop_assert_eq!(crt_compose(n, &d.tuple()).unwrap() as i64, x.rem_euclid(n as i64));
    }

    #[test]
    fn epsilon_map_identity(half in 1u64..=12, c in -60i64..60) {
        let l = 2 * half + 1;
        let (sign, eps) = epsilon_map(l, c).unwrap();
        let lhs = CycloElem::from_power(2 * l, c).unwrap();
        let rhs = CycloElem::from_power(2 * l, 2 * eps as i64).unwrap().scale(&rational(sign as i64, 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn walk_is_orthogonal_and_intertwines(s in spec(), z in 0i64..20) {
        let w = WalkMatrices::<f64>::new(&s.build()).unwrap();
        let utu = w.u.transpose().matmul(&w.u).unwrap();
        prop_assert!(utu.max_abs_diff(&Matrix::identity(w.arc_count())) < 1e-12);
        prop_assert!(verify_intertwining(&w, &circulant_rotation(&s, z)).unwrap() <= 1e-12);
        prop_assert!(verify_intertwining(&w, &circulant_inversion(&s)).unwrap() <= 1e-12);
        let p_exact = w.p_exact.clone().unwrap();
        let p_back: Matrix<f64> = Matrix::from_fn(s.n(), s.n(), |i, j| {
            let r: &BigRational = &p_exact[(i, j)];
            num_traits::ToPrimitive::to_f64(r).unwrap()
        });
        prop_assert!(p_back.max_abs_diff(&w.p) < 1e-15);
    }

    #[test]
    fn single_precision_walk(s in spec()) {
        let w = WalkMatrices::<f32>::new(&s.build()).unwrap();
        let mut v = w.vertex_state(0).unwrap();
        for _ in 0..20 {
            v = w.u.mul_vec(&v).unwrap();
        }
        prop_assert!((norm(&v) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn criterion_b_matches_evolution(g in graph(), tau in 1usize..16) {
        let tol = Tolerances::default();
        let inst = match Instance::<f64>::from_graph(g.clone(), &tol) {
            Ok(i) => i,
            Err(_) => return Ok(()),
        };
        let w = inst.walk();
        let t_ex = inst.chebyshev_vectors(0).unwrap().nth(tau).unwrap();
        let mut phi = w.vertex_state(0).unwrap();
        for _ in 0..tau {
            phi = w.u.mul_vec(&phi).unwrap();
        }
        for y in 0..g.vertex_count() {
            let overlap: f64 = w.vertex_state(y).unwrap().iter().zip(&phi).map(|(a, b)| a * b).sum();
            prop_assert!((overlap - t_ex[y]).abs() < 1e-10);
            let b = criterion_b_from_vector(&t_ex, y, &tol);
            prop_assert_eq!(b.holds, (overlap.abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cos_angles_are_recognized(tau in 1usize..=64, j in 0usize..=64) {
        prop_assume!(j <= tau);
        let lambda = (j as f64 * std::f64::consts::PI / tau as f64).cos();
        let w = recognize_cos_angle(lambda, None, tau).unwrap();
        prop_assert_eq!(w.j, Some(j));
        let expected = if j % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((chebyshev_scalar(tau, &lambda) - expected).abs() < 1e-9);
    }

    #[test]
    fn rational_chebyshev_matches_float(num in -5i64..=5, den in 1i64..=5, tau in 0usize..12) {
        let x = rational(num, den);
        let exact = chebyshev_scalar(tau, &x);
        let float = chebyshev_scalar(tau, &(num as f64 / den as f64));
        let e: f64 = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        prop_assert!((e - float).abs() <= 1e-9 * e.abs().max(1.0));
    }

    #[test]
    fn exact_solve(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3), b in prop::collection::vec(-5i64..=5, 3)) {
        let m: RationalMatrix = Matrix::from_fn(3, 3, |i, j| rational(rows[i][j], 1));
        let rhs: Vec<BigRational> = b.iter().map(|&v| rational(v, 1)).collect();
        match m.solve(&rhs) {
            Ok(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), rhs),
            Err(_) => prop_assert!(m.rank() < 3),
        }
    }
}
