mod oracle;

use cliffsolve::genform::{from_tensors, to_tensors, Tetrad};
use cliffsolve::linalg::{hermitian_eigenvalues, max_abs};
use cliffsolve::matrix_rep::{mul_operator, Restriction, Side, StateLayout};
use cliffsolve::sampling;
use cliffsolve::spinor_ideals::{canonical, decompose};
use cliffsolve::{Blade, IdealSet, Multivector, Parity, Signature, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn sigs() -> impl Strategy<Value = Signature> {
    prop_oneof![
        Just(Signature::new(1, 1).unwrap()),
        Just(Signature::new(1, 3).unwrap()),
        Just(Signature::new(2, 1).unwrap()),
        Just(Signature::new(1, 5).unwrap()),
    ]
}

fn lorentzian() -> impl Strategy<Value = Signature> {
    prop_oneof![
        Just(Signature::new(1, 1).unwrap()),
        Just(Signature::new(1, 3).unwrap())
    ]
}

fn scale(u: &Multivector) -> f64 {
    u.max_abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_generator_strings(s in sigs(), seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let u = oracle::random_multivector(s, &mut rng);
        let v = oracle::random_multivector(s, &mut rng);
        let expected = oracle::naive_product(&u, &v);
        let got = &u * &v;
        for (a, b) in got.coeffs().iter().zip(&expected) {
            prop_assert!((a - b).norm() <= 1e-13 * scale(&u) * scale(&v));
        }
    }

    #[test]
    fn reverse_and_dagger_are_anti_automorphisms(s in lorentzian(), seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let u = oracle::random_multivector(s, &mut rng);
        let v = oracle::random_multivector(s, &mut rng);
        let uv = &u * &v;
        let tol = 1e-13 * scale(&u) * scale(&v);
        prop_assert!(uv.reverse().dist(&(&v.reverse() * &u.reverse())) <= tol);
        prop_assert!(uv.dagger().unwrap().dist(&(&v.dagger().unwrap() * &u.dagger().unwrap())) <= tol);
        prop_assert_eq!(u.reverse().reverse(), u.clone());
        prop_assert_eq!(u.conj().conj(), u.clone());
        prop_assert_eq!(u.dagger().unwrap().dagger().unwrap(), u);
    }

    #[test]
    fn blades_are_unitary_for_the_hermitian_conjugate(s in lorentzian(), m in 0usize..16) {
        let m = m % s.size();
        let b = Multivector::blade(s, Blade::from_mask(m), C64::new(1.0, 0.0));
        prop_assert_eq!(&b.hermitian_conjugate().unwrap() * &b, Multivector::one(s));
    }

    #[test]
    fn display_parse_round_trip(s in sigs(), seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let u = oracle::random_multivector(s, &mut rng);
        let back = Multivector::parse(s, &u.to_string()).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn genvectors_satisfy_clifford_relations(seed in any::<u64>(), n in prop_oneof![Just(2usize), Just(4)]) {
        let mut rng = sampling::rng(seed);
        let s = Signature::lorentzian(n).unwrap();
        let tetrad = Tetrad::new(s, oracle::random_lorentz(n, &mut rng, 1.0)).unwrap();
        let eta = oracle::eta(n);
        let hs = tetrad.genvectors();
        for mu in 0..n {
            for nu in 0..n {
                let anti = &(&hs[mu] * &hs[nu]) + &(&hs[nu] * &hs[mu]);
                let target = Multivector::scalar(s, C64::new(2.0 * eta[(mu, nu)], 0.0));
                prop_assert!(anti.dist(&target) <= 1e-12 * scale(&anti));
            }
        }
        let beta = Multivector::generator(s, 1).unwrap();
        for h in &hs {
            let bh = &beta * h;
            prop_assert!(bh.hermitian_conjugate().unwrap().dist(&bh) <= 1e-12);
        }
    }

    #[test]
    fn genvectors_transform_with_the_tetrad(seed in any::<u64>()) {
        let s = Signature::new(1, 3).unwrap();
        let mut rng = sampling::rng(seed);
        let y = Tetrad::new(s, oracle::random_lorentz(4, &mut rng, 0.8)).unwrap();
        let lambda = oracle::random_lorentz(4, &mut rng, 0.8);
        let moved = y.transformed(&lambda).unwrap();
        let hs = y.genvectors();
        for mu in 0..4 {
            let mut expected = Multivector::zero(s);
            for nu in 0..4 {
                expected = &expected + &hs[nu].scale(C64::new(lambda[(mu, nu)], 0.0));
            }
            prop_assert!(moved.genvector(mu + 1).unwrap().dist(&expected) <= 1e-12 * scale(&expected));
        }
    }

    #[test]
    fn tensor_components_round_trip(seed in any::<u64>()) {
        let s = Signature::new(1, 3).unwrap();
        let mut rng = sampling::rng(seed);
        let y = Tetrad::new(s, oracle::random_lorentz(4, &mut rng, 0.7)).unwrap();
        let u = oracle::random_multivector(s, &mut rng);
        let back = from_tensors(&to_tensors(&u, &y).unwrap(), &y).unwrap();
        prop_assert!(back.dist(&u) <= 1e-11 * scale(&u));
    }

    #[test]
    fn right_multiplication_adjoint_law(s in lorentzian(), seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let b = oracle::random_multivector(s, &mut rng);
        let r = mul_operator(&b, Side::Right, Restriction::Full).unwrap();
        let rd = mul_operator(&b.hermitian_conjugate().unwrap(), Side::Right, Restriction::Full).unwrap();
        let l = mul_operator(&b, Side::Left, Restriction::Full).unwrap();
        let ld = mul_operator(&b.hermitian_conjugate().unwrap(), Side::Left, Restriction::Full).unwrap();
        prop_assert!(max_abs(&(r.adjoint().into_matrix() - rd.into_matrix())) <= 1e-12 * scale(&b));
        prop_assert!(max_abs(&(l.adjoint().into_matrix() - ld.into_matrix())) <= 1e-12 * scale(&b));
    }

    #[test]
    fn parity_blocks_are_principal_submatrices(seed in any::<u64>(), odd in any::<bool>()) {
        let s = Signature::new(1, 3).unwrap();
        let mut rng = sampling::rng(seed);
        let y = Tetrad::new(s, oracle::random_lorentz(4, &mut rng, 0.8)).unwrap();
        let p = if odd { Parity::Odd } else { Parity::Even };
        let bh = &Multivector::generator(s, 1).unwrap() * &y.genvector(1).unwrap();
        let full = mul_operator(&bh, Side::Left, Restriction::Full).unwrap();
        let sub = mul_operator(&bh, Side::Left, Restriction::Within(p)).unwrap();
        let layout = StateLayout::parity(s, p);
        prop_assert_eq!(full.block(&layout, &layout).into_matrix(), sub.clone().into_matrix());
        prop_assert!(hermitian_eigenvalues(&sub).unwrap()[0] > 0.0);
    }

    #[test]
    fn ideal_closure_properties(seed in any::<u64>(), which in 1usize..4) {
        let s = Signature::new(1, 3).unwrap();
        let t = canonical(s, &format!("t{which}")).unwrap();
        let mut rng = sampling::rng(seed);
        let a = oracle::random_multivector(s, &mut rng);
        let u = sampling::ideal_element(&t, &mut rng, 1.0);
        let k = &(t.element() * &oracle::random_multivector(s, &mut rng)) * t.element();
        let m = cliffsolve::spinor_ideals::membership(&(&a * &u), &t, IdealSet::I).unwrap();
        prop_assert!(m.residual <= 1e-12 * scale(&a) * scale(&u));
        let m = cliffsolve::spinor_ideals::membership(&(&u * &k), &t, IdealSet::I).unwrap();
        prop_assert!(m.residual <= 1e-12 * scale(&u) * scale(&k));
        let (phi, phi_dual) = decompose(&a, &t);
        prop_assert!((&phi * t.dual_element()).max_abs() <= 1e-13 * scale(&a));
        prop_assert!((&phi_dual * t.element()).max_abs() <= 1e-13 * scale(&a));
        prop_assert!((&phi + &phi_dual).dist(&a) <= 1e-13 * scale(&a));
    }
}

#[test]
fn proper_orthochronous_tetrads_give_positive_h1() {
    let mut rng = sampling::rng(17);
    for n in [2, 4] {
        let s = Signature::lorentzian(n).unwrap();
        let beta = Multivector::generator(s, 1).unwrap();
        for _ in 0..100 {
            let y = sampling::proper_tetrad(s, &mut rng, 1.0).unwrap();
            let bh1 = &beta * &y.genvector(1).unwrap();
            let l = mul_operator(&bh1, Side::Left, Restriction::Full).unwrap();
            assert!(hermitian_eigenvalues(&l).unwrap()[0] > 0.0);
        }
    }
}

#[test]
fn time_reversing_tetrad_gives_negative_h1() {
    let s = Signature::new(1, 3).unwrap();
    let flip = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
    let y = Tetrad::new(s, flip).unwrap();
    let bh1 = &Multivector::generator(s, 1).unwrap() * &y.genvector(1).unwrap();
    let l = mul_operator(&bh1, Side::Left, Restriction::Full).unwrap();
    assert!(hermitian_eigenvalues(&l).unwrap().iter().all(|v| (*v + 1.0).abs() <= 1e-14));
}
