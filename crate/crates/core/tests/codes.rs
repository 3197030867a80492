use std::sync::Arc;

use hermgrass_core::analysis::dual::dual_support_families;
use hermgrass_core::analysis::lemmas::{classify_weights_l2, verify_hyperbolic};
use hermgrass_core::analysis::{
    d_affine_formula, d_hermitian_formula, dual_min_distance, is_dual_word, min_distance_exhaustive,
    min_distance_subfield_default, weight_of_function,
};
use hermgrass_core::codebuild::io::{read_generator, write_generator};
use hermgrass_core::codebuild::{binomial, generator_affine_grassmann, generator_hermitian};
use hermgrass_core::hermitian::{count_invertible, count_invertible_bruteforce};
use hermgrass_core::{FieldElement, FieldTower, MinorCombination, MinorIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BIG: u128 = 1 << 40;

#[test]
fn dimensions_and_ranks() {
    for (ell, q) in [(1, 2), (1, 5), (2, 2), (2, 3), (2, 4), (2, 5), (3, 2)] {
        let g = generator_hermitian(ell, q).unwrap();
        assert_eq!(g.rank(), binomial(2 * ell as u64, ell as u64) as usize);
        assert_eq!(g.n() as u128, (q as u128).pow((ell * ell) as u32));
    }
}

#[test]
fn subfield_matches_exhaustive_l2() {
    for q in [2, 3] {
        let g = generator_hermitian(2, q).unwrap();
        let sub = min_distance_subfield_default(&g, BIG).unwrap();
        let full = min_distance_exhaustive(&g, BIG).unwrap();
        assert_eq!(sub.d, full.d);
        assert_eq!(Some(sub.d), d_hermitian_formula(2, q as u64));
        let a = generator_affine_grassmann(2, q).unwrap();
        let da = min_distance_exhaustive(&a, BIG).unwrap().d;
        assert_eq!(da, d_affine_formula(2, q as u64));
        assert!(sub.d >= da);
    }
}

#[test]
fn distance_l2_q4_q5_by_subfield() {
    for (q, d) in [(4, 188), (5, 495)] {
        let g = generator_hermitian(2, q).unwrap();
        assert_eq!(min_distance_subfield_default(&g, BIG).unwrap().d, d);
    }
}

#[test]
fn distance_l3_q2_and_witness() {
    let g = generator_hermitian(3, 2).unwrap();
    let cert = min_distance_subfield_default(&g, BIG).unwrap();
    assert_eq!(cert.d, 192);
    assert_eq!(cert.messages, (1 << 20) - 1);
    let witness = MinorCombination::from_terms(
        3,
        [
            (MinorIndex::principal(&[1, 2]).unwrap(), FieldElement::ONE),
            (MinorIndex::EMPTY, FieldElement::ONE),
        ],
    )
    .unwrap();
    assert_eq!(weight_of_function(&witness, 2).unwrap(), 192);
}

#[test]
fn invertible_counts() {
    for (ell, q) in [(1, 2), (1, 9), (2, 2), (2, 3), (3, 2)] {
        let tower = Arc::new(FieldTower::for_q(q).unwrap());
        assert_eq!(
            count_invertible_bruteforce(tower, ell).unwrap() as u128,
            count_invertible(ell as u32, q as u64)
        );
    }
}

#[test]
fn dual_distances_small() {
    for (ell, q, d) in [(2, 2, 4), (2, 3, 3), (3, 2, 4)] {
        let g = generator_hermitian(ell, q).unwrap();
        let cert = dual_min_distance(&g, 4, 1 << 30).unwrap();
        assert_eq!(cert.d_dual, d);
        assert!(is_dual_word(&g, &cert.dependent_columns, &cert.coefficients));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for w in dual_support_families(&g, 10, &mut rng).unwrap() {
            assert!(w.orthogonal);
            assert_eq!(w.weight(), d);
        }
    }
}

#[test]
fn lemma_checks() {
    for q in [2, 3, 4] {
        assert_eq!(verify_hyperbolic(&FieldTower::for_q(q).unwrap()).1, None);
    }
    let c = classify_weights_l2(Arc::new(FieldTower::for_q(2).unwrap())).unwrap();
    assert!(c.only_two_weights);
}

#[test]
fn generator_file_round_trip() {
    let g = generator_hermitian(2, 3).unwrap();
    let mut buf = Vec::new();
    write_generator(&g, &mut buf).unwrap();
    let back = read_generator(buf.as_slice()).unwrap();
    assert_eq!(back.rows(), g.rows());
    assert_eq!(back.spec(), g.spec());
    let mut again = Vec::new();
    write_generator(&back, &mut again).unwrap();
    assert_eq!(again, buf);
}
