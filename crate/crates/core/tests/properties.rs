use std::sync::{Arc, OnceLock};

use hermgrass_core::codebuild::{
    apply_permutation, automorphism_permutation, conjugate_codeword, generator_hermitian,
    Automorphism,
};
use hermgrass_core::hermitian::{congruence, random_invertible, translate};
use hermgrass_core::minors::basis;
use hermgrass_core::{
    FieldElement, FieldTower, GeneratorMatrix, HermitianIndexing, MinorCombination, MinorIndex,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

fn towers() -> &'static Vec<Arc<FieldTower>> {
    static T: OnceLock<Vec<Arc<FieldTower>>> = OnceLock::new();
    T.get_or_init(|| QS.iter().map(|&q| Arc::new(FieldTower::for_q(q).unwrap())).collect())
}

fn code(ell: usize, q: u32) -> &'static GeneratorMatrix {
    static C: OnceLock<Vec<((usize, u32), GeneratorMatrix)>> = OnceLock::new();
    let all = C.get_or_init(|| {
        [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)]
            .into_iter()
            .map(|(l, q)| ((l, q), generator_hermitian(l, q).unwrap()))
            .collect()
    });
    &all.iter().find(|(k, _)| *k == (ell, q)).unwrap().1
}

fn tower_and_elems(n: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0..QS.len()).prop_flat_map(move |t| {
        let order = QS[t] * QS[t];
        (Just(t), prop::collection::vec(0..order, n))
    })
}

proptest! {
    #[test]
    fn ring_laws((t, xs) in tower_and_elems(3)) {
        let f = &towers()[t];
        let [a, b, c] = [0, 1, 2].map(|i| f.element(xs[i]).unwrap());
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism((t, xs) in tower_and_elems(2)) {
        let f = &towers()[t];
        let (a, b) = (f.element(xs[0]).unwrap(), f.element(xs[1]).unwrap());
        prop_assert_eq!(f.conjugate(f.add(a, b)), f.add(f.conjugate(a), f.conjugate(b)));
        prop_assert_eq!(f.conjugate(f.mul(a, b)), f.mul(f.conjugate(a), f.conjugate(b)));
        prop_assert_eq!(f.conjugate(f.conjugate(a)), a);
        prop_assert_eq!(f.in_subfield(a), f.conjugate(a) == a);
        prop_assert!(f.in_subfield(f.trace(a)) && f.in_subfield(f.norm(a)));
        prop_assert_eq!(f.norm(f.mul(a, b)), f.mul(f.norm(a), f.norm(b)));
    }

    #[test]
    fn hermitian_index_round_trip(t in 0usize..4, ell in 1usize..=3, seed in any::<u64>()) {
        let tower = towers()[t].clone();
        let idx = HermitianIndexing::new(tower.clone(), ell).unwrap();
        let i = seed % idx.total();
        let h = idx.index_to_matrix(i).unwrap();
        prop_assert!(h.matrix().is_hermitian(&tower));
        prop_assert_eq!(idx.matrix_to_index(&h).unwrap(), i);
    }

    #[test]
    fn conjugate_minor_identity(ell in 1usize..=3, seed in any::<u64>()) {
        let tower = towers()[1].clone();
        let idx = HermitianIndexing::new(tower.clone(), ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = idx.random(&mut rng);
        for &m in basis(ell).unwrap().minors() {
            prop_assert_eq!(
                m.transposed().eval(&tower, h.matrix()),
                tower.conjugate(m.eval(&tower, h.matrix()))
            );
        }
    }

    #[test]
    fn congruence_preserves_rank(t in 0usize..3, ell in 1usize..=3, seed in any::<u64>()) {
        let f = &towers()[t];
        let idx = HermitianIndexing::new(f.clone(), ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = idx.random(&mut rng);
        let a = random_invertible(f, ell, &mut rng);
        let moved = congruence(f, &a, &h).unwrap();
        prop_assert_eq!(moved.rank(f), h.rank(f));
        let m = idx.random(&mut rng);
        let there = translate(f, &h, &m).unwrap();
        let neg = hermitian_core_neg(f, &m);
        prop_assert_eq!(translate(f, &there, &neg).unwrap(), h);
    }

    #[test]
    fn maximal_minors_form_an_antichain(ell in 1usize..=4, mask in any::<u64>()) {
        let b = basis(ell).unwrap();
        let terms = b
            .minors()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, &m)| (m, FieldElement::ONE));
        let comb = MinorCombination::from_terms(ell, terms).unwrap();
        let max = comb.maximal_minors();
        for (i, a) in max.iter().enumerate() {
            for (j, b) in max.iter().enumerate() {
                prop_assert!(i == j || !a.contains(*b));
            }
        }
        for s in comb.support() {
            prop_assert!(max.iter().any(|m| m.contains(s)));
        }
    }

    #[test]
    fn minor_index_text_round_trip(rows in 0u8..16, cols in 0u8..16) {
        let r: Vec<usize> = (1..=4).filter(|i| rows >> (i - 1) & 1 == 1).collect();
        let c: Vec<usize> = (1..=4).filter(|i| cols >> (i - 1) & 1 == 1).collect();
        if let Ok(m) = MinorIndex::new(&r, &c) {
            prop_assert_eq!(m.to_string().parse::<MinorIndex>().unwrap(), m);
            prop_assert_eq!(m.rows(), r);
        } else {
            prop_assert_ne!(r.len(), c.len());
        }
    }

    #[test]
    fn interpolation_inverts_encoding(which in 0usize..5, seed in any::<u64>()) {
        let (ell, q) = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)][which];
        let g = code(ell, q);
        let f = g.tower();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg = hermgrass_core::hermitian::random_vector(f, g.k(), &mut rng);
        let comb = MinorCombination::from_coefficients(g.basis(), &msg).unwrap();
        let c = g.encode(&msg).unwrap();
        prop_assert_eq!(g.encode_combination(&comb).unwrap(), c.clone());
        prop_assert_eq!(g.interpolate(&c).unwrap(), comb);
        prop_assert_eq!(g.solve(&c).unwrap(), msg);
    }

    #[test]
    fn code_is_closed_under_symmetries(which in 2usize..5, seed in any::<u64>()) {
        let (ell, q) = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)][which];
        let g = code(ell, q);
        let f = g.tower();
        let idx = g.hermitian_indexing().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = g.encode(&hermgrass_core::hermitian::random_vector(f, g.k(), &mut rng)).unwrap();
        prop_assert!(g.contains(&conjugate_codeword(f, &c)));
        for kind in [
            Automorphism::Congruence(random_invertible(f, ell, &mut rng)),
            Automorphism::Translate(idx.random(&mut rng)),
            Automorphism::Transpose,
        ] {
            let perm = automorphism_permutation(idx, &kind).unwrap();
            let moved = apply_permutation(&c, &perm).unwrap();
            prop_assert_eq!(moved.weight(), c.weight());
            prop_assert!(g.contains(&moved));
        }
    }
}

fn hermitian_core_neg(f: &FieldTower, m: &hermgrass_core::HermitianMatrix) -> hermgrass_core::HermitianMatrix {
    hermgrass_core::HermitianMatrix::new(f, m.matrix().scale(f, f.neg(FieldElement::ONE))).unwrap()
}
