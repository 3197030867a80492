//! Executable checks of the counting lemmas, weight classifiers and reduction steps used
//! to derive the minimum distance of C^H(ell).

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::distance::weight_over;
use crate::codebuild::{
    apply_permutation, automorphism_permutation, fq_basis, Automorphism, CodeFamily,
    GeneratorMatrix,
};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};
use crate::hermitian::{self, count_invertible, HermitianMatrix, SquareMatrix};
use crate::minors::{MinorCombination, MinorIndex};

fn require_subfield(f: &FieldTower, xs: &[FieldElement]) -> Result<()> {
    if xs.iter().all(|&x| f.in_subfield(x)) {
        Ok(())
    } else {
        Err(Error::NotInSubfield)
    }
}

/// Solutions `(x1, x2) in F_q^2` of `(x1 + a)(x2 + b) = lambda`: `(formula, brute force)`.
///
/// The formula is `2q - 1` when `lambda = 0` and `q - 1` otherwise.
pub fn hyperbolic_zero_count(
    f: &FieldTower,
    a: FieldElement,
    b: FieldElement,
    lambda: FieldElement,
) -> Result<(u64, u64)> {
    require_subfield(f, &[a, b, lambda])?;
    let q = f.q() as u64;
    let formula = if lambda.is_zero() { 2 * q - 1 } else { q - 1 };
    let sub = f.subfield();
    let brute = sub
        .iter()
        .flat_map(|&x1| sub.iter().map(move |&x2| (x1, x2)))
        .filter(|&(x1, x2)| f.mul(f.add(x1, a), f.add(x2, b)) == lambda)
        .count() as u64;
    Ok((formula, brute))
}

/// Checks the hyperbolic count for every `(a, b, lambda) in F_q^3`; returns the number of
/// triples checked and the first disagreement, if any.
pub fn verify_hyperbolic(f: &FieldTower) -> (u64, Option<(FieldElement, FieldElement, FieldElement)>) {
    let sub = f.subfield();
    let mut checked = 0;
    for &a in sub {
        for &b in sub {
            for &l in sub {
                checked += 1;
                let (formula, brute) = hyperbolic_zero_count(f, a, b, l).expect("subfield inputs");
                if formula != brute {
                    return (checked, Some((a, b, l)));
                }
            }
        }
    }
    (checked, None)
}

/// Solutions in `F_{q^2}^n` of `X_i^(q+1) = a_i` and `X_i X_j^q = b_ij` (`i != j`).
///
/// The diagonal of `b` is not used: the diagonal equations are the `a_i`.
pub fn system_solution_count(f: &FieldTower, a: &[FieldElement], b: &[Vec<FieldElement>]) -> Result<u64> {
    let n = a.len();
    if !(1..=3).contains(&n) {
        return Err(Error::Precondition(format!("system size {n} outside 1..=3")));
    }
    if b.len() != n || b.iter().any(|r| r.len() != n) {
        return Err(Error::SizeMismatch {
            expected: n,
            found: b.len(),
        });
    }
    require_subfield(f, a)?;
    let order = f.order() as u64;
    let total = order.pow(n as u32);
    Ok((0..total)
        .into_par_iter()
        .filter(|&code| {
            let mut rest = code;
            let x: Vec<FieldElement> = (0..n)
                .map(|_| {
                    let v = f.element((rest % order) as u32).expect("in range");
                    rest /= order;
                    v
                })
                .collect();
            (0..n).all(|i| {
                f.norm(x[i]) == a[i]
                    && (0..n).all(|j| i == j || f.mul(x[i], f.conjugate(x[j])) == b[i][j])
            })
        })
        .count() as u64)
}

/// A random system; half the time built from a planted solution so it is consistent.
pub fn random_system(f: &FieldTower, n: usize, rng: &mut impl Rng) -> (Vec<FieldElement>, Vec<Vec<FieldElement>>) {
    if rng.random_bool(0.5) {
        let x = hermitian::random_vector(f, n, rng);
        let a = x.iter().map(|&v| f.norm(v)).collect();
        let b = (0..n)
            .map(|i| (0..n).map(|j| f.mul(x[i], f.conjugate(x[j]))).collect())
            .collect();
        (a, b)
    } else {
        let sub = f.subfield();
        let a = (0..n).map(|_| sub[rng.random_range(0..sub.len())]).collect();
        let b = (0..n).map(|_| hermitian::random_vector(f, n, rng)).collect();
        (a, b)
    }
}

/// Weights of every self-conjugate `f = det + f11 X11 + f22 X22 + f12 X12 + f12^q X21 + f0`
/// at ell = 2, with the two candidate predicates for the larger weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L2Classification {
    pub q: u32,
    pub functions: u64,
    /// weight -> number of functions.
    pub weights: BTreeMap<u64, u64>,
    /// `q^4 - q^3 + q^2 - q`.
    pub high: u64,
    /// `q^4 - q^3 - q`.
    pub low: u64,
    pub only_two_weights: bool,
    /// `f0 + N(f12) - f11 f22 = 0` holds exactly when the weight is `high`.
    pub statement_predicate_matches: bool,
    /// `N(f12) - f0 + f11 f22 = 0` holds exactly when the weight is `high`.
    pub proof_predicate_matches: bool,
}

pub fn classify_weights_l2(tower: Arc<FieldTower>) -> Result<L2Classification> {
    let f = &*tower;
    let q = f.q() as u64;
    if q > 4 {
        return Err(Error::Precondition(format!("q = {q} exceeds 4")));
    }
    let m = |r: &[usize], c: &[usize]| MinorIndex::new(r, c).expect("valid");
    let (det, x11, x12, x21, x22) = (
        m(&[1, 2], &[1, 2]),
        m(&[1], &[1]),
        m(&[1], &[2]),
        m(&[2], &[1]),
        m(&[2], &[2]),
    );
    let sub = f.subfield();
    let mut cases = Vec::new();
    for &f0 in sub {
        for &f11 in sub {
            for &f22 in sub {
                for f12 in f.elements() {
                    cases.push((f0, f11, f22, f12));
                }
            }
        }
    }
    let results: Vec<(u64, bool, bool)> = cases
        .par_iter()
        .map(|&(f0, f11, f22, f12)| {
            let comb = MinorCombination::from_terms(
                2,
                [
                    (det, FieldElement::ONE),
                    (x11, f11),
                    (x22, f22),
                    (x12, f12),
                    (x21, f.conjugate(f12)),
                    (MinorIndex::EMPTY, f0),
                ],
            )
            .expect("valid terms");
            let w = weight_over(tower.clone(), CodeFamily::Hermitian, &comb, u128::MAX)
                .expect("tiny space");
            let prod = f.mul(f11, f22);
            let statement = f.sub(f.add(f0, f.norm(f12)), prod).is_zero();
            let proof = f.add(f.sub(f.norm(f12), f0), prod).is_zero();
            (w, statement, proof)
        })
        .collect();
    let high = q.pow(4) - q.pow(3) + q * q - q;
    let low = q.pow(4) - q.pow(3) - q;
    let mut weights = BTreeMap::new();
    for &(w, _, _) in &results {
        *weights.entry(w).or_insert(0) += 1;
    }
    Ok(L2Classification {
        q: q as u32,
        functions: results.len() as u64,
        only_two_weights: weights.keys().all(|&w| w == high || w == low),
        statement_predicate_matches: results.iter().all(|&(w, s, _)| s == (w == high)),
        proof_predicate_matches: results.iter().all(|&(w, _, p)| p == (w == high)),
        weights,
        high,
        low,
    })
}

/// Weights of `det + a1 X11 + a2 X22 + a3 X33 + a4` at ell = 3 and the closed forms
/// they are compared with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L3Bounds {
    pub q: u32,
    /// `(a1, a2, a3, a4)` as element indices, with the weight.
    pub family: Vec<([u32; 4], u64)>,
    pub min_weight: u64,
    /// `q^9 - q^8 - q^6 + q^5 - q^4 + q^3`.
    pub bound: i128,
    pub weight_det: u64,
    /// Weights of `det + c` for each nonzero `c in F_q`.
    pub weight_det_plus_constant: Vec<u64>,
    /// `q^3 (q - 1)(q^2 + 1)(q^3 - 1)`, the number of invertible Hermitian 3 x 3 matrices.
    pub det_factored: i128,
    /// `q^9 - q^8 + q^7 - 2q^6 - q^4 + q^3`.
    pub det_expanded: i128,
    /// `q^9 - q^8 - q^6 + q^5 + q^3`.
    pub det_plus_constant_formula: i128,
}

pub fn verify_l3_bounds(tower: Arc<FieldTower>, point_budget: u128) -> Result<L3Bounds> {
    let f = &*tower;
    let sub = f.subfield();
    let diag = |i: usize| MinorIndex::principal(&[i]).expect("valid");
    let det = MinorIndex::principal(&[1, 2, 3]).expect("valid");
    let mut family = Vec::new();
    for &a4 in sub {
        for &a3 in sub {
            for &a2 in sub {
                for &a1 in sub {
                    let comb = MinorCombination::from_terms(
                        3,
                        [
                            (det, FieldElement::ONE),
                            (diag(1), a1),
                            (diag(2), a2),
                            (diag(3), a3),
                            (MinorIndex::EMPTY, a4),
                        ],
                    )?;
                    let w = weight_over(tower.clone(), CodeFamily::Hermitian, &comb, point_budget)?;
                    family.push(([a1.index(), a2.index(), a3.index(), a4.index()], w));
                }
            }
        }
    }
    let weight_det = family
        .iter()
        .find(|(c, _)| c.iter().all(|&x| x == 0))
        .map(|&(_, w)| w)
        .expect("zero coefficients present");
    let weight_det_plus_constant = sub[1..]
        .iter()
        .map(|c| {
            family
                .iter()
                .find(|(k, _)| k[..3].iter().all(|&x| x == 0) && k[3] == c.index())
                .map(|&(_, w)| w)
                .expect("present")
        })
        .collect();
    let q = f.q() as i128;
    Ok(L3Bounds {
        q: f.q(),
        min_weight: family.iter().map(|&(_, w)| w).min().expect("nonempty"),
        family,
        bound: q.pow(9) - q.pow(8) - q.pow(6) + q.pow(5) - q.pow(4) + q.pow(3),
        weight_det,
        weight_det_plus_constant,
        det_factored: count_invertible(3, q as u64) as i128,
        det_expanded: q.pow(9) - q.pow(8) + q.pow(7) - 2 * q.pow(6) - q.pow(4) + q.pow(3),
        det_plus_constant_formula: q.pow(9) - q.pow(8) - q.pow(6) + q.pow(5) + q.pow(3),
    })
}

/// `q^(k^2) - q^(k^2-1) - q^(k^2-3) + q^(k^2-2k) - 1`, the lower bound on `w_{k,k}` (k >= 2).
pub fn wkk_bound(k: u32, q: u64) -> Option<i128> {
    if k < 2 {
        return None;
    }
    let q = q as i128;
    let e = k * k;
    Some(q.pow(e) - q.pow(e - 1) - q.pow(e - 3) + q.pow(e - 2 * k) - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxMinorReport {
    pub ell: usize,
    pub k: usize,
    pub q: u32,
    pub self_conjugate_only: bool,
    pub exhaustive: bool,
    pub functions: u64,
    /// Minimum weight found over functions having a maximal minor of size exactly k.
    pub min_weight: Option<u64>,
    pub bound: Option<i128>,
}

fn has_maximal_of_size(comb: &MinorCombination, k: usize) -> bool {
    comb.maximal_minors().iter().any(|m| m.size() == k)
}

/// Minimum weight over `f` whose support has a maximal minor of size exactly `k`.
///
/// Exhaustive for ell = 2 and q <= 3; otherwise `samples` random functions are drawn,
/// so the result is an upper bound on the true minimum.
pub fn min_weight_by_max_minor(
    g: &GeneratorMatrix,
    k: usize,
    self_conjugate_only: bool,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<MaxMinorReport> {
    let spec = g.spec();
    let f = g.tower();
    if k > spec.ell {
        return Err(Error::Precondition(format!("k = {k} exceeds ell = {}", spec.ell)));
    }
    let parts: Vec<MinorCombination> = if self_conjugate_only {
        fq_basis(f, spec.ell)?
    } else {
        g.basis()
            .minors()
            .iter()
            .map(|&m| MinorCombination::single(spec.ell, m, FieldElement::ONE))
            .collect::<Result<_>>()?
    };
    let scalars: Vec<FieldElement> = if self_conjugate_only {
        f.subfield().to_vec()
    } else {
        f.elements().collect()
    };
    let words: Vec<Vec<FieldElement>> = parts
        .iter()
        .map(|p| g.encode_combination(p).map(|c| c.symbols))
        .collect::<Result<_>>()?;
    let ns = scalars.len() as u64;
    let exhaustive = spec.ell == 2 && spec.q <= 3;
    let total = ns.pow(parts.len() as u32);
    let evaluate = |digits: &[FieldElement]| -> Option<u64> {
        let comb = parts
            .iter()
            .zip(digits)
            .fold(MinorCombination::zero(spec.ell), |acc, (p, &c)| {
                acc.add(f, &p.scale(f, c)).expect("same ell")
            });
        if comb.is_zero() || !has_maximal_of_size(&comb, k) {
            return None;
        }
        let w = (0..g.n())
            .filter(|&t| {
                !f.sum(words.iter().zip(digits).map(|(w, &c)| f.mul(c, w[t]))).is_zero()
            })
            .count();
        Some(w as u64)
    };
    let (functions, min_weight) = if exhaustive {
        let found: Vec<u64> = (1..total)
            .into_par_iter()
            .filter_map(|code| {
                let mut rest = code;
                let digits: Vec<FieldElement> = (0..parts.len())
                    .map(|_| {
                        let d = scalars[(rest % ns) as usize];
                        rest /= ns;
                        d
                    })
                    .collect();
                evaluate(&digits)
            })
            .collect();
        (found.len() as u64, found.into_iter().min())
    } else {
        let mut found = Vec::new();
        for _ in 0..samples {
            let digits: Vec<FieldElement> = (0..parts.len())
                .map(|_| {
                    if rng.random_bool(0.5) {
                        FieldElement::ZERO
                    } else {
                        scalars[rng.random_range(0..scalars.len())]
                    }
                })
                .collect();
            if let Some(w) = evaluate(&digits) {
                found.push(w);
            }
        }
        (found.len() as u64, found.into_iter().min())
    };
    Ok(MaxMinorReport {
        ell: spec.ell,
        k,
        q: spec.q,
        self_conjugate_only,
        exhaustive,
        functions,
        min_weight,
        bound: if k == spec.ell { wkk_bound(k as u32, spec.q as u64) } else { None },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearingReport {
    pub translation: HermitianMatrix,
    pub translated: MinorCombination,
    /// No minor of size `|I| - 1` with rows and columns inside `I` survives.
    pub cleared: bool,
}

/// Translates `f` by the matrix `H` with `H_ij = (-1)^(i+j+1) f_{I-{i}, I-{j}}` (positions
/// `i, j` taken within `I`) and checks the `(|I|-1)`-minors inside `I` vanish.
pub fn verify_translation_clearing(
    g: &GeneratorMatrix,
    comb: &MinorCombination,
    set: &[usize],
) -> Result<ClearingReport> {
    let f = g.tower();
    let idx = g
        .hermitian_indexing()
        .ok_or_else(|| Error::Precondition("translation clearing needs the Hermitian code".into()))?;
    if !comb.is_self_conjugate(f) {
        return Err(Error::NotSelfConjugate);
    }
    let principal = MinorIndex::principal(set)?;
    if !comb.maximal_minors().contains(&principal) {
        return Err(Error::MinorNotMaximal(principal.to_string()));
    }
    let lead = comb.coefficient(principal);
    let normalized = comb.scale(f, f.inv(lead)?);
    let ell = g.spec().ell;
    let mut h = SquareMatrix::zeros(ell);
    for (pi, &i) in set.iter().enumerate() {
        for (pj, &j) in set.iter().enumerate() {
            let rows: Vec<usize> = set.iter().copied().filter(|&x| x != i).collect();
            let cols: Vec<usize> = set.iter().copied().filter(|&x| x != j).collect();
            let c = normalized.coefficient(MinorIndex::new(&rows, &cols)?);
            let v = if (pi + pj) % 2 == 0 { f.neg(c) } else { c };
            h.set(i - 1, j - 1, v);
        }
    }
    let translation = HermitianMatrix::new(f, h)?;
    let perm = automorphism_permutation(idx, &Automorphism::Translate(translation.clone()))?;
    let moved = apply_permutation(&g.encode_combination(&normalized)?, &perm)?;
    let translated = g.interpolate(&moved)?;
    let inside = |m: &MinorIndex| {
        m.size() + 1 == set.len() && m.row_mask() & !principal.row_mask() == 0 && m.col_mask() & !principal.col_mask() == 0
    };
    let cleared = !translated.support().iter().any(inside);
    Ok(ClearingReport {
        translation,
        translated,
        cleared,
    })
}

/// Sign and index set after replacing `old` by `new` in the sorted set `mask`.
fn replace_in(mask: u8, old: usize, new: usize) -> Option<(u8, bool)> {
    let (ob, nb) = (1u8 << (old - 1), 1u8 << (new - 1));
    if mask & ob == 0 || mask & nb != 0 {
        return None;
    }
    let (lo, hi) = (old.min(new), old.max(new));
    let between = (lo + 1..hi).filter(|&x| mask & (1 << (x - 1)) != 0).count();
    Some(((mask & !ob) | nb, between % 2 == 1))
}

/// `f(A* X A)` for `A = Id + lambda E_{r,c}`, expanded by multilinearity of each minor in
/// its rows and columns.
///
/// Rows of `A* X` are those of `X` except row `c`, which gains `lambda^q` times row `r`;
/// columns of `X A` likewise gain `lambda` times column `r` in column `c`.
pub fn elementary_congruence_expansion(
    f: &FieldTower,
    comb: &MinorCombination,
    r: usize,
    c: usize,
    lambda: FieldElement,
) -> Result<MinorCombination> {
    if r == c {
        return Err(Error::Precondition("r and c must differ".into()));
    }
    let lq = f.conjugate(lambda);
    let mut out = MinorCombination::zero(comb.ell());
    for (m, coeff) in comb.terms() {
        let mut row_terms = vec![(m.row_mask(), coeff)];
        if let Some((rows, neg)) = replace_in(m.row_mask(), c, r) {
            let v = f.mul(coeff, lq);
            row_terms.push((rows, if neg { f.neg(v) } else { v }));
        }
        for (rows, v) in row_terms {
            out.add_term(f, MinorIndex::from_masks(rows, m.col_mask()), v)?;
            if let Some((cols, neg)) = replace_in(m.col_mask(), c, r) {
                let w = f.mul(v, lambda);
                out.add_term(f, MinorIndex::from_masks(rows, cols), if neg { f.neg(w) } else { w })?;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadReduction {
    /// The maximal minor of minimal spread that was targeted.
    pub target: MinorIndex,
    pub spread: usize,
    pub lambda: FieldElement,
    pub matrix: SquareMatrix,
    pub result: MinorCombination,
    /// Spread of the smallest-spread size-k minor in the result.
    pub new_spread: usize,
    pub weight_before: usize,
    pub weight_after: usize,
}

/// One spread-reducing congruence `H -> A* H A` with `A = Id + lambda E_{r,c}`.
///
/// The target is the size-k maximal minor `(I, J)` of smallest spread (k the largest
/// maximal size); `r` is the least element of `I - J` and `c` of `J - I`. Values of
/// lambda are tried in index order until the interpolated result contains a size-k minor
/// of spread at most `s - 1`.
pub fn spread_reduction_step(g: &GeneratorMatrix, comb: &MinorCombination) -> Result<SpreadReduction> {
    let f = g.tower();
    let idx = g
        .hermitian_indexing()
        .ok_or_else(|| Error::Precondition("spread reduction needs the Hermitian code".into()))?;
    let maximal = comb.maximal_minors();
    let k = maximal.iter().map(|m| m.size()).max().unwrap_or(0);
    let target = *maximal
        .iter()
        .filter(|m| m.size() == k)
        .min_by_key(|m| (m.spread(), **m))
        .ok_or_else(|| Error::Precondition("zero function".into()))?;
    let s = target.spread();
    if s == k {
        return Err(Error::Precondition(format!(
            "{target} already has spread equal to its size"
        )));
    }
    let only = |a: u8, b: u8| (1..=8).find(|&x| a & !b & (1 << (x - 1)) != 0).expect("nonempty");
    let r = only(target.row_mask(), target.col_mask());
    let c = only(target.col_mask(), target.row_mask());
    let before = g.encode_combination(comb)?;
    let ell = g.spec().ell;
    for lambda in f.nonzero_elements() {
        let mut a = SquareMatrix::identity(ell);
        a.set(r - 1, c - 1, lambda);
        let perm = automorphism_permutation(idx, &Automorphism::Congruence(a.clone()))?;
        let moved = apply_permutation(&before, &perm)?;
        let result = g.interpolate(&moved)?;
        let best = result
            .support()
            .into_iter()
            .filter(|m| m.size() == k)
            .map(|m| m.spread())
            .min();
        if let Some(new_spread) = best.filter(|&sp| sp < s) {
            return Ok(SpreadReduction {
                target,
                spread: s,
                lambda,
                matrix: a,
                result,
                new_spread,
                weight_before: before.weight(),
                weight_after: moved.weight(),
            });
        }
    }
    Err(Error::NoValidLambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebuild::generator_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower(q: u32) -> Arc<FieldTower> {
        Arc::new(FieldTower::for_q(q).unwrap())
    }

    #[test]
    fn hyperbolic_examples() {
        let f = tower(3);
        let (z, o) = (FieldElement::ZERO, FieldElement::ONE);
        assert_eq!(hyperbolic_zero_count(&f, z, z, z).unwrap(), (5, 5));
        assert_eq!(hyperbolic_zero_count(&f, o, z, o).unwrap(), (2, 2));
        let f9 = tower(9);
        let sub = f9.subfield().to_vec();
        for &a in &sub {
            for &b in &sub {
                assert_eq!(hyperbolic_zero_count(&f9, a, b, sub[3]).unwrap(), (8, 8));
            }
        }
        let outside = f.element(3).unwrap();
        assert!(matches!(
            hyperbolic_zero_count(&f, outside, z, z),
            Err(Error::NotInSubfield)
        ));
    }

    #[test]
    fn hyperbolic_all_towers() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let (checked, bad) = verify_hyperbolic(&tower(q));
            assert_eq!(checked, (q as u64).pow(3));
            assert_eq!(bad, None);
        }
    }

    #[test]
    fn system_examples() {
        let f = tower(2);
        let z = FieldElement::ZERO;
        assert_eq!(
            system_solution_count(&f, &[z, z], &[vec![z, z], vec![z, z]]).unwrap(),
            1
        );
        assert_eq!(system_solution_count(&f, &[FieldElement::ONE], &[vec![z]]).unwrap(), 3);
        let f = tower(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (a, b) = random_system(&f, 2, &mut rng);
            assert!(system_solution_count(&f, &a, &b).unwrap() <= 4);
        }
    }

    #[test]
    fn l2_classification_q2_q3() {
        let c = classify_weights_l2(tower(2)).unwrap();
        assert_eq!((c.functions, c.high, c.low), (32, 10, 6));
        assert!(c.only_two_weights);
        assert!(c.statement_predicate_matches && c.proof_predicate_matches);
        let c = classify_weights_l2(tower(3)).unwrap();
        assert_eq!((c.functions, c.high, c.low), (243, 60, 51));
        assert!(c.only_two_weights);
        assert!(c.statement_predicate_matches);
        assert!(!c.proof_predicate_matches);
    }

    #[test]
    fn l3_bounds_q2() {
        let b = verify_l3_bounds(tower(2), u128::MAX).unwrap();
        assert_eq!(b.family.len(), 16);
        assert_eq!(b.bound, 216);
        assert!(b.min_weight as i128 >= b.bound);
        assert_eq!(b.weight_det, 280);
        assert_eq!(b.det_factored, 280);
        assert_eq!(b.det_expanded, 248);
        assert_eq!(b.weight_det_plus_constant, vec![232]);
        assert_eq!(b.det_plus_constant_formula, 232);
    }

    #[test]
    fn max_minor_weights_l2() {
        let g = generator_hermitian(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = min_weight_by_max_minor(&g, 2, false, 0, &mut rng).unwrap();
        assert!(r.exhaustive);
        assert_eq!((r.min_weight, r.bound), (Some(6), Some(6)));
        let r = min_weight_by_max_minor(&g, 1, false, 0, &mut rng).unwrap();
        assert!(r.min_weight.unwrap() >= 8);
        let r = min_weight_by_max_minor(&g, 0, false, 0, &mut rng).unwrap();
        assert_eq!(r.min_weight, Some(16));
        let r = min_weight_by_max_minor(&g, 2, true, 0, &mut rng).unwrap();
        assert_eq!(r.min_weight, Some(6));
    }

    #[test]
    fn clearing_examples() {
        let g = generator_hermitian(2, 2).unwrap();
        let f = g.tower().clone();
        let one = FieldElement::ONE;
        let det = MinorIndex::principal(&[1, 2]).unwrap();
        let plain = MinorCombination::single(2, det, one).unwrap();
        let r = verify_translation_clearing(&g, &plain, &[1, 2]).unwrap();
        assert_eq!(r.translation, HermitianMatrix::zero(2));
        assert!(r.cleared);

        let with_diag = MinorCombination::from_terms(
            2,
            [
                (det, one),
                (MinorIndex::principal(&[1]).unwrap(), one),
                (MinorIndex::principal(&[2]).unwrap(), one),
            ],
        )
        .unwrap();
        let r = verify_translation_clearing(&g, &with_diag, &[1, 2]).unwrap();
        assert!(r.cleared);
        assert_eq!(r.translated.coefficient(det), one);

        let skew = MinorCombination::single(2, MinorIndex::new(&[1], &[2]).unwrap(), one).unwrap();
        assert!(matches!(
            verify_translation_clearing(&g, &skew.add(&f, &plain).unwrap(), &[1, 2]),
            Err(Error::NotSelfConjugate)
        ));
        assert!(matches!(
            verify_translation_clearing(&g, &with_diag, &[1]),
            Err(Error::MinorNotMaximal(_))
        ));
    }

    #[test]
    fn clearing_random_l3() {
        let g = generator_hermitian(3, 2).unwrap();
        let f = g.tower().clone();
        let basis = fq_basis(&f, 3).unwrap();
        let full = MinorIndex::principal(&[1, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let mut comb = MinorCombination::single(3, full, FieldElement::ONE).unwrap();
            for b in &basis {
                if b.coefficient(full).is_zero() && rng.random_bool(0.5) {
                    comb = comb.add(&f, b).unwrap();
                }
            }
            let r = verify_translation_clearing(&g, &comb, &[1, 2, 3]).unwrap();
            assert!(r.cleared, "{comb}");
        }
    }

    #[test]
    fn expansion_matches_interpolation() {
        let g = generator_hermitian(3, 2).unwrap();
        let f = g.tower().clone();
        let idx = g.hermitian_indexing().unwrap();
        for lambda in f.nonzero_elements() {
            for (r, c) in [(1, 3), (3, 1), (2, 1)] {
                let mut a = SquareMatrix::identity(3);
                a.set(r - 1, c - 1, lambda);
                let perm = automorphism_permutation(idx, &Automorphism::Congruence(a)).unwrap();
                for &m in g.basis().minors() {
                    let comb = MinorCombination::single(3, m, FieldElement::ONE).unwrap();
                    let moved = apply_permutation(&g.encode_combination(&comb).unwrap(), &perm).unwrap();
                    let expect = elementary_congruence_expansion(&f, &comb, r, c, lambda).unwrap();
                    assert_eq!(g.interpolate(&moved).unwrap(), expect, "{m} r={r} c={c}");
                }
            }
        }
    }

    #[test]
    fn spread_reduction_worked_example() {
        let g = generator_hermitian(3, 2).unwrap();
        let target = MinorIndex::new(&[1, 2], &[2, 3]).unwrap();
        let comb = MinorCombination::single(3, target, FieldElement::ONE).unwrap();
        let r = spread_reduction_step(&g, &comb).unwrap();
        assert_eq!((r.spread, r.new_spread), (3, 2));
        assert_eq!(r.lambda, FieldElement::ONE);
        assert!(!r.result.coefficient(MinorIndex::principal(&[1, 2]).unwrap()).is_zero());
        assert_eq!(r.weight_before, r.weight_after);

        let principal = MinorCombination::single(3, MinorIndex::principal(&[1, 2]).unwrap(), FieldElement::ONE).unwrap();
        assert!(matches!(spread_reduction_step(&g, &principal), Err(Error::Precondition(_))));
    }
}
