//! The verification suites run by `hermgrass verify`.

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use hermgrass_core::analysis::distance::{weight_of_function, DEFAULT_POINT_BUDGET};
use hermgrass_core::analysis::dual::dual_support_families;
use hermgrass_core::analysis::lemmas::{
    classify_weights_l2, elementary_congruence_expansion, min_weight_by_max_minor, random_system,
    spread_reduction_step, system_solution_count, verify_hyperbolic, verify_l3_bounds,
    verify_translation_clearing, wkk_bound,
};
use hermgrass_core::analysis::{
    d_affine_formula, d_hermitian_formula, dual_min_distance, is_dual_word, min_distance_exhaustive,
    min_distance_subfield_default,
};
use hermgrass_core::codebuild::{
    apply_permutation, automorphism_permutation, binomial, fq_basis, q_invariance_check,
    Automorphism,
};
use hermgrass_core::hermitian::{
    self, count_invertible, count_invertible_bruteforce, HermitianIndexing, SquareMatrix,
    BRUTE_FORCE_LIMIT,
};
use hermgrass_core::minors::basis;
use hermgrass_core::{
    linalg, CodeFamily, FieldElement, FieldTower, GeneratorMatrix, MinorCombination, MinorIndex,
    Result,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{Budgets, SUPPORTED_Q};
use crate::report::Report;

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fields,
    Counts,
    Codes,
    Classifiers,
    Duals,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fields" => Ok(Suite::Fields),
            "counts" => Ok(Suite::Counts),
            "codes" => Ok(Suite::Codes),
            "classifiers" => Ok(Suite::Classifiers),
            "duals" => Ok(Suite::Duals),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

fn timed(r: &mut Report, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    r.check(name, passed, detail, start.elapsed());
}

fn tower(q: u32) -> Result<Arc<FieldTower>> {
    Ok(Arc::new(FieldTower::for_q(q)?))
}

fn keep(filter: Option<u32>, q: u32) -> bool {
    filter.is_none_or(|f| f == q)
}

pub fn cmd_verify(suite: Suite, q_filter: Option<u32>, budgets: Budgets, seed: u64) -> Report {
    let mut r = Report::new("verify");
    r.field("suite", format!("{suite:?}").to_lowercase()).field("seed", seed);
    if let Some(q) = q_filter {
        r.field("q", q);
    }
    let run = |s: Suite| suite == s || suite == Suite::All;
    if run(Suite::Fields) {
        r.section(fields(q_filter));
    }
    if run(Suite::Counts) {
        r.section(counts(q_filter, seed));
    }
    if run(Suite::Codes) {
        r.section(codes(q_filter, budgets, seed));
    }
    if run(Suite::Classifiers) {
        r.section(classifiers(q_filter, seed));
    }
    if run(Suite::Duals) {
        r.section(duals(q_filter, budgets, seed));
    }
    let checks = r.checks();
    let failed = checks.iter().filter(|c| !c.passed).count();
    r.field("checks", checks.len()).field("failed", failed);
    r
}

fn fields(q_filter: Option<u32>) -> Report {
    let mut r = Report::new("fields");
    for q in SUPPORTED_Q.into_iter().filter(|&q| keep(q_filter, q)) {
        timed(&mut r, format!("axioms q={q}"), || {
            let f = FieldTower::for_q(q)?;
            Ok(match f.check_axioms() {
                Ok(()) => (true, format!("modulus {} exhaustive over {} elements", f.params().modulus_digits(), f.order())),
                Err(e) => (false, e),
            })
        });
        timed(&mut r, format!("trace and norm fibers q={q}"), || {
            let f = FieldTower::for_q(q)?;
            let mut trace = vec![0u32; f.order() as usize];
            let mut norm = vec![0u32; f.order() as usize];
            for x in f.elements() {
                trace[f.trace(x).index() as usize] += 1;
                if !x.is_zero() {
                    norm[f.norm(x).index() as usize] += 1;
                }
            }
            let sub = f.subfield();
            let ok = sub.iter().all(|s| trace[s.index() as usize] == q)
                && sub[1..].iter().all(|s| norm[s.index() as usize] == q + 1)
                && trace.iter().sum::<u32>() == f.order()
                && norm.iter().sum::<u32>() == f.order() - 1;
            Ok((ok, format!("trace fibers of size {q}, norm fibers of size {}", q + 1)))
        });
    }
    r
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

fn counts(q_filter: Option<u32>, seed: u64) -> Report {
    let mut r = Report::new("counts");
    let pairs = (2..=9)
        .filter(|q| SUPPORTED_Q.contains(q))
        .map(|q| (1, q))
        .chain([(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)]);
    for (ell, q) in pairs.filter(|&(_, q)| keep(q_filter, q)) {
        timed(&mut r, format!("invertible Hermitian count ell={ell} q={q}"), || {
            let formula = count_invertible(ell as u32, q as u64);
            let brute = count_invertible_bruteforce(tower(q)?, ell)? as u128;
            Ok((formula == brute, format!("formula {formula}, brute force {brute}")))
        });
    }
    for ell in 1..=4usize {
        for q in SUPPORTED_Q.into_iter().filter(|&q| keep(q_filter, q)) {
            let total = (q as u64).checked_pow((ell * ell) as u32);
            if total.is_none_or(|t| t > BRUTE_FORCE_LIMIT) {
                continue;
            }
            timed(&mut r, format!("enumeration bijectivity ell={ell} q={q}"), || {
                let idx = HermitianIndexing::new(tower(q)?, ell)?;
                let f = idx.tower().clone();
                use rayon::prelude::*;
                let ok = (0..idx.total()).into_par_iter().all(|t| {
                    idx.index_to_matrix(t).is_ok_and(|h| {
                        h.matrix().is_hermitian(&f) && idx.matrix_to_index(&h).ok() == Some(t)
                    })
                });
                Ok((ok, format!("{} matrices", idx.total())))
            });
        }
    }
    for q in [2, 3].into_iter().filter(|&q| keep(q_filter, q)) {
        timed(&mut r, format!("Hermitian actions are bijections ell=2 q={q}"), || {
            let f = tower(q)?;
            let idx = HermitianIndexing::new(f.clone(), 2)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ok = true;
            for _ in 0..5 {
                for kind in [
                    Automorphism::Congruence(hermitian::random_invertible(&f, 2, &mut rng)),
                    Automorphism::Translate(idx.random(&mut rng)),
                    Automorphism::Transpose,
                ] {
                    ok &= is_permutation(&automorphism_permutation(&idx, &kind)?);
                }
            }
            Ok((ok, "congruence, translation and transpose permute all points".into()))
        });
    }
    for q in SUPPORTED_Q.into_iter().filter(|&q| keep(q_filter, q)) {
        timed(&mut r, format!("hyperbolic zero count q={q}"), || {
            let (checked, bad) = verify_hyperbolic(&FieldTower::for_q(q)?);
            Ok(match bad {
                None => (true, format!("formula equals brute force on {checked} triples")),
                Some((a, b, l)) => (false, format!("disagreement at a={a} b={b} lambda={l}")),
            })
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157);
    for n in 1..=3usize {
        for q in [2, 3, 4] {
            if !keep(q_filter, q) {
                continue;
            }
            let f = match FieldTower::for_q(q) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let systems: Vec<_> = (0..100).map(|_| random_system(&f, n, &mut rng)).collect();
            timed(&mut r, format!("system solutions n={n} q={q}"), || {
                let mut worst = 0;
                for (a, b) in &systems {
                    worst = worst.max(system_solution_count(&f, a, b)?);
                }
                Ok((worst <= q as u64 + 1, format!("at most {worst} solutions over 100 systems")))
            });
        }
    }
    r
}

fn codes(q_filter: Option<u32>, budgets: Budgets, seed: u64) -> Report {
    let mut r = Report::new("codes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0de);
    let pairs = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)];
    for (ell, q) in pairs.into_iter().filter(|&(_, q)| keep(q_filter, q)) {
        let g = match GeneratorMatrix::build(tower(q).expect("supported"), CodeFamily::Hermitian, ell) {
            Ok(g) => g,
            Err(e) => {
                r.check(format!("build ell={ell} q={q}"), false, e.to_string(), Default::default());
                continue;
            }
        };
        let tag = format!("ell={ell} q={q}");
        timed(&mut r, format!("dimension {tag}"), || {
            let k = binomial(2 * ell as u64, ell as u64) as usize;
            let n = (q as usize).pow((ell * ell) as u32);
            Ok((
                g.rank() == k && g.k() == k && g.n() == n,
                format!("n={} k={} rank={}", g.n(), g.k(), g.rank()),
            ))
        });
        timed(&mut r, format!("q-invariance {tag}"), || {
            Ok((q_invariance_check(&g), "conjugated rows are codewords".into()))
        });
        timed(&mut r, format!("subfield basis spans {tag}"), || {
            let words = fq_basis(g.tower(), ell)?
                .iter()
                .map(|b| g.encode_combination(b).map(|c| c.symbols))
                .collect::<Result<Vec<_>>>()?;
            let rank = linalg::rank(g.tower(), &words);
            Ok((rank == g.k(), format!("rank {rank} of {} words", words.len())))
        });
        timed(&mut r, format!("interpolation round trips {tag}"), || {
            let f = g.tower();
            let mut ok = true;
            for _ in 0..200 {
                let msg = hermitian::random_vector(f, g.k(), &mut rng);
                let comb = MinorCombination::from_coefficients(g.basis(), &msg)?;
                let c = g.encode(&msg)?;
                ok &= g.interpolate(&c)? == comb && g.solve(&c)? == msg;
            }
            Ok((ok, "200 random combinations".into()))
        });
    }
    for (ell, q) in [(2, 2), (2, 3), (3, 2)].into_iter().filter(|&(_, q)| keep(q_filter, q)) {
        timed(&mut r, format!("automorphisms ell={ell} q={q}"), || {
            let g = GeneratorMatrix::build(tower(q)?, CodeFamily::Hermitian, ell)?;
            let f = g.tower().clone();
            let idx = g.hermitian_indexing().expect("Hermitian");
            let mut ok = true;
            let mut tried = 0;
            for _ in 0..5 {
                for kind in [
                    Automorphism::Congruence(hermitian::random_invertible(&f, ell, &mut rng)),
                    Automorphism::Translate(idx.random(&mut rng)),
                    Automorphism::Transpose,
                ] {
                    let perm = automorphism_permutation(idx, &kind)?;
                    for i in 0..g.k() {
                        let row = g.row(i);
                        let moved = apply_permutation(&row, &perm)?;
                        ok &= moved.weight() == row.weight() && g.contains(&moved);
                        tried += 1;
                    }
                }
            }
            Ok((ok, format!("{tried} permuted rows are codewords of equal weight")))
        });
    }
    if keep(q_filter, 2) || keep(q_filter, 3) {
        timed(&mut r, "conjugate-minor identity", || {
            let mut ok = true;
            let mut tested = 0u64;
            for ell in 1..=3 {
                if keep(q_filter, 2) {
                    let idx = HermitianIndexing::new(tower(2)?, ell)?;
                    let f = idx.tower().clone();
                    for h in idx.matrices() {
                        for &m in basis(ell)?.minors() {
                            ok &= m.transposed().eval(&f, h.matrix()) == f.conjugate(m.eval(&f, h.matrix()));
                        }
                        tested += 1;
                    }
                }
                if keep(q_filter, 3) {
                    let idx = HermitianIndexing::new(tower(3)?, ell)?;
                    let f = idx.tower().clone();
                    for _ in 0..1000 {
                        let h = idx.random(&mut rng);
                        for &m in basis(ell)?.minors() {
                            ok &= m.transposed().eval(&f, h.matrix()) == f.conjugate(m.eval(&f, h.matrix()));
                        }
                        tested += 1;
                    }
                }
            }
            Ok((ok, format!("{tested} matrices, exhaustive at q=2 and sampled at q=3")))
        });
    }
    timed(&mut r, "maximal minors form an antichain", || {
        let mut ok = true;
        let b2 = basis(2)?;
        let b3 = basis(3)?;
        let mut supports: Vec<(usize, Vec<MinorIndex>)> = (0u32..1 << b2.len())
            .map(|mask| (2, (0..b2.len()).filter(|i| mask >> i & 1 == 1).map(|i| b2.minors()[i]).collect()))
            .collect();
        for _ in 0..2000 {
            supports.push((3, b3.minors().iter().copied().filter(|_| rng.random_bool(0.3)).collect()));
        }
        for (ell, s) in &supports {
            let comb = MinorCombination::from_terms(*ell, s.iter().map(|&m| (m, FieldElement::ONE)))?;
            let max = comb.maximal_minors();
            ok &= max.iter().all(|a| max.iter().all(|b| a == b || !a.contains(*b)));
            ok &= comb.support().iter().all(|s| max.iter().any(|m| m.contains(*s)));
        }
        Ok((ok, format!("{} supports", supports.len())))
    });
    if keep(q_filter, 2) {
        timed(&mut r, "multilinearity under elementary congruence ell=3 q=2", || {
            let g = GeneratorMatrix::build(tower(2)?, CodeFamily::Hermitian, 3)?;
            let f = g.tower().clone();
            let idx = g.hermitian_indexing().expect("Hermitian");
            let mut ok = true;
            let mut cases = 0;
            for lambda in f.nonzero_elements() {
                for s in 2..=3 {
                    let mut a = SquareMatrix::identity(3);
                    a.set(0, s - 1, lambda);
                    let perm = automorphism_permutation(idx, &Automorphism::Congruence(a))?;
                    for &m in g.basis().minors() {
                        let comb = MinorCombination::single(3, m, FieldElement::ONE)?;
                        let moved = apply_permutation(&g.encode_combination(&comb)?, &perm)?;
                        ok &= g.interpolate(&moved)? == elementary_congruence_expansion(&f, &comb, 1, s, lambda)?;
                        cases += 1;
                    }
                }
            }
            Ok((ok, format!("{cases} minors matched their expansion")))
        });
    }
    for q in [2, 3, 4, 5].into_iter().filter(|&q| keep(q_filter, q)) {
        timed(&mut r, format!("minimum distance ell=2 q={q}"), || {
            let g = GeneratorMatrix::build(tower(q)?, CodeFamily::Hermitian, 2)?;
            let d = min_distance_subfield_default(&g, budgets.messages)?.d;
            let formula = d_hermitian_formula(2, q as u64).expect("ell = 2");
            let mut ok = d == formula;
            let mut detail = format!("subfield {d}, formula {formula}");
            if q <= 3 {
                let full = min_distance_exhaustive(&g, budgets.messages)?.d;
                ok &= full == d;
                detail.push_str(&format!(", exhaustive {full}"));
            }
            let a = GeneratorMatrix::build(g.tower().clone(), CodeFamily::Affine, 2)?;
            let da = min_distance_exhaustive(&a, budgets.messages)?.d;
            ok &= da == d_affine_formula(2, q as u64) && d >= da;
            detail.push_str(&format!(", affine {da}"));
            Ok((ok, detail))
        });
    }
    if keep(q_filter, 2) {
        timed(&mut r, "minimum distance ell=3 q=2", || {
            let g = GeneratorMatrix::build(tower(2)?, CodeFamily::Hermitian, 3)?;
            let cert = min_distance_subfield_default(&g, budgets.messages)?;
            let witness = MinorCombination::from_terms(
                3,
                [
                    (MinorIndex::principal(&[1, 2])?, FieldElement::ONE),
                    (MinorIndex::EMPTY, FieldElement::ONE),
                ],
            )?;
            let w = weight_of_function(&witness, 2)? as u128;
            let a = GeneratorMatrix::build(g.tower().clone(), CodeFamily::Affine, 3)?;
            let da = min_distance_exhaustive(&a, budgets.messages)?.d;
            Ok((
                cert.d == 192 && w == 192 && da == 168 && cert.d >= da,
                format!("subfield {} over {} messages, witness {w}, affine {da}", cert.d, cert.messages),
            ))
        });
    }
    r
}

fn classifiers(q_filter: Option<u32>, seed: u64) -> Report {
    let mut r = Report::new("classifiers");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1a5);
    for q in [2, 3].into_iter().filter(|&q| keep(q_filter, q)) {
        timed(&mut r, format!("two-weight classification ell=2 q={q}"), || {
            let c = classify_weights_l2(tower(q)?)?;
            let predicate = match (c.statement_predicate_matches, c.proof_predicate_matches) {
                (true, true) => "both predicates agree",
                (true, false) => "f0 + N(f12) - f11 f22 = 0 gives the larger weight",
                (false, true) => "N(f12) - f0 + f11 f22 = 0 gives the larger weight",
                (false, false) => "neither predicate separates the weights",
            };
            let hist: Vec<String> = c.weights.iter().map(|(w, n)| format!("{w}x{n}")).collect();
            Ok((
                c.only_two_weights && (c.statement_predicate_matches || c.proof_predicate_matches),
                format!("{} functions, weights {}; {predicate}", c.functions, hist.join(" ")),
            ))
        });
    }
    if keep(q_filter, 2) {
        timed(&mut r, "ell=3 structural bounds q=2", || {
            let b = verify_l3_bounds(tower(2)?, DEFAULT_POINT_BUDGET)?;
            let plus = b.weight_det_plus_constant[0];
            Ok((
                b.min_weight as i128 >= b.bound
                    && b.weight_det as i128 == b.det_factored
                    && plus as i128 == b.det_plus_constant_formula,
                format!(
                    "family minimum {} vs bound {}; weight(det) {} (invertible count {}, expanded polynomial {}); weight(det+1) {plus}",
                    b.min_weight, b.bound, b.weight_det, b.det_factored, b.det_expanded
                ),
            ))
        });
    }
    for (q, samples) in [(2u32, 0u64), (3, 0)].into_iter().filter(|&(q, _)| keep(q_filter, q)) {
        timed(&mut r, format!("minimum weight by maximal minor ell=2 q={q}"), || {
            let g = GeneratorMatrix::build(tower(q)?, CodeFamily::Hermitian, 2)?;
            let mut parts = Vec::new();
            let mut ok = true;
            for k in 0..=2 {
                let m = min_weight_by_max_minor(&g, k, false, samples, &mut rng)?;
                let w = m.min_weight.unwrap_or(0);
                if let Some(b) = m.bound {
                    ok &= w as i128 == b;
                }
                parts.push(format!("k={k}: {w}"));
            }
            Ok((ok, parts.join(", ")))
        });
    }
    if keep(q_filter, 2) {
        timed(&mut r, "full determinant weights ell=3 q=2 (sampled)", || {
            let g = GeneratorMatrix::build(tower(2)?, CodeFamily::Hermitian, 3)?;
            let m = min_weight_by_max_minor(&g, 3, true, 2000, &mut rng)?;
            let b = wkk_bound(3, 2).expect("k >= 2");
            let w = m.min_weight.unwrap_or(u64::MAX);
            Ok((w as i128 >= b, format!("{} samples, least weight {w}, bound {b}", m.functions)))
        });
        timed(&mut r, "translation clearing ell=3 q=2", || {
            let g = GeneratorMatrix::build(tower(2)?, CodeFamily::Hermitian, 3)?;
            let f = g.tower().clone();
            let full = MinorIndex::principal(&[1, 2, 3])?;
            let others: Vec<MinorCombination> = fq_basis(&f, 3)?
                .into_iter()
                .filter(|b| b.coefficient(full).is_zero())
                .collect();
            let mut ok = true;
            for _ in 0..50 {
                let mut comb = MinorCombination::single(3, full, FieldElement::ONE)?;
                for b in &others {
                    if rng.random_bool(0.5) {
                        comb = comb.add(&f, b)?;
                    }
                }
                ok &= verify_translation_clearing(&g, &comb, &[1, 2, 3])?.cleared;
            }
            Ok((ok, "50 random self-conjugate functions with the full determinant".into()))
        });
        timed(&mut r, "spread reduction ell=3 q=2", || {
            let g = GeneratorMatrix::build(tower(2)?, CodeFamily::Hermitian, 3)?;
            let target = MinorIndex::new(&[1, 2], &[2, 3])?;
            let s = spread_reduction_step(&g, &MinorCombination::single(3, target, FieldElement::ONE)?)?;
            Ok((
                s.new_spread < s.spread && s.weight_before == s.weight_after,
                format!("{target}: spread {} -> {} with lambda {}", s.spread, s.new_spread, s.lambda),
            ))
        });
    }
    r
}

fn duals(q_filter: Option<u32>, budgets: Budgets, seed: u64) -> Report {
    let mut r = Report::new("duals");
    for (ell, q) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2)].into_iter().filter(|&(_, q)| keep(q_filter, q)) {
        timed(&mut r, format!("dual distance ell={ell} q={q}"), || {
            let g = GeneratorMatrix::build(tower(q)?, CodeFamily::Hermitian, ell)?;
            let cert = dual_min_distance(&g, 4, budgets.subsets)?;
            let expected = if q == 2 { 4 } else { 3 };
            Ok((
                cert.d_dual == expected && is_dual_word(&g, &cert.dependent_columns, &cert.coefficients),
                format!(
                    "{} on columns {:?}, {} smaller subsets exhausted",
                    cert.d_dual, cert.dependent_columns, cert.subsets_exhausted
                ),
            ))
        });
    }
    for (ell, q) in [(2, 2), (2, 3), (3, 2)].into_iter().filter(|&(_, q)| keep(q_filter, q)) {
        timed(&mut r, format!("dual support family ell={ell} q={q}"), || {
            let g = GeneratorMatrix::build(tower(q)?, CodeFamily::Hermitian, ell)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (ell as u64 * 31 + q as u64));
            let words = dual_support_families(&g, 50, &mut rng)?;
            let expected = if q == 2 { 4 } else { 3 };
            let ok = words.iter().all(|w| w.orthogonal && w.weight() == expected);
            Ok((ok, format!("{} instances of weight {expected}", words.len())))
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>(), Ok(Suite::All));
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn counts_at_q2() {
        let r = cmd_verify(Suite::Counts, Some(2), Budgets::default(), DEFAULT_SEED);
        assert!(r.all_passed(), "{}", r.render(crate::report::Format::Text));
        assert!(r.checks().iter().any(|c| c.name == "invertible Hermitian count ell=3 q=2"));
    }

    #[test]
    fn classifiers_at_q2() {
        let r = cmd_verify(Suite::Classifiers, Some(2), Budgets::default(), DEFAULT_SEED);
        assert!(r.all_passed(), "{}", r.render(crate::report::Format::Text));
    }
}
