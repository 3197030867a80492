//! Weights, minimum distances and the closed-form distance formulas.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{self, SmallField};
use crate::codebuild::{fq_basis, CodeFamily, CodeSpec, GeneratorMatrix, Points};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};
use crate::minors::{MinorCombination, MinorIndex};

/// Default cap on messages for a full exhaustive search.
pub const DEFAULT_MESSAGE_BUDGET: u128 = 1 << 24;
/// Default cap on messages for a search over the F_q basis.
pub const DEFAULT_SUBFIELD_BUDGET: u128 = 1 << 26;
/// Default cap on evaluation points for streaming weight computation.
pub const DEFAULT_POINT_BUDGET: u128 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceMethod {
    /// Closed form only.
    Formula,
    /// Every nonzero message over the alphabet.
    ExhaustiveFull,
    /// Every nonzero F_q-combination of the F_q basis.
    ExhaustiveSubfield,
    /// Closed form plus a codeword whose weight equals it.
    WitnessOnly,
}

impl DistanceMethod {
    pub fn name(self) -> &'static str {
        match self {
            DistanceMethod::Formula => "formula",
            DistanceMethod::ExhaustiveFull => "exhaustive",
            DistanceMethod::ExhaustiveSubfield => "subfield",
            DistanceMethod::WitnessOnly => "witness",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceCertificate {
    pub spec: CodeSpec,
    pub d: u128,
    pub method: DistanceMethod,
    /// A combination whose evaluation has weight `d`.
    pub witness: Option<MinorCombination>,
    /// Nonzero messages enumerated (0 for formula-based certificates).
    pub messages: u128,
    /// Number of enumerated messages attaining `d`.
    pub minimum_weight_messages: Option<u64>,
}

pub fn weight(c: &[FieldElement]) -> usize {
    c.iter().filter(|x| !x.is_zero()).count()
}

pub fn distance(a: &[FieldElement], b: &[FieldElement]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// `q^(ell^2) - q^(ell^2-1) - q^(ell^2-3)`, defined for `ell >= 2`.
pub fn d_hermitian_formula(ell: u32, q: u64) -> Option<u128> {
    if ell < 2 {
        return None;
    }
    let q = q as u128;
    let e = ell * ell;
    Some(q.pow(e) - q.pow(e - 1) - q.pow(e - 3))
}

/// `prod_{i=0}^{ell-1} (q^ell - q^i)`, the number of invertible ell x ell matrices over F_q.
pub fn d_affine_formula(ell: u32, q: u64) -> u128 {
    let q = q as u128;
    (0..ell).map(|i| q.pow(ell) - q.pow(i)).product()
}

pub fn formula_distance(spec: CodeSpec) -> Option<u128> {
    match spec.family {
        CodeFamily::Hermitian => d_hermitian_formula(spec.ell as u32, spec.q as u64),
        CodeFamily::Affine => Some(d_affine_formula(spec.ell as u32, spec.q as u64)),
    }
}

/// The combination that attains the distance formula: `det_{{1,2},{1,2}} + 1` for the
/// Hermitian family, the full determinant for the affine one.
pub fn formula_witness(spec: CodeSpec) -> Option<MinorCombination> {
    let one = FieldElement::ONE;
    match spec.family {
        CodeFamily::Hermitian if spec.ell >= 2 => Some(
            MinorCombination::from_terms(
                spec.ell,
                [
                    (MinorIndex::principal(&[1, 2]).ok()?, one),
                    (MinorIndex::EMPTY, one),
                ],
            )
            .ok()?,
        ),
        CodeFamily::Hermitian => None,
        CodeFamily::Affine => {
            let all: Vec<usize> = (1..=spec.ell).collect();
            MinorCombination::single(spec.ell, MinorIndex::principal(&all).ok()?, one).ok()
        }
    }
}

pub fn formula_certificate(spec: CodeSpec) -> Option<DistanceCertificate> {
    Some(DistanceCertificate {
        spec,
        d: formula_distance(spec)?,
        method: DistanceMethod::Formula,
        witness: None,
        messages: 0,
        minimum_weight_messages: None,
    })
}

/// Weight of `ev(f)` over the points of `family`, streamed without a generator matrix.
pub fn weight_over(
    tower: Arc<FieldTower>,
    family: CodeFamily,
    comb: &MinorCombination,
    point_budget: u128,
) -> Result<u64> {
    let points = Points::new(tower.clone(), family, comb.ell())?;
    let n = points.total();
    if n as u128 > point_budget {
        return Err(Error::TooLarge {
            size: n as u128,
            limit: point_budget,
        });
    }
    Ok((0..n)
        .into_par_iter()
        .filter(|&t| {
            let m = points.point(t).expect("index in range");
            !comb.eval(&tower, &m).expect("sizes agree").is_zero()
        })
        .count() as u64)
}

/// Weight of `ev(f)` in C^H(ell) over F_{q^2}.
pub fn weight_of_function(comb: &MinorCombination, q: u32) -> Result<u64> {
    let tower = Arc::new(FieldTower::for_q(q)?);
    weight_over(tower, CodeFamily::Hermitian, comb, DEFAULT_POINT_BUDGET)
}

/// Formula value checked against the weight of the formula witness.
pub fn witness_certificate(spec: CodeSpec, point_budget: u128) -> Result<DistanceCertificate> {
    let d = formula_distance(spec)
        .ok_or_else(|| Error::Precondition(format!("no distance formula for {spec}")))?;
    let witness = formula_witness(spec).expect("formula exists");
    let tower = Arc::new(FieldTower::for_q(spec.q)?);
    let w = weight_over(tower, spec.family, &witness, point_budget)? as u128;
    if w != d {
        return Err(Error::Precondition(format!(
            "witness weight {w} differs from the formula value {d}"
        )));
    }
    Ok(DistanceCertificate {
        spec,
        d,
        method: DistanceMethod::WitnessOnly,
        witness: Some(witness),
        messages: 0,
        minimum_weight_messages: None,
    })
}

fn combine(g: &GeneratorMatrix, parts: &[MinorCombination], message: &[FieldElement]) -> MinorCombination {
    let f = g.tower();
    parts
        .iter()
        .zip(message)
        .fold(MinorCombination::zero(g.spec().ell), |acc, (p, &m)| {
            acc.add(f, &p.scale(f, m)).expect("same ell")
        })
}

/// Minimum weight over every nonzero message over the code alphabet.
pub fn min_distance_exhaustive(g: &GeneratorMatrix, budget: u128) -> Result<DistanceCertificate> {
    let f = g.tower();
    let field = match g.spec().family {
        CodeFamily::Hermitian => SmallField::full(f)?,
        CodeFamily::Affine => SmallField::subfield(f),
    };
    let found = enumerate::min_weight(&field, g.rows(), budget)?;
    let minors: Vec<MinorCombination> = g
        .basis()
        .minors()
        .iter()
        .map(|&m| MinorCombination::single(g.spec().ell, m, FieldElement::ONE).expect("valid"))
        .collect();
    Ok(DistanceCertificate {
        spec: g.spec(),
        d: found.weight as u128,
        method: DistanceMethod::ExhaustiveFull,
        witness: Some(combine(g, &minors, &found.message)),
        messages: found.messages,
        minimum_weight_messages: Some(found.count),
    })
}

/// Minimum weight over every nonzero F_q-combination of `basis`.
///
/// For a code fixed by positionwise conjugation every minimum-weight word is a multiple
/// of a word with all symbols in F_q, so this equals the true minimum distance.
pub fn min_distance_subfield(
    g: &GeneratorMatrix,
    basis: &[MinorCombination],
    budget: u128,
) -> Result<DistanceCertificate> {
    let f = g.tower();
    let rows: Vec<Vec<FieldElement>> = basis
        .iter()
        .map(|b| g.encode_combination(b).map(|c| c.symbols))
        .collect::<Result<_>>()?;
    let found = enumerate::min_weight(&SmallField::subfield(f), &rows, budget)?;
    Ok(DistanceCertificate {
        spec: g.spec(),
        d: found.weight as u128,
        method: DistanceMethod::ExhaustiveSubfield,
        witness: Some(combine(g, basis, &found.message)),
        messages: found.messages,
        minimum_weight_messages: Some(found.count),
    })
}

/// [`min_distance_subfield`] with the canonical F_q basis of the family.
pub fn min_distance_subfield_default(g: &GeneratorMatrix, budget: u128) -> Result<DistanceCertificate> {
    let basis = match g.spec().family {
        CodeFamily::Hermitian => fq_basis(g.tower(), g.spec().ell)?,
        CodeFamily::Affine => g
            .basis()
            .minors()
            .iter()
            .map(|&m| MinorCombination::single(g.spec().ell, m, FieldElement::ONE))
            .collect::<Result<_>>()?,
    };
    min_distance_subfield(g, &basis, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebuild::{generator_affine_grassmann, generator_hermitian};

    #[test]
    fn weight_and_distance_basics() {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        assert_eq!(distance(&[o, z, o, z], &[o, o, z, z]).unwrap(), 2);
        assert_eq!(weight(&[z, z, z]), 0);
        assert!(distance(&[o], &[o, o]).is_err());
    }

    #[test]
    fn formulas() {
        assert_eq!(d_hermitian_formula(2, 2), Some(6));
        assert_eq!(d_hermitian_formula(2, 7), Some(2051));
        assert_eq!(d_hermitian_formula(3, 9), Some(343_842_327));
        assert_eq!(d_hermitian_formula(1, 2), None);
        assert_eq!(d_affine_formula(2, 2), 6);
        assert_eq!(d_affine_formula(2, 7), 2016);
        assert_eq!(d_affine_formula(3, 3), 11232);
        assert_eq!(d_affine_formula(3, 9), 339_655_680);
    }

    #[test]
    fn streamed_weights() {
        let w = formula_witness(CodeSpec::hermitian(2, 3)).unwrap();
        assert_eq!(weight_of_function(&w, 2).unwrap(), 192);
        let w = formula_witness(CodeSpec::hermitian(3, 2)).unwrap();
        assert_eq!(weight_of_function(&w, 3).unwrap(), 51);
        assert_eq!(weight_of_function(&MinorCombination::zero(2), 3).unwrap(), 0);
    }

    #[test]
    fn small_exhaustive_distances() {
        let g = generator_hermitian(2, 2).unwrap();
        let cert = min_distance_exhaustive(&g, DEFAULT_MESSAGE_BUDGET).unwrap();
        assert_eq!((cert.d, cert.messages), (6, 4095));
        let w = g.encode_combination(cert.witness.as_ref().unwrap()).unwrap();
        assert_eq!(w.weight(), 6);

        let a = generator_affine_grassmann(2, 2).unwrap();
        let cert = min_distance_exhaustive(&a, DEFAULT_MESSAGE_BUDGET).unwrap();
        assert_eq!((cert.d, cert.messages), (6, 63));

        let g = generator_hermitian(1, 2).unwrap();
        assert_eq!(min_distance_exhaustive(&g, DEFAULT_MESSAGE_BUDGET).unwrap().d, 1);
        let a = generator_affine_grassmann(1, 2).unwrap();
        assert_eq!(min_distance_exhaustive(&a, DEFAULT_MESSAGE_BUDGET).unwrap().d, 1);
    }

    #[test]
    fn subfield_agrees_with_exhaustive() {
        let g = generator_hermitian(2, 3).unwrap();
        let sub = min_distance_subfield_default(&g, DEFAULT_SUBFIELD_BUDGET).unwrap();
        let full = min_distance_exhaustive(&g, DEFAULT_MESSAGE_BUDGET).unwrap();
        assert_eq!((sub.d, full.d), (51, 51));
        assert_eq!(sub.messages, 728);
        let w = g.encode_combination(sub.witness.as_ref().unwrap()).unwrap();
        assert_eq!(w.weight(), 51);
    }

    #[test]
    fn affine_q3() {
        let a = generator_affine_grassmann(2, 3).unwrap();
        assert_eq!(min_distance_exhaustive(&a, DEFAULT_MESSAGE_BUDGET).unwrap().d, 48);
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let g = generator_hermitian(2, 3).unwrap();
        assert!(matches!(
            min_distance_exhaustive(&g, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn witness_certificates() {
        let c = witness_certificate(CodeSpec::hermitian(3, 3), DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(c.d, 12393);
        let c = witness_certificate(CodeSpec::affine(3, 3), DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(c.d, 11232);
    }
}
