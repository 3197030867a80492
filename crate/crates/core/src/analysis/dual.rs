//! Minimum distance of the dual code by searching for linearly dependent columns, and
//! explicit low-weight dual codewords.
//!
//! A weight-t dual codeword is exactly a dependency among t columns of the generator
//! matrix. For each size t the search walks every (t-1)-subset S of columns in
//! lexicographic order and every combination `v` of its columns with nonzero
//! coefficients (the first normalized to 1); it then looks up, in a table keyed by the
//! projective class of each column, the smallest later column proportional to `v`.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use crate::codebuild::{binomial, CodeFamily, CodeSpec, GeneratorMatrix};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};
use crate::hermitian::{self, HermitianMatrix};

/// Default cap on the number of (t-1)-subsets examined per size t.
pub const DEFAULT_SUBSET_BUDGET: u128 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDistanceCertificate {
    pub spec: CodeSpec,
    pub d_dual: usize,
    /// Lexicographically smallest set of `d_dual` dependent columns.
    pub dependent_columns: Vec<usize>,
    /// The dual codeword on `dependent_columns`, first coefficient 1.
    pub coefficients: Vec<FieldElement>,
    /// Sizes below `d_dual` were searched exhaustively; this counts their subsets.
    pub subsets_exhausted: u128,
}

/// Whether `sum_i c_i G[:, s_i] = 0`, i.e. the word is orthogonal to every row.
pub fn is_dual_word(g: &GeneratorMatrix, support: &[usize], coefficients: &[FieldElement]) -> bool {
    let f = g.tower();
    support.len() == coefficients.len()
        && g.rows().iter().all(|row| {
            f.sum(support.iter().zip(coefficients).map(|(&s, &c)| f.mul(c, row[s])))
                .is_zero()
        })
}

/// Scales `v` so its first nonzero entry is 1; returns the scale `s` with `v = s * key`.
fn normalize(f: &FieldTower, v: &[FieldElement], key: &mut Vec<FieldElement>) -> Option<FieldElement> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(lead).expect("nonzero");
    key.clear();
    key.extend(v.iter().map(|&x| f.mul(x, inv)));
    Some(lead)
}

fn alphabet(g: &GeneratorMatrix) -> Vec<FieldElement> {
    let f = g.tower();
    match g.spec().family {
        CodeFamily::Hermitian => f.nonzero_elements().collect(),
        CodeFamily::Affine => f.subfield()[1..].to_vec(),
    }
}

struct Search<'a> {
    f: &'a FieldTower,
    columns: Vec<Vec<FieldElement>>,
    classes: HashMap<Vec<FieldElement>, Vec<(usize, FieldElement)>>,
    scalars: Vec<FieldElement>,
}

impl Search<'_> {
    /// The smallest dependent `t`-set whose first `t-1` members start with `first`.
    fn starting_at(&self, first: usize, t: usize) -> Option<(Vec<usize>, Vec<FieldElement>)> {
        let n = self.columns.len();
        let mut subset: Vec<usize> = (first..first + t - 1).collect();
        if subset.last().is_some_and(|&l| l >= n) {
            return None;
        }
        let mut key = Vec::new();
        let mut acc = vec![FieldElement::ZERO; self.columns[0].len()];
        loop {
            if let Some(hit) = self.best_completion(&subset, &mut acc, &mut key) {
                return Some(hit);
            }
            // Next (t-2)-subset of (first, n) for positions 1.. in lexicographic order.
            let mut i = t - 2;
            loop {
                if i == 0 {
                    return None;
                }
                if subset[i] < n - (t - 1 - i) {
                    break;
                }
                i -= 1;
            }
            subset[i] += 1;
            for j in i + 1..t - 1 {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }

    fn best_completion(
        &self,
        subset: &[usize],
        acc: &mut [FieldElement],
        key: &mut Vec<FieldElement>,
    ) -> Option<(Vec<usize>, Vec<FieldElement>)> {
        let f = self.f;
        let last = *subset.last().expect("nonempty");
        let free = subset.len() - 1;
        let ns = self.scalars.len();
        let combos = ns.pow(free as u32);
        let mut best: Option<(usize, Vec<FieldElement>)> = None;
        for code in 0..combos {
            let mut coeffs = Vec::with_capacity(subset.len() + 1);
            coeffs.push(FieldElement::ONE);
            let mut rest = code;
            for _ in 0..free {
                coeffs.push(self.scalars[rest % ns]);
                rest /= ns;
            }
            acc.copy_from_slice(&self.columns[subset[0]]);
            for (&s, &c) in subset.iter().zip(&coeffs).skip(1) {
                for (a, &x) in acc.iter_mut().zip(&self.columns[s]) {
                    *a = f.add(*a, f.mul(c, x));
                }
            }
            let Some(scale) = normalize(f, acc, key) else {
                continue;
            };
            let Some(list) = self.classes.get(key.as_slice()) else {
                continue;
            };
            let pos = list.partition_point(|&(i, _)| i <= last);
            let Some(&(m, sm)) = list.get(pos) else {
                continue;
            };
            if best.as_ref().is_some_and(|(bm, _)| *bm <= m) {
                continue;
            }
            // v + c * col_m = 0 with v = scale * key and col_m = sm * key.
            let c = f.neg(f.div(scale, sm).expect("nonzero"));
            coeffs.push(c);
            best = Some((m, coeffs));
        }
        best.map(|(m, coeffs)| {
            let mut support = subset.to_vec();
            support.push(m);
            (support, coeffs)
        })
    }
}

/// Smallest `t <= max_t` such that some `t` columns of `g` are linearly dependent.
pub fn dual_min_distance(g: &GeneratorMatrix, max_t: usize, subset_budget: u128) -> Result<DualDistanceCertificate> {
    if !(1..=4).contains(&max_t) {
        return Err(Error::Precondition(format!("max_t = {max_t} outside 1..=4")));
    }
    let f = &**g.tower();
    let n = g.n();
    let columns: Vec<Vec<FieldElement>> = (0..n).map(|t| g.column(t)).collect();
    let mut subsets_exhausted = 0u128;

    if let Some(z) = columns.iter().position(|c| c.iter().all(|x| x.is_zero())) {
        return Ok(DualDistanceCertificate {
            spec: g.spec(),
            d_dual: 1,
            dependent_columns: vec![z],
            coefficients: vec![FieldElement::ONE],
            subsets_exhausted,
        });
    }
    subsets_exhausted += 1;

    let mut classes: HashMap<Vec<FieldElement>, Vec<(usize, FieldElement)>> = HashMap::new();
    let mut key = Vec::new();
    for (i, c) in columns.iter().enumerate() {
        let s = normalize(f, c, &mut key).expect("no zero columns");
        classes.entry(key.clone()).or_default().push((i, s));
    }
    let search = Search {
        f,
        columns,
        classes,
        scalars: alphabet(g),
    };

    for t in 2..=max_t {
        let needed = binomial(n as u64, (t - 1) as u64) as u128;
        if needed > subset_budget {
            return Err(Error::BudgetExceeded {
                needed,
                budget: subset_budget,
            });
        }
        let hit = (0..n)
            .into_par_iter()
            .find_map_first(|first| search.starting_at(first, t));
        if let Some((support, coefficients)) = hit {
            debug_assert!(is_dual_word(g, &support, &coefficients));
            return Ok(DualDistanceCertificate {
                spec: g.spec(),
                d_dual: t,
                dependent_columns: support,
                coefficients,
                subsets_exhausted,
            });
        }
        subsets_exhausted += needed;
    }
    Err(Error::NoneFoundWithinBound(max_t))
}

/// A dual codeword given by the matrices in its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualWord {
    pub matrices: Vec<HermitianMatrix>,
    pub positions: Vec<usize>,
    pub coefficients: Vec<FieldElement>,
    /// Orthogonal to every generator row.
    pub orthogonal: bool,
}

impl DualWord {
    /// Number of distinct positions with nonzero coefficient.
    pub fn weight(&self) -> usize {
        let mut p: Vec<usize> = self
            .positions
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&p, _)| p)
            .collect();
        p.sort_unstable();
        p.dedup();
        p.len()
    }
}

fn dual_word(g: &GeneratorMatrix, matrices: Vec<HermitianMatrix>, coefficients: Vec<FieldElement>) -> Result<DualWord> {
    let idx = g
        .hermitian_indexing()
        .ok_or_else(|| Error::Precondition("dual families are stated for the Hermitian code".into()))?;
    let positions = matrices
        .iter()
        .map(|m| idx.matrix_to_index(m).map(|t| t as usize))
        .collect::<Result<Vec<_>>>()?;
    let orthogonal = is_dual_word(g, &positions, &coefficients);
    Ok(DualWord {
        matrices,
        positions,
        coefficients,
        orthogonal,
    })
}

/// The four-point family `{H, H + a1*a1, H + (a2*a1 + a1*a2), H + a1*a1 + (a2*a1 + a1*a2)}`
/// with all coefficients 1 (for q = 2).
pub fn four_point_family(
    g: &GeneratorMatrix,
    h: &HermitianMatrix,
    a1: &[FieldElement],
    a2: &[FieldElement],
) -> Result<DualWord> {
    let f = &**g.tower();
    let ell = g.spec().ell;
    if a1.len() != ell || a2.len() != ell {
        return Err(Error::SizeMismatch {
            expected: ell,
            found: a1.len().min(a2.len()),
        });
    }
    if crate::linalg::rank(f, &[a1.to_vec(), a2.to_vec()]) < 2 {
        return Err(Error::DependentVectors);
    }
    let x = hermitian::rank_one_from_vector(f, a1)?;
    let y = hermitian::symmetric_outer(f, a1, a2);
    let hx = hermitian::translate(f, h, &x)?;
    let hy = hermitian::translate(f, h, &y)?;
    let hxy = hermitian::translate(f, &hx, &y)?;
    dual_word(g, vec![h.clone(), hx, hy, hxy], vec![FieldElement::ONE; 4])
}

/// The three-point family `{H, H + a*a, H + alpha a*a}` with coefficients
/// `(c0, -alpha/(alpha-1) c0, 1/(alpha-1) c0)`, for `alpha in F_q \ {0, 1}`.
pub fn three_point_family(
    g: &GeneratorMatrix,
    h: &HermitianMatrix,
    a: &[FieldElement],
    alpha: FieldElement,
    c0: FieldElement,
) -> Result<DualWord> {
    let f = &**g.tower();
    if !f.in_subfield(alpha) || alpha.is_zero() || alpha == FieldElement::ONE {
        return Err(Error::InvalidAlpha);
    }
    if c0.is_zero() {
        return Err(Error::Precondition("c0 must be nonzero".into()));
    }
    let x = hermitian::rank_one_from_vector(f, a)?;
    let ax = HermitianMatrix::new(f, x.matrix().scale(f, alpha))?;
    let am1 = f.sub(alpha, FieldElement::ONE);
    let c1 = f.mul(f.neg(f.div(alpha, am1)?), c0);
    let c2 = f.mul(f.inv(am1)?, c0);
    let matrices = vec![
        h.clone(),
        hermitian::translate(f, h, &x)?,
        hermitian::translate(f, h, &ax)?,
    ];
    dual_word(g, matrices, vec![c0, c1, c2])
}

/// Random instances of the family matching `q`: four-point for q = 2, three-point otherwise.
pub fn dual_support_families(g: &GeneratorMatrix, instances: usize, rng: &mut impl Rng) -> Result<Vec<DualWord>> {
    let f = g.tower().clone();
    let idx = g
        .hermitian_indexing()
        .ok_or_else(|| Error::Precondition("dual families are stated for the Hermitian code".into()))?
        .clone();
    let ell = g.spec().ell;
    (0..instances)
        .map(|_| {
            let h = idx.random(rng);
            if f.q() == 2 {
                loop {
                    let a1 = hermitian::random_nonzero_vector(&f, ell, rng);
                    let a2 = hermitian::random_nonzero_vector(&f, ell, rng);
                    match four_point_family(g, &h, &a1, &a2) {
                        Err(Error::DependentVectors) => continue,
                        other => return other,
                    }
                }
            } else {
                let a = hermitian::random_nonzero_vector(&f, ell, rng);
                let alpha = f.subfield()[rng.random_range(2..f.q() as usize)];
                let c0 = f.element(rng.random_range(1..f.order())).expect("in range");
                three_point_family(g, &h, &a, alpha, c0)
            }
        })
        .collect()
}
