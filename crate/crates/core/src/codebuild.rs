//! Generator matrices for the affine Hermitian Grassmann code C^H(ell) and the affine
//! Grassmann code C^A(ell), membership, interpolation, the F_q basis, conjugation and
//! automorphism permutations.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};
use crate::hermitian::{self, HermitianIndexing, HermitianMatrix, SquareMatrix, MAX_ELL};
use crate::linalg;
use crate::minors::{MinorBasis, MinorCombination};

pub mod io;

/// Largest code length that will be materialized.
pub const POSITION_LIMIT: u64 = 10_000_000;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeFamily {
    /// Evaluation at Hermitian matrices over F_{q^2}; alphabet F_{q^2}.
    Hermitian,
    /// Evaluation at all matrices over F_q; alphabet F_q.
    Affine,
}

impl CodeFamily {
    pub fn letter(self) -> char {
        match self {
            CodeFamily::Hermitian => 'H',
            CodeFamily::Affine => 'A',
        }
    }

    pub fn from_letter(s: &str) -> Result<Self> {
        match s {
            "H" => Ok(CodeFamily::Hermitian),
            "A" => Ok(CodeFamily::Affine),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeFamily::Hermitian => "hermitian",
            CodeFamily::Affine => "affine",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: CodeFamily,
    pub q: u32,
    pub ell: usize,
}

impl CodeSpec {
    pub fn hermitian(q: u32, ell: usize) -> Self {
        CodeSpec {
            family: CodeFamily::Hermitian,
            q,
            ell,
        }
    }

    pub fn affine(q: u32, ell: usize) -> Self {
        CodeSpec {
            family: CodeFamily::Affine,
            q,
            ell,
        }
    }

    /// `q^(ell^2)`, saturating.
    pub fn n(&self) -> u128 {
        (self.q as u128).saturating_pow((self.ell * self.ell) as u32)
    }

    /// `binom(2 ell, ell)`.
    pub fn k(&self) -> usize {
        binomial(2 * self.ell as u64, self.ell as u64) as usize
    }

    /// Size of the alphabet: `q^2` for the Hermitian family, `q` for the affine one.
    pub fn alphabet_size(&self) -> u32 {
        match self.family {
            CodeFamily::Hermitian => self.q * self.q,
            CodeFamily::Affine => self.q,
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^{}(ell={}, q={})", self.family.letter(), self.ell, self.q)
    }
}

/// Row-major mixed-radix indexing of all ell x ell matrices over F_q.
///
/// Entry `(0,0)` is the least significant digit; each digit is a position in the sorted
/// subfield list.
#[derive(Clone, Debug)]
pub struct AffineIndexing {
    ell: usize,
    tower: Arc<FieldTower>,
    total: u64,
}

impl AffineIndexing {
    pub fn new(tower: Arc<FieldTower>, ell: usize) -> Result<Self> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(Error::UnsupportedEll(ell));
        }
        let total = (tower.q() as u64).pow((ell * ell) as u32);
        Ok(AffineIndexing { ell, tower, total })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn index_to_matrix(&self, t: u64) -> Result<SquareMatrix> {
        if t >= self.total {
            return Err(Error::IndexOutOfRange {
                index: t,
                total: self.total,
            });
        }
        let q = self.tower.q() as u64;
        let mut m = SquareMatrix::zeros(self.ell);
        let mut rest = t;
        for i in 0..self.ell {
            for j in 0..self.ell {
                m.set(i, j, self.tower.subfield()[(rest % q) as usize]);
                rest /= q;
            }
        }
        Ok(m)
    }

    pub fn matrix_to_index(&self, m: &SquareMatrix) -> Result<u64> {
        if m.size() != self.ell {
            return Err(Error::SizeMismatch {
                expected: self.ell,
                found: m.size(),
            });
        }
        let q = self.tower.q() as u64;
        let mut t = 0;
        for &x in m.entries().iter().rev() {
            let pos = self.tower.subfield_position(x).ok_or(Error::NotInSubfield)?;
            t = t * q + pos as u64;
        }
        Ok(t)
    }
}

/// The evaluation points of a code, in canonical order.
#[derive(Clone, Debug)]
pub enum Points {
    Hermitian(HermitianIndexing),
    Affine(AffineIndexing),
}

impl Points {
    pub fn new(tower: Arc<FieldTower>, family: CodeFamily, ell: usize) -> Result<Self> {
        Ok(match family {
            CodeFamily::Hermitian => Points::Hermitian(HermitianIndexing::new(tower, ell)?),
            CodeFamily::Affine => Points::Affine(AffineIndexing::new(tower, ell)?),
        })
    }

    pub fn total(&self) -> u64 {
        match self {
            Points::Hermitian(h) => h.total(),
            Points::Affine(a) => a.total(),
        }
    }

    pub fn point(&self, t: u64) -> Result<SquareMatrix> {
        match self {
            Points::Hermitian(h) => Ok(h.index_to_matrix(t)?.into_matrix()),
            Points::Affine(a) => a.index_to_matrix(t),
        }
    }
}

/// A length-n vector indexed by the canonical point enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword {
    pub spec: CodeSpec,
    pub symbols: Vec<FieldElement>,
}

impl Codeword {
    pub fn new(spec: CodeSpec, symbols: Vec<FieldElement>) -> Self {
        Codeword { spec, symbols }
    }

    pub fn zero(spec: CodeSpec, n: usize) -> Self {
        Codeword {
            spec,
            symbols: vec![FieldElement::ZERO; n],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|x| !x.is_zero()).count()
    }
}

/// A k x n generator matrix whose row i is the evaluation of basis minor i.
///
/// Construction certifies full row rank and keeps a pivot system (k pivot columns and
/// the inverse of the k x k submatrix on them) for membership and interpolation.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    spec: CodeSpec,
    tower: Arc<FieldTower>,
    basis: MinorBasis,
    points: Points,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
    pivot_inverse: Vec<FieldElement>,
}

impl GeneratorMatrix {
    /// Evaluates every basis minor at every point of the family.
    pub fn build(tower: Arc<FieldTower>, family: CodeFamily, ell: usize) -> Result<Self> {
        let basis = MinorBasis::new(ell)?;
        let points = Points::new(tower.clone(), family, ell)?;
        let n = points.total();
        if n > POSITION_LIMIT {
            return Err(Error::TooLarge {
                size: n as u128,
                limit: POSITION_LIMIT as u128,
            });
        }
        let (n, k) = (n as usize, basis.len());
        let mut columns = vec![FieldElement::ZERO; n * k];
        columns
            .par_chunks_mut(k)
            .enumerate()
            .for_each(|(t, col)| {
                let m = points.point(t as u64).expect("index in range");
                for (slot, idx) in col.iter_mut().zip(basis.minors()) {
                    *slot = idx.eval(&tower, &m);
                }
            });
        let rows: Vec<Vec<FieldElement>> = (0..k)
            .into_par_iter()
            .map(|i| (0..n).map(|t| columns[t * k + i]).collect())
            .collect();
        let spec = CodeSpec {
            family,
            q: tower.q(),
            ell,
        };
        Self::from_parts(spec, tower, basis, points, rows)
    }

    /// Wraps externally supplied rows (for example read from a file), re-certifying rank.
    pub fn from_rows(
        tower: Arc<FieldTower>,
        family: CodeFamily,
        ell: usize,
        rows: Vec<Vec<FieldElement>>,
    ) -> Result<Self> {
        let basis = MinorBasis::new(ell)?;
        let points = Points::new(tower.clone(), family, ell)?;
        let n = points.total() as usize;
        if rows.len() != basis.len() {
            return Err(Error::SizeMismatch {
                expected: basis.len(),
                found: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let spec = CodeSpec {
            family,
            q: tower.q(),
            ell,
        };
        Self::from_parts(spec, tower, basis, points, rows)
    }

    fn from_parts(
        spec: CodeSpec,
        tower: Arc<FieldTower>,
        basis: MinorBasis,
        points: Points,
        rows: Vec<Vec<FieldElement>>,
    ) -> Result<Self> {
        let k = rows.len();
        let mut work = rows.clone();
        let pivots = linalg::row_reduce(&tower, &mut work);
        drop(work);
        if pivots.len() < k {
            return Err(Error::RankDeficient {
                rank: pivots.len(),
                expected: k,
            });
        }
        let sub: Vec<FieldElement> = rows
            .iter()
            .flat_map(|row| pivots.iter().map(|&p| row[p]))
            .collect();
        let pivot_inverse = linalg::inverse(&tower, &sub, k)?;
        Ok(GeneratorMatrix {
            spec,
            tower,
            basis,
            points,
            rows,
            pivots,
            pivot_inverse,
        })
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn basis(&self) -> &MinorBasis {
        &self.basis
    }

    pub fn points(&self) -> &Points {
        &self.points
    }

    pub fn hermitian_indexing(&self) -> Option<&HermitianIndexing> {
        match &self.points {
            Points::Hermitian(h) => Some(h),
            Points::Affine(_) => None,
        }
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Certified at construction, so always `k`.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> Codeword {
        Codeword::new(self.spec, self.rows[i].clone())
    }

    pub fn column(&self, t: usize) -> Vec<FieldElement> {
        self.rows.iter().map(|r| r[t]).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn header(&self) -> String {
        let p = self.tower.params();
        format!(
            "hermgrass-gen v1 family={} p={} e={} ell={} k={} n={} modulus={}",
            self.spec.family.letter(),
            p.p,
            p.e,
            self.spec.ell,
            self.k(),
            self.n(),
            p.modulus_digits()
        )
    }

    /// `m G` for a message of length k.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Codeword> {
        if message.len() != self.k() {
            return Err(Error::SizeMismatch {
                expected: self.k(),
                found: message.len(),
            });
        }
        if self.spec.family == CodeFamily::Affine && !message.iter().all(|&x| self.tower.in_subfield(x)) {
            return Err(Error::NotInSubfield);
        }
        let f = &*self.tower;
        let mut out = vec![FieldElement::ZERO; self.n()];
        for (row, &m) in self.rows.iter().zip(message) {
            if m.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(m, x));
            }
        }
        Ok(Codeword::new(self.spec, out))
    }

    /// `ev(f)`.
    pub fn encode_combination(&self, comb: &MinorCombination) -> Result<Codeword> {
        if comb.ell() != self.spec.ell {
            return Err(Error::SizeMismatch {
                expected: self.spec.ell,
                found: comb.ell(),
            });
        }
        self.encode(&comb.to_coefficients(&self.basis))
    }

    /// The unique message `m` with `m G = c`.
    pub fn solve(&self, c: &Codeword) -> Result<Vec<FieldElement>> {
        if c.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: c.len(),
            });
        }
        let f = &*self.tower;
        let k = self.k();
        let m: Vec<FieldElement> = (0..k)
            .map(|j| {
                f.sum(
                    self.pivots
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| f.mul(c.symbols[p], self.pivot_inverse[i * k + j])),
                )
            })
            .collect();
        if self.spec.family == CodeFamily::Affine && !m.iter().all(|&x| f.in_subfield(x)) {
            return Err(Error::NotInCode);
        }
        let back = self.encode(&m)?;
        if back.symbols != c.symbols {
            return Err(Error::NotInCode);
        }
        Ok(m)
    }

    pub fn contains(&self, c: &Codeword) -> bool {
        self.solve(c).is_ok()
    }

    /// The unique combination `f` with `ev(f) = c`.
    pub fn interpolate(&self, c: &Codeword) -> Result<MinorCombination> {
        MinorCombination::from_coefficients(&self.basis, &self.solve(c)?)
    }
}

pub fn generator_hermitian(ell: usize, q: u32) -> Result<GeneratorMatrix> {
    GeneratorMatrix::build(Arc::new(FieldTower::for_q(q)?), CodeFamily::Hermitian, ell)
}

pub fn generator_affine_grassmann(ell: usize, q: u32) -> Result<GeneratorMatrix> {
    GeneratorMatrix::build(Arc::new(FieldTower::for_q(q)?), CodeFamily::Affine, ell)
}

pub fn membership(c: &Codeword, g: &GeneratorMatrix) -> bool {
    g.contains(c)
}

/// The lowest-index element for which `{alpha, alpha^q}` is an F_q basis of F_{q^2}.
///
/// `alpha^q != alpha` alone is not enough in odd characteristic: a square root of a
/// non-square of F_q has `alpha^q = -alpha`.
pub fn alpha(f: &FieldTower) -> FieldElement {
    f.nonzero_elements()
        .find(|&x| {
            let ratio = f.div(f.conjugate(x), x).expect("x is nonzero");
            !f.in_subfield(ratio)
        })
        .expect("F_{q^2} has a normal basis over F_q")
}

/// A basis over F_q of the combinations taking values in F_q on Hermitian matrices.
///
/// Principal minors appear as themselves; every other pair `{(I,J), (J,I)}` contributes
/// `alpha det_IJ + alpha^q det_JI` and `alpha^q det_IJ + alpha det_JI`.
pub fn fq_basis(f: &FieldTower, ell: usize) -> Result<Vec<MinorCombination>> {
    let basis = MinorBasis::new(ell)?;
    let a = alpha(f);
    let aq = f.conjugate(a);
    let mut out = Vec::with_capacity(basis.len());
    for &idx in basis.minors() {
        if idx.is_principal() {
            out.push(MinorCombination::single(ell, idx, FieldElement::ONE)?);
        } else if idx < idx.transposed() {
            let t = idx.transposed();
            out.push(MinorCombination::from_terms(ell, [(idx, a), (t, aq)])?);
            out.push(MinorCombination::from_terms(ell, [(idx, aq), (t, a)])?);
        }
    }
    Ok(out)
}

/// Positionwise `x -> x^q`.
pub fn conjugate_codeword(f: &FieldTower, c: &Codeword) -> Codeword {
    Codeword::new(c.spec, c.symbols.iter().map(|&x| f.conjugate(x)).collect())
}

/// Whether the conjugate of every generator row lies in the code.
pub fn q_invariance_check(g: &GeneratorMatrix) -> bool {
    (0..g.k()).all(|i| g.contains(&conjugate_codeword(g.tower(), &g.row(i))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automorphism {
    /// `H -> A* H A`.
    Congruence(SquareMatrix),
    /// `H -> H + M`.
    Translate(HermitianMatrix),
    /// `H -> H^T`.
    Transpose,
}

impl Automorphism {
    pub fn translate_by(f: &FieldTower, m: SquareMatrix) -> Result<Self> {
        Ok(Automorphism::Translate(HermitianMatrix::new(f, m)?))
    }

    pub fn apply(&self, f: &FieldTower, h: &HermitianMatrix) -> Result<HermitianMatrix> {
        match self {
            Automorphism::Congruence(a) => hermitian::congruence(f, a, h),
            Automorphism::Translate(m) => hermitian::translate(f, h, m),
            Automorphism::Transpose => Ok(hermitian::transpose(h)),
        }
    }
}

/// `perm[t]` is the index of `sigma(P_t)`; a codeword `c` maps to `t -> c[perm[t]]`, the
/// evaluation vector of `f ∘ sigma`.
pub fn automorphism_permutation(idx: &HermitianIndexing, kind: &Automorphism) -> Result<Vec<usize>> {
    let f = idx.tower();
    if let Automorphism::Congruence(a) = kind {
        if a.size() != idx.ell() {
            return Err(Error::SizeMismatch {
                expected: idx.ell(),
                found: a.size(),
            });
        }
        if !a.is_invertible(f) {
            return Err(Error::SingularMatrix);
        }
    }
    if let Automorphism::Translate(m) = kind {
        if m.ell() != idx.ell() {
            return Err(Error::SizeMismatch {
                expected: idx.ell(),
                found: m.ell(),
            });
        }
    }
    (0..idx.total())
        .into_par_iter()
        .map(|t| {
            let h = idx.index_to_matrix(t)?;
            Ok(idx.matrix_to_index(&kind.apply(f, &h)?)? as usize)
        })
        .collect()
}

pub fn apply_permutation(c: &Codeword, perm: &[usize]) -> Result<Codeword> {
    if perm.len() != c.len() {
        return Err(Error::SizeMismatch {
            expected: c.len(),
            found: perm.len(),
        });
    }
    Ok(Codeword::new(c.spec, perm.iter().map(|&p| c.symbols[p]).collect()))
}
