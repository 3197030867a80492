//! Minors of the generic matrix and their linear combinations.
//!
//! A [`MinorIndex`] `(I, J)` names the determinant of the submatrix on rows `I` and
//! columns `J` (both 1-based subsets of `{1..ell}` of equal size). The empty minor is the
//! constant function 1.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};
use crate::hermitian::{HermitianMatrix, SquareMatrix, MAX_ELL};
use crate::linalg;

/// A pair of equal-size row and column subsets, stored as bitmasks (bit `i` is index `i+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MinorIndex {
    rows: u8,
    cols: u8,
}

fn mask_of(set: &[usize]) -> Result<u8> {
    let mut mask = 0u8;
    for &i in set {
        if !(1..=8).contains(&i) || mask & (1 << (i - 1)) != 0 {
            return Err(Error::InvalidMinor(format!("{set:?}")));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

fn elements_of(mask: u8) -> Vec<usize> {
    (0..8).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

impl MinorIndex {
    pub const EMPTY: MinorIndex = MinorIndex { rows: 0, cols: 0 };

    /// Builds `(I, J)` from 1-based index sets.
    pub fn new(rows: &[usize], cols: &[usize]) -> Result<Self> {
        let (r, c) = (mask_of(rows)?, mask_of(cols)?);
        if r.count_ones() != c.count_ones() {
            return Err(Error::InvalidMinor(format!(
                "|I| = {} but |J| = {}",
                r.count_ones(),
                c.count_ones()
            )));
        }
        Ok(MinorIndex { rows: r, cols: c })
    }

    pub(crate) fn from_masks(rows: u8, cols: u8) -> Self {
        debug_assert_eq!(rows.count_ones(), cols.count_ones());
        MinorIndex { rows, cols }
    }

    /// The principal minor on `I`.
    pub fn principal(set: &[usize]) -> Result<Self> {
        Self::new(set, set)
    }

    pub fn row_mask(self) -> u8 {
        self.rows
    }

    pub fn col_mask(self) -> u8 {
        self.cols
    }

    pub fn size(self) -> usize {
        self.rows.count_ones() as usize
    }

    pub fn rows(self) -> Vec<usize> {
        elements_of(self.rows)
    }

    pub fn cols(self) -> Vec<usize> {
        elements_of(self.cols)
    }

    /// `(J, I)`.
    pub fn transposed(self) -> Self {
        MinorIndex {
            rows: self.cols,
            cols: self.rows,
        }
    }

    pub fn is_principal(self) -> bool {
        self.rows == self.cols
    }

    /// `|I ∪ J|`.
    pub fn spread(self) -> usize {
        (self.rows | self.cols).count_ones() as usize
    }

    /// Largest index used, 0 for the empty minor.
    pub fn max_index(self) -> usize {
        8 - (self.rows | self.cols).leading_zeros() as usize
    }

    /// `I' ⊆ I` and `J' ⊆ J`.
    pub fn contains(self, other: MinorIndex) -> bool {
        other.rows & !self.rows == 0 && other.cols & !self.cols == 0
    }

    /// Determinant of the `(I, J)` submatrix of `m`.
    pub fn eval(self, f: &FieldTower, m: &SquareMatrix) -> FieldElement {
        let (r, c) = (self.rows(), self.cols());
        let k = r.len();
        let sub = |i: usize, j: usize| m.get(r[i] - 1, c[j] - 1);
        match k {
            0 => FieldElement::ONE,
            1 => sub(0, 0),
            2 => f.sub(f.mul(sub(0, 0), sub(1, 1)), f.mul(sub(0, 1), sub(1, 0))),
            3 => {
                let minor2 = |a: usize, b: usize| {
                    f.sub(f.mul(sub(1, a), sub(2, b)), f.mul(sub(1, b), sub(2, a)))
                };
                let t0 = f.mul(sub(0, 0), minor2(1, 2));
                let t1 = f.mul(sub(0, 1), minor2(0, 2));
                let t2 = f.mul(sub(0, 2), minor2(0, 1));
                f.add(f.sub(t0, t1), t2)
            }
            _ => {
                let entries: Vec<FieldElement> =
                    (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| sub(i, j)).collect();
                linalg::determinant(f, &entries, k)
            }
        }
    }
}

impl Ord for MinorIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.rows().cmp(&other.rows()))
            .then_with(|| self.cols().cmp(&other.cols()))
    }
}

impl PartialOrd for MinorIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Vec<usize>| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "I:{{{}}} J:{{{}}}", show(self.rows()), show(self.cols()))
    }
}

impl FromStr for MinorIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMinor(s.to_string());
        let parse_set = |part: &str, tag: &str| -> Result<Vec<usize>> {
            let inner = part
                .trim()
                .strip_prefix(tag)
                .and_then(|x| x.strip_prefix('{'))
                .and_then(|x| x.strip_suffix('}'))
                .ok_or_else(bad)?;
            if inner.trim().is_empty() {
                return Ok(Vec::new());
            }
            inner
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| bad()))
                .collect()
        };
        let (i, j) = s.trim().split_once(' ').ok_or_else(bad)?;
        MinorIndex::new(&parse_set(i, "I:")?, &parse_set(j, "J:")?)
    }
}

/// All minors of the generic ell x ell matrix, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorBasis {
    ell: usize,
    minors: Vec<MinorIndex>,
    // position by (rows << 4 | cols); ell <= 4 keeps both masks within 4 bits.
    lookup: Vec<u16>,
}

const NO_POSITION: u16 = u16::MAX;

impl MinorBasis {
    pub fn new(ell: usize) -> Result<Self> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(Error::UnsupportedEll(ell));
        }
        let masks: Vec<u8> = (0..1u8 << ell).collect();
        let mut minors: Vec<MinorIndex> = masks
            .iter()
            .flat_map(|&r| {
                masks
                    .iter()
                    .filter(move |&&c| c.count_ones() == r.count_ones())
                    .map(move |&c| MinorIndex::from_masks(r, c))
            })
            .collect();
        minors.sort();
        let mut lookup = vec![NO_POSITION; 256];
        for (i, m) in minors.iter().enumerate() {
            lookup[((m.rows as usize) << 4) | m.cols as usize] = i as u16;
        }
        Ok(MinorBasis { ell, minors, lookup })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.minors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minors.is_empty()
    }

    pub fn minors(&self) -> &[MinorIndex] {
        &self.minors
    }

    pub fn get(&self, i: usize) -> Option<MinorIndex> {
        self.minors.get(i).copied()
    }

    pub fn position(&self, m: MinorIndex) -> Option<usize> {
        if m.max_index() > self.ell {
            return None;
        }
        match self.lookup[((m.rows as usize) << 4) | m.cols as usize] {
            NO_POSITION => None,
            p => Some(p as usize),
        }
    }

    /// Every basis minor evaluated at `m`, in basis order.
    pub fn eval_all(&self, f: &FieldTower, m: &SquareMatrix) -> Vec<FieldElement> {
        self.minors.iter().map(|idx| idx.eval(f, m)).collect()
    }
}

/// `binom(2 ell, ell)` minors of the generic ell x ell matrix.
pub fn basis(ell: usize) -> Result<MinorBasis> {
    MinorBasis::new(ell)
}

pub fn eval_minor(f: &FieldTower, idx: MinorIndex, h: &HermitianMatrix) -> FieldElement {
    idx.eval(f, h.matrix())
}

/// A linear combination `sum f_{I,J} det_{I,J}` with nonzero stored coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorCombination {
    ell: usize,
    coeffs: BTreeMap<MinorIndex, FieldElement>,
}

impl MinorCombination {
    pub fn zero(ell: usize) -> Self {
        MinorCombination {
            ell,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(ell: usize, c: FieldElement) -> Self {
        Self::single(ell, MinorIndex::EMPTY, c).expect("the empty minor is always valid")
    }

    pub fn single(ell: usize, idx: MinorIndex, c: FieldElement) -> Result<Self> {
        let mut f = Self::zero(ell);
        f.set(idx, c)?;
        Ok(f)
    }

    pub fn from_terms<I>(ell: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MinorIndex, FieldElement)>,
    {
        let mut f = Self::zero(ell);
        for (idx, c) in terms {
            f.set(idx, c)?;
        }
        Ok(f)
    }

    /// Coefficients given in basis order.
    pub fn from_coefficients(basis: &MinorBasis, coeffs: &[FieldElement]) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::SizeMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        Self::from_terms(basis.ell(), basis.minors().iter().copied().zip(coeffs.iter().copied()))
    }

    pub fn to_coefficients(&self, basis: &MinorBasis) -> Vec<FieldElement> {
        basis.minors().iter().map(|&m| self.coefficient(m)).collect()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn coefficient(&self, idx: MinorIndex) -> FieldElement {
        self.coeffs.get(&idx).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Sets a coefficient; zero removes the term.
    pub fn set(&mut self, idx: MinorIndex, c: FieldElement) -> Result<()> {
        if idx.max_index() > self.ell {
            return Err(Error::InvalidMinor(format!("{idx} for ell = {}", self.ell)));
        }
        if c.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
        Ok(())
    }

    pub fn add_term(&mut self, f: &FieldTower, idx: MinorIndex, c: FieldElement) -> Result<()> {
        let sum = f.add(self.coefficient(idx), c);
        self.set(idx, sum)
    }

    pub fn add(&self, f: &FieldTower, other: &MinorCombination) -> Result<MinorCombination> {
        if self.ell != other.ell {
            return Err(Error::SizeMismatch {
                expected: self.ell,
                found: other.ell,
            });
        }
        let mut out = self.clone();
        for (&idx, &c) in &other.coeffs {
            out.add_term(f, idx, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, f: &FieldTower, c: FieldElement) -> MinorCombination {
        let mut out = Self::zero(self.ell);
        for (&idx, &x) in &self.coeffs {
            out.set(idx, f.mul(c, x)).expect("index already valid");
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (MinorIndex, FieldElement)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Indices with nonzero coefficient, in canonical order.
    pub fn support(&self) -> Vec<MinorIndex> {
        self.coeffs.keys().copied().collect()
    }

    /// Support minors not contained (rows and columns) in another support minor.
    pub fn maximal_minors(&self) -> Vec<MinorIndex> {
        let support = self.support();
        support
            .iter()
            .copied()
            .filter(|&m| !support.iter().any(|&o| o != m && o.contains(m)))
            .collect()
    }

    /// Largest size among the maximal minors, 0 for the zero function.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|m| m.size()).max().unwrap_or(0)
    }

    pub fn eval(&self, f: &FieldTower, m: &SquareMatrix) -> Result<FieldElement> {
        if m.size() != self.ell {
            return Err(Error::SizeMismatch {
                expected: self.ell,
                found: m.size(),
            });
        }
        Ok(f.sum(self.coeffs.iter().map(|(idx, &c)| f.mul(c, idx.eval(f, m)))))
    }

    /// The combination with coefficient `f_{I,J}^q` on `det_{J,I}`.
    pub fn conjugate(&self, f: &FieldTower) -> MinorCombination {
        let mut out = Self::zero(self.ell);
        for (&idx, &c) in &self.coeffs {
            out.set(idx.transposed(), f.conjugate(c)).expect("index already valid");
        }
        out
    }

    /// `f_{I,J}^q = f_{J,I}` for every pair.
    pub fn is_self_conjugate(&self, f: &FieldTower) -> bool {
        self.conjugate(f) == *self
    }
}

impl fmt::Display for MinorCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, c)| format!("{c}*[{idx}]"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn eval_combination(f: &FieldTower, comb: &MinorCombination, h: &HermitianMatrix) -> Result<FieldElement> {
    comb.eval(f, h.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::HermitianIndexing;
    use std::sync::Arc;

    fn m(rows: &[usize], cols: &[usize]) -> MinorIndex {
        MinorIndex::new(rows, cols).unwrap()
    }

    #[test]
    fn basis_lengths_and_order() {
        let b1 = basis(1).unwrap();
        assert_eq!(b1.minors(), &[MinorIndex::EMPTY, m(&[1], &[1])]);
        let b2 = basis(2).unwrap();
        assert_eq!(
            b2.minors(),
            &[
                MinorIndex::EMPTY,
                m(&[1], &[1]),
                m(&[1], &[2]),
                m(&[2], &[1]),
                m(&[2], &[2]),
                m(&[1, 2], &[1, 2]),
            ]
        );
        assert_eq!(basis(3).unwrap().len(), 20);
        assert_eq!(basis(4).unwrap().len(), 70);
        assert!(matches!(basis(0), Err(Error::UnsupportedEll(0))));
        assert!(matches!(basis(5), Err(Error::UnsupportedEll(5))));
    }

    #[test]
    fn positions_round_trip() {
        for ell in 1..=4 {
            let b = basis(ell).unwrap();
            for (i, &idx) in b.minors().iter().enumerate() {
                assert_eq!(b.position(idx), Some(i));
            }
        }
        assert_eq!(basis(2).unwrap().position(m(&[3], &[1])), None);
    }

    #[test]
    fn display_and_parse() {
        let idx = m(&[1, 2], &[2, 3]);
        assert_eq!(idx.to_string(), "I:{1,2} J:{2,3}");
        assert_eq!("I:{1,2} J:{2,3}".parse::<MinorIndex>().unwrap(), idx);
        assert_eq!("I:{} J:{}".parse::<MinorIndex>().unwrap(), MinorIndex::EMPTY);
        assert!("I:{1} J:{1,2}".parse::<MinorIndex>().is_err());
        assert!(MinorIndex::new(&[1, 1], &[1, 2]).is_err());
    }

    #[test]
    fn minor_of_identity() {
        let f = FieldTower::new(2, 1).unwrap();
        let id = SquareMatrix::identity(3);
        assert_eq!(m(&[1, 2], &[2, 3]).eval(&f, &id), FieldElement::ZERO);
        assert_eq!(m(&[1, 2], &[1, 2]).eval(&f, &id), FieldElement::ONE);
        assert_eq!(MinorIndex::EMPTY.eval(&f, &id), FieldElement::ONE);
    }

    #[test]
    fn cofactor_matches_elimination() {
        let f = FieldTower::new(3, 1).unwrap();
        let idx = HermitianIndexing::new(Arc::new(f.clone()), 3).unwrap();
        let full = m(&[1, 2, 3], &[1, 2, 3]);
        for t in (0..idx.total()).step_by(37) {
            let h = idx.index_to_matrix(t).unwrap();
            assert_eq!(full.eval(&f, h.matrix()), h.matrix().determinant(&f));
        }
    }

    #[test]
    fn transposed_minor_is_conjugate() {
        let f = Arc::new(FieldTower::new(2, 1).unwrap());
        let idx = HermitianIndexing::new(f.clone(), 2).unwrap();
        let b = basis(2).unwrap();
        for h in idx.matrices() {
            for &mi in b.minors() {
                assert_eq!(
                    eval_minor(&f, mi.transposed(), &h),
                    f.conjugate(eval_minor(&f, mi, &h))
                );
            }
        }
    }

    #[test]
    fn det_plus_one_weight_at_small_size() {
        let f = Arc::new(FieldTower::new(2, 1).unwrap());
        let idx = HermitianIndexing::new(f.clone(), 2).unwrap();
        let det = m(&[1, 2], &[1, 2]);
        let g = MinorCombination::from_terms(2, [(det, FieldElement::ONE), (MinorIndex::EMPTY, FieldElement::ONE)]).unwrap();
        let zeros = idx
            .matrices()
            .filter(|h| eval_combination(&f, &g, h).unwrap().is_zero())
            .count();
        assert_eq!((zeros, 16 - zeros), (10, 6));
        let d = MinorCombination::single(2, det, FieldElement::ONE).unwrap();
        let weight = idx
            .matrices()
            .filter(|h| !eval_combination(&f, &d, h).unwrap().is_zero())
            .count();
        assert_eq!(weight, 10);
    }

    fn mixed_l3_example() -> MinorCombination {
        let one = FieldElement::ONE;
        MinorCombination::from_terms(
            3,
            [
                (MinorIndex::EMPTY, one),
                (m(&[1], &[2]), one),
                (m(&[1, 2], &[1, 2]), one),
                (m(&[1, 2], &[2, 3]), one),
            ],
        )
        .unwrap()
    }

    #[test]
    fn self_conjugacy() {
        let f = FieldTower::new(3, 1).unwrap();
        assert!(!mixed_l3_example().is_self_conjugate(&f));
        let principal = MinorCombination::from_terms(
            2,
            [
                (MinorIndex::EMPTY, f.element(2).unwrap()),
                (m(&[1], &[1]), FieldElement::ONE),
                (m(&[1, 2], &[1, 2]), FieldElement::ONE),
            ],
        )
        .unwrap();
        assert!(principal.is_self_conjugate(&f));
        assert_eq!(principal.conjugate(&f), principal);
    }

    #[test]
    fn maximal_minors_and_spread() {
        let g = mixed_l3_example();
        assert_eq!(g.maximal_minors(), vec![m(&[1, 2], &[1, 2]), m(&[1, 2], &[2, 3])]);
        assert_eq!(m(&[1, 2], &[2, 3]).spread(), 3);
        let c = MinorCombination::constant(3, FieldElement::ONE);
        assert_eq!(c.support(), vec![MinorIndex::EMPTY]);
        assert_eq!(c.maximal_minors(), vec![MinorIndex::EMPTY]);
        assert_eq!(MinorIndex::EMPTY.spread(), 0);
    }

    #[test]
    fn set_rejects_out_of_range_minor() {
        let mut g = MinorCombination::zero(2);
        assert!(g.set(m(&[3], &[1]), FieldElement::ONE).is_err());
        g.set(m(&[2], &[1]), FieldElement::ONE).unwrap();
        g.set(m(&[2], &[1]), FieldElement::ZERO).unwrap();
        assert!(g.is_zero());
    }
}
