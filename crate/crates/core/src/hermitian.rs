//! Hermitian matrices over F_{q^2}: canonical enumeration, rank, group actions and counts.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};
use crate::linalg;

/// Largest ell for which the minor basis and the indexing are supported.
pub const MAX_ELL: usize = 4;

/// Largest space that brute-force counting will walk.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// A dense square matrix over F_{q^2}, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<FieldElement>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            entries: vec![FieldElement::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// The unit matrix `E_{i,j}` (0-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(i, j, FieldElement::ONE);
        m
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(SquareMatrix {
            n,
            entries: rows.concat(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.entries[i * self.n + j] = x;
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.entries.chunks(self.n.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn mul(&self, f: &FieldTower, other: &SquareMatrix) -> SquareMatrix {
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f.sum((0..n).map(|k| f.mul(self.get(i, k), other.get(k, j)))));
            }
        }
        out
    }

    pub fn add(&self, f: &FieldTower, other: &SquareMatrix) -> Result<SquareMatrix> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(SquareMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, f: &FieldTower, c: FieldElement) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&x| f.mul(c, x)).collect(),
        }
    }

    pub fn transpose(&self) -> SquareMatrix {
        let mut out = SquareMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise conjugate.
    pub fn conjugate(&self, f: &FieldTower) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&x| f.conjugate(x)).collect(),
        }
    }

    /// `M* = conj(M)^T`.
    pub fn conjugate_transpose(&self, f: &FieldTower) -> SquareMatrix {
        self.conjugate(f).transpose()
    }

    pub fn is_hermitian(&self, f: &FieldTower) -> bool {
        self.conjugate_transpose(f) == *self
    }

    pub fn rank(&self, f: &FieldTower) -> usize {
        linalg::rank(f, &self.rows())
    }

    pub fn determinant(&self, f: &FieldTower) -> FieldElement {
        linalg::determinant(f, &self.entries, self.n)
    }

    pub fn inverse(&self, f: &FieldTower) -> Result<SquareMatrix> {
        Ok(SquareMatrix {
            n: self.n,
            entries: linalg::inverse(f, &self.entries, self.n)?,
        })
    }

    pub fn is_invertible(&self, f: &FieldTower) -> bool {
        self.rank(f) == self.n
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n.max(1)).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// An ell x ell matrix `H` over F_{q^2} with `H* = H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianMatrix(SquareMatrix);

impl HermitianMatrix {
    pub fn new(f: &FieldTower, m: SquareMatrix) -> Result<Self> {
        if m.is_hermitian(f) {
            Ok(HermitianMatrix(m))
        } else {
            Err(Error::NotHermitian)
        }
    }

    pub fn zero(ell: usize) -> Self {
        HermitianMatrix(SquareMatrix::zeros(ell))
    }

    pub fn ell(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    pub fn rank(&self, f: &FieldTower) -> usize {
        self.0.rank(f)
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Canonical bijection between `[0, q^(ell^2))` and the ell x ell Hermitian matrices.
///
/// Digits are read least significant first: the ell diagonal entries in radix q (each
/// digit a position in the sorted subfield list), then the strict upper triangle in
/// row-major order in radix q^2. The lower triangle is the conjugate of the upper.
#[derive(Clone, Debug)]
pub struct HermitianIndexing {
    ell: usize,
    tower: Arc<FieldTower>,
    total: u64,
}

impl HermitianIndexing {
    pub fn new(tower: Arc<FieldTower>, ell: usize) -> Result<Self> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(Error::UnsupportedEll(ell));
        }
        let total = (tower.q() as u64).pow((ell * ell) as u32);
        Ok(HermitianIndexing { ell, tower, total })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// `q^(ell^2)`, the number of Hermitian matrices.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn index_to_matrix(&self, t: u64) -> Result<HermitianMatrix> {
        if t >= self.total {
            return Err(Error::IndexOutOfRange {
                index: t,
                total: self.total,
            });
        }
        let f = &*self.tower;
        let (q, q2) = (f.q() as u64, f.order() as u64);
        let mut m = SquareMatrix::zeros(self.ell);
        let mut rest = t;
        for i in 0..self.ell {
            m.set(i, i, f.subfield()[(rest % q) as usize]);
            rest /= q;
        }
        for i in 0..self.ell {
            for j in i + 1..self.ell {
                let x = f.element((rest % q2) as u32).expect("digit below q^2");
                rest /= q2;
                m.set(i, j, x);
                m.set(j, i, f.conjugate(x));
            }
        }
        Ok(HermitianMatrix(m))
    }

    pub fn matrix_to_index(&self, h: &HermitianMatrix) -> Result<u64> {
        if h.ell() != self.ell {
            return Err(Error::SizeMismatch {
                expected: self.ell,
                found: h.ell(),
            });
        }
        let f = &*self.tower;
        let (q, q2) = (f.q() as u64, f.order() as u64);
        let mut t = 0u64;
        for i in (0..self.ell).rev() {
            for j in (i + 1..self.ell).rev() {
                t = t * q2 + h.get(i, j).index() as u64;
            }
        }
        for i in (0..self.ell).rev() {
            let pos = f
                .subfield_position(h.get(i, i))
                .ok_or(Error::NotHermitian)?;
            t = t * q + pos as u64;
        }
        Ok(t)
    }

    pub fn matrices(&self) -> impl Iterator<Item = HermitianMatrix> + '_ {
        (0..self.total).map(|t| self.index_to_matrix(t).expect("index in range"))
    }

    pub fn random(&self, rng: &mut impl Rng) -> HermitianMatrix {
        self.index_to_matrix(rng.random_range(0..self.total))
            .expect("index in range")
    }
}

/// `A* H A`.
pub fn congruence(f: &FieldTower, a: &SquareMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.size() != h.ell() {
        return Err(Error::SizeMismatch {
            expected: h.ell(),
            found: a.size(),
        });
    }
    if !a.is_invertible(f) {
        return Err(Error::SingularMatrix);
    }
    let out = a.conjugate_transpose(f).mul(f, h.matrix()).mul(f, a);
    Ok(HermitianMatrix(out))
}

/// `H + M`.
pub fn translate(f: &FieldTower, h: &HermitianMatrix, m: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix(h.matrix().add(f, m.matrix())?))
}

/// `H^T`, which for a Hermitian matrix is its entrywise conjugate.
pub fn transpose(h: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix(h.matrix().transpose())
}

/// `conj(a)^T a`, a rank-one Hermitian matrix.
pub fn rank_one_from_vector(f: &FieldTower, a: &[FieldElement]) -> Result<HermitianMatrix> {
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    Ok(HermitianMatrix(outer(f, a, a)))
}

/// `conj(b)^T a + conj(a)^T b`, the Hermitian part of the outer product of two vectors.
pub fn symmetric_outer(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> HermitianMatrix {
    let m = outer(f, b, a).add(f, &outer(f, a, b)).expect("same size");
    HermitianMatrix(m)
}

/// `conj(u)^T v`.
pub fn outer(f: &FieldTower, u: &[FieldElement], v: &[FieldElement]) -> SquareMatrix {
    let n = u.len();
    let mut m = SquareMatrix::zeros(n);
    for (i, &a) in u.iter().enumerate() {
        for (j, &b) in v.iter().enumerate() {
            m.set(i, j, f.mul(f.conjugate(a), b));
        }
    }
    m
}

/// `q^C(ell,2) * prod_{i=1..ell} (q^i + (-1)^i)`, the number of invertible Hermitian matrices.
pub fn count_invertible(ell: u32, q: u64) -> u128 {
    let q = q as i128;
    let mut acc: i128 = q.pow(ell * ell.saturating_sub(1) / 2);
    for i in 1..=ell {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        acc *= q.pow(i) + sign;
    }
    acc as u128
}

/// Counts the invertible Hermitian matrices by ranking all of them.
pub fn count_invertible_bruteforce(tower: Arc<FieldTower>, ell: usize) -> Result<u64> {
    let idx = HermitianIndexing::new(tower, ell)?;
    if idx.total() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLargeForBruteForce {
            size: idx.total() as u128,
            limit: BRUTE_FORCE_LIMIT as u128,
        });
    }
    let f = idx.tower();
    Ok((0..idx.total())
        .into_par_iter()
        .filter(|&t| {
            let h = idx.index_to_matrix(t).expect("index in range");
            h.matrix().determinant(f) != FieldElement::ZERO
        })
        .count() as u64)
}

pub fn random_vector(f: &FieldTower, len: usize, rng: &mut impl Rng) -> Vec<FieldElement> {
    (0..len)
        .map(|_| f.element(rng.random_range(0..f.order())).expect("in range"))
        .collect()
}

pub fn random_nonzero_vector(f: &FieldTower, len: usize, rng: &mut impl Rng) -> Vec<FieldElement> {
    loop {
        let v = random_vector(f, len, rng);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

pub fn random_invertible(f: &FieldTower, n: usize, rng: &mut impl Rng) -> SquareMatrix {
    loop {
        let entries = random_vector(f, n * n, rng);
        let m = SquareMatrix { n, entries };
        if m.is_invertible(f) {
            return m;
        }
    }
}
