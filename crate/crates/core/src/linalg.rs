//! Dense exact linear algebra over a [`FieldTower`].

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};

/// Reduces `rows` in place to reduced row echelon form and returns the pivot columns.
///
/// Pivots are the first nonzero entry in column order; no pivoting heuristics.
pub fn row_reduce(f: &FieldTower, rows: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = f.sub(*x, f.mul(factor, p));
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(f: &FieldTower, rows: &[Vec<FieldElement>]) -> usize {
    let mut work = rows.to_vec();
    row_reduce(f, &mut work).len()
}

/// Determinant of the `n x n` row-major matrix `m` by elimination.
pub fn determinant(f: &FieldTower, m: &[FieldElement], n: usize) -> FieldElement {
    let mut a = m.to_vec();
    let mut det = FieldElement::ONE;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
            return FieldElement::ZERO;
        };
        if p != col {
            for j in 0..n {
                a.swap(p * n + j, col * n + j);
            }
            det = f.neg(det);
        }
        let pivot = a[col * n + col];
        det = f.mul(det, pivot);
        let inv = f.inv(pivot).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = f.mul(a[r * n + col], inv);
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
            }
        }
    }
    det
}

/// Inverse of the `n x n` row-major matrix `m`.
pub fn inverse(f: &FieldTower, m: &[FieldElement], n: usize) -> Result<Vec<FieldElement>> {
    let mut aug: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut row = m[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| {
                if i == j {
                    FieldElement::ONE
                } else {
                    FieldElement::ZERO
                }
            }));
            row
        })
        .collect();
    let pivots = row_reduce(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.into_iter().flat_map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &FieldTower, i: u32) -> FieldElement {
        f.element(i).unwrap()
    }

    #[test]
    fn determinant_of_small_matrices() {
        let f = FieldTower::new(3, 1).unwrap();
        // [[1,2],[2,1]] over F_3: 1 - 4 = -3 = 0
        let m = [el(&f, 1), el(&f, 2), el(&f, 2), el(&f, 1)];
        assert_eq!(determinant(&f, &m, 2), FieldElement::ZERO);
        // [[0,1],[1,0]]: -1 = 2
        let m = [el(&f, 0), el(&f, 1), el(&f, 1), el(&f, 0)];
        assert_eq!(determinant(&f, &m, 2), el(&f, 2));
    }

    #[test]
    fn inverse_round_trip() {
        let f = FieldTower::new(2, 1).unwrap();
        let m = [el(&f, 2), el(&f, 1), el(&f, 1), el(&f, 0)];
        let inv = inverse(&f, &m, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s = f.sum((0..2).map(|k| f.mul(m[i * 2 + k], inv[k * 2 + j])));
                assert_eq!(s, if i == j { FieldElement::ONE } else { FieldElement::ZERO });
            }
        }
        let singular = [el(&f, 1), el(&f, 1), el(&f, 1), el(&f, 1)];
        assert!(matches!(inverse(&f, &singular, 2), Err(Error::SingularMatrix)));
    }

    #[test]
    fn rank_counts_independent_rows() {
        let f = FieldTower::new(2, 1).unwrap();
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        let rows = vec![vec![o, z, o], vec![z, o, o], vec![o, o, z]];
        assert_eq!(rank(&f, &rows), 2);
    }
}
