//! Exhaustive minimum-weight search over the row space of a small generator matrix.
//!
//! Messages are visited in reflected mixed-radix Gray order (Knuth, Algorithm H), so each
//! step changes one digit and the codeword is updated by adding one precomputed scaled
//! row. The message space is split into chunks by fixing the most significant digits;
//! chunks run in parallel and their results are combined by minimum weight, with ties
//! broken by the lexicographically smallest digit vector, so the outcome does not
//! depend on scheduling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};

/// A field of at most 256 elements addressed by ordinals, ordinal 0 being zero.
#[derive(Clone, Debug)]
pub struct SmallField {
    elements: Vec<FieldElement>,
    ordinals: Vec<u16>,
    add: Vec<u8>,
    sub: Vec<u8>,
    mul: Vec<u8>,
}

const ABSENT: u16 = u16::MAX;

impl SmallField {
    fn from_elements(f: &FieldTower, elements: Vec<FieldElement>) -> Result<Self> {
        let n = elements.len();
        if n > 256 {
            return Err(Error::TooLarge {
                size: n as u128,
                limit: 256,
            });
        }
        let mut ordinals = vec![ABSENT; f.order() as usize];
        for (i, x) in elements.iter().enumerate() {
            ordinals[x.index() as usize] = i as u16;
        }
        let table = |op: &dyn Fn(FieldElement, FieldElement) -> FieldElement| -> Vec<u8> {
            let mut t = vec![0u8; n * n];
            for (i, &a) in elements.iter().enumerate() {
                for (j, &b) in elements.iter().enumerate() {
                    t[i * n + j] = ordinals[op(a, b).index() as usize] as u8;
                }
            }
            t
        };
        let add = table(&|a, b| f.add(a, b));
        let sub = table(&|a, b| f.sub(a, b));
        let mul = table(&|a, b| f.mul(a, b));
        Ok(SmallField {
            elements,
            ordinals,
            add,
            sub,
            mul,
        })
    }

    /// All of F_{q^2}.
    pub fn full(f: &FieldTower) -> Result<Self> {
        Self::from_elements(f, f.elements().collect())
    }

    /// The subfield F_q.
    pub fn subfield(f: &FieldTower) -> Self {
        Self::from_elements(f, f.subfield().to_vec()).expect("q <= 81")
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn ordinal(&self, x: FieldElement) -> Option<u8> {
        match self.ordinals.get(x.index() as usize) {
            Some(&o) if o != ABSENT => Some(o as u8),
            _ => None,
        }
    }

    pub fn element(&self, o: u8) -> FieldElement {
        self.elements[o as usize]
    }
}

/// Outcome of an exhaustive minimum-weight search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeight {
    pub weight: usize,
    /// Lexicographically smallest message (by ordinal digits) attaining `weight`.
    pub message: Vec<FieldElement>,
    /// Number of nonzero messages attaining `weight`.
    pub count: u64,
    /// Number of nonzero messages visited.
    pub messages: u128,
}

/// `N^k - 1`, saturating.
pub fn message_count(alphabet: usize, k: usize) -> u128 {
    (alphabet as u128)
        .checked_pow(k as u32)
        .map_or(u128::MAX, |x| x - 1)
}

#[derive(Clone, Debug)]
struct Best {
    weight: usize,
    digits: Vec<u8>,
    count: u64,
}

impl Best {
    fn none() -> Self {
        Best {
            weight: usize::MAX,
            digits: Vec::new(),
            count: 0,
        }
    }

    #[inline]
    fn offer(&mut self, weight: usize, digits: impl FnOnce() -> Vec<u8>) {
        if weight < self.weight {
            self.weight = weight;
            self.digits = digits();
            self.count = 1;
        } else if weight == self.weight {
            self.count += 1;
            let d = digits();
            if d < self.digits {
                self.digits = d;
            }
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if other.weight < self.weight {
            return other;
        }
        if other.weight == self.weight {
            self.count += other.count;
            if other.digits < self.digits {
                self.digits = other.digits;
            }
        }
        self
    }
}

/// Minimum weight over all nonzero combinations of `rows` with coefficients in `field`.
pub fn min_weight(field: &SmallField, rows: &[Vec<FieldElement>], budget: u128) -> Result<MinWeight> {
    let k = rows.len();
    let big_n = field.size();
    let needed = message_count(big_n, k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    if k == 0 || needed == 0 {
        return Err(Error::Precondition("empty message space".into()));
    }
    let n = rows[0].len();
    let ord_rows: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| field.ordinal(x).ok_or(Error::NotInSubfield))
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<_>>()?;
    if ord_rows.iter().any(|r| r.len() != n) {
        return Err(Error::SizeMismatch {
            expected: n,
            found: ord_rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
        });
    }

    // Fix enough top digits for a few hundred chunks, keeping at least one Gray digit.
    let mut top = 0;
    while top + 1 < k && (big_n as u128).pow(top as u32) < 256 {
        top += 1;
    }
    let low = k - top;
    let chunks = (big_n as u64).pow(top as u32);

    let best = if big_n == 2 {
        let bit_rows: Vec<Vec<u64>> = ord_rows.iter().map(|r| pack_bits(r)).collect();
        (0..chunks)
            .into_par_iter()
            .map(|c| binary_chunk(&bit_rows, low, c))
            .reduce(Best::none, Best::merge)
    } else {
        let scaled: Vec<Vec<Vec<u8>>> = ord_rows[..low]
            .iter()
            .map(|r| {
                (0..big_n)
                    .map(|d| r.iter().map(|&x| field.mul[d * big_n + x as usize]).collect())
                    .collect()
            })
            .collect();
        (0..chunks)
            .into_par_iter()
            .map(|c| general_chunk(field, &ord_rows, &scaled, low, c))
            .reduce(Best::none, Best::merge)
    };

    Ok(MinWeight {
        weight: best.weight,
        message: best.digits.iter().map(|&o| field.element(o)).collect(),
        count: best.count,
        messages: needed,
    })
}

fn top_digits(big_n: usize, k: usize, low: usize, mut chunk: u64) -> Vec<u8> {
    let mut digits = vec![0u8; k];
    for d in digits.iter_mut().skip(low) {
        *d = (chunk % big_n as u64) as u8;
        chunk /= big_n as u64;
    }
    digits
}

/// Loopless reflected Gray code state over `m` digits of radix `radix`.
struct Gray {
    a: Vec<u8>,
    focus: Vec<usize>,
    up: Vec<bool>,
    last: u8,
}

impl Gray {
    fn new(m: usize, radix: usize) -> Self {
        Gray {
            a: vec![0; m],
            focus: (0..=m).collect(),
            up: vec![true; m],
            last: (radix - 1) as u8,
        }
    }

    /// Advances one step; returns `(digit, old, new)` or `None` when exhausted.
    #[inline]
    fn step(&mut self) -> Option<(usize, u8, u8)> {
        let j = self.focus[0];
        self.focus[0] = 0;
        if j == self.a.len() {
            return None;
        }
        let old = self.a[j];
        let new = if self.up[j] { old + 1 } else { old - 1 };
        self.a[j] = new;
        if new == 0 || new == self.last {
            self.up[j] = !self.up[j];
            self.focus[j] = self.focus[j + 1];
            self.focus[j + 1] = j + 1;
        }
        Some((j, old, new))
    }
}

fn general_chunk(
    field: &SmallField,
    rows: &[Vec<u8>],
    scaled: &[Vec<Vec<u8>>],
    low: usize,
    chunk: u64,
) -> Best {
    let (k, big_n, n) = (rows.len(), field.size(), rows[0].len());
    let mut digits = top_digits(big_n, k, low, chunk);
    let mut word = vec![0u8; n];
    for j in low..k {
        let d = digits[j] as usize;
        if d == 0 {
            continue;
        }
        for (w, &x) in word.iter_mut().zip(&rows[j]) {
            let s = field.mul[d * big_n + x as usize];
            *w = field.add[*w as usize * big_n + s as usize];
        }
    }
    let mut nonzero_digits = digits[low..].iter().filter(|&&d| d != 0).count();
    let mut weight = word.iter().filter(|&&w| w != 0).count();
    let mut best = Best::none();
    let mut gray = Gray::new(low, big_n);
    loop {
        if nonzero_digits > 0 {
            best.offer(weight, || {
                digits[..low].copy_from_slice(&gray.a);
                digits.clone()
            });
        }
        let Some((j, old, new)) = gray.step() else {
            break;
        };
        let delta = field.sub[new as usize * big_n + old as usize] as usize;
        let add_row = &scaled[j][delta];
        weight = 0;
        for (w, &s) in word.iter_mut().zip(add_row) {
            *w = field.add[*w as usize * big_n + s as usize];
            weight += (*w != 0) as usize;
        }
        match (old, new) {
            (0, _) => nonzero_digits += 1,
            (_, 0) => nonzero_digits -= 1,
            _ => {}
        }
    }
    best
}

fn pack_bits(row: &[u8]) -> Vec<u64> {
    let mut words = vec![0u64; row.len().div_ceil(64)];
    for (t, &x) in row.iter().enumerate() {
        if x != 0 {
            words[t / 64] |= 1 << (t % 64);
        }
    }
    words
}

fn binary_chunk(rows: &[Vec<u64>], low: usize, chunk: u64) -> Best {
    let k = rows.len();
    let mut digits = top_digits(2, k, low, chunk);
    let mut word = vec![0u64; rows[0].len()];
    for j in low..k {
        if digits[j] != 0 {
            for (w, &x) in word.iter_mut().zip(&rows[j]) {
                *w ^= x;
            }
        }
    }
    let mut nonzero_digits = digits[low..].iter().filter(|&&d| d != 0).count();
    let mut weight = word.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    let mut best = Best::none();
    let mut gray = Gray::new(low, 2);
    loop {
        if nonzero_digits > 0 {
            best.offer(weight, || {
                digits[..low].copy_from_slice(&gray.a);
                digits.clone()
            });
        }
        let Some((j, _, new)) = gray.step() else {
            break;
        };
        weight = 0;
        for (w, &x) in word.iter_mut().zip(&rows[j]) {
            *w ^= x;
            weight += w.count_ones() as usize;
        }
        if new == 1 {
            nonzero_digits += 1;
        } else {
            nonzero_digits -= 1;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &FieldTower, i: u32) -> FieldElement {
        f.element(i).unwrap()
    }

    /// Plain enumeration of all messages in counting order, for comparison.
    fn naive(field: &SmallField, f: &FieldTower, rows: &[Vec<FieldElement>]) -> (usize, u64, Vec<FieldElement>) {
        let (k, big_n, n) = (rows.len(), field.size(), rows[0].len());
        let mut best = (usize::MAX, 0u64, Vec::new());
        let mut best_digits: Vec<u8> = Vec::new();
        for m in 1..(big_n as u64).pow(k as u32) {
            let mut rest = m;
            let digits: Vec<u8> = (0..k)
                .map(|_| {
                    let d = (rest % big_n as u64) as u8;
                    rest /= big_n as u64;
                    d
                })
                .collect();
            let w = (0..n)
                .filter(|&t| {
                    !f.sum((0..k).map(|j| f.mul(field.element(digits[j]), rows[j][t]))).is_zero()
                })
                .count();
            if w < best.0 {
                best = (w, 1, Vec::new());
                best_digits = digits;
            } else if w == best.0 {
                best.1 += 1;
                if digits < best_digits {
                    best_digits = digits;
                }
            }
        }
        best.2 = best_digits.iter().map(|&o| field.element(o)).collect();
        best
    }

    #[test]
    fn gray_code_visits_every_state_once() {
        for (m, radix) in [(3, 2), (3, 3), (2, 5), (4, 4)] {
            let mut g = Gray::new(m, radix);
            let mut seen = std::collections::HashSet::new();
            seen.insert(g.a.clone());
            while let Some((_, old, new)) = g.step() {
                assert_eq!((old as i32 - new as i32).abs(), 1);
                assert!(seen.insert(g.a.clone()));
            }
            assert_eq!(seen.len(), radix.pow(m as u32));
        }
    }

    #[test]
    fn matches_naive_enumeration() {
        let f = FieldTower::for_q(3).unwrap();
        let full = SmallField::full(&f).unwrap();
        let sub = SmallField::subfield(&f);
        let rows = vec![
            vec![el(&f, 1), el(&f, 0), el(&f, 4), el(&f, 2), el(&f, 7)],
            vec![el(&f, 0), el(&f, 1), el(&f, 1), el(&f, 5), el(&f, 3)],
            vec![el(&f, 2), el(&f, 2), el(&f, 0), el(&f, 1), el(&f, 0)],
        ];
        let got = min_weight(&full, &rows, 1 << 20).unwrap();
        let (w, c, m) = naive(&full, &f, &rows);
        assert_eq!((got.weight, got.count, got.message), (w, c, m));

        let rows = vec![
            vec![el(&f, 1), el(&f, 0), el(&f, 2), el(&f, 2), el(&f, 1), el(&f, 0)],
            vec![el(&f, 0), el(&f, 1), el(&f, 1), el(&f, 2), el(&f, 0), el(&f, 0)],
            vec![el(&f, 2), el(&f, 2), el(&f, 0), el(&f, 1), el(&f, 0), el(&f, 1)],
            vec![el(&f, 0), el(&f, 0), el(&f, 0), el(&f, 1), el(&f, 1), el(&f, 1)],
        ];
        let got = min_weight(&sub, &rows, 1 << 20).unwrap();
        let (w, c, m) = naive(&sub, &f, &rows);
        assert_eq!((got.weight, got.count, got.message), (w, c, m));
    }

    #[test]
    fn binary_path_matches_naive() {
        let f = FieldTower::for_q(2).unwrap();
        let sub = SmallField::subfield(&f);
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        let rows: Vec<Vec<FieldElement>> = (0..10u32)
            .map(|i| (0..70u32).map(|t| if (t * 7 + i * 13 + t * i) % 3 == 0 { o } else { z }).collect())
            .collect();
        let got = min_weight(&sub, &rows, 1 << 20).unwrap();
        let (w, c, m) = naive(&sub, &f, &rows);
        assert_eq!((got.weight, got.count, got.message), (w, c, m));
    }

    #[test]
    fn budget_is_enforced() {
        let f = FieldTower::for_q(2).unwrap();
        let full = SmallField::full(&f).unwrap();
        let rows = vec![vec![FieldElement::ONE; 4]; 6];
        assert!(matches!(
            min_weight(&full, &rows, 4000),
            Err(Error::BudgetExceeded { needed: 4095, budget: 4000 })
        ));
    }

    #[test]
    fn rows_outside_the_alphabet_are_rejected() {
        let f = FieldTower::for_q(2).unwrap();
        let sub = SmallField::subfield(&f);
        let rows = vec![vec![el(&f, 2)]];
        assert!(matches!(min_weight(&sub, &rows, 10), Err(Error::NotInSubfield)));
    }
}
