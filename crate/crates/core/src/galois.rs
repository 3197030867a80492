//! Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^2}.
//!
//! F_{q^2} is built once as F_p\[x\]/(m(x)) with `deg m = 2e`, and F_q is recovered as
//! the set of fixed points of the Frobenius map `x -> x^q`. Every element is an index in
//! `[0, q^2)` holding the little-endian base-p coefficient vector of its polynomial
//! representative, so index 0 is zero and index 1 is one.
//!
//! Multiplication goes through exp/log tables over a primitive element. Addition splits
//! an index into its low and high halves (each a base-p number of `e` digits) and looks
//! both up in one `q x q` digit-wise addition table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported order of F_{q^2}.
pub const MAX_FIELD_ORDER: u32 = 6561;

/// Monic moduli of degree `2e` over F_p, little-endian coefficients (constant term first).
///
/// Apart from `x^2 + 1` over F_3 these are the Conway polynomials for `p^(2e)`.
static MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1, 1]),                               // x^2 + x + 1
    (3, 1, &[1, 0, 1]),                               // x^2 + 1
    (2, 2, &[1, 1, 0, 0, 1]),                         // x^4 + x + 1
    (5, 1, &[2, 4, 1]),                               // x^2 + 4x + 2
    (7, 1, &[3, 6, 1]),                               // x^2 + 6x + 3
    (2, 3, &[1, 1, 0, 1, 1, 0, 1]),                   // x^6 + x^4 + x^3 + x + 1
    (3, 2, &[2, 0, 0, 2, 1]),                         // x^4 + 2x^3 + 2
    (2, 4, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),             // x^8 + x^4 + x^3 + x^2 + 1
    (5, 2, &[2, 4, 4, 0, 1]),                         // x^4 + 4x^2 + 4x + 2
    (3, 3, &[2, 2, 1, 0, 2, 0, 1]),                   // x^6 + 2x^4 + x^2 + 2x + 2
    (7, 2, &[3, 4, 5, 0, 1]),                         // x^4 + 5x^2 + 4x + 3
    (2, 5, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),       // x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
    (2, 6, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]), // x^12 + x^7 + x^6 + x^5 + x^3 + x + 1
    (3, 4, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),             // x^8 + 2x^5 + x^4 + 2x^2 + 2x + 2
];

/// The `(p, e)` pairs with a shipped modulus, in table order.
pub fn supported_params() -> impl Iterator<Item = (u32, u32)> {
    MODULI.iter().map(|&(p, e, _)| (p, e))
}

pub fn shipped_modulus(p: u32, e: u32) -> Option<&'static [u32]> {
    MODULI
        .iter()
        .find(|&&(mp, me, _)| mp == p && me == e)
        .map(|&(_, _, m)| m)
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q = p^e` into `(p, e)`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, e))
}

/// An element of F_{q^2}, stored as its coefficient index.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub const fn index(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Monic modulus of degree `2e`, constant term first.
    pub modulus: Vec<u32>,
}

impl FieldParams {
    /// Order of F_{q^2}.
    pub fn order(&self) -> u32 {
        self.q * self.q
    }

    /// The modulus as a string of base-p digits, constant term first.
    pub fn modulus_digits(&self) -> String {
        self.modulus
            .iter()
            .map(|&c| char::from_digit(c, 36).unwrap())
            .collect()
    }
}

/// F_{q^2} together with its subfield F_q. Immutable once built.
#[derive(Clone, Debug)]
pub struct FieldTower {
    params: FieldParams,
    order: u32,
    generator: FieldElement,
    // exp has length 2 * (order - 1) so that log sums never need a reduction.
    exp: Vec<u16>,
    log: Vec<u32>,
    lo: Vec<u8>,
    hi: Vec<u8>,
    half_add: Vec<u8>,
    neg: Vec<u16>,
    conj: Vec<u16>,
    subfield: Vec<FieldElement>,
    subfield_pos: Vec<u8>,
}

const NOT_IN_SUBFIELD: u8 = u8::MAX;

impl FieldTower {
    /// Builds the tower for `q = p^e`.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::NotPrimePower(1));
        }
        let order = (p as u64).checked_pow(2 * e).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER as u64 {
            return Err(Error::TooLargeField { p, e });
        }
        let order = order as u32;
        let q = p.pow(e);
        let modulus = shipped_modulus(p, e).ok_or(Error::NoModulusAvailable { p, e })?;
        if !poly::is_irreducible(modulus, p) {
            return Err(Error::ReducibleModulus { p, e });
        }
        let degree = 2 * e as usize;

        let (generator, exp_cycle) = (2..order)
            .chain(std::iter::once(1))
            .find_map(|g| {
                let g_poly = poly::digits(g, p, degree);
                let mut cycle = Vec::with_capacity(order as usize - 1);
                let mut cur = poly::digits(1, p, degree);
                loop {
                    cycle.push(poly::index(&cur, p) as u16);
                    cur = poly::mulmod(&cur, &g_poly, modulus, p);
                    if poly::index(&cur, p) == 1 {
                        break;
                    }
                }
                (cycle.len() == order as usize - 1).then_some((g, cycle))
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let group = order as usize - 1;
        let mut exp = exp_cycle.clone();
        exp.extend_from_slice(&exp_cycle);
        let mut log = vec![0u32; order as usize];
        for (i, &x) in exp_cycle.iter().enumerate() {
            log[x as usize] = i as u32;
        }

        let qu = q as usize;
        let lo: Vec<u8> = (0..order).map(|x| (x % q) as u8).collect();
        let hi: Vec<u8> = (0..order).map(|x| (x / q) as u8).collect();
        let mut half_add = vec![0u8; qu * qu];
        for a in 0..q {
            for b in 0..q {
                let da = poly::digits(a, p, e as usize);
                let db = poly::digits(b, p, e as usize);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                half_add[a as usize * qu + b as usize] = poly::index(&sum, p) as u8;
            }
        }
        let neg: Vec<u16> = (0..order)
            .map(|x| {
                let d: Vec<u32> = poly::digits(x, p, degree)
                    .iter()
                    .map(|&c| (p - c) % p)
                    .collect();
                poly::index(&d, p) as u16
            })
            .collect();

        let mut tower = FieldTower {
            params: FieldParams {
                p,
                e,
                q,
                modulus: modulus.to_vec(),
            },
            order,
            generator: FieldElement(generator as u16),
            exp,
            log,
            lo,
            hi,
            half_add,
            neg,
            conj: Vec::new(),
            subfield: Vec::new(),
            subfield_pos: Vec::new(),
        };
        debug_assert_eq!(tower.exp.len(), 2 * group);

        tower.conj = (0..order)
            .map(|x| tower.pow(FieldElement(x as u16), q as u64).0)
            .collect();
        tower.subfield = (0..order)
            .filter(|&x| tower.conj[x as usize] as u32 == x)
            .map(|x| FieldElement(x as u16))
            .collect();
        debug_assert_eq!(tower.subfield.len(), qu);
        tower.subfield_pos = vec![NOT_IN_SUBFIELD; order as usize];
        for (i, x) in tower.subfield.iter().enumerate() {
            tower.subfield_pos[x.0 as usize] = i as u8;
        }
        Ok(tower)
    }

    /// Builds the tower for a prime power `q`.
    pub fn for_q(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q)?;
        Self::new(p, e)
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn e(&self) -> u32 {
        self.params.e
    }

    pub fn q(&self) -> u32 {
        self.params.q
    }

    /// Order of F_{q^2}.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The primitive element used for the exp/log tables.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.order {
            Ok(FieldElement(index as u16))
        } else {
            Err(Error::ElementOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(|x| FieldElement(x as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.order).map(|x| FieldElement(x as u16))
    }

    /// The q elements of F_q, sorted by index.
    pub fn subfield(&self) -> &[FieldElement] {
        &self.subfield
    }

    #[inline]
    pub fn in_subfield(&self, x: FieldElement) -> bool {
        self.subfield_pos[x.0 as usize] != NOT_IN_SUBFIELD
    }

    /// Position of `x` in [`Self::subfield`], if `x` lies in F_q.
    #[inline]
    pub fn subfield_position(&self, x: FieldElement) -> Option<usize> {
        match self.subfield_pos[x.0 as usize] {
            NOT_IN_SUBFIELD => None,
            i => Some(i as usize),
        }
    }

    /// The element `c` of the prime field F_p (reduced mod p).
    pub fn from_integer(&self, c: i64) -> FieldElement {
        FieldElement(c.rem_euclid(self.params.p as i64) as u16)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (a, b) = (a.0 as usize, b.0 as usize);
        let q = self.params.q as usize;
        let lo = self.half_add[self.lo[a] as usize * q + self.lo[b] as usize] as u16;
        let hi = self.half_add[self.hi[a] as usize * q + self.hi[b] as usize] as u16;
        FieldElement(lo + hi * q as u16)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[s as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let group = self.order - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if n == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64 % group;
        FieldElement(self.exp[((l * (n % group)) % group) as usize])
    }

    /// `x^q`, the nontrivial automorphism of F_{q^2} over F_q.
    #[inline]
    pub fn conjugate(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.conj[a.0 as usize])
    }

    /// `x + x^q`, always in F_q.
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        self.add(a, self.conjugate(a))
    }

    /// `x^(q+1)`, always in F_q.
    pub fn norm(&self, a: FieldElement) -> FieldElement {
        self.mul(a, self.conjugate(a))
    }

    pub fn sum<I: IntoIterator<Item = FieldElement>>(&self, items: I) -> FieldElement {
        items
            .into_iter()
            .fold(FieldElement::ZERO, |acc, x| self.add(acc, x))
    }

    /// Exhaustive check of the field axioms and of the Frobenius structure.
    ///
    /// Cubic in the field order; intended for towers with `q^2 <= 81`.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let elems: Vec<FieldElement> = self.elements().collect();
        let (zero, one) = (FieldElement::ZERO, FieldElement::ONE);
        for &a in &elems {
            if self.add(a, zero) != a || self.mul(a, one) != a {
                return Err(format!("identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != zero {
                return Err(format!("additive inverse fails at {a}"));
            }
            if !a.is_zero() && self.mul(a, self.inv(a).unwrap()) != one {
                return Err(format!("multiplicative inverse fails at {a}"));
            }
            if self.conjugate(self.conjugate(a)) != a {
                return Err(format!("conjugation is not an involution at {a}"));
            }
            if self.in_subfield(a) != (self.conjugate(a) == a) {
                return Err(format!("subfield membership disagrees with x^q = x at {a}"));
            }
            for &b in &elems {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at ({a}, {b})"));
                }
                if self.conjugate(self.mul(a, b))
                    != self.mul(self.conjugate(a), self.conjugate(b))
                    || self.conjugate(self.add(a, b))
                        != self.add(self.conjugate(a), self.conjugate(b))
                {
                    return Err(format!("conjugation is not a homomorphism at ({a}, {b})"));
                }
                for &c in &elems {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("additive associativity fails at ({a}, {b}, {c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        if self.subfield.len() != self.params.q as usize {
            return Err(format!(
                "subfield has {} elements, expected {}",
                self.subfield.len(),
                self.params.q
            ));
        }
        Ok(())
    }
}

/// Polynomial helpers over F_p used only while building tables.
pub(crate) mod poly {
    pub fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
        let mut d = vec![0; len];
        for slot in d.iter_mut() {
            *slot = x % p;
            x /= p;
        }
        d
    }

    pub fn index(d: &[u32], p: u32) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    /// `a * b mod m` for a monic `m`; `a` and `b` have length `deg m`.
    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let deg = m.len() - 1;
        let mut prod = vec![0u32; 2 * deg];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for top in (deg..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (k, &mk) in m.iter().enumerate() {
                let slot = top - deg + k;
                prod[slot] = (prod[slot] + (p - c) * mk) % p;
            }
        }
        prod.truncate(deg);
        prod
    }

    /// Remainder of `a` modulo a monic `g`.
    fn rem(a: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        let dg = g.len() - 1;
        while r.len() > dg {
            let c = *r.last().unwrap();
            let shift = r.len() - 1 - dg;
            if c != 0 {
                for (k, &gk) in g.iter().enumerate() {
                    r[shift + k] = (r[shift + k] + (p - c) * gk) % p;
                }
            }
            r.pop();
        }
        r
    }

    /// Exhaustive test: no monic factor of degree `1..=deg/2` divides `m`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        if deg == 0 || *m.last().unwrap() != 1 {
            return false;
        }
        for d in 1..=deg / 2 {
            for low in 0..p.pow(d as u32) {
                let mut g = digits(low, p, d);
                g.push(1);
                if rem(m, &g, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_small_cases() {
        let f = FieldTower::new(2, 1).unwrap();
        assert_eq!((f.order(), f.subfield().len()), (4, 2));
        let f = FieldTower::new(3, 1).unwrap();
        assert_eq!((f.order(), f.subfield().len()), (9, 3));
        // x -> x^4 fixed points in F_16, counted straight from the mul table.
        let f = FieldTower::new(2, 2).unwrap();
        let fixed = f
            .elements()
            .filter(|&x| f.mul(f.mul(x, x), f.mul(x, x)) == x)
            .count();
        assert_eq!((f.order(), fixed, f.subfield().len()), (16, 4, 4));
    }

    #[test]
    fn every_shipped_modulus_builds() {
        for (p, e) in supported_params() {
            let f = FieldTower::new(p, e).unwrap_or_else(|err| panic!("({p},{e}): {err}"));
            assert_eq!(f.subfield().len() as u32, p.pow(e));
            assert_eq!(f.modulus_len(), 2 * e as usize + 1);
        }
    }

    impl FieldTower {
        fn modulus_len(&self) -> usize {
            self.params.modulus.len()
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldTower::new(4, 1), Err(Error::NonPrime(4))));
        assert!(matches!(
            FieldTower::new(3, 5),
            Err(Error::TooLargeField { p: 3, e: 5 })
        ));
        assert!(matches!(
            FieldTower::new(11, 1),
            Err(Error::NoModulusAvailable { p: 11, e: 1 })
        ));
        assert!(matches!(FieldTower::for_q(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn f4_multiplication_and_frobenius() {
        // alpha = x has index 2, alpha + 1 has index 3.
        let f = FieldTower::new(2, 1).unwrap();
        let alpha = f.element(2).unwrap();
        let alpha1 = f.element(3).unwrap();
        assert_eq!(f.mul(alpha, alpha), alpha1);
        assert_eq!(f.conjugate(alpha), alpha1);
        assert_eq!(f.trace(alpha), FieldElement::ONE);
        assert_eq!(f.norm(alpha), FieldElement::ONE);
        assert_eq!(f.conjugate(FieldElement::ZERO), FieldElement::ZERO);
        assert_eq!(f.conjugate(FieldElement::ONE), FieldElement::ONE);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = FieldTower::new(3, 1).unwrap();
        assert!(matches!(f.inv(FieldElement::ZERO), Err(Error::DivisionByZero)));
        for x in f.nonzero_elements() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn characteristic_two_doubles_to_zero() {
        for e in 1..=3 {
            let f = FieldTower::new(2, e).unwrap();
            assert!(f.elements().all(|x| f.add(x, x).is_zero()));
        }
    }

    #[test]
    fn trace_on_subfield_is_doubling() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = FieldTower::for_q(q).unwrap();
            for &x in f.subfield() {
                assert_eq!(f.trace(x), f.add(x, x));
            }
        }
    }

    #[test]
    fn norm_fibers_in_f9() {
        let f = FieldTower::new(3, 1).unwrap();
        for &c in &f.subfield()[1..] {
            assert_eq!(f.elements().filter(|&x| f.norm(x) == c).count(), 4);
        }
    }

    #[test]
    fn axioms_hold_for_the_table_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            FieldTower::for_q(q).unwrap().check_axioms().unwrap();
        }
    }

    /// Addition checked against the coefficient-vector definition.
    #[test]
    fn addition_matches_digitwise_sum() {
        for q in [4, 9, 8] {
            let f = FieldTower::for_q(q).unwrap();
            let (p, deg) = (f.p(), 2 * f.e() as usize);
            for a in f.elements() {
                for b in f.elements() {
                    let da = poly::digits(a.index(), p, deg);
                    let db = poly::digits(b.index(), p, deg);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(f.add(a, b).index(), poly::index(&s, p));
                }
            }
        }
    }

    #[test]
    fn trace_and_norm_fibers() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = FieldTower::for_q(q).unwrap();
            for &c in f.subfield() {
                let tr = f.elements().filter(|&x| f.trace(x) == c).count();
                assert_eq!(tr as u32, q);
                let nm = f.nonzero_elements().filter(|&x| f.norm(x) == c).count();
                assert_eq!(nm as u32, if c.is_zero() { 0 } else { q + 1 });
            }
            assert!(f.elements().all(|x| f.in_subfield(f.trace(x)) && f.in_subfield(f.norm(x))));
        }
    }

    #[test]
    fn modulus_digit_rendering() {
        let f = FieldTower::new(2, 1).unwrap();
        assert_eq!(f.params().modulus_digits(), "111");
        let f = FieldTower::new(3, 1).unwrap();
        assert_eq!(f.params().modulus_digits(), "101");
    }
}
