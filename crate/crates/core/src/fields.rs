//! Table-driven arithmetic in GF(p^e) for orders up to 16.
//!
//! Element `idx` encodes the polynomial `sum c_j x^j` with `idx = sum c_j p^j`,
//! so indices below `p` are the prime subfield and `0`/`1` are the additive and
//! multiplicative identities.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 16;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub const fn new(idx: u8) -> Self {
        FieldElement(idx)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: usize,
    e: usize,
    q: usize,
    /// Low-order-first coefficients of the monic modulus, leading 1 included.
    poly: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [p={}, e={}, poly={:?}]", self.q, self.p, self.e, self.poly)
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

fn to_digits(mut idx: usize, p: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
    digits
}

fn from_digits(digits: &[usize], p: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p); both low-order first.
fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (j, &c) in m.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p * p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_mul(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn is_irreducible(m: &[usize], p: usize) -> bool {
    let e = m.len() - 1;
    // A reducible polynomial of degree e has a monic factor of degree <= e/2.
    for d in 1..=e / 2 {
        for low in 0..p.pow(d as u32) {
            let mut f = to_digits(low, p, d);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `e` over GF(p), comparing
/// coefficient lists written from the leading term down.
fn least_irreducible(p: usize, e: usize) -> Vec<usize> {
    if e == 1 {
        return vec![0, 1];
    }
    // Index `k` read high-order first equals the lexicographic rank.
    (0..p.pow(e as u32))
        .map(|k| {
            let mut m = to_digits(k, p, e);
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial of every degree exists")
}

impl FieldSpec {
    pub fn new(p: u32, e: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if e == 0 || !(2..=MAX_ORDER as u64).contains(&q) {
            return Err(Error::FieldOutOfRange { p, e });
        }
        let (p, e, q) = (p as usize, e as usize, q as usize);
        let poly = least_irreducible(p, e);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = to_digits(a, p, e);
            for b in 0..q {
                let db = to_digits(b, p, e);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = from_digits(&sum, p) as u8;
                let mut prod = poly_rem(&poly_mul(&da, &db, p), &poly, p);
                prod.resize(e, 0);
                mul[a * q + b] = from_digits(&prod, p) as u8;
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8 })
            .collect();
        Ok(FieldSpec {
            p,
            e,
            q,
            poly: poly.iter().map(|&c| c as u8).collect(),
            add,
            mul,
            neg,
            inv,
        })
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: usize) -> Result<FieldSpec> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        FieldSpec::new(p, e)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> &[u8] {
        &self.poly
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u8).map(FieldElement)
    }

    pub fn element(&self, idx: usize) -> FieldElement {
        assert!(idx < self.q, "element {idx} out of range for GF({})", self.q);
        FieldElement(idx as u8)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.index() * self.q + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.index() * self.q + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (!a.is_zero()).then(|| FieldElement(self.inv[a.index()]))
    }

    pub fn pow(&self, a: FieldElement, mut k: usize) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The involution `a -> a^sub_order` of GF(sub_order^2).
    pub fn conjugate(&self, a: FieldElement, sub_order: usize) -> Result<FieldElement> {
        if sub_order * sub_order != self.q {
            return Err(Error::NotASquare { order: self.q, sub_order });
        }
        Ok(self.pow(a, sub_order))
    }

    /// `sqrt(q)` when the order is a perfect square.
    pub fn sub_order(&self) -> Option<usize> {
        (self.e % 2 == 0).then(|| self.p.pow(self.e as u32 / 2))
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.elements().any(|x| self.mul(x, x) == a)
    }

    pub fn dot(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        u.iter().zip(v).fold(FieldElement::ZERO, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }
}
