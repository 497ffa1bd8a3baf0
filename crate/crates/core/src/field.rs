//! Finite fields GF(p^m) with table-backed multiplication.
//!
//! Elements are stored as their canonical integer encoding in `[0, q)`:
//! a bit-packed polynomial basis for characteristic two, and the residue
//! mod `p` for prime fields. Every field carries exp/log tables over a
//! primitive element, so multiplication and inversion are two lookups.
//!
//! The algebra in the rest of the crate works on raw `u16` symbols and calls
//! into [`Field`] for arithmetic. [`FieldElement`] is the checked, self-describing
//! counterpart for code that wants the field attached to the value.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Primitive polynomials for GF(2^m), bit-packed with the x^m term included.
const BINARY_MODULI: [(u32, u32); 16] = [
    (1, 0x3),
    (2, 0x7),
    (3, 0xB),
    (4, 0x13),
    (5, 0x25),
    (6, 0x43),
    (7, 0x83),
    (8, 0x11D),
    (9, 0x211),
    (10, 0x409),
    (11, 0x805),
    (12, 0x1053),
    (13, 0x201B),
    (14, 0x4443),
    (15, 0x8003),
    (16, 0x1100B),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {p}^{m} is unsupported (must be at most 2^16)")]
    Unsupported { p: u32, m: u32 },
    #[error("no reduction polynomial available for GF({p}^{m})")]
    NoModulus { p: u32, m: u32 },
    #[error("reduction polynomial for GF({p}^{m}) failed verification")]
    BadModulus { p: u32, m: u32 },
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("value {value} is outside GF({q})")]
    OutOfRange { value: u32, q: u32 },
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Option<u32>,
    generator: u16,
    /// exp[i] = g^i for i in [0, 2(q-1)), doubled so log sums need no reduction.
    exp: Vec<u16>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u32>,
}

/// A finite field GF(p^m). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.m == other.inner.m)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(f, "GF({}^{})", self.inner.p, self.inner.m)
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds GF(p^m). Binary extension fields use a fixed table of primitive
    /// polynomials; odd characteristic is supported for prime fields only.
    pub fn new(p: u32, m: u32) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = (m >= 1)
            .then(|| p.checked_pow(m))
            .flatten()
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(FieldError::Unsupported { p, m })?;

        let modulus = if m == 1 {
            None
        } else if p == 2 {
            BINARY_MODULI.iter().find(|(deg, _)| *deg == m).map(|&(_, poly)| poly)
        } else {
            None
        };
        if m > 1 && modulus.is_none() {
            return Err(FieldError::NoModulus { p, m });
        }

        let n = (q - 1) as usize;
        let step = |a: u32, g: u32| -> u32 {
            match modulus {
                // multiply by x and reduce
                Some(poly) => {
                    let r = a << 1;
                    if r & q != 0 {
                        r ^ poly
                    } else {
                        r
                    }
                }
                None => (a * g) % p,
            }
        };

        // For prime fields search for a primitive root; for binary extensions
        // the generator is x, which is primitive iff the modulus is.
        let candidates: Vec<u32> = match modulus {
            Some(_) => vec![2],
            None => (1..q).collect(),
        };
        for g in candidates {
            let mut exp = vec![0u16; 2 * n.max(1)];
            let mut log = vec![0u32; q as usize];
            let mut seen = vec![false; q as usize];
            let mut a = 1u32;
            let mut ok = true;
            for (i, slot) in exp.iter_mut().take(n).enumerate() {
                if seen[a as usize] {
                    ok = false;
                    break;
                }
                seen[a as usize] = true;
                *slot = a as u16;
                log[a as usize] = i as u32;
                a = step(a, g);
            }
            if !ok || a != 1 {
                continue;
            }
            for i in n..2 * n {
                exp[i] = exp[i - n];
            }
            return Ok(Field {
                inner: Arc::new(Tables {
                    p,
                    m,
                    q,
                    modulus,
                    generator: g as u16,
                    exp,
                    log,
                }),
            });
        }
        Err(FieldError::BadModulus { p, m })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u32) -> Result<Field, FieldError> {
        if q < 2 {
            return Err(FieldError::NotPrime(q));
        }
        let mut p = 2;
        while q % p != 0 {
            p += 1;
        }
        let mut m = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrime(q));
        }
        Field::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Reduction polynomial (bit-packed, leading term included) for binary extensions.
    pub fn modulus(&self) -> Option<u32> {
        self.inner.modulus
    }

    /// The primitive element backing the exp/log tables.
    pub fn generator(&self) -> u16 {
        self.inner.generator
    }

    /// Number of whole bits that fit in one symbol: floor(log2 q).
    pub fn symbol_bits(&self) -> u32 {
        31 - self.inner.q.leading_zeros()
    }

    #[inline]
    fn binary(&self) -> bool {
        self.inner.p == 2
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.binary() {
            a ^ b
        } else {
            let s = a as u32 + b as u32;
            let p = self.inner.p;
            (if s >= p { s - p } else { s }) as u16
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if self.binary() || a == 0 {
            a
        } else {
            (self.inner.p - a as u32) as u16
        }
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.inner;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16, FieldError> {
        if a == 0 {
            return Err(FieldError::InverseOfZero);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        let t = &*self.inner;
        let l = t.log[a as usize];
        t.exp[((t.q - 1 - l) % (t.q - 1)) as usize]
    }

    pub fn div(&self, a: u16, b: u16) -> Result<u16, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &*self.inner;
        let order = (t.q - 1) as u64;
        let l = (t.log[a as usize] as u64 * (e % order)) % order;
        t.exp[l as usize]
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: u64) -> u16 {
        (v % self.inner.p as u64) as u16
    }

    /// `acc += coef * row`, elementwise. The hot loop of every vector-matrix product.
    #[inline]
    pub fn axpy(&self, acc: &mut [u16], coef: u16, row: &[u16]) {
        debug_assert_eq!(acc.len(), row.len());
        if coef == 0 {
            return;
        }
        let t = &*self.inner;
        let lc = t.log[coef as usize] as usize;
        if self.binary() {
            for (a, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    *a ^= t.exp[lc + t.log[r as usize] as usize];
                }
            }
        } else {
            let p = t.p;
            for (a, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    let prod = t.exp[lc + t.log[r as usize] as usize] as u32;
                    let s = *a as u32 + prod;
                    *a = (if s >= p { s - p } else { s }) as u16;
                }
            }
        }
    }

    pub fn element(&self, value: u32) -> Result<FieldElement<'_>, FieldError> {
        if value >= self.inner.q {
            return Err(FieldError::OutOfRange {
                value,
                q: self.inner.q,
            });
        }
        Ok(FieldElement {
            value: value as u16,
            field: self,
        })
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement { value: 0, field: self }
    }

    pub fn one(&self) -> FieldElement<'_> {
        FieldElement { value: 1, field: self }
    }
}

/// A field element bundled with its field. Operator impls panic on mixed
/// fields; the `try_*` methods report it instead.
#[derive(Clone, Copy)]
pub struct FieldElement<'a> {
    value: u16,
    field: &'a Field,
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl Eq for FieldElement<'_> {}

impl<'a> FieldElement<'a> {
    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn field(&self) -> &'a Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn with(&self, value: u16) -> Self {
        FieldElement { value, field: self.field }
    }

    pub fn try_add(self, rhs: Self) -> Result<Self, FieldError> {
        self.same(&rhs)?;
        Ok(self.with(self.field.add(self.value, rhs.value)))
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self, FieldError> {
        self.same(&rhs)?;
        Ok(self.with(self.field.sub(self.value, rhs.value)))
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self, FieldError> {
        self.same(&rhs)?;
        Ok(self.with(self.field.mul(self.value, rhs.value)))
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(self, e: u64) -> Self {
        self.with(self.field.pow(self.value, e))
    }
}

impl<'a> Add for FieldElement<'a> {
    type Output = FieldElement<'a>;
    fn add(self, rhs: Self) -> Self::Output {
        self.try_add(rhs).expect("mixed-field addition")
    }
}

impl<'a> Sub for FieldElement<'a> {
    type Output = FieldElement<'a>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.try_sub(rhs).expect("mixed-field subtraction")
    }
}

impl<'a> Mul for FieldElement<'a> {
    type Output = FieldElement<'a>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.try_mul(rhs).expect("mixed-field multiplication")
    }
}

impl<'a> Neg for FieldElement<'a> {
    type Output = FieldElement<'a>;
    fn neg(self) -> Self::Output {
        self.with(self.field.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook carry-less multiply and reduce; independent of the tables.
    fn slow_mul_binary(a: u32, b: u32, poly: u32, m: u32) -> u32 {
        let mut r = 0u32;
        for i in 0..m {
            if b >> i & 1 == 1 {
                r ^= a << i;
            }
        }
        for i in (m..2 * m).rev() {
            if r >> i & 1 == 1 {
                r ^= poly << (i - m);
            }
        }
        r
    }

    #[test]
    fn construction() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        let f = Field::new(2, 8).unwrap();
        assert_eq!(f.modulus(), Some(0x11D));
        assert_eq!(f.order(), 256);
        let f = Field::new(17, 1).unwrap();
        assert_eq!(f.order(), 17);
        assert_eq!(Field::with_order(64).unwrap().degree(), 6);
        assert_eq!(Field::new(2, 6).unwrap().modulus(), Some(0x43));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(Field::new(2, 17), Err(FieldError::Unsupported { p: 2, m: 17 }));
        assert_eq!(Field::new(3, 2), Err(FieldError::NoModulus { p: 3, m: 2 }));
        assert_eq!(Field::new(257, 2), Err(FieldError::Unsupported { p: 257, m: 2 }));
        assert!(Field::with_order(12).is_err());
    }

    #[test]
    fn small_products() {
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.mul(2, 2), 1);
        let f17 = Field::new(17, 1).unwrap();
        assert_eq!(f17.mul(5, 7), 1);
        let f256 = Field::new(2, 8).unwrap();
        assert_eq!(f256.mul(0x80, 0x02), 0x1D);
    }

    #[test]
    fn inverse_of_zero() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.inv(0), Err(FieldError::InverseOfZero));
        assert_eq!(f.zero().inv(), Err(FieldError::InverseOfZero));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f3 = Field::new(3, 1).unwrap();
        let f5 = Field::new(5, 1).unwrap();
        let a = f3.element(1).unwrap();
        let b = f5.element(1).unwrap();
        assert_eq!(a.try_add(b), Err(FieldError::MixedFields));
        assert_eq!(a.try_mul(b), Err(FieldError::MixedFields));
        assert!(f3.element(3).is_err());
    }

    #[test]
    fn element_operators() {
        let f = Field::new(17, 1).unwrap();
        let a = f.element(5).unwrap();
        let b = f.element(7).unwrap();
        assert_eq!((a * b).value(), 1);
        assert_eq!((a + b).value(), 12);
        assert_eq!((a - b).value(), 15);
        assert_eq!((-a).value(), 12);
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(a.pow(16), f.one());
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, m) in [(2, 1), (3, 1), (5, 1), (17, 1), (2, 4), (2, 6), (257, 1)] {
            let f = Field::new(p, m).unwrap();
            let q = f.order() as u16;
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "{f:?} a={a}");
            }
            // distributivity on all triples for tiny fields, strided otherwise
            let stride = if q > 64 { 7 } else { 1 };
            for a in (0..q).step_by(stride) {
                for b in (0..q).step_by(stride) {
                    for c in (0..q).step_by(stride) {
                        let lhs = f.mul(f.add(a, b), c);
                        let rhs = f.add(f.mul(a, c), f.mul(b, c));
                        assert_eq!(lhs, rhs);
                    }
                    assert_eq!(f.add(f.sub(a, b), b), a);
                }
            }
            assert_eq!(f.pow(f.generator(), (f.order() - 1) as u64), 1);
        }
    }

    #[test]
    fn tables_match_schoolbook_gf256() {
        let f = Field::new(2, 8).unwrap();
        for a in 0..256u32 {
            for b in (0..256u32).step_by(3) {
                assert_eq!(f.mul(a as u16, b as u16) as u32, slow_mul_binary(a, b, 0x11D, 8));
            }
        }
    }

    #[test]
    fn all_binary_moduli_primitive() {
        for m in 1..=16 {
            let f = Field::new(2, m).unwrap();
            assert_eq!(f.order(), 1 << m);
            assert_eq!(f.symbol_bits(), m);
        }
    }

    #[test]
    fn axpy_matches_scalar_ops() {
        for f in [Field::new(2, 8).unwrap(), Field::new(17, 1).unwrap()] {
            let q = f.order() as u16;
            let row: Vec<u16> = (0..40).map(|i| (i * 7 % q as usize) as u16).collect();
            let mut acc: Vec<u16> = (0..40).map(|i| (i * 3 % q as usize) as u16).collect();
            let expected: Vec<u16> = acc.iter().zip(&row).map(|(&a, &r)| f.add(a, f.mul(5, r))).collect();
            f.axpy(&mut acc, 5, &row);
            assert_eq!(acc, expected);
        }
    }
}
