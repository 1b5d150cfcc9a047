//! Prime field arithmetic `Z/pZ`.
//!
//! The engine works on raw `u32` residues through a [`Field`] context, which
//! keeps sparse rows compact. [`FieldElement`] is the checked, self-describing
//! value type for callers that mix values from several fields.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("operands belong to different fields (p = {0} and p = {1})")]
    MixedFields(u32, u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// The prime field `Z/pZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Default for Field {
    fn default() -> Self {
        Field { p: 2 }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field { p: p as u32 })
    }

    /// `Z/2Z`.
    pub fn f2() -> Self {
        Field { p: 2 }
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            p: self.p,
        }
    }

    /// Canonical residue of an arbitrary integer.
    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        let a = a % self.p;
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }

    /// `a / b`; `b` must be nonzero.
    #[inline]
    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `(-1)^k` in this field.
    #[inline]
    pub fn sign(&self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.neg(1)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}Z", self.p)
    }
}

/// A residue tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    p: u32,
}

#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> Field {
        Field { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<Field, FieldError> {
        if self.p != other.p {
            return Err(FieldError::MixedFields(self.p, other.p));
        }
        Ok(self.field())
    }

    pub fn add(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let f = self.same_field(&other)?;
        Ok(FieldElement {
            value: f.add(self.value, other.value),
            p: self.p,
        })
    }

    pub fn mul(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let f = self.same_field(&other)?;
        Ok(FieldElement {
            value: f.mul(self.value, other.value),
            p: self.p,
        })
    }

    pub fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field().neg(self.value),
            p: self.p,
        }
    }

    pub fn mul_inv(self) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            value: self.field().inv(self.value)?,
            p: self.p,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(0).is_err());
        assert!(Field::new(1 << 31).is_err());
        assert!(Field::new(2_147_483_647).is_ok());
        assert_eq!(Field::default().modulus(), 2);
    }

    #[test]
    fn addition_examples() {
        let f2 = Field::f2();
        assert_eq!(f2.elem(1).add(f2.elem(1)).unwrap().value(), 0);
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.elem(3).add(f5.elem(4)).unwrap().value(), 2);
        for p in [2u64, 3, 5, 7, 101] {
            let f = Field::new(p).unwrap();
            for a in 0..p as i64 {
                assert_eq!(f.elem(a).add(f.elem(0)).unwrap(), f.elem(a));
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Field::f2().elem(1).mul_inv().unwrap().value(), 1);
        assert_eq!(Field::new(5).unwrap().elem(2).mul_inv().unwrap().value(), 3);
        assert_eq!(Field::new(7).unwrap().elem(3).mul_inv().unwrap().value(), 5);
        assert_eq!(
            Field::new(7).unwrap().elem(0).mul_inv(),
            Err(FieldError::ZeroInverse)
        );
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::new(5).unwrap().elem(1);
        let b = Field::new(7).unwrap().elem(1);
        assert_eq!(a.add(b), Err(FieldError::MixedFields(5, 7)));
        assert!(a.mul(b).is_err());
    }

    fn prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 65_537, 2_147_483_647])
    }

    proptest! {
        #[test]
        fn field_axioms(p in prime(), a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let f = Field::new(p).unwrap();
            let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
            prop_assert_eq!(a.add(b)?.add(c)?, a.add(b.add(c)?)?);
            prop_assert_eq!(a.mul(b)?.mul(c)?, a.mul(b.mul(c)?)?);
            prop_assert_eq!(a.mul(b.add(c)?)?, a.mul(b)?.add(a.mul(c)?)?);
            prop_assert!(a.add(a.neg())?.is_zero());
            if !a.is_zero() {
                prop_assert_eq!(a.mul(a.mul_inv()?)?.value(), 1);
            }
        }
    }
}
