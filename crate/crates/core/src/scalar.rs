//! Exact scalars: arbitrary-precision rationals and prime fields `F_p`.
//!
//! Every value carries its domain. Rationals are kept reduced with a positive
//! denominator by construction; prime-field values live in `[0, p)`. Mixing
//! domains in arithmetic is a programming error and panics; public entry
//! points that accept user data check domains first and report
//! [`DomainError`] instead.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

/// The scalar domain a computation runs in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Domain {
    /// Arbitrary-precision rational numbers.
    Rational,
    /// The prime field `F_p`.
    Prime(u64),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => write!(f, "Q"),
            Domain::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("mixed scalar domains: {0} vs {1}")]
    Mixed(Domain, Domain),
    #[error("{0} is not a supported prime modulus")]
    BadModulus(u64),
}

/// An exact scalar: a reduced rational or an element of `F_p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Fp { p: u64, value: u64 },
}

impl Scalar {
    pub fn zero(domain: Domain) -> Self {
        Self::from_i64(0, domain)
    }

    pub fn one(domain: Domain) -> Self {
        Self::from_i64(1, domain)
    }

    pub fn from_i64(v: i64, domain: Domain) -> Self {
        match domain {
            Domain::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Domain::Prime(p) => {
                let r = v.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, value: r }
            }
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn domain(&self) -> Domain {
        match self {
            Scalar::Rational(_) => Domain::Rational,
            Scalar::Fp { p, .. } => Domain::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    fn require_same_domain(&self, rhs: &Scalar) -> (Domain, Domain) {
        let (a, b) = (self.domain(), rhs.domain());
        assert_eq!(a, b, "scalar arithmetic across domains ({a} vs {b})");
        (a, b)
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.require_same_domain(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Fp { p, value: a }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                p: *p,
                value: (a + b) % p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.require_same_domain(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Fp { p, value: a }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                p: *p,
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Fp { p, value } => Scalar::Fp {
                p: *p,
                value: if *value == 0 { 0 } else { p - value },
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Fp { p, value } => Scalar::Fp {
                p: *p,
                value: mod_inverse(*value, *p),
            },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inverse().map(|inv| self.mul(&inv))
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut acc = Scalar::one(self.domain());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Rational absolute value. Panics on prime-field scalars.
    pub fn abs_rational(&self) -> BigRational {
        match self {
            Scalar::Rational(a) => a.abs(),
            Scalar::Fp { .. } => panic!("absolute value is only defined over Q"),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(a) => Some(a),
            Scalar::Fp { .. } => None,
        }
    }

    pub fn as_fp(&self) -> Option<(u64, u64)> {
        match self {
            Scalar::Fp { p, value } => Some((*p, *value)),
            Scalar::Rational(_) => None,
        }
    }

    /// Lossy conversion for reporting; exact for moderate integers.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(a) => {
                let n = a.numer();
                let d = a.denom();
                bigint_to_f64(n) / bigint_to_f64(d)
            }
            Scalar::Fp { value, .. } => *value as f64,
        }
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime, a != 0 mod p
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "modulus must be prime and value nonzero");
    old_s.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{a}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_stays_reduced() {
        let a = Scalar::from_i64(6, Domain::Rational);
        let b = Scalar::from_i64(4, Domain::Rational);
        let q = a.div(&b).unwrap();
        match q {
            Scalar::Rational(r) => {
                assert_eq!(r.numer(), &BigInt::from(3));
                assert_eq!(r.denom(), &BigInt::from(2));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn fp_canonical_range_and_inverse() {
        let p = 7;
        for v in 1..p {
            let s = Scalar::Fp { p, value: v };
            let inv = s.inverse().unwrap();
            assert_eq!(s.mul(&inv), Scalar::one(Domain::Prime(p)));
        }
        assert_eq!(Scalar::from_i64(-3, Domain::Prime(7)).as_fp(), Some((7, 4)));
        assert!(Scalar::zero(Domain::Prime(5)).inverse().is_none());
    }

    #[test]
    #[should_panic(expected = "scalar arithmetic across domains")]
    fn mixing_domains_panics() {
        let a = Scalar::one(Domain::Rational);
        let b = Scalar::one(Domain::Prime(5));
        let _ = a.add(&b);
    }
}
