//! Exact scalar arithmetic over the rationals and prime fields.
//!
//! A [`Scalar`] is either an arbitrary-precision reduced fraction or a
//! canonical residue in `[0, p)`. Every scalar knows its [`FieldSpec`], and
//! mixing scalars from different fields is rejected (checked entry points) or
//! panics (the operator impls, which are meant for code that has already
//! validated its inputs, as all matrix and polynomial constructors do).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported prime modulus. Root finding over `F_p` scans all `p`
/// residues, so the modulus is capped at desk scale.
pub const MAX_PRIME: u64 = 1 << 20;

/// Field descriptor: the rationals, or the prime field `F_p`.
///
/// Only prime fields are supported, not extensions `F_{p^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Builds the descriptor of `F_p`, checking that `p` is prime and within
    /// the supported bound.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals, `p` for `F_p`.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn is_char_two(&self) -> bool {
        self.characteristic() == 2
    }

    pub fn zero(&self) -> Scalar {
        self.from_integer(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    /// Embeds a machine integer into the field (mod `p` for prime fields).
    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Prime {
                p: *p,
                value: n.rem_euclid(*p as i64) as u64,
            },
        }
    }

    /// The first `count` elements of a fixed, deterministic enumeration of the
    /// field: `0, 1, 2, ...` as integers for the rationals, the residues
    /// `0, ..., min(count, p) - 1` for `F_p`.
    ///
    /// Used to build the scalar grids of the nondegenerate-combination search.
    pub fn enumerate_scalars(&self, count: usize) -> Vec<Scalar> {
        let count = match self {
            FieldSpec::Rational => count,
            FieldSpec::Prime(p) => count.min(*p as usize),
        };
        (0..count).map(|n| self.from_integer(n as i64)).collect()
    }

    /// Parses the text form of a scalar: `"a/b"` or `"a"` for rationals,
    /// a residue for prime fields. Signs are accepted everywhere; prime-field
    /// values are reduced mod `p`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = |msg: &str| Error::parse(format!("scalar {text:?}"), msg);
        let text = text.trim();
        match self {
            FieldSpec::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (text, None),
                };
                let num = BigInt::from_str(num.trim()).map_err(|e| bad(&e.to_string()))?;
                let den = match den {
                    Some(d) => BigInt::from_str(d.trim()).map_err(|e| bad(&e.to_string()))?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::Prime(p) => {
                if text.contains('/') {
                    return Err(bad("fractions are not valid residues"));
                }
                let value = BigInt::from_str(text).map_err(|e| bad(&e.to_string()))?;
                let p_big = BigInt::from(*p);
                let reduced = ((value % &p_big) + &p_big) % &p_big;
                let (_, digits) = reduced.to_u64_digits();
                Ok(Scalar::Prime {
                    p: *p,
                    value: digits.first().copied().unwrap_or(0),
                })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldSpec> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rational") {
            return Ok(FieldSpec::Rational);
        }
        if let Some(p) = s.strip_prefix("prime:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("field {s:?}"), "modulus is not an integer"))?;
            return FieldSpec::prime(p);
        }
        Err(Error::parse(
            format!("field {s:?}"),
            "expected \"rational\" or \"prime:<p>\"",
        ))
    }
}

/// An exact field element.
///
/// Rationals are stored reduced with positive denominator; prime-field values
/// are canonical residues in `[0, p)`. Equal values therefore compare equal
/// structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { p: u64, value: u64 },
}

impl Scalar {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Checked addition; errors on mismatched fields.
    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self + other)
    }

    /// Checked subtraction; errors on mismatched fields.
    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self - other)
    }

    /// Checked multiplication; errors on mismatched fields.
    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self * other)
    }

    /// Multiplicative inverse. Errors on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { p, value } => Scalar::Prime {
                p: *p,
                value: mod_inverse(*value, *p),
            },
        })
    }

    /// Exact division `self / other`. Errors on zero divisor.
    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self * &other.inv()?)
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.spec() != other.spec() {
            return Err(Error::FieldMismatch(self.spec(), other.spec()));
        }
        Ok(())
    }
}

fn expect_same_field(a: &Scalar, b: &Scalar) {
    assert!(
        a.spec() == b.spec(),
        "scalars from different fields: {} vs {}",
        a.spec(),
        b.spec()
    );
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        expect_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                p: *p,
                value: (a + b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        expect_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                p: *p,
                value: (a + p - b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        expect_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            // p < 2^20, so the product fits comfortably in a u64
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                p: *p,
                value: (a * b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { p, value } => Scalar::Prime {
                p: *p,
                value: if *value == 0 { 0 } else { p - value },
            },
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

/// Rationals order by value, residues by canonical representative. This is the
/// deterministic order used for root lists and joint-eigenvalue tuples.
/// Comparing scalars from different fields panics.
impl Ord for Scalar {
    fn cmp(&self, other: &Scalar) -> Ordering {
        expect_same_field(self, other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Prime { value: a, .. }, Scalar::Prime { value: b, .. }) => a.cmp(b),
            _ => unreachable!(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Extended-Euclid inverse of `a` mod `p` (requires `gcd(a, p) = 1`).
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    s0.rem_euclid(p as i128) as u64
}

/// Deterministic primality test, adequate for the `p <= 2^20` bound.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rational_fraction_addition() {
        let a = q().parse_scalar("1/2").unwrap();
        let b = q().parse_scalar("1/3").unwrap();
        assert_eq!(&a + &b, q().parse_scalar("5/6").unwrap());
    }

    #[test]
    fn char_two_identity() {
        let one = fp(2).one();
        assert!((&one + &one).is_zero());
    }

    #[test]
    fn prime_inverse_matches_brute_force_scan() {
        // independent oracle: scan k with 3 * k = 1 mod 7
        let p = 7u64;
        let a = 3u64;
        let expected = (0..p).find(|k| (a * k) % p == 1).unwrap();
        assert_eq!(expected, 5);
        let inv = fp(p).from_integer(a as i64).inv().unwrap();
        assert_eq!(inv, fp(p).from_integer(expected as i64));
    }

    #[test]
    fn enumerate_scalars_orders() {
        let ints: Vec<Scalar> = q().enumerate_scalars(3);
        assert_eq!(ints, vec![q().from_integer(0), q().from_integer(1), q().from_integer(2)]);
        assert_eq!(fp(2).enumerate_scalars(5).len(), 2);
        assert_eq!(fp(5).enumerate_scalars(3).len(), 3);
    }

    #[test]
    fn inverse_of_zero_is_rejected() {
        assert_eq!(q().zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(fp(5).zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = q().one();
        let b = fp(3).one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert_eq!(q().parse_scalar("1/0"), Err(Error::DivisionByZero));
    }

    #[test]
    fn parsing_canonicalizes() {
        assert_eq!(q().parse_scalar("-4/-6").unwrap(), q().parse_scalar("2/3").unwrap());
        assert_eq!(fp(7).parse_scalar("-1").unwrap(), fp(7).from_integer(6));
        assert_eq!(fp(7).parse_scalar("23").unwrap(), fp(7).from_integer(2));
    }

    #[test]
    fn field_spec_round_trips_through_text() {
        for spec in [q(), fp(2), fp(65521)] {
            assert_eq!(spec.to_string().parse::<FieldSpec>().unwrap(), spec);
        }
        assert!("prime:6".parse::<FieldSpec>().is_err());
        assert!(FieldSpec::prime(1 << 21).is_err());
    }

    #[test]
    fn field_axioms_hold_on_sampled_scalars() {
        // associativity, commutativity, distributivity, inverses over a few
        // hand-picked and enumerated values in each field
        for spec in [q(), fp(2), fp(7)] {
            let mut values = spec.enumerate_scalars(7);
            if spec == q() {
                values.push(spec.parse_scalar("-3/4").unwrap());
                values.push(spec.parse_scalar("5/2").unwrap());
            }
            for a in &values {
                for b in &values {
                    for c in &values {
                        assert_eq!(&(&(a + b) + c), &(a + &(b + c)));
                        assert_eq!(&(&(a * b) * c), &(a * &(b * c)));
                        assert_eq!(&(a * &(b + c)), &(&(a * b) + &(a * c)));
                        assert_eq!(a + b, b + a);
                        assert_eq!(a * b, b * a);
                    }
                    if !b.is_zero() {
                        let q = a.div(b).unwrap();
                        assert_eq!(&(&q * b), a);
                    }
                }
                assert!((a - a).is_zero());
                assert!((a + &-a).is_zero());
            }
        }
    }
}
