//! Univariate polynomial arithmetic and the "splits into distinct linear
//! factors" decision that backs every diagonalizability test.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Dense univariate polynomial, coefficients in ascending degree with trailing
/// zeros trimmed (the zero polynomial has an empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    spec: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn zero(spec: FieldSpec) -> Polynomial {
        Polynomial { spec, coeffs: Vec::new() }
    }

    pub fn one(spec: FieldSpec) -> Polynomial {
        Polynomial::constant(spec.one())
    }

    /// The monomial `x`.
    pub fn x(spec: FieldSpec) -> Polynomial {
        Polynomial::from_coeffs(spec, vec![spec.zero(), spec.one()])
    }

    pub fn constant(c: Scalar) -> Polynomial {
        Polynomial::from_coeffs(c.spec(), vec![c])
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros. Panics if a coefficient belongs to a different field.
    pub fn from_coeffs(spec: FieldSpec, mut coeffs: Vec<Scalar>) -> Polynomial {
        for c in &coeffs {
            assert!(c.spec() == spec, "coefficient from a different field");
        }
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { spec, coeffs }
    }

    /// Convenience constructor from machine integers, ascending degree.
    pub fn from_integers(spec: FieldSpec, coeffs: &[i64]) -> Polynomial {
        Polynomial::from_coeffs(spec, coeffs.iter().map(|&n| spec.from_integer(n)).collect())
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(Scalar::is_one)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.expect_same(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Polynomial::from_coeffs(self.spec, coeffs)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::from_coeffs(self.spec, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.expect_same(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.spec);
        }
        let mut coeffs = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Polynomial::from_coeffs(self.spec, coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::from_coeffs(self.spec, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.expect_same(divisor);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = divisor.degree().unwrap();
        let lead_inv = divisor.leading_coeff().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.spec.zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let factor = &rem[rem.len() - 1] * &lead_inv;
            if !factor.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&factor * b);
                }
                quot[k] = factor;
            }
            rem.pop();
        }
        Ok((
            Polynomial::from_coeffs(self.spec, quot),
            Polynomial::from_coeffs(self.spec, rem),
        ))
    }

    /// Formal derivative. In characteristic `p` the terms whose exponent is
    /// divisible by `p` vanish.
    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.spec.from_integer(i as i64))
            .collect();
        Polynomial::from_coeffs(self.spec, coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = self.spec.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        self.expect_same(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic_or_zero()
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic_or_zero(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// `self^exp mod modulus` by binary exponentiation.
    pub fn pow_mod(&self, exp: u64, modulus: &Polynomial) -> Result<Polynomial> {
        let mut result = Polynomial::one(self.spec);
        let mut base = self.divmod(modulus)?.1;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).divmod(modulus)?.1;
            }
            base = base.mul(&base).divmod(modulus)?.1;
            e >>= 1;
        }
        Ok(result)
    }

    fn expect_same(&self, other: &Polynomial) {
        assert!(
            self.spec == other.spec,
            "polynomials over different fields: {} vs {}",
            self.spec,
            other.spec
        );
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let txt = c.to_string();
            let (sign, mag) = match txt.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", txt),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Decides whether a monic polynomial of degree >= 1 is a product of
/// *distinct* linear factors over its field, returning the sorted roots if so.
///
/// This is exactly the diagonalizability criterion for the minimal polynomial
/// of an operator. `None` is an answer (the polynomial does not split into
/// distinct linear factors), not an error.
///
/// Over `F_p` the test is divisibility of `x^p - x` by `m` (computed by
/// modular exponentiation), followed by a residue scan for the roots. Over the
/// rationals, denominators are cleared and every rational-root-theorem
/// candidate is tried with deflation; a repeated root or a leftover
/// nonconstant factor means `None`.
pub fn distinct_linear_roots(m: &Polynomial) -> Option<Vec<Scalar>> {
    assert!(m.is_monic(), "distinct_linear_roots requires a monic polynomial");
    let degree = m.degree().expect("nonzero polynomial");
    assert!(degree >= 1, "distinct_linear_roots requires degree >= 1");
    match m.spec() {
        FieldSpec::Prime(p) => {
            // m splits into distinct linear factors iff m divides x^p - x
            let x = Polynomial::x(m.spec());
            let xp = x.pow_mod(p, m).expect("nonzero modulus");
            let x_red = x.divmod(m).expect("nonzero modulus").1;
            if !xp.sub(&x_red).is_zero() {
                return None;
            }
            let mut roots = Vec::with_capacity(degree);
            for r in 0..p {
                let r = m.spec().from_integer(r as i64);
                if m.eval(&r).is_zero() {
                    roots.push(r);
                    if roots.len() == degree {
                        break;
                    }
                }
            }
            debug_assert_eq!(roots.len(), degree);
            Some(roots)
        }
        FieldSpec::Rational => {
            let mut work = m.clone();
            let mut roots: Vec<Scalar> = Vec::new();
            let zero = m.spec().zero();

            // factor out x^e first: the rational root theorem needs a nonzero
            // constant term
            let trailing = work.coeffs().iter().take_while(|c| c.is_zero()).count();
            if trailing >= 2 {
                return None; // repeated root 0
            }
            if trailing == 1 {
                let x = Polynomial::x(work.spec());
                work = work.divmod(&x).unwrap().0;
                roots.push(zero.clone());
            }

            if work.degree() == Some(0) {
                roots.sort();
                return Some(roots);
            }

            for r in rational_root_candidates(&work) {
                let r = Scalar::Rational(r);
                if work.eval(&r).is_zero() {
                    work = deflate(&work, &r);
                    if work.eval(&r).is_zero() {
                        return None; // repeated root
                    }
                    roots.push(r);
                }
            }

            if work.degree().is_some_and(|d| d > 0) {
                return None; // a nonconstant, rootless factor remains
            }
            debug_assert_eq!(roots.len(), degree);
            roots.sort();
            Some(roots)
        }
    }
}

/// Exact division of `p` by `x - r` (requires `p(r) = 0`).
fn deflate(p: &Polynomial, r: &Scalar) -> Polynomial {
    let divisor = Polynomial::from_coeffs(p.spec(), vec![-r, p.spec().one()]);
    let (q, rem) = p.divmod(&divisor).unwrap();
    debug_assert!(rem.is_zero());
    q
}

/// All candidates `± p/q` with `p` dividing the constant term and `q` the
/// leading coefficient of the primitive integer polynomial obtained by
/// clearing denominators. Complete for rational roots by the rational root
/// theorem; deduplicated and deterministic.
fn rational_root_candidates(p: &Polynomial) -> BTreeSet<BigRational> {
    let ints = clear_denominators(p);
    let constant = ints.first().expect("nonzero constant term").clone();
    let leading = ints.last().expect("nonzero polynomial").clone();
    debug_assert!(!constant.is_zero());
    let mut candidates = BTreeSet::new();
    for num in positive_divisors(&constant.abs()) {
        for den in positive_divisors(&leading.abs()) {
            let q = BigRational::new(num.clone(), den);
            candidates.insert(-&q);
            candidates.insert(q);
        }
    }
    candidates
}

/// Multiplies by the lcm of denominators and divides by the gcd of numerators,
/// giving primitive integer coefficients (ascending).
fn clear_denominators(p: &Polynomial) -> Vec<BigInt> {
    let rationals: Vec<&BigRational> = p
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Rational(r) => r,
            Scalar::Prime { .. } => unreachable!("rational polynomial expected"),
        })
        .collect();
    let lcm = rationals
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rationals
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    let content = ints
        .iter()
        .fold(BigInt::zero(), |acc, n| acc.gcd(n))
        .max(BigInt::one());
    ints.iter().map(|n| n / &content).collect()
}

/// All positive divisors of `n > 0`, via full factorization.
fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divisors = vec![BigInt::one()];
    for (prime, mult) in factorize(n) {
        let base = divisors.clone();
        let mut power = BigInt::one();
        for _ in 0..mult {
            power *= &prime;
            divisors.extend(base.iter().map(|d| d * &power));
        }
    }
    divisors
}

/// Prime factorization of `n > 0`: trial division up to 2^20, then
/// Miller-Rabin plus Pollard rho for any remaining cofactor. Coefficients this
/// leaves unfactored are far beyond desk scale, so that case panics rather
/// than silently missing root candidates.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut push = |p: BigInt, m: u32| {
        if let Some(entry) = factors.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += m;
        } else {
            factors.push((p, m));
        }
    };
    let mut rest = n.clone();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(1u64 << 20);
    while &d * &d <= rest && d <= bound {
        let mut mult = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            mult += 1;
        }
        if mult > 0 {
            push(d.clone(), mult);
        }
        d += if d == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    if rest > BigInt::one() {
        if &rest <= &(&bound * &bound) {
            // no factor <= 2^20 remains, so a cofactor <= 2^40 is prime
            push(rest, 1);
        } else {
            for p in factor_large(&rest) {
                push(p, 1);
            }
        }
    }
    factors.sort();
    factors
}

fn factor_large(n: &BigInt) -> Vec<BigInt> {
    assert!(
        n.bits() <= 81,
        "coefficient factor {n} exceeds the desk-scale bound for rational root scanning"
    );
    let n_u128: u128 = n.try_into().expect("fits in u128");
    if is_prime_u128(n_u128) {
        return vec![n.clone()];
    }
    let d = pollard_rho(n_u128);
    let mut out = factor_large(&BigInt::from(d));
    out.extend(factor_large(&BigInt::from(n_u128 / d)));
    out
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // values stay below 2^81, and BigInt keeps the product exact
    let r = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(m);
    r.try_into().unwrap()
}

fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc: u128 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid well past 2^81 with this base set.
fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho (Brent variant) for odd composite `n`.
fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u128(diff, n);
        }
        if d != n && d != 0 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
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
    fn gcd_of_difference_of_squares() {
        let a = Polynomial::from_integers(q(), &[-1, 0, 1]); // x^2 - 1
        let b = Polynomial::from_integers(q(), &[-1, 1]); // x - 1
        assert_eq!(a.gcd(&b), b);
    }

    #[test]
    fn derivative_in_char_two() {
        let p = Polynomial::from_integers(fp(2), &[1, 1, 1]); // x^2 + x + 1
        assert_eq!(p.derivative(), Polynomial::one(fp(2)));
    }

    #[test]
    fn eval_at_root() {
        let p = Polynomial::from_integers(q(), &[0, -1, 0, 1]); // x^3 - x
        assert!(p.eval(&q().one()).is_zero());
    }

    #[test]
    fn divmod_round_trips() {
        let a = Polynomial::from_integers(q(), &[3, -2, 0, 5, 1]);
        let b = Polynomial::from_integers(q(), &[1, 2, 2]);
        let (quot, rem) = a.divmod(&b).unwrap();
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree() < b.degree());
        assert!(a.divmod(&Polynomial::zero(q())).is_err());
    }

    #[test]
    fn splits_with_distinct_roots_over_q() {
        let p = Polynomial::from_integers(q(), &[0, -1, 0, 1]); // x^3 - x
        let roots = distinct_linear_roots(&p).unwrap();
        let expect: Vec<Scalar> = [-1, 0, 1].iter().map(|&n| q().from_integer(n)).collect();
        assert_eq!(roots, expect);
    }

    #[test]
    fn irreducible_quadratic_over_q() {
        // oracle: the rational root theorem candidates of x^2 + 1 are +-1,
        // both fail, and a degree-2 factor remains
        let p = Polynomial::from_integers(q(), &[1, 0, 1]);
        for c in [-1i64, 1] {
            assert!(!p.eval(&q().from_integer(c)).is_zero());
        }
        assert_eq!(distinct_linear_roots(&p), None);
    }

    #[test]
    fn splits_over_f2() {
        let p = Polynomial::from_integers(fp(2), &[0, 1, 1]); // x^2 + x = x(x+1)
        let roots = distinct_linear_roots(&p).unwrap();
        assert_eq!(roots, vec![fp(2).from_integer(0), fp(2).from_integer(1)]);
    }

    #[test]
    fn repeated_root_is_rejected() {
        let p = Polynomial::from_integers(q(), &[1, -2, 1]); // (x-1)^2
        assert_eq!(distinct_linear_roots(&p), None);
        let p = Polynomial::from_integers(fp(2), &[1, 0, 1]); // (x+1)^2 over F_2
        assert_eq!(distinct_linear_roots(&p), None);
    }

    #[test]
    fn reconstruction_invariant() {
        // if Some(roots), the product of (x - r) rebuilds the input exactly
        let polys = [
            Polynomial::from_integers(q(), &[0, -1, 0, 1]),
            Polynomial::from_integers(q(), &[-6, 11, -6, 1]), // (x-1)(x-2)(x-3)
            Polynomial::from_integers(fp(5), &[0, 4, 0, 1]),  // x^3 + 4x = x(x-1)(x-4) mod 5
        ];
        for p in polys {
            let roots = distinct_linear_roots(&p).unwrap();
            assert_eq!(roots.len(), p.degree().unwrap());
            let mut prod = Polynomial::one(p.spec());
            for r in &roots {
                prod = prod.mul(&Polynomial::from_coeffs(p.spec(), vec![-r, p.spec().one()]));
            }
            assert_eq!(prod, p);
        }
    }

    #[test]
    fn fractional_roots_are_found() {
        // (x - 1/2)(x + 3) = x^2 + 5/2 x - 3/2
        let p = Polynomial::from_coeffs(
            q(),
            vec![
                q().parse_scalar("-3/2").unwrap(),
                q().parse_scalar("5/2").unwrap(),
                q().one(),
            ],
        );
        let roots = distinct_linear_roots(&p).unwrap();
        assert_eq!(
            roots,
            vec![q().from_integer(-3), q().parse_scalar("1/2").unwrap()]
        );
    }

    #[test]
    fn split_test_agrees_with_exhaustive_scan_over_f5() {
        // oracle: exhaustive root scan with multiplicity via repeated division
        let spec = fp(5);
        let mut mismatches = 0;
        for a in 0..5i64 {
            for b in 0..5i64 {
                for c in 0..5i64 {
                    let m = Polynomial::from_integers(spec, &[a, b, c, 1]);
                    let fast = distinct_linear_roots(&m);
                    let slow = oracle_distinct_roots(&m);
                    if fast != slow {
                        mismatches += 1;
                    }
                }
            }
        }
        assert_eq!(mismatches, 0);
    }

    /// Scan all residues, deflating to full multiplicity.
    fn oracle_distinct_roots(m: &Polynomial) -> Option<Vec<Scalar>> {
        let FieldSpec::Prime(p) = m.spec() else { panic!() };
        let mut work = m.clone();
        let mut roots = Vec::new();
        for r in 0..p {
            let r = m.spec().from_integer(r as i64);
            let mut mult = 0;
            while work.degree().is_some_and(|d| d > 0) && work.eval(&r).is_zero() {
                work = deflate(&work, &r);
                mult += 1;
            }
            match mult {
                0 => {}
                1 => roots.push(r),
                _ => return None,
            }
        }
        if work.degree().is_some_and(|d| d > 0) {
            return None;
        }
        Some(roots)
    }

    #[test]
    fn display_formats() {
        let p = Polynomial::from_integers(q(), &[0, -1, 0, 1]);
        assert_eq!(p.to_string(), "x^3 - x");
        let p = Polynomial::from_integers(q(), &[1, 0, 1]);
        assert_eq!(p.to_string(), "x^2 + 1");
        assert_eq!(Polynomial::zero(q()).to_string(), "0");
    }
}
