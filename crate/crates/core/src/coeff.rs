//! Exact coefficient algebra over the integer parameter `n`, which is always
//! taken to satisfy `n >= 5`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::expr::{render, simplify, Expr};

/// Smallest admissible value of `n`.
pub const N_MIN: i64 = 5;

/// Laurent polynomial in `n` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: BTreeMap<i32, BigRational>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn constant(r: BigRational) -> Self {
        Coeff::monomial(r, 0)
    }

    pub fn int(v: i64) -> Self {
        Coeff::constant(rat(v))
    }

    pub fn one() -> Self {
        Coeff::int(1)
    }

    /// `r * n^power`
    pub fn monomial(r: BigRational, power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(power, r);
        }
        Coeff { terms }
    }

    pub fn n() -> Self {
        Coeff::monomial(BigRational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// `Some((r, k))` when the coefficient is the single term `r * n^k`.
    pub fn as_monomial(&self) -> Option<(BigRational, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, r)| (r.clone(), *k))
        } else {
            None
        }
    }

    pub fn coefficient(&self, power: i32) -> BigRational {
        self.terms.get(&power).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn powers(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn scale(&self, r: &BigRational) -> Coeff {
        if r.is_zero() {
            return Coeff::zero();
        }
        Coeff { terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect() }
    }

    fn shift(&self, by: i32) -> Coeff {
        Coeff { terms: self.terms.iter().map(|(k, c)| (k + by, c.clone())).collect() }
    }

    /// Sign valid for every integer `n >= 5`, or `None` when it changes or
    /// cannot be certified.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        // n^m > 0, so clearing negative powers keeps the sign
        let low = *self.terms.keys().next().unwrap();
        let poly = self.shift(-low);
        let degree = *poly.terms.keys().last().unwrap() as usize;
        let mut dense = vec![BigRational::zero(); degree + 1];
        for (k, c) in &poly.terms {
            dense[*k as usize] = c.clone();
        }
        // Taylor shift n = 5 + t; coefficients in t certify the sign on t >= 0
        let five = rat(N_MIN);
        for i in 0..degree {
            for j in (i..degree).rev() {
                let carry = &dense[j + 1] * &five;
                dense[j] = &dense[j] + carry;
            }
        }
        let constant = &dense[0];
        if constant.is_positive() && dense.iter().all(|c| !c.is_negative()) {
            Some(Ordering::Greater)
        } else if constant.is_negative() && dense.iter().all(|c| !c.is_positive()) {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn eval_f64(&self, n: f64) -> f64 {
        self.terms.iter().map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * n.powi(*k)).sum()
    }

    pub fn eval_at(&self, n: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            let p = num_traits::pow(rat(n), k.unsigned_abs() as usize);
            acc += if *k < 0 { c / p } else { c * p };
        }
        acc
    }

    pub fn to_expr(&self) -> Expr {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                Expr::Mul(vec![Expr::rational(c.clone()), Expr::pow(Expr::n(), Expr::int(*k as i64))])
            })
            .collect();
        simplify(&Expr::Add(terms))
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            let slot = terms.entry(*k).or_insert_with(BigRational::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(k);
            }
        }
        Coeff { terms }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out = &out + &Coeff::monomial(a * b, i + j);
            }
        }
        out
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let low = self.terms.keys().next().copied().unwrap_or(0);
        if low < 0 && self.terms.len() > 1 {
            // (n - 1)/n rather than -1/n + 1
            let num = render(&self.shift(-low).to_expr());
            let den = render(&Coeff::monomial(BigRational::one(), -low).to_expr());
            return write!(f, "({num})/{den}");
        }
        f.write_str(&render(&self.to_expr()))
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Exponent of the form `a*n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NExp {
    pub a: i64,
    pub b: i64,
}

impl NExp {
    pub const ZERO: NExp = NExp { a: 0, b: 0 };

    pub fn int(b: i64) -> Self {
        NExp { a: 0, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn as_int(self) -> Option<i64> {
        (self.a == 0).then_some(self.b)
    }

    /// Sign for every `n >= 5`; `None` when it changes.
    pub fn sign(self) -> Option<Ordering> {
        let at_min = N_MIN * self.a + self.b;
        if self.is_zero() {
            Some(Ordering::Equal)
        } else if self.a >= 0 && at_min > 0 {
            Some(Ordering::Greater)
        } else if self.a <= 0 && at_min < 0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn eval(self, n: i64) -> i64 {
        self.a * n + self.b
    }

    pub fn to_coeff(self) -> Coeff {
        &Coeff::n().scale(&rat(self.a)) + &Coeff::int(self.b)
    }

    pub fn to_expr(self) -> Expr {
        self.to_coeff().to_expr()
    }
}

impl Add for NExp {
    type Output = NExp;
    fn add(self, o: NExp) -> NExp {
        NExp { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for NExp {
    type Output = NExp;
    fn sub(self, o: NExp) -> NExp {
        NExp { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for NExp {
    type Output = NExp;
    fn neg(self) -> NExp {
        NExp { a: -self.a, b: -self.b }
    }
}

impl fmt::Display for NExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.to_expr()))
    }
}

impl Serialize for NExp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_int() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

/// A finite positive limit value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstValue {
    /// `num / den`, reduced to a single Laurent polynomial when `den` is a
    /// monomial.
    Exact { num: Coeff, den: Coeff },
    /// Some positive constant whose value the rules do not pin down.
    Positive,
}

impl ConstValue {
    pub fn exact(num: Coeff, den: Coeff) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if let Some((r, k)) = den.as_monomial() {
            let num = num.scale(&r.recip()).shift(-k);
            return ConstValue::Exact { num, den: Coeff::one() };
        }
        ConstValue::Exact { num, den }
    }

    pub fn coeff(c: Coeff) -> Self {
        ConstValue::Exact { num: c, den: Coeff::one() }
    }

    pub fn one() -> Self {
        ConstValue::coeff(Coeff::one())
    }

    pub fn int(v: i64) -> Self {
        ConstValue::coeff(Coeff::int(v))
    }

    /// Ordering valid for all `n >= 5`; `None` if undecidable.
    pub fn compare(&self, other: &ConstValue) -> Option<Ordering> {
        match (self, other) {
            (ConstValue::Exact { num: a, den: b }, ConstValue::Exact { num: c, den: d }) => {
                let diff = &(a * d) - &(c * b);
                let s = diff.sign()?;
                let ds = (b * d).sign()?;
                Some(if ds == Ordering::Less { s.reverse() } else { s })
            }
            _ => None,
        }
    }

    /// Structural equality of exact values; unknown constants are never
    /// considered equal to anything.
    pub fn same_as(&self, other: &ConstValue) -> bool {
        match (self, other) {
            (ConstValue::Exact { num: a, den: b }, ConstValue::Exact { num: c, den: d }) => {
                (&(a * d) - &(c * b)).is_zero()
            }
            _ => false,
        }
    }

    pub fn eval_f64(&self, n: f64) -> Option<f64> {
        match self {
            ConstValue::Exact { num, den } => Some(num.eval_f64(n) / den.eval_f64(n)),
            ConstValue::Positive => None,
        }
    }
}

impl fmt::Display for ConstValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstValue::Exact { num, den } if *den == Coeff::one() => write!(f, "{num}"),
            ConstValue::Exact { num, den } => {
                let e = simplify(&Expr::Mul(vec![num.to_expr(), Expr::recip(den.to_expr())]));
                f.write_str(&render(&e))
            }
            ConstValue::Positive => f.write_str("c"),
        }
    }
}

impl Serialize for ConstValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(pairs: &[(i32, i64)]) -> Coeff {
        pairs.iter().fold(Coeff::zero(), |acc, (k, v)| &acc + &Coeff::monomial(rat(*v), *k))
    }

    #[test]
    fn sign_certified_from_five() {
        assert_eq!(c(&[(1, 1), (0, -1)]).sign(), Some(Ordering::Greater));
        assert_eq!(c(&[(1, 1), (0, -5)]).sign(), None);
        assert_eq!(c(&[(2, 1), (1, -4)]).sign(), Some(Ordering::Greater));
        assert_eq!(c(&[(2, 1), (1, -6)]).sign(), None);
        assert_eq!(c(&[(2, -1), (0, 3)]).sign(), Some(Ordering::Less));
        assert_eq!(c(&[(-1, 1)]).sign(), Some(Ordering::Greater));
        assert_eq!(Coeff::zero().sign(), Some(Ordering::Equal));
    }

    #[test]
    fn sign_agrees_with_evaluation() {
        for a in -3..=3 {
            for b in -20..=20 {
                for d in -2..=2 {
                    let p = c(&[(2, d), (1, a), (0, b)]);
                    if let Some(s) = p.sign() {
                        for n in 5..60 {
                            assert_eq!(p.eval_at(n).cmp(&BigRational::zero()), s, "{p} at {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nexp_sign() {
        assert_eq!(NExp { a: 1, b: -1 }.sign(), Some(Ordering::Greater));
        assert_eq!(NExp { a: 1, b: -5 }.sign(), None);
        assert_eq!(NExp { a: -1, b: 2 }.sign(), Some(Ordering::Less));
        assert_eq!(NExp::int(0).sign(), Some(Ordering::Equal));
    }

    #[test]
    fn rendering() {
        assert_eq!(c(&[(1, 1), (0, 1)]).to_string(), "n + 1");
        assert_eq!(NExp { a: 1, b: -1 }.to_string(), "n - 1");
        let v = ConstValue::exact(c(&[(1, 1), (0, -1)]), Coeff::n());
        assert_eq!(v, ConstValue::coeff(c(&[(0, 1), (-1, -1)])));
        assert_eq!(v.to_string(), "(n - 1)/n");
    }

    #[test]
    fn const_ordering() {
        let one = ConstValue::one();
        let n1 = ConstValue::coeff(c(&[(1, 1), (0, 1)]));
        assert_eq!(one.compare(&n1), Some(Ordering::Less));
        assert!(n1.same_as(&ConstValue::exact(c(&[(2, 1), (1, 1)]), Coeff::n())));
        assert_eq!(ConstValue::Positive.compare(&one), None);
    }
}
