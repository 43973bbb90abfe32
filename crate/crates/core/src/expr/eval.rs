use num_traits::ToPrimitive;

use super::{Expr, ExprError, Param};
use crate::Scalar;

/// Numeric evaluation context: the variable value and the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bindings<T: Scalar> {
    pub x: T,
    pub g: T,
    pub n: u32,
    pub g1: T,
    /// Value of the implicit solution symbol, when evaluating an inverse rate.
    pub solution: Option<T>,
}

impl<T: Scalar> Bindings<T> {
    pub fn new(x: T, g: T, n: u32, g1: T) -> Result<Self, ExprError> {
        if !(x > T::zero()) || !x.is_finite() {
            return Err(ExprError::Domain(format!("x must be positive, got {x}")));
        }
        if !(g > T::one()) || !(g1 > T::one()) {
            return Err(ExprError::Domain(format!("bases must exceed 1, got g={g}, g1={g1}")));
        }
        if n < 5 {
            return Err(ExprError::Domain(format!("n must be at least 5, got {n}")));
        }
        Ok(Bindings { x, g, n, g1, solution: None })
    }

    pub fn with_x(self, x: T) -> Self {
        Bindings { x, ..self }
    }

    pub fn with_solution(self, solution: T) -> Self {
        Bindings { solution: Some(solution), ..self }
    }

    fn param(&self, p: Param) -> T {
        match p {
            Param::G => self.g,
            Param::G1 => self.g1,
            Param::N => T::from_u32(self.n).unwrap(),
        }
    }
}

/// Evaluates `e`. With `log_domain` set, returns `log2(e)` computed without
/// forming the (possibly huge) value itself.
pub fn evaluate<T: Scalar>(e: &Expr, b: &Bindings<T>, log_domain: bool) -> Result<T, ExprError> {
    if log_domain {
        let (sign, l) = log_value(e, b)?;
        if sign <= 0 {
            return Err(ExprError::Domain(format!("log of non-positive value of {e}")));
        }
        Ok(l)
    } else {
        let v = value(e, b)?;
        if !v.is_finite() {
            return Err(ExprError::Overflow(e.to_string()));
        }
        Ok(v)
    }
}

fn literal<T: Scalar>(e: &Expr) -> Option<T> {
    e.as_rational().and_then(|r| r.to_f64()).and_then(T::from_f64)
}

fn integral<T: Scalar>(k: T) -> bool {
    k == k.trunc()
}

fn power<T: Scalar>(base: T, k: T, e: &Expr) -> Result<T, ExprError> {
    if base < T::zero() && !integral(k) {
        return Err(ExprError::Domain(format!("negative base to a fractional power in {e}")));
    }
    if base == T::zero() && k < T::zero() {
        return Err(ExprError::Domain(format!("zero to a negative power in {e}")));
    }
    Ok(base.powf(k))
}

fn value<T: Scalar>(e: &Expr, b: &Bindings<T>) -> Result<T, ExprError> {
    let v = match e {
        Expr::Var => b.x,
        Expr::Solution => b
            .solution
            .ok_or_else(|| ExprError::Domain("solution symbol without a bound value".into()))?,
        Expr::Int(_) | Expr::Rat(_) => literal(e).ok_or_else(|| ExprError::Overflow(e.to_string()))?,
        Expr::Param(p) => b.param(*p),
        Expr::Neg(a) => -value(a, b)?,
        Expr::Add(ts) => {
            let mut s = T::zero();
            for t in ts {
                s = s + value(t, b)?;
            }
            s
        }
        Expr::Mul(fs) => {
            let mut p = T::one();
            for f in fs {
                p = p * value(f, b)?;
            }
            p
        }
        Expr::Pow(base, k) | Expr::Exp(base, k) => power(value(base, b)?, value(k, b)?, e)?,
        Expr::Ln(u) => {
            let u = value(u, b)?;
            if u <= T::zero() {
                return Err(ExprError::Domain(format!("ln of non-positive value in {e}")));
            }
            u.ln()
        }
        Expr::Log(_, u) => {
            let u = value(u, b)?;
            if u <= T::zero() {
                return Err(ExprError::Domain(format!("log of non-positive value in {e}")));
            }
            u.ln() / b.g.ln()
        }
    };
    if v.is_nan() {
        return Err(ExprError::Domain(format!("undefined value in {e}")));
    }
    Ok(v)
}

/// (sign, log2 |value|); sign 0 means the value is exactly zero.
fn log_value<T: Scalar>(e: &Expr, b: &Bindings<T>) -> Result<(i8, T), ExprError> {
    let of = |v: T| -> (i8, T) {
        if v > T::zero() {
            (1, v.log2())
        } else if v < T::zero() {
            (-1, (-v).log2())
        } else {
            (0, T::neg_infinity())
        }
    };
    Ok(match e {
        Expr::Var | Expr::Solution | Expr::Param(_) => of(value(e, b)?),
        Expr::Int(_) | Expr::Rat(_) => {
            let r = e.as_rational().unwrap();
            let sign = if r > num_rational::BigRational::from_integer(0.into()) { 1 } else { -1 };
            if r == num_rational::BigRational::from_integer(0.into()) {
                (0, T::neg_infinity())
            } else {
                let num = r.numer().magnitude().bits() as f64;
                let den = r.denom().magnitude().bits() as f64;
                // exact for anything that fits a double, bit-length estimate otherwise
                let l = match (r.numer().to_f64(), r.denom().to_f64()) {
                    (Some(a), Some(d)) if a.is_finite() && d.is_finite() => (a.abs() / d).log2(),
                    _ => num - den,
                };
                (sign, T::from_f64(l).unwrap())
            }
        }
        Expr::Neg(a) => {
            let (s, l) = log_value(a, b)?;
            (-s, l)
        }
        Expr::Mul(fs) => {
            let mut sign = 1i8;
            let mut l = T::zero();
            for f in fs {
                let (s, lf) = log_value(f, b)?;
                if s == 0 {
                    return Ok((0, T::neg_infinity()));
                }
                sign *= s;
                l = l + lf;
            }
            (sign, l)
        }
        Expr::Add(ts) => {
            let parts = ts.iter().map(|t| log_value(t, b)).collect::<Result<Vec<_>, _>>()?;
            let live: Vec<_> = parts.into_iter().filter(|(s, _)| *s != 0).collect();
            if live.is_empty() {
                return Ok((0, T::neg_infinity()));
            }
            let m = live.iter().map(|(_, l)| *l).fold(T::neg_infinity(), T::max);
            let two = T::from_f64(2.0).unwrap();
            let mut acc = T::zero();
            for (s, l) in &live {
                let w = two.powf(*l - m);
                acc = if *s > 0 { acc + w } else { acc - w };
            }
            let (s, la) = of(acc);
            (s, m + la)
        }
        Expr::Pow(base, k) | Expr::Exp(base, k) => {
            let kv = value(k, b)?;
            if !kv.is_finite() {
                return Err(ExprError::Overflow(k.to_string()));
            }
            let (s, lb) = log_value(base, b)?;
            match s {
                0 if kv > T::zero() => (0, T::neg_infinity()),
                0 => return Err(ExprError::Domain(format!("zero to a non-positive power in {e}"))),
                1 => (1, kv * lb),
                _ => {
                    if !integral(kv) {
                        return Err(ExprError::Domain(format!("negative base to a fractional power in {e}")));
                    }
                    let odd = (kv / T::from_f64(2.0).unwrap()).fract() != T::zero();
                    (if odd { -1 } else { 1 }, kv * lb)
                }
            }
        }
        Expr::Ln(u) | Expr::Log(_, u) => {
            let (s, lu) = log_value(u, b)?;
            if s <= 0 {
                return Err(ExprError::Domain(format!("log of non-positive value in {e}")));
            }
            let ln2 = T::from_f64(std::f64::consts::LN_2).unwrap();
            let natural = lu * ln2;
            let v = match e {
                Expr::Ln(_) => natural,
                _ => natural / b.g.ln(),
            };
            of(v)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn at(x: f64) -> Bindings<f64> {
        Bindings::new(x, 2.0, 5, 3.0).unwrap()
    }

    #[test]
    fn direct_values() {
        assert_eq!(evaluate(&parse("x^x").unwrap(), &at(3.0), false).unwrap(), 27.0);
        assert_eq!(evaluate(&parse("g^x").unwrap(), &at(10.0), false).unwrap(), 1024.0);
    }

    #[test]
    fn log_domain_avoids_overflow() {
        let e = parse("x^x").unwrap();
        let want = 100.0 * 100f64.log2();
        let got = evaluate(&e, &at(100.0), true).unwrap();
        assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
        assert!(matches!(evaluate(&e, &at(1000.0), false), Err(ExprError::Overflow(_))));
        assert!(evaluate(&e, &at(1000.0), true).unwrap() > 9000.0);
    }

    #[test]
    fn log_domain_handles_sums_and_signs() {
        let e = parse("x^n + x + 1").unwrap();
        let got = evaluate(&e, &at(7.0), true).unwrap();
        let want = (7f64.powi(5) + 8.0).log2();
        assert!((got - want).abs() < 1e-12);
        let neg = parse("-1/x").unwrap();
        assert!(matches!(evaluate(&neg, &at(2.0), true), Err(ExprError::Domain(_))));
        assert_eq!(evaluate(&neg, &at(2.0), false).unwrap(), -0.5);
    }

    #[test]
    fn domain_errors() {
        let e = parse("ln(x - 5)").unwrap();
        assert!(matches!(evaluate(&e, &at(2.0), false), Err(ExprError::Domain(_))));
        assert!(Bindings::new(-1.0, 2.0, 5, 3.0).is_err());
        assert!(Bindings::new(1.0, 1.0, 5, 3.0).is_err());
        assert!(Bindings::new(1.0, 2.0, 4, 3.0).is_err());
    }

    #[test]
    fn single_precision() {
        let b = Bindings::<f32>::new(3.0, 2.0, 5, 3.0).unwrap();
        assert_eq!(evaluate(&parse("x^x").unwrap(), &b, false).unwrap(), 27.0f32);
    }
}
