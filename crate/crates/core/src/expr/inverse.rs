use serde::Serialize;

use super::{evaluate, parse, Bindings, Expr, ExprError};
use crate::Scalar;

/// Derivative of the inverse of an increasing function, written in `y`
/// (the [`Expr::Var`] slot). Where the closed form needs the preimage it
/// appears as [`Expr::Solution`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseRate {
    pub forward: Expr,
    pub rate: Expr,
}

fn y() -> Expr {
    Expr::Var
}

// kept in the unsimplified textbook shape; simplify would merge y^(1/n)/y
fn build(forward: &Expr) -> Option<Expr> {
    let x_n = parse("x^n").ok()?;
    let g_x = parse("g^x").ok()?;
    let x_x = parse("x^x").ok()?;
    if *forward == x_n {
        Some(Expr::Mul(vec![
            Expr::pow(y(), Expr::recip(Expr::n())),
            Expr::recip(Expr::n()),
            Expr::recip(y()),
        ]))
    } else if *forward == g_x {
        Some(Expr::Mul(vec![Expr::recip(y()), Expr::recip(Expr::ln(Expr::g()))]))
    } else if *forward == x_x {
        Some(Expr::Mul(vec![
            Expr::recip(y()),
            Expr::recip(Expr::Add(vec![Expr::ln(Expr::Solution), Expr::one()])),
        ]))
    } else {
        None
    }
}

pub fn inverse_rate(e: &Expr) -> Result<InverseRate, ExprError> {
    let forward = super::simplify(e);
    match build(&forward) {
        Some(rate) => Ok(InverseRate { forward, rate }),
        None => Err(ExprError::NotInvertible(forward.to_string())),
    }
}

impl InverseRate {
    /// Evaluates the rate at `y`; `x` must be the preimage of `y`.
    pub fn eval<T: Scalar>(&self, y: T, x: T, b: &Bindings<T>) -> Result<T, ExprError> {
        let at = b.with_x(y).with_solution(x);
        evaluate(&self.rate, &at, false)
    }
}

/// Preimage of `target` under an increasing `e`, by bisection on `[lo, hi]`.
pub fn invert_increasing<T: Scalar>(
    e: &Expr,
    target: T,
    b: &Bindings<T>,
    lo: T,
    hi: T,
) -> Result<T, ExprError> {
    let f = |x: T| evaluate(e, &b.with_x(x), false);
    let (mut lo, mut hi) = (lo, hi);
    if f(lo)? > target || f(hi)? < target {
        return Err(ExprError::Domain(format!("target {target} not bracketed for {e}")));
    }
    let two = T::from_f64(2.0).unwrap();
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::render_with_var;

    #[test]
    fn closed_forms_render() {
        let show = |s: &str| render_with_var(&inverse_rate(&parse(s).unwrap()).unwrap().rate, "y");
        assert_eq!(show("x^n"), "y^(1/n)/(n*y)");
        assert_eq!(show("g^x"), "1/(y*ln(g))");
        assert_eq!(show("x^x"), "1/(y*(ln(x) + 1))");
    }

    #[test]
    fn rejects_other_forms() {
        assert!(matches!(inverse_rate(&parse("-1/x").unwrap()), Err(ExprError::NotInvertible(_))));
    }

    #[test]
    fn matches_numeric_inverse() {
        let b = Bindings::new(1.0f64, 3.0, 6, 2.0).unwrap();
        for s in ["x^n", "g^x", "x^x"] {
            let e = parse(s).unwrap();
            let r = inverse_rate(&e).unwrap();
            let y0 = 500.0;
            let h = 1e-5 * y0;
            let inv = |t: f64| invert_increasing(&e, t, &b, 1.0, 50.0).unwrap();
            let fd = (inv(y0 + h) - inv(y0 - h)) / (2.0 * h);
            let got = r.eval(y0, inv(y0), &b).unwrap();
            assert!(((got - fd) / fd).abs() < 1e-6, "{s}: {got} vs {fd}");
        }
    }
}
