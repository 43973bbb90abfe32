use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{canonical_cmp, Expr};

/// Largest integer exponent folded when both base and exponent are literals.
const MAX_FOLD_EXPONENT: u32 = 4096;

/// Canonical form: flattened and sorted sums and products, like terms and
/// like factors combined, literals folded. Idempotent.
pub fn simplify(e: &Expr) -> Expr {
    let mut cur = simp(e);
    for _ in 0..32 {
        let next = simp(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
    cur
}

fn simp(e: &Expr) -> Expr {
    match e {
        Expr::Var | Expr::Solution | Expr::Param(_) | Expr::Int(_) => e.clone(),
        Expr::Rat(r) => Expr::rational(r.clone()),
        Expr::Neg(a) => negate(simp(a)),
        Expr::Add(ts) => mk_add(ts.iter().map(simp).collect()),
        Expr::Mul(fs) => mk_mul(fs.iter().map(simp).collect()),
        Expr::Pow(b, k) | Expr::Exp(b, k) => mk_pow(simp(b), simp(k)),
        Expr::Ln(a) => {
            let a = simp(a);
            if a.is_one() {
                Expr::zero()
            } else {
                Expr::ln(a)
            }
        }
        Expr::Log(base, a) => {
            let a = simp(a);
            if a.is_one() {
                Expr::zero()
            } else {
                Expr::Log(*base, Box::new(a))
            }
        }
    }
}

pub(crate) fn negate(e: Expr) -> Expr {
    match e {
        Expr::Add(ts) => mk_add(ts.into_iter().map(negate).collect()),
        other => mk_mul(vec![Expr::int(-1), other]),
    }
}

fn undefined() -> Expr {
    Expr::pow(Expr::zero(), Expr::int(-1))
}

// `0^-1` absorbs any sum, product or power it appears in, like NaN
pub(crate) fn is_undefined(e: &Expr) -> bool {
    matches!(e, Expr::Pow(b, k) if b.is_zero() && **k == Expr::int(-1))
}

/// (coefficient, core); the core is `None` for a pure constant.
pub(crate) fn split_term(t: &Expr) -> (BigRational, Option<Expr>) {
    match t {
        Expr::Int(_) | Expr::Rat(_) => (t.as_rational().unwrap(), None),
        Expr::Neg(a) => {
            let (c, core) = split_term(a);
            (-c, core)
        }
        Expr::Mul(fs) if fs.first().is_some_and(|f| f.as_rational().is_some()) => {
            let c = fs[0].as_rational().unwrap();
            let rest = &fs[1..];
            let core = if rest.len() == 1 { rest[0].clone() } else { Expr::Mul(rest.to_vec()) };
            (c, Some(core))
        }
        other => (BigRational::one(), Some(other.clone())),
    }
}

fn add_sort_key(t: &Expr) -> Expr {
    split_term(t).1.unwrap_or_else(Expr::one)
}

pub(crate) fn mk_add(terms: Vec<Expr>) -> Expr {
    let mut flat = Vec::new();
    let mut stack = terms;
    stack.reverse();
    while let Some(t) = stack.pop() {
        match t {
            Expr::Add(inner) => stack.extend(inner.into_iter().rev()),
            other => flat.push(other),
        }
    }

    if flat.iter().any(is_undefined) {
        return undefined();
    }
    let mut constant = BigRational::zero();
    let mut groups: Vec<(BigRational, Expr)> = Vec::new();
    for t in &flat {
        match split_term(t) {
            (c, None) => constant += c,
            (c, Some(core)) => match groups.iter_mut().find(|(_, k)| *k == core) {
                Some(slot) => slot.0 += c,
                None => groups.push((c, core)),
            },
        }
    }

    let mut out: Vec<Expr> = groups
        .into_iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, core)| {
            if c.is_one() {
                core
            } else {
                mk_mul(vec![Expr::rational(c), core])
            }
        })
        .collect();
    if !constant.is_zero() {
        out.push(Expr::rational(constant));
    }
    out.sort_by(|a, b| canonical_cmp(&add_sort_key(b), &add_sort_key(a)));
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    }
}

/// Product ordering: `x`-free factors ascending, then `x`-dependent factors
/// descending.
pub(crate) fn mul_order(a: &Expr, b: &Expr) -> Ordering {
    match (a.depends_on_x(), b.depends_on_x()) {
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
        (false, false) => canonical_cmp(a, b),
        (true, true) => canonical_cmp(b, a),
    }
}

fn base_and_exponent(f: Expr) -> (Expr, Expr) {
    match f {
        Expr::Pow(b, k) | Expr::Exp(b, k) => (*b, *k),
        other => (other, Expr::one()),
    }
}

pub(crate) fn mk_mul(factors: Vec<Expr>) -> Expr {
    let mut coeff = BigRational::one();
    let mut flat = Vec::new();
    let mut stack = factors;
    stack.reverse();
    while let Some(f) = stack.pop() {
        match f {
            Expr::Mul(inner) => stack.extend(inner.into_iter().rev()),
            Expr::Neg(inner) => {
                coeff = -coeff;
                stack.push(*inner);
            }
            Expr::Int(_) | Expr::Rat(_) => coeff *= f.as_rational().unwrap(),
            other => flat.push(other),
        }
    }
    if flat.iter().any(is_undefined) {
        return undefined();
    }
    if coeff.is_zero() {
        return Expr::zero();
    }

    let mut groups: Vec<(Expr, Vec<Expr>)> = Vec::new();
    for f in flat {
        let (b, k) = base_and_exponent(f);
        match groups.iter_mut().find(|(base, _)| *base == b) {
            Some(slot) => slot.1.push(k),
            None => groups.push((b, vec![k])),
        }
    }

    let mut rest = Vec::new();
    for (base, exps) in groups {
        let k = if exps.len() == 1 { exps.into_iter().next().unwrap() } else { mk_add(exps) };
        match mk_pow(base, k) {
            lit @ (Expr::Int(_) | Expr::Rat(_)) => coeff *= lit.as_rational().unwrap(),
            Expr::Mul(inner) => {
                for f in inner {
                    match f.as_rational() {
                        Some(r) => coeff *= r,
                        None => rest.push(f),
                    }
                }
            }
            Expr::Neg(inner) => {
                coeff = -coeff;
                rest.push(*inner);
            }
            other => rest.push(other),
        }
    }
    if rest.iter().any(is_undefined) {
        return undefined();
    }
    // sum factors keep a positive leading term; the sign lives in the coefficient
    for f in rest.iter_mut() {
        if let Expr::Add(ts) = f {
            if split_term(&ts[0]).0.is_negative() {
                *f = negate(std::mem::replace(f, Expr::zero()));
                coeff = -coeff;
            }
        }
    }
    if rest.len() == 1 && matches!(rest[0], Expr::Add(_)) && (-coeff.clone()).is_one() {
        return negate(rest.pop().unwrap());
    }
    build_product(coeff, rest)
}

fn build_product(coeff: BigRational, mut rest: Vec<Expr>) -> Expr {
    if coeff.is_zero() {
        return Expr::zero();
    }
    rest.sort_by(mul_order);
    if rest.is_empty() {
        return Expr::rational(coeff);
    }
    let body = if rest.len() == 1 { rest.pop().unwrap() } else { Expr::Mul(rest) };
    if coeff.is_one() {
        body
    } else if (-coeff.clone()).is_one() {
        Expr::neg(body)
    } else {
        match body {
            Expr::Mul(mut fs) => {
                fs.insert(0, Expr::rational(coeff));
                Expr::Mul(fs)
            }
            other => Expr::Mul(vec![Expr::rational(coeff), other]),
        }
    }
}

fn integer_literal(e: &Expr) -> Option<BigInt> {
    match e {
        Expr::Int(v) => Some(v.clone()),
        _ => None,
    }
}

fn fold_power(base: &BigRational, k: &BigInt) -> Option<BigRational> {
    let mag = k.abs().to_u32()?;
    if mag > MAX_FOLD_EXPONENT {
        return None;
    }
    if base.is_zero() && k.is_negative() {
        return None;
    }
    let p = num_traits::pow(base.clone(), mag as usize);
    Some(if k.is_negative() { p.recip() } else { p })
}

pub(crate) fn mk_pow(base: Expr, k: Expr) -> Expr {
    if k.is_zero() || base.is_one() {
        return Expr::one();
    }
    if k.is_one() {
        return base;
    }
    let k_int = integer_literal(&k);
    if let (Some(b), Some(ki)) = (base.as_rational(), k_int.as_ref()) {
        if let Some(v) = fold_power(&b, ki) {
            return Expr::rational(v);
        }
        // division by zero: one representative for every negative power
        if b.is_zero() && ki.is_negative() {
            return undefined();
        }
    }
    if is_undefined(&base) || is_undefined(&k) {
        return undefined();
    }
    if let Some(ki) = k_int {
        match base {
            Expr::Pow(b2, k2) | Expr::Exp(b2, k2) => {
                return mk_pow(*b2, mk_mul(vec![*k2, Expr::Int(ki)]));
            }
            Expr::Mul(fs) => {
                let kk = Expr::Int(ki);
                return mk_mul(fs.into_iter().map(|f| mk_pow(f, kk.clone())).collect());
            }
            Expr::Neg(inner) => {
                let odd = (&ki % BigInt::from(2u8)) != BigInt::zero();
                let p = mk_pow(*inner, Expr::Int(ki));
                return if odd { negate(p) } else { p };
            }
            Expr::Add(ts) if split_term(&ts[0]).0.is_negative() => {
                let odd = (&ki % BigInt::from(2u8)) != BigInt::zero();
                let p = Expr::pow(negate(Expr::Add(ts)), Expr::Int(ki));
                return if odd { negate(p) } else { p };
            }
            other => return Expr::pow(other, Expr::Int(ki)),
        }
    }
    Expr::pow(base, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn identity_element_removed() {
        assert_eq!(simplify(&Expr::Mul(vec![Expr::one(), Expr::Var])), Expr::Var);
    }

    #[test]
    fn cancellation() {
        assert_eq!(simplify(&Expr::Add(vec![Expr::Var, Expr::neg(Expr::Var)])), Expr::zero());
    }

    #[test]
    fn power_of_power() {
        let e = Expr::Pow(
            Box::new(Expr::Pow(Box::new(Expr::Var), Box::new(Expr::int(2)))),
            Box::new(Expr::int(3)),
        );
        assert_eq!(simplify(&e), Expr::Pow(Box::new(Expr::Var), Box::new(Expr::int(6))));
    }

    #[test]
    fn like_factors_combine() {
        assert_eq!(parse("x*x^(-1)").unwrap(), Expr::one());
        assert_eq!(parse("x^n/x").unwrap(), parse("x^(n - 1)").unwrap());
        assert_eq!(parse("2*x + 3*x").unwrap(), parse("5*x").unwrap());
        assert_eq!(parse("(2*x)^2").unwrap(), parse("4*x^2").unwrap());
        assert_eq!(parse("-(x + g)/x").unwrap(), parse("(x + g)/(x/(3 - 4))").unwrap());
        assert_eq!(parse("2*x/(g*(g - x))").unwrap(), parse("-2*x/(g*(x - g))").unwrap());
    }

    #[test]
    fn literals_fold() {
        assert_eq!(parse("2^10").unwrap(), Expr::int(1024));
        assert_eq!(parse("2^(-1)").unwrap().as_rational().unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse("6/4").unwrap().as_rational().unwrap(), BigRational::new(3.into(), 2.into()));
    }
}
