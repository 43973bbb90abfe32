//! The k-fold logarithmic granularity transform and its normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize, Serializer};

use crate::coeff::{Coeff, NExp};
use crate::error::{Error, Result};
use crate::expr::{differentiate, evaluate, render, simplify, Bindings, Expr, Param};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Continuous,
    Discrete,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Continuous => "continuous",
            Mode::Discrete => "discrete",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(Mode::Continuous),
            "discrete" => Ok(Mode::Discrete),
            other => Err(Error::InvalidArgument(format!("unknown mode {other}"))),
        }
    }
}

/// Symbolic tags for the base and modulus at each nesting level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldTags {
    pub bases: Vec<String>,
    pub moduli: Vec<String>,
}

impl FieldTags {
    pub fn up_to(k: u8) -> Self {
        let levels = 0..=k.min(2);
        FieldTags {
            bases: levels.clone().map(|i| format!("g{i}")).collect(),
            moduli: levels
                .map(|i| match i {
                    0 => "p".to_string(),
                    1 => "phi(p)".to_string(),
                    _ => format!("phi^{i}(p)"),
                })
                .collect(),
        }
    }
}

/// Exponent vector over the atoms `x`, `log x`, `log log x` and `inv(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Monomial {
    pub pow_x: NExp,
    pub pow_logx: i64,
    pub pow_log2x: i64,
    pub pow_invx: NExp,
}

impl Monomial {
    pub const ONE: Monomial =
        Monomial { pow_x: NExp::ZERO, pow_logx: 0, pow_log2x: 0, pow_invx: NExp::ZERO };

    pub fn x(e: i64) -> Self {
        Monomial { pow_x: NExp::int(e), ..Monomial::ONE }
    }

    pub fn logx(e: i64) -> Self {
        Monomial { pow_logx: e, ..Monomial::ONE }
    }

    /// Growth order under continuous semantics, where `inv(x) = 1/x`.
    pub fn order(&self) -> Order {
        Order { x: self.pow_x - self.pow_invx, l: self.pow_logx, l2: self.pow_log2x }
    }

    fn dominance_key(&self) -> (NExp, i64, i64, NExp) {
        (self.pow_x - self.pow_invx, self.pow_logx, self.pow_log2x, self.pow_x)
    }
}

/// Growth order `x^x * (log x)^l * (log log x)^l2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Order {
    pub x: NExp,
    pub l: i64,
    pub l2: i64,
}

impl Order {
    pub const ZERO: Order = Order { x: NExp::ZERO, l: 0, l2: 0 };

    /// Comparison valid for all `n >= 5`; `None` when the `x` exponents
    /// cross.
    pub fn compare(&self, other: &Order) -> Option<Ordering> {
        Some((self.x - other.x).sign()?.then(self.l.cmp(&other.l)).then(self.l2.cmp(&other.l2)))
    }
}

/// Leading group of `(order, coefficient)` terms: the highest order whose
/// coefficients do not cancel. `Ok(None)` means everything cancelled.
pub(crate) fn leading_group(terms: &[(Order, Coeff)]) -> std::result::Result<Option<(Order, Coeff)>, String> {
    let mut rest: Vec<(Order, Coeff)> = terms.to_vec();
    while !rest.is_empty() {
        let mut top = rest[0].0;
        for (o, _) in &rest[1..] {
            match o.compare(&top) {
                Some(Ordering::Greater) => top = *o,
                Some(_) => {}
                None => return Err(format!("orders x^({}) and x^({}) cross for small n", o.x, top.x)),
            }
        }
        let mut sum = Coeff::zero();
        rest.retain(|(o, c)| {
            if *o == top {
                sum = &sum + c;
                false
            } else {
                true
            }
        });
        if !sum.is_zero() {
            return Ok(Some((top, sum)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coeff: Coeff,
    #[serde(flatten)]
    pub mono: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrainForm {
    pub mode: Mode,
    pub k: u8,
    pub terms: Vec<Term>,
    #[serde(serialize_with = "render_list")]
    pub dropped: Vec<Expr>,
}

fn render_list<S: Serializer>(v: &[Expr], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(render))
}

impl GrainForm {
    pub fn new(mode: Mode, k: u8, terms: Vec<Term>, dropped: Vec<Expr>) -> Self {
        normalize_grain(&GrainForm { mode, k, terms, dropped })
    }

    pub fn from_pairs(mode: Mode, k: u8, pairs: Vec<(Coeff, Monomial)>) -> Self {
        let terms = pairs.into_iter().map(|(coeff, mono)| Term { coeff, mono }).collect();
        GrainForm::new(mode, k, terms, Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tags(&self) -> FieldTags {
        FieldTags::up_to(self.k)
    }

    pub fn same_terms(&self, other: &GrainForm) -> bool {
        self.terms == other.terms
    }

    pub fn to_expr(&self) -> Expr {
        let l = Expr::log(Expr::Var);
        let l2 = Expr::log(Expr::log(Expr::Var));
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let m = &t.mono;
                Expr::Mul(vec![
                    t.coeff.to_expr(),
                    Expr::pow(Expr::Var, (m.pow_x - m.pow_invx).to_expr()),
                    Expr::pow(l.clone(), Expr::int(m.pow_logx)),
                    Expr::pow(l2.clone(), Expr::int(m.pow_log2x)),
                ])
            })
            .collect();
        simplify(&Expr::Add(terms))
    }

    /// Numeric value under continuous semantics (`inv(x) = 1/x`, logs to
    /// base `g`), including the dropped constants.
    pub fn evaluate<T: Scalar>(&self, b: &Bindings<T>) -> Result<T> {
        let lg = |v: T| v.ln() / b.g.ln();
        let mut acc = T::zero();
        for t in &self.terms {
            let m = &t.mono;
            let c = T::from_f64(t.coeff.eval_f64(b.n as f64)).unwrap();
            let xe = T::from_i64((m.pow_x - m.pow_invx).eval(b.n as i64)).unwrap();
            let mut v = c * b.x.powf(xe);
            if m.pow_logx != 0 {
                v = v * lg(b.x).powi(m.pow_logx as i32);
            }
            if m.pow_log2x != 0 {
                v = v * lg(lg(b.x)).powi(m.pow_log2x as i32);
            }
            acc = acc + v;
        }
        for d in &self.dropped {
            acc = acc + evaluate(d, b, false)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for GrainForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let m = &t.mono;
                let mut atoms = Vec::new();
                let pw = |name: &str, e: String| if e == "1" { name.to_string() } else { format!("{name}^{e}") };
                let wrap = |e: NExp| if e.to_string().contains(' ') { format!("({e})") } else { e.to_string() };
                if !m.pow_x.is_zero() {
                    atoms.push(pw("x", wrap(m.pow_x)));
                }
                if m.pow_logx != 0 {
                    atoms.push(pw("log(x)", m.pow_logx.to_string()));
                }
                if m.pow_log2x != 0 {
                    atoms.push(pw("log(log(x))", m.pow_log2x.to_string()));
                }
                if !m.pow_invx.is_zero() {
                    atoms.push(pw("inv(x)", wrap(m.pow_invx)));
                }
                let c = t.coeff.to_string();
                let c = if c.contains(' ') { format!("({c})") } else { c };
                match (c.as_str(), atoms.is_empty()) {
                    (_, true) => c,
                    ("1", false) => atoms.join("*"),
                    ("-1", false) => format!("-{}", atoms.join("*")),
                    _ => format!("{c}*{}", atoms.join("*")),
                }
            })
            .collect();
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// Combines like monomials, removes zero terms and sorts by dominance.
pub fn normalize_grain(gf: &GrainForm) -> GrainForm {
    let mut merged: Vec<Term> = Vec::new();
    for t in &gf.terms {
        match merged.iter_mut().find(|m| m.mono == t.mono) {
            Some(slot) => slot.coeff = &slot.coeff + &t.coeff,
            None => merged.push(t.clone()),
        }
    }
    merged.retain(|t| !t.coeff.is_zero());
    merged.sort_by(|a, b| b.mono.dominance_key().cmp(&a.mono.dominance_key()));
    GrainForm { mode: gf.mode, k: gf.k, terms: merged, dropped: gf.dropped.clone() }
}

/// Main part and neglected additive part of a logarithm.
#[derive(Debug, Clone)]
struct Logged {
    main: Expr,
    dropped: Vec<Expr>,
}

impl Logged {
    fn main(main: Expr) -> Self {
        Logged { main, dropped: Vec::new() }
    }
}

fn outside(detail: impl Into<String>) -> Error {
    Error::NotInFragment { expr: String::new(), k: 0, detail: detail.into() }
}

fn known_positive(e: &Expr) -> bool {
    match e {
        Expr::Int(_) | Expr::Rat(_) => e.as_rational().unwrap().is_positive(),
        Expr::Param(_) => true,
        Expr::Mul(xs) | Expr::Add(xs) => xs.iter().all(known_positive),
        Expr::Pow(b, _) | Expr::Exp(b, _) => known_positive(b),
        // ln and log of something known to exceed 1
        Expr::Ln(u) | Expr::Log(_, u) => exceeds_one(u),
        _ => false,
    }
}

fn exceeds_one(e: &Expr) -> bool {
    match e {
        Expr::Int(_) | Expr::Rat(_) => e.as_rational().unwrap() > BigRational::one(),
        Expr::Param(_) => true,
        _ => false,
    }
}

fn scaled(c: &Expr, e: Expr) -> Expr {
    simplify(&Expr::Mul(vec![c.clone(), e]))
}

/// `log_g(e)` with bases erased, the dominant part separated from additive
/// constants and bounded remainders.
fn log_expand(e: &Expr) -> Result<Logged> {
    match e {
        Expr::Param(Param::G) | Expr::Param(Param::G1) => Ok(Logged::main(Expr::one())),
        _ if !e.depends_on_x() => {
            if e.is_one() {
                Ok(Logged::main(Expr::zero()))
            } else if known_positive(e) {
                Ok(Logged { main: Expr::zero(), dropped: vec![Expr::log(e.clone())] })
            } else {
                Err(outside(format!("log of {e}, not known to be positive")))
            }
        }
        Expr::Var => Ok(Logged::main(Expr::log(Expr::Var))),
        Expr::Solution => Err(outside("implicit solution symbol")),
        Expr::Neg(_) => Err(outside(format!("log of the negative quantity {e}"))),
        Expr::Mul(fs) => {
            let mut main = Vec::new();
            let mut dropped = Vec::new();
            for f in fs {
                let l = log_expand(f)?;
                main.push(l.main);
                dropped.extend(l.dropped);
            }
            Ok(Logged { main: simplify(&Expr::Add(main)), dropped })
        }
        Expr::Pow(b, c) | Expr::Exp(b, c) => {
            let lb = log_expand(b)?;
            if c.depends_on_x() && !lb.dropped.is_empty() {
                return Err(outside(format!("base {b} carries a constant factor raised to {c}")));
            }
            Ok(Logged {
                main: scaled(c, lb.main),
                dropped: lb.dropped.into_iter().map(|d| scaled(c, d)).collect(),
            })
        }
        Expr::Ln(u) => {
            // ln u = ln g * log_g u
            let mut l = log_of_log(u)?;
            l.dropped.insert(0, Expr::log(Expr::ln(Expr::g())));
            Ok(l)
        }
        Expr::Log(_, u) => log_of_log(u),
        Expr::Add(ts) => log_of_sum(ts),
        Expr::Int(_) | Expr::Rat(_) | Expr::Param(_) => unreachable!("x-free handled above"),
    }
}

fn log_of_log(u: &Expr) -> Result<Logged> {
    match u {
        Expr::Var => Ok(Logged::main(Expr::log(Expr::log(Expr::Var)))),
        Expr::Log(_, inner) if **inner == Expr::Var => Err(outside("third nested logarithm")),
        _ => {
            let lu = log_expand(u)?;
            log_level(lu)
        }
    }
}

/// One more logarithm of `main + sum(dropped)`, exact:
/// `log(M + D) = log M + log(1 + D/M)`.
fn log_level(prev: Logged) -> Result<Logged> {
    let mut next = log_expand(&prev.main)?;
    if !prev.dropped.is_empty() {
        let d = Expr::Add(prev.dropped);
        let ratio = simplify(&Expr::Mul(vec![d, Expr::recip(prev.main.clone())]));
        next.dropped.push(simplify(&Expr::log(Expr::Add(vec![Expr::one(), ratio]))));
    }
    Ok(next)
}

fn strip_sign(t: &Expr) -> (bool, Expr) {
    let (c, core) = crate::expr::split_term(t);
    let negative = c.is_negative();
    let c = c.abs();
    let abs = match core {
        None => Expr::rational(c),
        Some(core) if c.is_one() => core,
        Some(core) => simplify(&Expr::Mul(vec![Expr::rational(c), core])),
    };
    (negative, abs)
}

/// Continuous log-form of a positive term, used only to rank summands.
fn rank_form(t: &Expr) -> Result<Vec<(Order, Coeff)>> {
    let l = log_expand(t)?;
    let (terms, _) = to_terms(&l.main)?;
    Ok(terms.into_iter().map(|t| (t.mono.order(), t.coeff)).collect())
}

/// `Some(Greater)` if `a` dominates `b` (its log grows faster).
fn dominates(a: &[(Order, Coeff)], b: &[(Order, Coeff)]) -> Result<Ordering> {
    let mut diff: Vec<(Order, Coeff)> = a.to_vec();
    diff.extend(b.iter().map(|(o, c)| (*o, -c)));
    match leading_group(&diff).map_err(Error::IndeterminateForm)? {
        None => Ok(Ordering::Equal),
        Some((o, _)) if o == Order::ZERO => Ok(Ordering::Equal),
        Some((o, c)) => {
            if o.compare(&Order::ZERO) == Some(Ordering::Less) {
                return Ok(Ordering::Equal);
            }
            c.sign().ok_or_else(|| Error::IndeterminateForm(format!("sign of {c} for n >= 5")))
        }
    }
}

fn log_of_sum(ts: &[Expr]) -> Result<Logged> {
    let parts: Vec<(bool, Expr)> = ts.iter().map(strip_sign).collect();
    let forms = parts.iter().map(|(_, a)| rank_form(a)).collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for i in 1..parts.len() {
        if dominates(&forms[i], &forms[best])? == Ordering::Greater {
            best = i;
        }
    }
    let (negative, a) = &parts[best];
    if *negative {
        return Err(outside("dominant summand is negative"));
    }
    let mut out = log_expand(a)?;
    let rest: Vec<Expr> = ts.iter().enumerate().filter(|(i, _)| *i != best).map(|(_, t)| t.clone()).collect();
    let ratio = simplify(&Expr::Mul(vec![Expr::Add(rest), Expr::recip(a.clone())]));
    out.dropped.push(simplify(&Expr::log(Expr::Add(vec![Expr::one(), ratio]))));
    Ok(out)
}

fn nexp_of(e: &Expr) -> Option<NExp> {
    let c = coeff_of(e)?;
    if c.powers().any(|k| k != 0 && k != 1) {
        return None;
    }
    let int = |r: BigRational| if r.is_integer() { r.to_integer().to_i64() } else { None };
    Some(NExp { a: int(c.coefficient(1))?, b: int(c.coefficient(0))? })
}

/// Coefficient expressions: rational literals, `n` and integer powers of `n`.
fn coeff_of(e: &Expr) -> Option<Coeff> {
    match e {
        Expr::Int(_) | Expr::Rat(_) => Some(Coeff::constant(e.as_rational()?)),
        Expr::Param(Param::N) => Some(Coeff::n()),
        Expr::Pow(b, k) if **b == Expr::n() => {
            let k = k.as_rational()?;
            if !k.is_integer() {
                return None;
            }
            Some(Coeff::monomial(BigRational::one(), k.to_integer().to_i32()?))
        }
        Expr::Neg(a) => Some(-&coeff_of(a)?),
        Expr::Mul(fs) => fs.iter().try_fold(Coeff::one(), |acc, f| Some(&acc * &coeff_of(f)?)),
        Expr::Add(ts) => ts.iter().try_fold(Coeff::zero(), |acc, t| Some(&acc + &coeff_of(t)?)),
        _ => None,
    }
}

fn is_l(e: &Expr) -> bool {
    matches!(e, Expr::Log(_, u) if **u == Expr::Var)
}

fn is_l2(e: &Expr) -> bool {
    matches!(e, Expr::Log(_, u) if is_l(u))
}

fn small_power(k: &Expr) -> Option<i64> {
    let r = k.as_rational()?;
    if r.is_integer() && r.is_positive() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// Distributes products over sums.
fn expand(e: &Expr) -> Expr {
    match e {
        Expr::Add(ts) => simplify(&Expr::Add(ts.iter().map(expand).collect())),
        Expr::Neg(a) => simplify(&Expr::neg(expand(a))),
        Expr::Mul(fs) => {
            let mut acc: Vec<Expr> = vec![Expr::one()];
            for f in fs {
                let parts = match expand(f) {
                    Expr::Add(ts) => ts,
                    other => vec![other],
                };
                acc = acc
                    .iter()
                    .flat_map(|a| parts.iter().map(move |p| Expr::Mul(vec![a.clone(), p.clone()])))
                    .collect();
            }
            simplify(&Expr::Add(acc))
        }
        _ => e.clone(),
    }
}

/// Splits a simplified sum into fragment terms plus x-free additive leftovers.
fn to_terms(main: &Expr) -> Result<(Vec<Term>, Vec<Expr>)> {
    let summands: Vec<Expr> = match expand(&simplify(main)) {
        Expr::Add(ts) => ts,
        z if z.is_zero() => Vec::new(),
        other => vec![other],
    };
    let mut terms = Vec::new();
    let mut leftovers = Vec::new();
    for s in summands {
        if !s.depends_on_x() {
            match coeff_of(&s) {
                Some(c) => terms.push(Term { coeff: c, mono: Monomial::ONE }),
                None => leftovers.push(s),
            }
            continue;
        }
        let (sign, body) = match &s {
            Expr::Neg(a) => (-1, (**a).clone()),
            _ => (1, s.clone()),
        };
        let factors = match body {
            Expr::Mul(fs) => fs,
            other => vec![other],
        };
        let mut coeff = Coeff::int(sign);
        let mut mono = Monomial::ONE;
        for f in &factors {
            if let Some(c) = coeff_of(f) {
                coeff = &coeff * &c;
                continue;
            }
            match f {
                Expr::Var => mono.pow_x = mono.pow_x + NExp::int(1),
                Expr::Pow(b, k) if **b == Expr::Var => {
                    let e = nexp_of(k).ok_or_else(|| outside(format!("exponent {k} is not of the form a*n + b")))?;
                    if e.sign() == Some(Ordering::Less) {
                        mono.pow_invx = mono.pow_invx - e;
                    } else {
                        mono.pow_x = mono.pow_x + e;
                    }
                }
                _ if is_l(f) => mono.pow_logx += 1,
                _ if is_l2(f) => mono.pow_log2x += 1,
                Expr::Pow(b, k) if is_l(b) => {
                    mono.pow_logx += small_power(k).ok_or_else(|| outside(format!("power {k} of log x")))?
                }
                Expr::Pow(b, k) if is_l2(b) => {
                    mono.pow_log2x += small_power(k).ok_or_else(|| outside(format!("power {k} of log log x")))?
                }
                Expr::Exp(b, _) => return Err(outside(format!("exponential {f} with base {b}"))),
                _ if !f.depends_on_x() => return Err(outside(format!("constant {f} multiplies an x-dependent term"))),
                _ => return Err(outside(format!("factor {f}"))),
            }
        }
        terms.push(Term { coeff, mono });
    }
    Ok((terms, leftovers))
}

fn finish(logged: Logged, mode: Mode, k: u8) -> Result<GrainForm> {
    let (terms, leftovers) = to_terms(&logged.main)?;
    let mut dropped = leftovers;
    dropped.extend(logged.dropped);
    Ok(GrainForm::new(mode, k, terms, dropped))
}

fn tag(err: Error, e: &Expr, k: u8) -> Error {
    match err {
        Error::NotInFragment { detail, .. } => Error::NotInFragment { expr: render(e), k, detail },
        other => other,
    }
}

/// Applies `k` nested logarithms to `e` (or to its derivative) and
/// normalizes the result into the log-polynomial fragment.
pub fn grain(e: &Expr, k: u8, mode: Mode, use_derivative: bool) -> Result<GrainForm> {
    if k > 2 {
        return Err(Error::InvalidArgument(format!("granularity k={k} exceeds 2")));
    }
    let base = if use_derivative { differentiate(e)? } else { simplify(e) };
    let run = || -> Result<GrainForm> {
        let mut cur = Logged::main(base.clone());
        for _ in 0..k {
            cur = log_level(cur)?;
        }
        finish(cur, mode, k)
    };
    run().map_err(|err| tag(err, e, k))
}

/// One further logarithm of an existing grain.
pub fn grain_once(gf: &GrainForm) -> Result<GrainForm> {
    let k = gf.k + 1;
    if k > 2 {
        return Err(Error::InvalidArgument(format!("granularity k={k} exceeds 2")));
    }
    let prev = Logged { main: gf.to_expr(), dropped: gf.dropped.clone() };
    log_level(prev).and_then(|l| finish(l, gf.mode, k)).map_err(|err| tag(err, &gf.to_expr(), k))
}

/// Divides every term by `x^d` with the discrete-mode convention for
/// symbolic exponents: when the division does not cancel, the numerator
/// power stays and `d` moves into the `inv(x)` exponent.
pub(crate) fn divide_by_x_power(gf: &GrainForm, d: NExp) -> GrainForm {
    let terms = gf
        .terms
        .iter()
        .map(|t| {
            let mut m = t.mono;
            if m.pow_x == d {
                m.pow_x = NExp::ZERO;
            } else if let (Some(a), Some(b)) = (m.pow_x.as_int(), d.as_int()) {
                if a >= b {
                    m.pow_x = NExp::int(a - b);
                } else {
                    m.pow_x = NExp::ZERO;
                    m.pow_invx = m.pow_invx + NExp::int(b - a);
                }
            } else {
                m.pow_invx = m.pow_invx + d;
            }
            Term { coeff: t.coeff.clone(), mono: m }
        })
        .collect();
    GrainForm::new(gf.mode, gf.k, terms, gf.dropped.clone())
}
