//! Tendencies, limit classification of grain ratios, and the resulting
//! hardness verdicts.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::coeff::{Coeff, ConstValue, NExp};
use crate::error::{Error, Result};
use crate::expr::{render, simplify, Expr};
use crate::granularity::{divide_by_x_power, grain, GrainForm, Mode, Monomial, Order};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Atom {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "log x")]
    LogX,
    #[serde(rename = "log^2 x")]
    Log2X,
    #[serde(rename = "inv(x)")]
    InvX,
}

impl Atom {
    fn monomial(self) -> Monomial {
        match self {
            Atom::X => Monomial::x(1),
            Atom::LogX => Monomial::logx(1),
            Atom::Log2X => Monomial { pow_log2x: 1, ..Monomial::ONE },
            Atom::InvX => Monomial { pow_invx: NExp::int(1), ..Monomial::ONE },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Zero,
    Finite(ConstValue),
    Infinity,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Zero => f.write_str("0"),
            Bound::Finite(c) => write!(f, "{c}"),
            Bound::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Tendency {
    ToZero,
    ToConst { value: ConstValue },
    ToInfinity,
    Oscillates { lo: Bound, hi: Bound },
}

/// How a single atom behaves as `x` grows.
pub fn atom_tendency(atom: Atom, mode: Mode) -> Tendency {
    let wide = || Tendency::Oscillates { lo: Bound::Finite(ConstValue::one()), hi: Bound::Infinity };
    match (mode, atom) {
        (_, Atom::X) => Tendency::ToInfinity,
        (Mode::Continuous, Atom::InvX) => Tendency::ToZero,
        (Mode::Continuous, _) => Tendency::ToInfinity,
        // residues of log x live in [1, x]; modular inverses are integers >= 1
        (Mode::Discrete, _) => wide(),
    }
}

/// Tendency of the ratio `num / den` of two atoms.
pub fn relative_tendency(num: Atom, den: Atom, mode: Mode) -> Result<Tendency> {
    let one = |a: Atom| GrainForm::from_pairs(mode, 1, vec![(Coeff::one(), a.monomial())]);
    let v = classify_ratio(&one(num), &one(den), mode)?;
    Ok(match v.limit {
        Limit::Zero => Tendency::ToZero,
        Limit::Const(c) => Tendency::ToConst { value: c },
        Limit::Infinity => Tendency::ToInfinity,
        Limit::ConstInterval { lo, hi } => Tendency::Oscillates { lo: Bound::Finite(lo), hi: Bound::Finite(hi) },
        Limit::OscZeroConst(hi) => Tendency::Oscillates { lo: Bound::Zero, hi: Bound::Finite(hi) },
        Limit::OscConstInf(lo) => Tendency::Oscillates { lo: Bound::Finite(lo), hi: Bound::Infinity },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    Zero,
    Const(ConstValue),
    ConstInterval { lo: ConstValue, hi: ConstValue },
    Infinity,
    OscZeroConst(ConstValue),
    OscConstInf(ConstValue),
}

impl Limit {
    pub fn kind(&self) -> &'static str {
        match self {
            Limit::Zero => "Zero",
            Limit::Const(_) => "Const",
            Limit::ConstInterval { .. } => "ConstInterval",
            Limit::Infinity => "Infinity",
            Limit::OscZeroConst(_) => "OscZeroConst",
            Limit::OscConstInf(_) => "OscConstInf",
        }
    }
}

impl Serialize for Limit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = |c: &ConstValue| Some(c.to_string());
        let (lo, hi, c) = match self {
            Limit::Zero | Limit::Infinity => (None, None, None),
            Limit::Const(v) => (None, None, text(v)),
            Limit::ConstInterval { lo, hi } => (text(lo), text(hi), None),
            Limit::OscZeroConst(hi) => (Some("0".to_string()), text(hi), None),
            Limit::OscConstInf(lo) => (text(lo), Some("inf".to_string()), None),
        };
        let mut st = s.serialize_struct("Limit", 4)?;
        st.serialize_field("kind", self.kind())?;
        st.serialize_field("lo", &lo)?;
        st.serialize_field("hi", &hi)?;
        st.serialize_field("const", &c)?;
        st.end()
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Zero => f.write_str("0"),
            Limit::Infinity => f.write_str("inf"),
            Limit::Const(c) => write!(f, "{c}"),
            Limit::ConstInterval { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Limit::OscZeroConst(hi) => write!(f, "oscillates in [0, {hi}]"),
            Limit::OscConstInf(lo) => write!(f, "oscillates in [{lo}, inf]"),
        }
    }
}

/// One tendency assignment and the limit it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseLimit {
    pub assignment: BTreeMap<String, String>,
    pub limit: Limit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitVerdict {
    pub limit: Limit,
    pub case_trace: Vec<CaseLimit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LogCase {
    Small,
    AsX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Log2Case {
    Small,
    AsLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InvCase {
    Const,
    ToInfinity,
}

#[derive(Debug, Clone, Copy)]
struct Case {
    log: Option<LogCase>,
    log2: Option<Log2Case>,
    inv: Option<InvCase>,
}

impl Case {
    fn assignment(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        if let Some(c) = self.log {
            let v = match c {
                LogCase::Small => "o(x)",
                LogCase::AsX => "~x",
            };
            m.insert("log x".to_string(), v.to_string());
        }
        if let Some(c) = self.log2 {
            let v = match c {
                Log2Case::Small => "o(log x)",
                Log2Case::AsLog => "~log x",
            };
            m.insert("log^2 x".to_string(), v.to_string());
        }
        if let Some(c) = self.inv {
            let v = match c {
                InvCase::Const => "const",
                InvCase::ToInfinity => "inf",
            };
            m.insert("inv(x)".to_string(), v.to_string());
        }
        m
    }
}

/// A term after tendency substitution; `unknown` marks a factor that tends
/// to an unspecified positive constant.
#[derive(Debug, Clone)]
struct Sub {
    order: Order,
    coeff: Coeff,
    unknown: bool,
}

fn substitute(gf: &GrainForm, mode: Mode, case: &Case) -> Vec<Sub> {
    gf.terms
        .iter()
        .map(|t| {
            let m = t.mono;
            if mode == Mode::Continuous {
                return Sub { order: m.order(), coeff: t.coeff.clone(), unknown: false };
            }
            let (mut x, mut l, mut l2) = (m.pow_x, m.pow_logx, m.pow_log2x);
            let mut unknown = false;
            if case.log2 == Some(Log2Case::AsLog) {
                l += l2;
                l2 = 0;
            }
            if case.log == Some(LogCase::AsX) {
                x = x + NExp::int(l);
                l = 0;
            }
            match case.inv {
                Some(InvCase::ToInfinity) => x = x + m.pow_invx,
                _ => unknown = !m.pow_invx.is_zero(),
            }
            Sub { order: Order { x, l, l2 }, coeff: t.coeff.clone(), unknown }
        })
        .collect()
}

#[derive(Debug, Clone)]
enum Lead {
    Exact(Coeff),
    Unknown(Ordering),
}

impl Lead {
    fn sign(&self) -> Result<Ordering> {
        match self {
            Lead::Exact(c) => c.sign().ok_or_else(|| indeterminate(format!("sign of {c} changes for n >= 5"))),
            Lead::Unknown(s) => Ok(*s),
        }
    }
}

fn indeterminate(msg: String) -> Error {
    Error::IndeterminateForm(msg)
}

fn lead(terms: &[Sub]) -> Result<Option<(Order, Lead)>> {
    let mut rest: Vec<Sub> = terms.to_vec();
    while !rest.is_empty() {
        let mut top = rest[0].order;
        for t in &rest[1..] {
            match t.order.compare(&top) {
                Some(Ordering::Greater) => top = t.order,
                Some(_) => {}
                None => return Err(indeterminate(format!("x^({}) against x^({})", t.order.x, top.x))),
            }
        }
        let (group, others): (Vec<Sub>, Vec<Sub>) = rest.into_iter().partition(|t| t.order == top);
        rest = others;
        if group.iter().any(|t| t.unknown) {
            let signs = group
                .iter()
                .map(|t| t.coeff.sign().ok_or_else(|| indeterminate(format!("sign of {}", t.coeff))))
                .collect::<Result<Vec<_>>>()?;
            if signs.iter().all(|s| *s == signs[0]) {
                return Ok(Some((top, Lead::Unknown(signs[0]))));
            }
            return Err(indeterminate("leading terms of mixed sign with unknown magnitudes".into()));
        }
        let sum = group.iter().fold(Coeff::zero(), |acc, t| &acc + &t.coeff);
        if !sum.is_zero() {
            return Ok(Some((top, Lead::Exact(sum))));
        }
    }
    Ok(None)
}

fn case_limit(num: &[Sub], den: &[Sub]) -> Result<Limit> {
    let (n, d) = match (lead(num)?, lead(den)?) {
        (None, None) => return Ok(Limit::Const(ConstValue::one())),
        (None, Some(_)) => return Ok(Limit::Zero),
        (Some(_), None) => return Ok(Limit::Infinity),
        (Some(n), Some(d)) => (n, d),
    };
    let (sn, sd) = (n.1.sign()?, d.1.sign()?);
    if sn != sd {
        // a falling log-rate sits below every rising one
        return Ok(if sn == Ordering::Less { Limit::Zero } else { Limit::Infinity });
    }
    match n.0.compare(&d.0) {
        Some(Ordering::Greater) => Ok(Limit::Infinity),
        Some(Ordering::Less) => Ok(Limit::Zero),
        Some(Ordering::Equal) => Ok(Limit::Const(match (n.1, d.1) {
            (Lead::Exact(a), Lead::Exact(b)) => ConstValue::exact(a, b),
            _ => ConstValue::Positive,
        })),
        None => Err(indeterminate(format!("x^({}) against x^({})", n.0.x, d.0.x))),
    }
}

fn extreme(values: &[ConstValue], want: Ordering) -> Result<ConstValue> {
    let mut best = values[0].clone();
    for v in &values[1..] {
        match v.compare(&best) {
            Some(o) if o == want => best = v.clone(),
            Some(_) => {}
            None if v.same_as(&best) => {}
            None => return Err(indeterminate(format!("cannot order constants {v} and {best}"))),
        }
    }
    Ok(best)
}

fn aggregate(limits: &[Limit]) -> Result<Limit> {
    let zero = limits.contains(&Limit::Zero);
    let inf = limits.contains(&Limit::Infinity);
    let consts: Vec<ConstValue> = limits
        .iter()
        .filter_map(|l| match l {
            Limit::Const(c) => Some(c.clone()),
            _ => None,
        })
        .collect();
    match (zero, !consts.is_empty(), inf) {
        (true, false, false) => Ok(Limit::Zero),
        (false, false, true) => Ok(Limit::Infinity),
        (false, true, false) => {
            if consts.iter().all(|c| c.same_as(&consts[0])) {
                return Ok(Limit::Const(consts[0].clone()));
            }
            if consts.contains(&ConstValue::Positive) {
                return Err(indeterminate("cases reach unrelated constants".into()));
            }
            let lo = extreme(&consts, Ordering::Less)?;
            let hi = extreme(&consts, Ordering::Greater)?;
            Ok(Limit::ConstInterval { lo, hi })
        }
        (true, true, false) => Ok(Limit::OscZeroConst(extreme(&consts, Ordering::Greater)?)),
        (false, true, true) => Ok(Limit::OscConstInf(extreme(&consts, Ordering::Less)?)),
        _ => Err(indeterminate("cases range from 0 to infinity".into())),
    }
}

fn cases_for(num: &GrainForm, den: &GrainForm, mode: Mode) -> Vec<Case> {
    let none = Case { log: None, log2: None, inv: None };
    if mode == Mode::Continuous {
        return vec![none];
    }
    let all = num.terms.iter().chain(&den.terms);
    let (mut has_l, mut has_l2, mut has_inv) = (false, false, false);
    for t in all {
        has_l |= t.mono.pow_logx != 0;
        has_l2 |= t.mono.pow_log2x != 0;
        has_inv |= !t.mono.pow_invx.is_zero();
    }
    let logs: Vec<Option<LogCase>> =
        if has_l || has_l2 { vec![Some(LogCase::Small), Some(LogCase::AsX)] } else { vec![None] };
    let log2s: Vec<Option<Log2Case>> =
        if has_l2 { vec![Some(Log2Case::Small), Some(Log2Case::AsLog)] } else { vec![None] };
    let invs: Vec<Option<InvCase>> =
        if has_inv { vec![Some(InvCase::Const), Some(InvCase::ToInfinity)] } else { vec![None] };
    let mut out = Vec::new();
    for &log in &logs {
        for &log2 in &log2s {
            for &inv in &invs {
                out.push(Case { log, log2, inv });
            }
        }
    }
    out
}

/// Limit of `num / den` as `x` grows, by dominance in continuous mode and by
/// case analysis over oscillating atoms in discrete mode.
pub fn classify_ratio(num: &GrainForm, den: &GrainForm, mode: Mode) -> Result<LimitVerdict> {
    let mut trace = Vec::new();
    for case in cases_for(num, den, mode) {
        let limit = case_limit(&substitute(num, mode, &case), &substitute(den, mode, &case))?;
        trace.push(CaseLimit { assignment: case.assignment(), limit });
    }
    let limits: Vec<Limit> = trace.iter().map(|c| c.limit.clone()).collect();
    Ok(LimitVerdict { limit: aggregate(&limits)?, case_trace: trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Easier,
    Equivalent,
    Harder,
    EasierOrEquivalent,
    EquivalentOrNoSolution,
}

impl Verdict {
    pub fn from_limit(l: &Limit) -> Verdict {
        match l {
            Limit::Zero => Verdict::Easier,
            Limit::Const(_) | Limit::ConstInterval { .. } => Verdict::Equivalent,
            Limit::Infinity => Verdict::Harder,
            Limit::OscZeroConst(_) => Verdict::EasierOrEquivalent,
            Limit::OscConstInf(_) => Verdict::EquivalentOrNoSolution,
        }
    }

    pub fn is_oscillating(self) -> bool {
        matches!(self, Verdict::EasierOrEquivalent | Verdict::EquivalentOrNoSolution)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareOptions {
    pub mode: Mode,
    pub k: Option<u8>,
    pub use_derivative: bool,
}

impl CompareOptions {
    pub fn new(mode: Mode) -> Self {
        CompareOptions { mode, k: None, use_derivative: false }
    }

    pub fn with_k(self, k: u8) -> Self {
        CompareOptions { k: Some(k), ..self }
    }

    pub fn derivative(self) -> Self {
        CompareOptions { use_derivative: true, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonResult {
    pub verdict: Verdict,
    pub k_used: u8,
    pub mode: Mode,
    pub limit: LimitVerdict,
    pub grain_f: Option<GrainForm>,
    pub grain_h: Option<GrainForm>,
}

impl Serialize for ComparisonResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ComparisonResult", 7)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("k", &self.k_used)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("limit", &self.limit.limit)?;
        st.serialize_field("cases", &self.limit.case_trace)?;
        st.serialize_field("grain_f", &self.grain_f)?;
        st.serialize_field("grain_h", &self.grain_h)?;
        st.end()
    }
}

/// Order in which granularities are tried when none is given.
pub const AUTO_K: [u8; 3] = [1, 2, 0];

/// Compares the inversion hardness of `f` against `h`.
pub fn agr_compare(f: &Expr, h: &Expr, opts: CompareOptions) -> Result<ComparisonResult> {
    let (f, h) = (simplify(f), simplify(h));
    let ks: Vec<u8> = match opts.k {
        Some(k) => vec![k],
        None => AUTO_K.to_vec(),
    };
    let grains = |k: u8| -> Result<(GrainForm, GrainForm)> {
        Ok((grain(&f, k, opts.mode, opts.use_derivative)?, grain(&h, k, opts.mode, opts.use_derivative)?))
    };

    if f == h {
        let found = ks.iter().find_map(|&k| grains(k).ok().map(|g| (k, g)));
        let (k_used, gf, gh) = match found {
            Some((k, (a, b))) => (k, Some(a), Some(b)),
            None => (ks[0], None, None),
        };
        let one = Limit::Const(ConstValue::one());
        return Ok(ComparisonResult {
            verdict: Verdict::Equivalent,
            k_used,
            mode: opts.mode,
            limit: LimitVerdict {
                limit: one.clone(),
                case_trace: vec![CaseLimit { assignment: BTreeMap::new(), limit: one }],
            },
            grain_f: gf,
            grain_h: gh,
        });
    }

    let mut last = None;
    for &k in &ks {
        let (gf, gh) = match grains(k) {
            Ok(pair) => pair,
            Err(e @ Error::NotInFragment { .. }) => {
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let (num, den) = if k == 0 && opts.mode == Mode::Discrete {
            match gh.terms.first() {
                Some(t) => (divide_by_x_power(&gf, t.mono.pow_x), divide_by_x_power(&gh, t.mono.pow_x)),
                None => (gf.clone(), gh.clone()),
            }
        } else {
            (gf.clone(), gh.clone())
        };
        let limit = classify_ratio(&num, &den, opts.mode)?;
        return Ok(ComparisonResult {
            verdict: Verdict::from_limit(&limit.limit),
            k_used: k,
            mode: opts.mode,
            limit,
            grain_f: Some(gf),
            grain_h: Some(gh),
        });
    }
    Err(last.unwrap_or_else(|| Error::InvalidArgument("no granularity to try".into())))
}

/// Groups `fs` into equivalence classes listed by ascending difficulty.
pub fn rank_difficulty(fs: &[Expr], opts: CompareOptions) -> Result<Vec<Vec<Expr>>> {
    let n = fs.len();
    let mut rel = vec![vec![Verdict::Equivalent; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = agr_compare(&fs[i], &fs[j], opts)?.verdict;
            if v.is_oscillating() {
                return Err(Error::UnorderablePair { f: render(&fs[i]), h: render(&fs[j]), verdict: v.to_string() });
            }
            rel[i][j] = v;
            rel[j][i] = match v {
                Verdict::Easier => Verdict::Harder,
                Verdict::Harder => Verdict::Easier,
                other => other,
            };
        }
    }
    // equivalence classes by union-find over Equivalent pairs
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = root(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rel[i][j] == Verdict::Equivalent {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[b.max(a)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        match classes.iter_mut().find(|c| root_of(&parent, c[0]) == r) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    fn root_of(p: &[usize], mut i: usize) -> usize {
        while p[i] != i {
            i = p[i];
        }
        i
    }
    let above = |c: &Vec<usize>| -> usize {
        c.iter().map(|&i| (0..n).filter(|&j| rel[i][j] == Verdict::Harder).count()).sum()
    };
    classes.sort_by_key(|c| above(c));
    for (a, ca) in classes.iter().enumerate() {
        for (b, cb) in classes.iter().enumerate() {
            for &i in ca {
                for &j in cb {
                    let want = match a.cmp(&b) {
                        Ordering::Less => Verdict::Easier,
                        Ordering::Equal => Verdict::Equivalent,
                        Ordering::Greater => Verdict::Harder,
                    };
                    if i != j && rel[i][j] != want {
                        return Err(Error::Inconsistent(format!(
                            "{} vs {} is {} but the ranking needs {}",
                            render(&fs[i]),
                            render(&fs[j]),
                            rel[i][j],
                            want
                        )));
                    }
                }
            }
        }
    }
    Ok(classes.into_iter().map(|c| c.into_iter().map(|i| fs[i].clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn form(pairs: Vec<(Coeff, Monomial)>, mode: Mode) -> GrainForm {
        GrainForm::from_pairs(mode, 1, pairs)
    }

    fn xl() -> Monomial {
        Monomial { pow_logx: 1, ..Monomial::x(1) }
    }

    #[test]
    fn atom_table() {
        assert_eq!(atom_tendency(Atom::InvX, Mode::Continuous), Tendency::ToZero);
        assert_eq!(
            atom_tendency(Atom::LogX, Mode::Discrete),
            Tendency::Oscillates { lo: Bound::Finite(ConstValue::one()), hi: Bound::Infinity }
        );
    }

    #[test]
    fn relative_tendencies() {
        assert_eq!(relative_tendency(Atom::LogX, Atom::X, Mode::Continuous).unwrap(), Tendency::ToZero);
        assert_eq!(
            relative_tendency(Atom::LogX, Atom::X, Mode::Discrete).unwrap(),
            Tendency::Oscillates { lo: Bound::Zero, hi: Bound::Finite(ConstValue::one()) }
        );
        assert_eq!(
            relative_tendency(Atom::X, Atom::LogX, Mode::Discrete).unwrap(),
            Tendency::Oscillates { lo: Bound::Finite(ConstValue::one()), hi: Bound::Infinity }
        );
    }

    #[test]
    fn discrete_ratios() {
        let d = Mode::Discrete;
        let one = Coeff::one;
        let v = classify_ratio(&form(vec![(one(), xl())], d), &form(vec![(one(), Monomial::x(1))], d), d).unwrap();
        assert_eq!(v.limit, Limit::Infinity);
        assert_eq!(v.case_trace.len(), 2);

        let num = form(vec![(one(), Monomial::x(1)), (Coeff::n(), Monomial::logx(1))], d);
        let v = classify_ratio(&num, &form(vec![(one(), Monomial::x(1))], d), d).unwrap();
        assert_eq!(
            v.limit,
            Limit::ConstInterval { lo: ConstValue::one(), hi: ConstValue::coeff(&Coeff::n() + &one()) }
        );

        let v = classify_ratio(
            &form(vec![(Coeff::n(), Monomial::logx(1))], d),
            &form(vec![(one(), Monomial::x(1))], d),
            d,
        )
        .unwrap();
        assert_eq!(v.limit, Limit::OscZeroConst(ConstValue::coeff(Coeff::n())));
    }

    #[test]
    fn inverse_atom_cases() {
        let d = Mode::Discrete;
        let inv_n = Monomial { pow_invx: NExp { a: 1, b: 0 }, ..Monomial::ONE };
        let x_inv_n = Monomial { pow_x: NExp::int(1), ..inv_n };
        let num = GrainForm::from_pairs(
            d,
            0,
            vec![(Coeff::one(), Monomial::ONE), (Coeff::one(), inv_n), (Coeff::one(), x_inv_n)],
        );
        let den = GrainForm::from_pairs(d, 0, vec![(Coeff::one(), Monomial::ONE)]);
        let v = classify_ratio(&num, &den, d).unwrap();
        assert_eq!(v.limit, Limit::Infinity);
        assert_eq!(v.case_trace.len(), 2);
    }

    #[test]
    fn continuous_ratios() {
        let c = Mode::Continuous;
        let zero = GrainForm::from_pairs(c, 1, vec![]);
        let den = form(vec![(Coeff::int(-2), Monomial::logx(1))], c);
        assert_eq!(classify_ratio(&zero, &den, c).unwrap().limit, Limit::Zero);
    }

    #[test]
    fn identical_inputs() {
        let e = parse("x^x").unwrap();
        let r = agr_compare(&e, &e, CompareOptions::new(Mode::Discrete)).unwrap();
        assert_eq!(r.limit.limit, Limit::Const(ConstValue::one()));
        assert_eq!(r.verdict, Verdict::Equivalent);
    }

    #[test]
    fn json_shape() {
        let r = agr_compare(&parse("x^x").unwrap(), &parse("g^x").unwrap(), CompareOptions::new(Mode::Discrete))
            .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "Harder");
        assert_eq!(v["limit"]["kind"], "Infinity");
        assert_eq!(v["cases"].as_array().unwrap().len(), 2);
        assert_eq!(v["grain_h"]["terms"][0]["pow_x"], 1);
    }

    #[test]
    fn ranking_rejects_oscillation() {
        let fs = vec![parse("x^n").unwrap(), parse("g^x").unwrap()];
        assert!(matches!(
            rank_difficulty(&fs, CompareOptions::new(Mode::Discrete)),
            Err(Error::UnorderablePair { .. })
        ));
    }
}
