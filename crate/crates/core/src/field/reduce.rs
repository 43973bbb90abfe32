use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::Serialize;

use super::family::apply;
use super::solve::Bsgs;
use super::spp::{bits, SppInstance};
use super::{inv_mod, is_prime, pow_mod, solve_exhaustive, Family, FieldParams, ProblemInstance, DEFAULT_WORK_BOUND};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub description: String,
    pub values: BTreeMap<String, String>,
}

/// Oracle calls and intermediate values of one reduction run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    fn push(&mut self, description: &str, values: &[(&str, String)]) {
        self.steps.push(TraceStep {
            description: description.to_string(),
            values: values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
    }

    /// Values recorded by the final step.
    pub fn result(&self) -> Option<&BTreeMap<String, String>> {
        self.steps.last().map(|s| &s.values)
    }
}

fn list(xs: &BTreeSet<u64>) -> String {
    let parts: Vec<_> = xs.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn check_y(y: u64, p: u64) -> Result<()> {
    if (1..p).contains(&y) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("y={y} outside [1, {}]", p - 1)))
    }
}

/// Exhaustive TLP oracle over an explicit domain, for use with `reduce_gx_shift`.
pub fn exhaustive_tlp_oracle(p: u64) -> impl Fn(u64, &[u64]) -> Result<BTreeSet<u64>> {
    move |z, domain| {
        let inst = ProblemInstance::unchecked(Family::Tlp, FieldParams::raw(p, 1, None), None, z)?;
        solve_exhaustive(&inst, Some(domain))
    }
}

/// Solves `y = (g x)^x mod p` with one call to a TLP oracle.
pub fn reduce_gx_shift(
    y: u64,
    field: &FieldParams,
    tlp_oracle: impl Fn(u64, &[u64]) -> Result<BTreeSet<u64>>,
) -> Result<(BTreeSet<u64>, ReductionTrace)> {
    reduce_gx_shift_base(y, field.p, field.g, tlp_oracle)
}

/// `reduce_gx_shift` for an arbitrary base; `base = 1` is plain TLP.
pub fn reduce_gx_shift_base(
    y: u64,
    p: u64,
    base: u64,
    tlp_oracle: impl Fn(u64, &[u64]) -> Result<BTreeSet<u64>>,
) -> Result<(BTreeSet<u64>, ReductionTrace)> {
    check_y(y, p)?;
    if base == 0 || base.gcd(&(p - 1)) != 1 || base.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("base {base} must be coprime to p-1={}", p - 1)));
    }
    let mut trace = ReductionTrace::default();
    let z = pow_mod(y, base, p);
    trace.push("raise both sides to the base: z = y^g", &[("y", y.to_string()), ("g", base.to_string()), ("z", z.to_string())]);
    let q2: Vec<u64> = (1..p).map(|a| a * base).collect();
    let ws = tlp_oracle(z, &q2)?;
    trace.push("TLP oracle on z over Q2 = {g, 2g, ..., (p-1)g}", &[("z", z.to_string()), ("w", list(&ws))]);
    let inv_p = inv_mod(base, p).expect("base is a unit mod p");
    let inv_q = inv_mod(base, p - 1).expect("base is a unit mod p-1");
    let mut out = BTreeSet::new();
    for &w in &ws {
        for (label, x) in [("x = w/g mod p", w % p * inv_p % p), ("x = w/g mod p-1", (w % (p - 1)) * inv_q % (p - 1))] {
            let x = if x == 0 { p - 1 } else { x };
            let ok = apply(Family::GxShift, x, p, p - 1, base, 1, 1) == y;
            trace.push(label, &[("w", w.to_string()), ("x", x.to_string()), ("verified", ok.to_string())]);
            if ok {
                out.insert(x);
            }
        }
    }
    trace.push("result", &[("x", list(&out))]);
    Ok((out, trace))
}

/// Splitting search for `y = g^x x^x`: each `y1` is solved as a DLP and kept when `y / y1 = x^x`.
pub fn solve_gxxx(field: &FieldParams, y: u64) -> Result<(BTreeSet<u64>, ReductionTrace)> {
    let p = field.p;
    check_y(y, p)?;
    if p - 1 > DEFAULT_WORK_BOUND {
        return Err(Error::WorkBound { needed: (p - 1) as u128, bound: DEFAULT_WORK_BOUND });
    }
    let (bsgs, _) = Bsgs::new(field);
    let mut trace = ReductionTrace::default();
    let mut out = BTreeSet::new();
    for y1 in 1..p {
        let y2 = y * inv_mod(y1, p).expect("nonzero mod prime") % p;
        let (x, _) = bsgs.solve(y1);
        let ok = pow_mod(x, x, p) == y2;
        trace.push(
            "probe y = y1*y2 with y1 = g^x",
            &[("y1", y1.to_string()), ("y2", y2.to_string()), ("x", x.to_string()), ("accepted", ok.to_string())],
        );
        if ok {
            out.insert(x);
        }
    }
    trace.push("result", &[("x", list(&out))]);
    Ok((out, trace))
}

/// Solves `y = g^(x^n)` from one DLP oracle call and an exhaustive root search mod `p-1`.
pub fn reduce_gxn_to_dlp(
    y: u64,
    field: &FieldParams,
    n: u32,
    dlp_oracle: impl Fn(u64) -> Result<u64>,
) -> Result<(BTreeSet<u64>, ReductionTrace)> {
    let p = field.p;
    check_y(y, p)?;
    let q = p - 1;
    let w = dlp_oracle(y)?;
    let mut trace = ReductionTrace::default();
    trace.push("DLP oracle: w = log_g y", &[("y", y.to_string()), ("w", w.to_string())]);
    let roots: BTreeSet<u64> = (1..=q).filter(|&x| pow_mod(x, n as u64, q) == w % q).collect();
    trace.push("roots of x^n = w mod p-1", &[("n", n.to_string()), ("roots", list(&roots))]);
    let out: BTreeSet<u64> = roots.into_iter().filter(|&x| apply(Family::Gxn, x, p, q, field.g, 1, n) == y).collect();
    trace.push("result", &[("x", list(&out))]);
    Ok((out, trace))
}

/// Recovers a discrete log from a weighted SPP oracle with `C_1 = ... = C_n = g`.
pub fn reduce_dlp_to_spp(
    y: u64,
    field: &FieldParams,
    n: u32,
    spp_oracle: impl Fn(&SppInstance) -> Result<BTreeSet<u64>>,
) -> Result<(u64, ReductionTrace)> {
    let p = field.p;
    check_y(y, p)?;
    let need = 64 - (p - 1).leading_zeros();
    if n < need || n >= 64 {
        return Err(Error::InvalidArgument(format!("n={n} below bit length {need} of p-1")));
    }
    let inst = SppInstance { p, c: vec![field.g; n as usize], target: y, weighted: true };
    let masks = spp_oracle(&inst)?;
    let mut trace = ReductionTrace::default();
    let shown: Vec<String> = masks.iter().map(|&m| bits(m, n as usize)).collect();
    trace.push("SPP oracle with C_i = g, weights 2^(i-1)", &[("G", y.to_string()), ("b", shown.join(","))]);
    let mask = *masks.first().ok_or_else(|| Error::NoSolution(format!("SPP oracle found no string for y={y}")))?;
    let x = match mask % (p - 1) {
        0 => p - 1,
        r => r,
    };
    if pow_mod(field.g, x, p) != y {
        return Err(Error::NoSolution(format!("oracle string {} does not verify", bits(mask, n as usize))));
    }
    trace.push("result", &[("b", bits(mask, n as usize)), ("x", x.to_string())]);
    Ok((x, trace))
}

/// Composite modulus `m = p q` for the CRT split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeParams {
    pub p: u64,
    pub q: u64,
    pub g: u64,
    pub g1: Option<u64>,
    pub n: Option<u32>,
    /// Search `x` in `[1, range]`; defaults to `m - 1`.
    pub range: Option<u64>,
}

impl CompositeParams {
    pub fn new(p: u64, q: u64, g: u64) -> Self {
        CompositeParams { p, q, g, g1: None, n: None, range: None }
    }

    pub fn modulus(&self) -> u64 {
        self.p * self.q
    }

    pub fn range(&self) -> u64 {
        self.range.unwrap_or(self.modulus() - 1)
    }

    fn validate(&self, family: Family) -> Result<()> {
        for r in [self.p, self.q] {
            if !(3..=1 << 31).contains(&r) || !is_prime(r) {
                return Err(Error::InvalidArgument(format!("{r} is not an odd prime below 2^31")));
            }
        }
        if self.p == self.q {
            return Err(Error::InvalidArgument("p and q must differ".into()));
        }
        let (m, phi) = (self.modulus(), (self.p - 1) * (self.q - 1));
        if matches!(family, Family::Spp | Family::Recip) {
            return Err(Error::InvalidArgument(format!("{family} is not defined on all residues mod {m}")));
        }
        if family.uses_g() && self.g.gcd(&m) != 1 {
            return Err(Error::InvalidArgument(format!("g={} shares a factor with {m}", self.g)));
        }
        if family == Family::Ggx && !self.g1.is_some_and(|v| v.gcd(&phi) == 1) {
            return Err(Error::InvalidArgument(format!("GGX needs g1 coprime to {phi}")));
        }
        if family.uses_n() && !self.n.is_some_and(|v| v >= 5) {
            return Err(Error::InvalidArgument(format!("{family} needs n >= 5")));
        }
        Ok(())
    }

    pub fn eval(&self, family: Family, x: u64) -> u64 {
        let phi = (self.p - 1) * (self.q - 1);
        apply(family, x, self.modulus(), phi, self.g, self.g1.unwrap_or(1), self.n.unwrap_or(1))
    }

    /// Direct search mod `m` over `[1, range]`.
    pub fn solve_exhaustive(&self, family: Family, y: u64) -> Result<BTreeSet<u64>> {
        self.validate(family)?;
        if self.range() > DEFAULT_WORK_BOUND {
            return Err(Error::WorkBound { needed: self.range() as u128, bound: DEFAULT_WORK_BOUND });
        }
        Ok((1..=self.range()).filter(|&x| self.eval(family, x) == y).collect())
    }
}

/// Exhaustive per-prime oracle for `reduce_composite_crt`.
pub fn exhaustive_prime_oracle(inst: &ProblemInstance, domain: &[u64]) -> Result<BTreeSet<u64>> {
    solve_exhaustive(inst, Some(domain))
}

/// Solves `y = f(x) mod p q` prime by prime and recombines residues with the CRT.
/// Each prime `r` is searched over one period of `f mod r`, so mixed families use `r (r-1)`.
pub fn reduce_composite_crt(
    y: u64,
    family: Family,
    params: &CompositeParams,
    per_prime_oracle: impl Fn(&ProblemInstance, &[u64]) -> Result<BTreeSet<u64>>,
) -> Result<(BTreeSet<u64>, ReductionTrace)> {
    params.validate(family)?;
    let m = params.modulus();
    if y >= m {
        return Err(Error::InvalidArgument(format!("y={y} outside [0, {}]", m - 1)));
    }
    let mut trace = ReductionTrace::default();
    let mut pieces = Vec::new();
    for r in [params.p, params.q] {
        let g1 = params.g1.map(|v| v % (r - 1));
        let field = FieldParams::raw(r, params.g, g1);
        let inst = ProblemInstance::unchecked(family, field, params.n, y % r)?;
        let period = family.period(r, g1.unwrap_or(1));
        if period > DEFAULT_WORK_BOUND {
            return Err(Error::WorkBound { needed: period as u128, bound: DEFAULT_WORK_BOUND });
        }
        let domain: Vec<u64> = (1..=period).collect();
        let sols = per_prime_oracle(&inst, &domain)?;
        trace.push(
            "per-prime oracle",
            &[("r", r.to_string()), ("y mod r", (y % r).to_string()), ("period", period.to_string()), ("t", list(&sols))],
        );
        pieces.push((period, sols));
    }
    let range = params.range();
    let mut out = BTreeSet::new();
    for &a in &pieces[0].1 {
        for &b in &pieces[1].1 {
            let Some((x0, l)) = super::crt_merge((a, pieces[0].0), (b, pieces[1].0)) else {
                continue;
            };
            let mut x = if x0 == 0 { l } else { x0 };
            while x <= range {
                if params.eval(family, x) == y {
                    out.insert(x);
                }
                x += l;
            }
        }
    }
    trace.push("combine residue pairs and verify mod m", &[("m", m.to_string()), ("x", list(&out))]);
    Ok((out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, solve_dlp_bsgs, spp_solve_exhaustive};

    fn exhaustive(f: Family, field: &FieldParams, n: Option<u32>, y: u64) -> BTreeSet<u64> {
        solve_exhaustive(&ProblemInstance::new(f, field.clone(), n, y).unwrap(), None).unwrap()
    }

    #[test]
    fn gx_shift_example() {
        let f = make_field(7, Some(5)).unwrap();
        let (xs, trace) = reduce_gx_shift(2, &f, exhaustive_tlp_oracle(7)).unwrap();
        assert!(xs.contains(&2));
        assert_eq!(trace.steps[0].values["z"], "4");
        assert!(trace.steps[1].values["w"].contains("10"));
        for y in 1..7 {
            assert_eq!(reduce_gx_shift(y, &f, exhaustive_tlp_oracle(7)).unwrap().0, exhaustive(Family::GxShift, &f, None, y));
        }
    }

    #[test]
    fn gx_shift_base_one_is_tlp() {
        let f = make_field(7, Some(3)).unwrap();
        for y in 1..7 {
            let (xs, _) = reduce_gx_shift_base(y, 7, 1, exhaustive_tlp_oracle(7)).unwrap();
            assert_eq!(xs, exhaustive(Family::Tlp, &f, None, y));
        }
    }

    #[test]
    fn gx_shift_rejects_shared_factor() {
        let f = make_field(7, Some(3)).unwrap();
        assert!(reduce_gx_shift(2, &f, exhaustive_tlp_oracle(7)).is_err());
    }

    #[test]
    fn gxxx_example() {
        let f = make_field(7, Some(3)).unwrap();
        assert_eq!(36 % 7, 1);
        let (xs, trace) = solve_gxxx(&f, 1).unwrap();
        assert!(xs.contains(&2));
        assert_eq!(trace.steps.len(), 7);
        let f11 = make_field(11, Some(2)).unwrap();
        let mut empty = 0;
        for y in 1..11 {
            let want = exhaustive(Family::Gxxx, &f11, None, y);
            empty += want.is_empty() as usize;
            assert_eq!(solve_gxxx(&f11, y).unwrap().0, want);
        }
        assert!(empty > 0);
    }

    #[test]
    fn gxn_example() {
        let f = make_field(7, Some(3)).unwrap();
        let oracle = |y| solve_dlp_bsgs(&f, y).map(|d| d.x);
        let (xs, _) = reduce_gxn_to_dlp(2, &f, 5, oracle).unwrap();
        assert!(xs.contains(&2));
        for y in 1..7 {
            assert_eq!(reduce_gxn_to_dlp(y, &f, 5, oracle).unwrap().0, exhaustive(Family::Gxn, &f, Some(5), y));
        }
        let (xs, _) = reduce_gxn_to_dlp(3, &f, 9, |_| Ok(1)).unwrap();
        assert!(xs.contains(&1));
    }

    #[test]
    fn dlp_spp_example() {
        let f = make_field(13, Some(2)).unwrap();
        let (x, trace) = reduce_dlp_to_spp(6, &f, 4, spp_solve_exhaustive).unwrap();
        assert_eq!(x, 5);
        assert_eq!(trace.result().unwrap()["b"], "1010");
        let (x, trace) = reduce_dlp_to_spp(2, &f, 4, spp_solve_exhaustive).unwrap();
        assert_eq!((x, trace.result().unwrap()["b"].as_str()), (1, "1000"));
        for y in 1..13 {
            assert_eq!(reduce_dlp_to_spp(y, &f, 4, spp_solve_exhaustive).unwrap().0, solve_dlp_bsgs(&f, y).unwrap().x);
        }
        assert!(reduce_dlp_to_spp(6, &f, 3, spp_solve_exhaustive).is_err());
        assert!(matches!(reduce_dlp_to_spp(6, &f, 4, |_| Ok(BTreeSet::new())), Err(Error::NoSolution(_))));
    }

    #[test]
    fn crt_dlp_mod_15() {
        let params = CompositeParams { range: Some(8), ..CompositeParams::new(3, 5, 2) };
        let (xs, _) = reduce_composite_crt(8, Family::Dlp, &params, exhaustive_prime_oracle).unwrap();
        assert_eq!(xs, BTreeSet::from([3, 7]));
        assert_eq!(xs, params.solve_exhaustive(Family::Dlp, 8).unwrap());
    }

    #[test]
    fn crt_poly_mod_15() {
        let params = CompositeParams { n: Some(5), ..CompositeParams::new(3, 5, 2) };
        for y in 0..15 {
            let (xs, _) = reduce_composite_crt(y, Family::Poly, &params, exhaustive_prime_oracle).unwrap();
            assert_eq!(xs, params.solve_exhaustive(Family::Poly, y).unwrap(), "y={y}");
        }
        assert!(reduce_composite_crt(1, Family::Dlp, &CompositeParams::new(5, 5, 2), exhaustive_prime_oracle).is_err());
    }
}
