use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{inv_mod, mul_mod, pow_mod, FieldParams};
use crate::error::{Error, Result};

/// Modular problem families. `Id` and `Recip` are the lifts of `x` and `-1/x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Id,
    Recip,
    Dlp,
    Tlp,
    Rfp,
    Gxn,
    Poly,
    Ggx,
    Xngx,
    Xgx,
    Gxxx,
    GxShift,
    Spp,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::Id,
        Family::Recip,
        Family::Dlp,
        Family::Tlp,
        Family::Rfp,
        Family::Gxn,
        Family::Poly,
        Family::Ggx,
        Family::Xngx,
        Family::Xgx,
        Family::Gxxx,
        Family::GxShift,
        Family::Spp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Id => "ID",
            Family::Recip => "RECIP",
            Family::Dlp => "DLP",
            Family::Tlp => "TLP",
            Family::Rfp => "RFP",
            Family::Gxn => "GXN",
            Family::Poly => "POLY",
            Family::Ggx => "GGX",
            Family::Xngx => "XNGX",
            Family::Xgx => "XGX",
            Family::Gxxx => "GXXX",
            Family::GxShift => "GXSHIFT",
            Family::Spp => "SPP",
        }
    }

    /// Function text in the expression grammar.
    pub fn formula(self) -> &'static str {
        match self {
            Family::Id => "x",
            Family::Recip => "-1/x",
            Family::Dlp => "g^x",
            Family::Tlp => "x^x",
            Family::Rfp => "x^n",
            Family::Gxn => "g^(x^n)",
            Family::Poly => "x^n + x + 1",
            Family::Ggx => "g^(g1^x)",
            Family::Xngx => "x^n*g^x",
            Family::Xgx => "x*g^x",
            Family::Gxxx => "g^x*x^x",
            Family::GxShift => "(g*x)^x",
            Family::Spp => "prod C_i^b_i",
        }
    }

    pub fn uses_n(self) -> bool {
        matches!(self, Family::Rfp | Family::Gxn | Family::Poly | Family::Xngx)
    }

    pub fn uses_g(self) -> bool {
        matches!(
            self,
            Family::Dlp | Family::Gxn | Family::Ggx | Family::Xngx | Family::Xgx | Family::Gxxx | Family::GxShift
        )
    }

    /// Period in `x` of the family reduced modulo the prime `r`.
    pub(crate) fn period(self, r: u64, g1: u64) -> u64 {
        match self {
            Family::Id | Family::Recip | Family::Rfp | Family::Poly | Family::Spp => r,
            Family::Dlp | Family::Gxn => r - 1,
            Family::Ggx => {
                let m = r - 1;
                let base = g1 % m;
                (1..=m).find(|&k| pow_mod(base, k, m) == 1 % m).unwrap_or(m)
            }
            Family::Tlp | Family::Xngx | Family::Xgx | Family::Gxxx | Family::GxShift => r * (r - 1),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace(['-', '_'], "");
        let alias = match up.as_str() {
            "IDENTITY" => "ID",
            "GXSHIFT" | "SHIFT" => "GXSHIFT",
            other => other,
        };
        Family::ALL
            .into_iter()
            .find(|f| f.name() == alias)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family {s:?}")))
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Evaluates a non-SPP family at `x` modulo `m`. `phi_m` reduces exponents of `g`.
/// Exponents that are `x` itself are used as-is.
pub fn apply(family: Family, x: u64, m: u64, phi_m: u64, g: u64, g1: u64, n: u32) -> u64 {
    let xm = x % m;
    let xn = |modulus: u64| pow_mod(x, n as u64, modulus);
    match family {
        Family::Id => xm,
        Family::Recip => inv_mod(xm, m).map_or(0, |v| (m - v) % m),
        Family::Dlp => pow_mod(g, x, m),
        Family::Tlp => pow_mod(xm, x, m),
        Family::Rfp => xn(m),
        Family::Gxn => pow_mod(g, xn(phi_m), m),
        Family::Poly => (xn(m) as u128 + xm as u128 + 1) as u64 % m,
        Family::Ggx => pow_mod(g, pow_mod(g1, x, phi_m), m),
        Family::Xngx => mul_mod(xn(m), pow_mod(g, x, m), m),
        Family::Xgx => mul_mod(xm, pow_mod(g, x, m), m),
        Family::Gxxx => mul_mod(pow_mod(g, x, m), pow_mod(xm, x, m), m),
        Family::GxShift => pow_mod(mul_mod(g % m, xm, m), x, m),
        Family::Spp => panic!("SPP instances are evaluated on bitmasks"),
    }
}

/// Product of `c[i]^(b_i)` (or `c[i]^(b_i 2^i)` when weighted) over the set bits of `mask`.
pub(crate) fn subset_product(c: &[u64], mask: u64, p: u64, weighted: bool) -> u64 {
    let mut acc = 1 % p;
    for (i, &ci) in c.iter().enumerate() {
        if mask >> i & 1 == 1 {
            let f = if weighted { pow_mod(ci, 1 << i, p) } else { ci % p };
            acc = mul_mod(acc, f, p);
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub family: Family,
    pub field: FieldParams,
    pub n: Option<u32>,
    pub y: u64,
    pub spp_data: Option<Vec<u64>>,
}

impl ProblemInstance {
    pub fn new(family: Family, field: FieldParams, n: Option<u32>, y: u64) -> Result<Self> {
        if family == Family::Spp {
            return Err(Error::InvalidArgument("use ProblemInstance::spp for SPP".into()));
        }
        if !(1..field.p).contains(&y) {
            return Err(Error::InvalidArgument(format!("y={y} outside [1, {}]", field.p - 1)));
        }
        Self::unchecked(family, field, n, y)
    }

    /// Like `new` but allows `y = 0`, which per-prime pieces of a composite target can hit.
    pub(crate) fn unchecked(family: Family, field: FieldParams, n: Option<u32>, y: u64) -> Result<Self> {
        if family.uses_n() {
            match n {
                Some(v) if v >= 5 => {}
                _ => return Err(Error::InvalidArgument(format!("{family} needs n >= 5"))),
            }
        }
        if family == Family::Ggx && field.g1.is_none() {
            return Err(Error::InvalidArgument(format!("no inner generator g1 modulo {}", field.p - 1)));
        }
        Ok(ProblemInstance { family, field, n, y, spp_data: None })
    }

    /// Subset product instance; needs `lg p < n` with `n = c.len()`.
    pub fn spp(field: FieldParams, c: Vec<u64>, y: u64) -> Result<Self> {
        let n = c.len();
        if n == 0 || n >= 64 {
            return Err(Error::InvalidArgument(format!("SPP length {n} outside [1, 63]")));
        }
        if field.p >= 1u64 << n {
            return Err(Error::InvalidArgument(format!("SPP needs lg p < n, got p={} n={n}", field.p)));
        }
        if let Some(bad) = c.iter().find(|&&ci| ci == 0 || ci >= field.p) {
            return Err(Error::InvalidArgument(format!("SPP constant {bad} outside [1, p-1]")));
        }
        if !(1..field.p).contains(&y) {
            return Err(Error::InvalidArgument(format!("y={y} outside [1, {}]", field.p - 1)));
        }
        Ok(ProblemInstance { family: Family::Spp, field, n: Some(n as u32), y, spp_data: Some(c) })
    }

    pub fn with_y(&self, y: u64) -> Result<Self> {
        let mut out = self.clone();
        if !(1..self.field.p).contains(&y) {
            return Err(Error::InvalidArgument(format!("y={y} outside [1, {}]", self.field.p - 1)));
        }
        out.y = y;
        Ok(out)
    }

    /// Largest admissible `x`; the domain is `[1, max_x]`.
    pub fn max_x(&self) -> u64 {
        match (&self.family, &self.spp_data) {
            (Family::Spp, Some(c)) => (1u64 << c.len()) - 1,
            _ => self.field.p - 1,
        }
    }

    /// Evaluates without the domain check.
    pub(crate) fn value_at(&self, x: u64) -> u64 {
        let p = self.field.p;
        match (&self.family, &self.spp_data) {
            (Family::Spp, Some(c)) => subset_product(c, x, p, false),
            _ => apply(self.family, x, p, p - 1, self.field.g, self.field.g1.unwrap_or(1), self.n.unwrap_or(1)),
        }
    }

    pub fn eval(&self, x: u64) -> Result<u64> {
        if !(1..=self.max_x()).contains(&x) {
            return Err(Error::InvalidArgument(format!("x={x} outside [1, {}]", self.max_x())));
        }
        Ok(self.value_at(x))
    }
}

#[derive(Serialize)]
struct InstanceJson {
    family: Family,
    p: String,
    g: String,
    g1: Option<String>,
    n: Option<String>,
    y: String,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    c: Option<Vec<String>>,
}

impl Serialize for ProblemInstance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>();
        InstanceJson {
            family: self.family,
            p: self.field.p.to_string(),
            g: self.field.g.to_string(),
            g1: self.field.g1.map(|v| v.to_string()),
            n: self.n.map(|v| v.to_string()),
            y: self.y.to_string(),
            c: self.spp_data.as_deref().map(strs),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn inst(f: Family, p: u64, g: u64, n: Option<u32>) -> ProblemInstance {
        ProblemInstance::new(f, make_field(p, Some(g)).unwrap(), n, 1).unwrap()
    }

    #[test]
    fn hand_values() {
        assert_eq!(inst(Family::Tlp, 7, 3, None).eval(2).unwrap(), 4);
        assert_eq!(inst(Family::Dlp, 5, 2, None).eval(3).unwrap(), 3);
        assert_eq!(inst(Family::Xngx, 7, 3, Some(5)).eval(2).unwrap(), 288 % 7);
        assert_eq!(inst(Family::Recip, 7, 3, None).eval(2).unwrap(), 3);
        assert!(inst(Family::Tlp, 7, 3, None).eval(7).is_err());
        assert!(inst(Family::Tlp, 7, 3, None).eval(0).is_err());
    }

    #[test]
    fn tlp_uses_raw_exponent() {
        // 10 = 3 mod 7 but 10^10 != 3^3 mod 7
        assert_eq!(apply(Family::Tlp, 10, 7, 6, 3, 1, 5), pow_mod(3, 10, 7));
        assert_ne!(apply(Family::Tlp, 10, 7, 6, 3, 1, 5), 27 % 7);
    }

    #[test]
    fn shift_equals_gxxx() {
        let f = make_field(11, Some(2)).unwrap();
        for x in 1..11 {
            assert_eq!(apply(Family::GxShift, x, 11, 10, f.g, 3, 5), apply(Family::Gxxx, x, 11, 10, f.g, 3, 5));
        }
    }

    #[test]
    fn required_parameters() {
        let f = make_field(7, Some(3)).unwrap();
        assert!(ProblemInstance::new(Family::Rfp, f.clone(), None, 1).is_err());
        assert!(ProblemInstance::new(Family::Rfp, f.clone(), Some(4), 1).is_err());
        assert!(ProblemInstance::new(Family::Dlp, f.clone(), None, 7).is_err());
        assert!(ProblemInstance::spp(f.clone(), vec![2, 3], 1).is_err());
        assert!(ProblemInstance::spp(f, vec![2, 3, 5], 1).is_ok());
        let f13 = make_field(13, Some(2)).unwrap();
        assert!(ProblemInstance::spp(f13.clone(), vec![2, 3, 5], 1).is_err());
        assert!(ProblemInstance::spp(f13, vec![2, 3, 5, 7], 1).is_ok());
    }

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("identity".parse::<Family>().unwrap(), Family::Id);
    }

    #[test]
    fn instance_json() {
        let f = make_field(13, Some(2)).unwrap();
        let v = serde_json::to_value(ProblemInstance::spp(f, vec![2, 3, 5, 7], 10).unwrap()).unwrap();
        assert_eq!(v["family"], "SPP");
        assert_eq!(v["C"][3], "7");
        assert_eq!(v["y"], "10");
        assert_eq!(v["g1"], "5");
    }
}
