//! Univariate symbolic expressions over the variable `x` and the named
//! parameters `g`, `g1` and `n`.
//!
//! Trees are immutable values. Every public constructor that builds a tree
//! from text or from another tree returns it in canonical form (see
//! [`simplify`]), so structural equality is a meaningful comparison.

mod diff;
mod eval;
mod inverse;
mod parse;
mod render;
mod simplify;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use diff::differentiate;
pub use eval::{evaluate, Bindings};
pub use inverse::{inverse_rate, invert_increasing, InverseRate};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use render::{render, render_with_var};
pub use simplify::simplify;
pub(crate) use simplify::split_term;

/// Named symbolic parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    /// The base `g` (the level-0 group element `g0`).
    G,
    /// The inner base `g1` used by nested exponentials.
    G1,
    /// The integer degree `n`.
    N,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::G => "g",
            Param::G1 => "g1",
            Param::N => "n",
        }
    }
}

/// Which per-level base a granularity logarithm uses. Bases only scale the
/// logarithm by a constant, so numerically every level evaluates in base `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogBase {
    pub level: u8,
}

impl LogBase {
    pub const G0: LogBase = LogBase { level: 0 };
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    /// The variable `x`.
    Var,
    /// The implicit solution `x` of `y = f(x)`; only appears in inverse rates,
    /// where [`Expr::Var`] plays the role of `y`.
    Solution,
    Int(BigInt),
    /// Exact non-integral rational. Integral values are always [`Expr::Int`].
    Rat(BigRational),
    Param(Param),
    Neg(Box<Expr>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    /// Power whose exponent does not depend on `x`.
    Pow(Box<Expr>, Box<Expr>),
    /// Power whose exponent depends on `x` (`g^x`, `x^x`, `g^(x^n)`).
    Exp(Box<Expr>, Box<Expr>),
    /// Granularity logarithm.
    Log(LogBase, Box<Expr>),
    /// Natural logarithm.
    Ln(Box<Expr>),
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Int(BigInt::from(v))
    }

    pub fn rational(r: BigRational) -> Expr {
        if r.is_integer() {
            Expr::Int(r.to_integer())
        } else {
            Expr::Rat(r)
        }
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn g() -> Expr {
        Expr::Param(Param::G)
    }

    pub fn g1() -> Expr {
        Expr::Param(Param::G1)
    }

    pub fn n() -> Expr {
        Expr::Param(Param::N)
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    /// Builds `base^exponent`, choosing [`Expr::Exp`] when the exponent
    /// depends on `x`. Not simplified.
    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        if exponent.depends_on_x() {
            Expr::Exp(Box::new(base), Box::new(exponent))
        } else {
            Expr::Pow(Box::new(base), Box::new(exponent))
        }
    }

    pub fn log(e: Expr) -> Expr {
        Expr::Log(LogBase::G0, Box::new(e))
    }

    pub fn ln(e: Expr) -> Expr {
        Expr::Ln(Box::new(e))
    }

    pub fn recip(e: Expr) -> Expr {
        Expr::pow(e, Expr::int(-1))
    }

    /// True if the tree mentions `x` (either as the variable or as an
    /// implicit solution symbol).
    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::Var | Expr::Solution => true,
            Expr::Int(_) | Expr::Rat(_) | Expr::Param(_) => false,
            Expr::Neg(a) | Expr::Log(_, a) | Expr::Ln(a) => a.depends_on_x(),
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().any(Expr::depends_on_x),
            Expr::Pow(a, b) | Expr::Exp(a, b) => a.depends_on_x() || b.depends_on_x(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Int(v) if v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Int(v) if v.is_one())
    }

    /// The exact value of a numeric literal.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Expr::Int(v) => Some(BigRational::from_integer(v.clone())),
            Expr::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn is_negative_literal(&self) -> bool {
        match self {
            Expr::Int(v) => v.is_negative(),
            Expr::Rat(r) => r.is_negative(),
            _ => false,
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Expr::Int(_) | Expr::Rat(_) => 0,
            Expr::Param(_) => 1,
            Expr::Var => 2,
            Expr::Solution => 3,
            _ => 4,
        }
    }
}

/// Canonical node ordering: constants < parameters < variable < composite,
/// then numeric value for constants and rendered text for everything else.
pub fn canonical_cmp(a: &Expr, b: &Expr) -> Ordering {
    a.kind_rank().cmp(&b.kind_rank()).then_with(|| {
        match (a.as_rational(), b.as_rational()) {
            (Some(x), Some(y)) => x.cmp(&y),
            _ => match (a, b) {
                (Expr::Param(p), Expr::Param(q)) => p.cmp(q),
                _ => render(a).cmp(&render(b)),
            },
        }
    })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&render(self))
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("unsupported node at {path}: {detail}")]
    Unsupported { path: String, detail: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow evaluating {0}")]
    Overflow(String),
    #[error("not invertible in the supported fragment: {0}")]
    NotInvertible(String),
}
