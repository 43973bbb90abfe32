use num_rational::BigRational;
use num_traits::{One, Signed};

use super::Expr;

const ADD: u8 = 1;
const MUL: u8 = 2;
const POW: u8 = 4;
const ATOM: u8 = 5;

struct Renderer<'a> {
    var: &'a str,
}

/// Deterministic canonical text, `*` written explicitly, division sugar for
/// negative integer powers.
pub fn render(e: &Expr) -> String {
    Renderer { var: "x" }.go(e, 0)
}

/// Renders with [`Expr::Var`] spelled `var`; [`Expr::Solution`] is always `x`.
pub fn render_with_var(e: &Expr, var: &str) -> String {
    Renderer { var }.go(e, 0)
}

fn paren(s: String, own: u8, ctx: u8) -> String {
    if own < ctx {
        format!("({s})")
    } else {
        s
    }
}

fn rat_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Splits a term into (is_negative, absolute value).
fn split_sign(e: &Expr) -> (bool, Expr) {
    match e {
        Expr::Neg(inner) => (true, (**inner).clone()),
        Expr::Int(v) if v.is_negative() => (true, Expr::Int(-v)),
        Expr::Rat(r) if r.is_negative() => (true, Expr::Rat(-r)),
        Expr::Mul(fs) if fs.first().is_some_and(Expr::is_negative_literal) => {
            let c = -fs[0].as_rational().unwrap();
            let mut rest: Vec<Expr> = fs[1..].to_vec();
            if !c.is_one() {
                rest.insert(0, Expr::rational(c));
            }
            let abs = if rest.len() == 1 { rest.pop().unwrap() } else { Expr::Mul(rest) };
            (true, abs)
        }
        _ => (false, e.clone()),
    }
}

impl Renderer<'_> {
    fn go(&self, e: &Expr, ctx: u8) -> String {
        match e {
            Expr::Var => self.var.to_string(),
            Expr::Solution => "x".to_string(),
            Expr::Param(p) => p.name().to_string(),
            Expr::Int(v) => {
                if v.is_negative() {
                    paren(v.to_string(), MUL, ctx)
                } else {
                    v.to_string()
                }
            }
            Expr::Rat(r) => paren(rat_text(r), MUL, ctx),
            Expr::Ln(a) => format!("ln({})", self.go(a, 0)),
            Expr::Log(base, a) => {
                let name = match base.level {
                    0 => "log",
                    1 => "log_g1",
                    _ => "log_g2",
                };
                format!("{name}({})", self.go(a, 0))
            }
            Expr::Neg(a) => {
                let inner = match **a {
                    Expr::Pow(_, ref k) | Expr::Exp(_, ref k) if !k.is_negative_literal() => {
                        format!("({})", self.go(a, 0))
                    }
                    _ => self.go(a, MUL),
                };
                paren(format!("-{inner}"), MUL, ctx)
            }
            Expr::Add(terms) => {
                let mut out = String::new();
                for (i, t) in terms.iter().enumerate() {
                    if i == 0 {
                        out.push_str(&self.go(t, ADD));
                    } else {
                        let (negative, abs) = split_sign(t);
                        out.push_str(if negative { " - " } else { " + " });
                        out.push_str(&self.go(&abs, MUL));
                    }
                }
                paren(out, ADD, ctx)
            }
            Expr::Mul(fs) => paren(self.product(fs), MUL, ctx),
            Expr::Pow(_, k) if k.is_negative_literal() => {
                paren(self.product(std::slice::from_ref(e)), MUL, ctx)
            }
            Expr::Pow(b, k) | Expr::Exp(b, k) => {
                let base = self.go(b, ATOM);
                let exp = self.go(k, ATOM);
                paren(format!("{base}^{exp}"), POW, ctx)
            }
        }
    }

    fn product(&self, fs: &[Expr]) -> String {
        let mut negative = false;
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        for f in fs {
            match f {
                Expr::Int(_) | Expr::Rat(_) => {
                    let mut r = f.as_rational().unwrap();
                    if r.is_negative() {
                        negative = !negative;
                        r = -r;
                    }
                    if !r.numer().is_one() {
                        num.push(r.numer().to_string());
                    }
                    if !r.denom().is_one() {
                        den.push(r.denom().to_string());
                    }
                }
                Expr::Pow(b, k) if k.is_negative_literal() => {
                    let pos = -k.as_rational().unwrap();
                    if pos.is_one() {
                        den.push(self.go(b, POW));
                    } else {
                        let p = Expr::Pow(b.clone(), Box::new(Expr::rational(pos)));
                        den.push(self.go(&p, POW));
                    }
                }
                other => num.push(self.go(other, MUL + 1)),
            }
        }
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if num.is_empty() {
            out.push('1');
        } else {
            out.push_str(&num.join("*"));
        }
        match den.len() {
            0 => {}
            1 => {
                out.push('/');
                out.push_str(&den[0]);
            }
            _ => {
                out.push_str("/(");
                out.push_str(&den.join("*"));
                out.push(')');
            }
        }
        out
    }
}
