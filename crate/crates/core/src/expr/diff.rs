use super::simplify::is_undefined;
use super::{simplify, Expr, ExprError};

/// Exact symbolic derivative with respect to `x`, simplified.
pub fn differentiate(e: &Expr) -> Result<Expr, ExprError> {
    let raw = d(e, "root")?;
    Ok(simplify(&raw))
}

fn unsupported(path: &str, detail: &str) -> ExprError {
    ExprError::Unsupported { path: path.to_string(), detail: detail.to_string() }
}

fn d(e: &Expr, path: &str) -> Result<Expr, ExprError> {
    if is_undefined(e) {
        return Ok(e.clone());
    }
    if !e.depends_on_x() {
        return Ok(Expr::zero());
    }
    Ok(match e {
        Expr::Var => Expr::one(),
        Expr::Solution => return Err(unsupported(path, "implicit solution symbol")),
        Expr::Int(_) | Expr::Rat(_) | Expr::Param(_) => Expr::zero(),
        Expr::Neg(a) => Expr::neg(d(a, &format!("{path}/neg"))?),
        Expr::Add(ts) => Expr::Add(
            ts.iter()
                .enumerate()
                .map(|(i, t)| d(t, &format!("{path}/add[{i}]")))
                .collect::<Result<_, _>>()?,
        ),
        Expr::Mul(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                if !f.depends_on_x() {
                    continue;
                }
                let mut prod = fs.clone();
                prod[i] = d(f, &format!("{path}/mul[{i}]"))?;
                terms.push(Expr::Mul(prod));
            }
            Expr::Add(terms)
        }
        // k * b^(k-1) * b'
        Expr::Pow(b, k) => Expr::Mul(vec![
            (**k).clone(),
            Expr::pow((**b).clone(), Expr::Add(vec![(**k).clone(), Expr::int(-1)])),
            d(b, &format!("{path}/pow.base"))?,
        ]),
        Expr::Exp(b, k) => {
            let here = e.clone();
            let dk = d(k, &format!("{path}/exp.exponent"))?;
            if !b.depends_on_x() {
                // b^k * ln b * k'
                Expr::Mul(vec![here, Expr::ln((**b).clone()), dk])
            } else {
                // b^k * (k' ln b + k b'/b)
                let db = d(b, &format!("{path}/exp.base"))?;
                Expr::Mul(vec![
                    here,
                    Expr::Add(vec![
                        Expr::Mul(vec![dk, Expr::ln((**b).clone())]),
                        Expr::Mul(vec![(**k).clone(), db, Expr::recip((**b).clone())]),
                    ]),
                ])
            }
        }
        Expr::Ln(u) => Expr::Mul(vec![d(u, &format!("{path}/ln"))?, Expr::recip((**u).clone())]),
        // log_g u = ln u / ln g
        Expr::Log(_, u) => Expr::Mul(vec![
            d(u, &format!("{path}/log"))?,
            Expr::recip(Expr::Mul(vec![(**u).clone(), Expr::ln(Expr::g())])),
        ]),
    })
}
