use crate::expr::{parse, Expr};

/// Source text of every function body the analysis is designed around.
pub const CATALOG: [&str; 12] = [
    "x",
    "-1/x",
    "x^n",
    "g^x",
    "x^x",
    "(g*x)^x",
    "g^x*x^x",
    "g^(x^n)",
    "x^n + x + 1",
    "g^(g1^x)",
    "x^n*g^x",
    "x*g^x",
];

pub fn catalog() -> Vec<Expr> {
    CATALOG.iter().map(|s| parse(s).expect("catalog entry parses")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::render;

    #[test]
    fn renders_round_trip() {
        for e in catalog() {
            let text = render(&e);
            assert_eq!(parse(&text).unwrap(), e, "{text}");
        }
    }

    #[test]
    fn canonical_text() {
        let texts: Vec<String> = catalog().iter().map(render).collect();
        assert_eq!(texts[8], "x^n + x + 1");
        assert_eq!(texts[10], "x^n*g^x");
        assert_eq!(texts[1], "-1/x");
        assert_eq!(texts[7], "g^(x^n)");
    }
}
