use num_bigint::BigInt;

use super::{simplify, Expr, LogBase, Param};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    /// A second variable symbol such as `y` next to `x`.
    MultipleVariables(String),
    UnknownIdentifier(String),
    NonIntegerLiteral(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: {kind:?}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'e' || bytes[i] == b'E') {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'.') {
                    i += 1;
                }
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::NonIntegerLiteral(text[start..i].to_string()),
                });
            }
            let v: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(v)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap_or(c);
                return Err(ParseError { offset: start, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn error_here(&self) -> ParseError {
        match self.toks.get(self.pos) {
            Some((o, t)) => ParseError { offset: *o, kind: ParseErrorKind::UnexpectedToken(format!("{t:?}")) },
            None => ParseError { offset: self.end, kind: ParseErrorKind::UnexpectedEnd },
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here())
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    terms.push(Expr::neg(self.term()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    // term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    factors.push(self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    factors.push(Expr::recip(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }

    // factor := '-' factor | atom ('^' factor)?
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expr::pow(base, exponent));
        }
        Ok(base)
    }

    // atom := 'x' | 'g' | 'g1' | 'n' | INTEGER | '(' expr ')'
    //       | ('ln' | 'log' | 'log_g1' | 'log_g2') '(' expr ')'
    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(Expr::Int(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "g" => Ok(Expr::Param(Param::G)),
                "g1" => Ok(Expr::Param(Param::G1)),
                "n" => Ok(Expr::Param(Param::N)),
                "ln" | "log" | "log_g1" | "log_g2" => {
                    self.expect(Tok::LParen)?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(match name.as_str() {
                        "ln" => Expr::ln(arg),
                        "log" => Expr::Log(LogBase::G0, Box::new(arg)),
                        "log_g1" => Expr::Log(LogBase { level: 1 }, Box::new(arg)),
                        _ => Expr::Log(LogBase { level: 2 }, Box::new(arg)),
                    })
                }
                other if other.len() == 1 => {
                    Err(ParseError { offset, kind: ParseErrorKind::MultipleVariables(other.to_string()) })
                }
                other => Err(ParseError { offset, kind: ParseErrorKind::UnknownIdentifier(other.to_string()) }),
            },
            Some(_) => {
                self.pos -= 1;
                Err(self.error_here())
            }
            None => Err(ParseError { offset: self.end, kind: ParseErrorKind::UnexpectedEnd }),
        }
    }
}

/// Parses an expression and returns it in canonical form.
///
/// `a/b` is sugar for `a*b^(-1)` and `^` is right-associative.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.error_here());
    }
    Ok(simplify(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_to_the_x_is_exp() {
        assert_eq!(parse("x^x").unwrap(), Expr::Exp(Box::new(Expr::Var), Box::new(Expr::Var)));
    }

    #[test]
    fn nested_power_is_right_associative() {
        let want = Expr::Exp(
            Box::new(Expr::g()),
            Box::new(Expr::Pow(Box::new(Expr::Var), Box::new(Expr::n()))),
        );
        assert_eq!(parse("g^(x^n)").unwrap(), want);
        assert_eq!(parse("g^x^n").unwrap(), want);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse("-g^2").unwrap(), parse("-(g^2)").unwrap());
        assert_eq!(parse("2^-1").unwrap(), parse("1/2").unwrap());
    }

    #[test]
    fn polynomial_sum() {
        let want = Expr::Add(vec![
            Expr::Pow(Box::new(Expr::Var), Box::new(Expr::n())),
            Expr::Var,
            Expr::one(),
        ]);
        assert_eq!(parse("x^n + x + 1").unwrap(), want);
        assert_eq!(parse("1 + x + x^n").unwrap(), want);
    }

    #[test]
    fn division_is_sugar() {
        assert_eq!(
            parse("-1/x").unwrap(),
            Expr::neg(Expr::Pow(Box::new(Expr::Var), Box::new(Expr::int(-1))))
        );
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("x + y").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(e.kind, ParseErrorKind::MultipleVariables("y".into()));

        let e = parse("x^2.5").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(matches!(e.kind, ParseErrorKind::NonIntegerLiteral(_)));

        let e = parse("x + ").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);

        let e = parse("(x").unwrap_err();
        assert_eq!(e.offset, 2);

        let e = parse("x $ 2").unwrap_err();
        assert_eq!(e, ParseError { offset: 2, kind: ParseErrorKind::UnexpectedChar('$') });

        assert!(matches!(parse("sin(x)").unwrap_err().kind, ParseErrorKind::UnknownIdentifier(_)));
    }
}
