use rug::ops::Pow;
use rug::{Integer, Rational};

use super::ClosedFormExpr as E;
use crate::{Error, Result};

/// Parses infix text such as `6*atan(sqrt(3)/(2*cbrt(2) - 1))^2 - log(3)^2/2`.
///
/// Grammar: `+ - * / ^`, parentheses, integer and decimal literals,
/// the constants `pi` and `alpha` (golden ratio), and the functions
/// `sqrt`, `cbrt`, `log` (alias `ln`) and `atan` (alias `arctan`).
/// A quotient of two integer literals becomes a rational literal.
pub fn parse_expr(text: &str) -> Result<E> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.sum()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(Error::Parse(format!("unexpected {t:?} in {text:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(decimal(&lit)?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

fn decimal(lit: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad number {lit:?}"));
    let (int, frac) = match lit.split_once('.') {
        Some((a, b)) => (a, b),
        None => (lit, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: Integer = digits.parse().map_err(|_| bad())?;
    let den = Integer::from(10).pow(frac.len() as u32);
    Ok(Rational::from((num, den)))
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {op:?} at token {}", self.pos)))
        }
    }

    fn sum(&mut self) -> Result<E> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.product()?;
            } else if self.eat('-') {
                lhs = lhs - self.product()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<E> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.unary()?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = match (lhs, rhs) {
                    (E::Int(a), E::Int(b)) if b != 0 => E::rational(Rational::from((a, b))),
                    (a, b) => a / b,
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<E> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                E::Int(i) => E::Int(-i),
                E::Rat(r) => E::Rat(-r),
                e => -e,
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<E> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let negative = self.eat('-');
        let n = match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(r)) if *r.denom() == 1 => {
                self.pos += 1;
                r.numer()
                    .to_i32()
                    .ok_or_else(|| Error::Parse("exponent too large".into()))?
            }
            _ => return Err(Error::Parse("exponent must be an integer literal".into())),
        };
        if paren {
            self.expect(')')?;
        }
        Ok(base.pow(if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<E> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(r) => Ok(E::rational(r)),
            Tok::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(E::Pi),
                "alpha" => Ok(E::GoldenRatio),
                "sqrt" | "cbrt" | "log" | "ln" | "atan" | "arctan" => {
                    self.expect('(')?;
                    let arg = self.sum()?;
                    self.expect(')')?;
                    Ok(match name.as_str() {
                        "sqrt" => arg.sqrt(),
                        "cbrt" => arg.cbrt(),
                        "log" | "ln" => arg.ln(),
                        _ => arg.atan(),
                    })
                }
                other => Err(Error::Parse(format!("unknown identifier {other:?}"))),
            },
            Tok::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{format_real, make_context};

    #[test]
    fn parses_boundary_value() {
        let e = parse_expr("2*pi^2/3 - 2*log(2)^2").unwrap();
        let ctx = make_context(30, 1).unwrap();
        let v = format_real(&e.eval(&ctx).unwrap(), 30);
        assert_eq!(v, "5.61883023955650289655545561393");
    }

    #[test]
    fn literals_and_exponents() {
        assert_eq!(parse_expr("6/4").unwrap(), E::frac(3, 2));
        assert_eq!(parse_expr("-7").unwrap(), E::int(-7));
        assert_eq!(parse_expr("0.25").unwrap(), E::frac(1, 4));
        assert_eq!(parse_expr("2^-3").unwrap(), E::int(2).pow(-3));
        assert_eq!(parse_expr("2^(-3)").unwrap(), E::int(2).pow(-3));
        assert!(parse_expr("-x").is_err());
        assert!(parse_expr("1 +").is_err());
        assert!(parse_expr("sqrt 2").is_err());
    }

    #[test]
    fn display_parses_back() {
        for text in [
            "-(2*alpha^3)/(1 - cbrt(-3))",
            "(-1/8)^2 + 2/3*pi",
            "6*atan(sqrt(3)/(2*cbrt(2) - 1))^2 - log(3)^2/2",
        ] {
            let e = parse_expr(text).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
