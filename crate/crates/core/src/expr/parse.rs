use std::collections::HashMap;

use super::Expr;
use crate::error::{KvnError, Result};

/// Parse an arithmetic expression whose identifiers are drawn from `vars`
/// (mapped to variable indices in order).
pub fn parse(src: &str, vars: &[&str]) -> Result<Expr> {
    parse_with(src, vars, &HashMap::new())
}

/// Like [`parse`], with named numeric constants.
pub fn parse_with(src: &str, vars: &[&str], consts: &HashMap<String, f64>) -> Result<Expr> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, vars, consts };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(KvnError::Parse(format!("unexpected trailing input in '{src}'")));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = i;
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                if i < chars.len() && chars[i].is_ascii_digit() {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                } else {
                    i = save;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| KvnError::Parse(format!("bad number '{s}'")))?;
            out.push(Tok::Num(v));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Sym(ch));
            i += 1;
        } else {
            return Err(KvnError::Parse(format!("unexpected character '{ch}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
    consts: &'a HashMap<String, f64>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                acc = acc / self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            let p = exp
                .as_const()
                .ok_or_else(|| KvnError::Parse("exponent must be a constant".into()))?;
            return Ok(base.powf(p));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::constant(v))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(KvnError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(KvnError::Parse("missing ')' after function argument".into()));
                    }
                    return match name.as_str() {
                        "sin" => Ok(arg.sin()),
                        "cos" => Ok(arg.cos()),
                        "exp" => Ok(arg.exp()),
                        "sqrt" => Ok(arg.sqrt()),
                        _ => Err(KvnError::Parse(format!("unknown function '{name}'"))),
                    };
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Expr::var(i));
                }
                if let Some(v) = self.consts.get(&name) {
                    return Ok(Expr::constant(*v));
                }
                if name == "pi" {
                    return Ok(Expr::constant(std::f64::consts::PI));
                }
                Err(KvnError::Parse(format!("unknown identifier '{name}'")))
            }
            other => Err(KvnError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence_and_functions() {
        let e = parse("-x^2 + 3*y/2 - sin(x*y)", &["x", "y"]).unwrap();
        let (x, y) = (0.4f64, 1.5f64);
        let want = -x * x + 3.0 * y / 2.0 - (x * y).sin();
        assert!((e.eval(&[x, y]) - want).abs() < 1e-15);
    }

    #[test]
    fn named_constants_and_errors() {
        let mut c = HashMap::new();
        c.insert("B".to_string(), 2.0);
        let e = parse_with("B*x + 1e-1", &["x"], &c).unwrap();
        assert!((e.eval(&[3.0]) - 6.1).abs() < 1e-15);
        assert!(parse("x + z", &["x"]).is_err());
        assert!(parse("x^y", &["x", "y"]).is_err());
        assert!(parse("(x", &["x"]).is_err());
    }
}
