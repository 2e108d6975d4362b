use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Poly, Rat, VarTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Lexed {
                tok: Tok::Num(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        } else if c.is_ascii_lowercase() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_lowercase() || chars[i].is_ascii_digit() || chars[i] == '_')
            {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Lexed {
                tok: Tok::Ident(s),
                line: l0,
                column: c0,
            });
            continue;
        } else {
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(Error::Parse {
                        line,
                        column,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push(Lexed {
            tok,
            line: l0,
            column: c0,
        });
        i += 1;
        column += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    table: &'a Arc<VarTable>,
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |l| (l.line, l.column))
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.table);
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.err("juxtaposition is not allowed; use `*`");
                }
                Some(Tok::Slash) => {
                    return self.err("`/` is only allowed between two integer literals");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a non-negative integer exponent after `^`"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut value = Rat::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) => {
                            if d.is_zero() {
                                return self.err("zero denominator in rational literal");
                            }
                            self.pos += 1;
                            value /= Rat::from_integer(d);
                        }
                        _ => return self.err("`/` is only allowed between two integer literals"),
                    }
                }
                Ok(Poly::constant(self.table, value))
            }
            Some(Tok::Ident(name)) => match self.table.index_of(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Poly::var_at(self.table, i, 1))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a polynomial in the text syntax: `+ - * ^`, integer and `p/q`
/// literals, parentheses, variables from `table`.
pub fn parse_poly(src: &str, table: &Arc<VarTable>) -> Result<Poly> {
    let toks = lex(src)?;
    let end = {
        let line = src.lines().count().max(1);
        let column = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    };
    let mut p = Parser {
        toks,
        pos: 0,
        table,
        end,
    };
    if p.toks.is_empty() {
        return p.err("empty polynomial");
    }
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(poly)
}

impl Poly {
    pub fn parse(src: &str, table: &Arc<VarTable>) -> Result<Poly> {
        parse_poly(src, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab() -> Arc<VarTable> {
        VarTable::user(&["x", "y", "t"]).unwrap()
    }

    #[test]
    fn canonical_round_trip() {
        let t = tab();
        for s in [
            "0",
            "1",
            "-3/4",
            "x*t + y",
            "x^2 - y^2",
            "-x^2*y + 3/4*x*t - 7",
            "x*y*t^3 + 2*y^2",
        ] {
            let p = parse_poly(s, &t).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(parse_poly(&p.to_string(), &t).unwrap(), p);
        }
    }

    #[test]
    fn arithmetic_in_parser() {
        let t = tab();
        let p = parse_poly("(x+y)*(x-y)", &t).unwrap();
        assert_eq!(p.to_string(), "x^2 - y^2");
        assert_eq!(parse_poly("6/4*x", &t).unwrap().to_string(), "3/2*x");
        assert_eq!(parse_poly("x*t^3 + x*t^3 - x*t^3 + y", &t).unwrap().to_string(), "x*t^3 + y");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let t = tab();
        match parse_poly("2x", &t) {
            Err(Error::Parse { line: 1, column: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_poly("x +\n  z", &t) {
            Err(Error::Parse { line: 2, column: 3, message }) => assert!(message.contains("`z`")),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("x/y", &t).is_err());
        assert!(parse_poly("1/0", &t).is_err());
        assert!(parse_poly("x^", &t).is_err());
        assert!(parse_poly("", &t).is_err());
        assert!(parse_poly("x + ", &t).is_err());
    }
}
