//! Parser for the canonical polynomial text form (`to_text` inverse).
//!
//! Accepted grammar, whitespace-insensitive:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' nat]
//! atom   := ident | number | '(' expr ')'
//! number := digits ['/' digits]          -- rational constant
//! ident  := [A-Za-z_$][A-Za-z0-9_$]*
//! ```
//!
//! `$` is allowed so internally generated symbols (counters, exponential
//! variables) round-trip; user programs can never declare such names.

use num_traits::Zero;
use thiserror::Error;

use super::{Int, Polynomial, Rational, Vars};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyParseError {
    #[error("unexpected character `{ch}` at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero denominator in rational constant at byte {0}")]
    ZeroDenominator(usize),
    #[error("exponent overflow at byte {0}")]
    ExponentOverflow(usize),
    #[error("trailing input starting at byte {0}")]
    TrailingInput(usize),
}

pub fn parse_polynomial(text: &str, vars: &Vars) -> Result<Polynomial, PolyParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        vars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(PolyParseError::TrailingInput(p.chars[p.pos].0));
    }
    Ok(poly)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn byte_pos(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(b, _)| b)
            .unwrap_or_else(|| self.chars.last().map(|&(b, c)| b + c.len_utf8()).unwrap_or(0))
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyParseError> {
        self.skip_ws();
        let mut negate = false;
        if self.peek() == Some('-') {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                let f = self.factor()?;
                acc = &acc * &f;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, PolyParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let start = self.byte_pos();
            let digits = self.digits()?;
            let exp: u32 = digits
                .parse()
                .map_err(|_| PolyParseError::ExponentOverflow(start))?;
            Ok(base.pow(exp))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(PolyParseError::UnexpectedEnd),
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.skip_ws();
                match self.bump() {
                    Some(')') => Ok(inner),
                    Some(c) => Err(PolyParseError::UnexpectedChar {
                        ch: c,
                        pos: self.chars[self.pos - 1].0,
                    }),
                    None => Err(PolyParseError::UnexpectedEnd),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let pos = self.byte_pos();
                let numer: Int = self.digits()?.parse().expect("digit string");
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.bump();
                    self.skip_ws();
                    let denom: Int = self.digits()?.parse().expect("digit string");
                    if denom.is_zero() {
                        return Err(PolyParseError::ZeroDenominator(pos));
                    }
                    Ok(Polynomial::constant(self.vars, Rational::new(numer, denom)))
                } else {
                    Ok(Polynomial::constant(
                        self.vars,
                        Rational::from_integer(numer),
                    ))
                }
            }
            Some(c) if is_ident_start(c) => {
                let name = self.ident();
                Polynomial::var(self.vars, &name)
                    .ok_or(PolyParseError::UnknownVariable(name))
            }
            Some(c) => Err(PolyParseError::UnexpectedChar {
                ch: c,
                pos: self.byte_pos(),
            }),
        }
    }

    fn digits(&mut self) -> Result<String, PolyParseError> {
        let mut s = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        if s.is_empty() {
            match self.peek() {
                Some(c) => Err(PolyParseError::UnexpectedChar {
                    ch: c,
                    pos: self.byte_pos(),
                }),
                None => Err(PolyParseError::UnexpectedEnd),
            }
        } else {
            Ok(s)
        }
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while matches!(self.peek(), Some(c) if is_ident_continue(c)) {
            s.push(self.bump().unwrap());
        }
        s
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '$'
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signs_parens_and_rationals() {
        let v = Vars::new(["x", "y"]);
        let f = parse_polynomial("-(x - y)^2 + 3/2*x*y - 7", &v).unwrap();
        let g = parse_polynomial("-x^2 + 2*x*y - y^2 + 3/2*x*y - 7", &v).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_unknown_variable() {
        let v = Vars::new(["x"]);
        assert_eq!(
            parse_polynomial("x + q", &v),
            Err(PolyParseError::UnknownVariable("q".into()))
        );
    }

    #[test]
    fn rejects_trailing_garbage_and_zero_denominator() {
        let v = Vars::new(["x"]);
        assert!(matches!(
            parse_polynomial("x )", &v),
            Err(PolyParseError::TrailingInput(_))
        ));
        assert!(matches!(
            parse_polynomial("1/0", &v),
            Err(PolyParseError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn dollar_identifiers_parse() {
        let v = Vars::new(["$k", "$z1"]);
        let f = parse_polynomial("$k^2 - $z1", &v).unwrap();
        assert_eq!(f.to_text(), "$k^2 - $z1");
    }
}
