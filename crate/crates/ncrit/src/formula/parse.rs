use num_bigint::BigInt;

use super::{Formula, FormulaError};
use crate::field::Rat;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> FormulaError {
    FormulaError::Syntax { pos, msg: msg.into() }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FormulaError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Formula::add(acc, self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Formula::sub(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = Formula::mul(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Formula, FormulaError> {
        let start = match self.peek() {
            None => return Err(syntax(self.pos, "unexpected end of input")),
            Some(_) => self.pos,
        };
        let c = self.src[start];
        if self.src[start..].starts_with(b"inv") {
            self.pos += 3;
            self.expect(b'(')?;
            let inner = self.formula()?;
            self.expect(b')')?;
            return Ok(Formula::inv(inner));
        }
        match c {
            b'(' => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(b')')?;
                Ok(inner)
            }
            b'x' => {
                self.pos += 1;
                let d = self.digits().ok_or(FormulaError::BadVar { pos: start })?;
                let i: usize = d.parse().map_err(|_| FormulaError::BadVar { pos: start })?;
                if i == 0 {
                    return Err(FormulaError::BadVar { pos: start });
                }
                Ok(Formula::var(i))
            }
            b'-' | b'0'..=b'9' => {
                let neg = c == b'-';
                if neg {
                    self.pos += 1;
                }
                let n = self.digits().ok_or_else(|| syntax(self.pos, "expected digits"))?;
                let mut num: BigInt = n.parse().unwrap();
                if neg {
                    num = -num;
                }
                let den: BigInt = if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let d = self.digits().ok_or_else(|| syntax(self.pos, "expected denominator"))?;
                    let d: BigInt = d.parse().unwrap();
                    if d == BigInt::from(0) {
                        return Err(syntax(self.pos, "zero denominator"));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(Formula::constant(Rat::new(num, den)))
            }
            _ => Err(syntax(start, format!("unexpected '{}'", c as char))),
        }
    }
}

/// Parse the textual grammar; `-` desugars to `+ (−1)·`.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.formula()?;
    if p.peek().is_some() {
        return Err(syntax(p.pos, "trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Node;

    #[test]
    fn commutator_inverse_shape() {
        let f = parse("inv(x1*x2 - x2*x1)").unwrap();
        let expect = Formula::inv(Formula::add(
            Formula::mul(Formula::var(1), Formula::var(2)),
            Formula::mul(Formula::int(-1), Formula::mul(Formula::var(2), Formula::var(1))),
        ));
        assert_eq!(f, expect);
        assert_eq!(f.height(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("inv("), Err(FormulaError::Syntax { .. })));
        assert_eq!(parse("x0"), Err(FormulaError::BadVar { pos: 0 }));
        assert_eq!(parse("1 + xa"), Err(FormulaError::BadVar { pos: 4 }));
        assert!(parse("x1 x2").is_err());
        assert!(parse("1/0").is_err());
    }

    #[test]
    fn precedence_and_constants() {
        let f = parse("1/2 + x1*-3").unwrap();
        match f.node() {
            Node::Add(a, b) => {
                assert_eq!(a.node(), &Node::Const(Rat::new(1, 2)));
                assert!(matches!(b.node(), Node::Mul(..)));
            }
            _ => panic!(),
        }
        assert_eq!(parse(" ( x1 ) ").unwrap(), Formula::var(1));
    }
}
