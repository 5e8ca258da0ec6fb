//! Recursive descent parser for the polynomial input grammar:
//!
//! ```text
//! expr   := ['-'|'+'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := rational | var | '(' expr ')'
//! ```
//!
//! A rational literal is `digits` or `digits/digits`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Poly, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownVariable { offset, .. } => *offset,
        }
    }
}

/// Parse `expr` over the named variables and expand to normal form.
pub fn parse<S: AsRef<str>>(expr: &str, vars: &[S]) -> Result<Poly, ParseError> {
    let vars: Vec<&str> = vars.iter().map(|s| s.as_ref()).collect();
    let mut p = Parser { src: expr.as_bytes(), pos: 0, vars: &vars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.vars.len()
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { offset: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = Poly::zero(self.n());
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| ParseError::Syntax { offset: start, msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                let mut den = BigInt::from(1);
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(self.err("expected denominator"));
                    }
                    den = d.parse().expect("digits");
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                }
                Ok(Poly::constant(self.n(), Q::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(self.n(), i)),
                    None => Err(ParseError::UnknownVariable { name: name.to_string(), offset: start }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn simple_expansion() {
        let p = parse("x*y - y^3", &["x", "y"]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial(vec![1, 1])), crate::q(1, 1));
        assert_eq!(p.coeff(&Monomial(vec![0, 3])), crate::q(-1, 1));
    }

    #[test]
    fn product_expansion_matches_term_by_term() {
        let vars = ["x", "y", "z"];
        let p = parse("x*y*(x+y)*(x+y*z)", &vars).unwrap();
        // brute force: multiply out the four factors as explicit term lists
        let factors: [&[(i64, [u32; 3])]; 4] = [
            &[(1, [1, 0, 0])],
            &[(1, [0, 1, 0])],
            &[(1, [1, 0, 0]), (1, [0, 1, 0])],
            &[(1, [1, 0, 0]), (1, [0, 1, 1])],
        ];
        let mut acc: Vec<(i64, [u32; 3])> = vec![(1, [0, 0, 0])];
        for f in factors {
            let mut next = Vec::new();
            for (c, e) in &acc {
                for (d, g) in f {
                    next.push((c * d, [e[0] + g[0], e[1] + g[1], e[2] + g[2]]));
                }
            }
            acc = next;
        }
        let expected = Poly::from_terms(3, acc.into_iter().map(|(c, e)| (Monomial(e.to_vec()), crate::q(c, 1))));
        assert_eq!(p, expected);
        assert_eq!(p, parse("x^3*y + x^2*y^2 + x^2*y^2*z + x*y^3*z", &vars).unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse("x*(", &["x"]).unwrap_err().offset(), 3);
        match parse("x + w", &["x"]) {
            Err(ParseError::UnknownVariable { name, offset }) => {
                assert_eq!(name, "w");
                assert_eq!(offset, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("x^", &["x"]).is_err());
        assert!(parse("x y", &["x", "y"]).is_err());
    }

    #[test]
    fn rationals_and_signs() {
        let p = parse("-3/2*x + (1/2)^2", &["x"]).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![1])), crate::q(-3, 2));
        assert_eq!(p.constant_term(), crate::q(1, 4));
    }

    #[test]
    fn print_parse_round_trip() {
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        for s in ["x*y*(x+y)*(x+y*z)", "x^2 - y^2*z", "x^4 + y^5 + x*y^4", "-6", "0", "1/3*x - 7/5*y^2*z + 2"] {
            let p = parse(s, &vars).unwrap();
            assert_eq!(parse(&p.fmt_with(&vars), &vars).unwrap(), p, "{s}");
        }
    }
}
