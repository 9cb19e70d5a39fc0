//! Parser for polynomial germ expressions in x, y.
//!
//! Grammar: `+ - * ^` with parentheses, integer and rational literals
//! (`p/q`), the imaginary unit `i`, unary minus.  Implicit multiplication
//! is rejected.  Errors carry a byte position.

use crate::error::{Error, Result};
use crate::gaussian::{GaussianRational, Rat};
use crate::poly::Germ;
use num_bigint::BigInt;
use num_traits::One;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn lex(s: &str) -> Result<Lexer> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                k += 1;
            }
            '+' => {
                toks.push((k, Tok::Plus));
                k += 1;
            }
            '-' => {
                toks.push((k, Tok::Minus));
                k += 1;
            }
            '*' => {
                toks.push((k, Tok::Star));
                k += 1;
            }
            '/' => {
                toks.push((k, Tok::Slash));
                k += 1;
            }
            '^' => {
                toks.push((k, Tok::Caret));
                k += 1;
            }
            '(' => {
                toks.push((k, Tok::LParen));
                k += 1;
            }
            ')' => {
                toks.push((k, Tok::RParen));
                k += 1;
            }
            'x' => {
                toks.push((k, Tok::X));
                k += 1;
            }
            'y' => {
                toks.push((k, Tok::Y));
                k += 1;
            }
            'i' => {
                toks.push((k, Tok::I));
                k += 1;
            }
            '0'..='9' => {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let n: BigInt = s[start..k].parse().unwrap();
                toks.push((start, Tok::Num(n)));
            }
            _ => {
                return Err(Error::Parse { pos: k, msg: format!("unexpected character '{}'", c) });
            }
        }
    }
    Ok(Lexer { toks, pos: 0, end: s.len() })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
}

// expr   := term (('+'|'-') term)*
// term   := factor ('*' factor | '/' number)*
// factor := ('-')* atom ('^' nat)?
// atom   := 'x' | 'y' | 'i' | nat | '(' expr ')'

fn parse_expr(lx: &mut Lexer) -> Result<Germ> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                acc = acc.add(&parse_term(lx)?);
            }
            Some(Tok::Minus) => {
                lx.next();
                acc = acc.sub(&parse_term(lx)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Germ> {
    let mut acc = parse_factor(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                acc = acc.mul(&parse_factor(lx)?);
            }
            Some(Tok::Slash) => {
                // only numeric denominators keep the result polynomial
                lx.next();
                let pos = lx.here();
                match lx.next() {
                    Some(Tok::Num(n)) => {
                        if n == BigInt::from(0) {
                            return Err(Error::Parse { pos, msg: "division by zero".into() });
                        }
                        let c = GaussianRational::from_rat(Rat::new(BigInt::one(), n));
                        acc = acc.mul(&Germ::constant(c));
                    }
                    _ => {
                        return Err(Error::Parse {
                            pos,
                            msg: "expected an integer denominator after '/'".into(),
                        })
                    }
                }
            }
            // implicit multiplication (e.g. "2x" or "x y") is not accepted
            Some(Tok::X) | Some(Tok::Y) | Some(Tok::I) | Some(Tok::Num(_)) | Some(Tok::LParen) => {
                return Err(Error::Parse {
                    pos: lx.here(),
                    msg: "missing operator (implicit multiplication is not allowed)".into(),
                });
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<Germ> {
    let mut sign = false;
    while let Some(Tok::Minus) = lx.peek() {
        lx.next();
        sign = !sign;
    }
    let mut base = parse_atom(lx)?;
    if let Some(Tok::Caret) = lx.peek() {
        lx.next();
        let pos = lx.here();
        match lx.next() {
            Some(Tok::Num(n)) => {
                let e: u32 = n.try_into().map_err(|_| Error::Parse {
                    pos,
                    msg: "exponent too large".into(),
                })?;
                base = base.pow(e);
            }
            _ => {
                return Err(Error::Parse { pos, msg: "expected a nonnegative integer exponent".into() })
            }
        }
    }
    Ok(if sign { base.neg() } else { base })
}

fn parse_atom(lx: &mut Lexer) -> Result<Germ> {
    let pos = lx.here();
    match lx.next() {
        Some(Tok::X) => Ok(Germ::var_x()),
        Some(Tok::Y) => Ok(Germ::var_y()),
        Some(Tok::I) => Ok(Germ::constant(GaussianRational::i())),
        Some(Tok::Num(n)) => Ok(Germ::constant(GaussianRational::from_rat(Rat::from_integer(n)))),
        Some(Tok::LParen) => {
            let inner = parse_expr(lx)?;
            match lx.next() {
                Some(Tok::RParen) => Ok(inner),
                _ => Err(Error::Parse { pos: lx.here(), msg: "expected ')'".into() }),
            }
        }
        _ => Err(Error::Parse { pos, msg: "expected a term".into() }),
    }
}

/// Parse an expression into a bivariate polynomial over Q(i).
pub fn parse_germ(s: &str) -> Result<Germ> {
    let mut lx = lex(s)?;
    let g = parse_expr(&mut lx)?;
    if lx.peek().is_some() {
        return Err(Error::Parse { pos: lx.here(), msg: "trailing input".into() });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_polynomials() {
        let f = parse_germ("x^2 - y^3").unwrap();
        assert_eq!(f.deg_x(), Some(2));
        assert_eq!(f.coeff(2, 0), GaussianRational::from_i64(1));
        assert_eq!(f.coeff(0, 3), GaussianRational::from_i64(-1));
    }

    #[test]
    fn rational_and_imaginary_literals() {
        let f = parse_germ("1/2*x + i*y - 3/4").unwrap();
        assert_eq!(f.coeff(1, 0), GaussianRational::from_rat(crate::gaussian::rat(1, 2)));
        assert_eq!(f.coeff(0, 1), GaussianRational::i());
        assert_eq!(f.coeff(0, 0), GaussianRational::from_rat(crate::gaussian::rat(-3, 4)));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        match parse_germ("2x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("expected parse error, got {:?}", other),
        }
        assert!(parse_germ("x y").is_err());
        assert!(parse_germ("(x + y)(x - y)").is_err());
    }

    #[test]
    fn rejects_non_polynomial() {
        assert!(parse_germ("x^").is_err());
        assert!(parse_germ("z").is_err());
        assert!(parse_germ("x +").is_err());
        assert!(parse_germ("x / y").is_err());
    }

    #[test]
    fn round_trips_display() {
        for s in ["x^2 - y^3", "x*y + y^2", "(x - y^2)^2 - y^6", "x^2 + 2*x*y + y^2 - x^3"] {
            let f = parse_germ(s).unwrap();
            let printed = format!("{}", f);
            let re = parse_germ(&printed).unwrap();
            assert_eq!(re, f, "round trip failed for {}", s);
        }
    }
}
