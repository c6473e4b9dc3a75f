//! Observable expressions such as `2X1 - P2`.
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := [integer] ('X' | 'P') [index]
//! ```
//!
//! Whitespace is ignored, a missing coefficient is 1 and a missing index is
//! 1. Indices count systems from 1.

use std::fmt;

use crate::epistemic::{Observable, PhaseSpace};
use crate::error::{Error, Result};
use crate::zmod::ModVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X,
    P,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: i64,
    pub variable: Variable,
    pub system: u64,
    /// Byte offset of the term in the source.
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservableExpr {
    pub source: String,
    pub terms: Vec<Term>,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn integer(&mut self) -> Result<Option<u64>> {
        self.skip_ws();
        let start = self.pos;
        let digits: String = self.text[start..].chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Ok(None);
        }
        self.pos += digits.len();
        digits
            .parse::<u64>()
            .map(Some)
            .map_err(|_| syntax(start, "integer too large"))
    }
}

fn syntax(offset: usize, message: &str) -> Error {
    Error::Syntax {
        offset,
        message: message.to_string(),
    }
}

impl ObservableExpr {
    pub fn parse(text: &str) -> Result<ObservableExpr> {
        let mut lx = Lexer { text, pos: 0 };
        let mut terms = Vec::new();
        let mut sign = 1i64;
        loop {
            lx.skip_ws();
            let offset = lx.pos;
            let coefficient = lx.integer()?.unwrap_or(1);
            let variable = match lx.bump() {
                Some('X') => Variable::X,
                Some('P') => Variable::P,
                Some(c) => return Err(syntax(lx.pos - c.len_utf8(), "expected 'X' or 'P'")),
                None => return Err(syntax(lx.pos, "expected a term")),
            };
            let system = lx.integer()?.unwrap_or(1);
            let coefficient = i64::try_from(coefficient)
                .map_err(|_| syntax(offset, "coefficient too large"))?
                * sign;
            terms.push(Term {
                coefficient,
                variable,
                system,
                offset,
            });
            match lx.bump() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(c) => return Err(syntax(lx.pos - c.len_utf8(), "expected '+' or '-'")),
            }
        }
        Ok(ObservableExpr {
            source: text.to_string(),
            terms,
        })
    }

    pub fn to_observable(&self, space: &PhaseSpace) -> Result<Observable> {
        let d = space.d() as i64;
        let mut coeffs = vec![0i64; space.dim()];
        for t in &self.terms {
            if t.system == 0 || t.system > space.n() as u64 {
                return Err(Error::IndexOutOfRange {
                    index: t.system,
                    offset: t.offset,
                    n: space.n(),
                });
            }
            let slot = 2 * (t.system as usize - 1) + (t.variable == Variable::P) as usize;
            coeffs[slot] = (coeffs[slot] + t.coefficient.rem_euclid(d)) % d;
        }
        let obs = Observable::new(space, &coeffs)?;
        if obs.is_zero() {
            return Err(Error::ZeroObservable);
        }
        Ok(obs)
    }
}

pub fn parse_observable(text: &str, space: &PhaseSpace) -> Result<Observable> {
    ObservableExpr::parse(text)?.to_observable(space)
}

/// Canonical text: terms in coordinate order, coefficients in [1, d),
/// coefficient 1 omitted, index omitted for a single system.
pub fn format_observable(obs: &Observable) -> String {
    format_vector(obs.sigma())
}

fn format_vector(v: &ModVector) -> String {
    let single = v.len() == 2;
    let mut out = String::new();
    for (i, &c) in v.entries().iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        if c != 1 {
            out.push_str(&c.to_string());
        }
        out.push(if i % 2 == 0 { 'X' } else { 'P' });
        if !single {
            out.push_str(&(i / 2 + 1).to_string());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for ObservableExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(d: u64, n: usize) -> PhaseSpace {
        PhaseSpace::new(d, n).unwrap()
    }

    fn coeffs(text: &str, d: u64, n: usize) -> Vec<u64> {
        parse_observable(text, &sp(d, n)).unwrap().sigma().entries().to_vec()
    }

    #[test]
    fn examples() {
        assert_eq!(coeffs("3X", 6, 1), vec![3, 0]);
        assert_eq!(coeffs("X+P", 3, 1), vec![1, 1]);
        assert_eq!(coeffs("2X1-P2", 5, 2), vec![2, 0, 0, 4]);
        assert_eq!(coeffs(" 2 X 1 - P 2 ", 5, 2), vec![2, 0, 0, 4]);
        assert_eq!(coeffs("X+X", 3, 1), vec![2, 0]);
    }

    #[test]
    fn errors_carry_offsets() {
        let space = sp(5, 2);
        assert!(matches!(parse_observable("", &space), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_observable("X+", &space), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_observable("X*P", &space), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_observable("2Y", &space), Err(Error::Syntax { offset: 1, .. })));
        assert_eq!(
            parse_observable("X1+P3", &space).unwrap_err(),
            Error::IndexOutOfRange {
                index: 3,
                offset: 3,
                n: 2
            }
        );
        assert_eq!(parse_observable("X0", &space).unwrap_err(), Error::IndexOutOfRange {
            index: 0,
            offset: 0,
            n: 2
        });
        assert_eq!(parse_observable("5X", &space).unwrap_err(), Error::ZeroObservable);
        assert_eq!(parse_observable("X-X", &space).unwrap_err(), Error::ZeroObservable);
    }

    #[test]
    fn canonical_printing() {
        let o = parse_observable("2X1-P2", &sp(5, 2)).unwrap();
        assert_eq!(format_observable(&o), "2X1+4P2");
        assert_eq!(format_observable(&parse_observable("X+P", &sp(3, 1)).unwrap()), "X+P");
        let again = parse_observable(&format_observable(&o), &sp(5, 2)).unwrap();
        assert_eq!(again, o);
    }
}
