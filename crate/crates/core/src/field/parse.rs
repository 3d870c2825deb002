//! Text syntax for tower elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? int)?
//! atom  := int | 'i' | x<k> | y<k> | t<k> | l<k> | 'sqrt(' x<k> ')' | '(' expr ')'
//! ```

use std::fmt;

use super::monomial::Var;
use super::poly::MultiPoly;
use super::tower::TowerElement;
use super::FieldError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            col += k - start;
            let n = s.parse::<i64>().map_err(|_| ParseError { line: l0, column: c0, message: format!("integer literal {s} out of range") })?;
            out.push((Tok::Int(n), l0, c0));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            col += k - start;
            out.push((Tok::Ident(chars[start..k].iter().collect()), l0, c0));
            continue;
        }
        if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), l0, c0));
            col += 1;
            k += 1;
            continue;
        }
        return Err(ParseError { line: l0, column: c0, message: format!("unexpected character '{c}'") });
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError { line, column, message: message.into() }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<TowerElement, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TowerElement, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    let at = self.here();
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| ParseError { line: at.0, column: at.1, message: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<TowerElement, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<TowerElement, ParseError> {
        let at = self.here();
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let neg = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        let e = match self.bump() {
            Tok::Int(n) if n <= u32::MAX as i64 => n as u32,
            _ => return Err(self.err("expected a non-negative integer exponent")),
        };
        let p = base.pow(e);
        if neg {
            p.inv().map_err(|_| ParseError { line: at.0, column: at.1, message: "zero raised to a negative power".into() })
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<TowerElement, ParseError> {
        let at = self.here();
        match self.bump() {
            Tok::Int(n) => Ok(TowerElement::from_int(n)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "i" => Ok(TowerElement::i()),
            Tok::Ident(name) if name == "sqrt" => {
                self.expect('(')?;
                let inner = self.here();
                let v = match self.bump() {
                    Tok::Ident(n) => parse_var(&n),
                    _ => None,
                };
                let l = match v {
                    Some(Var::X(l)) => l,
                    _ => return Err(ParseError { line: inner.0, column: inner.1, message: "sqrt accepts only x<k>".into() }),
                };
                if l > 32 {
                    return Err(ParseError { line: inner.0, column: inner.1, message: "root index above 32".into() });
                }
                self.expect(')')?;
                Ok(TowerElement::sqrt_x(l))
            }
            Tok::Ident(name) => parse_var(&name)
                .map(TowerElement::var)
                .ok_or(ParseError { line: at.0, column: at.1, message: format!("unknown identifier '{name}'") }),
            Tok::End => Err(ParseError { line: at.0, column: at.1, message: "unexpected end of input".into() }),
            Tok::Sym(c) => Err(ParseError { line: at.0, column: at.1, message: format!("unexpected '{c}'") }),
        }
    }
}

/// `x3`, `y1`, `t2`, `l5`; indices start at 1.
pub fn parse_var(s: &str) -> Option<Var> {
    let mut chars = s.chars();
    let head = chars.next()?;
    let rest = chars.as_str();
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    let k: u16 = rest.parse().ok()?;
    match head {
        'x' => Some(Var::X(k)),
        'y' => Some(Var::Y(k)),
        't' => Some(Var::T(k)),
        'l' => Some(Var::L(k)),
        _ => None,
    }
}

pub fn parse_element(src: &str) -> Result<TowerElement, ParseError> {
    let mut lx = Lexer { toks: lex(src)?, pos: 0 };
    let e = lx.expr()?;
    if *lx.peek() != Tok::End {
        return Err(lx.err("trailing input"));
    }
    Ok(e)
}

/// Parses an expression that must denote a polynomial (no division by
/// non-constants, no square roots).
pub fn parse_poly(src: &str) -> Result<MultiPoly, ParseError> {
    let e = parse_element(src)?;
    match e.as_ratfunc() {
        Some(q) if q.is_polynomial() => Ok(q.num().clone()),
        _ => Err(ParseError { line: 1, column: 1, message: format!("'{src}' is not a polynomial") }),
    }
}

impl std::str::FromStr for TowerElement {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        parse_element(s).map_err(FieldError::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> TowerElement {
        parse_element(s).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(p("1 + 2*3^2"), TowerElement::from_int(19));
        assert_eq!(p("-2^2"), TowerElement::from_int(-4));
        assert_eq!(p("(1+1)^-1 * 4"), TowerElement::from_int(2));
    }

    #[test]
    fn roots_and_units() {
        assert_eq!(p("sqrt(x1)^2"), TowerElement::var(Var::X(1)));
        assert_eq!(p("i*i"), TowerElement::from_int(-1));
    }

    #[test]
    fn display_round_trips() {
        for s in ["x1*y2/(x1 + 3) - i*sqrt(x2)", "(2 + i)/3*sqrt(x1)*sqrt(x3) + y1^2", "1/(y1*y2) + t1*l2"] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s} -> {e}");
        }
    }

    #[test]
    fn polynomials_only() {
        assert_eq!(parse_poly("t1^2 + 3").unwrap().total_degree(), 2);
        assert!(parse_poly("1/t1").is_err());
        assert!(parse_poly("sqrt(x1)").is_err());
        assert!(parse_poly("(t1^2 - 1)/(t1 - 1)").is_ok());
    }

    #[test]
    fn error_positions() {
        let e = parse_element("x1 +\n  2 * $").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        let e = parse_element("sqrt(y1)").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert!(parse_element("x0").is_err());
        assert!(parse_element("1/(x1 - x1)").is_err());
        assert!(parse_element("(1 + x1").is_err());
        assert!(parse_element("1 2").is_err());
    }
}
