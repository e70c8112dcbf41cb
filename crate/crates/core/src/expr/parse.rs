use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{CheckedAdd, CheckedMul, Zero};

use super::{Expr, Func, Node, Rational};

/// Identifiers the parser may resolve: chart coordinates (by index) and
/// named constants substituted verbatim.
#[derive(Clone, Debug, Default)]
pub struct Symbols {
    coords: Vec<Arc<str>>,
    constants: BTreeMap<String, Expr>,
}

impl Symbols {
    pub fn new<S: AsRef<str>>(coords: &[S]) -> Symbols {
        Symbols {
            coords: coords.iter().map(|c| Arc::from(c.as_ref())).collect(),
            constants: BTreeMap::new(),
        }
    }

    pub fn with_constant(mut self, name: &str, value: Expr) -> Symbols {
        self.constants.insert(name.to_string(), value);
        self
    }

    pub fn define(&mut self, name: &str, value: Expr) {
        self.constants.insert(name.to_string(), value);
    }

    pub fn coords(&self) -> &[Arc<str>] {
        &self.coords
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| &**c == name)
    }

    pub fn parse(&self, source: &str) -> Result<Expr, ParseError> {
        let mut p = Parser { src: source.as_bytes(), pos: 0, symbols: self };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { offset: usize, message: String },
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset, message } => write!(f, "syntax error at byte {offset}: {message}"),
            ParseError::UnknownIdentifier { offset, name } => {
                write!(f, "unknown identifier `{name}` at byte {offset}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    symbols: &'a Symbols,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&alloc::format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = Expr::from_node(Node::Add(acc, rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = Expr::from_node(Node::Sub(acc, rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                acc = Expr::from_node(Node::Mul(acc, rhs));
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                // literal ratios such as 2/3 become exact constants
                acc = match (acc.as_const(), rhs.as_const()) {
                    (Some(a), Some(b)) if !b.is_zero() => Expr::rational(a / b),
                    _ => Expr::from_node(Node::Div(acc, rhs)),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let negate = self.eat(b'-');
        let mut base = self.atom()?;
        if self.eat(b'^') {
            let k = self.exponent()?;
            base = Expr::from_node(Node::Pow(base, k));
        }
        if !negate {
            return Ok(base);
        }
        Ok(match base.as_const() {
            Some(r) => Expr::rational(-r),
            None => Expr::from_node(Node::Neg(base)),
        })
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let mut k: i32 = digits
            .parse()
            .map_err(|_| ParseError::Syntax { offset: start, message: "exponent out of range".to_string() })?;
        if neg {
            k = -k;
        }
        if paren {
            self.expect(b')')?;
        }
        Ok(k)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let overflow = || ParseError::Syntax { offset: start, message: "numeric literal out of range".to_string() };
        let mut value = Rational::zero();
        let mut scale: Option<Rational> = None;
        let ten = Rational::from_integer(10);
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                let d = Rational::from_integer(i64::from(c - b'0'));
                match scale.as_mut() {
                    None => value = value.checked_mul(&ten).and_then(|v| v.checked_add(&d)).ok_or_else(overflow)?,
                    Some(s) => {
                        *s = s.checked_mul(&Rational::new(1, 10)).ok_or_else(overflow)?;
                        value = d.checked_mul(s).and_then(|t| value.checked_add(&t)).ok_or_else(overflow)?;
                    }
                }
            } else if c == b'.' && scale.is_none() {
                scale = Some(Rational::from_integer(1));
            } else {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start + 1 && self.src[start] == b'.' {
            return Err(ParseError::Syntax { offset: start, message: "malformed number".to_string() });
        }
        Ok(Expr::rational(value))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if let Some(func) = Func::from_name(name) {
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let arg = self.expr()?;
                self.expect(b')')?;
                return Ok(Expr::apply(func, arg));
            }
            return Err(self.error(&alloc::format!("function `{name}` requires an argument")));
        }
        if let Some(i) = self.symbols.coord_index(name) {
            return Ok(Expr::from_node(Node::Coord(i, self.symbols.coords[i].clone())));
        }
        if let Some(value) = self.symbols.constants.get(name) {
            return Ok(value.clone());
        }
        Err(ParseError::UnknownIdentifier { offset: start, name: name.to_string() })
    }
}
