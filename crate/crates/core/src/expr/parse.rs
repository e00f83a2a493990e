//! Recursive-descent parser for the series DSL.
//!
//! ```text
//! expr    := '-'? term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := atom ('^' int)?
//! atom    := 'f' uint | 'psi(' uint ')' | 'theta(' smon ',' smon ')'
//!          | 'poch(' smon ';' smon ')'
//!          | 'quadsum(' int ',' int ',' int ';' sign ';' range ')'
//!          | 'dissect(' expr ';' uint ';' uint ')'
//!          | name | 'q' ('^' uint)? | uint | '(' expr ')'
//! smon    := ('+' | '-')? 'q' ('^' uint)?
//! sign    := 'plus' | 'altn' | 'alt-tri-up' | 'alt-tri-down'
//! range   := 'n>=0' | 'n>=1' | 'n<=-1' | 'all'
//! name    := 'A' | 'B' | 'b1' | 'b2' | 'b3' | 'a1' | 'a2' | 'b' | 'c' uint
//! ```

use std::fmt;

use crate::expr::Expr;
use crate::qfactory::{NamedSeries, QuadSumSpec, Sign, SignMode, SignedMonomial, SumRange};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.rest().chars().next().unwrap())));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { line, column, message: message.into() }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => Err(self.error(format!("expected '{c}', found '{got}'"))),
                None => Err(self.error(format!("expected '{c}', found end of input"))),
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let end = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn uint(&mut self) -> PResult<u64> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        digits.parse().map_err(|_| self.error_at(start, "integer too large"))
    }

    fn int(&mut self) -> PResult<i64> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let start = self.pos;
        let v = self.uint()?;
        let v = i64::try_from(v).map_err(|_| self.error_at(start, "integer too large"))?;
        Ok(if negative { -v } else { v })
    }

    fn small(&mut self, what: &str) -> PResult<u32> {
        let start = self.pos;
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| self.error_at(start, format!("{what} too large")))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = if self.eat('-') { -self.term()? } else { self.term()? };
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.factor()?;
            } else if self.eat('/') {
                lhs = lhs / self.factor()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            Ok(base.pow(self.int()?))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.uint()?)),
            Some(c) if c.is_ascii_alphabetic() => self.symbol(),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    fn symbol(&mut self) -> PResult<Expr> {
        let start = self.pos;
        let word = self.take_while(|c| c.is_ascii_alphanumeric());
        match word {
            "q" => Ok(Expr::QPow(self.q_exponent()?)),
            "psi" => {
                self.expect('(')?;
                let at = self.pos;
                let t = self.small("psi index")?;
                if t == 0 {
                    return Err(self.error_at(at, "psi index must be >= 1"));
                }
                self.expect(')')?;
                Ok(Expr::Psi(t))
            }
            "theta" => {
                self.expect('(')?;
                let a = self.monomial()?;
                self.expect(',')?;
                let b = self.monomial()?;
                self.expect(')')?;
                if a.exponent + b.exponent == 0 {
                    return Err(self.error_at(start, "theta arguments need exponent sum >= 1"));
                }
                Ok(Expr::Theta(a, b))
            }
            "poch" => {
                self.expect('(')?;
                let a = self.monomial()?;
                self.expect(';')?;
                let at = self.pos;
                let b = self.monomial()?;
                self.expect(')')?;
                if b.exponent == 0 {
                    return Err(self.error_at(at, "pochhammer base exponent must be >= 1"));
                }
                Ok(Expr::Poch(a, b))
            }
            "quadsum" => self.quadsum(start),
            "dissect" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(';')?;
                let at = self.pos;
                let m = self.small("dissection modulus")?;
                self.expect(';')?;
                let r = self.small("dissection residue")?;
                self.expect(')')?;
                if m == 0 || r >= m {
                    return Err(self.error_at(at, "dissection needs m >= 1 and 0 <= r < m"));
                }
                Ok(inner.dissect(m, r))
            }
            w if w.starts_with('f') && w.len() > 1 && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                match w[1..].parse::<u32>() {
                    Ok(0) => Err(self.error_at(start, "eta index must be >= 1")),
                    Ok(m) if !w[1..].starts_with('0') => Ok(Expr::Eta(m)),
                    Ok(_) => Err(self.error_at(start, format!("malformed eta symbol '{w}'"))),
                    Err(_) => Err(self.error_at(start, "eta index too large")),
                }
            }
            w => NamedSeries::parse(w)
                .map(Expr::Named)
                .ok_or_else(|| self.error_at(start, format!("unknown symbol '{w}'"))),
        }
    }

    fn q_exponent(&mut self) -> PResult<u64> {
        // `q` directly followed by `^` owns the exponent; a bare `q` is `q^1`.
        if self.rest().trim_start().starts_with('^') {
            self.eat('^');
            self.uint()
        } else {
            Ok(1)
        }
    }

    fn monomial(&mut self) -> PResult<SignedMonomial> {
        let sign = if self.eat('-') {
            Sign::Minus
        } else {
            self.eat('+');
            Sign::Plus
        };
        self.skip_ws();
        if !self.rest().starts_with('q') || self.rest()[1..].starts_with(|c: char| c.is_ascii_alphanumeric())
        {
            return Err(self.error("malformed monomial: expected (+|-)q^k"));
        }
        self.pos += 1;
        Ok(SignedMonomial { sign, exponent: self.q_exponent()? })
    }

    fn quadsum(&mut self, start: usize) -> PResult<Expr> {
        self.expect('(')?;
        let a = self.int()?;
        self.expect(',')?;
        let b = self.int()?;
        self.expect(',')?;
        let c = self.int()?;
        self.expect(';')?;
        self.skip_ws();
        let at = self.pos;
        let sign = match self.take_while(|ch| ch.is_ascii_alphanumeric() || ch == '-') {
            "plus" => SignMode::Plus,
            "altn" => SignMode::Alternating,
            "alt-tri-up" => SignMode::TriangularUp,
            "alt-tri-down" => SignMode::TriangularDown,
            other => return Err(self.error_at(at, format!("unknown sign mode '{other}'"))),
        };
        self.expect(';')?;
        self.skip_ws();
        let at = self.pos;
        let range = match self.take_while(|ch| !ch.is_whitespace() && ch != ')') {
            "n>=0" => SumRange::NonNegative,
            "n>=1" => SumRange::Positive,
            "n<=-1" => SumRange::Negative,
            "all" => SumRange::Bilateral,
            other => return Err(self.error_at(at, format!("unknown range '{other}'"))),
        };
        self.expect(')')?;
        if a <= 0 {
            return Err(self.error_at(start, "quadsum leading coefficient must be positive"));
        }
        Ok(Expr::QuadSum(QuadSumSpec { a, b, c, sign, range }))
    }
}
