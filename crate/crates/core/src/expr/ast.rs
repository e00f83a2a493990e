use std::fmt;

use crate::qfactory::{NamedSeries, QuadSumSpec, SignMode, SignedMonomial, SumRange};

/// Expression tree of the series DSL.
///
/// `Display` produces the canonical serialization: the unique string that
/// parses back to the same tree. It is also the cache key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(u64),
    /// `q^k`
    QPow(u64),
    /// `f_m`
    Eta(u32),
    /// `Psi(-q^t, q)`
    Psi(u32),
    Theta(SignedMonomial, SignedMonomial),
    Poch(SignedMonomial, SignedMonomial),
    QuadSum(QuadSumSpec),
    Named(NamedSeries),
    /// `sum_n x_{m n + r} q^n`
    Dissect {
        inner: Box<Expr>,
        m: u32,
        r: u32,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn pow(self, e: i64) -> Expr {
        Expr::Pow(Box::new(self), e)
    }

    pub fn dissect(self, m: u32, r: u32) -> Expr {
        Expr::Dissect { inner: Box::new(self), m, r }
    }

    /// Sum, term, factor, atom.
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) | Expr::Div(..) => 1,
            Expr::Pow(..) => 2,
            Expr::Neg(_) => 0,
            _ => 3,
        }
    }

    fn needs_parens(&self, level: u8, leading: bool) -> bool {
        match self {
            // A leading minus binds a whole term, so it is only unambiguous
            // at the start of a sum.
            Expr::Neg(_) => !(level == 0 && leading),
            e => e.level() < level,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, level: u8, leading: bool) -> fmt::Result {
        if self.needs_parens(level, leading) {
            write!(f, "(")?;
            self.write(f, 0, true)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::QPow(k) => write!(f, "q^{k}"),
            Expr::Eta(m) => write!(f, "f{m}"),
            Expr::Psi(t) => write!(f, "psi({t})"),
            Expr::Theta(a, b) => write!(f, "theta({a},{b})"),
            Expr::Poch(a, b) => write!(f, "poch({a};{b})"),
            Expr::QuadSum(s) => write!(
                f,
                "quadsum({},{},{};{};{})",
                s.a,
                s.b,
                s.c,
                sign_keyword(s.sign),
                range_keyword(s.range)
            ),
            Expr::Named(n) => write!(f, "{n}"),
            Expr::Dissect { inner, m, r } => {
                write!(f, "dissect(")?;
                inner.write(f, 0, true)?;
                write!(f, ";{m};{r})")
            }
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.write(f, 1, false)
            }
            Expr::Add(l, r) | Expr::Sub(l, r) => {
                l.write(f, 0, leading)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                r.write(f, 1, false)
            }
            Expr::Mul(l, r) | Expr::Div(l, r) => {
                l.write(f, 1, leading)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                r.write(f, 2, false)
            }
            Expr::Pow(b, e) => {
                b.write(f, 3, leading)?;
                write!(f, "^{e}")
            }
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;

            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0, true)
    }
}

pub(crate) fn sign_keyword(s: SignMode) -> &'static str {
    match s {
        SignMode::Plus => "plus",
        SignMode::Alternating => "altn",
        SignMode::TriangularUp => "alt-tri-up",
        SignMode::TriangularDown => "alt-tri-down",
    }
}

pub(crate) fn range_keyword(r: SumRange) -> &'static str {
    match r {
        SumRange::NonNegative => "n>=0",
        SumRange::Positive => "n>=1",
        SumRange::Negative => "n<=-1",
        SumRange::Bilateral => "all",
    }
}
