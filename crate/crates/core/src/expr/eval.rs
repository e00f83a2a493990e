use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr::{Expr, SeriesCache};
use crate::qfactory::{self, SignedMonomial, ThetaForm};
use crate::series::{check_order, CoeffRing, TruncatedSeries};

/// Bottom-up evaluator with a per-instance memo of subexpressions.
///
/// An optional on-disk [`SeriesCache`] is consulted for the root expression
/// and for named generating functions, which dominate evaluation time.
pub struct Evaluator {
    ring: CoeffRing,
    memo: HashMap<(String, usize), TruncatedSeries>,
    cache: Option<SeriesCache>,
}

impl Evaluator {
    pub fn new(ring: CoeffRing) -> Self {
        Evaluator { ring, memo: HashMap::new(), cache: None }
    }

    pub fn with_cache(ring: CoeffRing, cache: SeriesCache) -> Self {
        Evaluator { ring, memo: HashMap::new(), cache: Some(cache) }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn evaluate(&mut self, e: &Expr, order: usize) -> Result<TruncatedSeries> {
        check_order(order)?;
        self.eval_node(e, order, true)
    }

    fn eval_node(&mut self, e: &Expr, order: usize, root: bool) -> Result<TruncatedSeries> {
        let key = (e.to_string(), order);
        if let Some(s) = self.memo.get(&key) {
            return Ok(s.clone());
        }
        let cacheable = root || matches!(e, Expr::Named(_));
        if cacheable {
            if let Some(cache) = &self.cache {
                if let Some(s) = cache.load(&key.0, order, self.ring)? {
                    self.memo.insert(key, s.clone());
                    return Ok(s);
                }
            }
        }
        let s = self.compute(e, order)?;
        if cacheable {
            if let Some(cache) = &self.cache {
                cache.store(&key.0, &s)?;
            }
        }
        self.memo.insert(key, s.clone());
        Ok(s)
    }

    fn compute(&mut self, e: &Expr, order: usize) -> Result<TruncatedSeries> {
        let ring = self.ring;
        match e {
            Expr::Int(n) => {
                let k = num_bigint::BigInt::from(*n);
                Ok(TruncatedSeries::one(ring, order).scale_big(&k))
            }
            Expr::QPow(k) => {
                let k = usize::try_from(*k).unwrap_or(usize::MAX);
                Ok(TruncatedSeries::monomial(ring, order, k, 1))
            }
            Expr::Eta(m) => qfactory::eta(*m, ring, order),
            Expr::Psi(t) => qfactory::false_theta_psi(
                SignedMonomial::minus(*t as u64),
                SignedMonomial::plus(1),
                ring,
                order,
            ),
            Expr::Theta(a, b) => qfactory::theta_f(*a, *b, ThetaForm::Sum, ring, order),
            Expr::Poch(a, b) => qfactory::pochhammer(*a, *b, ring, order),
            Expr::QuadSum(spec) => qfactory::quad_sum(spec, ring, order),
            Expr::Named(name) => qfactory::named_series(*name, ring, order),
            Expr::Dissect { inner, m, r } => {
                let (m, r) = (*m as usize, *r as usize);
                let inner_order = m
                    .checked_mul(order)
                    .and_then(|x| x.checked_add(r))
                    .ok_or(Error::OrderTooLarge(usize::MAX))?;
                check_order(inner_order)?;
                Ok(self.eval_node(inner, inner_order, false)?.dissect(m, r))
            }
            Expr::Neg(x) => Ok(self.eval_node(x, order, false)?.neg()),
            Expr::Add(l, r) => self.eval_node(l, order, false)?.try_add(&self.eval_node(r, order, false)?),
            Expr::Sub(l, r) => self.eval_node(l, order, false)?.try_sub(&self.eval_node(r, order, false)?),
            Expr::Mul(l, r) => self.eval_node(l, order, false)?.try_mul(&self.eval_node(r, order, false)?),
            Expr::Div(l, r) => self.eval_node(l, order, false)?.try_div(&self.eval_node(r, order, false)?),
            Expr::Pow(b, k) => self.eval_node(b, order, false)?.pow(*k),
        }
    }
}

/// Evaluates `e` to order `order` over the ring with the given modulus (0 = exact).
pub fn evaluate(e: &Expr, order: usize, modulus: u64) -> Result<TruncatedSeries> {
    Evaluator::new(CoeffRing::new(modulus)?).evaluate(e, order)
}

/// Parses and evaluates in one step.
pub fn evaluate_str(text: &str, order: usize, modulus: u64) -> Result<TruncatedSeries> {
    evaluate(&crate::expr::parse(text)?, order, modulus)
}
