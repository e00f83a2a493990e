//! The series expression language: syntax tree, parser, evaluator and the
//! on-disk coefficient cache.

mod ast;
mod cache;
mod eval;
mod parse;

pub use ast::Expr;
pub use cache::{CacheEntry, SeriesCache, CACHE_TAG};
pub use eval::{evaluate, evaluate_str, Evaluator};
pub use parse::{parse, ParseError};
