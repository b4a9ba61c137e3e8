//! Symbolic set expressions, their unfolding into pointwise formulas, and a
//! finite-model checker for both sides.

mod eval;
mod expr;
mod formula;
mod parse;
mod unfold;

pub use eval::{
    check_soundness, eval_expr, eval_formula, eval_formula_with, eval_statement, trace_len_bound,
    FamilyValue, Model, SetValue,
};
pub use expr::{kind_of, render_expr, render_slots, Kind, SetExpr, Sig, Slot, Statement, Value};
pub use formula::{render, Binder, Formula, SetRef, Term};
pub use parse::{parse_model, parse_statement, Decls};
pub use unfold::unfold;
