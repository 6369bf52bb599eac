//! Exact polynomial and truncated power-series arithmetic over Q(i).

mod newton;
mod polynomial;
mod rational;
mod series;
mod table;

pub use newton::{newton_implicit_solve, newton_solve_series, residual, solve_named};
pub use polynomial::{Monomial, MultiPolynomial};
pub use rational::RationalFunction;
pub use series::TruncatedSeries;
pub use table::{same_table, Table, TableBuilder, VarKind, Variable, VariableTable};
