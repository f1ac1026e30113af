//! Exact verification toolkit for the hyper-Kähler (anti-self-dual vacuum)
//! hierarchy: heavenly equations, tetrads and curvature, the recursion
//! operator, twistor series, hierarchy Lax systems and symplectic forms.

#![allow(clippy::needless_range_loop)]
pub mod chart;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod forms;
pub mod heavenly;
pub mod hierarchy;
pub mod jet;
pub mod parse;
pub mod poly;
pub mod recursion;
pub mod scalar;
pub mod symplectic;
pub mod twistor;
pub mod vfield;

pub use chart::{Chart, Point};
pub use error::{Error, Result};
pub use expr::Expr;
pub use jet::{Jet, JetSpace, MultiIndex};
pub use num_rational::BigRational;
pub use parse::parse_expression;
pub use scalar::{Mode, Scalar};
