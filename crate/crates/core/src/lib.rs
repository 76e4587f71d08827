//! Exact p-adic continued fractions in the Ruban and Browkin conventions,
//! with checks for the transcendence criteria and quantitative bounds built
//! on them.

pub mod cf;
pub mod context;
pub mod criteria;
pub mod digits;
pub mod error;
pub mod growth;
pub mod hensel;
pub mod rational;
pub mod report;
pub mod ridout;
pub mod structure;
pub mod surd;
pub mod valuation;
pub mod value;

pub use context::{Mode, PadicContext};
pub use digits::{digits, padic_floor_rational, PadicDigitExpansion};
pub use error::{Error, Result};
pub use hensel::{hensel_sqrt, Branch, SqrtResidues};
pub use rational::{parse_rational, vp, Rational};
pub use surd::{surd_valuation, QuadraticField, SurdElement, SurdEmbedding};
pub use valuation::ExtendedValuation;
pub use value::{padic_floor, Evaluator, PadicValue};
pub use report::CriterionReport;
