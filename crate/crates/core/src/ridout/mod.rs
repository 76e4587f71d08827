//! Constants, solution-count bounds and solution enumeration for the
//! quantitative p-adic Roth inequality.

pub(crate) mod fixed;
mod bounds;
mod enumerate;
mod lognum;
mod minpoly;
mod params;

pub use bounds::{count_bound, count_bound_for, BoundReport, BoundVariant};
pub use enumerate::{enumerate_solutions, gap_law_check, InequalityVariant, SolutionRecord};
pub use lognum::LogNumber;
pub use minpoly::MinimalPolynomial;
pub use params::{ridout_m, ridout_params, smallest_k, smallest_l, RidoutConditions, RidoutParams, EXACT_M_LIMIT};
