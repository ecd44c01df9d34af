//! Branch-and-prune solver that covers the solution set of a numerical
//! constraint problem with inner and boundary boxes.
//!
//! ```
//! use bcs_core::{model::parse_problem, search::{solve, Algorithm, SolveOptions}};
//!
//! let p = parse_problem("var x in [0, 1]; var y in [0, 1]; constraint x + y <= 1").unwrap();
//! let opts = SolveOptions::new(Algorithm::Uca6Plus, vec![0.1, 0.1]);
//! let paving = solve(&p, &opts).unwrap();
//! assert!(paving.stats.inner_volume > 0.3);
//! ```

pub mod interval;
pub mod contract;
pub mod model;
pub mod split;
pub mod evr;
pub mod search;
pub mod report;

pub use interval::{Interval, IntervalBox};
