//! Output arrays of nondecreasing integer input sequences.
//!
//! An input sequence `y_1 <= y_2 <= ...` of positive integers determines, for
//! every `n`, the set of *valid n-tuples* `(x_1, ..., x_n)` with `x_1 <= y_n`
//! and `x_{j+1} <= min(x_j, y_{n-j})`. The output array `A(n, k)` counts the
//! valid n-tuples whose first entry is `k`, and the output sequence `W(n)` is
//! its n-th row sum.
//!
//! The crate is organised around that pipeline:
//!
//! * [`sequence`] defines input sequences, the textual spec grammar and the
//!   built-in catalog.
//! * [`engine`] builds arrays with plateau-compressed big-integer rows.
//! * [`oracle`] counts valid tuples straight from their definition.
//! * [`polynomials`] holds binomials, the closed-form entry formula and the
//!   exact column-polynomial fits.
//! * [`analysis`] computes the top/middle/small row decomposition, the row-sum
//!   bounds and the bracket row-sum recurrence.
//! * [`io`] reads and writes b-files, JSON array documents and stripped
//!   sequence dumps.
//!
//! With the default `parallel` feature the wide inner loops (row scans, row
//! sums, bound sweeps, batch drivers) run on rayon; without it every path
//! runs sequentially and produces identical results.

pub mod analysis;
pub mod engine;
pub mod io;
pub mod oracle;
pub mod polynomials;
pub mod scan;
pub mod sequence;

mod error;

pub use analysis::{RowStats, BoundsReport};
pub use engine::{Execution, OutputArray, Row, DEFAULT_MAX_WIDTH};
pub use error::Error;
pub use polynomials::RationalPolynomial;
pub use sequence::{InputSequenceSpec, SequenceRecord};
