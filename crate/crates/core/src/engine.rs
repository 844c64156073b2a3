//! Output-array construction.
//!
//! Row 1 is all ones on columns `0..=y_1`. For `n >= 2` and `1 <= k <= y_n`,
//! `A(n, k) = A(n, k-1) + A(n-1, k)` where `A(n-1, k)` reads as zero past
//! `y_{n-1}`; every column past `y_n` is zero. Equivalently row `n` is the
//! inclusive prefix sum of row `n-1`, frozen at column `y_{n-1}`.
//!
//! That freeze is what makes rows compressible: for `y_{n-1} < k <= y_n` the
//! entry equals `A(n, y_{n-1})`, so a [`Row`] keeps the explicit prefix
//! `0..=y_{n-1}` and a run-length plateau for the rest.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::polynomials::binomial_u;
pub use crate::scan::Execution;
use crate::scan;
use crate::sequence::{InputSequenceSpec, SequenceError, Violation};

/// Default cap on the logical width `y_n + 1` of any built row.
pub const DEFAULT_MAX_WIDTH: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("row {row} needs {required} columns, above the width limit of {limit}")]
    WidthLimitExceeded { row: usize, required: BigUint, limit: usize },
    #[error("invalid input sequence: {0}")]
    InvalidSpec(Violation),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("row {n} is outside the array (1..={n_rows})")]
    RowOutOfRange { n: usize, n_rows: usize },
    #[error("inconsistent array: {0}")]
    Inconsistent(String),
}

/// One plateau-compressed row: the explicit prefix followed by
/// `plateau_len` copies of `plateau_value`, then zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    explicit: Vec<BigUint>,
    plateau_value: BigUint,
    plateau_len: usize,
}

impl Row {
    pub fn from_parts(explicit: Vec<BigUint>, plateau_value: BigUint, plateau_len: usize) -> Self {
        Row { explicit, plateau_value, plateau_len }
    }

    pub fn explicit(&self) -> &[BigUint] {
        &self.explicit
    }

    pub fn plateau_value(&self) -> &BigUint {
        &self.plateau_value
    }

    pub fn plateau_len(&self) -> usize {
        self.plateau_len
    }

    /// Number of nonzero columns, `y_n + 1`.
    pub fn width(&self) -> usize {
        self.explicit.len() + self.plateau_len
    }

    /// `A(n, k)`; zero past the last nonzero column.
    pub fn get(&self, k: usize) -> BigUint {
        if k < self.explicit.len() {
            self.explicit[k].clone()
        } else if k < self.width() {
            self.plateau_value.clone()
        } else {
            BigUint::zero()
        }
    }

    /// The plateau-expanded nonzero columns.
    pub fn iter(&self) -> impl Iterator<Item = &BigUint> + '_ {
        self.explicit.iter().chain(std::iter::repeat_n(&self.plateau_value, self.plateau_len))
    }

    pub fn sum_with(&self, exec: Execution) -> BigUint {
        scan::sum(&self.explicit, exec) + &self.plateau_value * BigUint::from(self.plateau_len)
    }

    pub fn sum(&self) -> BigUint {
        self.sum_with(Execution::default())
    }
}

/// Streams rows `1..=n_rows`, holding only the previous row.
pub struct RowStream {
    y: Vec<BigUint>,
    y_usize: Vec<usize>,
    prev: Option<Row>,
    next: usize,
    max_width: usize,
    exec: Execution,
}

impl RowStream {
    pub fn new(
        spec: &InputSequenceSpec,
        n_rows: usize,
        max_width: usize,
        exec: Execution,
    ) -> Result<Self, EngineError> {
        spec.validate(n_rows).map_err(EngineError::InvalidSpec)?;
        let y = spec.prefix(n_rows)?;
        Ok(RowStream { y, y_usize: Vec::with_capacity(n_rows), prev: None, next: 1, max_width, exec })
    }

    /// `y_1..y_n` for the rows produced so far.
    pub fn y(&self) -> &[usize] {
        &self.y_usize
    }

    fn width_of(&self, n: usize) -> Result<usize, EngineError> {
        let yn = &self.y[n - 1];
        let required = yn + 1u32;
        match required.to_usize() {
            Some(w) if w <= self.max_width => Ok(w),
            _ => Err(EngineError::WidthLimitExceeded { row: n, required, limit: self.max_width }),
        }
    }

    /// Produces the next row, or `None` once `n_rows` rows have been produced
    /// or a row failed.
    pub fn advance(&mut self) -> Option<Result<&Row, EngineError>> {
        if self.next > self.y.len() {
            return None;
        }
        let n = self.next;
        let width = match self.width_of(n) {
            Ok(w) => w,
            Err(e) => {
                self.next = self.y.len() + 1;
                return Some(Err(e));
            }
        };
        let row = match self.prev.take() {
            None => Row { explicit: vec![BigUint::one(); width], plateau_value: BigUint::one(), plateau_len: 0 },
            Some(prev) => {
                let mut explicit = scan::prefix_sums(&prev.explicit, self.exec);
                let carried = explicit.last().cloned().unwrap_or_default();
                explicit.extend(scan::progression(&carried, &prev.plateau_value, prev.plateau_len, self.exec));
                let plateau_value = explicit.last().cloned().expect("row has column 0");
                let plateau_len = width - explicit.len();
                Row { explicit, plateau_value, plateau_len }
            }
        };
        self.y_usize.push(width - 1);
        self.next += 1;
        Some(Ok(self.prev.insert(row)))
    }
}

/// A fully materialised output array, rows `1..=n_rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputArray {
    y: Vec<usize>,
    rows: Vec<Row>,
}

impl OutputArray {
    /// Reassembles an array from stored parts, checking that each row spans
    /// exactly `y_n + 1` columns with its explicit prefix ending at `y_{n-1}`.
    pub fn from_parts(y: Vec<usize>, rows: Vec<Row>) -> Result<Self, EngineError> {
        if y.len() != rows.len() {
            return Err(EngineError::Inconsistent(format!("{} y terms for {} rows", y.len(), rows.len())));
        }
        for (i, (row, &yn)) in rows.iter().zip(&y).enumerate() {
            if row.width() != yn + 1 {
                return Err(EngineError::Inconsistent(format!(
                    "row {} spans {} columns, expected {}",
                    i + 1,
                    row.width(),
                    yn + 1
                )));
            }
            let expected = if i == 0 { yn + 1 } else { y[i - 1].min(yn) + 1 };
            if row.explicit.len() != expected {
                return Err(EngineError::Inconsistent(format!(
                    "row {} has {} explicit columns, expected {}",
                    i + 1,
                    row.explicit.len(),
                    expected
                )));
            }
        }
        Ok(OutputArray { y, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// `y_1..y_N` used to build the array.
    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> Result<&Row, EngineError> {
        if n == 0 || n > self.rows.len() {
            return Err(EngineError::RowOutOfRange { n, n_rows: self.rows.len() });
        }
        Ok(&self.rows[n - 1])
    }

    /// `A(n, k)`, zero for `k > y_n`.
    pub fn entry(&self, n: usize, k: usize) -> Result<BigUint, EngineError> {
        Ok(self.row(n)?.get(k))
    }

    /// `W(n)`.
    pub fn row_sum(&self, n: usize) -> Result<BigUint, EngineError> {
        Ok(self.row(n)?.sum())
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        self.rows.iter().map(Row::sum).collect()
    }
}

pub fn build(spec: &InputSequenceSpec, n_rows: usize, max_width: usize) -> Result<OutputArray, EngineError> {
    build_with(spec, n_rows, max_width, Execution::default())
}

pub fn build_with(
    spec: &InputSequenceSpec,
    n_rows: usize,
    max_width: usize,
    exec: Execution,
) -> Result<OutputArray, EngineError> {
    let mut stream = RowStream::new(spec, n_rows, max_width, exec)?;
    let mut rows = Vec::with_capacity(n_rows);
    while let Some(row) = stream.advance() {
        rows.push(row?.clone());
    }
    Ok(OutputArray { y: stream.y().to_vec(), rows })
}

/// `[W(1), ..., W(n_terms)]` using a two-row window.
pub fn output_sequence(
    spec: &InputSequenceSpec,
    n_terms: usize,
    max_width: usize,
) -> Result<Vec<BigUint>, EngineError> {
    output_sequence_with(spec, n_terms, max_width, Execution::default())
}

pub fn output_sequence_with(
    spec: &InputSequenceSpec,
    n_terms: usize,
    max_width: usize,
    exec: Execution,
) -> Result<Vec<BigUint>, EngineError> {
    let mut stream = RowStream::new(spec, n_terms, max_width, exec)?;
    let mut sums = Vec::with_capacity(n_terms);
    while let Some(row) = stream.advance() {
        sums.push(row?.sum_with(exec));
    }
    Ok(sums)
}

/// Entry of the maximal output array, `C(n-1+k, k)`.
pub fn maximal_entry(n: usize, k: usize) -> BigUint {
    assert!(n >= 1, "rows start at 1");
    binomial_u(n - 1 + k, k)
}

/// The first `max_col + 1` columns of rows `1..=n_rows`.
///
/// Columns `0..=k` of row `n` only depend on columns `0..=k` of row `n-1`, so
/// this is exact however wide the full rows are. Row `n` holds
/// `min(y_n, max_col) + 1` entries.
pub fn column_window(
    spec: &InputSequenceSpec,
    n_rows: usize,
    max_col: usize,
) -> Result<Vec<Vec<BigUint>>, EngineError> {
    spec.validate(n_rows).map_err(EngineError::InvalidSpec)?;
    let y = spec.prefix(n_rows)?;
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_rows);
    for yn in &y {
        let last = yn.to_usize().map_or(max_col, |v| v.min(max_col));
        let row = match rows.last() {
            None => vec![BigUint::one(); last + 1],
            Some(prev) => {
                let mut row = Vec::with_capacity(last + 1);
                let mut acc = BigUint::zero();
                for k in 0..=last {
                    if let Some(above) = prev.get(k) {
                        acc += above;
                    }
                    row.push(acc.clone());
                }
                row
            }
        };
        rows.push(row);
    }
    Ok(rows)
}
