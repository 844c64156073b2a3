//! Ground truth from the definition of a valid n-tuple.
//!
//! Nothing here uses the row recurrence: tuples are enumerated position by
//! position under `x_1 <= y_n` and `x_{j+1} <= min(x_j, y_{n-j})`, and the
//! counting variant memoises that same descent on `(position, cap)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::sequence::{InputSequenceSpec, SequenceError, Violation};

/// Default cap on materialised tuples, and on memo states when counting.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("invalid input sequence: {0}")]
    InvalidSpec(Violation),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// A valid n-tuple `(x_1, ..., x_n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValidTuple(pub Vec<usize>);

impl ValidTuple {
    pub fn entries(&self) -> &[usize] {
        &self.0
    }
}

/// Digits run together when every entry is a single digit (`53211`),
/// comma-separated otherwise.
impl fmt::Display for ValidTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.0.iter().all(|&x| x < 10);
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Per-position caps: `caps[0] = y_n`, `caps[j] = y_{n-j}`. Terms too large
/// for a machine word saturate; such tuples could never be enumerated anyway.
fn caps(spec: &InputSequenceSpec, n: usize) -> Result<Vec<usize>, OracleError> {
    spec.validate(n).map_err(OracleError::InvalidSpec)?;
    let y = spec.prefix(n)?;
    Ok(y.iter().rev().map(|v| v.to_usize().unwrap_or(usize::MAX)).collect())
}

pub fn enumerate_valid(
    spec: &InputSequenceSpec,
    n: usize,
    first_entry: Option<usize>,
) -> Result<Vec<ValidTuple>, OracleError> {
    enumerate_valid_with_budget(spec, n, first_entry, DEFAULT_BUDGET)
}

/// All valid n-tuples (optionally with `x_1 = first_entry`), in
/// lexicographically descending order.
pub fn enumerate_valid_with_budget(
    spec: &InputSequenceSpec,
    n: usize,
    first_entry: Option<usize>,
    budget: usize,
) -> Result<Vec<ValidTuple>, OracleError> {
    let caps = caps(spec, n)?;
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let firsts: Vec<usize> = match first_entry {
        Some(k) if k > caps[0] => return Ok(out),
        Some(k) => vec![k],
        None => {
            if caps[0] >= budget {
                return Err(OracleError::BudgetExceeded { budget });
            }
            (0..=caps[0]).rev().collect()
        }
    };
    let mut current = Vec::with_capacity(n);
    for x1 in firsts {
        current.push(x1);
        descend(&caps, &mut current, &mut out, budget)?;
        current.pop();
    }
    Ok(out)
}

fn descend(
    caps: &[usize],
    current: &mut Vec<usize>,
    out: &mut Vec<ValidTuple>,
    budget: usize,
) -> Result<(), OracleError> {
    let j = current.len();
    if j == caps.len() {
        if out.len() == budget {
            return Err(OracleError::BudgetExceeded { budget });
        }
        out.push(ValidTuple(current.clone()));
        return Ok(());
    }
    let cap = current[j - 1].min(caps[j]);
    for x in (0..=cap).rev() {
        current.push(x);
        descend(caps, current, out, budget)?;
        current.pop();
    }
    Ok(())
}

/// Memoised count of completions, keyed on (position, cap).
struct Counter<'a> {
    caps: &'a [usize],
    memo: HashMap<(usize, usize), BigUint>,
    budget: usize,
}

impl Counter<'_> {
    /// Number of ways to fill positions `j..n` (0-based) when the entry at
    /// position `j` may be at most `cap`.
    fn fill(&mut self, j: usize, cap: usize) -> Result<BigUint, OracleError> {
        if j == self.caps.len() {
            return Ok(BigUint::one());
        }
        if let Some(v) = self.memo.get(&(j, cap)) {
            return Ok(v.clone());
        }
        if self.memo.len() >= self.budget {
            return Err(OracleError::BudgetExceeded { budget: self.budget });
        }
        let mut total = BigUint::zero();
        for x in 0..=cap {
            total += self.fixed(j, x)?;
        }
        self.memo.insert((j, cap), total.clone());
        Ok(total)
    }

    /// Number of valid tuples whose entry at position `j` equals `x`.
    fn fixed(&mut self, j: usize, x: usize) -> Result<BigUint, OracleError> {
        match self.caps.get(j + 1) {
            None => Ok(BigUint::one()),
            Some(&next) => self.fill(j + 1, x.min(next)),
        }
    }
}

/// `A(n, k)` by counting valid n-tuples with `x_1 = k`.
pub fn count_valid(spec: &InputSequenceSpec, n: usize, k: usize) -> Result<BigUint, OracleError> {
    count_valid_with_budget(spec, n, k, DEFAULT_BUDGET)
}

pub fn count_valid_with_budget(
    spec: &InputSequenceSpec,
    n: usize,
    k: usize,
    budget: usize,
) -> Result<BigUint, OracleError> {
    let caps = caps(spec, n)?;
    if n == 0 || k > caps[0] {
        return Ok(BigUint::zero());
    }
    Counter { caps: &caps, memo: HashMap::new(), budget }.fixed(0, k)
}

/// `[A(n, 0), ..., A(n, y_n)]` from one shared memo table.
pub fn count_columns(spec: &InputSequenceSpec, n: usize) -> Result<Vec<BigUint>, OracleError> {
    let caps = caps(spec, n)?;
    if caps[0] >= DEFAULT_BUDGET {
        return Err(OracleError::BudgetExceeded { budget: DEFAULT_BUDGET });
    }
    let mut counter = Counter { caps: &caps, memo: HashMap::new(), budget: DEFAULT_BUDGET };
    (0..=caps[0]).map(|k| counter.fixed(0, k)).collect()
}

/// `W(n)`, the number of valid n-tuples.
pub fn count_all(spec: &InputSequenceSpec, n: usize) -> Result<BigUint, OracleError> {
    let caps = caps(spec, n)?;
    if n == 0 {
        return Ok(BigUint::one());
    }
    Counter { caps: &caps, memo: HashMap::new(), budget: DEFAULT_BUDGET }.fill(0, caps[0])
}
