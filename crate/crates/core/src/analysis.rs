//! Row-sum analytics.
//!
//! * The three-part split of `W(n)` into the repeated top value (`T`), the
//!   middle terms `W(n-1) - k W(n-2)` (`M`) and the remainder (`S`).
//! * The two-sided row-sum bounds and the entrywise Pascal bounds.
//! * Heinz's recurrence for the bracket sequence `y_n = 2^(n-1)`.
//! * The map `Φ` from an input sequence to its output sequence.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::engine::{self, EngineError, RowStream, DEFAULT_MAX_WIDTH};
use crate::polynomials::{binomial, binomial_u};
use crate::scan::Execution;
use crate::sequence::{InputSequenceSpec, SequenceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("the row decomposition needs n >= 3, got {n}")]
    NTooSmall { n: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// `W(n) = T + M + S` as exact fractions of `W(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowStats {
    pub n: usize,
    pub top: BigRational,
    pub middle: BigRational,
    pub small: BigRational,
    /// `R = y_{n-1} - y_{n-2} + 1`.
    pub middle_term_count: BigUint,
}

impl RowStats {
    /// From `[y_{n-2}, y_{n-1}, y_n]` and `[W(n-2), W(n-1), W(n)]`.
    pub fn from_row_sums(n: usize, y: [&BigUint; 3], w: [&BigUint; 3]) -> Self {
        let [y2, y1, y0] = y.map(|v| BigInt::from(v.clone()));
        let [w2, w1, w0] = w.map(|v| BigInt::from(v.clone()));
        let r: BigInt = &y1 - &y2 + 1;
        let top = BigRational::new((BigInt::one() + &y0 - &y1) * &w1, w0.clone());
        // sum_{k=1..R} (W(n-1) - k W(n-2)) without iterating over R terms.
        let middle_sum = &r * &w1 - &w2 * (&r * (&r + 1) / 2);
        let middle = BigRational::new(middle_sum, w0);
        let small = BigRational::one() - &top - &middle;
        RowStats {
            n,
            top,
            middle,
            small,
            middle_term_count: r.to_biguint().expect("nondecreasing input"),
        }
    }

    pub fn top_decimal(&self, digits: usize) -> String {
        decimal(&self.top, digits)
    }

    pub fn middle_decimal(&self, digits: usize) -> String {
        decimal(&self.middle, digits)
    }

    pub fn small_decimal(&self, digits: usize) -> String {
        decimal(&self.small, digits)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "T": self.top.to_string(),
            "M": self.middle.to_string(),
            "S": self.small.to_string(),
            "R": self.middle_term_count.to_string(),
            "approx": {
                "T": self.top_decimal(15),
                "M": self.middle_decimal(15),
                "S": self.small_decimal(15),
            },
        })
    }
}

impl fmt::Display for RowStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "T = {}  (~ {})", self.top, self.top_decimal(15))?;
        writeln!(f, "M = {}  (~ {})", self.middle, self.middle_decimal(15))?;
        writeln!(f, "S = {}  (~ {})", self.small, self.small_decimal(15))?;
        write!(f, "R = {}", self.middle_term_count)
    }
}

/// `value` rounded half away from zero to `digits` decimal places.
pub fn decimal(value: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let num = value.numer().abs() * &scale * 2 + value.denom();
    let scaled: BigInt = num / (value.denom() * 2);
    let text = scaled.to_string();
    let (int_part, frac_part) = if digits == 0 {
        (text, String::new())
    } else if text.len() > digits {
        let (a, b) = text.split_at(text.len() - digits);
        (a.to_string(), b.to_string())
    } else {
        ("0".to_string(), format!("{text:0>digits$}"))
    };
    let sign = if value.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn stats(spec: &InputSequenceSpec, n: usize) -> Result<RowStats, AnalysisError> {
    stats_with(spec, n, DEFAULT_MAX_WIDTH)
}

/// Row decomposition from the streamed output sequence.
pub fn stats_with(spec: &InputSequenceSpec, n: usize, max_width: usize) -> Result<RowStats, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::NTooSmall { n });
    }
    let w = engine::output_sequence(spec, n, max_width)?;
    let y = spec.prefix(n)?;
    Ok(RowStats::from_row_sums(
        n,
        [&y[n - 3], &y[n - 2], &y[n - 1]],
        [&w[n - 3], &w[n - 2], &w[n - 1]],
    ))
}

/// `T = (n+2)/(2n+1)`, `M = (n+2)(5n-7)/(4(2n+1)(2n-1))`, `S = 1 - T - M`
/// for the identity input.
pub fn catalan_stats_closed_form(n: usize) -> Result<RowStats, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::NTooSmall { n });
    }
    let n = n as i64;
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let top = q(n + 2, 2 * n + 1);
    let middle = q((n + 2) * (5 * n - 7), 4 * (2 * n + 1) * (2 * n - 1));
    let small = BigRational::one() - &top - &middle;
    Ok(RowStats { n: n as usize, top, middle, small, middle_term_count: BigUint::from(2u32) })
}

fn y_with_zero(spec: &InputSequenceSpec, n: usize) -> Result<Vec<BigUint>, SequenceError> {
    let mut y = vec![BigUint::zero()];
    if n > 0 {
        y.extend(spec.prefix(n)?);
    }
    Ok(y)
}

/// `prod_{k=0}^{n-1} (1 + y_{k+1} - y_k)` with `y_0 = 0`.
pub fn row_sum_lower_bound(spec: &InputSequenceSpec, n: usize) -> Result<BigUint, SequenceError> {
    let y = y_with_zero(spec, n)?;
    Ok(y.windows(2).map(|p| BigUint::one() + &p[1] - &p[0]).product())
}

/// `prod_{k=1}^{n} (1 + y_k)`.
pub fn row_sum_upper_bound_product(spec: &InputSequenceSpec, n: usize) -> Result<BigUint, SequenceError> {
    let y = y_with_zero(spec, n)?;
    Ok(y[1..].iter().map(|v| v + 1u32).product())
}

/// Entry bounds `(min(y_{n-1}+1, k+1), C(n-1+k, k))` for `k <= y_n`.
///
/// Row 1 is all ones, so its lower bound is 1. Past `y_n` the entry is zero
/// and the lower bound reported is 0.
pub fn pascal_bounds(spec: &InputSequenceSpec, n: usize, k: usize) -> Result<(BigUint, BigUint), SequenceError> {
    let y = y_with_zero(spec, n)?;
    let upper = engine::maximal_entry(n, k);
    let lower = if BigUint::from(k) > y[n] {
        BigUint::zero()
    } else if n == 1 {
        BigUint::one()
    } else {
        (&y[n - 1] + 1u32).min(BigUint::from(k + 1))
    };
    Ok((lower, upper))
}

/// `C(n + y_n, y_n)`.
pub fn row_sum_pascal_bound(spec: &InputSequenceSpec, n: usize) -> Result<BigUint, SequenceError> {
    let yn = spec.term(n)?;
    Ok(binomial(&BigInt::from(yn + n), n as i64))
}

/// `[W(1), ..., W(n_max)]` for `y_n = 2^(n-1)` via
/// `W(n) = sum_{j<n} W(j) (-1)^(n-j+1) C(1 + 2^j, n-j)`, `W(0) = 1`.
pub fn heinz_row_sums(n_max: usize) -> Vec<BigUint> {
    heinz_row_sums_with(n_max, Execution::default())
}

pub fn heinz_row_sums_with(n_max: usize, exec: Execution) -> Vec<BigUint> {
    let mut w: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=n_max {
        let term = |j: usize| {
            let c = BigInt::from(binomial(&((BigInt::one() << j) + 1), (n - j) as i64));
            let t = &w[j] * c;
            if (n - j) % 2 == 1 { t } else { -t }
        };
        let total: BigInt = match exec {
            Execution::Sequential => (0..n).map(term).sum(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(term).sum()
            }
        };
        w.push(total);
    }
    w.into_iter()
        .skip(1)
        .map(|v| v.to_biguint().expect("row sums are positive"))
        .collect()
}

/// Row decomposition of the bracket sequence from Heinz row sums alone.
pub fn bracket_stats_via_heinz(n: usize) -> Result<RowStats, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::NTooSmall { n });
    }
    let w = heinz_row_sums(n);
    let y = |i: usize| BigUint::one() << (i - 1);
    Ok(RowStats::from_row_sums(
        n,
        [&y(n - 2), &y(n - 1), &y(n)],
        [&w[n - 3], &w[n - 2], &w[n - 1]],
    ))
}

/// `Φ(spec)` truncated to `n_terms`, as an explicit spec.
pub fn phi(spec: &InputSequenceSpec, n_terms: usize) -> Result<InputSequenceSpec, EngineError> {
    phi_with(spec, n_terms, DEFAULT_MAX_WIDTH)
}

pub fn phi_with(spec: &InputSequenceSpec, n_terms: usize, max_width: usize) -> Result<InputSequenceSpec, EngineError> {
    Ok(InputSequenceSpec::explicit(engine::output_sequence(spec, n_terms, max_width)?))
}

fn as_strings<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    RowSumLowerProduct,
    RowSumUpperProduct,
    RowSumPascal,
    EntryLower,
    EntryUpper,
}

/// A bound that failed; `value` is the offending quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub n: usize,
    pub k: Option<usize>,
    pub kind: BoundKind,
    #[serde(serialize_with = "as_strings")]
    pub value: BigUint,
    #[serde(serialize_with = "as_strings")]
    pub bound: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub spec: String,
    pub n_max: usize,
    pub rows_checked: usize,
    pub entries_checked: u64,
    pub violation: Option<BoundViolation>,
    /// Why the sweep stopped before `n_max`, if it did.
    pub stopped: Option<String>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.stopped.is_none() && self.rows_checked == self.n_max
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} of {} rows, {} entries checked",
            self.spec, self.rows_checked, self.n_max, self.entries_checked
        )?;
        if let Some(v) = &self.violation {
            let at = v.k.map_or(format!("row {}", v.n), |k| format!("A({}, {k})", v.n));
            write!(f, "; violation {:?} at {at}: {} against bound {}", v.kind, v.value, v.bound)?;
        }
        if let Some(reason) = &self.stopped {
            write!(f, "; stopped: {reason}")?;
        }
        if self.passed() {
            write!(f, "; ok")?;
        }
        Ok(())
    }
}

pub fn check_bounds(spec: &InputSequenceSpec, n_max: usize) -> BoundsReport {
    check_bounds_with(spec, n_max, DEFAULT_MAX_WIDTH, Execution::default())
}

/// Streams rows `1..=n_max` and checks both row-sum bounds and the entry
/// bounds on every stored entry.
///
/// Along a plateau the entry is constant while the lower bound is already at
/// its maximum `y_{n-1} + 1` and the upper bound only grows, so the first
/// plateau column stands for the whole run.
pub fn check_bounds_with(
    spec: &InputSequenceSpec,
    n_max: usize,
    max_width: usize,
    exec: Execution,
) -> BoundsReport {
    let mut report = BoundsReport {
        spec: spec.to_string(),
        n_max,
        rows_checked: 0,
        entries_checked: 0,
        violation: None,
        stopped: None,
    };
    let mut stream = match RowStream::new(spec, n_max, max_width, exec) {
        Ok(s) => s,
        Err(e) => {
            report.stopped = Some(e.to_string());
            return report;
        }
    };
    let mut lower_prod = BigUint::one();
    let mut upper_prod = BigUint::one();
    let mut n = 0;
    let mut prev_y = 0;
    loop {
        let row = match stream.advance() {
            None => break,
            Some(Err(e)) => {
                report.stopped = Some(e.to_string());
                break;
            }
            Some(Ok(row)) => row,
        };
        n += 1;
        let yn = row.width() - 1;
        let prev = std::mem::replace(&mut prev_y, yn);
        lower_prod *= BigUint::from(1 + yn - prev);
        upper_prod *= BigUint::from(1 + yn);
        let w = row.sum_with(exec);
        let pascal = binomial_u(n + yn, n);
        let fail = |kind, k, value: &BigUint, bound: &BigUint| BoundViolation {
            n,
            k,
            kind,
            value: value.clone(),
            bound: bound.clone(),
        };
        let violation = if w < lower_prod {
            Some(fail(BoundKind::RowSumLowerProduct, None, &w, &lower_prod))
        } else if w > upper_prod {
            Some(fail(BoundKind::RowSumUpperProduct, None, &w, &upper_prod))
        } else if w > pascal {
            Some(fail(BoundKind::RowSumPascal, None, &w, &pascal))
        } else {
            let floor = if n == 1 { 1 } else { prev + 1 };
            let stored = row.explicit().iter().chain(
                (row.plateau_len() > 0).then_some(row.plateau_value()),
            );
            // C(n-1+k, k), advanced by C(n+k, k+1) = C(n-1+k, k) (n+k)/(k+1).
            let mut upper = BigUint::one();
            let mut found = None;
            for (k, a) in stored.enumerate() {
                if k > 0 {
                    upper = upper * BigUint::from(n - 1 + k) / BigUint::from(k);
                }
                report.entries_checked += 1;
                let lower = BigUint::from(floor.min(k + 1));
                if *a < lower {
                    found = Some(fail(BoundKind::EntryLower, Some(k), a, &lower));
                    break;
                }
                if *a > upper {
                    found = Some(fail(BoundKind::EntryUpper, Some(k), a, &upper));
                    break;
                }
            }
            found
        };
        report.rows_checked = n;
        if violation.is_some() {
            report.violation = violation;
            break;
        }
    }
    report
}

/// [`check_bounds`] over many specs; in parallel with the `parallel` feature.
pub fn check_bounds_many(specs: &[InputSequenceSpec], n_max: usize, max_width: usize) -> Vec<BoundsReport> {
    let one = |s: &InputSequenceSpec| {
        let n = s.horizon().map_or(n_max, |h| h.min(n_max));
        check_bounds_with(s, n, max_width, Execution::Sequential)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        specs.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        specs.iter().map(one).collect()
    }
}
