//! Binomials, exact rational polynomials and the column polynomials `p_k`.
//!
//! For an input sequence that is not eventually constant, column `k` of the
//! output array agrees with a degree-`k` polynomial in `n` from row
//! `N(k) + 1` on, where `N(k)` is the smallest `N` with `k <= y_{N+1}`.
//! [`column_polynomial`] recovers that polynomial exactly by Newton divided
//! differences over the rationals and checks it against further rows.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::engine::{self, EngineError, OutputArray};
use crate::sequence::InputSequenceSpec;

/// How far [`column_polynomial`] searches for `N(k)` by default.
pub const DEFAULT_SEARCH_HORIZON: usize = 10_000;

/// Extra rows checked after a fit by default.
pub const DEFAULT_VERIFY_EXTRA: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("no N <= {search_horizon} has {k} <= y_(N+1); the sequence may be eventually constant below {k}")]
    ThresholdNotFound { k: usize, search_horizon: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("column {k} polynomial gives {fitted} at row {n}, but A({n},{k}) = {actual}")]
    VerificationFailed { k: usize, n: usize, fitted: BigRational, actual: BigUint },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// `C(a, b)`, zero when `b < 0` or `b > a`.
///
/// Uses the falling-factorial product, so `a` may have thousands of bits as
/// long as `b` (or `a - b`) is small.
pub fn binomial(a: &BigInt, b: i64) -> BigUint {
    if b < 0 || BigInt::from(b) > *a {
        return BigUint::zero();
    }
    let a = a.magnitude();
    let mut b = b as u64;
    // C(a, b) = C(a, a - b): take the shorter product.
    if let Some(rest) = (a - BigUint::from(b)).to_u64() {
        b = b.min(rest);
    }
    let top = a - BigUint::from(b);
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc = acc * (&top + BigUint::from(i)) / BigUint::from(i);
    }
    acc
}

pub fn binomial_u(a: usize, b: usize) -> BigUint {
    binomial(&BigInt::from(a), b as i64)
}

/// Exact polynomial with rational coefficients in ascending degree order.
/// Trailing zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// From `(numerator, denominator)` pairs in ascending order.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &BigInt) -> BigRational {
        let x = BigRational::from_integer(x.clone());
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    pub fn evaluate_at(&self, x: i64) -> BigRational {
        self.evaluate(&BigInt::from(x))
    }

    /// `(numerator, denominator)` per coefficient, ascending, reduced.
    pub fn coefficient_pairs(&self) -> Vec<(BigInt, BigInt)> {
        self.coeffs.iter().map(|c| (c.numer().clone(), c.denom().clone())).collect()
    }

    /// Terms in ascending degree, e.g. `-1 + x/2 + x^2/2`.
    pub fn to_ascending_string(&self) -> String {
        render_terms(self.coeffs.iter().enumerate())
    }

    /// Terms in descending degree, e.g. `x^2/2 + x/2 - 1`.
    pub fn to_descending_string(&self) -> String {
        render_terms(self.coeffs.iter().enumerate().rev())
    }

    /// Integer polynomial over the least common denominator, e.g.
    /// `(x^2 + x - 2)/2`.
    pub fn to_common_denominator_string(&self) -> String {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        if lcm.is_one() {
            return self.to_descending_string();
        }
        let scaled: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| c * BigRational::from_integer(lcm.clone()))
            .collect();
        format!("({})/{}", render_terms(scaled.iter().enumerate().rev()), lcm)
    }
}

fn render_terms<'a>(terms: impl Iterator<Item = (usize, &'a BigRational)>) -> String {
    let mut out = String::new();
    for (deg, c) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let num = c.numer().abs();
        let den = c.denom();
        let power = match deg {
            0 => String::new(),
            1 => "x".to_string(),
            d => format!("x^{d}"),
        };
        if deg == 0 || !num.is_one() {
            out.push_str(&num.to_string());
        }
        out.push_str(&power);
        if !den.is_one() {
            out.push('/');
            out.push_str(&den.to_string());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_descending_string())
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RationalPolynomial::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

/// The unique polynomial of degree `< points.len()` through `points`
/// (distinct abscissae), by Newton divided differences.
pub fn interpolate(points: &[(BigInt, BigRational)]) -> RationalPolynomial {
    let xs: Vec<BigRational> = points.iter().map(|(x, _)| BigRational::from_integer(x.clone())).collect();
    let mut c: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    let m = c.len();
    for j in 1..m {
        for i in (j..m).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // Newton form to monomial form, innermost factor first.
    let mut poly = RationalPolynomial::zero();
    for i in (0..m).rev() {
        let shift = RationalPolynomial::new(vec![-xs[i].clone(), BigRational::one()]);
        poly = &(&poly * &shift) + &RationalPolynomial::constant(c[i].clone());
    }
    poly
}

/// Smallest `N >= 0` with `k <= y_{N+1}`, searching `N + 1 <= search_horizon`.
pub fn n_threshold(spec: &InputSequenceSpec, k: usize, search_horizon: usize) -> Result<usize, PolyError> {
    let limit = spec.horizon().map_or(search_horizon, |h| h.min(search_horizon));
    let target = BigUint::from(k);
    let mut len = 16.min(limit);
    let mut checked = 0;
    while checked < limit {
        let y = spec
            .prefix(len)
            .map_err(|e| PolyError::PreconditionViolated(e.to_string()))?;
        if let Some(i) = y[checked..].iter().position(|v| *v >= target) {
            return Ok(checked + i);
        }
        checked = len;
        len = (len * 2).min(limit);
    }
    Err(PolyError::ThresholdNotFound { k, search_horizon })
}

/// `A(n, k)` from row `N` alone:
/// `C(m+k-2, k) + sum_{j=1..k} C(m+k-2-j, k-j) A(N, j)` with `m = n - N + 1`
/// the position of row `n` counted from row `N`.
///
/// Requires `1 <= N`, `N + 1 <= array.n_rows()`, `k <= y_{N+1}` and
/// `n >= N + 1`; `n` itself may lie past the built rows.
pub fn closed_form_entry(array: &OutputArray, big_n: usize, n: usize, k: usize) -> Result<BigUint, PolyError> {
    if big_n == 0 || big_n + 1 > array.n_rows() {
        return Err(PolyError::PreconditionViolated(format!(
            "rows {} and {} must both be built (array has {})",
            big_n,
            big_n + 1,
            array.n_rows()
        )));
    }
    if k > array.y()[big_n] {
        return Err(PolyError::PreconditionViolated(format!(
            "k = {k} exceeds y_{} = {}",
            big_n + 1,
            array.y()[big_n]
        )));
    }
    if n < big_n + 1 {
        return Err(PolyError::PreconditionViolated(format!("n = {n} must be at least N + 1 = {}", big_n + 1)));
    }
    let m = n - big_n + 1;
    let row = array.row(big_n)?;
    let mut total = binomial_u(m + k - 2, k);
    for j in 1..=k {
        let a = row.get(j);
        if !a.is_zero() {
            total += binomial_u(m + k - 2 - j, k - j) * a;
        }
    }
    Ok(total)
}

/// Interpolates column `k` of `window` (rows `1..`, see
/// [`engine::column_window`]) through rows `start_row..=start_row + k`.
pub fn fit_column(window: &[Vec<BigUint>], k: usize, start_row: usize) -> RationalPolynomial {
    let points: Vec<(BigInt, BigRational)> = (start_row..=start_row + k)
        .map(|n| {
            let a = window[n - 1].get(k).cloned().unwrap_or_default();
            (BigInt::from(n), BigRational::from_integer(BigInt::from(a)))
        })
        .collect();
    interpolate(&points)
}

pub fn column_polynomial(
    spec: &InputSequenceSpec,
    k: usize,
    verify_extra: usize,
) -> Result<RationalPolynomial, PolyError> {
    column_polynomial_with(spec, k, verify_extra, DEFAULT_SEARCH_HORIZON)
}

/// Fits `p_k` through rows `N(k)+1 ..= N(k)+k+1` and checks it against the
/// next `verify_extra` rows before returning it.
pub fn column_polynomial_with(
    spec: &InputSequenceSpec,
    k: usize,
    verify_extra: usize,
    search_horizon: usize,
) -> Result<RationalPolynomial, PolyError> {
    let big_n = n_threshold(spec, k, search_horizon)?;
    let start = big_n + 1;
    let last = start + k + verify_extra;
    let window = engine::column_window(spec, last, k)?;
    let poly = fit_column(&window, k, start);
    for n in start + k + 1..=last {
        let actual = window[n - 1].get(k).cloned().unwrap_or_default();
        let fitted = poly.evaluate(&BigInt::from(n));
        if fitted != BigRational::from_integer(BigInt::from(actual.clone())) {
            return Err(PolyError::VerificationFailed { k, n, fitted, actual });
        }
    }
    Ok(poly)
}

/// Fits every column in `ks` independently; in parallel with the `parallel`
/// feature.
pub fn column_polynomials(
    spec: &InputSequenceSpec,
    ks: &[usize],
    verify_extra: usize,
) -> Vec<Result<RationalPolynomial, PolyError>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ks.par_iter().map(|&k| column_polynomial(spec, k, verify_extra)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ks.iter().map(|&k| column_polynomial(spec, k, verify_extra)).collect()
    }
}

/// True when `value` is an integer (denominator one).
pub fn is_integral(value: &BigRational) -> bool {
    value.denom().is_one()
}

/// Exact nonnegative integer value of a rational, if it is one.
pub fn to_biguint(value: &BigRational) -> Option<BigUint> {
    if !is_integral(value) || value.numer().sign() == Sign::Minus {
        return None;
    }
    Some(value.numer().magnitude().clone())
}
