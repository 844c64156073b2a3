//! Big-integer row kernels: inclusive prefix sums, arithmetic progressions and
//! reductions, each with a sequential and (feature `parallel`) a blocked rayon
//! implementation.
//!
//! Every kernel produces bit-identical output regardless of [`Execution`].

use num_bigint::BigUint;
use num_traits::Zero;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Rows shorter than this are always processed sequentially.
pub const PARALLEL_THRESHOLD: usize = 4096;

/// Chunk length used by the blocked parallel scan.
#[cfg(feature = "parallel")]
const CHUNK: usize = 2048;

/// How the wide per-row loops are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


impl Execution {
    #[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
    fn use_parallel(self, len: usize) -> bool {
        match self {
            Execution::Sequential => false,
            #[cfg(feature = "parallel")]
            Execution::Parallel => len >= PARALLEL_THRESHOLD,
        }
    }
}

/// Inclusive prefix sums: `out[i] = values[0] + ... + values[i]`.
pub fn prefix_sums(values: &[BigUint], exec: Execution) -> Vec<BigUint> {
    if exec.use_parallel(values.len()) {
        #[cfg(feature = "parallel")]
        return parallel::prefix_sums(values);
    }
    sequential::prefix_sums(values)
}

/// `[base + step, base + 2 step, ..., base + count * step]`.
pub fn progression(base: &BigUint, step: &BigUint, count: usize, exec: Execution) -> Vec<BigUint> {
    if exec.use_parallel(count) {
        #[cfg(feature = "parallel")]
        return parallel::progression(base, step, count);
    }
    sequential::progression(base, step, count)
}

pub fn sum(values: &[BigUint], exec: Execution) -> BigUint {
    if exec.use_parallel(values.len()) {
        #[cfg(feature = "parallel")]
        return values.par_iter().sum();
    }
    values.iter().sum()
}

pub mod sequential {
    use super::*;

    pub fn prefix_sums(values: &[BigUint]) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(values.len());
        let mut acc = BigUint::zero();
        for v in values {
            acc += v;
            out.push(acc.clone());
        }
        out
    }

    pub fn progression(base: &BigUint, step: &BigUint, count: usize) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(count);
        let mut acc = base.clone();
        for _ in 0..count {
            acc += step;
            out.push(acc.clone());
        }
        out
    }
}

#[cfg(feature = "parallel")]
pub mod parallel {
    use super::*;

    /// Blocked scan: chunk totals in parallel, a short sequential scan over the
    /// totals, then every chunk rescanned from its offset in parallel.
    pub fn prefix_sums(values: &[BigUint]) -> Vec<BigUint> {
        let totals: Vec<BigUint> = values.par_chunks(CHUNK).map(|c| c.iter().sum()).collect();
        let mut offsets = Vec::with_capacity(totals.len());
        let mut acc = BigUint::zero();
        for t in &totals {
            offsets.push(acc.clone());
            acc += t;
        }
        let mut out = vec![BigUint::zero(); values.len()];
        out.par_chunks_mut(CHUNK)
            .zip(values.par_chunks(CHUNK))
            .zip(offsets.par_iter())
            .for_each(|((dst, src), offset)| {
                let mut acc = offset.clone();
                for (d, v) in dst.iter_mut().zip(src) {
                    acc += v;
                    *d = acc.clone();
                }
            });
        out
    }

    pub fn progression(base: &BigUint, step: &BigUint, count: usize) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); count];
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk, dst)| {
            let mut acc = base + step * BigUint::from(chunk * CHUNK);
            for d in dst.iter_mut() {
                acc += step;
                *d = acc.clone();
            }
        });
        out
    }
}
