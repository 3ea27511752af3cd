//! Brute-force reference for `W_1` between equal-size uniform measures.
//!
//! Enumerates all `N!` permutations (Heap's algorithm); an optimal plan
//! between uniform measures of equal size is always a permutation. Kept
//! separate from the solvers so it can serve as an independent check.

use crate::error::{Error, Result};
use crate::geometry::Manifold;
use crate::measures::EmpiricalMeasure;

/// Largest size accepted by [`permutation_w1`].
pub const MAX_ORACLE_SIZE: usize = 9;

pub fn permutation_w1(m: &Manifold, rho: &EmpiricalMeasure, sigma: &EmpiricalMeasure) -> Result<f64> {
    let n = rho.len();
    if n != sigma.len() || !rho.is_uniform() || !sigma.is_uniform() {
        return Err(Error::InvalidMeasure(
            "the permutation oracle needs equal sizes and uniform weights".into(),
        ));
    }
    if n > MAX_ORACLE_SIZE {
        return Err(Error::InvalidMeasure(format!(
            "the permutation oracle is limited to {MAX_ORACLE_SIZE} atoms"
        )));
    }
    let mut d = vec![0.0; n * n];
    for (i, x) in rho.points().iter().enumerate() {
        for (j, y) in sigma.points().iter().enumerate() {
            d[i * n + j] = m.distance(x, y)?;
        }
    }
    let w = 1.0 / n as f64;
    let eval = |perm: &[usize]| -> f64 { perm.iter().enumerate().map(|(i, &j)| w * d[i * n + j]).sum() };

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = eval(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(eval(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}
