//! Backward-Euler convolution quadrature for the fractional operator of
//! order `1 - alpha`.
//!
//! The weights `b_j` are the Taylor coefficients of `(1 - z)^(1 - alpha)`.
//! A discrete fractional derivative of a sequence `v_1, v_2, ...` at step `n`
//! is `tau^(alpha - 1) * sum_{j=1}^{n} b_{n-j} v_j`.

use crate::error::{check_len, check_step, Error, Result};

/// Largest weight table [`cq_weights`] will allocate by default.
pub const DEFAULT_MAX_WEIGHTS: usize = 1 << 24;

/// Which quantity enters the convolution history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `alpha <= 1`: the history holds `u_j - u_0`.
    SubtractInitial,
    /// `alpha > 1`: the history holds `u_j`.
    PlainHistory,
}

/// Exponent `alpha` of the model, restricted to the open interval (0, 2).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `alpha == 1` belongs to the subtract-initial branch.
    pub fn branch(self) -> Branch {
        if self.0 <= 1.0 {
            Branch::SubtractInitial
        } else {
            Branch::PlainHistory
        }
    }
}

/// Convolution weights `b_0..=b_n` for a given order.
#[derive(Debug, Clone, PartialEq)]
pub struct CqWeights {
    alpha: FractionalOrder,
    b: Vec<f64>,
}

impl CqWeights {
    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.b
    }

    /// Number of stored weights (`n + 1`).
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    #[inline]
    pub fn get(&self, j: usize) -> f64 {
        self.b[j]
    }
}

/// Weights `b_0..=b_n` by the recurrence `b_j = b_{j-1} (j - 2 + alpha) / j`.
pub fn cq_weights(alpha: FractionalOrder, n: usize) -> Result<CqWeights> {
    cq_weights_with_limit(alpha, n, DEFAULT_MAX_WEIGHTS)
}

pub fn cq_weights_with_limit(alpha: FractionalOrder, n: usize, limit: usize) -> Result<CqWeights> {
    if n > limit {
        return Err(Error::TooManyWeights { requested: n, limit });
    }
    let a = alpha.value();
    let mut b = Vec::with_capacity(n + 1);
    b.push(1.0);
    let mut prev = 1.0;
    for j in 1..=n {
        let jf = j as f64;
        prev *= (jf - 2.0 + a) / jf;
        b.push(prev);
    }
    Ok(CqWeights { alpha, b })
}

/// `tau^(alpha - 1) * sum_{j=1}^{n} b_{n-j} v_j` for a history `v_1..v_n`.
pub fn fractional_convolve<V: AsRef<[f64]>>(
    weights: &CqWeights,
    history: &[V],
    tau: f64,
) -> Result<Vec<f64>> {
    check_step(tau)?;
    let n = history.len();
    if n == 0 {
        return Err(Error::Config("convolution history is empty".into()));
    }
    if weights.len() < n {
        return Err(Error::TooManyWeights { requested: n - 1, limit: weights.len() - 1 });
    }
    let dim = history[0].as_ref().len();
    let mut out = vec![0.0; dim];
    for (j, v) in history.iter().enumerate() {
        let v = v.as_ref();
        check_len(dim, v.len())?;
        let w = weights.get(n - 1 - j);
        axpy(w, v, &mut out);
    }
    let scale = tau.powf(weights.alpha().value() - 1.0);
    out.iter_mut().for_each(|x| *x *= scale);
    Ok(out)
}

/// Unscaled tail `sum_{j=1}^{n-1} b_{n-j} v_j` accumulated into `out`.
///
/// `history` holds `v_1..v_{n-1}` row-major with rows of length `out.len()`;
/// the current step `n` is `rows + 1`. This is the part of the convolution
/// that does not involve the unknown `v_n`.
pub(crate) fn convolve_tail(weights: &[f64], history: &[f64], out: &mut [f64]) {
    let dim = out.len();
    out.iter_mut().for_each(|x| *x = 0.0);
    if dim == 0 {
        return;
    }
    let rows = history.len() / dim;
    let n = rows + 1;
    for (j, row) in history.chunks_exact(dim).enumerate() {
        // row j holds v_{j+1}
        axpy(weights[n - 1 - j], row, out);
    }
}

#[inline]
fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `(v_n - v_prev) / tau`.
pub fn backward_difference(v_n: &[f64], v_prev: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_step(tau)?;
    check_len(v_n.len(), v_prev.len())?;
    Ok(v_n.iter().zip(v_prev).map(|(a, b)| (a - b) / tau).collect())
}
