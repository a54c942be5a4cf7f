//! Basis weights of the Bernstein, Poisson and negative-binomial families.

use crate::error::{Error, Result};

/// Hard ceiling on the number of series terms.
pub const MAX_TERMS: usize = 1_000_000;

/// `(k, w_k)` with `w_k = C(n,k) x^k (1−x)^{n−k}`, zero weights omitted.
pub fn bernstein(n: usize, x: f64) -> Vec<(usize, f64)> {
    if x <= 0.0 {
        return vec![(0, 1.0)];
    }
    if x >= 1.0 {
        return vec![(n, 1.0)];
    }
    let (lx, ly) = (x.ln(), (-x).ln_1p());
    let mut log_binom = 0.0;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            log_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let w = (log_binom + k as f64 * lx + (n - k) as f64 * ly).exp();
        if w > 0.0 {
            out.push((k, w));
        }
    }
    out
}

/// Truncated series of weights `w_k` with ratio `w_{k+1}/w_k = ratio(k)`.
///
/// Stops at the smallest `K` for which the geometric bound
/// `w_{K+1} / (1 − ratio(K+1))` on the tail mass falls below `tail`; this
/// requires the ratios to decrease eventually below one.
fn series(log_w0: f64, ratio: impl Fn(usize) -> f64, tail: f64) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    let mut log_w = log_w0;
    for k in 0..MAX_TERMS {
        let w = log_w.exp();
        if w > 0.0 {
            out.push((k, w));
        }
        let r = ratio(k);
        if r == 0.0 {
            return Ok(out);
        }
        let log_next = log_w + r.ln();
        let r_next = ratio(k + 1);
        if r_next < 1.0 && log_next.exp() / (1.0 - r_next) < tail {
            return Ok(out);
        }
        log_w = log_next;
    }
    Err(Error::Convergence {
        message: format!("series needs more than {MAX_TERMS} terms"),
        estimate: f64::NAN,
        error: f64::NAN,
    })
}

/// Poisson weights `e^{−nx}(nx)^k/k!`.
pub fn poisson(n: usize, x: f64, tail: f64) -> Result<Vec<(usize, f64)>> {
    let lambda = n as f64 * x;
    if lambda <= 0.0 {
        return Ok(vec![(0, 1.0)]);
    }
    series(-lambda, |k| lambda / (k as f64 + 1.0), tail)
}

/// Negative-binomial weights `C(n+k−1,k) x^k / (1+x)^{n+k}`.
pub fn baskakov(n: usize, x: f64, tail: f64) -> Result<Vec<(usize, f64)>> {
    if x <= 0.0 {
        return Ok(vec![(0, 1.0)]);
    }
    let q = x / (1.0 + x);
    let nf = n as f64;
    series(
        -nf * x.ln_1p(),
        |k| (nf + k as f64) / (k as f64 + 1.0) * q,
        tail,
    )
}

/// Weights of the multivariate Bernstein basis on `Δ_N`:
/// `n!/(α!(n−|α|)!) x^α (1−Σx)^{n−|α|}` for every multi-index `|α| ≤ n`.
pub fn simplex_bernstein(n: usize, x: &[f64]) -> Vec<(Vec<usize>, f64)> {
    let dim = x.len();
    let rest = (1.0 - x.iter().sum::<f64>()).max(0.0);
    let log_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let term = |alpha: &[usize]| -> f64 {
        let used: usize = alpha.iter().sum();
        let mut log_w = log_fact[n] - log_fact[n - used];
        for (&a, &xi) in alpha.iter().zip(x) {
            log_w -= log_fact[a];
            if a > 0 {
                if xi <= 0.0 {
                    return 0.0;
                }
                log_w += a as f64 * xi.ln();
            }
        }
        let r = n - used;
        if r > 0 {
            if rest <= 0.0 {
                return 0.0;
            }
            log_w += r as f64 * rest.ln();
        }
        log_w.exp()
    };
    let mut out = Vec::new();
    let mut alpha = vec![0usize; dim];
    loop {
        let w = term(&alpha);
        if w > 0.0 {
            out.push((alpha.clone(), w));
        }
        // Next multi-index with |α| ≤ n.
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            alpha[i] += 1;
            if alpha.iter().sum::<usize>() <= n {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}
