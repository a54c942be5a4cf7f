use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two test functions with closed-form cell integrals under `√𝓛`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentFunction {
    /// `e₂(t) = t²`
    Square,
    /// `−e₁(t) = −t`
    NegIdentity,
}

/// `√n · (C)∫_{k/n}^{(k+1)/n} f d√𝓛` in closed form.
///
/// For `t²` this is `(15k²+20k+8)/(15n²)`, for `−t` it is `−(3k+1)/(3n)`.
pub fn choquet_moment_closed(k: u64, n: u64, which: MomentFunction) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("n must be at least 1"));
    }
    let (k, n) = (k as f64, n as f64);
    Ok(match which {
        MomentFunction::Square => (15.0 * k * k + 20.0 * k + 8.0) / (15.0 * n * n),
        MomentFunction::NegIdentity => -(3.0 * k + 1.0) / (3.0 * n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substituted_values() {
        assert_eq!(
            choquet_moment_closed(0, 1, MomentFunction::Square).unwrap(),
            8.0 / 15.0
        );
        assert!(
            (choquet_moment_closed(2, 3, MomentFunction::NegIdentity).unwrap() + 7.0 / 9.0).abs()
                < 1e-15
        );
        assert!(
            (choquet_moment_closed(1, 2, MomentFunction::Square).unwrap() - 43.0 / 60.0).abs()
                < 1e-15
        );
        assert!(choquet_moment_closed(0, 0, MomentFunction::Square).is_err());
    }
}
