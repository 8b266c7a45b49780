//! The open cone around the diagonal of `ℝᴺ` dual to the positive orthant.

use crate::error::{Error, Result};

/// `(Σ aᵢ)/‖a‖ > √(N - 1)`.
pub fn cone_member(a: &[f64]) -> Result<bool> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let sum: f64 = a.iter().sum();
    Ok(sum / norm > ((a.len() as f64) - 1.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_boundary() {
        for d in 1..8 {
            assert!(cone_member(&vec![1.0; d]).unwrap());
        }
        assert!(!cone_member(&[1.0, 0.0]).unwrap());
        assert!(!cone_member(&[1.0, 1.0, -5.0]).unwrap());
        assert!(matches!(cone_member(&[0.0, 0.0]), Err(Error::ZeroVector)));
    }
}
