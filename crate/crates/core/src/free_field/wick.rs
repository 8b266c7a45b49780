//! Sum over pairings for Gaussian families, with fermionic signs.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_PAIRING_CAP: usize = 8;

/// `Σ_pairings sign · Π pair(i, j)` over slots `0..n`.
///
/// `fermionic[i]` marks anticommuting slots; a pairing's sign is the parity
/// of the fermionic slots it reorders (the Pfaffian expansion). Pairs of a
/// fermionic with a bosonic slot must be zero in `pair`.
pub fn wick_sum<F>(n: usize, fermionic: &[bool], cap: usize, mut pair: F) -> Result<Complex64>
where
    F: FnMut(usize, usize) -> Result<Complex64>,
{
    if n > cap {
        return Err(Error::DegreeCap { degree: n, cap });
    }
    if n % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // Pairwise values are computed once up front.
    let mut table = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            table[i][j] = pair(i, j)?;
        }
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    Ok(expand(&mut remaining, fermionic, &table))
}

fn expand(remaining: &mut Vec<usize>, fermionic: &[bool], table: &[Vec<Complex64>]) -> Complex64 {
    if remaining.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let first = remaining.remove(0);
    let mut total = Complex64::new(0.0, 0.0);
    let mut crossed = 0usize;
    for pos in 0..remaining.len() {
        let j = remaining[pos];
        let v = table[first][j];
        if v != Complex64::new(0.0, 0.0) {
            let sign = if fermionic[first] && fermionic[j] && crossed % 2 == 1 { -1.0 } else { 1.0 };
            let partner = remaining.remove(pos);
            total += v * sign * expand(remaining, fermionic, table);
            remaining.insert(pos, partner);
        }
        if fermionic[j] {
            crossed += 1;
        }
    }
    remaining.insert(0, first);
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_equal_slots() {
        let v = wick_sum(4, &[false; 4], 8, |_, _| Ok(Complex64::new(2.0, 0.0))).unwrap();
        assert_eq!(v.re, 12.0);
    }

    #[test]
    fn pfaffian_of_four() {
        // Pf(A) = a01 a23 - a02 a13 + a03 a12
        let a = [[0.0, 1.0, 2.0, 3.0], [0.0, 0.0, 5.0, 7.0], [0.0, 0.0, 0.0, 11.0], [0.0; 4]];
        let v = wick_sum(4, &[true; 4], 8, |i, j| Ok(Complex64::new(a[i][j], 0.0))).unwrap();
        assert_eq!(v.re, 1.0 * 11.0 - 2.0 * 7.0 + 3.0 * 5.0);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            wick_sum(10, &[false; 10], 8, |_, _| Ok(Complex64::new(1.0, 0.0))),
            Err(Error::DegreeCap { .. })
        ));
    }
}
