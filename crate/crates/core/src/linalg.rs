//! Dense real linear solves with a conditioning check.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Systems whose 1-norm condition number exceeds this are treated as singular.
pub const MAX_CONDITION: f64 = 1e13;

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves a square system by partial-pivot LU. `rows` is row-major. Systems
/// whose 1-norm condition number exceeds [`MAX_CONDITION`] are rejected with
/// that number attached.
pub fn solve(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("expected a {n}x{n} system")));
    }
    let a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let lu = a.clone().lu();
    let inverse = lu.try_inverse().ok_or(Error::SingularSystem {
        condition: f64::INFINITY,
    })?;
    let condition = one_norm(&a) * one_norm(&inverse);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::SingularSystem { condition });
    }
    let x = lu
        .solve(&DVector::from_column_slice(rhs))
        .ok_or(Error::SingularSystem { condition })?;
    Ok(x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let s = solve(&[vec![2.0, 1.0], vec![1.0, 3.0]], &[3.0, 5.0]).unwrap();
        assert!((s[0] - 0.8).abs() < 1e-14);
        assert!((s[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_system_is_reported() {
        let err = solve(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { .. }));
    }
}
