//! Small dense linear solves.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pivot magnitude below which a matrix is treated as singular.
pub const SINGULAR_PIVOT: f64 = 1e-12;

/// Solves `a · x = b` by LU decomposition with partial pivoting.
///
/// Fails with [`Error::SingularMassMatrix`] when a pivot falls below
/// [`SINGULAR_PIVOT`] in magnitude.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument(format!("expected a {n}x{n} matrix")));
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty pivot range");
        let pivot = a[pivot_row][col];
        if !(pivot.abs() >= T::lit(SINGULAR_PIVOT)) {
            return Err(Error::SingularMassMatrix { pivot: pivot.abs().as_f64() });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let delta = factor * a[col][k];
                a[row][k] = a[row][k] - delta;
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let tail = (row + 1..n).fold(T::zero(), |acc, k| acc + a[row][k] * x[k]);
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}
