//! Minimal dense linear algebra for the Newton solvers (systems of at most a
//! few dozen unknowns).

use crate::scalar::Real;

/// Solves `A x = b` in place by LU with partial pivoting.
///
/// `a` is row-major `n × n`; on return both `a` and `b` are overwritten and
/// `b` holds the solution. Returns `false` when a pivot collapses.
pub fn lu_solve<R: Real>(a: &mut [R], b: &mut [R], n: usize) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        // Pivot search.
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].abs();
        for row in col + 1..n {
            let mag = a[row * n + col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if !(pivot_mag > R::zero()) || !pivot_mag.is_finite() {
            return false;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == R::zero() {
                continue;
            }
            a[row * n + col] = R::zero();
            for k in col + 1..n {
                let v = a[col * n + k];
                a[row * n + k] -= factor * v;
            }
            b[row] -= factor * b[col];
        }
    }
    // Back substitution.
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
    }
    true
}

/// Euclidean norm.
pub fn norm2<R: Real>(v: &[R]) -> R {
    v.iter()
        .fold(R::zero(), |acc, &x| acc + x * x)
        .sqrt()
}

/// Max-abs norm.
pub fn norm_inf<R: Real>(v: &[R]) -> R {
    v.iter().fold(R::zero(), |acc, &x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_3x3_system() {
        // A = [[2,1,0],[1,3,1],[0,1,4]], x = [1,-2,3] → b = [0,-2,10]
        let mut a = vec![2.0_f64, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0];
        let mut b = vec![0.0, -2.0, 10.0];
        assert!(lu_solve(&mut a, &mut b, 3));
        assert!((b[0] - 1.0).abs() < 1e-14);
        assert!((b[1] + 2.0).abs() < 1e-14);
        assert!((b[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn needs_pivoting() {
        let mut a = vec![0.0_f64, 1.0, 1.0, 0.0];
        let mut b = vec![2.0, 3.0];
        assert!(lu_solve(&mut a, &mut b, 2));
        assert_eq!(b, vec![3.0, 2.0]);
    }

    #[test]
    fn rejects_singular_matrix() {
        let mut a = vec![1.0_f64, 2.0, 2.0, 4.0];
        let mut b = vec![1.0, 2.0];
        assert!(!lu_solve(&mut a, &mut b, 2));
    }

    #[test]
    fn norms() {
        assert_eq!(norm2(&[3.0_f64, 4.0]), 5.0);
        assert_eq!(norm_inf(&[-3.0_f64, 2.0]), 3.0);
    }
}
