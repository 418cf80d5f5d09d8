//! Thomas algorithm for tridiagonal systems.

/// Solves `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]` in place.
/// `lower[0]` and `upper[n-1]` are ignored. `scratch` must have length `n`.
/// The system must be diagonally dominant; no pivoting is done.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) {
    let n = rhs.len();
    debug_assert!(diag.len() == n && lower.len() == n && upper.len() == n && scratch.len() >= n);
    if n == 0 {
        return;
    }
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    #[test]
    fn solves_small_system() {
        let lower = [0.0, -1.0, -1.0];
        let diag = [2.0, 2.0, 2.0];
        let upper = [-1.0, -1.0, 0.0];
        let mut rhs = [1.0, 0.0, 1.0];
        let mut scratch = [0.0; 3];
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch);
        for v in rhs {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn residual_is_small(
            x in proptest::collection::vec(-10.0f64..10.0, 1..40),
            r in 0.0f64..50.0,
        ) {
            let n = x.len();
            let lower = vec![-r; n];
            let upper = vec![-r; n];
            let diag = vec![1.0 + 2.0 * r; n];
            let mut b = apply(&lower, &diag, &upper, &x);
            let mut scratch = vec![0.0; n];
            solve_tridiagonal(&lower, &diag, &upper, &mut b, &mut scratch);
            for (a, e) in b.iter().zip(&x) {
                prop_assert!((a - e).abs() < 1e-9 * (1.0 + r));
            }
        }
    }
}
