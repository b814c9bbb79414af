//! Scalar root finding, one-dimensional minimization, and the Euclidean
//! simplex projection.
//!
//! These are the only numerical primitives the crate needs beyond plain
//! arithmetic: every special constant is a bisection root, every
//! one-dimensional optimum is bracketed and golden-sectioned, and the
//! weight optimizer projects its iterates back onto the probability
//! simplex after each gradient step.

use crate::error::{Error, Result};

/// Inverse golden ratio, the interval reduction factor of golden-section
/// search.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Root of `f` on `[lo, hi]` by bisection, to within `xtol` in the abscissa.
///
/// The bracket is verified first: `f(lo)` and `f(hi)` must have opposite
/// signs (an exact zero at either end is returned immediately). Bisection is
/// deliberately preferred over faster schemes here — the functions involved
/// are cheap, and bisection's convergence is unconditional.
///
/// # Errors
///
/// Returns [`Error::RootBracket`] when the bracket does not straddle a sign
/// change, and [`Error::InvalidParameter`] for an empty interval or a
/// nonpositive tolerance.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidParameter {
            name: "lo",
            message: "bracket must satisfy lo < hi",
            value: lo,
        });
    }
    if xtol.is_nan() || xtol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "xtol",
            message: "tolerance must be positive",
            value: xtol,
        });
    }
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootBracket { lo, hi, f_lo, f_hi });
    }
    let (mut a, mut b, mut f_a) = (lo, hi, f_lo);
    // Each step halves the interval; 200 steps shrink any f64 bracket to
    // adjacent representable numbers, so the loop bound is never the limit.
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a < xtol || mid <= a || mid >= b {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_a.signum() {
            a = mid;
            f_a = f_mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Minimum of a unimodal `f` on `[lo, hi]` by golden-section search.
///
/// Returns `(x_min, f(x_min))`. The interval shrinks by the golden ratio per
/// step until its width drops below `xtol`; note that for smooth minima the
/// *function-comparison* resolution limits the achievable localization to
/// about `√ε·|x|` regardless of `xtol`, so callers needing tighter roots
/// should polish with a derivative-based method afterwards.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] for an empty interval or a
/// nonpositive tolerance.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<(f64, f64)> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidParameter {
            name: "lo",
            message: "interval must satisfy lo < hi",
            value: lo,
        });
    }
    if xtol.is_nan() || xtol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "xtol",
            message: "tolerance must be positive",
            value: xtol,
        });
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut f_c = f(c);
    let mut f_d = f(d);
    // ~50 iterations reduce any O(1) interval below 1e-10; cap generously.
    for _ in 0..400 {
        if b - a < xtol {
            break;
        }
        if f_c <= f_d {
            b = d;
            d = c;
            f_d = f_c;
            c = b - INV_PHI * (b - a);
            f_c = f(c);
        } else {
            a = c;
            c = d;
            f_c = f_d;
            d = a + INV_PHI * (b - a);
            f_d = f(d);
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)))
}

/// Maximum of a unimodal `f` on `[lo, hi]`; golden-section on `-f`.
///
/// Returns `(x_max, f(x_max))`.
///
/// # Errors
///
/// As [`golden_min`].
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<(f64, f64)> {
    let (x, neg) = golden_min(|t| -f(t), lo, hi, xtol)?;
    Ok((x, -neg))
}

/// Euclidean projection of `v` onto the probability simplex
/// `{x : x_i ≥ 0, Σ x_i = 1}`.
///
/// Sort-based algorithm: sort descending, find the largest prefix whose
/// shifted average stays below its smallest member, and clip at that
/// threshold. Runs in `O(d log d)`; exact (up to rounding) rather than
/// iterative.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    debug_assert!(!v.is_empty());
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.partial_cmp(a).expect("weights are never NaN"));
    let mut prefix = 0.0;
    let mut threshold = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        prefix += u;
        let candidate = (prefix - 1.0) / (i + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    v.iter().map(|&x| (x - threshold).max(0.0)).collect()
}

/// Solves the dense linear system `a·x = b` by Gaussian elimination with
/// partial pivoting, returning `None` when a pivot degenerates (singular
/// or near-singular system).
///
/// Sized for the small saddle-point systems of the weight optimizer —
/// dozens of unknowns, not thousands; no blocking or factorization reuse.
pub fn solve_linear_system(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs()))
            .expect("column range is nonempty");
        if m[pivot_row][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = m.split_at_mut(row);
            let pivot = &upper[col];
            let target = &mut lower[0];
            for (t, p) in target[col..].iter_mut().zip(&pivot[col..]) {
                *t -= factor * p;
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
        if !x[row].is_finite() {
            return None;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_a_transcendental_root() {
        // x e^{x+1} = 1 has its root near 0.2785.
        let root = bisect_root(|x| x * (x + 1.0).exp() - 1.0, 0.01, 0.99, 1e-14).unwrap();
        assert!((root * (root + 1.0).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bisection_rejects_a_bad_bracket() {
        let err = bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10);
        assert!(matches!(err, Err(Error::RootBracket { .. })));
        assert!(bisect_root(|x| x, 1.0, 0.0, 1e-10).is_err());
        assert!(bisect_root(|x| x, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn bisection_returns_exact_endpoint_roots() {
        assert_eq!(bisect_root(|x| x, 0.0, 1.0, 1e-12).unwrap(), 0.0);
        assert_eq!(bisect_root(|x| x - 1.0, 0.0, 1.0, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn golden_section_localizes_a_smooth_minimum() {
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-7, "x = {x}");
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_section_maximizes_through_negation() {
        let (x, fx) = golden_max(|x| -(x - 1.5) * (x - 1.5) + 4.0, 0.0, 3.0, 1e-10).unwrap();
        assert!((x - 1.5).abs() < 1e-7);
        assert!((fx - 4.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_projection_is_idempotent_and_feasible() {
        let cases: [&[f64]; 5] = [
            &[0.25, 0.25, 0.5],
            &[1.0, 1.0, 1.0],
            &[-1.0, 0.0, 5.0],
            &[0.0, 0.0],
            &[3.0, -2.0, 0.5, 0.1, -0.4],
        ];
        for v in cases {
            let p = project_to_simplex(v);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12, "sum for {v:?}");
            assert!(p.iter().all(|&x| x >= 0.0), "negativity for {v:?}");
            let again = project_to_simplex(&p);
            for (a, b) in p.iter().zip(&again) {
                assert!((a - b).abs() < 1e-12, "not idempotent for {v:?}");
            }
        }
    }

    #[test]
    fn simplex_projection_fixes_feasible_points() {
        let v = [0.2, 0.3, 0.5];
        let p = project_to_simplex(&v);
        for (a, b) in v.iter().zip(&p) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn simplex_projection_matches_hand_worked_case() {
        // Projecting (1, 0.5) onto the simplex: shift both by 0.25.
        let p = project_to_simplex(&[1.0, 0.5]);
        assert!((p[0] - 0.75).abs() < 1e-15);
        assert!((p[1] - 0.25).abs() < 1e-15);
        // Projecting (2, 0) clips the second coordinate entirely.
        let q = project_to_simplex(&[2.0, 0.0]);
        assert_eq!(q, vec![1.0, 0.0]);
    }

    #[test]
    fn linear_solver_inverts_small_systems() {
        // Hand-checkable 3×3 system.
        let a = vec![
            vec![2.0, 1.0, -1.0],
            vec![-3.0, -1.0, 2.0],
            vec![-2.0, 1.0, 2.0],
        ];
        let b = [8.0, -11.0, -3.0];
        let x = solve_linear_system(&a, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
        assert!((x[2] - -1.0).abs() < 1e-12);

        // Residual check on a saddle-point-shaped system (symmetric with a
        // zero diagonal corner, like the optimizer's face systems).
        let a = vec![
            vec![4.0, 1.0, 1.0],
            vec![1.0, 3.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        let b = [1.0, 2.0, 0.0];
        let x = solve_linear_system(&a, &b).unwrap();
        for (row, &target) in a.iter().zip(&b) {
            let lhs: f64 = row.iter().zip(&x).map(|(&c, &xi)| c * xi).sum();
            assert!((lhs - target).abs() < 1e-12);
        }

        // Singular matrix is reported, not divided through.
        let singular = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_linear_system(&singular, &[1.0, 2.0]).is_none());
    }
}
