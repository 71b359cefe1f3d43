//! Bracketing root and minimum finders.

use crate::scalar::{c, Scalar};

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite
/// sign. Runs until the bracket stops shrinking, `|hi − lo| <= x_tol`, or an
/// exact zero is hit. Returns the endpoint with the smaller `|f|`.
pub fn bisect<T, F>(f: F, mut lo: T, mut hi: T, x_tol: T) -> Option<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Some(lo);
    }
    if f_hi == T::zero() {
        return Some(hi);
    }
    if (f_lo > T::zero()) == (f_hi > T::zero()) || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    let mut f_hi = f_hi;
    for _ in 0..300 {
        let mid = lo + (hi - lo) / c(2.0);
        if !(mid > lo && mid < hi) || (hi - lo).abs() <= x_tol {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Some(mid);
        }
        if (fm > T::zero()) == (f_lo > T::zero()) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    Some(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

/// Golden-section minimization of `f` on `[a, b]`; returns `(x_min, f_min)`.
pub fn golden_section<T, F>(f: F, mut a: T, mut b: T, x_tol: T) -> (T, T)
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let inv_phi = (c::<T>(5.0).sqrt() - T::one()) / c(2.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = [(a, f(a)), (b, f(b))]
        .into_iter()
        .fold((x1, f1), |acc, p| if p.1 < acc.1 { p } else { acc });
    for _ in 0..400 {
        if (b - a).abs() <= x_tol {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        for p in [(x1, f1), (x2, f2)] {
            if p.1 < best.1 {
                best = p;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 0.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 0.0).is_none());
    }

    #[test]
    fn golden_quadratic_and_kink() {
        let (x, v) = golden_section(|x: f64| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
        let (x, _) = golden_section(|x: f64| (x - 0.7).abs(), 0.0, 1.0, 1e-12);
        assert!((x - 0.7).abs() < 1e-10);
        // minimum at the interval end
        let (x, _) = golden_section(|x: f64| x, 0.2, 1.0, 1e-12);
        assert_eq!(x, 0.2);
    }
}
