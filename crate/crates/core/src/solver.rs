//! Bracketing root finder for monotone scalar functions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: u32,
}

/// Bisection on `[lo, hi]` for `f(x) = 0`, stopping once `|f(x)| < f_tol` or
/// the bracket is narrower than `x_tol`. `f(lo)` and `f(hi)` must not share a
/// sign.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, f_tol: f64, x_tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    if !(lo <= hi) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa.abs() < f_tol {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb.abs() < f_tol {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::domain(format!(
            "root not bracketed: f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm.abs() < f_tol || (b - a) < x_tol || iterations >= 200 {
            return Ok(Root { x: mid, fx: fm, iterations });
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
}
