//! Bracketing bisection with a certified enclosure.

use serde::Serialize;

use crate::radius_equations::Equation;
use crate::{Error, Result};

/// Relative offset used when the endpoints themselves cannot be evaluated.
const PROBE: f64 = 1e-9;
const MAX_EXPANSIONS: usize = 60;

/// `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign (or one of them zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootEnclosure {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub evaluations: usize,
    pub tol: f64,
}

impl RootEnclosure {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &RootEnclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// True when the stored endpoint values certify a root in `[lo, hi]`.
    pub fn sign_change_verified(&self) -> bool {
        self.f_lo == 0.0 || self.f_hi == 0.0 || self.f_lo.signum() != self.f_hi.signum()
    }
}

/// Encloses the unique root of `f` on `[lo, hi]` to absolute width `tol`.
///
/// `f` may fail at the endpoints; then `lo + 1e-9 w` and points
/// `hi - 1e-9 w 2^-j` are probed instead. An exact zero found anywhere gives
/// a degenerate enclosure.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<RootEnclosure>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    if !(lo < hi) {
        return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
    }
    let width = hi - lo;
    let mut evaluations = 0;
    let mut eval = |x: f64, evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        let v = f(x)?;
        if v.is_nan() {
            return Err(Error::Numerical { x, value: v });
        }
        Ok(v)
    };

    let (mut a, mut fa) = match eval(lo, &mut evaluations) {
        Ok(v) => (lo, v),
        Err(_) => {
            let x = lo + PROBE * width;
            (x, eval(x, &mut evaluations)?)
        }
    };
    let degenerate = |x: f64, fx: f64, evaluations| RootEnclosure {
        lo: x,
        hi: x,
        f_lo: fx,
        f_hi: fx,
        evaluations,
        tol,
    };
    if fa == 0.0 {
        return Ok(degenerate(a, fa, evaluations));
    }

    let mut found = None;
    let mut last = (hi, f64::NAN);
    match eval(hi, &mut evaluations) {
        Ok(v) if v.signum() != fa.signum() => found = Some((hi, v)),
        Ok(v) => last = (hi, v),
        Err(_) => {
            let mut delta = PROBE * width;
            for _ in 0..MAX_EXPANSIONS {
                let x = hi - delta;
                match eval(x, &mut evaluations) {
                    Ok(v) if v.signum() != fa.signum() || v == 0.0 => {
                        found = Some((x, v));
                        break;
                    }
                    Ok(v) => last = (x, v),
                    Err(_) => break,
                }
                delta *= 0.5;
            }
        }
    }
    let Some((mut b, mut fb)) = found else {
        return Err(Error::NoRoot {
            lo: a,
            hi: last.0,
            f_lo: fa,
            f_hi: last.1,
        });
    };
    if fb == 0.0 {
        return Ok(degenerate(b, fb, evaluations));
    }

    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval(mid, &mut evaluations)?;
        if fm == 0.0 {
            return Ok(degenerate(mid, fm, evaluations));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Ok(RootEnclosure {
        lo: a,
        hi: b,
        f_lo: fa,
        f_hi: fb,
        evaluations,
        tol,
    })
}

/// Root of a radius equation on its domain.
pub fn solve(eq: &Equation, tol: f64) -> Result<RootEnclosure> {
    let (lo, hi) = eq.domain();
    find_root(|r| eq.evaluate(r), lo, hi, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    NotMonotone,
}

/// Samples `f` on `samples + 1` equispaced points of `[lo, hi]` and reports
/// whether the values are strictly ordered.
pub fn verify_monotone<F>(mut f: F, lo: f64, hi: f64, samples: usize) -> Result<Monotonicity>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = samples.max(1);
    let values = (0..=n)
        .map(|i| f(lo + (hi - lo) * i as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    let up = values.windows(2).all(|w| w[1] > w[0]);
    let down = values.windows(2).all(|w| w[1] < w[0]);
    Ok(match (up, down) {
        (true, _) => Monotonicity::Increasing,
        (_, true) => Monotonicity::Decreasing,
        _ => Monotonicity::NotMonotone,
    })
}
