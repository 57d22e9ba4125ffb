//! Truncated univariate power series over `Complex<f64>`.
//!
//! A [`PowerSeries`] stores the Taylor coefficients `c_0, ..., c_N` of an
//! analytic function about the origin. Every operation is exact through the
//! truncation degree of its result (up to floating-point rounding). A series
//! may also carry a [`TailBound`], an envelope `|c_n| <= C (n+1)^d q^n`
//! valid for every `n > N`, which lets [`PowerSeries::majorant_sum`] return a
//! certified upper bound instead of a plain partial sum.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Coefficient envelope `|c_n| <= scale * (n+1)^degree * ratio^n` for the
/// coefficients a series does not store.
///
/// `degree = 0` is a plain geometric bound. `scale = 0` means every
/// coefficient past the truncation degree is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub scale: f64,
    pub ratio: f64,
    pub degree: u32,
}

impl TailBound {
    /// The stored coefficients are the whole function.
    pub const EXACT: TailBound = TailBound {
        scale: 0.0,
        ratio: 0.0,
        degree: 0,
    };

    pub fn geometric(ratio: f64, scale: f64) -> Self {
        Self::polynomial_geometric(ratio, scale, 0)
    }

    pub fn polynomial_geometric(ratio: f64, scale: f64, degree: u32) -> Self {
        assert!(
            ratio >= 0.0 && scale >= 0.0 && ratio.is_finite(),
            "tail bound needs ratio >= 0 and scale >= 0"
        );
        TailBound {
            scale,
            ratio,
            degree,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.scale == 0.0 || self.ratio == 0.0
    }

    /// The envelope value at index `n`.
    pub fn coefficient_bound(&self, n: usize) -> f64 {
        if self.is_exact() {
            return 0.0;
        }
        let n = n as f64;
        self.scale * ((self.degree as f64) * (n + 1.0).ln() + n * self.ratio.ln()).exp()
    }

    /// Radius inside which the envelope is summable.
    pub fn convergence_radius(&self) -> f64 {
        if self.is_exact() {
            f64::INFINITY
        } else {
            1.0 / self.ratio
        }
    }

    /// `sum_{n >= from} scale (n+1)^degree (ratio r)^n`.
    ///
    /// Returns `+inf` when the envelope is not summable at `r`.
    pub fn remainder(&self, r: f64, from: usize) -> f64 {
        if self.is_exact() || r == 0.0 && from > 0 {
            return 0.0;
        }
        let x = self.ratio * r;
        if x >= 1.0 {
            return f64::INFINITY;
        }
        if x == 0.0 {
            // Only n = 0 survives.
            return if from == 0 { self.scale } else { 0.0 };
        }
        if self.degree == 0 {
            return self.scale * (from as f64 * x.ln()).exp() / (1.0 - x);
        }
        // Sum term by term until the ratio of consecutive terms drops below
        // one, then close with a geometric bound on the rest.
        let d = self.degree as f64;
        let mut term = self.coefficient_bound(from) * (from as f64 * r.ln()).exp();
        let mut sum = 0.0;
        for n in (from..).take(1_000_000) {
            sum += term;
            let step = ((n as f64 + 2.0) / (n as f64 + 1.0)).powf(d) * x;
            if step < 1.0 {
                let rest = term * step / (1.0 - step);
                if rest <= 1e-20 * sum || term == 0.0 {
                    return sum + rest;
                }
            }
            term *= step;
        }
        f64::INFINITY
    }
}

/// Absolute-value series `sum_{n >= from} |c_n| r^n`, split into the stored
/// partial sum and an optional certified remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorant {
    pub partial: f64,
    /// `None` when the series carries no tail bound; `partial` is then only
    /// a lower bound.
    pub remainder: Option<f64>,
}

impl Majorant {
    /// Upper bound when certified, otherwise the partial sum.
    pub fn value(&self) -> f64 {
        self.partial + self.remainder.unwrap_or(0.0)
    }

    pub fn is_lower_bound(&self) -> bool {
        self.remainder.is_none()
    }
}

/// Truncated Taylor series `sum_{n=0}^{N} c_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<C64>,
    tail: Option<TailBound>,
}

impl PowerSeries {
    /// Series with the given coefficients and no tail information.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        PowerSeries { coeffs, tail: None }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// Coefficients `f(0), ..., f(order)`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C64) -> Self {
        Self::new((0..=order).map(f).collect())
    }

    /// Polynomial padded with zeros to `order`; the tail is exact.
    ///
    /// Panics if the polynomial has more than `order + 1` coefficients.
    pub fn polynomial(coeffs: &[C64], order: usize) -> Self {
        assert!(coeffs.len() <= order + 1, "polynomial longer than order");
        let mut c = coeffs.to_vec();
        c.resize(order + 1, ZERO);
        PowerSeries {
            coeffs: c,
            tail: Some(TailBound::EXACT),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::polynomial(&[], order)
    }

    pub fn constant(c: C64, order: usize) -> Self {
        Self::polynomial(&[c], order)
    }

    /// `w(z) = z`.
    pub fn identity(order: usize) -> Self {
        if order == 0 {
            return Self::zero(0);
        }
        Self::polynomial(&[ZERO, ONE], order)
    }

    /// `1/(1-z) = sum z^n`.
    pub fn geometric(order: usize) -> Self {
        Self::from_fn(order, |_| ONE).with_tail(TailBound::geometric(1.0, 1.0))
    }

    pub fn with_tail(mut self, tail: TailBound) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn without_tail(mut self) -> Self {
        self.tail = None;
        self
    }

    /// Truncation degree `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Stored coefficient, or `None` past the truncation degree.
    pub fn coeff(&self, n: usize) -> Option<C64> {
        self.coeffs.get(n).copied()
    }

    pub fn tail(&self) -> Option<TailBound> {
        self.tail
    }

    /// Radius of convergence guaranteed by the tail bound; `1` when unknown.
    pub fn convergence_radius(&self) -> f64 {
        self.tail.map_or(1.0, |t| t.convergence_radius())
    }

    /// Drops coefficients past `order`, widening the tail so it still covers
    /// them.
    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        let coeffs = self.coeffs[..=order].to_vec();
        let tail = self.tail.map(|t| {
            let dropped = &self.coeffs[order + 1..];
            if t.is_exact() {
                let max = dropped.iter().map(|c| c.norm()).fold(0.0, f64::max);
                if max == 0.0 {
                    TailBound::EXACT
                } else {
                    TailBound::geometric(1.0, max)
                }
            } else {
                let scale = dropped
                    .iter()
                    .enumerate()
                    .map(|(i, c)| ratio_to_envelope(c.norm(), &t, order + 1 + i))
                    .fold(t.scale, f64::max);
                TailBound { scale, ..t }
            }
        });
        PowerSeries { coeffs, tail }
    }

    /// Envelope covering every coefficient, stored or not.
    fn envelope(&self) -> Option<TailBound> {
        let t = self.tail?;
        if t.is_exact() {
            let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            return Some(TailBound::geometric(1.0, max));
        }
        let scale = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| ratio_to_envelope(c.norm(), &t, n))
            .fold(t.scale, f64::max);
        Some(TailBound { scale, ..t })
    }

    fn is_exact(&self) -> bool {
        self.tail.is_some_and(|t| t.is_exact())
    }

    /// Coefficientwise multiple `c * self`.
    pub fn scale(&self, c: C64) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            tail: self.tail.map(|t| TailBound {
                scale: t.scale * c.norm(),
                ..t
            }),
        }
    }

    /// Cauchy product, exact through `min(self.order, other.order)`.
    pub fn multiply(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=order)
            .map(|n| (0..=n).map(|j| a[j] * b[n - j]).sum())
            .collect();
        PowerSeries {
            coeffs,
            tail: product_tail(self, other),
        }
    }

    /// `outer(inner(z))`, exact through `min(outer.order, inner.order)`.
    ///
    /// `inner` must vanish at the origin. The result carries no tail bound;
    /// callers that know one attach it with [`PowerSeries::with_tail`].
    pub fn compose(&self, inner: &PowerSeries) -> Result<PowerSeries> {
        if inner.coeffs[0] != ZERO {
            return Err(Error::domain(format!(
                "inner series must vanish at 0, got constant term {}",
                inner.coeffs[0]
            )));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        // Horner: (((c_N) w + c_{N-1}) w + ...) w + c_0.
        let mut acc = vec![ZERO; order + 1];
        acc[0] = self.coeffs[order];
        for n in (0..order).rev() {
            let mut next = vec![ZERO; order + 1];
            // inner[0] == 0, so degree j of acc feeds degrees > j only.
            for (j, &aj) in acc.iter().enumerate() {
                if aj == ZERO {
                    continue;
                }
                for (k, &wk) in inner.coeffs.iter().enumerate().skip(1) {
                    if j + k > order {
                        break;
                    }
                    next[j + k] += aj * wk;
                }
            }
            next[0] += self.coeffs[n];
            acc = next;
        }
        Ok(PowerSeries::new(acc))
    }

    /// Principal logarithm; needs a nonzero constant term.
    pub fn ln(&self) -> Result<PowerSeries> {
        let b = &self.coeffs;
        if b[0] == ZERO {
            return Err(Error::domain("log of a series vanishing at 0"));
        }
        let n_max = self.order();
        let mut l = vec![ZERO; n_max + 1];
        l[0] = b[0].ln();
        // b * L' = b'  =>  n b_0 L_n = n b_n - sum_{k=1}^{n-1} k L_k b_{n-k}
        for n in 1..=n_max {
            let mut s = b[n] * n as f64;
            for k in 1..n {
                s -= l[k] * b[n - k] * k as f64;
            }
            l[n] = s / (b[0] * n as f64);
        }
        Ok(PowerSeries::new(l))
    }

    pub fn exp(&self) -> PowerSeries {
        let l = &self.coeffs;
        let n_max = self.order();
        let mut e = vec![ZERO; n_max + 1];
        e[0] = l[0].exp();
        // E' = L' E  =>  n E_n = sum_{k=1}^{n} k L_k E_{n-k}
        for n in 1..=n_max {
            let mut s = ZERO;
            for k in 1..=n {
                s += l[k] * e[n - k] * k as f64;
            }
            e[n] = s / n as f64;
        }
        PowerSeries::new(e)
    }

    /// `base^alpha` for a base with constant term 1.
    ///
    /// Positive integer exponents use repeated squaring, which is exact on
    /// integer coefficients; other exponents go through `exp(alpha log base)`.
    pub fn real_power(&self, alpha: f64) -> Result<PowerSeries> {
        if !alpha.is_finite() {
            return Err(Error::domain(format!("exponent {alpha} is not finite")));
        }
        if (self.coeffs[0] - ONE).norm() > 1e-14 {
            return Err(Error::domain(format!(
                "real power needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        let order = self.order();
        if alpha == 0.0 {
            return Ok(PowerSeries::constant(ONE, order));
        }
        if alpha.fract() == 0.0 && alpha > 0.0 && alpha <= 1024.0 {
            let mut e = alpha as u32;
            let mut base = self.clone().without_tail();
            let mut acc = PowerSeries::new({
                let mut c = vec![ZERO; order + 1];
                c[0] = ONE;
                c
            });
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.multiply(&base);
                }
                e >>= 1;
                if e > 0 {
                    base = base.multiply(&base);
                }
            }
            return Ok(acc.without_tail());
        }
        Ok(self.ln()?.scale(C64::new(alpha, 0.0)).exp())
    }

    /// `d/dz`; the order drops by one.
    pub fn differentiate(&self) -> PowerSeries {
        if self.order() == 0 {
            return PowerSeries {
                coeffs: vec![ZERO],
                tail: self.tail.map(|_| TailBound::EXACT),
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * n as f64)
            .collect();
        // (j+1) a_{j+1} <= C (j+1) (j+2)^d q^{j+1} <= C q 2^d (j+1)^{d+1} q^j
        let tail = self.tail.map(|t| {
            if t.is_exact() {
                TailBound::EXACT
            } else {
                TailBound {
                    scale: t.scale * t.ratio * 2f64.powi(t.degree as i32),
                    ratio: t.ratio,
                    degree: t.degree + 1,
                }
            }
        });
        PowerSeries { coeffs, tail }
    }

    /// Antiderivative vanishing at 0; the order grows by one.
    pub fn antiderivative(&self) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| c / (n + 1) as f64),
        );
        // a_{n-1}/n <= C n^d q^{n-1} / n <= (C/q) (n+1)^d q^n
        let tail = self.tail.map(|t| {
            if t.is_exact() {
                TailBound::EXACT
            } else {
                TailBound {
                    scale: t.scale / t.ratio,
                    ..t
                }
            }
        });
        PowerSeries { coeffs, tail }
    }

    /// Partial sum at `z` (Horner).
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Partial sum at `z` together with a bound on the neglected terms.
    pub fn eval_with_remainder(&self, z: C64) -> (C64, Option<f64>) {
        let rem = self.tail.map(|t| t.remainder(z.norm(), self.order() + 1));
        (self.eval(z), rem)
    }

    /// `sum_{n >= from} |c_n| r^n` for `0 <= r < 1`.
    ///
    /// With a tail bound the result is a certified upper bound; without one
    /// it is the partial sum and flagged as a lower bound.
    pub fn majorant_sum(&self, r: f64, from: usize) -> Result<Majorant> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::domain(format!("majorant radius {r} not in [0, 1)")));
        }
        let radius = self.convergence_radius();
        if r >= radius {
            return Err(Error::domain(format!(
                "majorant radius {r} at or beyond the convergence radius {radius}"
            )));
        }
        if self.tail.is_none() && from > self.order() {
            return Err(Error::domain(format!(
                "index {from} past truncation degree {} with no tail bound",
                self.order()
            )));
        }
        let mut partial = 0.0;
        let mut rn = if from == 0 { 1.0 } else { r.powi(from as i32) };
        for c in self.coeffs.iter().skip(from) {
            partial += c.norm() * rn;
            rn *= r;
        }
        let remainder = self
            .tail
            .map(|t| t.remainder(r, from.max(self.order() + 1)));
        Ok(Majorant { partial, remainder })
    }
}

fn ratio_to_envelope(abs: f64, t: &TailBound, n: usize) -> f64 {
    if abs == 0.0 {
        return 0.0;
    }
    let n = n as f64;
    abs / ((t.degree as f64) * (n + 1.0).ln() + n * t.ratio.ln()).exp()
}

fn product_tail(a: &PowerSeries, b: &PowerSeries) -> Option<TailBound> {
    let (ea, eb) = (a.envelope()?, b.envelope()?);
    // A polynomial factor shifts the other factor's envelope by at most its
    // own degree.
    let poly_times = |p: &PowerSeries, e: TailBound| {
        let s: f64 = p
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.norm() * e.ratio.powi(-(j as i32)))
            .sum();
        TailBound { scale: e.scale * s, ..e }
    };
    if a.is_exact() && !b.is_exact() {
        return Some(poly_times(a, eb));
    }
    if b.is_exact() && !a.is_exact() {
        return Some(poly_times(b, ea));
    }
    Some(TailBound {
        scale: ea.scale * eb.scale,
        ratio: ea.ratio.max(eb.ratio),
        degree: ea.degree + eb.degree + 1,
    })
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|n| self.coeffs[n] + rhs.coeffs[n]).collect();
        let tail = match (self.truncate(order).tail, rhs.truncate(order).tail) {
            (Some(x), Some(y)) if x.is_exact() && y.is_exact() => Some(TailBound::EXACT),
            (Some(x), Some(y)) if x.is_exact() => Some(y),
            (Some(x), Some(y)) if y.is_exact() => Some(x),
            (Some(x), Some(y)) => Some(TailBound {
                scale: x.scale + y.scale,
                ratio: x.ratio.max(y.ratio),
                degree: x.degree.max(y.degree),
            }),
            _ => None,
        };
        PowerSeries { coeffs, tail }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self + &(-rhs)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        self.multiply(rhs)
    }
}
