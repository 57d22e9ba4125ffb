//! Catalog of subordinating targets.
//!
//! | kind | closed form | `d(φ(0), ∂φ(D))` |
//! |------|-------------|------------------|
//! | `Convex` | `z/(1-z)` | `1/2` |
//! | `DiskAutomorphism(a)` | `(a-z)/(1-az)` | `1-a` |
//! | `ConcavePole(p)` | `pz/((p-z)(1-pz))` | `p/(1+p)^2` |
//! | `ConcaveAngle(α)` | `(((1+z)/(1-z))^α - 1)/(2α)` | `1/(2α)` |
//!
//! All four are used exactly as normalized above.

use serde::{Deserialize, Serialize};

use crate::power_series::{PowerSeries, TailBound, C64};
use crate::{Error, Result, DEFAULT_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FunctionKind {
    Convex,
    DiskAutomorphism { a: f64 },
    ConcavePole { p: f64 },
    ConcaveAngle { alpha: f64 },
}

impl FunctionKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FunctionKind::Convex => Ok(()),
            FunctionKind::DiskAutomorphism { a } if (0.0..1.0).contains(&a) => Ok(()),
            FunctionKind::DiskAutomorphism { a } => Err(Error::InvalidParameter {
                name: "a",
                value: a,
                range: "[0, 1)",
            }),
            FunctionKind::ConcavePole { p } if p > 0.0 && p < 1.0 => Ok(()),
            FunctionKind::ConcavePole { p } => Err(Error::InvalidParameter {
                name: "p",
                value: p,
                range: "(0, 1)",
            }),
            FunctionKind::ConcaveAngle { alpha } if (1.0..=2.0).contains(&alpha) => Ok(()),
            FunctionKind::ConcaveAngle { alpha } => Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                range: "[1, 2]",
            }),
        }
    }
}

/// `r/(1-r)`.
pub fn convex_value(r: f64) -> f64 {
    r / (1.0 - r)
}

/// `k_p(r) = pr/((p-r)(1-pr))`.
pub fn concave_pole_value(p: f64, r: f64) -> f64 {
    p * r / ((p - r) * (1.0 - p * r))
}

/// `k_p'(r) = p^2 (1-r^2)/((p-r)^2 (1-pr)^2)`.
pub fn concave_pole_derivative(p: f64, r: f64) -> f64 {
    let d = (p - r) * (1.0 - p * r);
    p * p * (1.0 - r * r) / (d * d)
}

/// `f_α(r)`, written with `expm1`/`ln_1p` so that tiny `r` keeps full
/// relative precision.
pub fn concave_angle_value(alpha: f64, r: f64) -> f64 {
    (alpha * (r.ln_1p() - (-r).ln_1p())).exp_m1() / (2.0 * alpha)
}

/// `f_α'(r) = (1+r)^(α-1)/(1-r)^(α+1)`.
pub fn concave_angle_derivative(alpha: f64, r: f64) -> f64 {
    ((alpha - 1.0) * r.ln_1p() - (alpha + 1.0) * (-r).ln_1p()).exp()
}

/// One of the extremal targets together with its cached Taylor series.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFunction {
    kind: FunctionKind,
    series: PowerSeries,
}

impl ReferenceFunction {
    pub fn new(kind: FunctionKind) -> Result<Self> {
        kind.validate()?;
        let series = build_series(kind, DEFAULT_ORDER);
        Ok(ReferenceFunction { kind, series })
    }

    pub fn convex() -> Self {
        Self::new(FunctionKind::Convex).expect("convex target has no parameters")
    }

    pub fn disk_automorphism(a: f64) -> Result<Self> {
        Self::new(FunctionKind::DiskAutomorphism { a })
    }

    pub fn concave_pole(p: f64) -> Result<Self> {
        Self::new(FunctionKind::ConcavePole { p })
    }

    pub fn concave_angle(alpha: f64) -> Result<Self> {
        Self::new(FunctionKind::ConcaveAngle { alpha })
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    /// Cached series of degree [`DEFAULT_ORDER`].
    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    /// Series of any degree, with the coefficient envelope of the function.
    pub fn series_with_order(&self, order: usize) -> PowerSeries {
        if order == self.series.order() {
            return self.series.clone();
        }
        build_series(self.kind, order)
    }

    /// Series of `ζ ↦ φ(σζ)`: coefficients `c_n σ^n`, envelope ratio scaled
    /// by `σ`. With `σ = p` the `k_p` coefficients stay below `p/(1-p^2)`
    /// at any degree.
    pub fn scaled_series(&self, order: usize, sigma: f64) -> PowerSeries {
        if sigma == 1.0 {
            return self.series_with_order(order);
        }
        let ln_sigma = sigma.ln();
        let coeffs = match self.kind {
            FunctionKind::ConcaveAngle { .. } => self
                .series_with_order(order)
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, &c)| c * (n as f64 * ln_sigma).exp())
                .collect(),
            FunctionKind::ConcavePole { p } => (0..=order)
                .map(|n| {
                    if n == 0 {
                        return C64::new(0.0, 0.0);
                    }
                    let nf = n as f64;
                    let v = (1.0 - p.powf(2.0 * nf)) / (1.0 - p * p)
                        * ((1.0 - nf) * p.ln() + nf * ln_sigma).exp();
                    C64::new(v, 0.0)
                })
                .collect(),
            kind => (0..=order)
                .map(|n| C64::new(closed_coefficient(kind, n) * (n as f64 * ln_sigma).exp(), 0.0))
                .collect(),
        };
        let t = self.coefficient_tail();
        let tail = if t.is_exact() {
            t
        } else {
            TailBound::polynomial_geometric(t.ratio * sigma, t.scale, t.degree)
        };
        PowerSeries::new(coeffs).with_tail(tail)
    }

    /// Distance from the origin to the nearest singularity.
    pub fn singularity_radius(&self) -> f64 {
        match self.kind {
            FunctionKind::Convex | FunctionKind::ConcaveAngle { .. } => 1.0,
            FunctionKind::DiskAutomorphism { a: 0.0 } => f64::INFINITY,
            FunctionKind::DiskAutomorphism { a } => 1.0 / a,
            FunctionKind::ConcavePole { p } => p,
        }
    }

    /// Radius of the disk on which the function is analytic, capped at the
    /// unit disk.
    pub fn analytic_radius(&self) -> f64 {
        self.singularity_radius().min(1.0)
    }

    pub fn value_at_origin(&self) -> f64 {
        match self.kind {
            FunctionKind::DiskAutomorphism { a } => a,
            _ => 0.0,
        }
    }

    /// `d(φ(0), ∂φ(D))`.
    pub fn boundary_distance(&self) -> f64 {
        match self.kind {
            FunctionKind::Convex => 0.5,
            FunctionKind::DiskAutomorphism { a } => 1.0 - a,
            FunctionKind::ConcavePole { p } => p / ((1.0 + p) * (1.0 + p)),
            FunctionKind::ConcaveAngle { alpha } => 1.0 / (2.0 * alpha),
        }
    }

    /// Closed-form value on the unit disk.
    pub fn eval(&self, z: C64) -> Result<C64> {
        if !(z.norm() < 1.0) {
            return Err(Error::domain(format!("|z| = {} is not below 1", z.norm())));
        }
        let one = C64::new(1.0, 0.0);
        Ok(match self.kind {
            FunctionKind::Convex => z / (one - z),
            FunctionKind::DiskAutomorphism { a } => (a - z) / (one - z * a),
            FunctionKind::ConcavePole { p } => {
                if (z - p).norm() <= f64::EPSILON * p {
                    return Err(Error::domain(format!("z = {z} is the pole of k_p")));
                }
                z * p / ((p - z) * (one - z * p))
            }
            FunctionKind::ConcaveAngle { alpha } => {
                (((one + z) / (one - z)).powf(alpha) - one) / (2.0 * alpha)
            }
        })
    }

    /// Closed-form value at a real point `0 <= r < analytic radius`.
    pub fn eval_real(&self, r: f64) -> Result<f64> {
        self.check_real(r)?;
        Ok(match self.kind {
            FunctionKind::Convex => convex_value(r),
            FunctionKind::DiskAutomorphism { a } => (a - r) / (1.0 - a * r),
            FunctionKind::ConcavePole { p } => concave_pole_value(p, r),
            FunctionKind::ConcaveAngle { alpha } => concave_angle_value(alpha, r),
        })
    }

    /// Closed-form derivative at a real point `0 <= r < analytic radius`.
    pub fn derivative_eval(&self, r: f64) -> Result<f64> {
        self.check_real(r)?;
        Ok(match self.kind {
            FunctionKind::Convex => 1.0 / ((1.0 - r) * (1.0 - r)),
            FunctionKind::DiskAutomorphism { a } => {
                -(1.0 - a * a) / ((1.0 - a * r) * (1.0 - a * r))
            }
            FunctionKind::ConcavePole { p } => concave_pole_derivative(p, r),
            FunctionKind::ConcaveAngle { alpha } => concave_angle_derivative(alpha, r),
        })
    }

    fn check_real(&self, r: f64) -> Result<()> {
        let hi = self.analytic_radius();
        if !(0.0..hi).contains(&r) {
            return Err(Error::domain(format!("r = {r} not in [0, {hi})")));
        }
        Ok(())
    }

    /// Taylor coefficient of `z^n`.
    pub fn coefficient(&self, n: usize) -> C64 {
        match self.kind {
            FunctionKind::ConcaveAngle { .. } => self
                .series
                .coeff(n)
                .unwrap_or_else(|| self.series_with_order(n).coeffs()[n]),
            kind => C64::new(closed_coefficient(kind, n), 0.0),
        }
    }

    /// `sum_{n >= from} |c_n| r^n` in closed form.
    ///
    /// For `k_p` and `f_α` this subtracts the head from the closed form,
    /// so it is meant for small `from`.
    pub fn majorant(&self, r: f64, from: usize) -> Result<f64> {
        self.check_real(r)?;
        Ok(match self.kind {
            FunctionKind::Convex => r.powi(from.max(1) as i32) / (1.0 - r),
            FunctionKind::DiskAutomorphism { a } => {
                let tail = |k: usize| (1.0 - a * a) * a.powi(k as i32 - 1) * r.powi(k as i32) / (1.0 - a * r);
                if from == 0 {
                    a + tail(1)
                } else {
                    tail(from)
                }
            }
            FunctionKind::ConcavePole { .. } | FunctionKind::ConcaveAngle { .. } => {
                let head: f64 = (0..from)
                    .map(|n| self.coefficient(n).re * r.powi(n as i32))
                    .sum();
                self.eval_real(r)? - head
            }
        })
    }

    /// Envelope for the coefficients of the function itself.
    pub fn coefficient_tail(&self) -> TailBound {
        coefficient_tail(self.kind)
    }

    /// Envelope valid for `n >= 1` for every `h ≺ φ`, given that `h` is
    /// stored to degree `order`.
    ///
    /// Convex targets: `|a_n| <= |φ'(0)|`. Disk automorphism:
    /// `|a_n| <= 1 - a^2`. Opening-angle targets are univalent, so
    /// `|a_n| <= n |φ'(0)|`. `k_p` has a pole inside the disk; there the
    /// Cauchy estimate on `|z| = ρ` with `ρ = p N/(N+1)` is used,
    /// `|a_n| <= k_p(ρ)/ρ^n`, since `|h| <= max_{|ζ|<=ρ} |k_p| = k_p(ρ)`.
    pub fn subordinate_tail(&self, order: usize) -> TailBound {
        match self.kind {
            FunctionKind::Convex => TailBound::geometric(1.0, 1.0),
            FunctionKind::DiskAutomorphism { a } => TailBound::geometric(1.0, 1.0 - a * a),
            FunctionKind::ConcaveAngle { .. } => TailBound::polynomial_geometric(1.0, 1.0, 1),
            FunctionKind::ConcavePole { p } => {
                let n = order.max(1) as f64;
                let rho = p * n / (n + 1.0);
                TailBound::geometric(1.0 / rho, concave_pole_value(p, rho))
            }
        }
    }
}

fn closed_coefficient(kind: FunctionKind, n: usize) -> f64 {
    match kind {
        FunctionKind::Convex => {
            if n == 0 {
                0.0
            } else {
                1.0
            }
        }
        FunctionKind::DiskAutomorphism { a } => {
            if n == 0 {
                a
            } else {
                -(1.0 - a * a) * a.powi(n as i32 - 1)
            }
        }
        FunctionKind::ConcavePole { p } => {
            if n == 0 {
                0.0
            } else {
                let nf = n as f64;
                (1.0 - p.powf(2.0 * nf)) / (1.0 - p * p) * ((1.0 - nf) * p.ln()).exp()
            }
        }
        FunctionKind::ConcaveAngle { .. } => unreachable!("no closed form"),
    }
}

fn coefficient_tail(kind: FunctionKind) -> TailBound {
    match kind {
        FunctionKind::Convex => TailBound::geometric(1.0, 1.0),
        FunctionKind::DiskAutomorphism { a: 0.0 } => TailBound::EXACT,
        FunctionKind::DiskAutomorphism { a } => TailBound::geometric(a, (1.0 - a * a) / a),
        // |c_n| <= p^{1-n}/(1-p^2)
        FunctionKind::ConcavePole { p } => TailBound::geometric(1.0 / p, p / (1.0 - p * p)),
        // A_n <= A_n(α = 2) = n
        FunctionKind::ConcaveAngle { .. } => TailBound::polynomial_geometric(1.0, 1.0, 1),
    }
}

fn build_series(kind: FunctionKind, order: usize) -> PowerSeries {
    let series = match kind {
        FunctionKind::ConcaveAngle { alpha } => {
            let one = C64::new(1.0, 0.0);
            let cayley =
                PowerSeries::from_fn(order, |n| if n == 0 { one } else { C64::new(2.0, 0.0) });
            let pow = cayley
                .real_power(alpha)
                .expect("Cayley series has constant term 1");
            let mut coeffs = pow.coeffs().to_vec();
            coeffs[0] -= one;
            PowerSeries::new(coeffs).scale(C64::new(1.0 / (2.0 * alpha), 0.0))
        }
        kind => PowerSeries::from_fn(order, |n| C64::new(closed_coefficient(kind, n), 0.0)),
    };
    series.with_tail(coefficient_tail(kind))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cz(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn convex_eval() {
        let c = ReferenceFunction::convex();
        assert!((c.eval(cz(1.0 / 3.0, 0.0)).unwrap() - cz(0.5, 0.0)).norm() < 1e-15);
        assert!(c.eval(cz(1.0, 0.0)).is_err());
    }

    #[test]
    fn concave_pole_eval_and_coefficients() {
        let k = ReferenceFunction::concave_pole(0.5).unwrap();
        // 0.5*0.2 / ((0.5-0.2)(1-0.1)) = 0.1/0.27
        let v = k.eval(cz(0.2, 0.0)).unwrap();
        assert!((v.re - 0.1 / 0.27).abs() < 1e-15 && v.im == 0.0);
        assert!((v.re - 0.370_370_370_370_37).abs() < 1e-12);
        assert!(k.eval(cz(0.5, 0.0)).is_err());
        assert!((k.coefficient(2).re - 2.5).abs() < 1e-15);
        for p in [0.1, 0.5, 0.9] {
            let k = ReferenceFunction::concave_pole(p).unwrap();
            assert!((k.coefficient(1).re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn koebe_value_at_alpha_two() {
        let f = ReferenceFunction::concave_angle(2.0).unwrap();
        for r in [0.05, 0.2, 0.5, 0.9] {
            let koebe = r / ((1.0 - r) * (1.0 - r));
            assert!((f.eval_real(r).unwrap() - koebe).abs() < 1e-13 * (1.0 + koebe));
            assert!((f.eval(cz(r, 0.0)).unwrap().re - koebe).abs() < 1e-12 * (1.0 + koebe));
        }
    }

    #[test]
    fn concave_angle_alpha_one_coefficients() {
        let f = ReferenceFunction::concave_angle(1.0).unwrap();
        for n in 1..=40 {
            assert_eq!(f.coefficient(n), cz(1.0, 0.0));
        }
        assert_eq!(f.coefficient(0), cz(0.0, 0.0));
    }

    #[test]
    fn coefficient_past_cached_order() {
        let f = ReferenceFunction::concave_angle(2.0).unwrap();
        assert_eq!(f.coefficient(80), cz(80.0, 0.0));
    }

    #[test]
    fn disk_automorphism_coefficients() {
        let f = ReferenceFunction::disk_automorphism(0.5).unwrap();
        assert_eq!(f.coefficient(0).re, 0.5);
        assert!((f.coefficient(3).re + 0.75 * 0.25).abs() < 1e-16);
    }

    #[test]
    fn derivative_values() {
        for alpha in [1.0, 1.3, 2.0] {
            let f = ReferenceFunction::concave_angle(alpha).unwrap();
            assert!((f.derivative_eval(0.0).unwrap() - 1.0).abs() < 1e-15);
        }
        let c = ReferenceFunction::convex();
        assert!((c.derivative_eval(0.25).unwrap() - 1.0 / 0.5625).abs() < 1e-14);
        let f = ReferenceFunction::concave_angle(1.5).unwrap();
        let expect = 1.2f64.sqrt() / 0.8f64.powf(2.5);
        assert!((f.derivative_eval(0.2).unwrap() - expect).abs() < 1e-14);
        // cross-check against the differentiated series
        let d = f.series().differentiate().eval(cz(0.2, 0.0));
        assert!((d.re - expect).abs() < 1e-12);
        // k_p' by central difference
        let p = 0.6;
        let k = ReferenceFunction::concave_pole(p).unwrap();
        let h = 1e-6;
        let fd = (concave_pole_value(p, 0.3 + h) - concave_pole_value(p, 0.3 - h)) / (2.0 * h);
        assert!((k.derivative_eval(0.3).unwrap() - fd).abs() < 1e-7);
        assert!(k.derivative_eval(0.6).is_err());
    }

    #[test]
    fn scaled_series_evaluates_dilated_function() {
        for (phi, sigma) in [
            (ReferenceFunction::concave_pole(0.1).unwrap(), 0.1),
            (ReferenceFunction::concave_pole(0.6).unwrap(), 0.6),
            (ReferenceFunction::concave_angle(1.5).unwrap(), 0.5),
            (ReferenceFunction::convex(), 0.8),
            (ReferenceFunction::disk_automorphism(0.4).unwrap(), 0.9),
        ] {
            let s = phi.scaled_series(2000, sigma);
            assert!(s.coeffs().iter().all(|c| c.norm().is_finite()));
            for zeta in [C64::new(0.5, 0.0), C64::new(-0.3, 0.6), C64::new(0.9, 0.1)] {
                let want = phi.eval(zeta * sigma).unwrap();
                assert!((s.eval(zeta) - want).norm() < 1e-12 * (1.0 + want.norm()), "{:?}", phi.kind());
            }
            let t = s.tail().unwrap();
            for n in 1..200 {
                assert!(t.coefficient_bound(n) >= s.coeffs()[n].norm() * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn boundary_distances() {
        assert_eq!(ReferenceFunction::convex().boundary_distance(), 0.5);
        let k = ReferenceFunction::concave_pole(0.9).unwrap();
        assert!((k.boundary_distance() - 0.9 / 3.61).abs() < 1e-16);
        assert!((k.boundary_distance() - 0.249_307_479_224_376_7).abs() < 1e-15);
        let f = ReferenceFunction::concave_angle(2.0).unwrap();
        assert_eq!(f.boundary_distance(), 0.25);
        let fa = ReferenceFunction::disk_automorphism(0.3).unwrap();
        assert!((fa.boundary_distance() - 0.7).abs() < 1e-16);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(ReferenceFunction::concave_pole(0.0).is_err());
        assert!(ReferenceFunction::concave_pole(1.0).is_err());
        assert!(ReferenceFunction::concave_angle(0.99).is_err());
        assert!(ReferenceFunction::concave_angle(2.01).is_err());
        assert!(ReferenceFunction::disk_automorphism(1.0).is_err());
    }

    #[test]
    fn differentiated_f_alpha_matches_factored_closed_form() {
        // f_α' = (1+z)^(α-1) (1-z)^(-α-1), each factor by real_power
        let alpha = 1.5;
        let order = 8;
        let f = ReferenceFunction::concave_angle(alpha).unwrap();
        let one = cz(1.0, 0.0);
        let a = PowerSeries::polynomial(&[one, one], order)
            .real_power(alpha - 1.0)
            .unwrap();
        let b = PowerSeries::polynomial(&[one, -one], order)
            .real_power(-alpha - 1.0)
            .unwrap();
        let oracle = a.multiply(&b);
        let d = f.series_with_order(order + 1).differentiate();
        for n in 0..=order {
            assert!((d.coeffs()[n] - oracle.coeffs()[n]).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn coefficient_bounds_from_lemmas() {
        // convex: |c_n| <= 2 d for n >= 1
        let c = ReferenceFunction::convex();
        for n in 1..64 {
            assert!(c.coefficient(n).norm() <= 2.0 * c.boundary_distance());
        }
        // f_α: |f'(0)| = 1 <= 2α d = 1, and A_n <= n
        for alpha in [1.0, 1.25, 1.5, 1.75, 2.0] {
            let f = ReferenceFunction::concave_angle(alpha).unwrap();
            assert!((f.coefficient(1).re - 2.0 * alpha * f.boundary_distance()).abs() < 1e-15);
            for n in 1..=64 {
                let a = f.coefficient(n).re;
                assert!(a > 0.0 && a <= n as f64 * (1.0 + 1e-12), "α={alpha} n={n} A_n={a}");
            }
        }
    }

    #[test]
    fn growth_bound_is_attained_by_f_alpha() {
        for alpha in [1.0, 1.5, 2.0] {
            let f = ReferenceFunction::concave_angle(alpha).unwrap();
            for r in [0.1, 0.3, 0.7] {
                let v = f.eval_real(r).unwrap();
                let lhs = (f.eval(cz(r, 0.0)).unwrap() - cz(0.0, 0.0)).norm();
                assert!((lhs - v).abs() < 1e-12 * (1.0 + v));
            }
        }
    }

    #[test]
    fn f_alpha_nondecreasing_in_alpha() {
        for r in [0.05, 0.2, 0.33, 0.6, 0.9] {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=20 {
                let alpha = 1.0 + i as f64 / 20.0;
                let v = concave_angle_value(alpha, r);
                assert!(v >= prev, "r={r} alpha={alpha}");
                prev = v;
            }
        }
    }

    #[test]
    fn closed_form_majorants() {
        let c = ReferenceFunction::convex();
        assert!((c.majorant(1.0 / 3.0, 1).unwrap() - 0.5).abs() < 1e-15);
        let k = ReferenceFunction::concave_pole(0.5).unwrap();
        let m = k.series().majorant_sum(0.2, 1).unwrap();
        assert!((m.value() - k.majorant(0.2, 1).unwrap()).abs() < 1e-14);
        let fa = ReferenceFunction::disk_automorphism(0.5).unwrap();
        // at r = 1/(1+2a) the majorant equals 1
        assert!((fa.majorant(0.5, 0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn subordinate_tail_dominates_function_itself() {
        // φ ≺ φ, so the subordinate envelope must bound φ's own coefficients
        for f in [
            ReferenceFunction::convex(),
            ReferenceFunction::concave_pole(0.6).unwrap(),
            ReferenceFunction::concave_angle(1.7).unwrap(),
            ReferenceFunction::disk_automorphism(0.4).unwrap(),
        ] {
            let t = f.subordinate_tail(64);
            for n in 1..=200 {
                assert!(
                    t.coefficient_bound(n) >= f.coefficient(n).norm() * (1.0 - 1e-12),
                    "{:?} n = {n}",
                    f.kind()
                );
            }
        }
    }
}
