//! The nine scalar functions whose unique zero on the admissible interval is
//! a Bohr radius.
//!
//! With `s = r^m` and `k = (K-1)/(K+1)`, so that `2K/(K+1) = 1 + k`:
//!
//! ```text
//! D  = t s/(1-s) + 2(1-t)K r/((K+1)(1-r)) - 1/2
//! E  = s/(1-s) + 2Kλ r/((K+1)(1-r)) - 1/2
//! F  = s/(1-s) + r/(1-s)^2 + λ(K-1 + r(K+1)) r/((K+1)(1-r)) - 1/2
//! G  = t k_p(s) + 2K(1-t)/(K+1) k_p(r) - p/(1+p)^2          on (0, p)
//! H  = k_p(s) + 2Kλ/(K+1) k_p(r) - p/(1+p)^2                 on (0, p)
//! FA = t f_α(s) + 2K(1-t)/(K+1) f_α(r) - 1/(2α)
//! GA = f_α(s) + 2Kλ/(K+1) f_α(r) - 1/(2α)
//! HA = f_α(s) + r f_α'(s) + λ(2K/(K+1) f_α(r) - r) - 1/(2α)
//! RU = (1-r)^2 - 4r(1 + k sqrt(1+r))
//! ```
//!
//! All but `RU` are increasing, negative at `0` and unbounded at the right
//! end, except `G` with `t = 1`, which stays bounded and may have no root.
//! `RU` decreases from `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::functions::{concave_angle_derivative, concave_angle_value, concave_pole_value};
use crate::{Error, Result};

/// Evaluation is refused this close to the right endpoint.
pub const ENDPOINT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    D,
    E,
    F,
    G,
    H,
    FA,
    GA,
    HA,
    RU,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::D,
        Family::E,
        Family::F,
        Family::G,
        Family::H,
        Family::FA,
        Family::GA,
        Family::HA,
        Family::RU,
    ];

    pub fn is_increasing(self) -> bool {
        self != Family::RU
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::H => "H",
            Family::FA => "FA",
            Family::GA => "GA",
            Family::HA => "HA",
            Family::RU => "RU",
        }
    }

    fn uses(self) -> Uses {
        use Family::*;
        let (m, t, lambda, p, alpha) = match self {
            D => (true, true, false, false, false),
            E | F => (true, false, true, false, false),
            G => (true, true, false, true, false),
            H => (true, false, true, true, false),
            FA => (true, true, false, false, true),
            GA | HA => (true, false, true, false, true),
            RU => (false, false, false, false, false),
        };
        Uses { m, t, lambda, p, alpha }
    }
}

struct Uses {
    m: bool,
    t: bool,
    lambda: bool,
    p: bool,
    alpha: bool,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::domain(format!("unknown family {s:?}")))
    }
}

/// Parameter bundle shared by all families. Each family reads only some of
/// the fields; [`Equation::new`] validates exactly those.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "K")]
    pub big_k: f64,
    pub m: u32,
    pub t: f64,
    pub lambda: f64,
    pub p: f64,
    pub alpha: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            big_k: 1.0,
            m: 1,
            t: 0.0,
            lambda: 1.0,
            p: 0.5,
            alpha: 1.0,
        }
    }
}

impl Params {
    pub fn new(big_k: f64, m: u32) -> Self {
        Params {
            big_k,
            m,
            ..Params::default()
        }
    }

    /// Builds from the dilatation bound `k = (K-1)/(K+1)`.
    pub fn from_k(k: f64, m: u32) -> Self {
        Params::new((1.0 + k) / (1.0 - k), m)
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn k(&self) -> f64 {
        (self.big_k - 1.0) / (self.big_k + 1.0)
    }

    /// `2K/(K+1)`.
    pub fn two_k_ratio(&self) -> f64 {
        2.0 * self.big_k / (self.big_k + 1.0)
    }

    pub fn validate_for(&self, family: Family) -> Result<()> {
        let bad = |name, value, range| Err(Error::InvalidParameter { name, value, range });
        if !(self.big_k >= 1.0 && self.big_k.is_finite()) {
            return bad("K", self.big_k, "[1, inf)");
        }
        let uses = family.uses();
        if uses.m && self.m < 1 {
            return bad("m", self.m as f64, "{1, 2, ...}");
        }
        if uses.t && !(0.0..=1.0).contains(&self.t) {
            return bad("t", self.t, "[0, 1]");
        }
        if uses.lambda && !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad("lambda", self.lambda, "(0, inf)");
        }
        if uses.p && !(self.p > 0.0 && self.p < 1.0) {
            return bad("p", self.p, "(0, 1)");
        }
        if uses.alpha && !(1.0..=2.0).contains(&self.alpha) {
            return bad("alpha", self.alpha, "[1, 2]");
        }
        Ok(())
    }
}

/// Sign information at the ends of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointSigns {
    /// Value at `r = 0`.
    pub at_lo: f64,
    /// Limit at the right endpoint; infinite for the pole families.
    pub at_hi: f64,
}

/// A validated family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equation {
    family: Family,
    params: Params,
}

impl Equation {
    pub fn new(family: Family, params: Params) -> Result<Self> {
        params.validate_for(family)?;
        Ok(Equation { family, params })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Open interval on which the function is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self.family {
            Family::G | Family::H => (0.0, self.params.p),
            _ => (0.0, 1.0),
        }
    }

    pub fn is_increasing(&self) -> bool {
        self.family.is_increasing()
    }

    pub fn endpoint_signs(&self) -> EndpointSigns {
        let p = self.params.p;
        let hi = match self.family {
            Family::RU => -4.0 * (1.0 + self.params.k() * 2f64.sqrt()),
            // with t = 1 only the r^m term is left, and it stays finite at p
            Family::G if self.params.t == 1.0 => {
                concave_pole_value(p, pow_u(p, self.params.m)) - p / ((1.0 + p) * (1.0 + p))
            }
            _ => f64::INFINITY,
        };
        EndpointSigns {
            at_lo: self.eval_unchecked(0.0),
            at_hi: hi,
        }
    }

    /// Value at `r`, for `0 <= r <= hi (1 - 1e-12)`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        let (_, hi) = self.domain();
        if !(r >= 0.0 && r <= hi * (1.0 - ENDPOINT_MARGIN)) {
            return Err(Error::domain(format!(
                "{}: r = {r} outside [0, {hi}) with margin",
                self.family
            )));
        }
        let v = self.eval_unchecked(r);
        if !v.is_finite() {
            return Err(Error::Numerical { x: r, value: v });
        }
        Ok(v)
    }

    fn eval_unchecked(&self, r: f64) -> f64 {
        let Params {
            t, lambda, p, alpha, ..
        } = self.params;
        let c = self.params.two_k_ratio();
        let s = pow_u(r, self.params.m);
        match self.family {
            Family::D => t * s / (1.0 - s) + (1.0 - t) * c * r / (1.0 - r) - 0.5,
            Family::E => s / (1.0 - s) + lambda * c * r / (1.0 - r) - 0.5,
            Family::F => {
                let big_k = self.params.big_k;
                s / (1.0 - s)
                    + r / ((1.0 - s) * (1.0 - s))
                    + lambda * (big_k - 1.0 + r * (big_k + 1.0)) * r / ((big_k + 1.0) * (1.0 - r))
                    - 0.5
            }
            Family::G => {
                t * concave_pole_value(p, s) + (1.0 - t) * c * concave_pole_value(p, r)
                    - p / ((1.0 + p) * (1.0 + p))
            }
            Family::H => {
                concave_pole_value(p, s) + lambda * c * concave_pole_value(p, r)
                    - p / ((1.0 + p) * (1.0 + p))
            }
            Family::FA => {
                t * concave_angle_value(alpha, s) + (1.0 - t) * c * concave_angle_value(alpha, r)
                    - 0.5 / alpha
            }
            Family::GA => {
                concave_angle_value(alpha, s) + lambda * c * concave_angle_value(alpha, r)
                    - 0.5 / alpha
            }
            Family::HA => {
                concave_angle_value(alpha, s)
                    + r * concave_angle_derivative(alpha, s)
                    + lambda * (c * concave_angle_value(alpha, r) - r)
                    - 0.5 / alpha
            }
            Family::RU => {
                let k = self.params.k();
                (1.0 - r) * (1.0 - r) - 4.0 * r * (1.0 + k * (1.0 + r).sqrt())
            }
        }
    }
}

/// `r^m` by repeated squaring.
pub fn pow_u(r: f64, mut m: u32) -> f64 {
    let mut base = r;
    let mut acc = 1.0;
    while m > 0 {
        if m & 1 == 1 {
            acc *= base;
        }
        base *= base;
        m >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_params() -> Vec<Params> {
        let mut out = Vec::new();
        for big_k in [1.0, 3.0, 25.0] {
            for m in [1, 4, 15] {
                for t in [0.0, 0.5, 1.0] {
                    for lambda in [0.2, 1.0, 5.0] {
                        for p in [0.3, 0.9] {
                            for alpha in [1.0, 1.5, 2.0] {
                                out.push(
                                    Params::new(big_k, m)
                                        .with_t(t)
                                        .with_lambda(lambda)
                                        .with_p(p)
                                        .with_alpha(alpha),
                                );
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn each_family_is_monotone_with_one_sign_change() {
        for family in Family::ALL {
            for params in sample_params() {
                let eq = Equation::new(family, params).unwrap();
                let (_, hi) = eq.domain();
                let n = 2000;
                let mut prev = eq.evaluate(0.0).unwrap();
                let mut changes = 0;
                for i in 1..n {
                    let r = hi * i as f64 / n as f64;
                    let v = eq.evaluate(r).unwrap();
                    if eq.is_increasing() {
                        assert!(v >= prev, "{family} {params:?} r={r}");
                    } else {
                        assert!(v <= prev, "{family} {params:?} r={r}");
                    }
                    if v.signum() != prev.signum() {
                        changes += 1;
                    }
                    prev = v;
                }
                let s = eq.endpoint_signs();
                let expect = usize::from(s.at_lo * s.at_hi < 0.0);
                assert_eq!(changes, expect, "{family} {params:?}");
            }
        }
    }

    #[test]
    fn endpoint_signs_bracket() {
        for family in Family::ALL {
            let eq = Equation::new(family, Params::new(2.0, 3).with_t(0.4)).unwrap();
            let s = eq.endpoint_signs();
            assert!(s.at_lo * s.at_hi < 0.0, "{family}");
        }
        let eq = Equation::new(Family::G, Params::new(1.0, 4).with_t(1.0).with_p(0.3)).unwrap();
        assert!(eq.endpoint_signs().at_hi < 0.0);
        assert!(matches!(
            crate::rootfind::solve(&eq, 1e-12),
            Err(Error::NoRoot { .. })
        ));
    }

    #[test]
    fn values_at_zero() {
        let p = Params::new(4.0, 2).with_p(0.6).with_alpha(1.25);
        let eq = |f| Equation::new(f, p).unwrap().evaluate(0.0).unwrap();
        assert_eq!(eq(Family::D), -0.5);
        assert_eq!(eq(Family::RU), 1.0);
        assert!((eq(Family::H) + 0.6 / 2.56).abs() < 1e-16);
        assert_eq!(eq(Family::GA), -0.4);
    }

    #[test]
    fn domain_and_margin() {
        let eq = Equation::new(Family::G, Params::new(1.0, 1).with_p(0.5).with_t(0.5)).unwrap();
        assert_eq!(eq.domain(), (0.0, 0.5));
        assert!(eq.evaluate(0.5).is_err());
        assert!(eq.evaluate(-0.1).is_err());
        assert!(eq.evaluate(0.4999).is_ok());
    }

    #[test]
    fn validation_only_checks_used_fields() {
        let p = Params::new(2.0, 1).with_t(5.0);
        assert!(Equation::new(Family::E, p).is_ok());
        assert!(matches!(
            Equation::new(Family::D, p),
            Err(Error::InvalidParameter { name: "t", .. })
        ));
        assert!(Equation::new(Family::RU, Params::new(0.5, 0)).is_err());
        assert!(Equation::new(Family::RU, Params::new(1.0, 0)).is_ok());
        assert!(Equation::new(Family::H, Params::new(1.0, 1).with_p(1.0)).is_err());
        assert!(Equation::new(Family::GA, Params::new(1.0, 1).with_alpha(2.5)).is_err());
        assert!(Equation::new(Family::E, Params::new(1.0, 1).with_lambda(0.0)).is_err());
    }

    #[test]
    fn known_values() {
        // E with K = m = λ = 1: s/(1-s) + r/(1-r) - 1/2 vanishes at r = 1/5
        let eq = Equation::new(Family::E, Params::new(1.0, 1)).unwrap();
        assert!(eq.evaluate(0.2).unwrap().abs() < 1e-15);
        // D with t = 1, m = 1 is r/(1-r) - 1/2
        let eq = Equation::new(Family::D, Params::new(7.0, 1).with_t(1.0)).unwrap();
        assert!(eq.evaluate(1.0 / 3.0).unwrap().abs() < 1e-15);
        // RU at K = 1 is (1-r)^2 - 4r, zero at 3 - 2 sqrt 2
        let eq = Equation::new(Family::RU, Params::new(1.0, 1)).unwrap();
        assert!(eq.evaluate(3.0 - 8f64.sqrt()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn k_round_trip() {
        for big_k in [1.0, 1.5, 3.0, 100.0] {
            let p = Params::new(big_k, 1);
            let back = Params::from_k(p.k(), 1);
            assert!((back.big_k - big_k).abs() < 1e-12 * big_k);
        }
        assert_eq!(Params::new(1.0, 1).k(), 0.0);
    }

    #[test]
    fn family_parse() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("ha".parse::<Family>().unwrap(), Family::HA);
        assert!("Q".parse::<Family>().is_err());
    }

    #[test]
    fn integer_power_matches_powi() {
        for m in 0..40 {
            for r in [0.0, 0.3, 0.77, 0.999] {
                let a = pow_u(r, m);
                let b = r.powi(m as i32);
                assert!((a - b).abs() <= 1e-15 * b.max(1e-300), "{r}^{m}");
            }
        }
    }

    proptest! {
        #[test]
        fn increasing_families_monotone(
            big_k in 1.0f64..60.0,
            m in 1u32..40,
            t in 0.0f64..=1.0,
            lambda in 0.01f64..10.0,
            p in 0.05f64..0.95,
            alpha in 1.0f64..=2.0,
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            let params = Params::new(big_k, m).with_t(t).with_lambda(lambda).with_p(p).with_alpha(alpha);
            for family in Family::ALL {
                let eq = Equation::new(family, params).unwrap();
                let (_, hi) = eq.domain();
                let (lo_r, hi_r) = if a < b { (a, b) } else { (b, a) };
                let (x, y) = (lo_r * hi * 0.999, hi_r * hi * 0.999);
                prop_assume!(y - x > 1e-9);
                let (fx, fy) = (eq.evaluate(x).unwrap(), eq.evaluate(y).unwrap());
                if eq.is_increasing() {
                    prop_assert!(fy >= fx, "{} {:?}", family, params);
                } else {
                    prop_assert!(fy <= fx, "{} {:?}", family, params);
                }
            }
        }
    }
}
