//! Theorem-level API: effective radii, extremal mappings, sharpness and
//! randomized checks of the inequalities on subordinate harmonic mappings.
//!
//! Every theorem has a target `φ` (`c`, `k_p` or `f_α`), a radius family
//! and one of three left-hand sides, all evaluated at `z = r`:
//!
//! ```text
//! combination  t|h(r^m)| + (1-t)(sum_{n>=0} |a_n| r^n + sum_{n>=1} |b_n| r^n)
//! weighted     |h(r^m)| + λ sum_{n>=1} (|a_n| + |b_n|) r^n
//! derivative   |h(r^m)| + |h'(r^m)| r + λ(sum_{n>=2} |a_n| r^n + sum_{n>=1} |b_n| r^n)
//! ```
//!
//! The right-hand side is `|φ(0)| + d(φ(0), ∂φ(D))`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::functions::{FunctionKind, ReferenceFunction};
use crate::power_series::{PowerSeries, TailBound, C64};
use crate::radius_equations::{Equation, Family, Params};
use crate::rootfind::{self, RootEnclosure};
use crate::{Error, Result, BOHR_CAP};

/// Slack added to every certified allowance for rounding in the sums.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// Distance kept from the capped radius in [`check_inequality`].
pub const CAP_MARGIN: f64 = 1e-9;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    T2_1,
    T2_2,
    T2_3,
    T3_1,
    T3_2,
    T4_1,
    T4_2,
    T4_3,
}

/// Shape of the left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Combination,
    Weighted,
    Derivative,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::T2_3,
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T4_1,
        TheoremId::T4_2,
        TheoremId::T4_3,
    ];

    pub fn family(self) -> Family {
        match self {
            TheoremId::T2_1 => Family::D,
            TheoremId::T2_2 => Family::E,
            TheoremId::T2_3 => Family::F,
            TheoremId::T3_1 => Family::G,
            TheoremId::T3_2 => Family::H,
            TheoremId::T4_1 => Family::FA,
            TheoremId::T4_2 => Family::GA,
            TheoremId::T4_3 => Family::HA,
        }
    }

    pub fn form(self) -> Form {
        match self {
            TheoremId::T2_1 | TheoremId::T3_1 | TheoremId::T4_1 => Form::Combination,
            TheoremId::T2_2 | TheoremId::T3_2 | TheoremId::T4_2 => Form::Weighted,
            TheoremId::T2_3 | TheoremId::T4_3 => Form::Derivative,
        }
    }

    pub fn target_kind(self, params: &Params) -> FunctionKind {
        match self {
            TheoremId::T2_1 | TheoremId::T2_2 | TheoremId::T2_3 => FunctionKind::Convex,
            TheoremId::T3_1 | TheoremId::T3_2 => FunctionKind::ConcavePole { p: params.p },
            _ => FunctionKind::ConcaveAngle {
                alpha: params.alpha,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2_1",
            TheoremId::T2_2 => "T2_2",
            TheoremId::T2_3 => "T2_3",
            TheoremId::T3_1 => "T3_1",
            TheoremId::T3_2 => "T3_2",
            TheoremId::T4_1 => "T4_1",
            TheoremId::T4_2 => "T4_2",
            TheoremId::T4_3 => "T4_3",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    /// Accepts `T2_1`, `t2_1`, `2_1` and `2.1`.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().trim_start_matches(['T', 't']).replace('.', "_");
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name()[1..] == norm)
            .ok_or_else(|| Error::domain(format!("unknown theorem {s:?}")))
    }
}

/// A theorem with validated parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem {
    pub id: TheoremId,
    pub params: Params,
}

/// Raw root of the radius family and the radius actually claimed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveRadius {
    pub root: RootEnclosure,
    /// `min(root midpoint, 1/3)`.
    pub capped: f64,
}

impl Theorem {
    pub fn new(id: TheoremId, params: Params) -> Result<Self> {
        params.validate_for(id.family())?;
        Ok(Theorem { id, params })
    }

    pub fn equation(&self) -> Equation {
        Equation::new(self.id.family(), self.params).expect("validated in Theorem::new")
    }

    pub fn target(&self) -> ReferenceFunction {
        ReferenceFunction::new(self.id.target_kind(&self.params)).expect("validated in Theorem::new")
    }

    pub fn effective_radius(&self, tol: f64) -> Result<EffectiveRadius> {
        let root = rootfind::solve(&self.equation(), tol)?;
        Ok(EffectiveRadius {
            root,
            capped: root.midpoint().min(BOHR_CAP),
        })
    }

    /// `|φ(0)| + d(φ(0), ∂φ(D))`.
    pub fn rhs(&self) -> f64 {
        let phi = self.target();
        phi.value_at_origin().abs() + phi.boundary_distance()
    }

    /// Largest radius at which extremal mappings are evaluated.
    pub fn extremal_reach(&self) -> f64 {
        let (_, hi) = self.equation().domain();
        0.35f64.min(0.995 * hi)
    }
}

pub fn effective_radius(thm: &Theorem, tol: f64) -> Result<EffectiveRadius> {
    thm.effective_radius(tol)
}

pub fn rhs(thm: &Theorem) -> f64 {
    thm.rhs()
}

/// `f = h + conj(g)` with `g(0) = 0` and `|g'/h'| <= k`.
///
/// `h` and `g` are stored as series in `ζ = z/scale`; `scale` is `1`
/// except for the `k_p` extremal, whose coefficients would overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMapping {
    pub h: PowerSeries,
    pub g: PowerSeries,
    pub dilatation_bound: f64,
    pub scale: f64,
}

impl HarmonicMapping {
    pub fn new(h: PowerSeries, g: PowerSeries, dilatation_bound: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&dilatation_bound) {
            return Err(Error::InvalidParameter {
                name: "k",
                value: dilatation_bound,
                range: "[0, 1)",
            });
        }
        if g.coeffs()[0] != C64::new(0.0, 0.0) {
            return Err(Error::domain("co-analytic part must vanish at 0"));
        }
        Ok(HarmonicMapping {
            h,
            g,
            dilatation_bound,
            scale: 1.0,
        })
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        assert!(scale > 0.0 && scale <= 1.0, "scale must lie in (0, 1]");
        self.scale = scale;
        self
    }

    /// Coefficient of `z^n` in `h`.
    pub fn a(&self, n: usize) -> Option<C64> {
        self.h.coeff(n).map(|c| c / self.scale.powi(n as i32))
    }

    /// Coefficient of `z^n` in `g`.
    pub fn b(&self, n: usize) -> Option<C64> {
        self.g.coeff(n).map(|c| c / self.scale.powi(n as i32))
    }
}

fn extremal_scale(phi: &ReferenceFunction) -> f64 {
    match phi.kind() {
        FunctionKind::ConcavePole { p } => p,
        _ => 1.0,
    }
}

/// Truncation degree for the extremal series so that the `h` tail is below
/// `1e-17` at `reach`.
fn extremal_order(phi: &ReferenceFunction, reach: f64) -> usize {
    let scale = extremal_scale(phi);
    let tail = phi.scaled_series(0, scale).tail().expect("catalog series carry tails");
    let mut order = 64;
    while order < 1 << 16 && tail.remainder(reach / scale, order + 1) > 1e-17 {
        order *= 2;
    }
    order
}

/// `h = φ`, `g = k μ φ`.
pub fn make_extremal(thm: &Theorem, mu: C64) -> Result<HarmonicMapping> {
    let phi = thm.target();
    make_extremal_with_order(thm, mu, extremal_order(&phi, thm.extremal_reach()))
}

pub fn make_extremal_with_order(thm: &Theorem, mu: C64, order: usize) -> Result<HarmonicMapping> {
    if (mu.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu.norm(),
            range: "|mu| = 1",
        });
    }
    let k = thm.params.k();
    let phi = thm.target();
    let scale = extremal_scale(&phi);
    let h = phi.scaled_series(order, scale);
    let g = h.scale(mu * k);
    Ok(HarmonicMapping::new(h, g, k)?.with_scale(scale))
}

/// Left-hand side at `z = r` and a certified bound on what truncation left
/// out of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lhs {
    pub value: f64,
    pub allowance: f64,
}

pub fn lhs(thm: &Theorem, f: &HarmonicMapping, r: f64) -> Result<f64> {
    lhs_with_allowance(thm, f, r).map(|l| l.value)
}

pub fn lhs_with_allowance(thm: &Theorem, f: &HarmonicMapping, r: f64) -> Result<Lhs> {
    let Params { t, lambda, m, .. } = thm.params;
    let s = crate::radius_equations::pow_u(r, m);
    let sz = C64::new(s / f.scale, 0.0);
    let rr = r / f.scale;
    let hs = |series: &PowerSeries| -> Result<(f64, f64)> {
        if sz.re >= series.convergence_radius() {
            return Err(Error::domain(format!("r^m = {s} outside the series disk")));
        }
        let (v, rem) = series.eval_with_remainder(sz);
        Ok((v.norm(), rem.unwrap_or(0.0)))
    };
    let sum = |series: &PowerSeries, from: usize| -> Result<(f64, f64)> {
        let m = series.majorant_sum(rr, from)?;
        Ok((m.partial, m.remainder.unwrap_or(0.0)))
    };
    let (h_abs, h_rem) = hs(&f.h)?;
    let (b_sum, b_rem) = sum(&f.g, 1)?;
    let (value, allowance) = match thm.id.form() {
        Form::Combination => {
            let (a_sum, a_rem) = sum(&f.h, 0)?;
            (
                t * h_abs + (1.0 - t) * (a_sum + b_sum),
                t * h_rem + (1.0 - t) * (a_rem + b_rem),
            )
        }
        Form::Weighted => {
            let (a_sum, a_rem) = sum(&f.h, 1)?;
            (
                h_abs + lambda * (a_sum + b_sum),
                h_rem + lambda * (a_rem + b_rem),
            )
        }
        Form::Derivative => {
            let (d_abs, d_rem) = hs(&f.h.differentiate())?;
            let (d_abs, d_rem) = (d_abs / f.scale, d_rem / f.scale);
            let (a_sum, a_rem) = sum(&f.h, 2)?;
            (
                h_abs + d_abs * r + lambda * (a_sum + b_sum),
                h_rem + d_rem * r + lambda * (a_rem + b_rem),
            )
        }
    };
    Ok(Lhs {
        value,
        allowance: allowance + ROUNDING_SLACK * (1.0 + value.abs()),
    })
}

/// `lhs <= rhs + allowance` at `r`, with no restriction on `r` beyond the
/// series domains.
pub fn inequality_holds(thm: &Theorem, f: &HarmonicMapping, r: f64) -> Result<bool> {
    let l = lhs_with_allowance(thm, f, r)?;
    Ok(l.value <= thm.rhs() + l.allowance)
}

/// The claimed inequality at `r`; `r` must satisfy
/// `r <= min(1/3, root) - 1e-9`.
pub fn check_inequality(thm: &Theorem, f: &HarmonicMapping, r: f64) -> Result<bool> {
    let limit = thm.effective_radius(crate::DEFAULT_TOL)?.capped - CAP_MARGIN;
    // a few ulps of slack so that grids built from `limit` stay admissible
    if !(r >= 0.0 && r <= limit * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(Error::NotApplicable(format!(
            "r = {r} is not within the claimed radius {limit}"
        )));
    }
    inequality_holds(thm, f, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Sharpness {
    Checked { below_ok: bool, above_violates: bool },
    NotApplicable { root: f64 },
}

impl Sharpness {
    pub fn is_sharp(&self) -> bool {
        matches!(
            self,
            Sharpness::Checked {
                below_ok: true,
                above_violates: true
            }
        )
    }
}

/// Evaluates the extremal mapping (`μ = 1`) on both sides of the root.
/// Only claimed when the root does not exceed `1/3`.
pub fn check_sharpness(thm: &Theorem, eps: f64) -> Result<Sharpness> {
    let root = thm.effective_radius(crate::DEFAULT_TOL)?.root;
    let big_r = root.midpoint();
    if root.lo > BOHR_CAP {
        return Ok(Sharpness::NotApplicable { root: big_r });
    }
    if !(eps > 0.0 && eps < big_r) {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            range: "(0, root)",
        });
    }
    let f = make_extremal(thm, C64::new(1.0, 0.0))?;
    let rhs = thm.rhs();
    let below_ok = lhs(thm, &f, big_r - eps)? <= rhs + ROUNDING_SLACK;
    let above_violates = lhs(thm, &f, big_r + eps)? > rhs;
    Ok(Sharpness::Checked {
        below_ok,
        above_violates,
    })
}

// ---------------------------------------------------------------------------
// Random subordinate mappings

/// A small closed-form family of Schwarz functions (`w(0) = 0`, `|w| <= 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SchwarzFunction {
    /// `e^{iθ} z`
    Rotation { theta: f64 },
    /// `e^{iθ} z^2`
    RotatedSquare { theta: f64 },
    /// `e^{iθ} z (z + β)/(1 + βz)`
    Blaschke { theta: f64, beta: f64 },
    /// `sum w_j s_j` with nonnegative weights summing to one.
    Combination { parts: Vec<(f64, SchwarzFunction)> },
}

impl SchwarzFunction {
    pub fn series(&self, order: usize) -> PowerSeries {
        let rot = |theta: f64| C64::from_polar(1.0, theta);
        let zero = C64::new(0.0, 0.0);
        match self {
            SchwarzFunction::Rotation { theta } => {
                PowerSeries::from_fn(order, |n| if n == 1 { rot(*theta) } else { zero })
            }
            SchwarzFunction::RotatedSquare { theta } => {
                PowerSeries::from_fn(order, |n| if n == 2 { rot(*theta) } else { zero })
            }
            SchwarzFunction::Blaschke { theta, beta } => {
                let u = rot(*theta);
                PowerSeries::from_fn(order, |n| match n {
                    0 => zero,
                    1 => u * *beta,
                    n => u * (1.0 - beta * beta) * (-beta).powi(n as i32 - 2),
                })
            }
            SchwarzFunction::Combination { parts } => parts
                .iter()
                .fold(PowerSeries::zero(order), |acc, (w, s)| {
                    &acc + &s.series(order).scale(C64::new(*w, 0.0))
                }),
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        match self {
            SchwarzFunction::Rotation { theta } => C64::from_polar(1.0, *theta) * z,
            SchwarzFunction::RotatedSquare { theta } => C64::from_polar(1.0, *theta) * z * z,
            SchwarzFunction::Blaschke { theta, beta } => {
                C64::from_polar(1.0, *theta) * z * (z + beta) / (one + z * beta)
            }
            SchwarzFunction::Combination { parts } => {
                parts.iter().map(|(w, s)| s.eval(z) * w).sum()
            }
        }
    }

    fn draw_basic(rng: &mut ChaCha8Rng) -> Self {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        match rng.random_range(0..3) {
            0 => SchwarzFunction::Rotation { theta },
            1 => SchwarzFunction::RotatedSquare { theta },
            _ => SchwarzFunction::Blaschke {
                theta,
                beta: rng.random_range(-0.9..0.9),
            },
        }
    }

    pub fn draw(rng: &mut ChaCha8Rng) -> Self {
        if rng.random_bool(0.25) {
            let n = rng.random_range(2..=3);
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            SchwarzFunction::Combination {
                parts: raw
                    .into_iter()
                    .map(|w| (w / total, Self::draw_basic(rng)))
                    .collect(),
            }
        } else {
            Self::draw_basic(rng)
        }
    }
}

/// Complex dilatation `ω = g'/h'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Dilatation {
    /// `k e^{iθ}`
    Constant { k: f64, theta: f64 },
    /// `k e^{iθ} z`
    Linear { k: f64, theta: f64 },
}

impl Dilatation {
    pub fn series(&self, order: usize) -> PowerSeries {
        let zero = C64::new(0.0, 0.0);
        let (k, theta, at) = match *self {
            Dilatation::Constant { k, theta } => (k, theta, 0),
            Dilatation::Linear { k, theta } => (k, theta, 1),
        };
        let c = C64::from_polar(k, theta);
        PowerSeries::from_fn(order, |n| if n == at { c } else { zero }).with_tail(TailBound::EXACT)
    }

    pub fn draw(rng: &mut ChaCha8Rng, k: f64) -> Self {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        if rng.random_bool(0.5) {
            Dilatation::Constant { k, theta }
        } else {
            Dilatation::Linear { k, theta }
        }
    }
}

/// The draws behind a sampled mapping, kept for provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleDraw {
    pub schwarz_seed: u64,
    pub dilatation_seed: u64,
    pub schwarz: SchwarzFunction,
    pub dilatation: Dilatation,
}

/// `h = φ∘w`, `g = ∫ ω h'`, with `w` and `ω` drawn from their seeds.
///
/// The dilatation bound `k` is taken from the caller; `g` then satisfies
/// `|b_n| <= k` times the envelope of `h`.
pub fn sample_subordinate(
    phi: &ReferenceFunction,
    schwarz_seed: u64,
    dilatation_seed: u64,
    order: usize,
    k: f64,
) -> Result<(HarmonicMapping, SampleDraw)> {
    if order < 8 {
        return Err(Error::InvalidParameter {
            name: "order",
            value: order as f64,
            range: "[8, inf)",
        });
    }
    let schwarz = SchwarzFunction::draw(&mut ChaCha8Rng::seed_from_u64(schwarz_seed));
    let dilatation = Dilatation::draw(&mut ChaCha8Rng::seed_from_u64(dilatation_seed), k);
    let draw = SampleDraw {
        schwarz_seed,
        dilatation_seed,
        schwarz,
        dilatation,
    };
    let f = subordinate_from(phi, &draw.schwarz, &draw.dilatation, order, k)?;
    Ok((f, draw))
}

/// Deterministic construction from explicit `w` and `ω`.
pub fn subordinate_from(
    phi: &ReferenceFunction,
    w: &SchwarzFunction,
    omega: &Dilatation,
    order: usize,
    k: f64,
) -> Result<HarmonicMapping> {
    let tail = phi.subordinate_tail(order);
    let h = phi
        .series_with_order(order)
        .compose(&w.series(order))?
        .with_tail(tail);
    let g = omega
        .series(order)
        .multiply(&h.differentiate())
        .antiderivative()
        .truncate(order)
        .with_tail(TailBound {
            scale: tail.scale * k,
            ..tail
        });
    HarmonicMapping::new(h, g, k)
}

/// Truncation degree for subordinate samples: the smallest of a fixed
/// ladder whose envelope remainder at `reach` is below `1e-12`.
pub fn sample_order(phi: &ReferenceFunction, reach: f64) -> usize {
    const LADDER: [usize; 6] = [32, 48, 64, 96, 128, 192];
    LADDER
        .into_iter()
        .find(|&n| phi.subordinate_tail(n).remainder(reach, n + 1) < 1e-12)
        .unwrap_or(LADDER[LADDER.len() - 1])
}

/// splitmix64 of `base` advanced by `stream`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeds of sample `i` under `base`.
pub fn sample_seeds(base: u64, i: u64) -> (u64, u64) {
    (derive_seed(base, 2 * i), derive_seed(base, 2 * i + 1))
}

/// `sum_{n>=1} |b_n| r^n <= k sum_{n>=1} |a_n| r^n`.
pub fn lemma_dilatation_holds(f: &HarmonicMapping, r: f64) -> Result<bool> {
    let b = f.g.majorant_sum(r / f.scale, 1)?;
    let a = f.h.majorant_sum(r / f.scale, 1)?;
    Ok(b.partial <= f.dilatation_bound * a.partial + ROUNDING_SLACK)
}

/// `sum_{n>=from} |a_n| r^n <= sum_{n>=from} |c_n| r^n` for `h ≺ φ`.
pub fn lemma_subordination_holds(
    phi: &ReferenceFunction,
    f: &HarmonicMapping,
    r: f64,
    from: usize,
) -> Result<bool> {
    let a = f.h.majorant_sum(r / f.scale, from)?;
    let c = phi.majorant(r, from)?;
    Ok(a.partial <= c + ROUNDING_SLACK * (1.0 + c))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub sample: u64,
    pub schwarz_seed: u64,
    pub dilatation_seed: u64,
    pub check: String,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub theorem: TheoremId,
    pub base_seed: u64,
    pub samples: u64,
    pub radius: f64,
    pub inequality_checks: usize,
    pub lemma_checks: usize,
    pub violations: Vec<Violation>,
}

/// Radii at which the lemmas are checked.
pub const LEMMA_RADII: [f64; 3] = [0.1, 0.2, BOHR_CAP];

/// Draws `samples` mappings under `base_seed` and checks the inequality at
/// `radii` equispaced points of `(0, capped - 1e-9]`, plus both lemmas at
/// [`LEMMA_RADII`]. Samples run in parallel; the report is in sample order.
pub fn monte_carlo(thm: &Theorem, base_seed: u64, samples: u64, radii: usize) -> Result<MonteCarloReport> {
    let capped = thm.effective_radius(crate::DEFAULT_TOL)?.capped;
    let limit = capped - CAP_MARGIN;
    let phi = thm.target();
    let lemma_radii: Vec<f64> = LEMMA_RADII
        .into_iter()
        .filter(|&r| r < phi.analytic_radius())
        .collect();
    let reach = lemma_radii.iter().copied().fold(limit, f64::max);
    let order = sample_order(&phi, reach);
    let k = thm.params.k();
    let grid: Vec<f64> = (1..=radii).map(|i| limit * i as f64 / radii as f64).collect();

    let per_sample = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<(usize, usize, Vec<Violation>)> {
            let (ss, ds) = sample_seeds(base_seed, i);
            let (f, _) = sample_subordinate(&phi, ss, ds, order, k)?;
            let mut out = Vec::new();
            let mut bad = |check: &str, r: f64| {
                out.push(Violation {
                    sample: i,
                    schwarz_seed: ss,
                    dilatation_seed: ds,
                    check: check.to_string(),
                    r,
                })
            };
            for &r in &grid {
                if !inequality_holds(thm, &f, r)? {
                    bad("inequality", r);
                }
            }
            for &r in &lemma_radii {
                if !lemma_dilatation_holds(&f, r)? {
                    bad("dilatation-lemma", r);
                }
                for from in [1, 2] {
                    if !lemma_subordination_holds(&phi, &f, r, from)? {
                        bad(if from == 1 { "subordination-lemma-1" } else { "subordination-lemma-2" }, r);
                    }
                }
            }
            Ok((grid.len(), 3 * lemma_radii.len(), out))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = MonteCarloReport {
        theorem: thm.id,
        base_seed,
        samples,
        radius: capped,
        inequality_checks: 0,
        lemma_checks: 0,
        violations: Vec::new(),
    };
    for (ic, lc, v) in per_sample {
        report.inequality_checks += ic;
        report.lemma_checks += lc;
        report.violations.extend(v);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{concave_angle_value, concave_pole_value};
    use crate::DEFAULT_TOL;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    fn thm(id: TheoremId, params: Params) -> Theorem {
        Theorem::new(id, params).unwrap()
    }

    #[test]
    fn theorem_parsing() {
        assert_eq!("T2_1".parse::<TheoremId>().unwrap(), TheoremId::T2_1);
        assert_eq!("4.3".parse::<TheoremId>().unwrap(), TheoremId::T4_3);
        assert_eq!("t3_2".parse::<TheoremId>().unwrap(), TheoremId::T3_2);
        assert!("T3_3".parse::<TheoremId>().is_err());
    }

    #[test]
    fn effective_radius_examples() {
        let e = thm(TheoremId::T2_2, Params::new(9.0, 5).with_lambda(0.8))
            .effective_radius(DEFAULT_TOL)
            .unwrap();
        assert!((e.root.midpoint() - 0.2573).abs() < 5e-5);
        assert_eq!(e.capped, e.root.midpoint());
        let e = thm(TheoremId::T2_1, Params::new(1.0, 1).with_t(1.0))
            .effective_radius(DEFAULT_TOL)
            .unwrap();
        assert!((e.root.midpoint() - 1.0 / 3.0).abs() < 1e-12);
        let e = thm(TheoremId::T4_1, Params::new(1.0, 1).with_t(1.0).with_alpha(1.0))
            .effective_radius(DEFAULT_TOL)
            .unwrap();
        assert!((e.root.midpoint() - 1.0 / 3.0).abs() < 1e-12);
        // a large root is capped
        let e = thm(TheoremId::T2_2, Params::new(1.0, 3).with_lambda(0.05))
            .effective_radius(DEFAULT_TOL)
            .unwrap();
        assert!(e.root.midpoint() > BOHR_CAP && e.capped == BOHR_CAP);
    }

    #[test]
    fn rhs_values() {
        assert_eq!(thm(TheoremId::T2_3, Params::new(2.0, 1)).rhs(), 0.5);
        let t = thm(TheoremId::T3_1, Params::new(2.0, 1).with_p(0.7));
        assert!((t.rhs() - 0.7 / 2.89).abs() < 1e-16);
        let t = thm(TheoremId::T4_2, Params::new(2.0, 1).with_alpha(2.0));
        assert_eq!(t.rhs(), 0.25);
    }

    #[test]
    fn extremal_construction() {
        let t = thm(TheoremId::T2_1, Params::new(3.0, 1));
        let f = make_extremal(&t, one()).unwrap();
        assert_eq!(f.dilatation_bound, 0.5);
        for n in 1..=10 {
            assert_eq!(f.h.coeffs()[n], one());
            assert_eq!(f.g.coeffs()[n], C64::new(0.5, 0.0));
        }
        let t = thm(TheoremId::T2_2, Params::new(1.0, 1));
        let f = make_extremal(&t, one()).unwrap();
        assert!(f.g.coeffs().iter().all(|c| c.norm() == 0.0));

        let p = 0.5;
        let t = thm(TheoremId::T3_1, Params::new(3.0, 2).with_p(p));
        let f = make_extremal(&t, -one()).unwrap();
        let phi = ReferenceFunction::concave_pole(p).unwrap();
        assert_eq!(f.scale, p);
        for n in 1..=20 {
            let expect = -0.5 * phi.coefficient(n).re;
            assert!((f.b(n).unwrap().re - expect).abs() <= 1e-13 * expect.abs());
        }
        assert!(make_extremal(&t, C64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn lhs_examples() {
        let t = thm(TheoremId::T2_2, Params::new(1.0, 1));
        let f = make_extremal(&t, one()).unwrap();
        assert!((lhs(&t, &f, 0.2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(lhs(&t, &f, 0.0).unwrap(), 0.0);
        let t = thm(TheoremId::T2_1, Params::new(4.0, 3).with_t(0.3));
        let f = make_extremal(&t, one()).unwrap();
        let root = t.effective_radius(DEFAULT_TOL).unwrap().root.midpoint();
        assert!((lhs(&t, &f, root).unwrap() - t.rhs()).abs() < 1e-9);
    }

    #[test]
    fn proof_identity_closed_forms() {
        // D + 1/2 = t c(r^m) + (1-t)(1+k) c(r)
        let (big_k, m, t, r): (f64, u32, f64, f64) = (3.0, 4, 0.35, 0.21);
        let th = thm(TheoremId::T2_1, Params::new(big_k, m).with_t(t));
        let f = make_extremal(&th, one()).unwrap();
        let s: f64 = r.powi(m as i32);
        let k = th.params.k();
        let oracle = t * s / (1.0 - s) + (1.0 - t) * (1.0 + k) * r / (1.0 - r);
        assert!((lhs(&th, &f, r).unwrap() - oracle).abs() < 1e-14);
        // G analogue
        let p = 0.6;
        let th = thm(TheoremId::T3_1, Params::new(big_k, m).with_t(t).with_p(p));
        let f = make_extremal(&th, one()).unwrap();
        let oracle = t * concave_pole_value(p, s) + (1.0 - t) * (1.0 + k) * concave_pole_value(p, r);
        assert!((lhs(&th, &f, r).unwrap() - oracle).abs() < 1e-13);
        // FA analogue
        let alpha = 1.4;
        let th = thm(TheoremId::T4_1, Params::new(big_k, m).with_t(t).with_alpha(alpha));
        let f = make_extremal(&th, one()).unwrap();
        let oracle = t * concave_angle_value(alpha, s)
            + (1.0 - t) * (1.0 + k) * concave_angle_value(alpha, r);
        assert!((lhs(&th, &f, r).unwrap() - oracle).abs() < 1e-13);
    }

    #[test]
    fn proof_identity_every_theorem() {
        let params = Params::new(5.0, 3)
            .with_t(0.4)
            .with_lambda(0.7)
            .with_p(0.55)
            .with_alpha(1.6);
        for id in TheoremId::ALL {
            let th = thm(id, params);
            let f = make_extremal(&th, one()).unwrap();
            let eq = th.equation();
            for i in 1..=10 {
                let r = th.extremal_reach() * i as f64 / 10.0;
                let diff = lhs(&th, &f, r).unwrap() - th.rhs();
                assert!((diff - eq.evaluate(r).unwrap()).abs() < 1e-12, "{id} r={r}");
            }
        }
    }

    #[test]
    fn sharpness_examples() {
        let cases = [
            thm(TheoremId::T2_2, Params::new(9.0, 5).with_lambda(0.8)),
            thm(TheoremId::T3_1, Params::new(5.0, 3).with_p(0.9).with_t(0.2)),
            thm(TheoremId::T2_1, Params::new(1.0, 1).with_t(0.5)),
        ];
        for t in cases {
            assert!(check_sharpness(&t, 1e-4).unwrap().is_sharp(), "{:?}", t);
        }
        let big = thm(TheoremId::T2_2, Params::new(1.0, 3).with_lambda(0.05));
        assert!(matches!(
            check_sharpness(&big, 1e-4).unwrap(),
            Sharpness::NotApplicable { .. }
        ));
    }

    #[test]
    fn check_inequality_examples() {
        let t = thm(TheoremId::T2_2, Params::new(9.0, 5).with_lambda(0.8));
        let root = t.effective_radius(DEFAULT_TOL).unwrap().root.midpoint();
        let f = make_extremal(&t, one()).unwrap();
        assert!(check_inequality(&t, &f, root - 1e-4).unwrap());
        assert!(!inequality_holds(&t, &f, root + 1e-4).unwrap());
        assert!(matches!(
            check_inequality(&t, &f, root + 1e-4),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn degenerate_draws() {
        let phi = ReferenceFunction::convex();
        let id = SchwarzFunction::Rotation { theta: 0.0 };
        let omega = Dilatation::Constant { k: 0.0, theta: 0.0 };
        let f = subordinate_from(&phi, &id, &omega, 16, 0.0).unwrap();
        for n in 0..=16 {
            assert!((f.h.coeffs()[n] - phi.coefficient(n)).norm() < 1e-15);
            assert_eq!(f.g.coeffs()[n].norm(), 0.0);
        }
        let sq = SchwarzFunction::RotatedSquare { theta: 0.0 };
        let f = subordinate_from(&phi, &sq, &omega, 16, 0.0).unwrap();
        for n in 0..=16 {
            let expect = if n > 0 && n % 2 == 0 { 1.0 } else { 0.0 };
            assert_eq!(f.h.coeffs()[n], C64::new(expect, 0.0));
        }
    }

    #[test]
    fn schwarz_series_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let w = SchwarzFunction::draw(&mut rng);
            let s = w.series(80);
            assert_eq!(s.coeffs()[0].norm(), 0.0);
            for z in [C64::new(0.3, 0.1), C64::new(-0.2, 0.25), C64::new(0.0, -0.33)] {
                assert!((s.eval(z) - w.eval(z)).norm() < 1e-12, "{w:?}");
                assert!(w.eval(z).norm() <= z.norm() + 1e-15);
            }
        }
    }

    #[test]
    fn sampled_dilatation_is_bounded() {
        let phi = ReferenceFunction::concave_angle(1.3).unwrap();
        let k = 0.6;
        for seed in 0..20 {
            let (ss, ds) = sample_seeds(99, seed);
            let (f, draw) = sample_subordinate(&phi, ss, ds, 24, k).unwrap();
            let dh = f.h.differentiate();
            let dg = f.g.differentiate();
            for z in [C64::new(0.2, 0.1), C64::new(-0.1, 0.3)] {
                let w = dg.eval(z) / dh.eval(z);
                assert!(w.norm() <= k * (1.0 + 1e-9), "{draw:?}");
            }
        }
    }

    #[test]
    fn seeded_draw_is_reproducible() {
        let phi = ReferenceFunction::concave_pole(0.6).unwrap();
        let a = sample_subordinate(&phi, 42, 42, 32, 0.5).unwrap();
        let b = sample_subordinate(&phi, 42, 42, 32, 0.5).unwrap();
        assert_eq!(a, b);
        let bits = |f: &HarmonicMapping| {
            f.h.coeffs()
                .iter()
                .chain(f.g.coeffs())
                .flat_map(|c| [c.re.to_bits(), c.im.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a.0), bits(&b.0));
        assert!(sample_subordinate(&phi, 1, 1, 4, 0.5).is_err());
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..1000 {
            let (a, b) = sample_seeds(5, i);
            assert!(seen.insert(a) && seen.insert(b));
        }
    }

    #[test]
    fn zero_dilatation_samples_under_convex_theorem() {
        let t = thm(TheoremId::T2_1, Params::new(1.0, 2).with_t(0.3));
        let rep = monte_carlo(&t, 11, 40, 10).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert_eq!(rep.inequality_checks, 400);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let t = thm(TheoremId::T3_2, Params::new(4.0, 2).with_p(0.7).with_lambda(0.5));
        let a = monte_carlo(&t, 3, 16, 5).unwrap();
        let b = monte_carlo(&t, 3, 16, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.violations.is_empty(), "{:?}", a.violations);
    }
}
