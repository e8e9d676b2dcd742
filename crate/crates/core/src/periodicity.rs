//! Periodicity of the profile curve under a declared period `L` of `l` and `m`.
//!
//! With `η(L)`, `F(L)`, `G(L)` known, the integrals over `[L, t + L]` are a
//! rotation of those over `[0, t]`:
//!
//! ```text
//! η(t + L) = η(L) + η(t)
//! F(t + L) = F(L) + sin η(L)·G(t) + cos η(L)·F(t)
//! G(t + L) = G(L) + cos η(L)·G(t) − sin η(L)·F(t)
//! ```
//!
//! so `y(t + L) = y(t)` for all `t` exactly when the point `(F − c₁, G − c₂)`
//! returns to its rotated start after one period. The two components of that
//! closure condition are the residual reported by [`check`]. When
//! `cos η(L) = 1` they reduce to `F(L) = G(L) = 0`, independent of the constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::expr::Expr;
use crate::profile::{self, Integrals, ProblemSpec, Profile, Tolerances};
use crate::{Error, Result};

/// Points at which `l` and `m` are compared with their shifts by `L`.
const AUDIT_POINTS: usize = 50;
/// Points at which the shift laws are self-checked.
const SHIFT_POINTS: usize = 10;
/// Allowed shift-law residual.
pub const SHIFT_TOL: f64 = 1e-8;
/// Outside `branch_tol` but within this bound of `|1 − cos η(L)|`, both
/// branch tests are run and a disagreement is reported.
pub const NEAR_RESONANT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `1 − cos η(L) ≠ 0`: periodicity pins down the constants.
    Generic,
    /// `1 − cos η(L) = 0`: periodicity needs `F(L) = G(L) = 0`.
    Resonant,
}

/// Largest deviations from the three shift laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftResiduals {
    pub eta: f64,
    pub f: f64,
    pub g: f64,
}

impl ShiftResiduals {
    pub fn max(&self) -> f64 {
        self.eta.max(self.f).max(self.g)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityReport {
    #[serde(rename = "L")]
    pub period: f64,
    pub eta_l: f64,
    pub f_l: f64,
    pub g_l: f64,
    pub branch: Branch,
    pub phi0: f64,
    /// Closure residual `max(|r₁|, |r₂|)`; equals `max(|F(L)|, |G(L)|)`
    /// when `cos η(L) = 1`.
    pub residual: f64,
    /// `residual` is compared against this.
    pub threshold: f64,
    /// The angle condition in determinant form,
    /// `−cos φ₀·Q − sin φ₀·P` with `P = F(1 − cos η) + G sin η`,
    /// `Q = G(1 − cos η) − F sin η` (all at `L`). It vanishes whenever the
    /// curve is periodic, but can vanish without it.
    pub condition_residual: f64,
    /// `2|sin(η/2)|·|cos(φ₀ + η/2)F − sin(φ₀ + η/2)G|`; equal in magnitude
    /// to `condition_residual`.
    pub half_angle_residual: f64,
    pub periodic: bool,
    /// `x(L) − x(0)` when periodic.
    #[serde(rename = "T")]
    pub translation: Option<f64>,
    pub shift_residuals: ShiftResiduals,
    /// Near-resonant input on which the two branch tests disagree.
    pub ambiguous: bool,
    /// `l(0) = 0`: `φ₀` is then taken from the same formula as elsewhere.
    pub l_vanishes_at_anchor: bool,
    pub warnings: Vec<String>,
}

/// Checks `|e(t + L) − e(t)|` at pseudo-random points of the domain.
fn audit_period(which: &'static str, e: &Expr, period: f64, lo: f64, hi: f64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e41);
    for _ in 0..AUDIT_POINTS {
        let t = rng.gen_range(lo..=hi);
        let (a, b) = (e.eval(t)?, e.eval(t + period)?);
        let diff = (b - a).abs();
        if diff > 1e-9 * (1.0 + a.abs()) {
            return Err(Error::PeriodAudit {
                which,
                period,
                t,
                diff,
            });
        }
    }
    Ok(())
}

/// Shift-law residuals at `n` pseudo-random points of `[0, L]`. The
/// integrals must cover `[0, 2L]`.
pub fn shift_law_residuals(integrals: &Integrals, period: f64, n: usize, seed: u64) -> Result<ShiftResiduals> {
    let (eta_l, f_l, g_l) = integrals.at(period)?;
    let (s, c) = eta_l.sin_cos();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ShiftResiduals {
        eta: 0.0,
        f: 0.0,
        g: 0.0,
    };
    for _ in 0..n {
        let u = rng.gen_range(0.0..=period);
        let (eta, f, g) = integrals.at(u)?;
        let (eta_s, f_s, g_s) = integrals.at(u + period)?;
        out.eta = out.eta.max((eta_s - eta_l - eta).abs());
        out.f = out.f.max((f_s - (f_l + s * g + c * f)).abs());
        out.g = out.g.max((g_s - (g_l + c * g - s * f)).abs());
    }
    Ok(out)
}

/// The two closure components, zero exactly for an `L`-periodic profile.
fn closure(eta_l: f64, f_l: f64, g_l: f64, c1: f64, c2: f64) -> [f64; 2] {
    let (s, c) = eta_l.sin_cos();
    [
        s * (f_l - c1) + c * (g_l - c2) + c2,
        s * (g_l - c2) - c * (f_l - c1) - c1,
    ]
}

/// Decides whether the profile of `spec` is `L`-periodic.
pub fn check(spec: &ProblemSpec, period: f64, tol: &Tolerances) -> Result<PeriodicityReport> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
    }
    audit_period("l", &spec.l, period, spec.t_min, spec.t_max)?;
    audit_period("m", &spec.m, period, spec.t_min, spec.t_max)?;

    let lo = spec.t_min.min(0.0);
    let hi = spec.t_max.max(2.0 * period);
    let integrals = Integrals::build(&spec.l, &spec.m, lo, hi, tol.quad)?;
    let (eta_l, f_l, g_l) = integrals.at(period)?;
    let shift_residuals = shift_law_residuals(&integrals, period, SHIFT_POINTS, 0x5817)?;

    let (c1, c2) = (spec.c1, spec.c2);
    let phi0 = (-c2).atan2(c1);
    let (s, c) = eta_l.sin_cos();
    let gap = 1.0 - c;
    let branch = if gap.abs() <= tol.branch {
        Branch::Resonant
    } else {
        Branch::Generic
    };

    let r = closure(eta_l, f_l, g_l, c1, c2);
    let residual = r[0].abs().max(r[1].abs());
    let threshold = tol.period * (1.0 + f_l.abs() + g_l.abs());
    let periodic = residual <= threshold;

    let p = f_l * gap + g_l * s;
    let q = g_l * gap - f_l * s;
    let condition_residual = -phi0.cos() * q - phi0.sin() * p;
    let half = phi0 + 0.5 * eta_l;
    let half_angle_residual =
        2.0 * (0.5 * eta_l).sin().abs() * (half.cos() * f_l - half.sin() * g_l).abs();

    let mut warnings = Vec::new();
    let mut ambiguous = false;
    if gap.abs() > tol.branch && gap.abs() <= NEAR_RESONANT {
        let resonant_verdict = f_l.abs().max(g_l.abs()) <= threshold;
        if resonant_verdict != periodic {
            ambiguous = true;
            warnings.push(format!(
                "1 - cos eta(L) = {gap:e} is near resonance and the branch tests disagree"
            ));
        }
    }
    if shift_residuals.max() > SHIFT_TOL * (1.0 + f_l.abs() + g_l.abs()) {
        warnings.push(format!("shift-law self-check residual {:e}", shift_residuals.max()));
    }
    let l_vanishes_at_anchor = spec.l.eval(0.0)?.abs() <= tol.zero;
    if l_vanishes_at_anchor {
        warnings.push("l(0) = 0: the anchor is a singular point".into());
    }

    let translation = if periodic {
        let one_period = spec.with_domain(0.0, period)?;
        let profile = Profile::with_tolerances(one_period, *tol)?;
        Some(profile.point(period)?.x - profile.point(0.0)?.x)
    } else {
        None
    };

    Ok(PeriodicityReport {
        period,
        eta_l,
        f_l,
        g_l,
        branch,
        phi0,
        residual,
        threshold,
        condition_residual,
        half_angle_residual,
        periodic,
        translation,
        shift_residuals,
        ambiguous,
        l_vanishes_at_anchor,
        warnings,
    })
}

/// The unique constants making the profile `L`-periodic, or `None` in the
/// resonant branch. Fails with [`Error::YCollapse`] if the resulting radius
/// vanishes somewhere on `[0, L]`.
pub fn periodic_constants(l: &Expr, m: &Expr, period: f64, tol: &Tolerances) -> Result<Option<(f64, f64)>> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
    }
    let integrals = Integrals::build(l, m, 0.0, period, tol.quad)?;
    let (eta_l, f_l, g_l) = integrals.at(period)?;
    let (s, c) = eta_l.sin_cos();
    let gap = 1.0 - c;
    if gap.abs() <= tol.branch {
        return Ok(None);
    }
    let c1 = (f_l - f_l * c + g_l * s) / (2.0 * gap);
    let c2 = (g_l - g_l * c - f_l * s) / (2.0 * gap);

    let radius = |t: f64| -> f64 {
        let f = integrals.f.value_unchecked(t);
        let g = integrals.g.value_unchecked(t);
        (f - c1).hypot(g - c2)
    };
    let (t, y) = min_on_grid(radius, 0.0, period, 4096);
    if y <= profile::y_floor(c1, c2) {
        return Err(Error::YCollapse { t, y });
    }
    Ok(Some((c1, c2)))
}

/// Minimum of `f` over a uniform grid, refined by golden-section search in
/// the neighbouring cells.
fn min_on_grid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let step = (hi - lo) / n as f64;
    let (mut best_t, mut best) = (lo, f(lo));
    for i in 1..=n {
        let t = if i == n { hi } else { lo + step * i as f64 };
        let v = f(t);
        if v < best {
            best_t = t;
            best = v;
        }
    }
    let (mut a, mut b) = ((best_t - step).max(lo), (best_t + step).min(hi));
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v < best {
            best_t = t;
            best = v;
        }
    }
    (best_t, best)
}
