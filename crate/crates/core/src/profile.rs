//! The profile curve `γ = (x, y)` and its frontal frame.

use std::cell::Cell;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::expr::{self, Expr};
use crate::quad::{self, CumulativeIntegral, QuadError};
use crate::{Error, Result};

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Mixed absolute/relative quadrature tolerance.
    pub quad: f64,
    /// Base of the "equals zero" threshold, scaled by `1 + local derivative scale`.
    pub zero: f64,
    /// Threshold on `|1 - cos η(L)|` separating the resonant periodicity branch.
    pub branch: f64,
    /// Base of the periodicity residual threshold, scaled by `1 + |F(L)| + |G(L)|`.
    pub period: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: quad::DEFAULT_TOL,
            zero: 1e-8,
            branch: 1e-9,
            period: 1e-8,
        }
    }
}

/// One surface family: `l`, `m = H·l`, the integration constants and the
/// parameter domain (which must contain the anchor `t = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub l: Expr,
    pub m: Expr,
    /// Mean curvature, for reporting and auditing only.
    pub h_display: Option<Expr>,
    pub c1: f64,
    pub c2: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Declared common period of `l` and `m`.
    pub period: Option<f64>,
}

impl ProblemSpec {
    pub fn new(l: Expr, m: Expr, c1: f64, c2: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let spec = ProblemSpec {
            l,
            m,
            h_display: None,
            c1,
            c2,
            t_min,
            t_max,
            period: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Convenience constructor from expression text.
    pub fn parse(l: &str, m: &str, c1: f64, c2: f64, t_min: f64, t_max: f64) -> Result<Self> {
        Self::new(expr::parse(l)?, expr::parse(m)?, c1, c2, t_min, t_max)
    }

    pub fn with_h(mut self, h: Expr) -> Self {
        self.h_display = Some(h);
        self
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }

    /// The same family on another domain.
    pub fn with_domain(&self, t_min: f64, t_max: f64) -> Result<Self> {
        let spec = ProblemSpec {
            t_min,
            t_max,
            ..self.clone()
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.c1, self.c2, self.t_min, self.t_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidSpec("constants and domain must be finite".into()));
        }
        if !(self.t_min < self.t_max) {
            return Err(Error::InvalidSpec(format!(
                "empty domain [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if !(self.t_min <= 0.0 && 0.0 <= self.t_max) {
            return Err(Error::InvalidSpec(format!(
                "domain [{}, {}] must contain the anchor t = 0",
                self.t_min, self.t_max
            )));
        }
        if let Some(period) = self.period {
            if !(period > 0.0 && period.is_finite()) {
                return Err(Error::InvalidSpec(format!("period must be positive, got {period}")));
            }
        }
        Ok(())
    }

    /// Radius below which the profile formulas are treated as collapsed.
    pub fn y_floor(&self) -> f64 {
        y_floor(self.c1, self.c2)
    }

    /// Checks `H·l = m` at 50 pseudo-random regular points; returns the
    /// largest residual, or `None` when no `H` was supplied.
    pub fn audit_h_display(&self, zero_tol: f64) -> Result<Option<f64>> {
        let Some(h) = &self.h_display else {
            return Ok(None);
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x4a11);
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for _ in 0..10_000 {
            if checked == 50 {
                break;
            }
            let t = rng.gen_range(self.t_min..=self.t_max);
            let l = self.l.eval(t)?;
            if l.abs() <= zero_tol.sqrt() {
                continue;
            }
            let m = self.m.eval(t)?;
            let Ok(hv) = h.eval(t) else { continue };
            let residual = (hv * l - m).abs();
            if residual > 1e-8 * (1.0 + m.abs()) {
                return Err(Error::InconsistentH { t, residual });
            }
            worst = worst.max(residual);
            checked += 1;
        }
        Ok(Some(worst))
    }
}

pub(crate) fn y_floor(c1: f64, c2: f64) -> f64 {
    1e-12 * (1.0 + c1.abs() + c2.abs())
}

/// `η`, `F` and `G` as dense functions of `t`. They depend only on `l` and
/// `m`, not on the constants.
#[derive(Debug, Clone)]
pub struct Integrals {
    pub eta: CumulativeIntegral,
    pub f: CumulativeIntegral,
    pub g: CumulativeIntegral,
}

impl Integrals {
    pub fn build(l: &Expr, m: &Expr, t_min: f64, t_max: f64, tol: f64) -> Result<Self> {
        let eta = quad::cumulative(|t| 2.0 * m.eval_raw(t), t_min, t_max, tol)
            .map_err(|e| explain(e, &[l, m]))?;
        let breaks = eta.breakpoints();
        let f = quad::cumulative_with_breaks(
            |t| l.eval_raw(t) * eta.value_unchecked(t).sin(),
            &breaks,
            tol,
        )
        .map_err(|e| explain(e, &[l, m]))?;
        let g = quad::cumulative_with_breaks(
            |t| l.eval_raw(t) * eta.value_unchecked(t).cos(),
            &breaks,
            tol,
        )
        .map_err(|e| explain(e, &[l, m]))?;
        Ok(Integrals { eta, f, g })
    }

    pub fn range(&self) -> (f64, f64) {
        self.eta.range()
    }

    /// `(η(t), F(t), G(t))`.
    pub fn at(&self, t: f64) -> Result<(f64, f64, f64)> {
        Ok((self.eta.value(t)?, self.f.value(t)?, self.g.value(t)?))
    }

    /// Sorted union of the breakpoints of `F` and `G`.
    fn breakpoints(&self) -> Vec<f64> {
        let mut out = self.f.breakpoints();
        out.extend(self.g.breakpoints());
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// Replaces a non-finite integrand report by the evaluation fault behind it.
fn explain(err: QuadError, exprs: &[&Expr]) -> Error {
    if let QuadError::NonFinite { t, .. } = err {
        for e in exprs {
            if let Err(fault) = e.eval(t) {
                return fault.into();
            }
        }
    }
    err.into()
}

/// One evaluated point of the profile curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub eta: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    /// `U = (-(F - c1), G - c2)`, with `|U| = y`.
    pub u: [f64; 2],
    /// Continuous angle of the frame direction (principal value from
    /// [`Profile::point`], unwrapped by [`Profile::trace`]).
    pub phi: f64,
    /// `(cos φ, sin φ)`; `γ′ = l·tangent`.
    pub tangent: [f64; 2],
    /// Unit normal of the frontal, perpendicular to `tangent`.
    pub normal: [f64; 2],
}

/// A prepared problem: the spec together with its cumulative integrals.
#[derive(Debug, Clone)]
pub struct Profile {
    spec: ProblemSpec,
    tol: Tolerances,
    integrals: Integrals,
    x: CumulativeIntegral,
}

impl Profile {
    pub fn new(spec: ProblemSpec) -> Result<Self> {
        Self::with_tolerances(spec, Tolerances::default())
    }

    pub fn with_tolerances(spec: ProblemSpec, tol: Tolerances) -> Result<Self> {
        spec.validate()?;
        let (c1, c2) = (spec.c1, spec.c2);
        let floor = spec.y_floor();
        if c1.hypot(c2) <= floor {
            return Err(Error::YCollapse {
                t: 0.0,
                y: c1.hypot(c2),
            });
        }
        let integrals = Integrals::build(&spec.l, &spec.m, spec.t_min, spec.t_max, tol.quad)?;
        let collapse = Cell::new(None);
        let x = quad::cumulative_with_breaks(
            |t| {
                let eta = integrals.eta.value_unchecked(t);
                let a = integrals.f.value_unchecked(t) - c1;
                let b = integrals.g.value_unchecked(t) - c2;
                let y = a.hypot(b);
                if y <= floor {
                    collapse.set(Some((t, y)));
                    return f64::NAN;
                }
                spec.l.eval_raw(t) * (b * eta.sin() - a * eta.cos()) / y
            },
            &integrals.breakpoints(),
            tol.quad,
        );
        let x = match x {
            Ok(x) => x,
            Err(e) => {
                if let Some((t, y)) = collapse.get() {
                    return Err(Error::YCollapse { t, y });
                }
                // the integrand jumps where (F - c1, G - c2) passes through zero
                if let QuadError::MaxSubdivisions { a, b, .. } = e {
                    let reach = 1e-4 * (1.0 + a.abs());
                    let (lo, hi) = ((a - reach).max(spec.t_min), (b + reach).min(spec.t_max));
                    let (t, y) = (0..=200)
                        .map(|k| {
                            let t = lo + (hi - lo) * k as f64 / 200.0;
                            let a = integrals.f.value_unchecked(t) - c1;
                            let b = integrals.g.value_unchecked(t) - c2;
                            (t, a.hypot(b))
                        })
                        .min_by(|p, q| p.1.total_cmp(&q.1))
                        .expect("non-empty grid");
                    if y <= 1e-5 * (1.0 + c1.abs() + c2.abs()) {
                        return Err(Error::YCollapse { t, y });
                    }
                }
                return Err(explain(e, &[&spec.l, &spec.m]));
            }
        };
        Ok(Profile {
            spec,
            tol,
            integrals,
            x,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn integrals(&self) -> &Integrals {
        &self.integrals
    }

    /// `φ(0)`: the frame at the anchor points along `(c1, -c2)`.
    pub fn phi0(&self) -> f64 {
        (-self.spec.c2).atan2(self.spec.c1)
    }

    /// Evaluates the curve and its frame at `t`; `phi` is the principal value.
    pub fn point(&self, t: f64) -> Result<CurveSample> {
        let (eta, f, g) = self.integrals.at(t)?;
        let x = self.x.value(t)?;
        let l = self.spec.l.eval(t)?;
        let a = f - self.spec.c1;
        let b = g - self.spec.c2;
        let y = a.hypot(b);
        if y <= self.spec.y_floor() {
            return Err(Error::YCollapse { t, y });
        }
        let u = [-a, b];
        let (s, c) = eta.sin_cos();
        // R_{-η} U / y
        let tangent = [(c * u[0] + s * u[1]) / y, (-s * u[0] + c * u[1]) / y];
        let phi = tangent[1].atan2(tangent[0]);
        Ok(CurveSample {
            t,
            x,
            y,
            eta,
            f,
            g,
            l,
            u,
            phi,
            tangent,
            normal: [-tangent[1], tangent[0]],
        })
    }

    /// `n_samples` uniformly spaced samples over the domain, with `φ`
    /// unwrapped continuously from its branch at `t = 0`.
    pub fn trace(&self, n_samples: usize) -> Result<Vec<CurveSample>> {
        if n_samples < 2 {
            return Err(Error::InvalidArgument(format!(
                "a trace needs at least 2 samples, got {n_samples}"
            )));
        }
        let (lo, hi) = (self.spec.t_min, self.spec.t_max);
        let last = n_samples - 1;
        let ts: Vec<f64> = (0..n_samples)
            .map(|i| {
                if i == last {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / last as f64
                }
            })
            .collect();
        self.trace_at(&ts)
    }

    /// Samples at the given increasing parameters, `φ` unwrapped.
    pub fn trace_at(&self, ts: &[f64]) -> Result<Vec<CurveSample>> {
        if ts.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("trace parameters must increase".into()));
        }
        let mut samples = ts
            .par_iter()
            .map(|&t| self.point(t))
            .collect::<Result<Vec<_>>>()?;
        unwrap_phases(&mut samples, self.phi0());
        Ok(samples)
    }

    /// Exact `φ′` from `η′ = 2m` and the rotation rate of `U`.
    pub fn phi_derivative(&self, s: &CurveSample) -> Result<f64> {
        let m = self.spec.m.eval(s.t)?;
        let (sin_eta, cos_eta) = s.eta.sin_cos();
        let du = [-s.l * sin_eta, s.l * cos_eta];
        let turn = (s.u[0] * du[1] - s.u[1] * du[0]) / (s.y * s.y);
        Ok(turn - 2.0 * m)
    }

    /// `2m·y - l·cos φ + y·φ′`, which vanishes for a curve with the
    /// prescribed mean curvature.
    pub fn ode_residual(&self, s: &CurveSample) -> Result<f64> {
        let m = self.spec.m.eval(s.t)?;
        let dphi = self.phi_derivative(s)?;
        Ok(2.0 * m * s.y - s.l * s.tangent[0] + s.y * dphi)
    }
}

/// Wraps an angle difference into (-π, π].
pub(crate) fn wrap_angle(d: f64) -> f64 {
    let w = (d + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

fn unwrap_phases(samples: &mut [CurveSample], phi0: f64) {
    let Some(anchor) = samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.t.abs().total_cmp(&b.1.t.abs()))
        .map(|(i, _)| i)
    else {
        return;
    };
    samples[anchor].phi = phi0 + wrap_angle(samples[anchor].phi - phi0);
    for i in anchor + 1..samples.len() {
        let prev = samples[i - 1].phi;
        samples[i].phi = prev + wrap_angle(samples[i].phi - prev);
    }
    for i in (0..anchor).rev() {
        let next = samples[i + 1].phi;
        samples[i].phi = next + wrap_angle(samples[i].phi - next);
    }
}
