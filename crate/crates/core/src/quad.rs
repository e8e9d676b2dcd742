//! Adaptive quadrature.
//!
//! [`integrate`] is a globally adaptive Gauss–Kronrod (7/15) scheme.
//! [`cumulative`] builds a dense antiderivative anchored at `t = 0`: the
//! domain is split into panels, each holding the Chebyshev expansion of the
//! integrand's antiderivative, refined by bisection until the trailing
//! Chebyshev coefficients fall below the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Default mixed absolute/relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_INTERVALS: usize = 4000;
const MAX_PANELS: usize = 1 << 16;
/// Chebyshev–Lobatto points per panel minus one.
const CHEB_DEGREE: usize = 16;
const INITIAL_PANEL_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error(
        "maximum subdivision exceeded; worst subinterval [{a}, {b}] with error estimate {error:e}"
    )]
    MaxSubdivisions { a: f64, b: f64, error: f64 },
    #[error("non-finite integrand value {value} at t = {t}")]
    NonFinite { t: f64, value: f64 },
    #[error("t = {t} lies outside the integrated range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("invalid quadrature request: {0}")]
    Invalid(&'static str),
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn sample(f: &impl Fn(f64) -> f64, t: f64) -> Result<f64, QuadError> {
    let value = f(t);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadError::NonFinite { t, value })
    }
}

/// Kronrod estimate and |Kronrod - Gauss| on [a, b].
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = sample(f, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let sum = sample(f, center - dx)? + sample(f, center + dx)?;
        kronrod += w * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b], stopping once the
/// summed error estimate is at most `tol·(1 + |I|)`.
pub fn integrate_with_error(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Estimate, QuadError> {
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::Invalid("tolerance must be positive and limits finite"));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, intervals: 0 });
    }
    if a > b {
        let est = integrate_with_error(f, b, a, tol)?;
        return Ok(Estimate { value: -est.value, ..est });
    }
    let (value, error) = gk15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value, error });
    let (mut total, mut total_err) = (value, error);
    while total_err > tol * (1.0 + total.abs()) {
        if heap.len() >= MAX_INTERVALS {
            let worst = heap.peek().expect("heap is non-empty");
            return Err(QuadError::MaxSubdivisions { a: worst.a, b: worst.b, error: worst.error });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(QuadError::MaxSubdivisions { a: worst.a, b: worst.b, error: worst.error });
        }
        let (v1, e1) = gk15(&f, worst.a, mid)?;
        let (v2, e2) = gk15(&f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Interval { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Interval { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum to shed the drift of the running totals
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), iv| (v + iv.value, e + iv.error));
    Ok(Estimate { value, error, intervals: heap.len() })
}

/// `∫_a^b f` to tolerance `tol·(1 + |I|)`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, QuadError> {
    integrate_with_error(f, a, b, tol).map(|e| e.value)
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// One panel of a [`CumulativeIntegral`].
#[derive(Debug, Clone)]
struct Panel {
    a: f64,
    b: f64,
    /// accumulated integral at `a`
    base: f64,
    /// Chebyshev coefficients of the antiderivative on [a, b], zero at `a`
    coeffs: [f64; CHEB_DEGREE + 2],
}

impl Panel {
    fn local(&self, t: f64) -> f64 {
        let s = ((2.0 * t - self.a - self.b) / (self.b - self.a)).clamp(-1.0, 1.0);
        clenshaw(&self.coeffs, s)
    }

    fn total(&self) -> f64 {
        self.coeffs.iter().sum()
    }
}

fn clenshaw(coeffs: &[f64], s: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * s * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + s * b1 - b2
}

struct PanelFit {
    coeffs: [f64; CHEB_DEGREE + 2],
    tail: f64,
    scale: f64,
}

fn fit_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<PanelFit, QuadError> {
    const N: usize = CHEB_DEGREE;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut values = [0.0; N + 1];
    for (j, v) in values.iter_mut().enumerate() {
        let s = (PI * j as f64 / N as f64).cos();
        let t = if j == 0 {
            b
        } else if j == N {
            a
        } else {
            mid + half * s
        };
        *v = sample(f, t)?;
    }
    // interpolant f(s) = sum_k c[k] T_k(s)
    let mut c = [0.0; N + 1];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, v) in values.iter().enumerate() {
            let w = if j == 0 || j == N { 0.5 } else { 1.0 };
            acc += w * v * (PI * (j * k) as f64 / N as f64).cos();
        }
        *ck = acc * if k == 0 || k == N { 1.0 } else { 2.0 } / N as f64;
    }
    // antiderivative coefficients in s, then scaled to t
    let at = |k: usize| if k <= N { c[k] } else { 0.0 };
    let mut coeffs = [0.0; N + 2];
    coeffs[1] = (2.0 * c[0] - at(2)) / 2.0;
    for (k, slot) in coeffs.iter_mut().enumerate().skip(2) {
        *slot = (at(k - 1) - at(k + 1)) / (2.0 * k as f64);
    }
    let mut offset = 0.0;
    for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot *= half;
        offset += if k % 2 == 0 { *slot } else { -*slot };
    }
    coeffs[0] = -offset;
    let tail = c[N].abs().max(c[N - 1].abs()).max(c[N - 2].abs());
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(PanelFit { coeffs, tail, scale })
}

/// Dense antiderivative `t ↦ ∫_0^t f`, queryable anywhere in its range.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    panels: Vec<Panel>,
    tol: f64,
}

impl CumulativeIntegral {
    /// Sorted panel boundaries, including both ends of the range.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.panels.iter().map(|p| p.a).collect();
        out.push(self.panels.last().map_or(0.0, |p| p.b));
        out
    }

    /// Accumulated integral at each breakpoint.
    pub fn values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.panels.iter().map(|p| p.base).collect();
        out.push(self.panels.last().map_or(0.0, |p| p.base + p.total()));
        out
    }

    /// Degree of the local polynomial on each panel.
    pub fn order(&self) -> usize {
        CHEB_DEGREE + 1
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn range(&self) -> (f64, f64) {
        (self.panels[0].a, self.panels[self.panels.len() - 1].b)
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.range();
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        t >= lo - slack && t <= hi + slack
    }

    /// `∫_0^t f`.
    pub fn value(&self, t: f64) -> Result<f64, QuadError> {
        if !self.contains(t) {
            let (lo, hi) = self.range();
            return Err(QuadError::OutOfRange { t, lo, hi });
        }
        Ok(self.value_unchecked(t))
    }

    /// As [`value`](Self::value) but clamps `t` into the range.
    pub fn value_unchecked(&self, t: f64) -> f64 {
        let idx = self
            .panels
            .partition_point(|p| p.a <= t)
            .saturating_sub(1)
            .min(self.panels.len() - 1);
        let panel = &self.panels[idx];
        if t == panel.a {
            return panel.base;
        }
        panel.base + panel.local(t)
    }
}

fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    span: f64,
    out: &mut Vec<(f64, f64, [f64; CHEB_DEGREE + 2])>,
) -> Result<(), QuadError> {
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        let fit = fit_panel(f, a, b)?;
        let allowed = tol * (1.0 + fit.scale) / span.max(1.0);
        if fit.tail <= allowed {
            out.push((a, b, fit.coeffs));
            continue;
        }
        let mid = 0.5 * (a + b);
        let too_small = (b - a) <= 1e-13 * (1.0 + a.abs().max(b.abs()));
        if too_small || out.len() + stack.len() >= MAX_PANELS {
            return Err(QuadError::MaxSubdivisions { a, b, error: fit.tail * (b - a) });
        }
        // right half first so that panels come off the stack left to right
        stack.push((mid, b));
        stack.push((a, mid));
    }
    Ok(())
}

/// Dense cumulative integral of `f` over [t_min, t_max], anchored at 0.
pub fn cumulative(
    f: impl Fn(f64) -> f64,
    t_min: f64,
    t_max: f64,
    tol: f64,
) -> Result<CumulativeIntegral, QuadError> {
    cumulative_with_breaks(f, &[t_min, t_max], tol)
}

/// As [`cumulative`], seeding the panel partition with `breaks` (which must
/// be sorted; its first and last entries define the range). Integrands
/// built from another cumulative integral should be seeded with that
/// integral's breakpoints so every panel sees a smooth function.
pub fn cumulative_with_breaks(
    f: impl Fn(f64) -> f64,
    breaks: &[f64],
    tol: f64,
) -> Result<CumulativeIntegral, QuadError> {
    if breaks.len() < 2 || !(tol > 0.0) {
        return Err(QuadError::Invalid("need a range and a positive tolerance"));
    }
    let (t_min, t_max) = (breaks[0], breaks[breaks.len() - 1]);
    if !(t_min <= 0.0 && 0.0 <= t_max) || !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(QuadError::Invalid("range must be finite, non-empty and contain the anchor 0"));
    }
    if breaks.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(QuadError::Invalid("breakpoints must be sorted"));
    }
    let mut seeds: Vec<f64> = breaks.to_vec();
    seeds.push(0.0);
    seeds.sort_by(f64::total_cmp);
    seeds.dedup();
    // split seeds wider than the initial panel width
    let mut grid = vec![seeds[0]];
    for w in seeds.windows(2) {
        let pieces = ((w[1] - w[0]) / INITIAL_PANEL_WIDTH).ceil().max(1.0) as usize;
        for k in 1..=pieces {
            grid.push(if k == pieces {
                w[1]
            } else {
                w[0] + (w[1] - w[0]) * k as f64 / pieces as f64
            });
        }
    }
    let span = t_max - t_min;
    let mut raw = Vec::new();
    for w in grid.windows(2) {
        refine(&f, w[0], w[1], tol, span, &mut raw)?;
    }
    // accumulate outward from the anchor
    let anchor = raw.partition_point(|(a, _, _)| *a < 0.0);
    let mut panels: Vec<Panel> = raw
        .into_iter()
        .map(|(a, b, coeffs)| Panel { a, b, base: 0.0, coeffs })
        .collect();
    let mut acc = 0.0;
    for panel in panels[anchor..].iter_mut() {
        panel.base = acc;
        acc += panel.total();
    }
    let mut acc = 0.0;
    for panel in panels[..anchor].iter_mut().rev() {
        acc -= panel.total();
        panel.base = acc;
    }
    Ok(CumulativeIntegral { panels, tol })
}
