//! Singular points of the profile curve.
//!
//! `γ′ = l·(cos φ, sin φ)`, so the singular points are the zeros of `l`.
//! Each zero is classified from the jet of `l` and `η` (with `η′ = 2m`):
//!
//! | class | condition at `p`                           | front? |
//! |-------|--------------------------------------------|--------|
//! | 3/2   | `l′η′ ≠ 0`                                 | yes    |
//! | 5/2   | `l′ ≠ 0`, `η′ = 0`, `l″η″ − l′η‴ ≠ 0`      | no     |
//! | 4/3   | `l′ = 0`, `η′l″ ≠ 0`                       | yes    |
//! | 5/3   | `l′ = η′ = 0`, `η″l″ ≠ 0`                  | no     |
//!
//! Independently, [`classify_jet`] applies the determinant criteria for
//! plane curve germs to derivatives of `γ` itself; [`cross_check`] feeds it
//! a finite-difference jet and compares the two verdicts.

use serde::Serialize;

use crate::expr::Expr;
use crate::profile::{ProblemSpec, Profile, Tolerances};
use crate::quad::gauss_legendre;
use crate::{Error, Result};

/// Intervals in the dense scan for zeros of `l`.
pub const SCAN_INTERVALS: usize = 8192;
/// A quantity within this factor above the zero threshold is ambiguous.
const AMBIGUITY_BAND: f64 = 100.0;
/// Base step of the finite-difference jet.
pub const JET_STEP: f64 = 1e-2;
/// Relative threshold of the determinant tests on finite-difference jets.
pub const JET_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CuspClass {
    ThreeTwo,
    FiveTwo,
    FourThree,
    FiveThree,
    Degenerate,
}

impl CuspClass {
    pub fn label(self) -> &'static str {
        match self {
            CuspClass::ThreeTwo => "3/2-cusp",
            CuspClass::FiveTwo => "5/2-cusp",
            CuspClass::FourThree => "4/3-cusp",
            CuspClass::FiveThree => "5/3-cusp",
            CuspClass::Degenerate => "degenerate",
        }
    }

    /// Singularity of the revolved surface along the ring `t = p`.
    pub fn surface_label(self) -> &'static str {
        match self {
            CuspClass::ThreeTwo => "3/2-cuspidal edge",
            CuspClass::FiveTwo => "5/2-cuspidal edge",
            CuspClass::FourThree => "4/3-cuspidal edge",
            CuspClass::FiveThree => "5/3-cuspidal edge",
            CuspClass::Degenerate => "unclassified singular ring",
        }
    }
}

/// Derivatives of `l` and `η` at a zero of `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet {
    pub l1: f64,
    pub l2: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
}

impl Jet {
    fn scale(&self) -> f64 {
        [self.l1, self.l2, self.eta1, self.eta2, self.eta3]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `zero_tol · (1 + local derivative scale)`.
    pub fn zero_threshold(&self, zero_tol: f64) -> f64 {
        zero_tol * (1.0 + self.scale())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularPointReport {
    pub p: f64,
    pub l_value: f64,
    pub jet: Jet,
    pub cusp_class: CuspClass,
    pub is_front: bool,
    pub surface_label: String,
    pub zero_threshold: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Zero,
    NonZero,
    Unclear,
}

fn sign(v: f64, threshold: f64) -> Sign {
    if v.abs() <= threshold {
        Sign::Zero
    } else if v.abs() > AMBIGUITY_BAND * threshold {
        Sign::NonZero
    } else {
        Sign::Unclear
    }
}

/// Decision tree on the `(l, η)` jet; the four branches are tried in order.
/// Any quantity the tree needs that sits just above the zero threshold
/// makes the point `Degenerate` with a warning.
pub fn classify_by_jet(jet: &Jet, zero_tol: f64) -> (CuspClass, Vec<String>) {
    let z = jet.zero_threshold(zero_tol);
    let z2 = z * (1.0 + jet.scale());
    let l1 = sign(jet.l1, z);
    let e1 = sign(jet.eta1, z);
    let mut warnings = Vec::new();
    let mut unclear = |name: &str, s: Sign| {
        if s == Sign::Unclear {
            warnings.push(format!("{name} is near the zero threshold {z:e}"));
        }
        s
    };
    let l1 = unclear("l'", l1);
    let e1 = unclear("eta'", e1);
    let class = match (l1, e1) {
        (Sign::NonZero, Sign::NonZero) => CuspClass::ThreeTwo,
        (Sign::NonZero, Sign::Zero) => {
            let d = jet.l2 * jet.eta2 - jet.l1 * jet.eta3;
            match unclear("l''eta'' - l'eta'''", sign(d, z2)) {
                Sign::NonZero => CuspClass::FiveTwo,
                _ => CuspClass::Degenerate,
            }
        }
        (Sign::Zero, Sign::NonZero) => match unclear("eta'l''", sign(jet.eta1 * jet.l2, z2)) {
            Sign::NonZero => CuspClass::FourThree,
            _ => CuspClass::Degenerate,
        },
        (Sign::Zero, Sign::Zero) => match unclear("eta''l''", sign(jet.eta2 * jet.l2, z2)) {
            Sign::NonZero => CuspClass::FiveThree,
            _ => CuspClass::Degenerate,
        },
        _ => CuspClass::Degenerate,
    };
    (class, warnings)
}

/// Symbolic derivatives needed by the classifier.
struct JetExprs {
    l1: Expr,
    l2: Expr,
    m1: Expr,
    m2: Expr,
}

impl JetExprs {
    fn new(spec: &ProblemSpec) -> Self {
        let l1 = spec.l.differentiate();
        let l2 = l1.differentiate();
        let m1 = spec.m.differentiate();
        let m2 = m1.differentiate();
        JetExprs { l1, l2, m1, m2 }
    }

    fn at(&self, spec: &ProblemSpec, p: f64) -> Result<Jet> {
        Ok(Jet {
            l1: self.l1.eval(p)?,
            l2: self.l2.eval(p)?,
            eta1: 2.0 * spec.m.eval(p)?,
            eta2: 2.0 * self.m1.eval(p)?,
            eta3: 2.0 * self.m2.eval(p)?,
        })
    }
}

/// Classifies the zero `p` of `l`.
pub fn classify(spec: &ProblemSpec, p: f64, tol: &Tolerances) -> Result<SingularPointReport> {
    let l_value = spec.l.eval(p)?;
    let jet = JetExprs::new(spec).at(spec, p)?;
    let zero_threshold = jet.zero_threshold(tol.zero);
    if l_value.abs() > zero_threshold {
        return Err(Error::NotSingular { p, l_value });
    }
    let (cusp_class, warnings) = classify_by_jet(&jet, tol.zero);
    Ok(SingularPointReport {
        p,
        l_value,
        jet,
        cusp_class,
        is_front: jet.eta1.abs() > zero_threshold,
        surface_label: cusp_class.surface_label().to_string(),
        zero_threshold,
        warnings,
    })
}

fn bisect(l: &Expr, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = l.eval(a)?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = l.eval(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Safeguarded Newton iteration for a zero of `g` bracketed by [a, b].
fn newton_bracketed(g: &Expr, dg: &Expr, a0: f64, b0: f64) -> Result<f64> {
    let (mut a, mut b) = (a0, b0);
    let ga = g.eval(a)?;
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let gx = g.eval(x)?;
        if gx == 0.0 {
            return Ok(x);
        }
        if (gx < 0.0) == (ga < 0.0) {
            a = x;
        } else {
            b = x;
        }
        let slope = dg.eval_raw(x);
        let mut next = x - gx / slope;
        if !(next > a && next < b) || !next.is_finite() {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) || b - a <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::RootRefinement { a: a0, b: b0 })
}

/// All zeros of `l` in the domain: a dense sign-change scan refined by
/// bisection, plus local minima of `|l|` (even-order zeros) refined by
/// Newton's method on `l′`.
pub fn find_singular_points(spec: &ProblemSpec, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = SCAN_INTERVALS;
    let (lo, hi) = (spec.t_min, spec.t_max);
    let ts: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
        .collect();
    let ls = ts.iter().map(|&t| spec.l.eval(t)).collect::<Result<Vec<_>, _>>()?;
    let l1 = spec.l.differentiate();
    let l2 = l1.differentiate();
    let is_zero = |t: f64, v: f64| -> Result<bool> {
        let scale = l1.eval(t)?.abs().max(l2.eval(t)?.abs());
        Ok(v.abs() <= tol.zero * (1.0 + scale))
    };

    let mut roots = Vec::new();
    for (i, (&t, &v)) in ts.iter().zip(&ls).enumerate() {
        if v == 0.0 {
            roots.push(t);
            continue;
        }
        if i < n && ls[i + 1] != 0.0 && (v < 0.0) != (ls[i + 1] < 0.0) {
            roots.push(bisect(&spec.l, t, ts[i + 1])?);
        }
        let left = if i > 0 { ls[i - 1].abs() } else { f64::INFINITY };
        let right = if i < n { ls[i + 1].abs() } else { f64::INFINITY };
        if v.abs() > left || v.abs() > right || v.abs() >= tol.zero.sqrt() {
            continue;
        }
        let (a, b) = (ts[i.saturating_sub(1)], ts[(i + 1).min(n)]);
        let (ga, gb) = (l1.eval(a)?, l1.eval(b)?);
        let candidate = if ga == 0.0 {
            Some(a)
        } else if gb == 0.0 {
            Some(b)
        } else if (ga < 0.0) != (gb < 0.0) {
            Some(newton_bracketed(&l1, &l2, a, b)?)
        } else if i == 0 || i == n {
            Some(t)
        } else {
            None
        };
        if let Some(p) = candidate {
            if is_zero(p, spec.l.eval(p)?)? {
                roots.push(p);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    let merge = tol.zero * (1.0 + (hi - lo));
    let mut unique: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match unique.last() {
            Some(&last) if r - last <= merge => {}
            _ => unique.push(r),
        }
    }
    Ok(unique)
}

/// Derivatives 2–5 of a plane curve germ at a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveJet {
    pub d2: [f64; 2],
    pub d3: [f64; 2],
    pub d4: [f64; 2],
    pub d5: [f64; 2],
}

impl CurveJet {
    fn scale(&self) -> f64 {
        [self.d2, self.d3, self.d4, self.d5]
            .iter()
            .fold(0.0_f64, |m, v| m.max(norm(*v)))
    }

    /// The parameter scale `λ` with `max_k |α⁽ᵏ⁾|·λᵏ = 1`. Rescaling by it
    /// puts derivatives of different orders on a common footing.
    pub fn normalizing_step(&self) -> f64 {
        [(self.d2, 2), (self.d3, 3), (self.d4, 4), (self.d5, 5)]
            .iter()
            .filter(|(d, _)| norm(*d) > 0.0)
            .map(|(d, k)| norm(*d).powf(-1.0 / *k as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JetVerdict {
    pub class: CuspClass,
    /// A deciding quantity fell between "zero" and "clearly nonzero".
    pub ambiguous: bool,
    /// `det(α″,α‴)`, `det(α″, 3α⁽⁵⁾ − 10kα⁽⁴⁾)`, `det(α‴,α⁽⁴⁾)`, `det(α‴,α⁽⁵⁾)`
    /// for the jet rescaled by `lambda`; NaN where not evaluated.
    pub determinants: [f64; 4],
    /// `α‴ = kα″` in the rescaled jet.
    pub k: f64,
    pub lambda: f64,
    pub diagnostics: Vec<String>,
}

fn det(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Determinant criteria for a germ with `α′(p) = 0`, tried in the order
/// 3/2, 5/2, 4/3, 5/3. The jet is first rescaled to `α⁽ᵏ⁾λᵏ` (see
/// [`CurveJet::normalizing_step`]); thresholds are relative to the
/// largest rescaled derivative.
pub fn classify_jet(jet: &CurveJet, rel_tol: f64) -> JetVerdict {
    let mut verdict = JetVerdict {
        class: CuspClass::Degenerate,
        ambiguous: false,
        determinants: [f64::NAN; 4],
        k: f64::NAN,
        lambda: f64::NAN,
        diagnostics: Vec::new(),
    };
    if jet.scale() == 0.0 {
        verdict.diagnostics.push("all derivatives vanish".into());
        return verdict;
    }
    let lambda = jet.normalizing_step();
    verdict.lambda = lambda;
    let [d2, d3, d4, d5] = [
        (jet.d2, 2),
        (jet.d3, 3),
        (jet.d4, 4),
        (jet.d5, 5),
    ]
    .map(|(d, k)| {
        let w = lambda.powi(k);
        [d[0] * w, d[1] * w]
    });
    verdict.determinants = [det(d2, d3), f64::NAN, det(d3, d4), det(d3, d5)];
    let s = [d2, d3, d4, d5].iter().fold(0.0_f64, |m, v| m.max(norm(*v)));
    let vec_zero = rel_tol * s;
    let det_zero = rel_tol * s * s;
    let test = |name: &str, v: f64, zero: f64, verdict: &mut JetVerdict| {
        let r = sign(v, zero);
        if r == Sign::Unclear {
            verdict.ambiguous = true;
            verdict.diagnostics.push(format!("{name} = {v:e} is near its zero threshold {zero:e}"));
        }
        r
    };
    match test("|a''|", norm(d2), vec_zero, &mut verdict) {
        Sign::NonZero => match test("det(a'',a''')", verdict.determinants[0], det_zero, &mut verdict) {
            Sign::NonZero => verdict.class = CuspClass::ThreeTwo,
            Sign::Zero => {
                let k = (d3[0] * d2[0] + d3[1] * d2[1]) / (d2[0] * d2[0] + d2[1] * d2[1]);
                verdict.k = k;
                let combo = [3.0 * d5[0] - 10.0 * k * d4[0], 3.0 * d5[1] - 10.0 * k * d4[1]];
                verdict.determinants[1] = det(d2, combo);
                let zero = det_zero * (3.0 + 10.0 * k.abs());
                if test("det(a'',3a5-10k a4)", verdict.determinants[1], zero, &mut verdict)
                    == Sign::NonZero
                {
                    verdict.class = CuspClass::FiveTwo;
                }
            }
            Sign::Unclear => verdict
                .diagnostics
                .push("a''' is neither parallel nor transverse to a''".into()),
        },
        Sign::Zero => match test("det(a''',a4)", verdict.determinants[2], det_zero, &mut verdict) {
            Sign::NonZero => verdict.class = CuspClass::FourThree,
            Sign::Zero => {
                if test("det(a''',a5)", verdict.determinants[3], det_zero, &mut verdict)
                    == Sign::NonZero
                {
                    verdict.class = CuspClass::FiveThree;
                }
            }
            Sign::Unclear => {}
        },
        Sign::Unclear => {}
    }
    verdict
}

/// Evaluates `γ` near `p` by re-integrating from the stored state at `p`
/// with nested Gauss–Legendre rules, accurate to rounding for short steps.
struct LocalChart<'a> {
    spec: &'a ProblemSpec,
    p: f64,
    eta_p: f64,
    f_p: f64,
    g_p: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl<'a> LocalChart<'a> {
    fn new(profile: &'a Profile, p: f64) -> Result<Self> {
        let (eta_p, f_p, g_p) = profile.integrals().at(p)?;
        let (nodes, weights) = gauss_legendre(20);
        Ok(LocalChart {
            spec: profile.spec(),
            p,
            eta_p,
            f_p,
            g_p,
            nodes,
            weights,
        })
    }

    fn rule(&self, u: f64, mut f: impl FnMut(f64) -> [f64; 2]) -> [f64; 2] {
        let half = 0.5 * (u - self.p);
        let mid = 0.5 * (u + self.p);
        let mut acc = [0.0, 0.0];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            acc[0] += w * v[0];
            acc[1] += w * v[1];
        }
        [acc[0] * half, acc[1] * half]
    }

    fn eta(&self, u: f64) -> f64 {
        self.eta_p + self.rule(u, |v| [2.0 * self.spec.m.eval_raw(v), 0.0])[0]
    }

    fn fg(&self, u: f64) -> [f64; 2] {
        let d = self.rule(u, |v| {
            let l = self.spec.l.eval_raw(v);
            let (s, c) = self.eta(v).sin_cos();
            [l * s, l * c]
        });
        [self.f_p + d[0], self.g_p + d[1]]
    }

    /// `(x(u) − x(p), y(u))`.
    fn point(&self, u: f64) -> [f64; 2] {
        let (c1, c2) = (self.spec.c1, self.spec.c2);
        let dx = self.rule(u, |w| {
            let [f, g] = self.fg(w);
            let (s, c) = self.eta(w).sin_cos();
            let (a, b) = (f - c1, g - c2);
            [self.spec.l.eval_raw(w) * (b * s - a * c) / a.hypot(b), 0.0]
        })[0];
        let [f, g] = self.fg(u);
        [dx, (f - c1).hypot(g - c2)]
    }
}

fn stencil_jet(chart: &LocalChart<'_>, h: f64) -> [[f64; 2]; 4] {
    let pts: Vec<[f64; 2]> = (-3..=3).map(|k| chart.point(chart.p + k as f64 * h)).collect();
    let at = |k: i32, c: usize| pts[(k + 3) as usize][c];
    let mut out = [[0.0; 2]; 4];
    for c in 0..2 {
        out[0][c] = (at(1, c) - 2.0 * at(0, c) + at(-1, c)) / (h * h);
        out[1][c] = (at(2, c) - 2.0 * at(1, c) + 2.0 * at(-1, c) - at(-2, c)) / (2.0 * h.powi(3));
        out[2][c] = (at(2, c) - 4.0 * at(1, c) + 6.0 * at(0, c) - 4.0 * at(-1, c) + at(-2, c))
            / h.powi(4);
        out[3][c] = (at(3, c) - 4.0 * at(2, c) + 5.0 * at(1, c) - 5.0 * at(-1, c)
            + 4.0 * at(-2, c)
            - at(-3, c))
            / (2.0 * h.powi(5));
    }
    out
}

/// Finite-difference derivatives 2–5 of `γ` at `p`: central stencils at
/// steps `h`, `h/2`, `h/4` combined by two rounds of Richardson extrapolation.
pub fn curve_jet(profile: &Profile, p: f64, h: f64) -> Result<CurveJet> {
    let chart = LocalChart::new(profile, p)?;
    let levels: Vec<[[f64; 2]; 4]> = [h, h / 2.0, h / 4.0]
        .iter()
        .map(|&step| stencil_jet(&chart, step))
        .collect();
    let mut out = [[0.0; 2]; 4];
    for (d, slot) in out.iter_mut().enumerate() {
        for (c, value) in slot.iter_mut().enumerate() {
            let (a, b, e) = (levels[0][d][c], levels[1][d][c], levels[2][d][c]);
            let r1 = (4.0 * b - a) / 3.0;
            let r2 = (4.0 * e - b) / 3.0;
            *value = (16.0 * r2 - r1) / 15.0;
        }
    }
    if out.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "curve jet at t = {p} is not finite; the stencil leaves the admissible region"
        )));
    }
    Ok(CurveJet {
        d2: out[0],
        d3: out[1],
        d4: out[2],
        d5: out[3],
    })
}

/// Outcome of comparing the `(l, η)` classifier with the curve-jet criteria.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub p: f64,
    pub by_jet_of_l_eta: CuspClass,
    pub by_curve_jet: JetVerdict,
    pub curve_jet: CurveJet,
    pub agree: bool,
}

impl CrossCheck {
    /// Description of a disagreement, if any.
    pub fn disagreement(&self) -> Option<String> {
        (!self.agree).then(|| {
            format!(
                "at t = {}: l/eta jet says {}, curve jet says {} (determinants {:?}, ambiguous: {})",
                self.p,
                self.by_jet_of_l_eta.label(),
                self.by_curve_jet.class.label(),
                self.by_curve_jet.determinants,
                self.by_curve_jet.ambiguous
            )
        })
    }
}

pub fn cross_check(profile: &Profile, p: f64) -> Result<CrossCheck> {
    let report = classify(profile.spec(), p, profile.tolerances())?;
    let curve_jet = curve_jet(profile, p, JET_STEP)?;
    let verdict = classify_jet(&curve_jet, JET_TOL);
    Ok(CrossCheck {
        p,
        by_jet_of_l_eta: report.cusp_class,
        agree: verdict.class == report.cusp_class,
        by_curve_jet: verdict,
        curve_jet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(l: &str, m: &str) -> ProblemSpec {
        ProblemSpec::parse(l, m, 0.1, 0.1, -1.0, 1.0).unwrap()
    }

    fn roots(l: &str, lo: f64, hi: f64) -> Vec<f64> {
        let s = ProblemSpec::parse(l, "1", 1.0, 0.0, lo, hi).unwrap();
        find_singular_points(&s, &Tolerances::default()).unwrap()
    }

    #[test]
    fn finds_simple_and_even_zeros() {
        assert_eq!(roots("t", -1.0, 1.0), vec![0.0]);
        let r = roots("sin(t)", 0.0, 4.0 * PI);
        assert_eq!(r.len(), 5);
        for (k, p) in r.iter().enumerate() {
            assert!((p - k as f64 * PI).abs() < 1e-12, "{p}");
        }
        let r = roots("sin(t)^2", 0.0, 2.0 * PI);
        assert_eq!(r.len(), 3);
        for (k, p) in r.iter().enumerate() {
            assert!((p - k as f64 * PI).abs() < 1e-9, "{p}");
        }
        assert_eq!(roots("t^2 - 0.25", -1.0, 1.0).len(), 2);
        assert!(roots("t^2 + 1e-5", -1.0, 1.0).is_empty());
        assert_eq!(roots("(t - 0.3)^3", -1.0, 1.0).len(), 1);
    }

    #[test]
    fn worked_examples_classify() {
        let tol = Tolerances::default();
        let r = classify(&spec("t", "1"), 0.0, &tol).unwrap();
        assert_eq!((r.cusp_class, r.is_front), (CuspClass::ThreeTwo, true));
        assert_eq!(r.jet.l1, 1.0);
        assert_eq!(r.jet.eta1, 2.0);

        let r = classify(&spec("t", "t + t^2"), 0.0, &tol).unwrap();
        assert_eq!((r.cusp_class, r.is_front), (CuspClass::FiveTwo, false));
        assert_eq!(r.jet.l2 * r.jet.eta2 - r.jet.l1 * r.jet.eta3, -4.0);

        let r = classify(&spec("t^2", "1"), 0.0, &tol).unwrap();
        assert_eq!((r.cusp_class, r.is_front), (CuspClass::FourThree, true));

        let r = classify(&spec("t^2", "t"), 0.0, &tol).unwrap();
        assert_eq!((r.cusp_class, r.is_front), (CuspClass::FiveThree, false));
        assert_eq!((r.jet.eta2, r.jet.l2), (2.0, 2.0));
        assert_eq!(r.surface_label, "5/3-cuspidal edge");
    }

    #[test]
    fn degenerate_and_near_threshold() {
        let tol = Tolerances::default();
        let r = classify(&spec("t^3", "1"), 0.0, &tol).unwrap();
        assert_eq!(r.cusp_class, CuspClass::Degenerate);
        assert!(r.warnings.is_empty());
        let r = classify(&spec("t", "1e-7"), 0.0, &tol).unwrap();
        assert_eq!(r.cusp_class, CuspClass::Degenerate);
        assert_eq!(r.warnings.len(), 1);
        assert!(matches!(
            classify(&spec("t", "1"), 0.5, &tol),
            Err(Error::NotSingular { .. })
        ));
    }

    #[test]
    fn model_germs() {
        let v = classify_jet(
            &CurveJet { d2: [2.0, 0.0], d3: [0.0, 6.0], d4: [0.0; 2], d5: [0.0; 2] },
            1e-9,
        );
        assert_eq!(v.class, CuspClass::ThreeTwo);
        let v = classify_jet(
            &CurveJet { d2: [0.0; 2], d3: [6.0, 0.0], d4: [0.0, 24.0], d5: [0.0; 2] },
            1e-9,
        );
        assert_eq!(v.class, CuspClass::FourThree);
        let v = classify_jet(
            &CurveJet { d2: [2.0, 0.0], d3: [0.0; 2], d4: [0.0; 2], d5: [0.0, 120.0] },
            1e-9,
        );
        assert_eq!(v.class, CuspClass::FiveTwo);
        assert_eq!(v.k, 0.0);
        assert!((v.determinants[1] - 720.0 * v.lambda.powi(7)).abs() < 1e-12);
        // (t^3, t^5)
        let v = classify_jet(
            &CurveJet { d2: [0.0; 2], d3: [6.0, 0.0], d4: [0.0; 2], d5: [0.0, 120.0] },
            1e-9,
        );
        assert_eq!(v.class, CuspClass::FiveThree);
        // (t^2, t^4) is not 5-determined as a cusp
        let v = classify_jet(
            &CurveJet { d2: [2.0, 0.0], d3: [0.0; 2], d4: [0.0, 24.0], d5: [0.0; 2] },
            1e-9,
        );
        assert_eq!(v.class, CuspClass::Degenerate);
        let v = classify_jet(
            &CurveJet { d2: [1.0, 0.0], d3: [1.0, 1e-8], d4: [0.0; 2], d5: [0.0; 2] },
            1e-9,
        );
        assert!(v.ambiguous);
        assert_eq!(v.class, CuspClass::Degenerate);
    }

    #[test]
    fn curve_jet_matches_closed_form() {
        // l = t, m = 1: γ″(0) = l′·(cos φ0, sin φ0), γ‴(0) ⟂ part = -2 l′ η′ n
        let profile = Profile::new(spec("t", "1")).unwrap();
        let jet = curve_jet(&profile, 0.0, JET_STEP).unwrap();
        let e = [0.1 / 0.02f64.sqrt(), -0.1 / 0.02f64.sqrt()];
        assert!((jet.d2[0] - e[0]).abs() < 1e-8 && (jet.d2[1] - e[1]).abs() < 1e-8);
        assert!((det(jet.d2, jet.d3) + 4.0).abs() < 1e-6);
    }

    #[test]
    fn cross_checks_agree_on_examples() {
        for (l, m, class) in [
            ("t", "1", CuspClass::ThreeTwo),
            ("t", "t + t^2", CuspClass::FiveTwo),
            ("t^2", "1", CuspClass::FourThree),
            ("t^2", "t", CuspClass::FiveThree),
        ] {
            let profile = Profile::new(spec(l, m)).unwrap();
            let c = cross_check(&profile, 0.0).unwrap();
            assert!(c.agree, "{:?}", c.disagreement());
            assert_eq!(c.by_curve_jet.class, class);
            assert!(!c.by_curve_jet.ambiguous);
        }
    }
}
