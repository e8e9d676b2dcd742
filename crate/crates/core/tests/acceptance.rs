//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singrev::periodicity::shift_law_residuals;
use singrev::profile::Integrals;
use singrev::surface::theta;
use singrev::*;

struct Fixture {
    name: &'static str,
    l: &'static str,
    m: &'static str,
    c: (f64, f64),
    domain: (f64, f64),
}

const CUSPS: [(Fixture, CuspClass, bool); 4] = [
    (Fixture { name: "l=t, m=1", l: "t", m: "1", c: (0.1, 0.1), domain: (-1.0, 1.0) }, CuspClass::ThreeTwo, true),
    (Fixture { name: "l=t, m=t+t^2", l: "t", m: "t + t^2", c: (0.1, 0.1), domain: (-1.0, 1.0) }, CuspClass::FiveTwo, false),
    (Fixture { name: "l=t^2, m=1", l: "t^2", m: "1", c: (0.1, 0.1), domain: (-1.0, 1.0) }, CuspClass::FourThree, true),
    (Fixture { name: "l=t^2, m=t", l: "t^2", m: "t", c: (0.1, 0.1), domain: (-1.0, 1.0) }, CuspClass::FiveThree, false),
];

fn periodic_fixtures() -> [(Fixture, f64); 3] {
    [
        (Fixture { name: "l=sin t, m=1", l: "sin(t)", m: "1", c: (1.0, 0.75), domain: (0.0, 4.0 * PI) }, 2.0 * PI),
        (Fixture { name: "l=cos t, m=sin t", l: "cos(t)", m: "sin(t)", c: (0.1, 0.1), domain: (0.0, 2.0 * PI) }, 2.0 * PI),
        (Fixture { name: "l=sin^2 t, m=1", l: "sin(t)^2", m: "1", c: (0.1, 0.1), domain: (0.0, 2.0 * PI) }, PI),
    ]
}

impl Fixture {
    fn spec(&self) -> ProblemSpec {
        ProblemSpec::parse(self.l, self.m, self.c.0, self.c.1, self.domain.0, self.domain.1).unwrap()
    }
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let tol = Tolerances::default();
    let mut slowest = Duration::ZERO;
    for (fx, class, _) in &CUSPS {
        let start = Instant::now();
        let spec = fx.spec();
        let report = classify(&spec, 0.0, &tol).map_err(|e| e.to_string())?;
        let profile = Profile::new(spec).map_err(|e| e.to_string())?;
        let check = cross_check(&profile, 0.0).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(report.cusp_class == *class, format!("{}: got {:?}", fx.name, report.cusp_class))?;
        ensure(check.agree, format!("{}: {}", fx.name, check.disagreement().unwrap_or_default()))?;
        ensure(elapsed < Duration::from_secs(1), format!("{}: took {elapsed:?}", fx.name))?;
    }
    Ok(format!("four cusp classes, jet oracle agrees, slowest {slowest:?}"))
}

fn criterion_2() -> Outcome {
    let tol = Tolerances::default();
    for (fx, _, front) in &CUSPS {
        let report = classify(&fx.spec(), 0.0, &tol).map_err(|e| e.to_string())?;
        ensure(report.is_front == *front, format!("{}: is_front = {}", fx.name, report.is_front))?;
    }
    Ok("3/2 and 4/3 are fronts; 5/2 and 5/3 are frontals only".into())
}

/// `∫₀^L f` by composite Simpson on `n` panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        acc += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn criterion_3() -> Outcome {
    let tol = Tolerances::default();
    let [ex2, ex3, ex4] = periodic_fixtures();
    let r2 = check_periodicity(&ex2.0.spec(), ex2.1, &tol).map_err(|e| e.to_string())?;
    ensure(r2.periodic, format!("{}: residual {:e}", ex2.0.name, r2.residual))?;

    let r3 = check_periodicity(&ex3.0.spec(), ex3.1, &tol).map_err(|e| e.to_string())?;
    ensure(!r3.periodic, format!("{}: reported periodic", ex3.0.name))?;
    // η = 2(1 − cos u) in closed form
    let eta = |u: f64| 2.0 * (1.0 - u.cos());
    let f_oracle = simpson(|u| u.cos() * eta(u).sin(), 0.0, 2.0 * PI, 20_000);
    let g_oracle = simpson(|u| u.cos() * eta(u).cos(), 0.0, 2.0 * PI, 20_000);
    ensure(
        (r3.f_l - f_oracle).abs() < 1e-8 && (r3.g_l - g_oracle).abs() < 1e-8,
        format!("{}: F, G = {}, {} vs {f_oracle}, {g_oracle}", ex3.0.name, r3.f_l, r3.g_l),
    )?;

    let r4 = check_periodicity(&ex4.0.spec(), ex4.1, &tol).map_err(|e| e.to_string())?;
    ensure(!r4.periodic, format!("{}: reported periodic", ex4.0.name))?;
    let anti = |u: f64| (2.0 * u).sin() / 4.0 - u / 4.0 - (4.0 * u).sin() / 16.0;
    let g_exact = anti(PI) - anti(0.0);
    ensure(
        (r4.g_l.abs() - g_exact.abs()).abs() <= 1e-8,
        format!("|G(pi)| = {} vs {}", r4.g_l.abs(), g_exact.abs()),
    )?;
    Ok(format!(
        "sin t periodic; cos t / sin t not (F={:.6}, G={:.6}); sin^2 t not, |G(pi)|={:.12}",
        r3.f_l,
        r3.g_l,
        r4.g_l.abs()
    ))
}

fn criterion_4() -> Outcome {
    let [ex2, ..] = periodic_fixtures();
    let spec = ex2.0.spec();
    let report = check_periodicity(&spec, ex2.1, &Tolerances::default()).map_err(|e| e.to_string())?;
    let t_shift = report.translation.ok_or("no translation measured")?;
    let profile = Profile::new(spec).map_err(|e| e.to_string())?;
    let ts: Vec<f64> = (0..=2000).map(|k| 2.0 * PI * k as f64 / 2000.0).collect();
    let shifted: Vec<f64> = ts.iter().map(|t| t + 2.0 * PI).collect();
    let a = profile.trace_at(&ts).map_err(|e| e.to_string())?;
    let b = profile.trace_at(&shifted).map_err(|e| e.to_string())?;
    let (mut dy, mut dx) = (0.0_f64, 0.0_f64);
    for (p, q) in a.iter().zip(&b) {
        dy = dy.max((q.y - p.y).abs());
        dx = dx.max((q.x - p.x - t_shift).abs());
    }
    ensure(dy <= 1e-6 && dx <= 1e-6, format!("sup |dy| = {dy:e}, sup |dx - T| = {dx:e}"))?;
    Ok(format!("T = {t_shift:.9}, sup|dy| = {dy:.1e}, sup|dx-T| = {dx:.1e}"))
}

fn criterion_5() -> Outcome {
    let tol = Tolerances::default();
    let (l, m) = (parse("1").unwrap(), parse("1").unwrap());
    let (c1, c2) = periodic_constants(&l, &m, PI / 2.0, &tol)
        .map_err(|e| e.to_string())?
        .ok_or("resonant branch")?;
    ensure((c1 - 0.5).abs() <= 1e-10 && c2.abs() <= 1e-10, format!("constants ({c1}, {c2})"))?;
    let profile = Profile::new(ProblemSpec::new(l, m, c1, c2, 0.0, PI / 2.0).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let (mut dy, mut dx, mut ode) = (0.0_f64, 0.0_f64, 0.0_f64);
    for s in profile.trace(1001).map_err(|e| e.to_string())? {
        dy = dy.max((s.y - 0.5).abs());
        dx = dx.max((s.x - s.t).abs());
        ode = ode.max(profile.ode_residual(&s).map_err(|e| e.to_string())?.abs());
    }
    ensure(dy <= 1e-8 && dx <= 1e-8, format!("|y - 1/2| = {dy:e}, |x - t| = {dx:e}"))?;
    ensure(ode <= 1e-9, format!("ODE residual {ode:e}"))?;
    Ok(format!("(c1, c2) = ({c1:.12}, {c2:.1e}); |y-1/2| = {dy:.1e}, |x-t| = {dx:.1e}, ODE {ode:.1e}"))
}

fn all_fixtures() -> Vec<Fixture> {
    let mut out: Vec<Fixture> = CUSPS.into_iter().map(|(f, _, _)| f).collect();
    out.extend(periodic_fixtures().into_iter().map(|(f, _)| f));
    out
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0_f64;
    let mut counted = 0;
    for fx in all_fixtures() {
        let profile = Profile::new(fx.spec()).map_err(|e| e.to_string())?;
        let cutoff = profile.tolerances().zero.sqrt();
        for s in profile.trace(2001).map_err(|e| e.to_string())? {
            if s.l.abs() <= cutoff {
                continue;
            }
            let r = profile.ode_residual(&s).map_err(|e| e.to_string())?.abs();
            if r > worst {
                worst = r;
            }
            counted += 1;
            ensure(r <= 1e-6, format!("{} at t = {}: residual {r:e}", fx.name, s.t))?;
        }
    }
    Ok(format!("max residual {worst:.1e} over {counted} regular samples"))
}

fn criterion_7() -> Outcome {
    let integrals = Integrals::build(&parse("t").unwrap(), &parse("1").unwrap(), -1.0, 1.0, 1e-10)
        .map_err(|e| e.to_string())?;
    let f_exact = |t: f64| ((2.0 * t).sin() - 2.0 * t * (2.0 * t).cos()) / 4.0;
    let g_exact = |t: f64| t * (2.0 * t).sin() / 2.0 + ((2.0 * t).cos() - 1.0) / 4.0;
    let mut worst = 0.0_f64;
    for k in 0..=4000 {
        let t = -1.0 + 2.0 * k as f64 / 4000.0;
        let (_, f, g) = integrals.at(t).map_err(|e| e.to_string())?;
        worst = worst.max((f - f_exact(t)).abs()).max((g - g_exact(t)).abs());
    }
    ensure(worst <= 1e-9, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e} on 4001 points"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0_f64;
    for (fx, period) in periodic_fixtures() {
        let spec = fx.spec();
        let integrals = Integrals::build(&spec.l, &spec.m, 0.0, 2.0 * period, 1e-10)
            .map_err(|e| e.to_string())?;
        let r = shift_law_residuals(&integrals, period, 10, 0xacce).map_err(|e| e.to_string())?;
        ensure(r.max() <= 1e-8, format!("{}: {r:?}", fx.name))?;
        worst = worst.max(r.max());
    }
    Ok(format!("max shift-law residual {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = 1e-4;
    let mut worst = 0.0_f64;
    for fx in all_fixtures() {
        for src in [fx.l, fx.m] {
            let e = parse(src).unwrap();
            for order in 1..=3 {
                let lower = e.nth_derivative(order - 1);
                let sym = e.nth_derivative(order);
                for _ in 0..1000 {
                    let t = rng.gen_range(fx.domain.0..=fx.domain.1);
                    let f = |k: f64| lower.eval(t + k * h).unwrap();
                    let fd = (f(-2.0) - 8.0 * f(-1.0) + 8.0 * f(1.0) - f(2.0)) / (12.0 * h);
                    let exact = sym.eval(t).map_err(|e| e.to_string())?;
                    let rel = (exact - fd).abs() / exact.abs().max(1.0);
                    worst = worst.max(rel);
                    ensure(rel <= 1e-6, format!("d^{order}/dt^{order} {src} at {t}: {exact} vs {fd}"))?;
                }
            }
        }
    }
    Ok(format!("orders 1-3, max relative deviation {worst:.1e}"))
}

fn build_obj(fx: &Fixture) -> Result<(Vec<CurveSample>, Mesh, String), String> {
    let spec = fx.spec();
    let profile = Profile::new(spec.clone()).map_err(|e| e.to_string())?;
    let samples = profile.trace(201).map_err(|e| e.to_string())?;
    let mut mesh = revolve(&samples, 48).map_err(|e| e.to_string())?;
    let points = find_singular_points(&spec, &Tolerances::default()).map_err(|e| e.to_string())?;
    let reports = points
        .iter()
        .map(|&p| classify(&spec, p, &Tolerances::default()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    mesh.annotate(surface::label_surface_singularities(&reports));
    let obj = mesh.to_obj_string();
    Ok((samples, mesh, obj))
}

fn criterion_10() -> Outcome {
    let cutoff = Tolerances::default().zero.sqrt();
    for fx in all_fixtures() {
        let (samples, mesh, obj) = build_obj(&fx)?;
        let n = mesh.n_theta;
        for (v, (p, nu)) in mesh.vertices.iter().zip(&mesh.normals).enumerate() {
            let len = (nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]).sqrt();
            ensure((len - 1.0).abs() <= 1e-12, format!("{}: |nu| = {len} at vertex {v}", fx.name))?;
            // ∂s/∂θ = (0, −y sin θ, y cos θ)
            let d_theta = [0.0, -p[2], p[1]];
            let dot = nu[1] * d_theta[1] + nu[2] * d_theta[2];
            ensure(dot.abs() <= 1e-8, format!("{}: nu . s_theta = {dot:e}", fx.name))?;
            let s = &samples[v / n];
            if s.l.abs() > cutoff {
                let (st, ct) = theta(v % n, n).sin_cos();
                let d_t = [
                    s.l * s.tangent[0],
                    s.l * s.tangent[1] * ct,
                    s.l * s.tangent[1] * st,
                ];
                let dot = nu[0] * d_t[0] + nu[1] * d_t[1] + nu[2] * d_t[2];
                ensure(dot.abs() <= 1e-8, format!("{}: nu . s_t = {dot:e}", fx.name))?;
            }
        }
        let perm = mesh.rotation_permutation(1);
        let mut faces: Vec<[usize; 3]> = mesh.faces.iter().map(|f| f.map(|i| perm[i])).collect();
        let mut expected = mesh.faces.clone();
        faces.sort_unstable();
        expected.sort_unstable();
        ensure(faces == expected, format!("{}: rotation does not permute faces", fx.name))?;
        let (sr, cr) = theta(1, n).sin_cos();
        for (v, &w) in perm.iter().enumerate() {
            let [x, y, z] = mesh.vertices[v];
            let r = [x, cr * y - sr * z, sr * y + cr * z];
            let q = mesh.vertices[w];
            let d = (r[0] - q[0]).abs().max((r[1] - q[1]).abs()).max((r[2] - q[2]).abs());
            ensure(d <= 1e-12 * (1.0 + x.abs() + y.abs() + z.abs()), format!("{}: rotation moves vertex {v}", fx.name))?;
        }
        let (_, _, again) = build_obj(&fx)?;
        ensure(obj == again, format!("{}: OBJ bytes differ between runs", fx.name))?;
    }
    Ok("unit normals, nu orthogonal to s_theta and s_t, rotation symmetry, identical OBJ bytes".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {id:>2}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL  {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
