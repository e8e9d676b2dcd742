//! The revolved surface `s(t, θ) = (x(t), y(t) cos θ, y(t) sin θ)`.
//!
//! Its unit normal is `ν = (sin φ, −cos φ cos θ, −cos φ sin θ)`, and
//! `s_t × s_θ = l·y·ν`. With this normal the mean curvature is
//! `H = ½(cos φ / y − φ′ / l)`; the cylinder of radius ½ with `m = l = 1`
//! has `φ ≡ 0`, an inward normal and `H = +1`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use serde::Serialize;

use crate::numfmt::sig17;
use crate::profile::{wrap_angle, CurveSample, Profile};
use crate::singularity::SingularPointReport;
use crate::{Error, Result};

/// Step of the five-point difference used for `φ′` in the audit, divided by
/// the local turning-rate bound `|l|/y + 2|m|` when that exceeds 1.
pub const AUDIT_STEP: f64 = 1e-3;

/// A profile cusp and the ring of the surface it produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingAnnotation {
    pub t: f64,
    /// Index of the mesh ring at `t`, if the mesh has one there.
    pub ring: Option<usize>,
    pub label: String,
}

/// Triangulated band, `rings × n_theta` vertices in t-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub n_theta: usize,
    /// Profile parameter of each ring.
    pub ring_t: Vec<f64>,
    pub annotations: Vec<RingAnnotation>,
}

pub fn theta(j: usize, n_theta: usize) -> f64 {
    2.0 * PI * j as f64 / n_theta as f64
}

/// Revolves traced samples about the x-axis.
pub fn revolve(samples: &[CurveSample], n_theta: usize) -> Result<Mesh> {
    if n_theta < 3 {
        return Err(Error::InvalidArgument(format!("n_theta must be at least 3, got {n_theta}")));
    }
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("a mesh needs at least 2 profile samples".into()));
    }
    if let Some(s) = samples.iter().find(|s| !(s.y > 0.0)) {
        return Err(Error::YCollapse { t: s.t, y: s.y });
    }
    let angles: Vec<(f64, f64)> = (0..n_theta).map(|j| theta(j, n_theta).sin_cos()).collect();
    let (vertices, normals): (Vec<_>, Vec<_>) = samples
        .par_iter()
        .flat_map_iter(|s| {
            let (sin_phi, cos_phi) = (s.tangent[1], s.tangent[0]);
            angles.iter().map(move |&(st, ct)| {
                (
                    [s.x, s.y * ct, s.y * st],
                    [sin_phi, -cos_phi * ct, -cos_phi * st],
                )
            })
        })
        .unzip();
    let n = n_theta;
    let faces = (0..samples.len() - 1)
        .flat_map(|i| {
            (0..n).flat_map(move |j| {
                let v00 = i * n + j;
                let v10 = (i + 1) * n + j;
                let v11 = (i + 1) * n + (j + 1) % n;
                let v01 = i * n + (j + 1) % n;
                [[v00, v10, v11], [v00, v11, v01]]
            })
        })
        .collect();
    Ok(Mesh {
        vertices,
        normals,
        faces,
        n_theta,
        ring_t: samples.iter().map(|s| s.t).collect(),
        annotations: Vec::new(),
    })
}

/// One annotation per profile singular point.
pub fn label_surface_singularities(reports: &[SingularPointReport]) -> Vec<RingAnnotation> {
    reports
        .iter()
        .map(|r| RingAnnotation {
            t: r.p,
            ring: None,
            label: r.cusp_class.surface_label().to_string(),
        })
        .collect()
}

impl Mesh {
    pub fn rings(&self) -> usize {
        self.ring_t.len()
    }

    pub fn index(&self, ring: usize, j: usize) -> usize {
        ring * self.n_theta + j % self.n_theta
    }

    /// Attaches annotations, matching each to a ring within half a sample
    /// spacing of its parameter.
    pub fn annotate(&mut self, annotations: Vec<RingAnnotation>) {
        let ring_t = &self.ring_t;
        self.annotations = annotations
            .into_iter()
            .map(|mut a| {
                a.ring = nearest_ring(ring_t, a.t);
                a
            })
            .collect();
    }

    /// Vertex permutation induced by rotating through `k` steps of `2π/n_theta`.
    pub fn rotation_permutation(&self, k: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .map(|v| self.index(v / self.n_theta, v % self.n_theta + k))
            .collect()
    }

    pub fn to_obj_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# rings {} n_theta {}", self.rings(), self.n_theta);
        for a in &self.annotations {
            match a.ring {
                Some(r) => {
                    let _ = writeln!(out, "# ring {r} t {}: {}", sig17(a.t), a.label);
                }
                None => {
                    let _ = writeln!(out, "# t {} (no ring): {}", sig17(a.t), a.label);
                }
            }
        }
        for v in &self.vertices {
            let _ = writeln!(out, "v {} {} {}", sig17(v[0]), sig17(v[1]), sig17(v[2]));
        }
        for n in &self.normals {
            let _ = writeln!(out, "vn {} {} {}", sig17(n[0]), sig17(n[1]), sig17(n[2]));
        }
        for f in &self.faces {
            let [a, b, c] = f.map(|i| i + 1);
            let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
        }
        out
    }

    pub fn write_obj(&self, w: &mut impl io::Write) -> io::Result<()> {
        w.write_all(self.to_obj_string().as_bytes())
    }

    /// Cotangent-Laplacian mean curvature `½ Δs · ν` at an interior vertex,
    /// normalized by the mixed Voronoi area of its one-ring.
    pub fn discrete_mean_curvature(&self, v: usize) -> Result<f64> {
        let ring = v / self.n_theta;
        if ring == 0 || ring + 1 >= self.rings() {
            return Err(Error::InvalidArgument(format!("vertex {v} is on the boundary")));
        }
        let p = self.vertices[v];
        let mut lap = [0.0; 3];
        let mut area = 0.0;
        for f in self.faces.iter().filter(|f| f.contains(&v)) {
            let k = f.iter().position(|&i| i == v).unwrap_or(0);
            let (a, b) = (self.vertices[f[(k + 1) % 3]], self.vertices[f[(k + 2) % 3]]);
            let (pa, pb, ab) = (sub(a, p), sub(b, p), sub(b, a));
            let cot_p = cot(pa, pb);
            let cot_a = cot(sub(p, a), ab);
            let cot_b = cot(sub(p, b), sub(a, b));
            for c in 0..3 {
                lap[c] += cot_b * pa[c] + cot_a * pb[c];
            }
            let tri = 0.5 * norm(cross(pa, pb));
            area += if cot_p < 0.0 {
                tri / 2.0
            } else if cot_a < 0.0 || cot_b < 0.0 {
                tri / 4.0
            } else {
                (dot(pa, pa) * cot_b + dot(pb, pb) * cot_a) / 8.0
            };
        }
        let nu = self.normals[v];
        Ok(0.5 * dot(lap, nu) / (2.0 * area))
    }
}

fn nearest_ring(ring_t: &[f64], t: f64) -> Option<usize> {
    let i = ring_t.partition_point(|&r| r < t);
    let candidates = [i.checked_sub(1), (i < ring_t.len()).then_some(i)];
    let best = candidates
        .into_iter()
        .flatten()
        .min_by(|&a, &b| (ring_t[a] - t).abs().total_cmp(&(ring_t[b] - t).abs()))?;
    let gap = |k: usize| -> f64 {
        let lo = if k > 0 { ring_t[k] - ring_t[k - 1] } else { f64::INFINITY };
        let hi = ring_t.get(k + 1).map_or(f64::INFINITY, |n| n - ring_t[k]);
        lo.min(hi)
    };
    ((ring_t[best] - t).abs() <= 0.5 * gap(best) || ring_t.len() == 1).then_some(best)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Cotangent of the angle between `a` and `b`.
fn cot(a: [f64; 3], b: [f64; 3]) -> f64 {
    dot(a, b) / norm(cross(a, b))
}

/// Largest `|m − ½(l cos φ / y − φ′)|` over the samples at which `|l|`
/// exceeds `√zero_tol` and the difference stencil fits in the domain.
/// `φ′` comes from a five-point central difference of the profile.
pub fn mean_curvature_audit(profile: &Profile, samples: &[CurveSample]) -> Result<f64> {
    let spec = profile.spec();
    let cutoff = profile.tolerances().zero.sqrt();
    let residuals = samples
        .par_iter()
        .filter(|s| s.l.abs() > cutoff)
        .map(|s| -> Result<Option<f64>> {
            let m = spec.m.eval(s.t)?;
            let h = AUDIT_STEP / (s.l.abs() / s.y + 2.0 * m.abs()).max(1.0);
            if s.t - 2.0 * h < spec.t_min || s.t + 2.0 * h > spec.t_max {
                return Ok(None);
            }
            let angle = |k: f64| -> Result<f64> {
                Ok(wrap_angle(profile.point(s.t + k * h)?.phi - s.phi))
            };
            let dphi = (angle(-2.0)? - 8.0 * angle(-1.0)? + 8.0 * angle(1.0)? - angle(2.0)?)
                / (12.0 * h);
            Ok(Some((m - 0.5 * (s.l * s.tangent[0] / s.y - dphi)).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(residuals.into_iter().flatten().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProblemSpec;
    use crate::singularity::classify;
    use crate::Tolerances;

    fn cylinder() -> Profile {
        Profile::new(ProblemSpec::parse("1", "1", 0.5, 0.0, 0.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn counts_and_seam() {
        let p = cylinder();
        let mesh = revolve(&p.trace(2).unwrap(), 3).unwrap();
        assert_eq!(mesh.faces.len(), 6);
        assert_eq!(mesh.vertices.len(), 6);
        assert!(mesh.faces.iter().flatten().all(|&i| i < 6));
        let mesh = revolve(&p.trace(11).unwrap(), 16).unwrap();
        assert_eq!(mesh.faces.len(), 2 * 10 * 16);
        for v in &mesh.vertices {
            assert!((v[1].hypot(v[2]) - 0.5).abs() < 1e-12);
        }
        assert!(revolve(&p.trace(2).unwrap(), 2).is_err());
    }

    #[test]
    fn theta_zero_ring_is_the_profile() {
        let p = cylinder();
        let samples = p.trace(5).unwrap();
        let mesh = revolve(&samples, 7).unwrap();
        for (i, s) in samples.iter().enumerate() {
            assert_eq!(mesh.vertices[mesh.index(i, 0)], [s.x, s.y, 0.0]);
        }
    }

    #[test]
    fn winding_follows_the_normal() {
        let p = cylinder();
        let mesh = revolve(&p.trace(9).unwrap(), 12).unwrap();
        for f in &mesh.faces {
            let [a, b, c] = f.map(|i| mesh.vertices[i]);
            let n = cross(sub(b, a), sub(c, a));
            assert!(dot(n, mesh.normals[f[0]]) > 0.0);
        }
    }

    #[test]
    fn cylinder_has_unit_mean_curvature() {
        let p = cylinder();
        let samples = p.trace(101).unwrap();
        assert!(mean_curvature_audit(&p, &samples).unwrap() < 1e-8);
        let mesh = revolve(&samples, 64).unwrap();
        let v = mesh.index(50, 3);
        let h = mesh.discrete_mean_curvature(v).unwrap();
        assert!((h - 1.0).abs() < 1e-2, "{h}");
    }

    #[test]
    fn rotation_is_an_index_permutation() {
        let p = Profile::new(ProblemSpec::parse("t", "1", 0.1, 0.1, -1.0, 1.0).unwrap()).unwrap();
        let mesh = revolve(&p.trace(7).unwrap(), 9).unwrap();
        let perm = mesh.rotation_permutation(1);
        let mut seen = perm.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..mesh.vertices.len()).collect::<Vec<_>>());
        let (s, c) = theta(1, 9).sin_cos();
        for (v, &w) in perm.iter().enumerate() {
            let [x, y, z] = mesh.vertices[v];
            let r = [x, c * y - s * z, s * y + c * z];
            for k in 0..3 {
                assert!((r[k] - mesh.vertices[w][k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn annotations_land_on_rings() {
        let spec = ProblemSpec::parse("t^2", "1", 0.1, 0.1, -1.0, 1.0).unwrap();
        let report = classify(&spec, 0.0, &Tolerances::default()).unwrap();
        let labels = label_surface_singularities(&[report]);
        assert_eq!(labels[0].label, "4/3-cuspidal edge");
        let p = Profile::new(spec).unwrap();
        let mut mesh = revolve(&p.trace(21).unwrap(), 5).unwrap();
        mesh.annotate(labels);
        assert_eq!(mesh.annotations[0].ring, Some(10));
        assert!(mesh.to_obj_string().contains("# ring 10 t 0.0000000000000000e0: 4/3-cuspidal edge"));
    }

    #[test]
    fn obj_layout() {
        let p = cylinder();
        let mesh = revolve(&p.trace(2).unwrap(), 3).unwrap();
        let text = mesh.to_obj_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.iter().filter(|l| l.starts_with("v ")).count(), 6);
        assert_eq!(lines.iter().filter(|l| l.starts_with("vn ")).count(), 6);
        assert!(lines.contains(&"f 1//1 4//4 5//5"));
        assert_eq!(text, mesh.to_obj_string());
    }
}
