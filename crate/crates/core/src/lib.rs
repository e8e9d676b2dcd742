//! Singular surfaces of revolution with prescribed mean curvature.
//!
//! Given a speed function `l(t)` and the smooth product `m(t) = H(t)·l(t)`,
//! the profile curve `γ = (x, y)` of a surface of revolution whose mean
//! curvature is `H` is assembled from three cumulative integrals
//!
//! ```text
//! η(t) = ∫₀ᵗ 2m,   F(t) = ∫₀ᵗ l sin η,   G(t) = ∫₀ᵗ l cos η
//! y = √((F − c₁)² + (G − c₂)²),   x′ = (F′(G − c₂) − G′(F − c₁)) / y
//! ```
//!
//! Zeros of `l` are the singular points of `γ`; [`singularity`] classifies
//! them as 3/2-, 5/2-, 4/3- or 5/3-cusps, [`periodicity`] decides whether
//! the profile repeats under a declared period, and [`surface`] revolves the
//! profile into a mesh.

pub mod expr;
pub mod numfmt;
pub mod periodicity;
pub mod profile;
pub mod quad;
pub mod singularity;
pub mod surface;

mod error;

pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use periodicity::{check as check_periodicity, periodic_constants, Branch, PeriodicityReport};
pub use profile::{CurveSample, ProblemSpec, Profile, Tolerances};
pub use singularity::{classify, cross_check, find_singular_points, CuspClass, SingularPointReport};
pub use surface::{revolve, Mesh};
