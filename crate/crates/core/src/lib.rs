//! Holomorphic two-spheres of constant curvature in complex Grassmannians `G(2, n+2)`.

pub mod curve;
pub mod exterior;
pub mod family;
pub mod polysurface;
pub mod scalars;
pub mod solver;
pub mod veronese;

/// Serializes a value through its `Display` form.
pub fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}
