//! Solid-angle and Riesz-potential fields of planar polygonal domains.
//!
//! A domain `Ω` is a disjoint union of simple polygons. For a height `h > 0`
//! the solid angle it subtends at `(x, h)` is
//! `A(x) = ∫_Ω h / (|y - x|² + h²)^{3/2} dy`; its maximizers are the
//! solid-angle centers. The crate evaluates `A`, its derivatives and the
//! Riesz potentials `∫_Ω |y - x|^{α-2} dy`, builds the minimal unfolded
//! region by reflection scans, and locates centers by multi-start ascent.

pub mod centers;
pub mod error;
pub mod fields;
pub mod fixtures;
pub mod geometry;
pub mod quadrature;
pub mod unfolded;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{FieldParams, FieldSample, RieszParams, SolidAngleParams, Sym2, Vec2};
pub use geometry::{ConvexPolygon, Direction, Point2, PolygonDomain, Side, SimplePolygon};
