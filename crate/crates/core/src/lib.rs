//! Discrete curvature-constrained paths.
//!
//! A polygonal path is feasible for parameters `(theta, ell)` when it never
//! turns by more than `theta`, has no two adjacent edges shorter than `ell`,
//! and the two neighbours of every short non-inflection edge differ in
//! direction by at most `theta`. This crate validates such paths, splits them
//! into discrete circular arcs and bridges, shortens them by local moves,
//! plans shortest paths between configurations, and compares them with the
//! classical smooth Dubins paths they converge to.

pub mod cli;
pub mod document;
pub mod error;
pub mod geometry;
pub mod path;
pub mod planner;
pub mod rewrite;
pub mod sample;
pub mod smooth;
pub mod svg;
pub mod typing;

pub use error::{Error, Result};
pub use geometry::{Point2, Vec2};
pub use path::{Configuration, DiscretePath, EdgeClass, Params, Violation, ViolationKind};
