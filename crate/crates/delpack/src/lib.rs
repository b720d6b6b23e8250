//! Exact rational geometry for Delzant polygons: validation, simplex
//! packings with certified density bounds, and a symmetric-difference
//! metric on the space of polygons.
//!
//! All arithmetic is exact (arbitrary-precision rationals). No floats
//! enter any geometric predicate or any reported quantity; decimal
//! output, where a frontend wants it, is a presentation concern.
//!
//! The crate is organized in four layers, each depending only on the
//! ones before it:
//!
//! * [`exactgeom`]: rational points and vectors, convex polygons,
//!   exact area, intersection and symmetric difference, primitive
//!   integer directions.
//! * [`delzant`]: the Delzant condition (unimodular corners), edge
//!   data, generators, lattice-affine maps, corner chops, and the
//!   support-form view with offset perturbations.
//! * [`packing`]: admissible corner simplices, packing densities, and
//!   the optimizer that produces certified or bracketed density
//!   bounds.
//! * [`moduli`]: the symmetric-difference distance, all-corner chops,
//!   continuity and discontinuity probes, and a classifier for which
//!   corners realize the optimal density.

pub mod delzant;
pub mod exactgeom;
pub mod moduli;
pub mod packing;

pub use delzant::{AglMap, Corner, DelzantError, DelzantPolygon, Edge, SupportForm, Violation, ViolationReport};
pub use exactgeom::{ConvexPolygon, GeomError, IntVec, Point, RatVec, Rational};
pub use moduli::{ChopWitness, Classification, ClassifierReport, ProbeReport, ProbeStep, ProbeVerdict, WitnessStep};
pub use packing::{AdmissibleSimplex, DensityBounds, Packing, PackingError};
