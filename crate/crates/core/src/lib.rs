//! Exact computation on finite 2D CAT(0) polyhedral complexes.

pub mod complex_core;
pub mod error;
pub mod fixtures;
pub mod geom;
pub mod hull_lp;
pub mod io;
pub mod simplex;
pub mod single_vertex;
pub mod spm;
pub mod treespace;

pub use complex_core::{Location, PolyComplex2D};
pub use error::{Error, Result};
