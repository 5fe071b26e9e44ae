//! Space and frequency localization on graphs.
//!
//! Given a graph, a spatial filter `f` and a spectral filter `g_hat`, this
//! crate builds the localization operators `M_f` and `C_g`, computes the
//! admissible region of expectation pairs `(m, c)` (the joint numerical range
//! of the two operators) through inner and outer polygons, evaluates the
//! closed-form corner bounds, and bounds truncated eigenbasis expansions.
//!
//! ```
//! use graph_uncertainty::{experiment, operators, uncertainty};
//!
//! let fx = experiment::bipartite4().unwrap();
//! let bundle = operators::build_bundle(&fx.decomp, &fx.pair).unwrap();
//! let range = uncertainty::adaptive_sandwich(&bundle, 1e-6, 64).unwrap();
//! assert!((range.outer.area() - 1.0).abs() < 1e-9);
//! ```

pub mod approximation;
pub mod error;
pub mod experiment;
pub mod export;
pub mod filters;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod operators;
pub mod spectral;
pub mod uncertainty;

pub use error::{Error, ErrorClass, Result};
pub use filters::{FilterPair, PairKind, SpatialFilter, SpectralFilter};
pub use graph::{Graph, PointCloud};
pub use operators::{build_bundle, dual_bundle, LocalizationPoint, OperatorBundle};
pub use spectral::EigenDecomposition;
