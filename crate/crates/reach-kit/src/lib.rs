//! Numerical algebraic geometry toolkit.
//!
//! Solves square polynomial systems over the complex numbers by total-degree
//! homotopy continuation, and builds on that solver to
//!
//! * sample real point clouds from algebraic varieties (hyperplane slicing and
//!   nearest-point projection),
//! * compute bottlenecks and the narrowest bottleneck width of a variety,
//! * compute curvature extremes of implicit planar curves,
//! * combine both into the reach of the variety.
//!
//! All coefficients are double-precision complex numbers; there is no
//! arbitrary-precision fallback. Every randomized computation is driven by a
//! single 64-bit seed and produces identical output regardless of the number
//! of worker threads.

pub mod eval;
pub mod linalg;
pub mod plot;
pub mod poly;
pub mod reach;
pub mod rng;
pub mod sampler;
pub mod tracker;

pub use poly::{parse_system, Monomial, ParseError, PolyError, Polynomial, PolySystem};
pub use reach::{
    bottlenecks, curvature_system, max_curvature, narrowest_bottleneck, reach, BottleneckPair,
    CurvaturePoint, ReachError, ReachOptions, ReachReport,
};
pub use sampler::{
    build_cyclooctane, nearest_point, slice_sample, CyclooctaneModel, PointCloud, PointProvenance,
    SampleError, SliceSpec,
};
pub use tracker::{
    make_start, newton_refine, solve_all, PathResult, PathStatus, Solution, SolutionSet,
    SolveError, StartSystem, TrackerOptions,
};

/// Complex scalar used throughout: IEEE-754 double precision components.
pub type C64 = num_complex::Complex<f64>;
