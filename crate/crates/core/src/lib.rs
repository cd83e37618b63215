//! Curvature and isothermal coordinates of the space of equilibrium states of
//! two-variable thermodynamic fundamental relations.
//!
//! The crate parses a fundamental relation `Phi(q1, q2)`, evaluates exact
//! partial derivatives through truncated Taylor arithmetic, builds the Hessian
//! metric and the conformally rescaled natural metric `Phi_{,ij} / (q2 Phi_{,2})`,
//! and computes their Gaussian curvature along two independent routes.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod grid;
pub mod isothermal;
pub mod output;
pub mod quadrature;
pub mod taylor;
pub mod thermo;

pub use error::{Error, Result};
pub use expr::{parse, Expr, Jet4, Point2, Var};
pub use geometry::{
    curvature_scan, einstein_residual, einstein_scan, gaussian_curvature, CurvatureReport,
    EinsteinResidual, EinsteinSummary, MetricKind, MetricSample,
};
pub use grid::{Axis, Grid2, Spacing};
pub use isothermal::{
    integrate_coords, loglinear_coords, pullback_residuals, radius_squared, separable_coords,
    tabulate, CoordField, CoordRow, IntegrateOptions, PullbackResiduals, SampledField,
};
pub use thermo::{classify, radius_profile, ChaplyginFamily, Classification, RadiusProfile};
