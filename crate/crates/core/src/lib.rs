//! Outer weight profiles, Legendre transforms and the asymptotics of Fourier
//! and Laplace transforms in weighted Hardy spaces, each paired with an
//! independent quadrature oracle.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod conditions;
pub mod error;
pub mod laplace;
pub mod legendre;
pub mod logmag;
pub mod poisson;
pub mod quad;
pub mod special;
pub mod spline;
pub mod transforms;
pub mod weights;

pub use applications::{
    depth_of_zero, ls_majorant, poly_distance, taylor_bound, DepthReport, LsReport,
};
pub use conditions::{check_conditions, ConditionId, ConditionReport, Verdict};
pub use error::{Error, Result};
pub use laplace::{laplace_asymptotic, laplace_oracle, tail_bound, window_eta, LaplaceResult};
pub use legendre::{legendre_point, legendre_point_star, solve_ys, LegendrePoint, SolverConfig};
pub use logmag::LogMagnitude;
pub use poisson::QProfile;
pub use quad::{QuadConfig, TailStrategy};
pub use transforms::{fourier_inverse_oracle, rho_bounds, ComplexLogW, FourierResult};
pub use weights::{
    eval_weight, lower_legendre_phi, ostrowski_phi, DCSequence, Family, LogWeight, Majorant,
    OstrowskiValue,
};
