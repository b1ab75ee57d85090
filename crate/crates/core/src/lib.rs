//! Order types of point tuples and the cost of moving between them.
//!
//! Everything combinatorial is computed with exact rationals: orientation
//! signs, determinant pencils of linear motions, Sturm root counts and the
//! cloud blow-up conditions. Only the rotation experiments sample in
//! floating point, and they convert each sampled rotation to an exact
//! rational matrix before any sign is taken.

pub mod aspect;
pub mod blowup;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod motion;
pub mod pencil;
pub mod poly;
pub mod rotation;
pub mod scalar;
pub mod sturm;
pub mod subsets;

pub use aspect::{aspect_ratio, non_elongated, theorem3_experiment, AspectRatio, ExperimentConfig, ExperimentReport};
pub use blowup::{build_blowup, lower_bound_certificate, verify_blowup, BlowupResult, Certificate, CloudSpec};
pub use error::{Error, Result};
pub use geometry::{
    hamming, is_general_position, mirror, orient, order_type, robust_radius, OrderType,
    OrientationSign, Point, PointTuple, RobustRadius,
};
pub use motion::{
    discretized_cost, linear_cost, perturb_general, plan_even_d, plan_odd_d, plan_theorem1, scale_tuple,
    MotionPlan, MotionSegment, SegmentKind, SignVector,
};
pub use pencil::{build_pencil, coefficient_profile, verify_lemma_rj, CoefficientProfile, PencilPolynomial};
pub use poly::RationalPolynomial;
pub use rotation::{
    estimate_measure, is_good, pick_rho, regular_simplex, simplex_motion_constant, GoodnessSample, MeasureEstimate, Rotation,
};
pub use scalar::Scalar;
pub use sturm::{sign_change_count, sturm_distinct_roots, Bound, Interval};
